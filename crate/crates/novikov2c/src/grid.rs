//! Periodic spatial discretization of the truncated line and the
//! Fourier-side operators built on it: spectral differentiation, the
//! Helmholtz inverse (1 - d²/dx²)⁻¹, the Green-kernel convolutions
//! P∗ and ∂xP∗, and dealiased pointwise products.
//!
//! The domain is [-L, L) with n uniformly spaced points and wavenumbers
//! ξ_j = πj/L in standard FFT ordering. Products of up to three fields
//! are computed on a zero-padded grid of 2n points, which removes all
//! aliasing from cubic terms.

use std::sync::Arc;

use ndarray::Array1;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Shared handle to an immutable grid.
pub type GridRef = Arc<SpectralGrid>;

/// Periodic grid on [-L, L) together with its FFT plans and multiplier tables.
pub struct SpectralGrid {
    n: usize,
    half_length: f64,
    points: Array1<f64>,
    wavenumbers: Array1<f64>,
    helmholtz_mult: Array1<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    fwd_pad: Arc<dyn Fft<f64>>,
    inv_pad: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("half_length", &self.half_length)
            .finish()
    }
}

impl SpectralGrid {
    /// Build a grid with `n_modes` points on [-half_length, half_length).
    /// `n_modes` must be even and at least 8.
    pub fn new(n_modes: usize, half_length: f64) -> Result<GridRef> {
        if n_modes < 8 || n_modes % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "n_modes must be even and >= 8, got {n_modes}"
            )));
        }
        if !(half_length > 0.0) || !half_length.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "half_length must be positive and finite, got {half_length}"
            )));
        }
        let n = n_modes;
        let dx = 2.0 * half_length / n as f64;
        let points = Array1::from_iter((0..n).map(|j| -half_length + j as f64 * dx));
        let wavenumbers = Array1::from_iter((0..n).map(|j| {
            let m = if j <= n / 2 { j as i64 } else { j as i64 - n as i64 };
            std::f64::consts::PI * m as f64 / half_length
        }));
        let helmholtz_mult = wavenumbers.mapv(|xi| 1.0 / (1.0 + xi * xi));

        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let fwd_pad = planner.plan_fft_forward(2 * n);
        let inv_pad = planner.plan_fft_inverse(2 * n);

        Ok(Arc::new(SpectralGrid {
            n,
            half_length,
            points,
            wavenumbers,
            helmholtz_mult,
            fwd,
            inv,
            fwd_pad,
            inv_pad,
        }))
    }

    /// Test hook: grid whose Helmholtz multiplier table is perturbed.
    #[doc(hidden)]
    pub fn new_with_corrupted_helmholtz(n_modes: usize, half_length: f64) -> Result<GridRef> {
        let grid = Self::new(n_modes, half_length)?;
        let mut g = Arc::try_unwrap(grid).expect("fresh grid has one owner");
        g.helmholtz_mult *= 1.0 + 1e-3;
        Ok(Arc::new(g))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    pub fn points(&self) -> &Array1<f64> {
        &self.points
    }

    pub fn wavenumbers(&self) -> &Array1<f64> {
        &self.wavenumbers
    }

    pub fn same_grid(&self, other: &SpectralGrid) -> bool {
        self.n == other.n && self.half_length == other.half_length
    }

    /// Unnormalized forward transform of real samples.
    pub fn forward(&self, values: &Array1<f64>) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    /// Inverse transform back to real samples (normalizes by n).
    pub fn inverse(&self, mut spectrum: Vec<Complex64>) -> Array1<f64> {
        self.inv.process(&mut spectrum);
        let scale = 1.0 / self.n as f64;
        Array1::from_iter(spectrum.iter().map(|c| c.re * scale))
    }
}

/// Real samples of a function on a [`SpectralGrid`].
#[derive(Debug, Clone)]
pub struct SpectralField {
    values: Array1<f64>,
    grid: GridRef,
}

impl SpectralField {
    pub fn from_values(grid: GridRef, values: Array1<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "field length {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(SpectralField { values, grid })
    }

    pub fn from_fn(grid: &GridRef, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().mapv(f);
        SpectralField {
            values,
            grid: grid.clone(),
        }
    }

    pub fn zeros(grid: &GridRef) -> Self {
        SpectralField {
            values: Array1::zeros(grid.len()),
            grid: grid.clone(),
        }
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn grid(&self) -> &GridRef {
        &self.grid
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self, context: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::corrupt(context))
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, &v| m.max(v.abs()))
    }

    fn multiplier_op(&self, mult: impl Fn(usize, f64) -> Complex64) -> SpectralField {
        let mut spectrum = self.grid.forward(&self.values);
        for (j, c) in spectrum.iter_mut().enumerate() {
            *c *= mult(j, self.grid.wavenumbers[j]);
        }
        SpectralField {
            values: self.grid.inverse(spectrum),
            grid: self.grid.clone(),
        }
    }

    /// Spectral derivative: multiplier iξ with the Nyquist mode zeroed.
    pub fn derivative(&self) -> Result<SpectralField> {
        self.ensure_finite("derivative input")?;
        let nyquist = self.grid.n / 2;
        Ok(self.multiplier_op(|j, xi| {
            if j == nyquist {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, xi)
            }
        }))
    }

    /// Helmholtz inverse: solves (1 - d²/dx²) g = f via multiplier 1/(1+ξ²).
    pub fn helmholtz_inverse(&self) -> Result<SpectralField> {
        self.ensure_finite("helmholtz_inverse input")?;
        let mult = &self.grid.helmholtz_mult;
        Ok(self.multiplier_op(|j, _| Complex64::new(mult[j], 0.0)))
    }

    /// Forward Helmholtz operator: f - f_xx, multiplier 1 + ξ².
    pub fn helmholtz_apply(&self) -> Result<SpectralField> {
        self.ensure_finite("helmholtz_apply input")?;
        Ok(self.multiplier_op(|_, xi| Complex64::new(1.0 + xi * xi, 0.0)))
    }

    /// Convolution with the Green kernel P of (1 - d²/dx²)⁻¹, the
    /// periodization of ½e^{-|x|}. On the discrete trigonometric space
    /// this is the same operator as [`helmholtz_inverse`].
    ///
    /// [`helmholtz_inverse`]: SpectralField::helmholtz_inverse
    pub fn green_convolve(&self) -> Result<SpectralField> {
        self.helmholtz_inverse()
    }

    /// Convolution with ∂xP: fused multiplier iξ/(1+ξ²), Nyquist zeroed.
    pub fn green_convolve_dx(&self) -> Result<SpectralField> {
        self.ensure_finite("green_convolve_dx input")?;
        let nyquist = self.grid.n / 2;
        let mult = &self.grid.helmholtz_mult;
        Ok(self.multiplier_op(|j, xi| {
            if j == nyquist {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, xi * mult[j])
            }
        }))
    }

    /// Samples of this field on the zero-padded 2n grid.
    fn padded_values(&self) -> Array1<f64> {
        let n = self.grid.n;
        let spectrum = self.grid.forward(&self.values);
        let mut padded = vec![Complex64::new(0.0, 0.0); 2 * n];
        for (j, &c) in spectrum.iter().enumerate() {
            if j < n / 2 {
                padded[j] = c;
            } else if j == n / 2 {
                // split the Nyquist coefficient between +n/2 and -n/2
                padded[n / 2] = 0.5 * c;
                padded[2 * n - n / 2] = 0.5 * c;
            } else {
                padded[j + n] = c;
            }
        }
        let mut buf = padded;
        self.grid.inv_pad.process(&mut buf);
        let scale = 1.0 / n as f64;
        Array1::from_iter(buf.iter().map(|c| c.re * scale))
    }
}

impl SpectralGrid {
    /// Truncate samples on the padded 2n grid back to an n-point field.
    fn truncate_padded(self: &Arc<Self>, padded: Array1<f64>) -> SpectralField {
        let n = self.n;
        let mut buf: Vec<Complex64> = padded.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd_pad.process(&mut buf);
        let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
        for (j, slot) in spectrum.iter_mut().enumerate() {
            if j < n / 2 {
                *slot = buf[j];
            } else if j == n / 2 {
                *slot = buf[n / 2] + buf[2 * n - n / 2];
            } else {
                *slot = buf[j + n];
            }
        }
        // forward on 2n points over-counts by 2 relative to the n-point convention
        for c in spectrum.iter_mut() {
            *c *= 0.5;
        }
        SpectralField {
            values: self.inverse(spectrum),
            grid: self.clone(),
        }
    }

    /// Pointwise product of 2 or 3 fields on the zero-padded grid;
    /// alias-free for products whose bandwidth fits the padded grid.
    pub fn dealiased_product(self: &Arc<Self>, fields: &[&SpectralField]) -> Result<SpectralField> {
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::InvalidParameter(format!(
                "dealiased_product takes 2 or 3 fields, got {}",
                fields.len()
            )));
        }
        for f in fields {
            if !f.grid.same_grid(self) {
                return Err(Error::GridMismatch);
            }
        }
        let mut product = fields[0].padded_values();
        for f in &fields[1..] {
            product = product * f.padded_values();
        }
        Ok(self.truncate_padded(product))
    }

    /// Apply a pointwise map on the zero-padded grid and truncate back;
    /// alias-free for maps of polynomial degree up to three.
    pub fn dealiased_map(
        self: &Arc<Self>,
        field: &SpectralField,
        map: impl Fn(f64) -> f64,
    ) -> Result<SpectralField> {
        if !field.grid.same_grid(self) {
            return Err(Error::GridMismatch);
        }
        let mapped = field.padded_values().mapv(map);
        Ok(self.truncate_padded(mapped))
    }
}

macro_rules! field_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait<&SpectralField> for &SpectralField {
            type Output = SpectralField;
            fn $method(self, rhs: &SpectralField) -> SpectralField {
                assert!(self.grid.same_grid(&rhs.grid), "grid mismatch");
                SpectralField {
                    values: &self.values $op &rhs.values,
                    grid: self.grid.clone(),
                }
            }
        }
    };
}

field_binop!(Add, add, +);
field_binop!(Sub, sub, -);

impl std::ops::Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        SpectralField {
            values: &self.values * rhs,
            grid: self.grid.clone(),
        }
    }
}

/// Trigonometric interpolant of a field, exact on the discrete band.
/// Used for off-grid evaluation along characteristics.
#[derive(Debug, Clone)]
pub struct Interpolant {
    coeffs: Vec<Complex64>,
    n: usize,
    half_length: f64,
}

impl Interpolant {
    pub fn new(field: &SpectralField) -> Self {
        let grid = field.grid();
        Interpolant {
            coeffs: grid.forward(field.values()),
            n: grid.len(),
            half_length: grid.half_length(),
        }
    }

    /// Evaluate at an arbitrary point (periodic extension).
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.n;
        let theta = std::f64::consts::PI * (x + self.half_length) / self.half_length;
        let mut acc = self.coeffs[0].re;
        for m in 1..n / 2 {
            let (sin, cos) = (m as f64 * theta).sin_cos();
            acc += 2.0 * (self.coeffs[m].re * cos - self.coeffs[m].im * sin);
        }
        acc += self.coeffs[n / 2].re * (n as f64 / 2.0 * theta).cos();
        acc / n as f64
    }
}
