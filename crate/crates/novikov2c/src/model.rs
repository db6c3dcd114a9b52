//! The model instance (k, λ, g) and the right-hand side of the nonlocal
//! reformulation
//!
//!   u_t + k u² u_x = -(k/2) Λ⁻²(u_x³ - u_x ρ²)
//!                    - ∂x Λ⁻²(g(u) + (3k/2) u u_x² - (k/3) u³ - (k/2) u ρ²)
//!                    - λ u,
//!   ρ_t + k u² ρ_x = -k ρ u u_x,
//!
//! with Λ⁻² = (1 - ∂x²)⁻¹. Every product is dealiased; u_x and ρ_x are
//! spectral.

use crate::error::{Error, Result};
use crate::grid::SpectralField;

/// Model coefficients: cubic-interaction constant k, dissipation rate λ,
/// and the polynomial g(u) = Σ_{m≥1} g_m u^m (zero constant term by
/// construction: `g_coeffs[i]` multiplies u^{i+1}).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    k: f64,
    lambda: f64,
    g_coeffs: Vec<f64>,
}

impl ModelParams {
    pub fn new(k: f64, lambda: f64, g_coeffs: Vec<f64>) -> Result<Self> {
        if k == 0.0 || !k.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "k must be nonzero and finite, got {k}"
            )));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be nonnegative and finite, got {lambda}"
            )));
        }
        if g_coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "g_coeffs must be finite".to_string(),
            ));
        }
        Ok(ModelParams { k, lambda, g_coeffs })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn g_coeffs(&self) -> &[f64] {
        &self.g_coeffs
    }

    /// g evaluated at a scalar, Horner form with no constant term.
    pub fn g_scalar(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.g_coeffs.iter().rev() {
            acc = (acc + c) * u;
        }
        acc
    }

    /// Test hook: same parameters with a shifted λ, for fault injection in
    /// the verification suite.
    #[doc(hidden)]
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        ModelParams::new(self.k, lambda, self.g_coeffs.clone())
    }
}

/// The state (u, ρ) at one instant.
#[derive(Debug, Clone)]
pub struct FieldPair {
    pub u: SpectralField,
    pub rho: SpectralField,
    pub time: f64,
}

impl FieldPair {
    pub fn new(u: SpectralField, rho: SpectralField, time: f64) -> Result<Self> {
        if !u.grid().same_grid(rho.grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(FieldPair { u, rho, time })
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.rho.is_finite()
    }
}

/// How the ρ²-coupled terms of the u-equation are grouped. The two
/// groupings are algebraically identical; both are kept so the grouping
/// can be tested against the conservation oracles rather than assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TermGrouping {
    /// The reformulated system as integrated: -(k/2)Λ⁻²(u_x³ - u_x ρ²) with
    /// the -(k/2)uρ² inside the ∂xΛ⁻² group.
    #[default]
    Reformulation,
    /// The split used in the well-posedness energy estimates: the ρ-free
    /// part f₁ plus f₂ = (k/2)Λ⁻²(u_x ρ²) + (k/2)∂xΛ⁻²(u ρ²).
    EnergyEstimateSplit,
}

/// Which realization of Λ⁻² the evaluator routes through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SmoothingRoute {
    HelmholtzMultiplier,
    GreenConvolution,
}

/// g applied pointwise to a field, dealiased.
pub fn eval_g(params: &ModelParams, u: &SpectralField) -> Result<SpectralField> {
    u.ensure_finite("eval_g input")?;
    if params.g_coeffs.is_empty() {
        return Ok(SpectralField::zeros(u.grid()));
    }
    u.grid().dealiased_map(u, |v| params.g_scalar(v))
}

/// Momentum density y = u - u_xx.
pub fn momentum_density(state: &FieldPair) -> Result<SpectralField> {
    state.u.helmholtz_apply()
}

fn rhs_inner(
    params: &ModelParams,
    state: &FieldPair,
    grouping: TermGrouping,
    route: SmoothingRoute,
) -> Result<(SpectralField, SpectralField)> {
    if !state.is_finite() {
        return Err(Error::corrupt("rhs input state"));
    }
    let grid = state.u.grid().clone();
    let k = params.k;
    let u = &state.u;
    let rho = &state.rho;

    let u_x = u.derivative()?;
    let rho_x = rho.derivative()?;

    let smooth = |f: &SpectralField, name: &str| -> Result<SpectralField> {
        let out = match route {
            SmoothingRoute::HelmholtzMultiplier => f.helmholtz_inverse()?,
            SmoothingRoute::GreenConvolution => f.green_convolve()?,
        };
        out.ensure_finite(name)?;
        Ok(out)
    };
    let smooth_dx = |f: &SpectralField, name: &str| -> Result<SpectralField> {
        let out = match route {
            SmoothingRoute::HelmholtzMultiplier => f.helmholtz_inverse()?.derivative()?,
            SmoothingRoute::GreenConvolution => f.green_convolve_dx()?,
        };
        out.ensure_finite(name)?;
        Ok(out)
    };

    let u2ux = grid.dealiased_product(&[u, u, &u_x])?;
    u2ux.ensure_finite("u^2 u_x")?;
    let ux3 = grid.dealiased_product(&[&u_x, &u_x, &u_x])?;
    ux3.ensure_finite("u_x^3")?;
    let ux_rho2 = grid.dealiased_product(&[&u_x, rho, rho])?;
    ux_rho2.ensure_finite("u_x rho^2")?;
    let g_u = eval_g(params, u)?;
    g_u.ensure_finite("g(u)")?;
    let u_ux2 = grid.dealiased_product(&[u, &u_x, &u_x])?;
    u_ux2.ensure_finite("u u_x^2")?;
    let u3 = grid.dealiased_product(&[u, u, u])?;
    u3.ensure_finite("u^3")?;
    let u_rho2 = grid.dealiased_product(&[u, rho, rho])?;
    u_rho2.ensure_finite("u rho^2")?;

    let du = match grouping {
        TermGrouping::Reformulation => {
            let a = &(&ux3 - &ux_rho2) * (k / 2.0);
            let b = &(&(&g_u + &(&u_ux2 * (1.5 * k))) - &(&u3 * (k / 3.0))) - &(&u_rho2 * (k / 2.0));
            let nonlocal_a = smooth(&a, "Lambda^{-2} A")?;
            let nonlocal_b = smooth_dx(&b, "dx Lambda^{-2} B")?;
            &(&(&(&u2ux * (-k)) - &nonlocal_a) - &nonlocal_b) - &(u * params.lambda)
        }
        TermGrouping::EnergyEstimateSplit => {
            let b1 = &(&g_u + &(&u_ux2 * (1.5 * k))) - &(&u3 * (k / 3.0));
            let f1 = &(&(&smooth(&(&ux3 * (k / 2.0)), "Lambda^{-2} u_x^3")? * -1.0)
                - &smooth_dx(&b1, "dx Lambda^{-2} B1")?)
                - &(u * params.lambda);
            let f2 = &smooth(&(&ux_rho2 * (k / 2.0)), "Lambda^{-2} u_x rho^2")?
                + &smooth_dx(&(&u_rho2 * (k / 2.0)), "dx Lambda^{-2} u rho^2")?;
            &(&(&u2ux * (-k)) + &f1) + &f2
        }
    };
    du.ensure_finite("du/dt")?;

    let u2rhox = grid.dealiased_product(&[u, u, &rho_x])?;
    u2rhox.ensure_finite("u^2 rho_x")?;
    let rho_u_ux = grid.dealiased_product(&[rho, u, &u_x])?;
    rho_u_ux.ensure_finite("rho u u_x")?;
    let drho = &(&u2rhox * (-k)) - &(&rho_u_ux * k);
    drho.ensure_finite("drho/dt")?;

    Ok((du, drho))
}

/// Right-hand side of the reformulated system, Λ⁻² realized as a Fourier
/// multiplier.
pub fn rhs(params: &ModelParams, state: &FieldPair) -> Result<(SpectralField, SpectralField)> {
    rhs_inner(
        params,
        state,
        TermGrouping::Reformulation,
        SmoothingRoute::HelmholtzMultiplier,
    )
}

/// Same contract as [`rhs`] with a chosen term grouping.
pub fn rhs_grouped(
    params: &ModelParams,
    state: &FieldPair,
    grouping: TermGrouping,
) -> Result<(SpectralField, SpectralField)> {
    rhs_inner(params, state, grouping, SmoothingRoute::HelmholtzMultiplier)
}

/// Right-hand side routed through the kernel convolutions P∗ and ∂xP∗.
/// Exists so the two reformulations can be asserted to agree.
pub fn rhs_convolution_form(
    params: &ModelParams,
    state: &FieldPair,
) -> Result<(SpectralField, SpectralField)> {
    rhs_inner(
        params,
        state,
        TermGrouping::Reformulation,
        SmoothingRoute::GreenConvolution,
    )
}
