//! The weight family ψ_{a,b,c,d}(x) = e^{a|x|^b} (1+|x|^c) log(e+|x|)^d,
//! its clamped truncation ψ_N, and the admissibility predicates:
//! sub-multiplicativity, moderateness, the derivative bound |ψ'| ≤ θ|ψ|,
//! and integrability of f·e^{-|x|}.
//!
//! The predicates are randomized falsifiers over finite sample sets, not
//! proofs; seeds and sample counts are pinned by callers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Parameters of one member of the weight family, with an optional
/// truncation level N. Constraints: a ≥ 0, 0 ≤ b ≤ 1, a·b < 1, θ > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    theta: f64,
    truncation_level: Option<f64>,
}

impl WeightSpec {
    pub fn new(
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        theta: f64,
        truncation_level: Option<f64>,
    ) -> Result<Self> {
        if !(a >= 0.0) {
            return Err(Error::InvalidParameter(format!("weight a must be >= 0, got {a}")));
        }
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::InvalidParameter(format!(
                "weight b must be in [0, 1], got {b}"
            )));
        }
        if a * b >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "weight must satisfy a*b < 1, got a*b = {}",
                a * b
            )));
        }
        if !(theta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "weight theta must be > 0, got {theta}"
            )));
        }
        if let Some(n) = truncation_level {
            if !(n > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "truncation level must be > 0, got {n}"
                )));
            }
        }
        Ok(WeightSpec {
            a,
            b,
            c,
            d,
            theta,
            truncation_level,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn truncation_level(&self) -> Option<f64> {
        self.truncation_level
    }

    pub fn without_truncation(&self) -> WeightSpec {
        WeightSpec {
            truncation_level: None,
            ..self.clone()
        }
    }

    pub fn with_truncation(&self, n: f64) -> Result<WeightSpec> {
        WeightSpec::new(self.a, self.b, self.c, self.d, self.theta, Some(n))
    }

    /// ψ(x), clamped to the truncation level when one is set.
    /// For c < 0 the polynomial factor diverges at 0; |x| is floored at
    /// 1e-12 there.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let ax = x.abs();
        let poly_arg = if self.c < 0.0 { ax.max(1e-12) } else { ax };
        let v = (self.a * ax.powf(self.b)).exp()
            * (1.0 + poly_arg.powf(self.c))
            * (std::f64::consts::E + ax).ln().powf(self.d);
        if !v.is_finite() {
            return Err(Error::WeightOverflow { x });
        }
        Ok(match self.truncation_level {
            Some(n) => v.min(n),
            None => v,
        })
    }
}

fn sample_pairs(
    samples: usize,
    range: (f64, f64),
    seed: u64,
) -> impl Iterator<Item = (f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(move |_| (rng.gen_range(range.0..range.1), rng.gen_range(range.0..range.1)))
}

/// Result of the sub-multiplicativity falsifier f(x+y) ≤ f(x)f(y).
#[derive(Debug, Clone)]
pub struct SubmultReport {
    pub samples: usize,
    pub worst_ratio: f64,
    pub worst_pair: (f64, f64),
    pub passed: bool,
}

pub fn check_submultiplicative(
    f: &WeightSpec,
    samples: usize,
    range: (f64, f64),
    seed: u64,
) -> Result<SubmultReport> {
    let mut worst_ratio = 0.0_f64;
    let mut worst_pair = (0.0, 0.0);
    for (x, y) in sample_pairs(samples, range, seed) {
        let ratio = f.eval(x + y)? / (f.eval(x)? * f.eval(y)?);
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst_pair = (x, y);
        }
    }
    Ok(SubmultReport {
        samples,
        worst_ratio,
        worst_pair,
        passed: worst_ratio <= 1.0 + 1e-9,
    })
}

/// Result of the moderateness check ψ(x+y) ≤ C₀ f(x) ψ(y), with the
/// fitted C₀ re-estimated at twice the sample count for stability.
#[derive(Debug, Clone)]
pub struct ModerateReport {
    pub c0: f64,
    pub c0_doubled: f64,
    pub stable: bool,
}

fn fitted_c0(
    psi: &WeightSpec,
    f: &WeightSpec,
    samples: usize,
    range: (f64, f64),
    seed: u64,
) -> Result<f64> {
    let mut c0 = 0.0_f64;
    for (x, y) in sample_pairs(samples, range, seed) {
        c0 = c0.max(psi.eval(x + y)? / (f.eval(x)? * psi.eval(y)?));
    }
    Ok(c0)
}

pub fn check_moderate(
    psi: &WeightSpec,
    f: &WeightSpec,
    samples: usize,
    range: (f64, f64),
    seed: u64,
) -> Result<ModerateReport> {
    let c0 = fitted_c0(psi, f, samples, range, seed)?;
    let c0_doubled = fitted_c0(psi, f, samples * 2, range, seed)?;
    let stable = c0.is_finite()
        && c0_doubled.is_finite()
        && (c0_doubled - c0).abs() <= 0.1 * c0.max(f64::MIN_POSITIVE);
    Ok(ModerateReport {
        c0,
        c0_doubled,
        stable,
    })
}

/// Result of the admissibility check: the minimal feasible θ from a dense
/// derivative scan, and constructive integrability of f·e^{-|x|} for the
/// dominating sub-multiplicative family member f.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub min_theta: f64,
    pub declared_theta_feasible: bool,
    pub integrable: bool,
    pub integral: f64,
    pub integration_radius: f64,
}

pub fn check_admissible(w: &WeightSpec) -> Result<AdmissibilityReport> {
    // (i) minimal theta with |psi'| <= theta |psi| a.e., by central
    // finite differences on a dense scan; the kink at 0 is excluded
    // (admissibility is an a.e. statement).
    let h = 1e-6;
    let mut min_theta = 0.0_f64;
    let scan_max = 30.0;
    let steps = 60_000;
    for i in 0..=steps {
        let x = -scan_max + i as f64 * (2.0 * scan_max / steps as f64);
        if x.abs() < 2.0 * h {
            continue;
        }
        let dpsi = (w.eval(x + h)? - w.eval(x - h)?) / (2.0 * h);
        let psi = w.eval(x)?;
        if psi > 0.0 {
            min_theta = min_theta.max(dpsi.abs() / psi);
        }
    }

    // (ii) integrability of f e^{-|x|} with f the untruncated family
    // member itself; a*b < 1 makes the tail e^{a x^b - x} summable.
    let f = w.without_truncation();
    let mut radius = 20.0_f64;
    let mut integral;
    loop {
        let n = 200_000;
        let dx = 2.0 * radius / n as f64;
        integral = (0..n)
            .map(|i| {
                let x = -radius + (i as f64 + 0.5) * dx;
                f.eval(x).map(|v| v * (-x.abs()).exp() * dx)
            })
            .sum::<Result<f64>>()?;
        let tail = f.eval(radius)? * (-radius).exp();
        if tail < 1e-15 || radius > 5000.0 {
            break;
        }
        radius *= 2.0;
    }
    let tail = f.eval(radius)? * (-radius).exp();
    Ok(AdmissibilityReport {
        min_theta,
        declared_theta_feasible: min_theta <= w.theta() * (1.0 + 1e-6),
        integrable: tail < 1e-12 && integral.is_finite(),
        integral,
        integration_radius: radius,
    })
}

/// Result of the truncation inequality ψ_N(x+y) ≤ C₁ f(x) ψ_N(y) with
/// C₁ = max(C₀, 1/inf f).
#[derive(Debug, Clone)]
pub struct TruncationReport {
    pub c1: f64,
    pub inf_f: f64,
    pub worst_ratio: f64,
    pub passed: bool,
}

pub fn check_truncation(
    psi_n: &WeightSpec,
    f: &WeightSpec,
    c0: f64,
    samples: usize,
    range: (f64, f64),
    seed: u64,
) -> Result<TruncationReport> {
    if psi_n.truncation_level.is_none() {
        return Err(Error::InvalidParameter(
            "check_truncation requires a truncated weight".to_string(),
        ));
    }
    // the family is even and nondecreasing in |x| for a,c,d >= 0, so a
    // dense scan around 0 finds the infimum
    let mut inf_f = f64::INFINITY;
    for i in 0..=100_000 {
        let x = -10.0 + i as f64 * (20.0 / 100_000.0);
        inf_f = inf_f.min(f.eval(x)?);
    }
    let c1 = c0.max(1.0 / inf_f);
    let mut worst_ratio = 0.0_f64;
    for (x, y) in sample_pairs(samples, range, seed) {
        worst_ratio = worst_ratio.max(psi_n.eval(x + y)? / (f.eval(x)? * psi_n.eval(y)?));
    }
    Ok(TruncationReport {
        c1,
        inf_f,
        worst_ratio,
        passed: worst_ratio <= c1 * (1.0 + 1e-9),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_weight_is_two() {
        let w = WeightSpec::new(0.0, 0.0, 0.0, 0.0, 1.0, None).unwrap();
        for &x in &[0.0, 1.0, -7.3, 100.0] {
            assert!((w.eval(x).unwrap() - 2.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn exponential_weight_value() {
        // a = 1/2, b = 1, c = 0, d = 0 at x = 2: e^1 * 2 * 1 = 2e
        let w = WeightSpec::new(0.5, 1.0, 0.0, 0.0, 0.5, None).unwrap();
        assert!((w.eval(2.0).unwrap() - 2.0 * std::f64::consts::E).abs() <= 1e-12);
    }

    #[test]
    fn truncation_clamps() {
        let w = WeightSpec::new(0.5, 1.0, 0.0, 0.0, 0.5, Some(5.0)).unwrap();
        // at x = 4, psi = 2 e^2 ~ 14.78 > 5
        assert_eq!(w.eval(4.0).unwrap(), 5.0);
        // below the clamp the value is untouched
        assert!((w.eval(0.0).unwrap() - 2.0).abs() <= 1e-14);
    }

    #[test]
    fn rejects_ab_geq_one() {
        assert!(WeightSpec::new(1.0, 1.0, 0.0, 0.0, 1.0, None).is_err());
        assert!(WeightSpec::new(-0.1, 0.5, 0.0, 0.0, 1.0, None).is_err());
        assert!(WeightSpec::new(0.5, 1.5, 0.0, 0.0, 1.0, None).is_err());
    }

    #[test]
    fn eval_is_even() {
        let w = WeightSpec::new(0.8, 0.5, 1.0, 1.0, 1.0, None).unwrap();
        for &x in &[0.3, 1.7, 9.2] {
            assert_eq!(w.eval(x).unwrap(), w.eval(-x).unwrap());
        }
    }

    #[test]
    fn submultiplicative_family_member() {
        let w = WeightSpec::new(1.0, 0.5, 1.0, 1.0, 1.0, None).unwrap();
        let report = check_submultiplicative(&w, 20_000, (-50.0, 50.0), 42).unwrap();
        assert!(report.passed, "worst ratio {}", report.worst_ratio);
    }

    #[test]
    fn submultiplicative_constant() {
        let w = WeightSpec::new(0.0, 0.0, 0.0, 0.0, 1.0, None).unwrap();
        let report = check_submultiplicative(&w, 1000, (-10.0, 10.0), 1).unwrap();
        assert!(report.passed);
        assert!((report.worst_ratio - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn moderate_against_itself() {
        let w = WeightSpec::new(0.5, 1.0, 0.0, 0.0, 0.5, None).unwrap();
        let report = check_moderate(&w, &w, 10_000, (-30.0, 30.0), 7).unwrap();
        assert!(report.stable);
        assert!(report.c0 <= 1.0 + 1e-9, "c0 = {}", report.c0);
    }

    #[test]
    fn moderate_dominated_member() {
        let psi = WeightSpec::new(0.3, 0.5, 0.5, 0.5, 1.0, None).unwrap();
        let f = WeightSpec::new(0.5, 0.6, 1.0, 1.0, 1.0, None).unwrap();
        let report = check_moderate(&psi, &f, 10_000, (-30.0, 30.0), 7).unwrap();
        assert!(report.stable);
        assert!(report.c0.is_finite());
    }

    #[test]
    fn admissible_exponential_half() {
        let w = WeightSpec::new(0.5, 1.0, 0.0, 0.0, 0.5, None).unwrap();
        let report = check_admissible(&w).unwrap();
        assert!(report.min_theta >= 0.45 && report.min_theta <= 0.55);
        assert!(report.declared_theta_feasible);
        assert!(report.integrable);
        // int 2 e^{|x|/2} e^{-|x|} dx = 2 * 2 * int_0^inf e^{-x/2} = 8
        assert!((report.integral - 8.0).abs() <= 1e-4);
    }

    #[test]
    fn admissible_constant() {
        let w = WeightSpec::new(0.0, 0.0, 0.0, 0.0, 1.0, None).unwrap();
        let report = check_admissible(&w).unwrap();
        assert!(report.min_theta <= 1e-8);
        assert!(report.integrable);
        // int 2 e^{-|x|} = 4
        assert!((report.integral - 4.0).abs() <= 1e-4);
    }

    #[test]
    fn truncation_inequality() {
        let psi_n = WeightSpec::new(0.5, 1.0, 0.0, 0.0, 0.5, Some(10.0)).unwrap();
        let f = psi_n.without_truncation();
        let c0 = fitted_c0(&f, &f, 10_000, (-30.0, 30.0), 9).unwrap();
        let report = check_truncation(&psi_n, &f, c0, 10_000, (-30.0, 30.0), 9).unwrap();
        assert!(report.passed, "worst {} vs c1 {}", report.worst_ratio, report.c1);
        assert!((report.inf_f - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn truncation_monotone_in_n() {
        let base = WeightSpec::new(0.5, 1.0, 1.0, 0.0, 0.5, None).unwrap();
        let lo = base.with_truncation(3.0).unwrap();
        let hi = base.with_truncation(30.0).unwrap();
        for i in 0..200 {
            let x = -20.0 + i as f64 * 0.2;
            let a = lo.eval(x).unwrap();
            let b = hi.eval(x).unwrap();
            let full = base.eval(x).unwrap();
            assert!(a <= b + 1e-15);
            assert!(b <= full + 1e-15);
        }
    }

    #[test]
    fn negative_c_is_floored_near_zero() {
        let w = WeightSpec::new(0.0, 0.0, -1.0, 0.0, 1.0, None).unwrap();
        let v = w.eval(0.0).unwrap();
        assert!(v.is_finite());
        assert!(v >= 1e11); // 1 + (1e-12)^{-1}
    }
}
