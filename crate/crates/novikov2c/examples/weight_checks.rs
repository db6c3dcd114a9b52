//! Exercise the weight predicate machinery on the four-parameter family
//! ψ_{a,b,c,d} = e^{a|x|^b}(1+|x|)^c·log(e+|x|)^d: sub-multiplicativity,
//! moderateness with a fitted constant, admissibility (the |ψ'| ≤ θψ bound
//! plus integrability of f·e^{-|x|}), and the truncated-weight inequality.

use novikov2c::weights::{
    check_admissible, check_moderate, check_submultiplicative, check_truncation, WeightSpec,
};

fn main() -> novikov2c::Result<()> {
    let family = WeightSpec::new(1.0, 0.5, 1.0, 1.0, 3.0, None)?;
    let sub = check_submultiplicative(&family, 100_000, (-50.0, 50.0), 7)?;
    println!(
        "sub-multiplicative: {} (worst ratio {:.6} at x = {:.2}, y = {:.2})",
        sub.passed, sub.worst_ratio, sub.worst_pair.0, sub.worst_pair.1
    );

    let psi = WeightSpec::new(0.5, 0.5, 0.5, 0.5, 2.5, None)?;
    let moderate = check_moderate(&psi, &family, 100_000, (-50.0, 50.0), 7)?;
    println!(
        "moderate: stable {} (C0 = {:.6}, doubled-sample C0 = {:.6})",
        moderate.stable, moderate.c0, moderate.c0_doubled
    );

    let exp_half = WeightSpec::new(0.5, 1.0, 0.0, 0.0, 0.5, None)?;
    let adm = check_admissible(&exp_half)?;
    println!(
        "admissible e^{{|x|/2}}: min theta {:.4} (declared feasible {}), integral {:.6} over radius {}",
        adm.min_theta, adm.declared_theta_feasible, adm.integral, adm.integration_radius
    );

    let truncated = family.with_truncation(50.0)?;
    let c0 = check_moderate(&family, &family, 100_000, (-50.0, 50.0), 7)?.c0;
    let trunc = check_truncation(&truncated, &family, c0, 100_000, (-50.0, 50.0), 7)?;
    println!(
        "truncation at N = 50: {} (C1 = {:.6}, worst ratio {:.6})",
        trunc.passed, trunc.c1, trunc.worst_ratio
    );
    Ok(())
}
