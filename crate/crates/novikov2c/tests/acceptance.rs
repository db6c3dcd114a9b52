//! Acceptance gate: one numbered criterion per test, each printing a single
//! PASS/FAIL line (visible with --nocapture) before asserting.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use novikov2c::characteristics::{verify_jacobian, verify_transport, TrajectorySet};
use novikov2c::convergence::{
    manufactured_temporal_ladder, perturbation_divergence, spatial_refinement,
};
use novikov2c::diagnostics::NamedWeight;
use novikov2c::grid::{GridRef, SpectralField, SpectralGrid};
use novikov2c::integrator::{run, RunHooks, RunStatus, StepControl};
use novikov2c::model::{rhs, rhs_convolution_form, FieldPair, ModelParams};
use novikov2c::output::DiagnosticsCollector;
use novikov2c::verify::{run_checks, VerifyFaults};
use novikov2c::weights::{
    check_admissible, check_moderate, check_submultiplicative, check_truncation, WeightSpec,
};

fn report(number: usize, name: &str, passed: bool, detail: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {number:2} {verdict} {name}: {detail}");
    assert!(passed, "criterion {number} ({name}) failed: {detail}");
}

fn cubic_params(lambda: f64) -> ModelParams {
    ModelParams::new(1.0, lambda, vec![0.0, 0.0, 4.0 / 3.0]).unwrap()
}

fn gaussian_pair(grid: &GridRef, amp: f64) -> FieldPair {
    FieldPair {
        u: SpectralField::from_fn(grid, |x| amp * (-x * x).exp()),
        rho: SpectralField::from_fn(grid, |x| amp * (-x * x).exp()),
        time: 0.0,
    }
}

fn small_data_records(
    lambda: f64,
    t_end: f64,
    weights: Vec<NamedWeight>,
) -> (Vec<novikov2c::diagnostics::DiagnosticsRecord>, RunStatus) {
    let grid = SpectralGrid::new(256, 20.0).unwrap();
    let params = cubic_params(lambda);
    let init = gaussian_pair(&grid, 0.05);
    let mut collector = DiagnosticsCollector::new(weights, 1);
    let outcome = run(
        &params,
        init,
        &StepControl::new(t_end).unwrap(),
        RunHooks {
            observers: vec![&mut collector],
            ..Default::default()
        },
    )
    .unwrap();
    (collector.records, outcome.status)
}

#[test]
fn criterion_01_energy_decay_law() {
    let lambda = 0.5;
    let started = std::time::Instant::now();
    let (records, status) = small_data_records(lambda, 2.0, Vec::new());
    let elapsed = started.elapsed().as_secs_f64();
    let e0 = records[0].energy;
    let defect = records
        .iter()
        .map(|r| (r.energy * (2.0 * lambda * r.time).exp() / e0 - 1.0).abs())
        .fold(0.0, f64::max);
    let at_one = records
        .iter()
        .min_by(|a, b| {
            (a.time - 1.0).abs().partial_cmp(&(b.time - 1.0).abs()).unwrap()
        })
        .unwrap();
    assert!(
        (at_one.time - 1.0).abs() <= 1e-9,
        "no diagnostics record at t = 1 (closest: {})",
        at_one.time
    );
    let ratio = at_one.energy / e0;
    let expected = (-1.0_f64).exp();
    let passed = status == RunStatus::Completed
        && defect <= 1e-6
        && (ratio - expected).abs() <= 1e-6
        && elapsed <= 10.0;
    report(
        1,
        "energy decay law",
        passed,
        &format!(
            "max |E(t)e^{{2λt}}/E(0) - 1| = {defect:.3e}, E(1)/E(0) = {ratio:.8} vs e^{{-1}} = {expected:.8}, {elapsed:.1}s"
        ),
    );
}

#[test]
fn criterion_02_rho_mass_conservation() {
    let (records, status) = small_data_records(0.5, 2.0, Vec::new());
    let r0 = records[0].rho_mass2;
    let defect = records
        .iter()
        .map(|r| (r.rho_mass2 / r0 - 1.0).abs())
        .fold(0.0, f64::max);
    let passed = status == RunStatus::Completed && defect <= 1e-8;
    report(
        2,
        "rho mass conservation",
        passed,
        &format!("max |∫ρ²(t)/∫ρ²(0) - 1| = {defect:.3e}"),
    );
}

fn random_trig_field(grid: &GridRef, rng: &mut ChaCha8Rng, amplitude: f64) -> SpectralField {
    let l = grid.half_length();
    let coeffs: Vec<(f64, f64)> = (0..=8)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SpectralField::from_fn(grid, |x| {
        let theta = std::f64::consts::PI * x / l;
        amplitude
            * coeffs
                .iter()
                .enumerate()
                .map(|(m, (a, b))| {
                    0.5_f64.powi(m as i32)
                        * (a * (m as f64 * theta).cos() + b * (m as f64 * theta).sin())
                })
                .sum::<f64>()
    })
}

#[test]
fn criterion_03_rhs_route_equivalence() {
    let grid = SpectralGrid::new(128, 15.0).unwrap();
    let params = cubic_params(0.1);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let state = FieldPair {
            u: random_trig_field(&grid, &mut rng, 0.5),
            rho: random_trig_field(&grid, &mut rng, 0.5),
            time: 0.0,
        };
        let (au, ar) = rhs(&params, &state).unwrap();
        let (bu, br) = rhs_convolution_form(&params, &state).unwrap();
        let scale = au.max_abs().max(1e-30);
        worst = worst.max((&au - &bu).max_abs() / scale);
        worst = worst.max((&ar - &br).max_abs() / scale);
    }
    report(
        3,
        "rhs route equivalence",
        worst <= 1e-12,
        &format!("worst relative gap over 100 random states = {worst:.3e}"),
    );
}

#[test]
fn criterion_04_helmholtz_eigenfunctions() {
    let grid = SpectralGrid::new(128, std::f64::consts::PI).unwrap();
    let mut worst = 0.0_f64;
    for m in 1..=10 {
        let mf = m as f64;
        let f = SpectralField::from_fn(&grid, |x| (mf * x).cos());
        let expected = &f * (1.0 / (1.0 + mf * mf));
        worst = worst.max((&f.helmholtz_inverse().unwrap() - &expected).max_abs());
        let g = SpectralField::from_fn(&grid, |x| (mf * x).sin());
        let expected = &g * (1.0 / (1.0 + mf * mf));
        worst = worst.max((&g.helmholtz_inverse().unwrap() - &expected).max_abs());
    }
    report(
        4,
        "helmholtz eigenfunctions",
        worst <= 1e-13,
        &format!("max error over cos/sin modes 1..10 = {worst:.3e}"),
    );
}

#[test]
fn criterion_05_convergence_orders() {
    let grid = SpectralGrid::new(128, 20.0).unwrap();
    let params = cubic_params(0.0);
    let ladder = manufactured_temporal_ladder(&params, &grid, 0.5, 0.05, 4).unwrap();
    let orders_ok = ladder.orders.iter().all(|o| (3.7..=4.3).contains(o));

    // amplitude small enough that the n = 256 solution sits on the
    // reference to roundoff while the width keeps a visible tail at n = 128
    let spatial = spatial_refinement(
        &params,
        20.0,
        128,
        &|g| {
            let w: f64 = 0.65;
            Ok(FieldPair {
                u: SpectralField::from_fn(g, |x| 0.05 * (-(x / w) * (x / w)).exp()),
                rho: SpectralField::from_fn(g, |x| 0.05 * (-(x / w) * (x / w)).exp()),
                time: 0.0,
            })
        },
        0.5,
        0.01,
    )
    .unwrap();
    let passed = orders_ok && spatial.ratio > 1e3;
    report(
        5,
        "temporal and spatial convergence",
        passed,
        &format!(
            "temporal orders {:?}, spatial error ratio {:.3e}",
            ladder.orders, spatial.ratio
        ),
    );
}

#[test]
fn criterion_06_breaking_vs_global() {
    // steep antisymmetric slope data must trip the breaking detector with a
    // still-deepening monitor; small data must run out the full horizon
    let grid = SpectralGrid::new(256, 20.0).unwrap();
    let params = cubic_params(0.0);
    let steep = FieldPair {
        u: SpectralField::from_fn(&grid, |x| -2.0 * x * (-x * x).exp()),
        rho: SpectralField::zeros(&grid),
        time: 0.0,
    };
    // the monitor plunges monotonically past -2.5 during the initial
    // steepening before dispersive effects kick in
    let ctrl = StepControl {
        breaking_threshold: -2.5,
        ..StepControl::new(5.0).unwrap()
    };
    let mut collector = DiagnosticsCollector::new(Vec::new(), 1);
    let steep_outcome = run(
        &params,
        steep,
        &ctrl,
        RunHooks {
            observers: vec![&mut collector],
            ..Default::default()
        },
    )
    .unwrap();
    let monitors: Vec<f64> = collector.records.iter().map(|r| r.min_k_u_ux).collect();
    let running: Vec<f64> = monitors
        .iter()
        .scan(f64::INFINITY, |m, &v| {
            *m = m.min(v);
            Some(*m)
        })
        .collect();
    // the running min is non-increasing by construction; the detection is
    // honest only if it is still setting new minima in the final 20%
    let tail_start = running.len() - (running.len() / 5).max(2);
    let deepening = running.windows(2).all(|w| w[1] <= w[0])
        && *running.last().unwrap() < running[tail_start - 1];

    let (small_records, small_status) = small_data_records(0.0, 5.0, Vec::new());
    let small_min = small_records
        .iter()
        .map(|r| r.min_k_u_ux)
        .fold(f64::INFINITY, f64::min);

    let passed = steep_outcome.status == RunStatus::BreakingDetected
        && deepening
        && small_status == RunStatus::Completed
        && small_min >= -1.0;
    report(
        6,
        "breaking detection vs global existence",
        passed,
        &format!(
            "steep: {} at t = {:.4} with running-min {:.3} strictly deepening over final 20%; small: {} with min monitor {:.3e}",
            steep_outcome.status.as_str(),
            steep_outcome.halt_time,
            running.last().unwrap(),
            small_status.as_str(),
            small_min
        ),
    );
}

#[test]
fn criterion_07_characteristics_identities() {
    let grid = SpectralGrid::new(256, 20.0).unwrap();
    let params = cubic_params(0.5);
    let init = gaussian_pair(&grid, 0.05);
    let rho0 = init.rho.clone();
    let mut ts = TrajectorySet::equispaced(64, 4.0).unwrap();
    let outcome = run(
        &params,
        init,
        &StepControl::new(1.0).unwrap(),
        RunHooks {
            trajectories: Some(&mut ts),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(outcome.status, RunStatus::Completed);
    let jac = verify_jacobian(&ts).unwrap();
    let transport = verify_transport(&ts, &outcome.final_state.rho, &rho0).unwrap();
    let passed = jac.passed()
        && jac.max_rel_discrepancy <= 1e-4
        && transport.max_rel_transport <= 1e-5
        && transport.max_rel_invariant <= 1e-5;
    report(
        7,
        "characteristics identities",
        passed,
        &format!(
            "jacobian gap {:.3e} (monotone {}), transport gap {:.3e}, invariant gap {:.3e}",
            jac.max_rel_discrepancy,
            jac.positions_monotone,
            transport.max_rel_transport,
            transport.max_rel_invariant
        ),
    );
}

#[test]
fn criterion_08_weighted_persistence() {
    let lambda = 0.5;
    let weight = NamedWeight {
        name: "exp_half".to_string(),
        spec: WeightSpec::new(0.5, 1.0, 0.0, 0.0, 0.5, None).unwrap(),
        p: 2.0,
    };
    let (records, status) = small_data_records(lambda, 2.0, vec![weight]);
    let w_of = |r: &novikov2c::diagnostics::DiagnosticsRecord| {
        let [wu, wux, wrho] = r.weighted[0].1;
        (wu * wu + wux * wux + wrho * wrho).sqrt()
    };
    let w0 = w_of(&records[0]);
    let m_hat = records
        .iter()
        .map(|r| r.max_abs_u + r.max_abs_ux + r.max_abs_rho)
        .fold(0.0_f64, f64::max);
    let mut all_finite = w0.is_finite() && w0 > 0.0;
    let mut c_hat = 0.0_f64;
    for r in records.iter().skip(1) {
        let w = w_of(r);
        all_finite &= w.is_finite();
        if r.time > 1e-9 {
            c_hat = c_hat.max(((w / w0).ln() / r.time - lambda) / (m_hat * m_hat));
        }
    }
    let c_hat = c_hat.max(0.0);
    let passed = status == RunStatus::Completed && all_finite && c_hat <= 10.0;
    report(
        8,
        "weighted persistence",
        passed,
        &format!("all ψ-norms finite: {all_finite}, fitted constant Ĉ = {c_hat:.4} (M̂ = {m_hat:.4})"),
    );
}

#[test]
fn criterion_09_weight_machinery() {
    let family = WeightSpec::new(1.0, 0.5, 1.0, 1.0, 3.0, None).unwrap();
    let sub = check_submultiplicative(&family, 100_000, (-50.0, 50.0), 20240901).unwrap();

    let psi = WeightSpec::new(0.5, 0.5, 0.5, 0.5, 2.5, None).unwrap();
    let moderate = check_moderate(&psi, &family, 100_000, (-50.0, 50.0), 20240902).unwrap();

    let exp_half = WeightSpec::new(0.5, 1.0, 0.0, 0.0, 0.5, None).unwrap();
    let adm = check_admissible(&exp_half).unwrap();
    let theta_ok = (0.45..=0.55).contains(&adm.min_theta) && adm.declared_theta_feasible;

    let self_c0 = check_moderate(&family, &family, 100_000, (-50.0, 50.0), 20240903)
        .unwrap()
        .c0;
    let trunc = check_truncation(
        &family.with_truncation(50.0).unwrap(),
        &family,
        self_c0,
        100_000,
        (-50.0, 50.0),
        20240903,
    )
    .unwrap();

    let passed = sub.passed && moderate.stable && theta_ok && adm.integrable && trunc.passed;
    report(
        9,
        "weight machinery",
        passed,
        &format!(
            "submultiplicative worst ratio {:.4}, moderate C₀ {:.4}/{:.4}, min θ {:.4}, ∫ψ⁻² = {:.4}, truncation C₁ {:.4}",
            sub.worst_ratio, moderate.c0, moderate.c0_doubled, adm.min_theta, adm.integral, trunc.c1
        ),
    );
}

#[test]
fn criterion_10_continuous_dependence() {
    let grid = SpectralGrid::new(256, 20.0).unwrap();
    let params = cubic_params(0.1);
    let init = gaussian_pair(&grid, 0.05);
    let ctrl = StepControl::new(1.0).unwrap();
    let result = perturbation_divergence(&params, &init, &ctrl, 1e-6).unwrap();
    let passed = result.delta_final <= 1e-3;
    report(
        10,
        "continuous dependence",
        passed,
        &format!(
            "H¹×L² distance {:.3e} → {:.3e} at t = 1",
            result.delta_initial, result.delta_final
        ),
    );
}

#[test]
fn criterion_11_verification_suite() {
    let started = std::time::Instant::now();
    let results = run_checks(&VerifyFaults::default(), None);
    let elapsed = started.elapsed().as_secs_f64();
    let failures: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    let passed = failures.is_empty() && elapsed <= 60.0;
    report(
        11,
        "verification suite",
        passed,
        &format!(
            "{} checks in {elapsed:.1}s, failures: {failures:?}",
            results.len()
        ),
    );
}
