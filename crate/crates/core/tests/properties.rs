mod common;

use std::f64::consts::PI;

use mzclock::{
    builtin_catalog, classify_outcome, evolve, feasibility_report, interfere, linearize_potential,
    orthogonalization_bound, orthogonalization_time, overlap, proper_time_difference,
    required_dhdt, sigma_tau_bound, tau_dot, tau_dot_deviation, visibility_from_dilation, Arm,
    ClockSpec, ClockState, DensityMatrix, FieldConfig, InterferometerConfig, PhysicalConstants,
    Segment, Trajectory, Verdict,
};
use num_complex::Complex;
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn k() -> PhysicalConstants<f64> {
    PhysicalConstants::codata()
}

fn cis(x: f64) -> Complex<f64> {
    Complex::from_polar(1.0, x)
}

// Exact isotropic Schwarzschild line element for a static source.
fn exact_isotropic_tau_dot(phi: f64, speed: f64, k: &PhysicalConstants<f64>) -> f64 {
    let u = phi / k.c2();
    let a = (1.0 + u / 2.0) / (1.0 - u / 2.0);
    let b = (1.0 - u / 2.0).powi(4);
    let beta2 = speed * speed / k.c2();
    (a * a - b * beta2).sqrt()
}

proptest! {
    #[test]
    fn tau_dot_decreases_with_depth(phi in -8.9e13..0.0f64, d in 1.0..1e12f64, v in 0.0..2.9e6f64) {
        let k = k();
        prop_assume!(phi - d > -8.9e13);
        let shallow = tau_dot_deviation(phi, v, &k).unwrap();
        let deep = tau_dot_deviation(phi - d, v, &k).unwrap();
        prop_assert!(deep < shallow);
    }

    #[test]
    fn tau_dot_decreases_with_speed(phi in -8.9e13..0.0f64, v in 0.0..2.9e6f64, dv in 1e-3..1e5f64) {
        let k = k();
        prop_assume!(v + dv < 2.99e6);
        prop_assert!(tau_dot_deviation(phi, v + dv, &k).unwrap() < tau_dot_deviation(phi, v, &k).unwrap());
    }

    #[test]
    fn tau_dot_matches_exact_metric(frac in -1.0..0.0f64, v in 0.0..2.9e6f64) {
        let k = k();
        let phi = frac * 1e-8 * k.c2();
        let approx = tau_dot(phi, v, &k).unwrap();
        let exact = exact_isotropic_tau_dot(phi, v, &k);
        prop_assert!((approx / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linearization_error_within_bound(dh in -6000.0..6000.0f64) {
        let k = k();
        let field = FieldConfig::earth();
        let lin = linearize_potential(&field, dh, &k).unwrap();
        let gm = k.big_g * field.source_mass;
        let r = field.radius;
        // phi(R + dh) - phi(R) - g dh = -GM dh^2 / (R^2 (R + dh)), exactly
        let err = gm * dh * dh / (r * r * (r + dh));
        prop_assert!(err <= lin.truncation_bound * (1.0 + 1e-12));
        // the naive difference agrees up to rounding of phi itself
        let naive = field.exact_potential(dh, &k) - field.exact_potential(0.0, &k) - field.source_acceleration(&k) * dh;
        prop_assert!((naive.abs() - err).abs() < 1e-7);
    }

    #[test]
    fn proper_time_difference_is_bilinear(dv in -100.0..100.0f64, dt in 0.0..10.0f64, a in 0.0..10.0f64, dv2 in -100.0..100.0f64) {
        let k = k();
        let f = |x, y| proper_time_difference(x, y, &k).unwrap();
        let base = f(dv, dt);
        prop_assert!((f(a * dv, dt) - a * base).abs() <= 1e-15 * (a * base).abs());
        prop_assert!((f(dv, a * dt) - a * base).abs() <= 1e-15 * (a * base).abs());
        let sum = f(dv + dv2, dt);
        let scale = f(dv.abs() + dv2.abs(), dt);
        prop_assert!((sum - base - f(dv2, dt)).abs() <= 1e-15 * scale);
    }
}

fn random_clock(seed: u64, mixed: bool) -> (ClockSpec<f64>, ClockState<f64>) {
    let mut rng = common::rng(seed);
    let dim = 1 + (seed % 8) as usize;
    let k = k();
    (
        common::random_spec(&mut rng, dim, 5.0, &k),
        common::random_state(&mut rng, dim, mixed),
    )
}

proptest! {
    #[test]
    fn evolution_preserves_state(seed in any::<u64>(), mixed in any::<bool>(), tau in -10.0..10.0f64) {
        let k = k();
        let (spec, state) = random_clock(seed, mixed);
        let out = evolve(&state, &spec, tau, &k).unwrap();
        match out {
            ClockState::Pure(ket) => {
                let n: f64 = ket.amplitudes().iter().map(|a| a.norm_sqr()).sum();
                prop_assert!((n - 1.0).abs() < 1e-12);
            }
            ClockState::Mixed(rho) => {
                // re-validation checks Hermiticity, trace and positivity
                prop_assert!(DensityMatrix::new(rho.dim(), rho.data().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn evolution_is_a_semigroup(seed in any::<u64>(), mixed in any::<bool>(), t1 in -5.0..5.0f64, t2 in -5.0..5.0f64) {
        let k = k();
        let (spec, state) = random_clock(seed, mixed);
        let two_step = evolve(&evolve(&state, &spec, t1, &k).unwrap(), &spec, t2, &k).unwrap();
        let one_step = evolve(&state, &spec, t1 + t2, &k).unwrap();
        let (a, b) = (two_step.to_density(), one_step.to_density());
        for (x, y) in a.data().iter().zip(b.data()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn overlap_modulus_ignores_energy_offset(seed in any::<u64>(), mixed in any::<bool>(), ta in -3.0..3.0f64, tb in -3.0..3.0f64, shift in -5.0..5.0f64) {
        let k = k();
        let (spec, state) = random_clock(seed, mixed);
        let shifted = spec.shifted(shift * k.hbar).unwrap();
        let ov = |s: &ClockSpec<f64>| {
            overlap(&evolve(&state, s, ta, &k).unwrap(), &evolve(&state, s, tb, &k).unwrap()).unwrap()
        };
        let (a, b) = (ov(&spec), ov(&shifted));
        prop_assert!((a.modulus - b.modulus).abs() < 1e-12);
        // alpha moves by shift * (ta - tb) modulo 2 pi
        if a.modulus > 1e-6 {
            let want = cis(a.phase_alpha + shift * (ta - tb));
            prop_assert!((cis(b.phase_alpha) - want).norm() < 1e-9 / a.modulus);
        }
    }

    #[test]
    fn overlap_is_conjugate_symmetric(seed in any::<u64>(), mixed in any::<bool>(), ta in -3.0..3.0f64, tb in -3.0..3.0f64) {
        let k = k();
        let (spec, state) = random_clock(seed, mixed);
        let a = evolve(&state, &spec, ta, &k).unwrap();
        let b = evolve(&state, &spec, tb, &k).unwrap();
        let ab = overlap(&a, &b).unwrap();
        let ba = overlap(&b, &a).unwrap();
        prop_assert!((ab.modulus - ba.modulus).abs() < 1e-14);
        if ab.modulus > 1e-6 {
            prop_assert!((cis(ab.phase_alpha) - cis(-ba.phase_alpha)).norm() < 1e-9);
        }
    }

    #[test]
    fn orthogonalization_rate_never_exceeds_bounds(seed in any::<u64>(), mixed in any::<bool>()) {
        let k = k();
        let (spec, state) = random_clock(seed, mixed);
        let rate = orthogonalization_time(&state, &spec, &k).unwrap().rate();
        for alpha in [0.5, 1.0, 2.0] {
            prop_assert!(rate <= orthogonalization_bound(&state, &spec, alpha, &k).unwrap() + 1e-9);
        }
    }
}

fn config(seed: u64, mixed: bool) -> InterferometerConfig<f64> {
    let mut rng = common::rng(seed);
    let dim = 1 + (seed % 8) as usize;
    common::random_config(&mut rng, dim.max(2), mixed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn probabilities_sum_to_one(seed in any::<u64>(), mixed in any::<bool>()) {
        let r = interfere(&config(seed, mixed)).unwrap();
        prop_assert!((r.p_plus + r.p_minus - 1.0).abs() < 1e-12);
        prop_assert!(r.p_plus >= -1e-15 && r.p_minus >= -1e-15);
    }

    #[test]
    fn duality_relation(seed in any::<u64>(), mixed in any::<bool>()) {
        let r = interfere(&config(seed, mixed)).unwrap();
        let s = r.visibility.powi(2) + r.distinguishability.powi(2);
        if mixed {
            prop_assert!(s <= 1.0 + 1e-10);
        } else {
            prop_assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn visibility_ignores_segment_order(seed in any::<u64>(), mixed in any::<bool>(), n in 2usize..6) {
        let base = config(seed, mixed);
        let mut rng = common::rng(seed ^ 0x5eed);
        use rand::Rng;
        let segs: Vec<Segment<f64>> = (0..n)
            .map(|_| Segment::hold(rng.random_range(0.05..0.5), rng.random_range(-1.0..1.0), rng.random_range(0.0..50.0)))
            .collect();
        let flat: Vec<Segment<f64>> = segs.iter().map(|s| Segment { height: 0.0, ..*s }).collect();
        let mut shuffled = segs.clone();
        shuffled.shuffle(&mut rng);
        let with = |upper: Vec<Segment<f64>>| {
            let mut cfg = base.clone();
            cfg.paths = (
                Trajectory::new(Arm::First, upper).unwrap(),
                Trajectory::new(Arm::Second, flat.clone()).unwrap(),
            );
            interfere(&cfg).unwrap()
        };
        let (a, b) = (with(segs), with(shuffled));
        prop_assert!((a.visibility - b.visibility).abs() < 1e-12);
        prop_assert!((a.delta_tau - b.delta_tau).abs() <= 1e-12 * a.delta_tau.abs());
    }

    #[test]
    fn swapping_arm_labels_mirrors_the_fringe(seed in any::<u64>(), mixed in any::<bool>()) {
        let cfg = config(seed, mixed);
        let r = interfere(&cfg).unwrap();
        let mut swapped = cfg.clone().with_phase_shift(-cfg.phase_shift);
        swapped.paths = (cfg.paths.1.relabelled(Arm::First), cfg.paths.0.relabelled(Arm::Second));
        let s = interfere(&swapped).unwrap();
        prop_assert_eq!(s.delta_phi, -r.delta_phi);
        prop_assert!((s.visibility - r.visibility).abs() < 1e-12);
        if r.visibility > 1e-6 {
            prop_assert!((cis(s.alpha) - cis(-r.alpha)).norm() < 1e-9);
        }
        // the whole fringe argument flips sign, so cos is unchanged
        prop_assert!((s.p_plus - r.p_plus).abs() < 1e-9);
        prop_assert!((s.p_minus - r.p_minus).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn required_dhdt_times_omega_is_constant(e in 0.0..20.0f64, g in 1.0..20.0f64) {
        let k = k();
        let omega = 10f64.powf(e);
        let c = required_dhdt(omega, g, &k).unwrap() * omega;
        prop_assert!((c / (PI * k.c2() / g) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn classification_is_total(vm in 0.0..=1.0f64, vqm in 0.0..=1.0f64, dv in 1e-9..0.5f64, tau in -1e-12..1e-12f64) {
        let a = classify_outcome(vm, vqm, dv, tau).unwrap();
        let b = classify_outcome(vm, vqm, dv, tau).unwrap();
        prop_assert_eq!(a, b);
        let expected = if (vm - vqm).abs() <= dv {
            Verdict::NoDofOrBroad
        } else if vm > vqm {
            Verdict::ComplementarityViolation
        } else if vm <= dv {
            Verdict::SharpProperTimeDofDisproved
        } else {
            Verdict::DofWithUncertainty
        };
        prop_assert_eq!(a.verdict, expected);
        prop_assert_eq!(a.sigma_tau_bound.is_some(), expected == Verdict::DofWithUncertainty);
    }

    #[test]
    fn sigma_bound_monotone_and_linear(tau in -1e-10..1e-10f64, e1 in 1e-9..0.999f64, e2 in 1e-9..0.999f64, a in 0.0..100.0f64) {
        prop_assume!(e1 < e2);
        prop_assert!(sigma_tau_bound(tau, e1).unwrap() >= sigma_tau_bound(tau, e2).unwrap());
        let b = sigma_tau_bound(tau, e1).unwrap();
        prop_assert!((sigma_tau_bound(a * tau, e1).unwrap() - a * b).abs() <= 1e-15 * a * b);
    }

    #[test]
    fn feasibility_matches_dilation_visibility(idx in 0usize..4, scale in 1e-3..1e3f64, g in 1.0..20.0f64) {
        let k = k();
        let mut entry = builtin_catalog::<f64>()[idx].clone();
        entry.achieved_dhdt = required_dhdt(entry.omega, g, &k).unwrap() * scale;
        let r = feasibility_report(&entry, g, &k).unwrap();
        let tau = g * entry.achieved_dhdt / k.c2();
        let v = visibility_from_dilation(tau, PI / entry.omega).unwrap().visibility;
        prop_assert!((r.predicted_visibility - v).abs() < 1e-12);
        prop_assert!((r.visibility_deficit - (1.0 - v)).abs() < 1e-12);
    }
}
