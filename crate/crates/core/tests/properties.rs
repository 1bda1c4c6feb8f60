use std::f64::consts::TAU;

use ndarray::Array1;
use num_complex::Complex64;
use proptest::prelude::*;

use photon_phase::fockspace::photon_count;
use photon_phase::operators::{build_polarization_swap, OPERATOR_NAMES};
use photon_phase::phase::build_phase_rotation;
use photon_phase::{
    build_named, build_susskind_glogower, fock_state, phase_distribution, run_checks, BasisIndex,
    Boundary, PhaseDistribution, PhaseGrid, StateVector, ToleranceProfile, Window,
};

fn window() -> impl Strategy<Value = Window> {
    (1i64..=12, 0i64..=12, prop::bool::ANY, -3.0f64..3.0).prop_map(|(l, hi, cyclic, wrap)| {
        let boundary = if cyclic {
            Boundary::Cyclic
        } else {
            Boundary::Open
        };
        Window::new(-l, hi, boundary, wrap).unwrap()
    })
}

fn cyclic_symmetric() -> impl Strategy<Value = Window> {
    (0i64..=12).prop_map(|n| Window::symmetric(n, Boundary::Cyclic).unwrap())
}

fn state_on(w: Window) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), w.dim())
        .prop_filter("nonzero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(move |v| {
            let amps: Array1<Complex64> =
                v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            StateVector::from_amplitudes(w, amps)
                .unwrap()
                .normalized()
                .unwrap()
        })
}

fn window_and_state() -> impl Strategy<Value = (Window, StateVector)> {
    cyclic_symmetric().prop_flat_map(|w| (Just(w), state_on(w)))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn dist(state: &StateVector, w: &Window) -> PhaseDistribution {
    phase_distribution(state, &PhaseGrid::eigenphases(w)).unwrap()
}

proptest! {
    #[test]
    fn photon_count_is_mirror_symmetric(n in -10_000i64..10_000) {
        let b = BasisIndex(n);
        prop_assert_eq!(photon_count(b), photon_count(b.mirrored()));
        prop_assert_eq!(b.mirrored().mirrored(), b);
        prop_assert_ne!(b.polarization(), b.mirrored().polarization());
    }

    #[test]
    fn fock_states_are_orthonormal(w in window(), i in 0usize..25, j in 0usize..25) {
        let m = w.lo() + (i % w.dim()) as i64;
        let n = w.lo() + (j % w.dim()) as i64;
        let overlap = fock_state(&w, BasisIndex(m)).unwrap().inner(&fock_state(&w, BasisIndex(n)).unwrap()).unwrap();
        prop_assert_eq!(overlap, Complex64::new(if m == n { 1.0 } else { 0.0 }, 0.0));
    }

    #[test]
    fn adjoint_is_an_involution(w in window(), k in 0usize..OPERATOR_NAMES.len()) {
        let Ok(op) = build_named(OPERATOR_NAMES[k], &w) else {
            // Only the swap refuses, and only on asymmetric windows.
            prop_assert!(!w.is_symmetric());
            return Ok(());
        };
        prop_assert_eq!(op.adjoint().adjoint().max_abs_diff(&op).unwrap(), 0.0);
    }

    #[test]
    fn distributions_ignore_global_phase((w, s) in window_and_state(), theta in 0.0f64..TAU) {
        let p = dist(&s, &w);
        let q = dist(&s.scaled(Complex64::from_polar(1.0, theta)), &w);
        prop_assert!(max_diff(&p.probabilities, &q.probabilities) <= 1e-12);
        prop_assert!((p.total() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn shift_leaves_distributions_unchanged((w, s) in window_and_state()) {
        let e = build_susskind_glogower(&w);
        let shifted = e.adjoint().apply(&s).unwrap();
        prop_assert!(max_diff(&dist(&s, &w).probabilities, &dist(&shifted, &w).probabilities) <= 1e-10);
    }

    #[test]
    fn number_rotation_translates_by_one_step((w, s) in window_and_state()) {
        let d = w.dim();
        let rotated = build_phase_rotation(&w, TAU / d as f64).apply(&s).unwrap();
        let p = dist(&s, &w).probabilities;
        let q = dist(&rotated, &w).probabilities;
        let translated: Vec<f64> = (0..d).map(|k| p[(k + d - 1) % d]).collect();
        prop_assert!(max_diff(&q, &translated) <= 1e-10);
    }

    #[test]
    fn swap_reflects_distributions((w, s) in window_and_state()) {
        let d = w.dim();
        let swapped = build_polarization_swap(&w).unwrap().apply(&s).unwrap();
        let p = dist(&s, &w).probabilities;
        let q = dist(&swapped, &w).probabilities;
        let reflected: Vec<f64> = (0..d).map(|k| p[(d - k) % d]).collect();
        prop_assert!(max_diff(&q, &reflected) <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn check_reports_are_deterministic(w in window()) {
        let profile = ToleranceProfile::default();
        let first = run_checks(&w, &profile);
        prop_assert_eq!(&first, &run_checks(&w, &profile));
        for r in &first {
            prop_assert_eq!(r.passed, r.max_deviation <= r.tolerance);
            prop_assert!(r.passed, "{} failed on {:?}: {}", r.check_id, w, r.notes);
        }
    }
}
