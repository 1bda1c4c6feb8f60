//! Single-polarization reference constructions: the Susskind-Glogower shift
//! on a truncated Fock space and the Pegg-Barnett cyclic phase exponential,
//! plus the comparison metrics against the doubled space.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
pub use crate::fockspace::SingleModeWindow;
use crate::fockspace::{coherent_amplitudes, Space, StateSpec, StateVector, Window};
use crate::operators::OperatorMatrix;
use crate::phase::{
    phase_distribution, projected_weights, PhaseDistribution, PhaseGrid, NORMALIZATION_TOLERANCE,
};

/// `E|n> = |n-1>`, `E|0> = 0` on `0..=n_max`.
pub fn build_sg_single(nw: SingleModeWindow) -> OperatorMatrix {
    let mut entries = ndarray::Array2::zeros((nw.dim(), nw.dim()));
    for p in 1..nw.dim() {
        entries[[p - 1, p]] = Complex64::new(1.0, 0.0);
    }
    OperatorMatrix::from_entries(nw, entries, "E_sg").expect("square by construction")
}

/// Unitary phase exponential of the `(s+1)`-dimensional truncated space.
///
/// Its spectral form `sum_k e^{i theta_k} |theta_k><theta_k|` over
/// `theta_k = phi0 + 2 pi k/(s+1)` collapses to the unit shift closed by
/// `<s|U|0> = e^{i (s+1) phi0}`.
pub fn build_pegg_barnett(nw: SingleModeWindow, phi0: f64) -> OperatorMatrix {
    let d = nw.dim();
    let mut entries = ndarray::Array2::zeros((d, d));
    for p in 1..d {
        entries[[p - 1, p]] = Complex64::new(1.0, 0.0);
    }
    entries[[d - 1, 0]] += Complex64::from_polar(1.0, d as f64 * phi0);
    OperatorMatrix::from_entries(nw, entries, format!("E_pb(phi0={phi0})"))
        .expect("square by construction")
}

pub fn pegg_barnett_grid(nw: SingleModeWindow, phi0: f64) -> PhaseGrid {
    PhaseGrid::new(nw, phi0)
}

/// The `n >= 0` block of a doubled-space operator, as a single-mode matrix
/// over `0..=hi`.
pub fn restrict_to_upper(a: &OperatorMatrix) -> Result<OperatorMatrix> {
    let window = a.space().window().ok_or(Error::WrongSpace {
        expected: "doubled",
    })?;
    let nw = SingleModeWindow::new(window.hi() as u64);
    let offset = (-window.lo()) as usize;
    let block = a
        .entries()
        .slice(ndarray::s![offset.., offset..])
        .to_owned();
    OperatorMatrix::from_entries(nw, block, format!("upper({})", a.label()))
}

/// Upper-branch amplitudes of a doubled-space state, unnormalized.
pub fn restrict_state_to_upper(state: &StateVector) -> Result<StateVector> {
    let window = state.space().window().ok_or(Error::WrongSpace {
        expected: "doubled",
    })?;
    let offset = (-window.lo()) as usize;
    let amps = state.amplitudes().slice(ndarray::s![offset..]).to_owned();
    StateVector::from_amplitudes(SingleModeWindow::new(window.hi() as u64), amps)
}

/// Normalized single-mode coherent state on `0..=n_max`.
pub fn coherent_single(nw: SingleModeWindow, alpha: Complex64) -> Result<StateVector> {
    let (amps, _) = coherent_amplitudes(alpha, nw.n_max as usize);
    StateVector::from_amplitudes(nw, amps.into_iter().collect())?.normalized()
}

/// Doubled-space phase distribution sampled on another grid.
///
/// The doubled phase density `|<phi|state>|^2` is evaluated at the grid
/// points (off the native grid these are interpolating states) and weighted
/// by the grid cell `2 pi / len`. The result is a probability distribution
/// exactly when the state's occupied labels span at most `len` consecutive
/// values; wider support would alias and is refused.
pub fn doubled_distribution_on(state: &StateVector, grid: &PhaseGrid) -> Result<PhaseDistribution> {
    if !matches!(state.space(), Space::Doubled(_)) {
        return Err(Error::WrongSpace {
            expected: "doubled",
        });
    }
    let norm_sq = state.norm_sqr();
    if (norm_sq - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized { norm_sq });
    }
    let occupied: Vec<i64> = state
        .space()
        .indices()
        .filter(|n| state.amplitude(*n).norm_sqr() > 0.0)
        .collect();
    if let (Some(first), Some(last)) = (occupied.first(), occupied.last()) {
        let span = (last - first + 1) as usize;
        if span > grid.len() {
            return Err(Error::GridMismatch(format!(
                "state occupies {span} consecutive labels, more than the {}-point grid",
                grid.len()
            )));
        }
    }
    let probabilities = projected_weights(state, grid.points(), grid.space());
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::GridMismatch(format!(
            "state support is wider than the {}-point grid (sampled weight {total})",
            grid.len()
        )));
    }
    Ok(PhaseDistribution::from_probabilities(
        grid.clone(),
        probabilities,
    ))
}

/// `(max_k |p_k - q_k|, sum_k |p_k - q_k|)`.
pub fn compare_distributions(p: &PhaseDistribution, q: &PhaseDistribution) -> Result<(f64, f64)> {
    if !p.grid.matches(&q.grid) {
        return Err(Error::GridMismatch(format!(
            "{} points at offset {} vs {} points at offset {}",
            p.grid.len(),
            p.grid.offset(),
            q.grid.len(),
            q.grid.offset()
        )));
    }
    Ok(p.probabilities
        .iter()
        .zip(&q.probabilities)
        .fold((0.0f64, 0.0f64), |(sup, l1), (a, b)| {
            let d = (a - b).abs();
            (sup.max(d), l1 + d)
        }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub baseline: String,
    pub window: Window,
    pub sup_diff: f64,
    pub l1_diff: f64,
    pub state_spec: String,
}

/// Doubled-space versus Pegg-Barnett phase distribution for one state.
///
/// The Pegg-Barnett space has dimension `hi + 1`, the photon capacity of the
/// upper branch; its state is the upper-branch restriction of the doubled
/// state, renormalized.
pub fn compare_with_pegg_barnett(
    window: &Window,
    spec: &StateSpec,
    phi0: f64,
) -> Result<ComparisonReport> {
    let state = spec.build(window)?;
    let nw = SingleModeWindow::new(window.hi() as u64);
    let grid = pegg_barnett_grid(nw, phi0);
    let single = restrict_state_to_upper(&state)?.normalized()?;
    let pb = phase_distribution(&single, &grid)?;
    let doubled = doubled_distribution_on(&state, &grid)?;
    let (sup_diff, l1_diff) = compare_distributions(&doubled, &pb)?;
    Ok(ComparisonReport {
        baseline: "pegg-barnett".into(),
        window: *window,
        sup_diff,
        l1_diff,
        state_spec: spec.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{fock_state, BasisIndex, Boundary, Polarization};
    use crate::operators::{
        build_helicity, build_number, build_susskind_glogower, commutator, cosine_sine_of,
        NumberKind,
    };
    use crate::phase::phase_state_on;
    use std::f64::consts::TAU;

    #[test]
    fn sg_single_is_not_unitary() {
        let nw = SingleModeWindow::new(6);
        let e = build_sg_single(nw);
        let id = OperatorMatrix::identity(nw);
        assert_eq!(
            e.apply(&StateVector::basis(nw, 0).unwrap()).unwrap(),
            StateVector::zeros(nw)
        );

        let eed = e.product(&e.adjoint()).unwrap().sub(&id).unwrap();
        assert_eq!(
            eed.nonzero_entries(),
            vec![(6, 6, Complex64::new(-1.0, 0.0))]
        );
        let ede = e.adjoint().product(&e).unwrap().sub(&id).unwrap();
        assert_eq!(
            ede.nonzero_entries(),
            vec![(0, 0, Complex64::new(-1.0, 0.0))]
        );
    }

    #[test]
    fn sg_single_quadratures_do_not_commute() {
        let nw = SingleModeWindow::new(7);
        let (c, s) = cosine_sine_of(&build_sg_single(nw));
        let k = commutator(&c, &s).unwrap();
        let nz = k.nonzero_entries();
        assert_eq!(nz.len(), 2);
        assert_eq!((nz[0].0, nz[0].1), (0, 0));
        assert!((nz[0].2 - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        // Truncation edge.
        assert_eq!((nz[1].0, nz[1].1), (7, 7));
        assert!((nz[1].2 - Complex64::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn pegg_barnett_matches_its_spectral_form() {
        for (n_max, phi0) in [(0u64, 0.0), (1, 0.4), (5, -0.9), (12, 2.0)] {
            let nw = SingleModeWindow::new(n_max);
            let u = build_pegg_barnett(nw, phi0);
            let grid = pegg_barnett_grid(nw, phi0);
            let mut spectral = OperatorMatrix::zeros(nw, "spectral");
            for &theta in grid.points() {
                let v = phase_state_on(nw, theta);
                let proj = ndarray::Array2::from_shape_fn((nw.dim(), nw.dim()), |(r, c)| {
                    v.amplitudes()[r] * v.amplitudes()[c].conj() * Complex64::from_polar(1.0, theta)
                });
                spectral = spectral
                    .add(&OperatorMatrix::from_entries(nw, proj, "p").unwrap())
                    .unwrap();
            }
            assert!(u.max_abs_diff(&spectral).unwrap() < 1e-13, "n_max {n_max}");
            let uud = u.product(&u.adjoint()).unwrap();
            assert!(uud.max_abs_diff(&OperatorMatrix::identity(nw)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn two_level_pegg_barnett_spectrum() {
        let nw = SingleModeWindow::new(1);
        let u = build_pegg_barnett(nw, 0.0);
        for (theta, lambda) in [(0.0, 1.0), (TAU / 2.0, -1.0)] {
            let v = phase_state_on(nw, theta);
            let image = u.apply(&v).unwrap();
            assert!(
                image
                    .max_abs_diff(&v.scaled(Complex64::new(lambda, 0.0)))
                    .unwrap()
                    < 1e-15
            );
        }
    }

    #[test]
    fn restriction_recovers_single_mode_operators() {
        for boundary in [Boundary::Open, Boundary::Cyclic] {
            let w = Window::symmetric(6, boundary).unwrap();
            let e = restrict_to_upper(&build_susskind_glogower(&w)).unwrap();
            let sg = build_sg_single(SingleModeWindow::new(6));
            assert_eq!(e.entries(), sg.entries());
            assert_eq!(e.space(), sg.space());
        }
        let w = Window::new(-3, 4, Boundary::Open, 0.0).unwrap();
        let n = restrict_to_upper(&build_number(&w, NumberKind::Label)).unwrap();
        let expected: Vec<f64> = (0..=4).map(|n| n as f64).collect();
        assert_eq!(
            n.entries().diag().iter().map(|c| c.re).collect::<Vec<_>>(),
            expected
        );
        let h = restrict_to_upper(&build_helicity(&w)).unwrap();
        assert_eq!(
            h.entries(),
            OperatorMatrix::identity(SingleModeWindow::new(4)).entries()
        );
        assert!(restrict_to_upper(&build_sg_single(SingleModeWindow::new(3))).is_err());
    }

    #[test]
    fn comparisons() {
        let nw = SingleModeWindow::new(9);
        let grid = pegg_barnett_grid(nw, 0.0);
        let flat = phase_distribution(&StateVector::basis(nw, 3).unwrap(), &grid).unwrap();
        let w = Window::symmetric(9, Boundary::Cyclic).unwrap();
        let doubled_flat =
            doubled_distribution_on(&fock_state(&w, BasisIndex(5)).unwrap(), &grid).unwrap();
        assert_eq!(compare_distributions(&flat, &flat).unwrap(), (0.0, 0.0));
        let (sup, l1) = compare_distributions(&flat, &doubled_flat).unwrap();
        assert!(sup < 1e-15 && l1 < 1e-14);

        let other = phase_distribution(
            &StateVector::basis(nw, 3).unwrap(),
            &pegg_barnett_grid(nw, 0.3),
        )
        .unwrap();
        assert!(matches!(
            compare_distributions(&flat, &other),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn aliasing_is_refused() {
        let w = Window::symmetric(4, Boundary::Cyclic).unwrap();
        let grid = pegg_barnett_grid(SingleModeWindow::new(4), 0.0);
        let spread = fock_state(&w, BasisIndex(-3))
            .unwrap()
            .add(&fock_state(&w, BasisIndex(3)).unwrap())
            .unwrap()
            .normalized()
            .unwrap();
        // Labels -3..=3 span seven values on a five-point grid.
        assert!(doubled_distribution_on(&spread, &grid).is_err());
    }

    #[test]
    fn pegg_barnett_report() {
        let w = Window::symmetric(20, Boundary::Cyclic).unwrap();
        let spec = StateSpec::Coherent {
            polarization: Polarization::Upper,
            alpha: Complex64::new(1.0, 0.5),
        };
        let report = compare_with_pegg_barnett(&w, &spec, 0.0).unwrap();
        assert!(report.sup_diff < 1e-14);
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["baseline"], "pegg-barnett");
        assert_eq!(json["state_spec"], "coherent:upper,alpha=1+0.5i");
        assert_eq!(json["window"]["hi"], 20);

        let coherent =
            coherent_single(SingleModeWindow::new(20), Complex64::new(1.0, 0.5)).unwrap();
        let restricted = restrict_state_to_upper(&spec.build(&w).unwrap()).unwrap();
        assert!(coherent.max_abs_diff(&restricted).unwrap() < 1e-15);
    }
}
