//! Phase states, eigendecomposition of the cyclic shift, and phase
//! probability distributions.
//!
//! A doubled-space phase state has amplitudes `<n|phi> = e^{i(n+1/2)phi}/sqrt(D)`.
//! On the grid `phi_k = phi_0 + 2 pi k / D` these `D` states are orthonormal
//! and complete; at any other angle the same formula gives a non-orthogonal
//! interpolating state. Single-mode spaces use the integer phase label `n`
//! instead of `n + 1/2`, which is the truncated (Pegg-Barnett) phase basis.

use std::f64::consts::{PI, TAU};

use faer::{c64, Mat};
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockspace::{Boundary, Space, StateVector, Window};
use crate::operators::OperatorMatrix;

/// Tolerance on `sum |c_n|^2 - 1` accepted by [`phase_distribution`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Imaginary residue and Hermiticity defect accepted by
/// [`cosine_sine_expectation`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Eigenphases closer than this to `2 pi` are reported as `0`.
const PHASE_SNAP: f64 = 1e-10;

/// `D` equally spaced angles `phi_0 + 2 pi k / D` over one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    #[serde(rename = "window")]
    space: Space,
    offset: f64,
    points: Vec<f64>,
}

impl PhaseGrid {
    pub fn new(space: impl Into<Space>, offset: f64) -> Self {
        let space = space.into();
        let d = space.dim();
        let points = (0..d).map(|k| offset + TAU * k as f64 / d as f64).collect();
        PhaseGrid {
            space,
            offset,
            points,
        }
    }

    /// Grid of the exact eigenphases of the cyclic shift on `window`:
    /// `e^{i D phi} = e^{i wrap_phase}`, hence offset `wrap_phase / D`.
    pub fn eigenphases(window: &Window) -> Self {
        PhaseGrid::new(*window, window.wrap_phase() / window.dim() as f64)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same number of points and the same offset modulo `2 pi`.
    pub fn matches(&self, other: &PhaseGrid) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let delta = (self.offset - other.offset).rem_euclid(TAU);
        delta < 1e-12 || TAU - delta < 1e-12
    }
}

/// Phase weight of label `n`: `n + 1/2` on the doubled space, `n` on a
/// single-mode space.
pub fn phase_label(space: &Space, n: i64) -> f64 {
    match space {
        Space::Doubled(_) => n as f64 + 0.5,
        Space::Single(_) => n as f64,
    }
}

/// `<n|phi>` for the phase state of `space`.
pub fn phase_amplitude(space: &Space, n: i64, phi: f64) -> Complex64 {
    Complex64::from_polar(
        1.0 / (space.dim() as f64).sqrt(),
        phase_label(space, n) * phi,
    )
}

pub fn phase_state_on(space: impl Into<Space>, phi: f64) -> StateVector {
    let space = space.into();
    let amps: Array1<Complex64> = space
        .indices()
        .map(|n| phase_amplitude(&space, n, phi))
        .collect();
    StateVector::from_amplitudes(space, amps).expect("length matches by construction")
}

/// Doubled-space phase state `sum_n e^{i(n+1/2)phi}/sqrt(D) |n>`.
pub fn phase_state(window: &Window, phi: f64) -> StateVector {
    phase_state_on(*window, phi)
}

/// Matrix whose column `k` is the phase state at grid point `k`.
pub fn phase_basis(grid: &PhaseGrid) -> Array2<Complex64> {
    let space = grid.space;
    let d = space.dim();
    Array2::from_shape_fn((d, d), |(p, k)| {
        phase_amplitude(&space, space.index_at(p), grid.points[k])
    })
}

/// `exp(i delta n_label)`: translates every phase distribution by `+delta`.
pub fn build_phase_rotation(window: &Window, delta: f64) -> OperatorMatrix {
    let mut entries = Array2::zeros((window.dim(), window.dim()));
    for (p, n) in (window.lo()..=window.hi()).enumerate() {
        entries[[p, p]] = Complex64::from_polar(1.0, n as f64 * delta);
    }
    OperatorMatrix::from_entries(*window, entries, format!("rotation({delta})"))
        .expect("square by construction")
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub eigenvalue: Complex64,
    /// `arg(eigenvalue)` in `[0, 2 pi)`.
    pub phase: f64,
    /// Unit norm, amplitude at `n = 0` real and positive.
    pub vector: StateVector,
}

/// Eigenpairs of a cyclic Susskind-Glogower matrix, sorted by eigenphase.
///
/// Open-boundary shifts are defective (nilpotent), so they are refused.
pub fn eigen_decompose_sg(e: &OperatorMatrix) -> Result<Vec<EigenPair>> {
    let window = match e.space() {
        Space::Doubled(w) if w.boundary() == Boundary::Cyclic => *w,
        _ => return Err(Error::NotCyclic),
    };
    if !e.is_finite() {
        return Err(Error::Eigen("matrix has non-finite entries".into()));
    }
    let d = window.dim();
    let entries = e.entries();
    let m = Mat::<c64>::from_fn(d, d, |i, j| {
        let z = entries[[i, j]];
        c64::new(z.re, z.im)
    });
    let evd = m.eigen().map_err(|err| Error::Eigen(format!("{err:?}")))?;
    let values = evd.S();
    let vectors = evd.U();
    let seam = (0 - window.lo()) as usize;

    let mut pairs = Vec::with_capacity(d);
    for k in 0..d {
        let lambda = Complex64::new(values[k].re, values[k].im);
        let mut amps: Array1<Complex64> = (0..d)
            .map(|i| {
                let z = vectors[(i, k)];
                Complex64::new(z.re, z.im)
            })
            .collect();
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Eigen(format!("degenerate eigenvector {k}")));
        }
        let anchor = if amps[seam].norm() > 1e-8 * norm {
            amps[seam]
        } else {
            amps.iter()
                .copied()
                .fold(Complex64::new(0.0, 0.0), |best, c| {
                    if c.norm() > best.norm() {
                        c
                    } else {
                        best
                    }
                })
        };
        let fix = anchor.conj() / (anchor.norm() * norm);
        amps.mapv_inplace(|c| c * fix);
        amps[seam] = Complex64::new(amps[seam].re, 0.0);

        let mut phase = lambda.arg().rem_euclid(TAU);
        if TAU - phase < PHASE_SNAP {
            phase = 0.0;
        }
        pairs.push(EigenPair {
            eigenvalue: lambda,
            phase,
            vector: StateVector::from_amplitudes(window, amps)?,
        });
    }
    pairs.sort_by(|a, b| a.phase.total_cmp(&b.phase));
    Ok(pairs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution {
    pub grid: PhaseGrid,
    pub probabilities: Vec<f64>,
    pub circular_mean: f64,
    pub circular_variance: f64,
}

impl PhaseDistribution {
    /// Attach circular statistics to a probability vector on `grid`.
    pub fn from_probabilities(grid: PhaseGrid, probabilities: Vec<f64>) -> Self {
        let (circular_mean, circular_variance) = circular_stats(grid.points(), &probabilities);
        PhaseDistribution {
            grid,
            probabilities,
            circular_mean,
            circular_variance,
        }
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Copy with every number rounded to 12 significant digits, the precision
    /// of the CSV and JSON outputs.
    pub fn rounded(&self) -> PhaseDistribution {
        PhaseDistribution {
            grid: PhaseGrid {
                space: self.grid.space,
                offset: round_sig(self.grid.offset),
                points: self.grid.points.iter().map(|x| round_sig(*x)).collect(),
            },
            probabilities: self.probabilities.iter().map(|x| round_sig(*x)).collect(),
            circular_mean: round_sig(self.circular_mean),
            circular_variance: round_sig(self.circular_variance),
        }
    }

    /// `phi,probability` rows in ascending phase, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi,probability\n");
        for (phi, p) in self.grid.points.iter().zip(&self.probabilities) {
            out.push_str(&format_sig(*phi));
            out.push(',');
            out.push_str(&format_sig(*p));
            out.push('\n');
        }
        out
    }

    /// JSON mirror of the distribution, carrying the same rounded numbers as
    /// [`PhaseDistribution::to_csv`].
    pub fn to_json(&self) -> serde_json::Value {
        let r = self.rounded();
        serde_json::json!({
            "grid": r.grid,
            "probabilities": r.probabilities,
            "circular_mean": r.circular_mean,
            "circular_variance": r.circular_variance,
        })
    }
}

/// Text form with 12 significant digits.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000e0".to_string();
    }
    format!("{x:.11e}")
}

pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().expect("formatted float parses")
}

/// `(arg R, 1 - |R|)` with `R = sum_k p_k e^{i phi_k}`.
pub fn circular_stats(points: &[f64], probabilities: &[f64]) -> (f64, f64) {
    let r: Complex64 = points
        .iter()
        .zip(probabilities)
        .map(|(phi, p)| Complex64::from_polar(*p, *phi))
        .sum();
    (r.arg(), 1.0 - r.norm())
}

/// Born-rule distribution `p_k = |<phi_k|state>|^2` over the grid.
pub fn phase_distribution(state: &StateVector, grid: &PhaseGrid) -> Result<PhaseDistribution> {
    state.space().ensure_same(grid.space())?;
    let norm_sq = state.norm_sqr();
    if (norm_sq - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized { norm_sq });
    }
    let probabilities = projected_weights(state, grid.points(), grid.space());
    Ok(PhaseDistribution::from_probabilities(
        grid.clone(),
        probabilities,
    ))
}

/// `|<phi|state>|^2` at each angle, with the phase states of `basis_space`
/// (whose dimension sets the normalization).
pub(crate) fn projected_weights(
    state: &StateVector,
    points: &[f64],
    basis_space: &Space,
) -> Vec<f64> {
    let space = *state.space();
    let scale = 1.0 / basis_space.dim() as f64;
    let support: Vec<(f64, Complex64)> = space
        .indices()
        .zip(state.amplitudes().iter())
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .map(|(n, c)| (phase_label(&space, n), *c))
        .collect();
    points
        .par_iter()
        .map(|&phi| {
            let overlap: Complex64 = support
                .iter()
                .map(|(label, c)| Complex64::from_polar(1.0, -label * phi) * c)
                .sum();
            overlap.norm_sqr() * scale
        })
        .collect()
}

/// `(<state|C|state>, <state|S|state>)` for Hermitian quadratures.
pub fn cosine_sine_expectation(
    state: &StateVector,
    c: &OperatorMatrix,
    s: &OperatorMatrix,
) -> Result<(f64, f64)> {
    let mut out = [0.0; 2];
    for (slot, op) in out.iter_mut().zip([c, s]) {
        let defect = op.hermiticity_defect();
        if defect > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian {
                label: op.label().to_string(),
                deviation: defect,
            });
        }
        let value = state.inner(&op.apply(state)?)?;
        if value.im.abs() > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian {
                label: op.label().to_string(),
                deviation: value.im.abs(),
            });
        }
        *slot = value.re;
    }
    Ok((out[0], out[1]))
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}
