//! Dense matrix representations of the doubled-space ladder, number and phase
//! operators, and the small amount of operator arithmetic the checks need.
//!
//! Matrices are stored densely in ascending label order (row/column position
//! `n - lo`). Every operator built here has bandwidth one plus at most one
//! wrap element, so [`OperatorMatrix::product`] takes a row-sparse path when
//! the left factor is sparse.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockspace::{photon_count, BasisIndex, Boundary, Space, StateVector, Window};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    space: Space,
    entries: Array2<Complex64>,
    label: String,
}

impl OperatorMatrix {
    pub fn zeros(space: impl Into<Space>, label: impl Into<String>) -> Self {
        let space = space.into();
        let d = space.dim();
        OperatorMatrix {
            space,
            entries: Array2::zeros((d, d)),
            label: label.into(),
        }
    }

    pub fn identity(space: impl Into<Space>) -> Self {
        let space = space.into();
        OperatorMatrix {
            space,
            entries: Array2::eye(space.dim()),
            label: "I".into(),
        }
    }

    /// Diagonal operator with `f(n)` on label `n`.
    pub fn diagonal(
        space: impl Into<Space>,
        label: impl Into<String>,
        f: impl Fn(i64) -> f64,
    ) -> Self {
        let mut op = OperatorMatrix::zeros(space, label);
        for (p, n) in op.space.indices().enumerate() {
            op.entries[[p, p]] = Complex64::new(f(n), 0.0);
        }
        op
    }

    /// `|row><col|`.
    pub fn outer(space: impl Into<Space>, row: i64, col: i64) -> Result<Self> {
        let mut op = OperatorMatrix::zeros(space, format!("|{row}><{col}|"));
        op.set(row, col, ONE)?;
        Ok(op)
    }

    pub fn projector(space: impl Into<Space>, n: i64) -> Result<Self> {
        OperatorMatrix::outer(space, n, n)
    }

    pub fn from_entries(
        space: impl Into<Space>,
        entries: Array2<Complex64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let space = space.into();
        let d = space.dim();
        if entries.dim() != (d, d) {
            return Err(Error::InvalidWindow(format!(
                "matrix of shape {:?} does not match dimension {d}",
                entries.dim()
            )));
        }
        Ok(OperatorMatrix {
            space,
            entries,
            label: label.into(),
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Matrix element `<row|A|col>`; zero when either label is outside the
    /// space.
    pub fn element(&self, row: i64, col: i64) -> Complex64 {
        match (self.space.position(row), self.space.position(col)) {
            (Some(r), Some(c)) => self.entries[[r, c]],
            _ => ZERO,
        }
    }

    fn set(&mut self, row: i64, col: i64, value: Complex64) -> Result<()> {
        let pos = |n: i64| {
            self.space.position(n).ok_or(Error::IndexOutOfWindow {
                n,
                lo: self.space.lo(),
                hi: self.space.hi(),
            })
        };
        let (r, c) = (pos(row)?, pos(col)?);
        self.entries[[r, c]] = value;
        Ok(())
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            space: self.space,
            entries: self.entries.t().mapv(|c| c.conj()),
            label: format!("{}^dagger", self.label),
        }
    }

    pub fn product(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.space.ensure_same(&rhs.space)?;
        let d = self.space.dim();
        let nnz = self.entries.iter().filter(|c| **c != ZERO).count();
        let entries = if nnz <= 4 * d {
            let mut out = Array2::zeros((d, d));
            for ((i, k), &a) in self.entries.indexed_iter() {
                if a != ZERO {
                    let src = rhs.entries.row(k);
                    let mut dst = out.row_mut(i);
                    Zip::from(&mut dst).and(&src).for_each(|o, &b| *o += a * b);
                }
            }
            out
        } else {
            self.entries.dot(&rhs.entries)
        };
        Ok(OperatorMatrix {
            space: self.space,
            entries,
            label: format!("({})({})", self.label, rhs.label),
        })
    }

    pub fn add(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.space.ensure_same(&rhs.space)?;
        Ok(OperatorMatrix {
            space: self.space,
            entries: &self.entries + &rhs.entries,
            label: format!("{} + {}", self.label, rhs.label),
        })
    }

    pub fn sub(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.space.ensure_same(&rhs.space)?;
        Ok(OperatorMatrix {
            space: self.space,
            entries: &self.entries - &rhs.entries,
            label: format!("{} - {}", self.label, rhs.label),
        })
    }

    pub fn scale(&self, factor: Complex64) -> OperatorMatrix {
        OperatorMatrix {
            space: self.space,
            entries: self.entries.mapv(|c| c * factor),
            label: format!("({}) {}", factor, self.label),
        }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        self.space.ensure_same(v.space())?;
        let out: Array1<Complex64> = self.entries.dot(v.amplitudes());
        StateVector::from_amplitudes(self.space, out)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &OperatorMatrix) -> Result<f64> {
        self.space.ensure_same(&rhs.space)?;
        Ok(Zip::from(&self.entries)
            .and(&rhs.entries)
            .fold(0.0, |m, a, b| f64::max(m, (a - b).norm())))
    }

    /// `max |A - A^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.space.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.entries[[r, c]] - self.entries[[c, r]].conj()).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Nonzero entries as `(row label, col label, value)`, sorted by row then
    /// column.
    pub fn nonzero_entries(&self) -> Vec<(i64, i64, Complex64)> {
        self.entries
            .indexed_iter()
            .filter(|(_, c)| **c != ZERO)
            .map(|((r, c), &v)| (self.space.index_at(r), self.space.index_at(c), v))
            .collect()
    }

    pub fn dump(&self) -> Result<OperatorDump> {
        let window = *self.space.window().ok_or(Error::WrongSpace {
            expected: "doubled",
        })?;
        Ok(OperatorDump {
            window,
            label: self.label.clone(),
            entries: self
                .nonzero_entries()
                .into_iter()
                .map(|(r, c, v)| (r, c, v.re, v.im))
                .collect(),
        })
    }
}

/// JSON layout of the `operators` subcommand: nonzero entries as
/// `[row n, col n, re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDump {
    pub window: Window,
    pub label: String,
    pub entries: Vec<(i64, i64, f64, f64)>,
}

pub fn adjoint(a: &OperatorMatrix) -> OperatorMatrix {
    a.adjoint()
}

pub fn product(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.product(b)
}

pub fn apply(a: &OperatorMatrix, v: &StateVector) -> Result<StateVector> {
    a.apply(v)
}

/// `AB - BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    let ab = a.product(b)?;
    let ba = b.product(a)?;
    Ok(ab
        .sub(&ba)?
        .with_label(format!("[{}, {}]", a.label, b.label)))
}

/// Helicity: `+1` on the upper branch, `-1` on the lower branch.
pub fn build_helicity(window: &Window) -> OperatorMatrix {
    OperatorMatrix::diagonal(*window, "helicity", |n| if n >= 0 { 1.0 } else { -1.0 })
}

/// Upper-branch annihilator: `<n-1|a_+|n> = sqrt(n)` for `1 <= n <= hi`.
pub fn build_a_plus(window: &Window) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(*window, "a_plus");
    for n in 1..=window.hi() {
        op.set(n - 1, n, Complex64::new((n as f64).sqrt(), 0.0))
            .unwrap();
    }
    op
}

pub fn build_a_plus_dagger(window: &Window) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(*window, "a_plus_dagger");
    for n in 0..window.hi() {
        op.set(n + 1, n, Complex64::new(((n + 1) as f64).sqrt(), 0.0))
            .unwrap();
    }
    op
}

/// Lower-branch operator with `<n-1|a_-|n> = sqrt(|n|)` for
/// `lo+1 <= n <= -1`. On the lower branch it moves away from the vacuum `-1`.
pub fn build_a_minus(window: &Window) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(*window, "a_minus");
    for n in (window.lo() + 1)..=-1 {
        op.set(
            n - 1,
            n,
            Complex64::new((n.unsigned_abs() as f64).sqrt(), 0.0),
        )
        .unwrap();
    }
    op
}

/// `<n+1|a_-^dagger|n> = sqrt(|n+1|)` for `n <= -2`; annihilates `|-1>`.
pub fn build_a_minus_dagger(window: &Window) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(*window, "a_minus_dagger");
    for n in window.lo()..=-2 {
        op.set(
            n + 1,
            n,
            Complex64::new(((n + 1).unsigned_abs() as f64).sqrt(), 0.0),
        )
        .unwrap();
    }
    op
}

/// Vacuum coupler `|-1><0|`, assembled as the outer product sandwiched
/// between the lower and upper helicity projectors.
pub fn build_a_v(window: &Window) -> OperatorMatrix {
    let id = OperatorMatrix::identity(*window);
    let hel = build_helicity(window);
    let half = Complex64::new(0.5, 0.0);
    let lower = id.sub(&hel).unwrap().scale(half);
    let upper = id.add(&hel).unwrap().scale(half);
    let flip = OperatorMatrix::outer(*window, -1, 0).unwrap();
    lower
        .product(&flip)
        .and_then(|m| m.product(&upper))
        .unwrap()
        .with_label("a_v")
}

/// Coefficient of the `n -> n-1` transition of `a_m`.
pub fn lowering_coefficient(n: i64) -> f64 {
    if n == 0 {
        1.0
    } else {
        (n.unsigned_abs() as f64).sqrt()
    }
}

/// Doubled-space lowering operator: `a_+` on the upper block, `a_-` on the
/// lower block and `a_v` across the seam. Cyclic windows add
/// `<hi|a_m|lo> = sqrt(|lo|) e^{i wrap_phase}` so that `a_m = E_m diag(c)`
/// holds on the whole window.
pub fn build_a_m(window: &Window) -> OperatorMatrix {
    let mut op = build_a_plus(window)
        .add(&build_a_v(window))
        .and_then(|m| m.add(&build_a_minus(window)))
        .unwrap()
        .with_label("a_m");
    if window.boundary() == Boundary::Cyclic {
        let wrap = Complex64::from_polar(lowering_coefficient(window.lo()), window.wrap_phase());
        op.set(window.hi(), window.lo(), wrap).unwrap();
    }
    op
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumberKind {
    /// Signed basis label `n`.
    Label,
    /// Photon number: `n` upper, `-(n+1)` lower.
    Photon,
    /// Lower block read as `a_- a_-^dagger - 1`, giving `|n+1| - 1`.
    #[serde(rename = "eq14_literal")]
    LiteralOrdering,
}

impl NumberKind {
    pub const ALL: [NumberKind; 3] = [
        NumberKind::Label,
        NumberKind::Photon,
        NumberKind::LiteralOrdering,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            NumberKind::Label => "label",
            NumberKind::Photon => "photon",
            NumberKind::LiteralOrdering => "eq14_literal",
        }
    }

    pub fn diagonal_value(&self, n: i64) -> f64 {
        match self {
            NumberKind::Label => n as f64,
            NumberKind::Photon => photon_count(BasisIndex(n)) as f64,
            NumberKind::LiteralOrdering if n >= 0 => n as f64,
            NumberKind::LiteralOrdering => (n + 1).unsigned_abs() as f64 - 1.0,
        }
    }
}

impl fmt::Display for NumberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NumberKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NumberKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownOperator(format!("number kind {s}")))
    }
}

pub fn build_number(window: &Window, kind: NumberKind) -> OperatorMatrix {
    OperatorMatrix::diagonal(*window, format!("number[{kind}]"), |n| {
        kind.diagonal_value(n)
    })
}

/// Pure lower shift `<n-1|E_m|n> = 1`; cyclic windows add
/// `<hi|E_m|lo> = e^{i wrap_phase}`.
pub fn build_susskind_glogower(window: &Window) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(*window, "E_m");
    for n in (window.lo() + 1)..=window.hi() {
        op.set(n - 1, n, ONE).unwrap();
    }
    if window.boundary() == Boundary::Cyclic {
        op.set(
            window.hi(),
            window.lo(),
            Complex64::from_polar(1.0, window.wrap_phase()),
        )
        .unwrap();
    }
    op
}

/// `C = (E + E^dagger)/2` and `S = (E - E^dagger)/(2i)` of any shift-like `E`.
pub fn cosine_sine_of(e: &OperatorMatrix) -> (OperatorMatrix, OperatorMatrix) {
    let ed = e.adjoint();
    let c = e.add(&ed).unwrap().scale(Complex64::new(0.5, 0.0));
    let s = e.sub(&ed).unwrap().scale(Complex64::new(0.0, -0.5));
    (
        c.with_label(format!("C[{}]", e.label())),
        s.with_label(format!("S[{}]", e.label())),
    )
}

pub fn build_cosine_sine(window: &Window) -> (OperatorMatrix, OperatorMatrix) {
    let (c, s) = cosine_sine_of(&build_susskind_glogower(window));
    (c.with_label("C"), s.with_label("S"))
}

/// Half-wave-plate permutation `|n> -> |-(n+1)>`.
pub fn build_polarization_swap(window: &Window) -> Result<OperatorMatrix> {
    if !window.is_symmetric() {
        return Err(Error::AsymmetricWindow {
            lo: window.lo(),
            hi: window.hi(),
        });
    }
    let mut op = OperatorMatrix::zeros(*window, "polarization_swap");
    for n in window.lo()..=window.hi() {
        op.set(BasisIndex(n).mirrored().0, n, ONE)?;
    }
    Ok(op)
}

/// Names accepted by [`build_named`].
pub const OPERATOR_NAMES: &[&str] = &[
    "helicity",
    "a_plus",
    "a_plus_dagger",
    "a_minus",
    "a_minus_dagger",
    "a_v",
    "a_v_dagger",
    "a_m",
    "a_m_dagger",
    "number_label",
    "number_photon",
    "number_eq14_literal",
    "susskind_glogower",
    "susskind_glogower_dagger",
    "cosine",
    "sine",
    "polarization_swap",
];

pub fn build_named(name: &str, window: &Window) -> Result<OperatorMatrix> {
    let op = match name {
        "helicity" => build_helicity(window),
        "a_plus" => build_a_plus(window),
        "a_plus_dagger" => build_a_plus_dagger(window),
        "a_minus" => build_a_minus(window),
        "a_minus_dagger" => build_a_minus_dagger(window),
        "a_v" => build_a_v(window),
        "a_v_dagger" => build_a_v(window).adjoint(),
        "a_m" => build_a_m(window),
        "a_m_dagger" => build_a_m(window).adjoint(),
        "number_label" => build_number(window, NumberKind::Label),
        "number_photon" => build_number(window, NumberKind::Photon),
        "number_eq14_literal" => build_number(window, NumberKind::LiteralOrdering),
        "susskind_glogower" => build_susskind_glogower(window),
        "susskind_glogower_dagger" => build_susskind_glogower(window).adjoint(),
        "cosine" => build_cosine_sine(window).0,
        "sine" => build_cosine_sine(window).1,
        "polarization_swap" => build_polarization_swap(window)?,
        other => return Err(Error::UnknownOperator(other.to_string())),
    };
    Ok(op.with_label(name))
}
