//! Basis labels, truncation windows and state vectors for the doubled Fock
//! space.
//!
//! The doubled space is indexed by every integer `n`. Non-negative labels are
//! the upper (right-circular) Fock states `|n_+>`; negative labels are the
//! lower (left-circular) states, where `n = -(m+1)` holds `m` photons. The two
//! zero-photon labels `0` and `-1` form the vacuum seam.

use std::fmt;
use std::str::FromStr;

use ndarray::Array1;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the coherent-state weight discarded by truncation.
pub const DEFAULT_TAIL_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    Upper,
    Lower,
}

/// Signed label of a doubled-space basis ket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(pub i64);

impl BasisIndex {
    pub fn polarization(self) -> Polarization {
        if self.0 >= 0 {
            Polarization::Upper
        } else {
            Polarization::Lower
        }
    }

    pub fn photon_count(self) -> u64 {
        photon_count(self)
    }

    /// Label carrying the same photon number on the opposite branch.
    pub fn mirrored(self) -> BasisIndex {
        BasisIndex(-(self.0 + 1))
    }
}

impl From<i64> for BasisIndex {
    fn from(n: i64) -> Self {
        BasisIndex(n)
    }
}

/// Number of photons carried by basis label `n`.
pub fn photon_count(n: BasisIndex) -> u64 {
    if n.0 >= 0 {
        n.0 as u64
    } else {
        (-(n.0 + 1)) as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// In-window matrix elements of the infinite operator; the edge
    /// transition is dropped.
    Open,
    /// The lowest label wraps to the highest with phase `e^{i wrap_phase}`.
    Cyclic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Open => f.write_str("open"),
            Boundary::Cyclic => f.write_str("cyclic"),
        }
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" => Ok(Boundary::Open),
            "cyclic" => Ok(Boundary::Cyclic),
            other => Err(Error::InvalidWindow(format!(
                "unknown boundary mode {other:?} (expected open or cyclic)"
            ))),
        }
    }
}

/// Inclusive range `[lo, hi]` of doubled-space labels.
///
/// Every window straddles the vacuum seam (`lo <= -1`, `hi >= 0`), so the
/// operators that couple the two branches are always representable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WindowFields")]
pub struct Window {
    lo: i64,
    hi: i64,
    boundary: Boundary,
    wrap_phase: f64,
}

#[derive(Deserialize)]
struct WindowFields {
    lo: i64,
    hi: i64,
    boundary: Boundary,
    #[serde(default)]
    wrap_phase: f64,
}

impl TryFrom<WindowFields> for Window {
    type Error = Error;

    fn try_from(w: WindowFields) -> Result<Self> {
        Window::new(w.lo, w.hi, w.boundary, w.wrap_phase)
    }
}

impl Window {
    pub fn new(lo: i64, hi: i64, boundary: Boundary, wrap_phase: f64) -> Result<Self> {
        if lo > -1 {
            return Err(Error::InvalidWindow(format!(
                "lo = {lo} must be <= -1 so the lower vacuum is included"
            )));
        }
        if hi < 0 {
            return Err(Error::InvalidWindow(format!(
                "hi = {hi} must be >= 0 so the upper vacuum is included"
            )));
        }
        if hi.checked_sub(lo).and_then(|d| d.checked_add(1)).is_none() {
            return Err(Error::InvalidWindow("window dimension overflows".into()));
        }
        if !wrap_phase.is_finite() {
            return Err(Error::InvalidWindow("wrap_phase must be finite".into()));
        }
        Ok(Window {
            lo,
            hi,
            boundary,
            wrap_phase,
        })
    }

    /// Window with equal photon capacity `n_max` on both branches:
    /// `lo = -(n_max + 1)`, `hi = n_max`.
    pub fn symmetric(n_max: i64, boundary: Boundary) -> Result<Self> {
        if n_max < 0 {
            return Err(Error::InvalidWindow(format!(
                "n_max = {n_max} must be >= 0"
            )));
        }
        Window::new(-(n_max + 1), n_max, boundary, 0.0)
    }

    pub fn with_boundary(self, boundary: Boundary) -> Self {
        Window { boundary, ..self }
    }

    pub fn with_wrap_phase(self, wrap_phase: f64) -> Result<Self> {
        Window::new(self.lo, self.hi, self.boundary, wrap_phase)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn wrap_phase(&self) -> f64 {
        self.wrap_phase
    }

    pub fn dim(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_symmetric(&self) -> bool {
        self.lo == -(self.hi + 1)
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }
}

/// Single-polarization Fock space truncated to `0..=n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SingleModeWindow {
    pub n_max: u64,
}

impl SingleModeWindow {
    pub fn new(n_max: u64) -> Self {
        SingleModeWindow { n_max }
    }

    pub fn dim(&self) -> usize {
        self.n_max as usize + 1
    }
}

/// The space a vector or matrix is expressed over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Space {
    Doubled(Window),
    Single(SingleModeWindow),
}

impl Space {
    pub fn lo(&self) -> i64 {
        match self {
            Space::Doubled(w) => w.lo,
            Space::Single(_) => 0,
        }
    }

    pub fn hi(&self) -> i64 {
        match self {
            Space::Doubled(w) => w.hi,
            Space::Single(s) => s.n_max as i64,
        }
    }

    pub fn dim(&self) -> usize {
        (self.hi() - self.lo() + 1) as usize
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo() <= n && n <= self.hi()
    }

    /// Storage position `n - lo`, if `n` is inside the space.
    pub fn position(&self, n: i64) -> Option<usize> {
        self.contains(n).then(|| (n - self.lo()) as usize)
    }

    pub fn index_at(&self, p: usize) -> i64 {
        self.lo() + p as i64
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.lo()..=self.hi()
    }

    pub fn window(&self) -> Option<&Window> {
        match self {
            Space::Doubled(w) => Some(w),
            Space::Single(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Space::Doubled(w) => format!(
                "doubled[{}, {}] {} wrap={}",
                w.lo, w.hi, w.boundary, w.wrap_phase
            ),
            Space::Single(s) => format!("single[0, {}]", s.n_max),
        }
    }

    pub(crate) fn ensure_same(&self, other: &Space) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                left: self.describe(),
                right: other.describe(),
            })
        }
    }
}

impl From<Window> for Space {
    fn from(w: Window) -> Self {
        Space::Doubled(w)
    }
}

impl From<SingleModeWindow> for Space {
    fn from(s: SingleModeWindow) -> Self {
        Space::Single(s)
    }
}

/// Complex amplitudes over a space; labels outside the space are implicitly
/// zero.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: Space,
    amplitudes: Array1<Complex64>,
    tail_weight: f64,
}

impl StateVector {
    pub fn from_amplitudes(space: impl Into<Space>, amplitudes: Array1<Complex64>) -> Result<Self> {
        let space = space.into();
        if amplitudes.len() != space.dim() {
            return Err(Error::InvalidWindow(format!(
                "{} amplitudes supplied for a space of dimension {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        Ok(StateVector {
            space,
            amplitudes,
            tail_weight: 0.0,
        })
    }

    pub fn zeros(space: impl Into<Space>) -> Self {
        let space = space.into();
        StateVector {
            space,
            amplitudes: Array1::zeros(space.dim()),
            tail_weight: 0.0,
        }
    }

    /// Unit vector on label `n`.
    pub fn basis(space: impl Into<Space>, n: i64) -> Result<Self> {
        let space = space.into();
        let p = space.position(n).ok_or(Error::IndexOutOfWindow {
            n,
            lo: space.lo(),
            hi: space.hi(),
        })?;
        let mut s = StateVector::zeros(space);
        s.amplitudes[p] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    /// Amplitude on label `n` (zero outside the space).
    pub fn amplitude(&self, n: i64) -> Complex64 {
        self.space
            .position(n)
            .map_or(Complex64::new(0.0, 0.0), |p| self.amplitudes[p])
    }

    /// Weight discarded when the state was truncated to its space, before
    /// renormalization.
    pub fn tail_weight(&self) -> f64 {
        self.tail_weight
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.space.ensure_same(&other.space)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn normalized(&self) -> Result<StateVector> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sq: self.norm_sqr(),
            });
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> StateVector {
        StateVector {
            space: self.space,
            amplitudes: self.amplitudes.mapv(|c| c * factor),
            tail_weight: self.tail_weight,
        }
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        self.space.ensure_same(&other.space)?;
        Ok(StateVector {
            space: self.space,
            amplitudes: &self.amplitudes + &other.amplitudes,
            tail_weight: 0.0,
        })
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.space.ensure_same(&other.space)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn with_tail_weight(mut self, tail_weight: f64) -> Self {
        self.tail_weight = tail_weight;
        self
    }
}

pub fn fock_state(window: &Window, n: BasisIndex) -> Result<StateVector> {
    StateVector::basis(*window, n.0)
}

/// Normalized `(|0> + |-1>)/sqrt(2)`.
pub fn vacuum_symmetric(window: &Window) -> StateVector {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut s = StateVector::zeros(*window);
    for n in [0, -1] {
        s.amplitudes[(n - window.lo) as usize] = h;
    }
    s
}

pub fn coherent_state(window: &Window, pol: Polarization, alpha: Complex64) -> Result<StateVector> {
    coherent_state_with_threshold(window, pol, alpha, DEFAULT_TAIL_THRESHOLD)
}

/// Coherent amplitudes `alpha^m / sqrt(m!)` on one polarization branch,
/// renormalized over the window.
pub fn coherent_state_with_threshold(
    window: &Window,
    pol: Polarization,
    alpha: Complex64,
    tail_threshold: f64,
) -> Result<StateVector> {
    let capacity = match pol {
        Polarization::Upper => window.hi as usize,
        Polarization::Lower => (-(window.lo + 1)) as usize,
    };
    let (amps, tail) = coherent_amplitudes(alpha, capacity);
    if tail > tail_threshold {
        return Err(Error::TailTooLarge {
            tail,
            threshold: tail_threshold,
        });
    }
    let mut s = StateVector::zeros(*window);
    for (m, c) in amps.into_iter().enumerate() {
        let n = match pol {
            Polarization::Upper => m as i64,
            Polarization::Lower => -(m as i64 + 1),
        };
        let p = (n - window.lo) as usize;
        s.amplitudes[p] = c;
    }
    Ok(s.normalized()?.with_tail_weight(tail))
}

/// Coherent-state amplitudes for photon numbers `0..=capacity` (with the
/// usual `exp(-|alpha|^2/2)` prefactor) and the weight of the discarded tail.
///
/// Magnitudes are accumulated in log space so large `|alpha|` cannot overflow.
pub(crate) fn coherent_amplitudes(alpha: Complex64, capacity: usize) -> (Vec<Complex64>, f64) {
    let mut amps = vec![Complex64::new(0.0, 0.0); capacity + 1];
    if alpha.norm_sqr() == 0.0 {
        amps[0] = Complex64::new(1.0, 0.0);
        return (amps, 0.0);
    }
    let r2 = alpha.norm_sqr();
    let ln_r = alpha.norm().ln();
    let arg = alpha.arg();
    let mut ln_fact = 0.0;
    for (m, slot) in amps.iter_mut().enumerate() {
        if m > 0 {
            ln_fact += (m as f64).ln();
        }
        let ln_mag = -0.5 * r2 + m as f64 * ln_r - 0.5 * ln_fact;
        *slot = Complex64::from_polar(ln_mag.exp(), m as f64 * arg);
    }

    // Poisson weight beyond the capacity, summed directly so tiny tails keep
    // their relative precision.
    let mut tail = 0.0;
    let mut m = capacity + 1;
    loop {
        ln_fact += (m as f64).ln();
        let w = (-r2 + 2.0 * m as f64 * ln_r - ln_fact).exp();
        tail += w;
        if m as f64 > r2 && w <= f64::EPSILON * tail {
            break;
        }
        m += 1;
    }
    (amps, tail)
}

/// Parse `a+bi` / `a-bi` with decimal reals.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::ComplexLiteral(s.to_string());
    let body = s
        .strip_suffix('i')
        .or_else(|| s.strip_suffix('I'))
        .ok_or_else(bad)?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im_text = &body[split..];
    let im: f64 = im_text
        .strip_prefix('+')
        .unwrap_or(im_text)
        .parse()
        .map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub fn format_complex(c: Complex64) -> String {
    if c.im.is_sign_negative() {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// A state named by the command-line mini-language.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Fock(i64),
    Coherent {
        polarization: Polarization,
        alpha: Complex64,
    },
    VacuumSymmetric,
}

impl StateSpec {
    pub fn build(&self, window: &Window) -> Result<StateVector> {
        match *self {
            StateSpec::Fock(n) => fock_state(window, BasisIndex(n)),
            StateSpec::Coherent {
                polarization,
                alpha,
            } => coherent_state(window, polarization, alpha),
            StateSpec::VacuumSymmetric => Ok(vacuum_symmetric(window)),
        }
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let fail = |reason: &str| Error::StateSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        if spec.chars().any(char::is_whitespace) {
            return Err(fail("whitespace is not allowed"));
        }
        let lower = spec.to_ascii_lowercase();
        let (kind, rest) = lower
            .split_once(':')
            .ok_or_else(|| fail("expected <kind>:<arguments>"))?;
        match kind {
            "fock" => rest
                .parse::<i64>()
                .map(StateSpec::Fock)
                .map_err(|_| fail("fock label must be an integer")),
            "vacuum" if rest == "sym" => Ok(StateSpec::VacuumSymmetric),
            "vacuum" => Err(fail("only vacuum:sym is supported")),
            "coherent" => {
                let (pol, arg) = rest
                    .split_once(',')
                    .ok_or_else(|| fail("expected coherent:<upper|lower>,alpha=<a+bi>"))?;
                let polarization = match pol {
                    "upper" => Polarization::Upper,
                    "lower" => Polarization::Lower,
                    _ => return Err(fail("polarization must be upper or lower")),
                };
                let literal = arg
                    .strip_prefix("alpha=")
                    .ok_or_else(|| fail("expected alpha=<a+bi>"))?;
                let alpha = parse_complex(literal)?;
                Ok(StateSpec::Coherent {
                    polarization,
                    alpha,
                })
            }
            _ => Err(fail("unknown state kind")),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Fock(n) => write!(f, "fock:{n}"),
            StateSpec::Coherent {
                polarization,
                alpha,
            } => {
                let pol = match polarization {
                    Polarization::Upper => "upper",
                    Polarization::Lower => "lower",
                };
                write!(f, "coherent:{pol},alpha={}", format_complex(*alpha))
            }
            StateSpec::VacuumSymmetric => f.write_str("vacuum:sym"),
        }
    }
}
