//! Graded multi-state vertex weights with two conserved state families of
//! sizes `m` and `n`, in additive, multiplicative, and root-of-unity reduced
//! form, plus the monomial-span certificate for the reduced entries and the
//! grading-reversal consistency residual.
//!
//! Conventions shared by every builder here: states are 1-based `1..=d` with
//! `d = m + n`; the first `m` states carry grading sign `+1`, the rest `-1`.
//! Storage is 0-based through [`RMatrix`], reading `get(i, j, k, l)` as
//! incoming pair `(i, j)` to outgoing pair `(k, l)`. Every nonzero entry
//! belongs to one of three families:
//!
//! - diagonal: `(a, a) -> (a, a)`,
//! - pass-through: `(b, a) -> (b, a)` with `a != b` (states keep their
//!   positions),
//! - exchange: `(b, a) -> (a, b)` with `a != b` (states swap positions).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::six_vertex::RootOfUnitySpec;
use crate::tensor::{Cplx, RMatrix, SupportRule, TensorError, C_ONE};

#[derive(Debug, Error)]
pub enum SlmnError {
    #[error("state space is empty: m = {m}, n = {n}")]
    EmptyStateSpace { m: usize, n: usize },
    #[error("parameter {0} must be finite")]
    NonFiniteParameter(&'static str),
    #[error("parameter {0} must be finite and nonzero")]
    BadParameter(&'static str),
    #[error("gauge for line {line} must list {expected} states, got {got}")]
    GaugeLength { line: char, expected: usize, got: usize },
    #[error("gauge for line {line}, state {state} must be finite and nonzero")]
    GaugeValue { line: char, state: usize },
    #[error("twist table must hold {expected} entries, got {got}")]
    TwistShape { expected: usize, got: usize },
    #[error("twist diagonal entry for state {state} must equal 1")]
    TwistDiagonal { state: usize },
    #[error("twist entry ({a}, {b}) must be finite and nonzero")]
    TwistValue { a: usize, b: usize },
    #[error("twist entries ({a}, {b}) and ({b}, {a}) are not reciprocal; defect {defect:.3e}")]
    TwistReciprocity { a: usize, b: usize, defect: f64 },
    #[error("entry {family} is not in the monomial span; fit residual {residual:.3e}")]
    SpanViolation { family: EntryFamily, residual: f64 },
    #[error("entry {family} has a fitted coefficient {distance:.3e} away from -1, 0, +1")]
    CoefficientOutsideSet { family: EntryFamily, distance: f64 },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Position class of a nonzero entry, with 1-based state labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryFamily {
    Diagonal { a: usize },
    /// `(b, a) -> (b, a)`, `a != b`.
    PassThrough { a: usize, b: usize },
    /// `(b, a) -> (a, b)`, `a != b`.
    Exchange { a: usize, b: usize },
}

impl EntryFamily {
    /// Storage indices `(i, j, k, l)` of the entry this family names.
    pub fn position(&self) -> (usize, usize, usize, usize) {
        match *self {
            EntryFamily::Diagonal { a } => (a - 1, a - 1, a - 1, a - 1),
            EntryFamily::PassThrough { a, b } => (b - 1, a - 1, b - 1, a - 1),
            EntryFamily::Exchange { a, b } => (b - 1, a - 1, a - 1, b - 1),
        }
    }
}

impl std::fmt::Display for EntryFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            EntryFamily::Diagonal { a } => write!(f, "diagonal(a={a})"),
            EntryFamily::PassThrough { a, b } => write!(f, "pass-through(a={a}, b={b})"),
            EntryFamily::Exchange { a, b } => write!(f, "exchange(a={a}, b={b})"),
        }
    }
}

/// Every entry family of a `d = m + n` state model, diagonals first, then
/// pass-through pairs, then exchange pairs, each in row-major (a, b) order.
pub fn entry_families(m: usize, n: usize) -> Vec<EntryFamily> {
    let d = m + n;
    let mut out = Vec::with_capacity(d + 2 * d * d.saturating_sub(1));
    for a in 1..=d {
        out.push(EntryFamily::Diagonal { a });
    }
    for a in 1..=d {
        for b in 1..=d {
            if a != b {
                out.push(EntryFamily::PassThrough { a, b });
            }
        }
    }
    for a in 1..=d {
        for b in 1..=d {
            if a != b {
                out.push(EntryFamily::Exchange { a, b });
            }
        }
    }
    out
}

fn classify(d: usize, i: usize, j: usize, k: usize, l: usize) -> Option<EntryFamily> {
    debug_assert!(i < d && j < d && k < d && l < d);
    if i == j && k == l && i == k {
        Some(EntryFamily::Diagonal { a: i + 1 })
    } else if i != j && i == k && j == l {
        Some(EntryFamily::PassThrough { a: j + 1, b: i + 1 })
    } else if i != j && i == l && j == k {
        Some(EntryFamily::Exchange { a: j + 1, b: i + 1 })
    } else {
        None
    }
}

/// Model parameters shared by the additive and multiplicative builders:
/// grading split, anisotropy `eta`, overall normalization, per-pair twists
/// `G` with `G[a][b] G[b][a] = 1`, and the two diagonal line gauges, one
/// `(plus, minus)` pair per state per line.
#[derive(Clone, Debug)]
pub struct SlmnParams {
    m: usize,
    n: usize,
    eta: Cplx,
    normalization: Cplx,
    /// Row-major `d x d`, diagonal fixed to 1.
    twists: Vec<Cplx>,
    gauge_p: Vec<[Cplx; 2]>,
    gauge_q: Vec<[Cplx; 2]>,
}

fn check_gauge(line: char, d: usize, g: &[[Cplx; 2]]) -> Result<(), SlmnError> {
    if g.len() != d {
        return Err(SlmnError::GaugeLength { line, expected: d, got: g.len() });
    }
    for (s, pair) in g.iter().enumerate() {
        for v in pair {
            if !v.is_finite() || v.norm() == 0.0 {
                return Err(SlmnError::GaugeValue { line, state: s + 1 });
            }
        }
    }
    Ok(())
}

impl SlmnParams {
    pub fn new(m: usize, n: usize, eta: Cplx) -> Result<Self, SlmnError> {
        let d = m + n;
        if d == 0 {
            return Err(SlmnError::EmptyStateSpace { m, n });
        }
        if !eta.is_finite() {
            return Err(SlmnError::NonFiniteParameter("eta"));
        }
        Ok(SlmnParams {
            m,
            n,
            eta,
            normalization: C_ONE,
            twists: vec![C_ONE; d * d],
            gauge_p: vec![[C_ONE, C_ONE]; d],
            gauge_q: vec![[C_ONE, C_ONE]; d],
        })
    }

    pub fn with_normalization(mut self, c: Cplx) -> Self {
        self.normalization = c;
        self
    }

    /// Install a twist table (row-major `d x d`, 1-based pair `(a, b)` at
    /// `(a-1) d + (b-1)`). The diagonal must be exactly 1 and off-diagonal
    /// pairs must satisfy `G[a][b] G[b][a] = 1` to within 1e-14.
    pub fn with_twists(mut self, twists: Vec<Cplx>) -> Result<Self, SlmnError> {
        let d = self.dim();
        if twists.len() != d * d {
            return Err(SlmnError::TwistShape { expected: d * d, got: twists.len() });
        }
        for a in 0..d {
            if twists[a * d + a] != C_ONE {
                return Err(SlmnError::TwistDiagonal { state: a + 1 });
            }
            for b in 0..d {
                if a == b {
                    continue;
                }
                let g = twists[a * d + b];
                if !g.is_finite() || g.norm() == 0.0 {
                    return Err(SlmnError::TwistValue { a: a + 1, b: b + 1 });
                }
                let defect = (g * twists[b * d + a] - C_ONE).norm();
                if defect > 1e-14 {
                    return Err(SlmnError::TwistReciprocity { a: a + 1, b: b + 1, defect });
                }
            }
        }
        self.twists = twists;
        Ok(self)
    }

    pub fn with_gauges(
        mut self,
        gauge_p: Vec<[Cplx; 2]>,
        gauge_q: Vec<[Cplx; 2]>,
    ) -> Result<Self, SlmnError> {
        let d = self.dim();
        check_gauge('p', d, &gauge_p)?;
        check_gauge('q', d, &gauge_q)?;
        self.gauge_p = gauge_p;
        self.gauge_q = gauge_q;
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    pub fn eta(&self) -> Cplx {
        self.eta
    }

    pub fn normalization(&self) -> Cplx {
        self.normalization
    }

    /// Grading sign of a 1-based state: `+1` for the first family, `-1` for
    /// the second.
    pub fn epsilon(&self, a: usize) -> f64 {
        if a <= self.m {
            1.0
        } else {
            -1.0
        }
    }

    /// Twist for the 1-based pair `(a, b)`.
    pub fn twist(&self, a: usize, b: usize) -> Cplx {
        self.twists[(a - 1) * self.dim() + (b - 1)]
    }

    /// Gauge factor `p_plus[r1] q_minus[r2] / (q_plus[r3] p_minus[r4])`
    /// with 1-based state slots. The denominator states are fixed per
    /// family while the numerator states track which line a state exits
    /// on, so the factors telescope in the vertex relation:
    ///
    /// - diagonal `a`: `(a, a, a, a)`,
    /// - pass-through `(a, b)`: `(a, b, b, a)`,
    /// - exchange `(a, b)`: `(b, a, b, a)`.
    fn gauge_factor(&self, r1: usize, r2: usize, r3: usize, r4: usize) -> Cplx {
        self.gauge_p[r1 - 1][0] * self.gauge_q[r2 - 1][1]
            / (self.gauge_q[r3 - 1][0] * self.gauge_p[r4 - 1][1])
    }
}

/// Build the additive-form weight matrix at rapidity offsets `p0`, `q0`
/// (only `p0 - q0` enters). Entry values, with `delta = p0 - q0` and `N`
/// the normalization:
///
/// - diagonal `a`: `N sinh(eta + eps_a delta)` times the `(a, a)` gauge
///   ratio,
/// - pass-through `(b, a) -> (b, a)`: `N G[a][b] sinh(delta)` times the
///   `(a, b)` gauge ratio,
/// - exchange `(b, a) -> (a, b)`: `N exp(delta sign(a - b)) sinh(eta)`
///   times the `(b, a)` gauge ratio.
pub fn build_slmn_additive(p: &SlmnParams, p0: Cplx, q0: Cplx) -> Result<RMatrix, SlmnError> {
    if !p0.is_finite() {
        return Err(SlmnError::NonFiniteParameter("p0"));
    }
    if !q0.is_finite() {
        return Err(SlmnError::NonFiniteParameter("q0"));
    }
    let d = p.dim();
    let delta = p0 - q0;
    let sinh_eta = p.eta.sinh();
    let sinh_delta = delta.sinh();
    let zero = Cplx::new(0.0, 0.0);
    let r = RMatrix::from_fn(d, d, SupportRule::Multiset, |i, j, k, l| {
        match classify(d, i, j, k, l) {
            Some(EntryFamily::Diagonal { a }) => {
                p.normalization
                    * (p.eta + delta * p.epsilon(a)).sinh()
                    * p.gauge_factor(a, a, a, a)
            }
            Some(EntryFamily::PassThrough { a, b }) => {
                p.normalization * p.twist(a, b) * sinh_delta * p.gauge_factor(a, b, b, a)
            }
            Some(EntryFamily::Exchange { a, b }) => {
                let sign = if a > b { 1.0 } else { -1.0 };
                p.normalization * (delta * sign).exp() * sinh_eta * p.gauge_factor(b, a, b, a)
            }
            None => zero,
        }
    })?;
    Ok(r)
}

/// Build the multiplicative-form weight matrix at spectral parameters `x`,
/// `y` (only `x / y` enters), with `q = exp(2 eta)`. Entry values, with `N`
/// the normalization:
///
/// - diagonal `a`: `N (1 - (x/y)/q)` for `eps_a = +1`, `N (x/y - 1/q)` for
///   `eps_a = -1`, times the `(a, a)` gauge ratio,
/// - pass-through: `N G[a][b] (1 - x/y) q^(-1/2)` times the `(a, b)` gauge
///   ratio,
/// - exchange: `N (1 - 1/q) (x/y)` for `a < b`, `N (1 - 1/q)` for `a > b`,
///   times the `(b, a)` gauge ratio.
///
/// Substituting `x = exp(2 q0)`, `y = exp(2 p0)` and scaling the
/// normalization by `q^(1/2) / 2 (y/x)^(1/2)` reproduces
/// [`build_slmn_additive`] exactly.
pub fn build_slmn_multiplicative(p: &SlmnParams, x: Cplx, y: Cplx) -> Result<RMatrix, SlmnError> {
    for (name, v) in [("x", x), ("y", y)] {
        if !v.is_finite() || v.norm() == 0.0 {
            return Err(SlmnError::BadParameter(name));
        }
    }
    let d = p.dim();
    let q = (p.eta * 2.0).exp();
    let qi = C_ONE / q;
    let xy = x / y;
    let q_isqrt = q.powf(-0.5);
    let zero = Cplx::new(0.0, 0.0);
    let r = RMatrix::from_fn(d, d, SupportRule::Multiset, |i, j, k, l| {
        match classify(d, i, j, k, l) {
            Some(EntryFamily::Diagonal { a }) => {
                let base = if p.epsilon(a) > 0.0 { C_ONE - xy * qi } else { xy - qi };
                p.normalization * base * p.gauge_factor(a, a, a, a)
            }
            Some(EntryFamily::PassThrough { a, b }) => {
                p.normalization * p.twist(a, b) * (C_ONE - xy) * q_isqrt * p.gauge_factor(a, b, b, a)
            }
            Some(EntryFamily::Exchange { a, b }) => {
                let base = if a < b { (C_ONE - qi) * xy } else { C_ONE - qi };
                p.normalization * base * p.gauge_factor(b, a, b, a)
            }
            None => zero,
        }
    })?;
    Ok(r)
}

/// Reduced entry value at deformation `q` and spectral parameters `x`, `y`.
/// Every value is a sum of monomials from `{1, 1/q, x/y, (x/y)/q}` with
/// coefficients in `{-1, 0, +1}`; no fractional powers appear.
fn root_entry(family: EntryFamily, m: usize, q: Cplx, x: Cplx, y: Cplx) -> Cplx {
    let qi = C_ONE / q;
    let xy = x / y;
    match family {
        EntryFamily::Diagonal { a } => {
            if a <= m {
                C_ONE - xy * qi
            } else {
                xy - qi
            }
        }
        EntryFamily::PassThrough { a, b } => {
            if a > b {
                C_ONE - xy
            } else {
                (C_ONE - xy) * qi
            }
        }
        EntryFamily::Exchange { a, b } => {
            if a < b {
                (C_ONE - qi) * xy
            } else {
                C_ONE - qi
            }
        }
    }
}

/// A reduced model instance: grading split, a primitive root of unity for
/// the deformation, and the spectral parameter pair.
#[derive(Clone, Copy, Debug)]
pub struct RootReducedSpec {
    pub m: usize,
    pub n: usize,
    pub root: RootOfUnitySpec,
    pub x: Cplx,
    pub y: Cplx,
}

impl RootReducedSpec {
    pub fn new(
        m: usize,
        n: usize,
        root: RootOfUnitySpec,
        x: Cplx,
        y: Cplx,
    ) -> Result<Self, SlmnError> {
        if m + n == 0 {
            return Err(SlmnError::EmptyStateSpace { m, n });
        }
        for (name, v) in [("x", x), ("y", y)] {
            if !v.is_finite() || v.norm() == 0.0 {
                return Err(SlmnError::BadParameter(name));
            }
        }
        Ok(RootReducedSpec { m, n, root, x, y })
    }
}

/// Build the root-of-unity reduced weight matrix: trivial gauges and
/// twists, normalization 1, entries given by the monomial forms of
/// `root_entry`. At `(m, n) = (2, 0)` this coincides entry for entry with
/// the fully monomial 2-state gauge.
pub fn build_slmn_root_of_unity(spec: &RootReducedSpec) -> Result<RMatrix, SlmnError> {
    let d = spec.m + spec.n;
    let q = spec.root.q();
    let zero = Cplx::new(0.0, 0.0);
    let r = RMatrix::from_fn(d, d, SupportRule::Multiset, |i, j, k, l| {
        match classify(d, i, j, k, l) {
            Some(family) => root_entry(family, spec.m, q, spec.x, spec.y),
            None => zero,
        }
    })?;
    Ok(r)
}

/// Result of fitting one scalar function of `(q, x, y)` against the basis
/// `[1, 1/q, x/y, (x/y)/q]`.
#[derive(Clone, Copy, Debug)]
pub struct SpanFit {
    /// Coefficients in basis order.
    pub coefficients: [Cplx; 4],
    /// Largest absolute prediction error over the held-out verification
    /// points.
    pub fit_residual: f64,
}

fn solve4(mut a: [[Cplx; 4]; 4], mut b: [Cplx; 4]) -> [Cplx; 4] {
    let nan = Cplx::new(f64::NAN, f64::NAN);
    for col in 0..4 {
        let pivot_row = (col..4)
            .max_by(|&r, &s| a[r][col].norm().total_cmp(&a[s][col].norm()))
            .unwrap();
        if a[pivot_row][col].norm() < 1e-200 {
            return [nan; 4];
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] = a[row][k] - f * a[col][k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = [nan; 4];
    for row in (0..4).rev() {
        let mut acc = b[row];
        for k in (row + 1)..4 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}

fn span_probe_roots() -> [Cplx; 3] {
    [
        Cplx::from_polar(1.0, std::f64::consts::TAU / 3.0),
        Cplx::from_polar(1.0, std::f64::consts::TAU / 4.0),
        Cplx::from_polar(1.0, std::f64::consts::TAU / 5.0),
    ]
}

/// Fit `f(q, x, y)` against the monomial basis `[1, 1/q, x/y, (x/y)/q]`.
///
/// Four interpolation points are laid out deterministically from `seed`:
/// `q` cycles through primitive third, fourth, and fifth roots of unity and
/// `x`, `y` are fresh unit phases, so the 4x4 system is well conditioned.
/// The fit is then re-evaluated at four held-out points whose `q` values
/// are shifted one step through the same cycle; `fit_residual` is the worst
/// absolute error there. Functions inside the span fit to machine
/// precision; anything carrying a fractional power of `q` or `x/y` is
/// branch-inconsistent across the probe roots and misses by order one.
pub fn span_fit(f: impl Fn(Cplx, Cplx, Cplx) -> Cplx, seed: u64) -> SpanFit {
    let roots = span_probe_roots();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase = |rng: &mut ChaCha8Rng| {
        Cplx::from_polar(1.0, std::f64::consts::TAU * rng.gen::<f64>())
    };
    let mut m = [[Cplx::new(0.0, 0.0); 4]; 4];
    let mut rhs = [Cplx::new(0.0, 0.0); 4];
    for t in 0..4 {
        let q = roots[t % 3];
        let x = phase(&mut rng);
        let y = phase(&mut rng);
        m[t] = [C_ONE, C_ONE / q, x / y, x / y / q];
        rhs[t] = f(q, x, y);
    }
    let coefficients = solve4(m, rhs);
    let mut fit_residual: f64 = 0.0;
    for t in 0..4 {
        let q = roots[(t + 1) % 3];
        let x = phase(&mut rng);
        let y = phase(&mut rng);
        let pred = coefficients[0]
            + coefficients[1] / q
            + coefficients[2] * x / y
            + coefficients[3] * x / y / q;
        let err = (pred - f(q, x, y)).norm();
        fit_residual = fit_residual.max(err);
    }
    if fit_residual.is_nan() {
        fit_residual = f64::INFINITY;
    }
    SpanFit { coefficients, fit_residual }
}

/// Span fit of one entry family, with the coefficients snapped to the
/// admissible set.
#[derive(Clone, Copy, Debug)]
pub struct SpanEntryReport {
    pub family: EntryFamily,
    pub coefficients: [Cplx; 4],
    /// Nearest value in `{-1, 0, +1}` for each coefficient.
    pub rounded: [i8; 4],
    /// Largest distance from a coefficient to its snapped value.
    pub coefficient_distance: f64,
    pub fit_residual: f64,
}

/// Span fits for every entry family of a reduced `(m, n)` model.
#[derive(Clone, Debug)]
pub struct SpanCertificate {
    pub entries: Vec<SpanEntryReport>,
}

impl SpanCertificate {
    pub fn max_fit_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.fit_residual).fold(0.0, f64::max)
    }

    pub fn max_coefficient_distance(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.coefficient_distance)
            .fold(0.0, f64::max)
    }

    /// Fail on the first family whose fit misses the span (`fit_tol`) or
    /// whose coefficients stray from `{-1, 0, +1}` (`coeff_tol`).
    pub fn verify(&self, fit_tol: f64, coeff_tol: f64) -> Result<(), SlmnError> {
        for e in &self.entries {
            if !(e.fit_residual <= fit_tol) {
                return Err(SlmnError::SpanViolation {
                    family: e.family,
                    residual: e.fit_residual,
                });
            }
            if !(e.coefficient_distance <= coeff_tol) {
                return Err(SlmnError::CoefficientOutsideSet {
                    family: e.family,
                    distance: e.coefficient_distance,
                });
            }
        }
        Ok(())
    }
}

fn snap(c: Cplx) -> (i8, f64) {
    let mut best = (0i8, (c - Cplx::new(0.0, 0.0)).norm());
    for s in [-1i8, 1] {
        let d = (c - Cplx::new(s as f64, 0.0)).norm();
        if d < best.1 {
            best = (s, d);
        }
    }
    best
}

/// Certify that every entry family of the reduced `(m, n)` model lies in
/// the span of `{1, 1/q, x/y, (x/y)/q}` with coefficients in `{-1, 0, +1}`.
pub fn monomial_span_certify(m: usize, n: usize, seed: u64) -> SpanCertificate {
    let mut entries = Vec::new();
    for family in entry_families(m, n) {
        let fit = span_fit(|q, x, y| root_entry(family, m, q, x, y), seed);
        let mut rounded = [0i8; 4];
        let mut coefficient_distance: f64 = 0.0;
        for (slot, c) in fit.coefficients.iter().enumerate() {
            let (s, d) = snap(*c);
            rounded[slot] = s;
            coefficient_distance = coefficient_distance.max(d);
        }
        entries.push(SpanEntryReport {
            family,
            coefficients: fit.coefficients,
            rounded,
            coefficient_distance,
            fit_residual: fit.fit_residual,
        });
    }
    SpanCertificate { entries }
}

/// Reversing the state order while swapping the two grading families,
/// negating both rapidity offsets, permuting both gauges the same way, and
/// negating the relabeled off-diagonal twists reproduces the original
/// matrix entry for entry. Returns the largest absolute entry difference,
/// which is zero in exact arithmetic (the identity holds term by term).
pub fn grading_consistency_residual(
    p: &SlmnParams,
    p0: Cplx,
    q0: Cplx,
) -> Result<f64, SlmnError> {
    let d = p.dim();
    let r1 = build_slmn_additive(p, p0, q0)?;

    // sigma reverses 0-based states
    let sigma = |s: usize| d - 1 - s;
    let gauge_p2: Vec<[Cplx; 2]> = (0..d).map(|s| p.gauge_p[sigma(s)]).collect();
    let gauge_q2: Vec<[Cplx; 2]> = (0..d).map(|s| p.gauge_q[sigma(s)]).collect();
    let mut twists2 = vec![C_ONE; d * d];
    for a in 0..d {
        for b in 0..d {
            if a != b {
                twists2[a * d + b] = -p.twists[sigma(a) * d + sigma(b)];
            }
        }
    }
    let p2 = SlmnParams::new(p.n, p.m, p.eta)?
        .with_normalization(p.normalization)
        .with_twists(twists2)?
        .with_gauges(gauge_p2, gauge_q2)?;
    let r2 = build_slmn_additive(&p2, -p0, -q0)?;

    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let relabeled = r1.get(sigma(i), sigma(j), sigma(k), sigma(l));
                    worst = worst.max((relabeled - r2.get(i, j, k, l)).norm());
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::six_vertex::{build_six_vertex, SixVertexGauge, SixVertexParams};
    use crate::tensor::ybe_residual;

    fn c(re: f64, im: f64) -> Cplx {
        Cplx::new(re, im)
    }

    fn close(a: Cplx, b: Cplx, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn oracle_params() -> (SlmnParams, Cplx, Cplx) {
        let gauge_p = vec![
            [c(1.1, 0.2), c(0.9, -0.1)],
            [c(1.3, -0.3), c(1.2, 0.4)],
            [c(0.8, 0.5), c(1.05, -0.2)],
        ];
        let gauge_q = vec![
            [c(0.95, 0.15), c(1.25, -0.35)],
            [c(1.4, 0.1), c(0.7, -0.45)],
            [c(1.15, -0.25), c(0.85, 0.3)],
        ];
        let g12 = c(1.2, 0.3);
        let g13 = c(0.9, -0.4);
        let g23 = c(1.05, 0.15);
        let one = C_ONE;
        let twists = vec![
            one, g12, g13,
            one / g12, one, g23,
            one / g13, one / g23, one,
        ];
        let p = SlmnParams::new(2, 1, c(0.17, 0.08))
            .unwrap()
            .with_twists(twists)
            .unwrap()
            .with_gauges(gauge_p, gauge_q)
            .unwrap();
        (p, c(0.25, -0.06), c(-0.11, 0.04))
    }

    #[test]
    fn frozen_additive_entries() {
        let (p, p0, q0) = oracle_params();
        let r = build_slmn_additive(&p, p0, q0).unwrap();
        assert!(close(r.get(0, 0, 0, 0), c(0.9107165469246763, -0.16599250389720327), 1e-14));
        assert!(close(r.get(2, 2, 2, 2), c(-0.15271794810636066, -0.0895619836183913), 1e-14));
        assert!(close(r.get(1, 0, 1, 0), c(0.3191874848653751, -0.131206450367524), 1e-14));
        assert!(close(r.get(1, 0, 0, 1), c(0.1786527312983059, 0.015026271874658832), 1e-14));
        assert!(close(r.get(1, 2, 1, 2), c(0.1784581472576027, -0.05925270627210859), 1e-14));
        assert!(close(r.get(2, 1, 1, 2), c(0.06324631071247908, 0.02854356301733176), 1e-14));
        // multiset support: everything off the three families vanishes
        assert_eq!(r.get(0, 0, 1, 1), c(0.0, 0.0));
        assert_eq!(r.count_nonzero(), 15);
    }

    // with trivial gauges and twists the entries are bare hyperbolic sines
    #[test]
    fn additive_sinh_anchors() {
        let eta = c(0.23, -0.11);
        let p0 = c(0.31, 0.02);
        let q0 = c(-0.12, 0.07);
        let delta = p0 - q0;
        let p = SlmnParams::new(1, 1, eta).unwrap();
        let r = build_slmn_additive(&p, p0, q0).unwrap();
        assert!(close(r.get(0, 0, 0, 0), (eta + delta).sinh(), 1e-15));
        assert!(close(r.get(1, 1, 1, 1), (eta - delta).sinh(), 1e-15));
        assert!(close(r.get(1, 0, 1, 0), delta.sinh(), 1e-15));
        // exchange (b, a) = (2, 1): sign(a - b) = -1
        assert!(close(r.get(1, 0, 0, 1), (-delta).exp() * eta.sinh(), 1e-15));
        assert!(close(r.get(0, 1, 1, 0), delta.exp() * eta.sinh(), 1e-15));
    }

    #[test]
    fn multiplicative_agrees_with_additive() {
        let (p, p0, q0) = oracle_params();
        let r_add = build_slmn_additive(&p, p0, q0).unwrap();
        let q = (p.eta() * 2.0).exp();
        let x = (q0 * 2.0).exp();
        let y = (p0 * 2.0).exp();
        let bridge = q.sqrt() / 2.0 * (y / x).sqrt();
        let p_scaled = p.clone().with_normalization(p.normalization() * bridge);
        let r_mul = build_slmn_multiplicative(&p_scaled, x, y).unwrap();
        let scale = r_add.max_abs();
        for (u, v) in r_add.entries().iter().zip(r_mul.entries()) {
            assert!((u - v).norm() / scale < 1e-12, "{u} vs {v}");
        }
    }

    #[test]
    fn additive_ybe_anchor() {
        let (m, n) = (2usize, 1usize);
        let d = m + n;
        let eta = c(0.3, 0.1);
        let (p0, q0, r0) = (c(0.21, 0.05), c(-0.13, 0.02), c(0.4, -0.07));
        let mut sampler = crate::sample::Sampler::new(11);
        let gp = sampler.slmn_gauge(d);
        let gq = sampler.slmn_gauge(d);
        let gr = sampler.slmn_gauge(d);
        let tw = sampler.slmn_twists(d);
        let base = SlmnParams::new(m, n, eta).unwrap().with_twists(tw.clone()).unwrap();
        let ra = build_slmn_additive(
            &base.clone().with_gauges(gp.clone(), gq.clone()).unwrap(),
            p0,
            q0,
        )
        .unwrap();
        let rb = build_slmn_additive(
            &base.clone().with_gauges(gp.clone(), gr.clone()).unwrap(),
            p0,
            r0,
        )
        .unwrap();
        let rc = build_slmn_additive(&base.with_gauges(gq, gr).unwrap(), q0, r0).unwrap();
        let res = ybe_residual(&ra, &rb, &rc).unwrap();
        assert!(res < 1e-12, "additive YBE residual {res}");
    }

    #[test]
    fn root_reduced_matches_two_state_gauge() {
        let root = RootOfUnitySpec::new(5, 2).unwrap();
        let x = Cplx::from_polar(1.0, 1.234);
        let y = Cplx::from_polar(1.0, -0.567);
        let reduced =
            build_slmn_root_of_unity(&RootReducedSpec::new(2, 0, root, x, y).unwrap()).unwrap();
        let two_state = build_six_vertex(
            &SixVertexParams::new(SixVertexGauge::Bbp, root.q(), x, y).unwrap(),
        )
        .unwrap();
        for (u, v) in reduced.entries().iter().zip(two_state.entries()) {
            assert!((u - v).norm() < 1e-15, "{u} vs {v}");
        }
    }

    #[test]
    fn root_reduced_ybe_anchor() {
        for (m, n) in [(2usize, 0usize), (0, 2), (1, 1), (2, 1)] {
            let root = RootOfUnitySpec::new(5, 1).unwrap();
            let x = Cplx::from_polar(1.0, 0.37);
            let y = Cplx::from_polar(1.0, 2.11);
            let z = Cplx::from_polar(1.0, -1.03);
            let ra =
                build_slmn_root_of_unity(&RootReducedSpec::new(m, n, root, x, y).unwrap()).unwrap();
            let rb =
                build_slmn_root_of_unity(&RootReducedSpec::new(m, n, root, x, z).unwrap()).unwrap();
            let rc =
                build_slmn_root_of_unity(&RootReducedSpec::new(m, n, root, y, z).unwrap()).unwrap();
            let res = ybe_residual(&ra, &rb, &rc).unwrap();
            assert!(res < 1e-12, "({m},{n}) residual {res}");
        }
    }

    #[test]
    fn grading_reversal_is_exact() {
        let (p, p0, q0) = oracle_params();
        let res = grading_consistency_residual(&p, p0, q0).unwrap();
        assert!(res <= 1e-14, "grading residual {res}");
    }

    #[test]
    fn span_certificate_coefficients() {
        let cert = monomial_span_certify(2, 1, 5);
        assert_eq!(cert.entries.len(), 15);
        assert!(cert.max_fit_residual() < 1e-12, "{}", cert.max_fit_residual());
        assert!(cert.max_coefficient_distance() < 1e-12);
        cert.verify(1e-12, 1e-12).unwrap();
        // basis order [1, 1/q, x/y, (x/y)/q]
        for e in &cert.entries {
            let expected = match e.family {
                EntryFamily::Diagonal { a } if a <= 2 => [1, 0, 0, -1],
                EntryFamily::Diagonal { .. } => [0, -1, 1, 0],
                EntryFamily::PassThrough { a, b } if a > b => [1, 0, -1, 0],
                EntryFamily::PassThrough { .. } => [0, 1, 0, -1],
                EntryFamily::Exchange { a, b } if a < b => [0, 0, 1, -1],
                EntryFamily::Exchange { .. } => [1, -1, 0, 0],
            };
            assert_eq!(e.rounded, expected, "family {}", e.family);
        }
    }

    // a fractional power is inconsistent across the probe roots and cannot
    // hide in the span
    #[test]
    fn span_negative_control_fails_loudly() {
        for seed in 0..8u64 {
            let fit = span_fit(|q, x, y| (x / y).sqrt() * (C_ONE - C_ONE / q), seed);
            assert!(fit.fit_residual > 1e-2, "seed {seed}: {}", fit.fit_residual);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(SlmnParams::new(0, 0, c(0.1, 0.0)).is_err());
        assert!(SlmnParams::new(1, 1, c(f64::NAN, 0.0)).is_err());
        let p = SlmnParams::new(1, 1, c(0.1, 0.0)).unwrap();
        assert!(p.clone().with_twists(vec![C_ONE; 3]).is_err());
        let bad_diag = vec![c(2.0, 0.0), C_ONE, C_ONE, C_ONE];
        assert!(p.clone().with_twists(bad_diag).is_err());
        let bad_pair = vec![C_ONE, c(2.0, 0.0), c(2.0, 0.0), C_ONE];
        assert!(matches!(
            p.clone().with_twists(bad_pair),
            Err(SlmnError::TwistReciprocity { .. })
        ));
        let good = vec![C_ONE, c(2.0, 0.0), c(0.5, 0.0), C_ONE];
        assert!(p.clone().with_twists(good).is_ok());
        assert!(p
            .clone()
            .with_gauges(vec![[C_ONE, C_ONE]], vec![[C_ONE, C_ONE]; 2])
            .is_err());
        assert!(p
            .with_gauges(vec![[C_ONE, c(0.0, 0.0)]; 2], vec![[C_ONE, C_ONE]; 2])
            .is_err());
    }
}
