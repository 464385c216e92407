//! The 2-state vertex weight matrix in three gauges, the trigonometric
//! parameter bridge, the diagonal gauge bridges connecting the gauges, and
//! root-of-unity bookkeeping for the deformation parameter.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tensor::{Cplx, GaugeSandwich, RMatrix, SupportRule, TensorError, C_ONE};

#[derive(Debug, Error)]
pub enum SixVertexError {
    #[error("parameter {0} must be finite and nonzero")]
    BadParameter(&'static str),
    #[error("root order must be at least 2, got {n}")]
    SmallOrder { n: u32 },
    #[error("exponent {j} shares a factor with order {n}; the root would not be primitive")]
    NotPrimitive { j: u32, n: u32 },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Gauge tag for [`build_six_vertex`].
///
/// All three share the corner entries `1 - (x/y)/q` and differ in the middle
/// 2x2 block:
///
/// - `Sym`: both exchange entries equal `(x/y)^(1/2) (1 - 1/q)`; the
///   pass-through entries carry `q^(-1/2)`. Fractional powers of both
///   parameters appear.
/// - `Bs`: exchange entries split into `(x/y)(1 - 1/q)` and `(1 - 1/q)`;
///   pass-through entries still carry `q^(-1/2)`.
/// - `Bbp`: fully monomial; every entry is a +/-1 combination of
///   `1, 1/q, x/y, (x/y)/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SixVertexGauge {
    Sym,
    Bs,
    Bbp,
}

impl SixVertexGauge {
    pub const ALL: [SixVertexGauge; 3] = [SixVertexGauge::Sym, SixVertexGauge::Bs, SixVertexGauge::Bbp];

    pub fn tag(self) -> &'static str {
        match self {
            SixVertexGauge::Sym => "sym",
            SixVertexGauge::Bs => "bs",
            SixVertexGauge::Bbp => "bbp",
        }
    }
}

/// Parameters for one 2-state vertex matrix: deformation `q`, rapidities
/// `x`, `y` (only the ratio `x/y` enters), and an overall normalization.
#[derive(Clone, Copy, Debug)]
pub struct SixVertexParams {
    pub gauge: SixVertexGauge,
    pub q: Cplx,
    pub x: Cplx,
    pub y: Cplx,
    pub normalization: Cplx,
}

impl SixVertexParams {
    pub fn new(gauge: SixVertexGauge, q: Cplx, x: Cplx, y: Cplx) -> Result<Self, SixVertexError> {
        for (name, v) in [("q", q), ("x", x), ("y", y)] {
            if !v.is_finite() || v.norm() == 0.0 {
                return Err(SixVertexError::BadParameter(name));
            }
        }
        Ok(SixVertexParams {
            gauge,
            q,
            x,
            y,
            normalization: C_ONE,
        })
    }

    pub fn with_normalization(mut self, c: Cplx) -> Self {
        self.normalization = c;
        self
    }

    /// True at the collapse points `x = y` (matrix proportional to a
    /// permutation-free diagonal pattern) or `q = 1` (exchange entries
    /// vanish). Exact complex equality; used to flag dumps.
    pub fn is_degenerate(&self) -> bool {
        self.x == self.y || self.q == C_ONE
    }
}

/// Build the 2-state matrix in the requested gauge. Conventions: rows of the
/// printed 4x4 form are outgoing pairs, columns incoming pairs, pair index
/// `2 * left + right`; `get(i, j, k, l)` is `in (i, j) -> out (k, l)`.
pub fn build_six_vertex(p: &SixVertexParams) -> Result<RMatrix, TensorError> {
    let xy = p.x / p.y;
    let qi = C_ONE / p.q;
    let corner = C_ONE - xy * qi;
    let (m11, m12, m21, m22) = match p.gauge {
        SixVertexGauge::Sym => {
            let b = (C_ONE - xy) * p.q.powf(-0.5);
            let c = xy.sqrt() * (C_ONE - qi);
            (b, c, c, b)
        }
        SixVertexGauge::Bs => {
            let b = (C_ONE - xy) * p.q.powf(-0.5);
            (b, xy * (C_ONE - qi), C_ONE - qi, b)
        }
        SixVertexGauge::Bbp => (
            C_ONE - xy,
            xy * (C_ONE - qi),
            C_ONE - qi,
            (C_ONE - xy) * qi,
        ),
    };
    let zero = Cplx::new(0.0, 0.0);
    let m = [
        [corner, zero, zero, zero],
        [zero, m11, m12, zero],
        [zero, m21, m22, zero],
        [zero, zero, zero, corner],
    ];
    RMatrix::from_fn(2, 2, SupportRule::Multiset, |i, j, k, l| {
        p.normalization * m[2 * k + l][2 * i + j]
    })
}

/// Multiplicative parameters produced from trigonometric (additive) ones.
#[derive(Clone, Copy, Debug)]
pub struct MultiplicativeParams {
    pub q: Cplx,
    pub x: Cplx,
    pub y: Cplx,
    /// Normalization giving entries that are sines of the additive
    /// parameters: the Sym-gauge matrix built with these values has corner
    /// entries `n sin(eta + v - u)`, pass-through `n sin(v - u)` and
    /// exchange `n sin(eta)`.
    pub c: Cplx,
}

/// Substitute `q = e^(2 i eta)`, `x = e^(2 i u)`, `y = e^(2 i v)` and the
/// matching sine normalization. Exact on the principal branch, which is
/// governed by the real parts of `eta`, `u`, `v` (keep them within
/// (-pi/4, pi/4) for the square roots to compose).
pub fn additive_to_multiplicative(eta: Cplx, u: Cplx, v: Cplx, n_norm: Cplx) -> MultiplicativeParams {
    let two_i = Cplx::new(0.0, 2.0);
    let q = (two_i * eta).exp();
    let x = (two_i * u).exp();
    let y = (two_i * v).exp();
    let c = n_norm * q.sqrt() / two_i * (y / x).sqrt();
    MultiplicativeParams { q, x, y, c }
}

/// Direction of the staggered bridge, the gauge sandwich connecting the
/// `Bs` and `Bbp` gauges. The sandwich depends only on `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StaggeredDirection {
    BsToBbp,
    BbpToBs,
}

/// Diagonal sandwich with `lambda = q^(1/8)`; left legs carry
/// `diag(lambda, 1/lambda)` and right legs the inverse pattern, on both the
/// incoming and outgoing sides. The reverse direction inverts every factor.
pub fn staggered_connect(
    direction: StaggeredDirection,
    q: Cplx,
) -> Result<GaugeSandwich, SixVertexError> {
    if !q.is_finite() || q.norm() == 0.0 {
        return Err(SixVertexError::BadParameter("q"));
    }
    let lambda = match direction {
        StaggeredDirection::BsToBbp => q.powf(0.125),
        StaggeredDirection::BbpToBs => q.powf(-0.125),
    };
    let li = C_ONE / lambda;
    Ok(GaugeSandwich::new(
        [lambda, li],
        [li, lambda],
        [lambda, li],
        [li, lambda],
    )?)
}

/// Direction of the uniform bridge, the gauge sandwich connecting the `Sym`
/// and `Bs` gauges. The sandwich depends only on the ratio `x/y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UniformDirection {
    SymToBs,
    BsToSym,
}

/// Diagonal sandwich with `lambda = (x/y)^(1/8)`. The incoming-left leg
/// carries `diag(1/lambda, lambda)` while the other three legs carry the
/// patterns that push the full `(x/y)^(1/2)` onto one exchange entry and
/// strip it from the other; the sign assignment is validated numerically by
/// the bridge checks. The reverse direction inverts every factor.
pub fn uniform_connect(
    direction: UniformDirection,
    x: Cplx,
    y: Cplx,
) -> Result<GaugeSandwich, SixVertexError> {
    for (name, v) in [("x", x), ("y", y)] {
        if !v.is_finite() || v.norm() == 0.0 {
            return Err(SixVertexError::BadParameter(name));
        }
    }
    let lambda = match direction {
        UniformDirection::SymToBs => (x / y).powf(0.125),
        UniformDirection::BsToSym => (x / y).powf(-0.125),
    };
    let li = C_ONE / lambda;
    Ok(GaugeSandwich::new(
        [li, lambda],
        [lambda, li],
        [lambda, li],
        [li, lambda],
    )?)
}

/// Parity of a root order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// A primitive N-th root of unity `q = e^(2 pi i j / N)`, `gcd(j, N) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootOfUnitySpec {
    n: u32,
    j: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RootOfUnitySpec {
    pub fn new(n: u32, j: u32) -> Result<Self, SixVertexError> {
        if n < 2 {
            return Err(SixVertexError::SmallOrder { n });
        }
        let j_red = j % n;
        if j_red == 0 || gcd(j_red, n) != 1 {
            return Err(SixVertexError::NotPrimitive { j, n });
        }
        Ok(RootOfUnitySpec { n, j: j_red })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn parity(&self) -> Parity {
        if self.n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn q(&self) -> Cplx {
        Cplx::from_polar(1.0, std::f64::consts::TAU * self.j as f64 / self.n as f64)
    }
}

/// Square roots of `q` relevant at a root of unity, with their common N-th
/// power and the parity verdict.
#[derive(Clone, Debug)]
pub struct Q1Resolution {
    /// Odd N: the single distinguished root `q^((N+1)/2)`, which is itself
    /// an N-th root of unity and squares to `q`. Even N: both square roots
    /// of `q`, neither of which is an N-th root of unity.
    pub q1_values: Vec<Cplx>,
    /// `q1^N`, identical for every listed value: +1 for odd N, -1 for even.
    pub q1_pow_n: Cplx,
    pub parity_verdict: Parity,
}

/// Resolve the square-root bookkeeping of `q` at a primitive root of unity.
pub fn resolve_q1(spec: &RootOfUnitySpec) -> Q1Resolution {
    let q = spec.q();
    let n = spec.n();
    match spec.parity() {
        Parity::Odd => {
            let q1 = q.powi(((n + 1) / 2) as i32);
            Q1Resolution {
                q1_pow_n: q1.powi(n as i32),
                q1_values: vec![q1],
                parity_verdict: Parity::Odd,
            }
        }
        Parity::Even => {
            let root = q.sqrt();
            // (-root)^N = root^N for even N
            Q1Resolution {
                q1_pow_n: root.powi(n as i32),
                q1_values: vec![root, -root],
                parity_verdict: Parity::Even,
            }
        }
    }
}
