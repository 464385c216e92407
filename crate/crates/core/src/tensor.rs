//! Dense rank-4 complex weight tensors and the three kernels the rest of the
//! crate leans on: the triple-space Yang-Baxter contraction, diagonal gauge
//! sandwiches, and projective (scale-free) comparison.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Complex scalar used for every weight and parameter in the toolkit.
pub type Cplx = Complex64;

pub(crate) const C_ZERO: Cplx = Cplx::new(0.0, 0.0);
pub(crate) const C_ONE: Cplx = Cplx::new(1.0, 0.0);

/// Zero-pattern rule enforced when a weight tensor is constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportRule {
    /// A nonzero entry must preserve the state pair: {i, j} = {k, l} as
    /// multisets.
    Multiset,
    /// A nonzero entry must conserve charge, i + j = k + l (mod N). Requires
    /// equal leg dimensions N.
    ZnCharge,
    /// No restriction on the zero pattern.
    Unrestricted,
}

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("leg dimensions must be positive")]
    EmptyLeg,
    #[error("expected {expected} entries for legs ({dim_left}, {dim_right}), got {got}")]
    EntryCount {
        dim_left: usize,
        dim_right: usize,
        expected: usize,
        got: usize,
    },
    #[error("entry ({i}, {j}, {k}, {l}) is not finite")]
    NonFinite { i: usize, j: usize, k: usize, l: usize },
    #[error(
        "entry ({i}, {j}, {k}, {l}) with magnitude {magnitude:.3e} violates the {rule:?} support rule"
    )]
    SupportViolation {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        magnitude: f64,
        rule: SupportRule,
    },
    #[error("the charge support rule needs equal leg dimensions, got ({dim_left}, {dim_right})")]
    ChargeRuleShape { dim_left: usize, dim_right: usize },
    #[error(
        "space-{space} legs disagree: {left_operand} leg has dimension {left_dim}, \
         {right_operand} leg has dimension {right_dim}"
    )]
    YbeLegMismatch {
        space: u8,
        left_operand: &'static str,
        left_dim: usize,
        right_operand: &'static str,
        right_dim: usize,
    },
    #[error("gauge sandwiches act on 2-state legs only, got ({dim_left}, {dim_right})")]
    GaugeLeg { dim_left: usize, dim_right: usize },
    #[error("gauge sandwich values must be finite and nonzero")]
    GaugeValue,
    #[error("projective comparison needs equal shapes, got {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("projective reference matrix is numerically zero (max magnitude {max_abs:.3e})")]
    ZeroReference { max_abs: f64 },
}

/// Dense rank-4 tensor of vertex weights.
///
/// `get(i, j, k, l)` is the weight of the vertex with incoming states
/// `(i, j)` and outgoing states `(k, l)`. Read as a matrix it is
/// `M[out-pair][in-pair]`. The flat layout is lexicographic in
/// `(i, j, k, l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    dim_left: usize,
    dim_right: usize,
    entries: Vec<Cplx>,
}

impl RMatrix {
    /// Wrap a lexicographic entry buffer, checking finiteness and `rule`.
    pub fn new(
        dim_left: usize,
        dim_right: usize,
        entries: Vec<Cplx>,
        rule: SupportRule,
    ) -> Result<Self, TensorError> {
        if dim_left == 0 || dim_right == 0 {
            return Err(TensorError::EmptyLeg);
        }
        let expected = dim_left * dim_right * dim_left * dim_right;
        if entries.len() != expected {
            return Err(TensorError::EntryCount {
                dim_left,
                dim_right,
                expected,
                got: entries.len(),
            });
        }
        let r = RMatrix {
            dim_left,
            dim_right,
            entries,
        };
        r.validate(rule)?;
        Ok(r)
    }

    /// Build from a closure over `(i, j, k, l)`.
    pub fn from_fn<F>(
        dim_left: usize,
        dim_right: usize,
        rule: SupportRule,
        mut f: F,
    ) -> Result<Self, TensorError>
    where
        F: FnMut(usize, usize, usize, usize) -> Cplx,
    {
        if dim_left == 0 || dim_right == 0 {
            return Err(TensorError::EmptyLeg);
        }
        let mut entries = Vec::with_capacity(dim_left * dim_right * dim_left * dim_right);
        for i in 0..dim_left {
            for j in 0..dim_right {
                for k in 0..dim_left {
                    for l in 0..dim_right {
                        entries.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self::new(dim_left, dim_right, entries, rule)
    }

    /// Identity on both legs: weight 1 exactly when states pass through.
    pub fn identity(dim_left: usize, dim_right: usize) -> Self {
        Self::from_fn(dim_left, dim_right, SupportRule::Multiset, |i, j, k, l| {
            if i == k && j == l {
                C_ONE
            } else {
                C_ZERO
            }
        })
        .expect("identity pattern is finite and pair-preserving")
    }

    pub(crate) fn from_entries_unchecked(
        dim_left: usize,
        dim_right: usize,
        entries: Vec<Cplx>,
    ) -> Self {
        debug_assert_eq!(entries.len(), dim_left * dim_right * dim_left * dim_right);
        RMatrix {
            dim_left,
            dim_right,
            entries,
        }
    }

    fn validate(&self, rule: SupportRule) -> Result<(), TensorError> {
        if rule == SupportRule::ZnCharge && self.dim_left != self.dim_right {
            return Err(TensorError::ChargeRuleShape {
                dim_left: self.dim_left,
                dim_right: self.dim_right,
            });
        }
        for (pos, z) in self.entries.iter().enumerate() {
            if !z.is_finite() {
                let (i, j, k, l) = self.unflatten(pos);
                return Err(TensorError::NonFinite { i, j, k, l });
            }
        }
        // off-support entries must vanish up to a sliver of the overall scale
        let floor = 1e-12 * self.max_abs();
        for (pos, z) in self.entries.iter().enumerate() {
            let (i, j, k, l) = self.unflatten(pos);
            let on_support = match rule {
                SupportRule::Multiset => (i == k && j == l) || (i == l && j == k),
                SupportRule::ZnCharge => {
                    let n = self.dim_left;
                    (i + j) % n == (k + l) % n
                }
                SupportRule::Unrestricted => true,
            };
            if !on_support && z.norm() > floor {
                return Err(TensorError::SupportViolation {
                    i,
                    j,
                    k,
                    l,
                    magnitude: z.norm(),
                    rule,
                });
            }
        }
        Ok(())
    }

    #[inline]
    fn flatten(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim_right + j) * self.dim_left + k) * self.dim_right + l
    }

    fn unflatten(&self, pos: usize) -> (usize, usize, usize, usize) {
        let l = pos % self.dim_right;
        let rest = pos / self.dim_right;
        let k = rest % self.dim_left;
        let rest = rest / self.dim_left;
        let j = rest % self.dim_right;
        let i = rest / self.dim_right;
        (i, j, k, l)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Cplx {
        self.entries[self.flatten(i, j, k, l)]
    }

    pub fn dim_left(&self) -> usize {
        self.dim_left
    }

    pub fn dim_right(&self) -> usize {
        self.dim_right
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_left, self.dim_right)
    }

    /// Flat entries in lexicographic `(i, j, k, l)` order.
    pub fn entries(&self) -> &[Cplx] {
        &self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn count_nonzero(&self) -> usize {
        self.entries.iter().filter(|z| z.norm() > 0.0).count()
    }

    /// Entrywise multiple by a finite scalar; the zero pattern is preserved.
    pub fn scaled(&self, s: Cplx) -> RMatrix {
        RMatrix {
            dim_left: self.dim_left,
            dim_right: self.dim_right,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }
}

/// Diagonal gauge factors applied to the four legs of a 2-state vertex:
/// `pre` pairs act on the incoming legs, `post` pairs on the outgoing ones.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeSandwich {
    pre_left: [Cplx; 2],
    pre_right: [Cplx; 2],
    post_left: [Cplx; 2],
    post_right: [Cplx; 2],
}

impl GaugeSandwich {
    pub fn new(
        pre_left: [Cplx; 2],
        pre_right: [Cplx; 2],
        post_left: [Cplx; 2],
        post_right: [Cplx; 2],
    ) -> Result<Self, TensorError> {
        let all = [pre_left, pre_right, post_left, post_right];
        if all
            .iter()
            .flatten()
            .any(|z| !z.is_finite() || z.norm() == 0.0)
        {
            return Err(TensorError::GaugeValue);
        }
        Ok(GaugeSandwich {
            pre_left,
            pre_right,
            post_left,
            post_right,
        })
    }

    pub fn identity() -> Self {
        GaugeSandwich {
            pre_left: [C_ONE; 2],
            pre_right: [C_ONE; 2],
            post_left: [C_ONE; 2],
            post_right: [C_ONE; 2],
        }
    }

    /// Entrywise reciprocal; applying a sandwich and then its inverse is the
    /// identity up to rounding.
    pub fn inverse(&self) -> Self {
        let inv = |v: [Cplx; 2]| [C_ONE / v[0], C_ONE / v[1]];
        GaugeSandwich {
            pre_left: inv(self.pre_left),
            pre_right: inv(self.pre_right),
            post_left: inv(self.post_left),
            post_right: inv(self.post_right),
        }
    }

    pub fn pre_left(&self) -> [Cplx; 2] {
        self.pre_left
    }

    pub fn pre_right(&self) -> [Cplx; 2] {
        self.pre_right
    }

    pub fn post_left(&self) -> [Cplx; 2] {
        self.post_left
    }

    pub fn post_right(&self) -> [Cplx; 2] {
        self.post_right
    }
}

/// Rescale every entry by the four diagonal leg factors:
/// `entry(i, j, k, l) * pre_left[i] * pre_right[j] * post_left[k] * post_right[l]`.
pub fn apply_gauge(r: &RMatrix, g: &GaugeSandwich) -> Result<RMatrix, TensorError> {
    if r.dims() != (2, 2) {
        return Err(TensorError::GaugeLeg {
            dim_left: r.dim_left,
            dim_right: r.dim_right,
        });
    }
    let mut entries = Vec::with_capacity(16);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    entries.push(
                        r.get(i, j, k, l)
                            * g.pre_left[i]
                            * g.pre_right[j]
                            * g.post_left[k]
                            * g.post_right[l],
                    );
                }
            }
        }
    }
    // diagonal rescaling by nonzero finite factors preserves the zero
    // pattern, so no support re-check is needed
    Ok(RMatrix::from_entries_unchecked(2, 2, entries))
}

/// Raw and scale parts of a Yang-Baxter residual.
#[derive(Clone, Copy, Debug)]
pub struct YbeResidual {
    /// Largest entry magnitude of (left product - right product).
    pub raw: f64,
    /// Largest entry magnitude of the left product.
    pub lhs_scale: f64,
}

impl YbeResidual {
    /// Raw difference relative to the left-side scale. A raw zero is reported
    /// as zero even when the scale also vanishes.
    pub fn relative(&self) -> f64 {
        if self.raw == 0.0 {
            0.0
        } else {
            self.raw / self.lhs_scale.max(f64::MIN_POSITIVE)
        }
    }
}

/// Relative Yang-Baxter residual for the triple acting on spaces
/// (1,2), (1,3), (2,3):
///
/// `RA_12 RB_13 RC_23 = RC_23 RB_13 RA_12`
///
/// `ra` couples spaces 1-2, `rb` spaces 1-3, `rc` spaces 2-3; a matrix built
/// from two rapidity lines `(w1, w2)` sits in the slot joining the spaces
/// that carry `w1` and `w2`.
pub fn ybe_residual(ra: &RMatrix, rb: &RMatrix, rc: &RMatrix) -> Result<f64, TensorError> {
    Ok(ybe_residual_parts(ra, rb, rc)?.relative())
}

/// As [`ybe_residual`] but exposing the raw difference and the scale.
pub fn ybe_residual_parts(
    ra: &RMatrix,
    rb: &RMatrix,
    rc: &RMatrix,
) -> Result<YbeResidual, TensorError> {
    let (d1, d2) = ra.dims();
    let (d1b, d3) = rb.dims();
    let (d2c, d3c) = rc.dims();
    if d1 != d1b {
        return Err(TensorError::YbeLegMismatch {
            space: 1,
            left_operand: "first operand left",
            left_dim: d1,
            right_operand: "second operand left",
            right_dim: d1b,
        });
    }
    if d2 != d2c {
        return Err(TensorError::YbeLegMismatch {
            space: 2,
            left_operand: "first operand right",
            left_dim: d2,
            right_operand: "third operand left",
            right_dim: d2c,
        });
    }
    if d3 != d3c {
        return Err(TensorError::YbeLegMismatch {
            space: 3,
            left_operand: "second operand right",
            left_dim: d3,
            right_operand: "third operand right",
            right_dim: d3c,
        });
    }

    let mut raw = 0.0_f64;
    let mut scale = 0.0_f64;
    // fixed loop order keeps the floating-point reduction deterministic
    for a_out in 0..d1 {
        for b_out in 0..d2 {
            for c_out in 0..d3 {
                for a_in in 0..d1 {
                    for b_in in 0..d2 {
                        for c_in in 0..d3 {
                            let mut lhs = C_ZERO;
                            let mut rhs = C_ZERO;
                            for a2 in 0..d1 {
                                for b2 in 0..d2 {
                                    for c2 in 0..d3 {
                                        lhs += ra.get(a2, b2, a_out, b_out)
                                            * rb.get(a_in, c2, a2, c_out)
                                            * rc.get(b_in, c_in, b2, c2);
                                        rhs += rc.get(b2, c2, b_out, c_out)
                                            * rb.get(a2, c_in, a_out, c2)
                                            * ra.get(a_in, b_in, a2, b2);
                                    }
                                }
                            }
                            scale = scale.max(lhs.norm());
                            raw = raw.max((lhs - rhs).norm());
                        }
                    }
                }
            }
        }
    }
    Ok(YbeResidual {
        raw,
        lhs_scale: scale,
    })
}

/// Max-magnitude difference after the best single-entry scale alignment:
/// finds the largest entry of `reference`, scales it to match `candidate`
/// there, and reports `max |candidate - s * reference|`.
pub fn projective_distance(candidate: &RMatrix, reference: &RMatrix) -> Result<f64, TensorError> {
    if candidate.dims() != reference.dims() {
        return Err(TensorError::ShapeMismatch {
            left: candidate.dims(),
            right: reference.dims(),
        });
    }
    let mut best = 0usize;
    let mut max_abs = 0.0_f64;
    for (pos, z) in reference.entries.iter().enumerate() {
        if z.norm() > max_abs {
            max_abs = z.norm();
            best = pos;
        }
    }
    if max_abs <= 1e-14 {
        return Err(TensorError::ZeroReference { max_abs });
    }
    let s = candidate.entries[best] / reference.entries[best];
    let mut dist = 0.0_f64;
    for (a, b) in candidate.entries.iter().zip(reference.entries.iter()) {
        dist = dist.max((a - s * b).norm());
    }
    Ok(dist)
}
