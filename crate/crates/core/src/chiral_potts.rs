//! N-state curve points, the two Boltzmann weight tables built from them,
//! the star-triangle relation, and the composition of four weight tables
//! into a single four-point face weight that maps to a vertex matrix.
//!
//! Weights live on a one-parameter family of algebraic curves indexed by a
//! real modulus pair `(k, k')` with `k^2 + k'^2 = 1`: a point `(a, b, c, d)`
//! satisfies `a^N + k' b^N = k d^N` and `k' a^N + b^N = k c^N`. For two
//! points `p`, `q` the tables `W` and `Wb` are length-N cyclic weight lists
//! defined by first-order recurrences in the root of unity `omega =
//! exp(2 pi i / N)`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::tensor::{Cplx, RMatrix, SupportRule, TensorError, C_ONE};

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("modulus pair ({k}, {k_prime}) misses k^2 + k'^2 = 1 by {defect:.3e}")]
    BadModulus { k: f64, k_prime: f64, defect: f64 },
    #[error("state count must be at least 2, got {n}")]
    BadN { n: u32 },
    #[error("modulus k = 0 leaves the curve coordinates undetermined")]
    ZeroK,
    #[error("root branch index {index} is out of range for {n} states")]
    RootIndex { index: u32, n: u32 },
    #[error("coordinate {0} must be finite and nonzero")]
    BadCoordinate(&'static str),
    #[error("point misses the curve by relative residual {residual:.3e}")]
    OffCurve { residual: f64 },
    #[error("points have different state counts: {left} vs {right}")]
    MixedN { left: u32, right: u32 },
    #[error("points lie on curves with different moduli")]
    MixedModulus,
    #[error("division pole in weight table {table} at recurrence step {j}")]
    Pole { table: char, j: u32 },
    #[error(
        "triangle side product has an entry {min_abs:.3e} below the degeneracy floor {floor:.3e}"
    )]
    DegenerateTriangle { min_abs: f64, floor: f64 },
    #[error("unknown four-point route {0:?}")]
    UnknownRoute(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Real modulus pair on the unit circle, `k^2 + k'^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Modulus {
    k: f64,
    k_prime: f64,
}

impl Modulus {
    pub fn new(k: f64, k_prime: f64) -> Result<Self, CurveError> {
        let defect = (k * k + k_prime * k_prime - 1.0).abs();
        if !defect.is_finite() || defect > 1e-12 {
            return Err(CurveError::BadModulus { k, k_prime, defect });
        }
        Ok(Modulus { k, k_prime })
    }

    /// Complete `k'` to the positive-`k` pair.
    pub fn from_k_prime(k_prime: f64) -> Result<Self, CurveError> {
        if !(k_prime.abs() < 1.0) {
            return Err(CurveError::BadModulus {
                k: f64::NAN,
                k_prime,
                defect: f64::INFINITY,
            });
        }
        Ok(Modulus {
            k: (1.0 - k_prime * k_prime).sqrt(),
            k_prime,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn k_prime(&self) -> f64 {
        self.k_prime
    }

    pub fn approx_eq(&self, other: &Modulus, tol: f64) -> bool {
        (self.k - other.k).abs() <= tol && (self.k_prime - other.k_prime).abs() <= tol
    }
}

/// A certified point on the N-state curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CpPoint {
    a: Cplx,
    b: Cplx,
    c: Cplx,
    d: Cplx,
    modulus: Modulus,
    n: u32,
}

impl CpPoint {
    /// Certify membership: both curve equations must hold to a relative
    /// residual of 1e-12 against the largest `|coordinate|^N`.
    pub fn new(
        a: Cplx,
        b: Cplx,
        c: Cplx,
        d: Cplx,
        modulus: Modulus,
        n: u32,
    ) -> Result<Self, CurveError> {
        if n < 2 {
            return Err(CurveError::BadN { n });
        }
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !v.is_finite() || v.norm() == 0.0 {
                return Err(CurveError::BadCoordinate(name));
            }
        }
        let residual = membership_residual(a, b, c, d, modulus, n);
        if !(residual < 1e-12) {
            return Err(CurveError::OffCurve { residual });
        }
        Ok(CpPoint { a, b, c, d, modulus, n })
    }

    pub fn a(&self) -> Cplx {
        self.a
    }

    pub fn b(&self) -> Cplx {
        self.b
    }

    pub fn c(&self) -> Cplx {
        self.c
    }

    pub fn d(&self) -> Cplx {
        self.d
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Relative residual of the two curve equations at this point; the same
    /// quantity `new` certifies below 1e-12.
    pub fn curve_residual(&self) -> f64 {
        membership_residual(self.a, self.b, self.c, self.d, self.modulus, self.n)
    }
}

fn membership_residual(a: Cplx, b: Cplx, c: Cplx, d: Cplx, modulus: Modulus, n: u32) -> f64 {
    let an = a.powu(n);
    let bn = b.powu(n);
    let cn = c.powu(n);
    let dn = d.powu(n);
    let r1 = (an + bn * modulus.k_prime - dn * modulus.k).norm();
    let r2 = (an * modulus.k_prime + bn - cn * modulus.k).norm();
    let scale = an.norm().max(bn.norm()).max(cn.norm()).max(dn.norm());
    r1.max(r2) / scale
}

/// Complete free coordinates `(a, b)` to a curve point, choosing the
/// principal N-th root for `c` and `d` and then rotating each by the
/// requested root-of-unity branch.
pub fn sample_curve_point(
    modulus: Modulus,
    n: u32,
    a: Cplx,
    b: Cplx,
    root_c: u32,
    root_d: u32,
) -> Result<CpPoint, CurveError> {
    if n < 2 {
        return Err(CurveError::BadN { n });
    }
    if modulus.k == 0.0 {
        return Err(CurveError::ZeroK);
    }
    for (index, name) in [(root_c, "root_c"), (root_d, "root_d")] {
        let _ = name;
        if index >= n {
            return Err(CurveError::RootIndex { index, n });
        }
    }
    for (name, v) in [("a", a), ("b", b)] {
        if !v.is_finite() || v.norm() == 0.0 {
            return Err(CurveError::BadCoordinate(name));
        }
    }
    let om = omega_table(n);
    let inv_n = 1.0 / n as f64;
    let an = a.powu(n);
    let bn = b.powu(n);
    let d = ((an + bn * modulus.k_prime) / modulus.k).powf(inv_n) * om[root_d as usize];
    let c = ((an * modulus.k_prime + bn) / modulus.k).powf(inv_n) * om[root_c as usize];
    CpPoint::new(a, b, c, d, modulus, n)
}

/// `omega^j` for `j = 0..=n`, all from one polar construction so every use
/// of the same power is bitwise identical.
fn omega_table(n: u32) -> Vec<Cplx> {
    (0..=n)
        .map(|j| Cplx::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64))
        .collect()
}

/// The two weight tables for an ordered pair of curve points, `w[0] =
/// wb[0] = 1`.
#[derive(Clone, Debug)]
pub struct CpWeights {
    n: u32,
    w: Vec<Cplx>,
    wb: Vec<Cplx>,
}

impl CpWeights {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn w(&self) -> &[Cplx] {
        &self.w
    }

    pub fn wb(&self) -> &[Cplx] {
        &self.wb
    }

    /// `w` at a signed state difference, reduced mod N.
    pub fn w_diff(&self, diff: i64) -> Cplx {
        self.w[diff.rem_euclid(self.n as i64) as usize]
    }

    pub fn wb_diff(&self, diff: i64) -> Cplx {
        self.wb[diff.rem_euclid(self.n as i64) as usize]
    }
}

/// Run the two recurrences up to index `top` (inclusive). `top = n - 1`
/// fills the tables; `top = n` additionally computes the wrap-around value
/// that the cyclic closure check compares against 1.
fn weight_tables_to(p: &CpPoint, q: &CpPoint, top: u32) -> Result<(Vec<Cplx>, Vec<Cplx>), CurveError> {
    if p.n != q.n {
        return Err(CurveError::MixedN { left: p.n, right: q.n });
    }
    if !p.modulus.approx_eq(&q.modulus, 1e-12) {
        return Err(CurveError::MixedModulus);
    }
    let om = omega_table(p.n);
    let mut w = Vec::with_capacity(top as usize + 1);
    let mut wb = Vec::with_capacity(top as usize + 1);
    w.push(C_ONE);
    wb.push(C_ONE);
    // a self-pair (p = q) must stay exact: the w ratio is z/z and the wb
    // numerator cancels bitwise, both by commutativity of the products
    let wb_num_left = om[1] * (p.a * q.d);
    for j in 1..=top {
        let ju = j as usize;
        let w_num = p.d * q.b - p.a * q.c * om[ju];
        let w_den = p.b * q.d - p.c * q.a * om[ju];
        let w_floor = 1e-12 * ((p.b * q.d).norm() + (p.c * q.a * om[ju]).norm());
        if w_den.norm() < w_floor {
            return Err(CurveError::Pole { table: 'w', j });
        }
        let wb_num = wb_num_left - (p.d * q.a) * om[ju];
        let wb_den = p.c * q.b - p.b * q.c * om[ju];
        let wb_floor = 1e-12 * ((p.c * q.b).norm() + (p.b * q.c * om[ju]).norm());
        if wb_den.norm() < wb_floor {
            return Err(CurveError::Pole { table: 'b', j });
        }
        w.push(w[ju - 1] * (w_num / w_den));
        wb.push(wb[ju - 1] * (wb_num / wb_den));
    }
    Ok((w, wb))
}

/// Build both weight tables for the ordered pair `(p, q)`.
pub fn cp_weight_tables(p: &CpPoint, q: &CpPoint) -> Result<CpWeights, CurveError> {
    let (w, wb) = weight_tables_to(p, q, p.n - 1)?;
    Ok(CpWeights { n: p.n, w, wb })
}

/// Extend both recurrences one step past the table end and return how far
/// the wrapped values land from 1. Both are zero in exact arithmetic: the
/// recurrence coefficients multiply to 1 around the full cycle precisely
/// because the points sit on the curve.
pub fn closure_residuals(p: &CpPoint, q: &CpPoint) -> Result<(f64, f64), CurveError> {
    let n = p.n as usize;
    let (w, wb) = weight_tables_to(p, q, p.n)?;
    Ok(((w[n] - C_ONE).norm(), (wb[n] - C_ONE).norm()))
}

/// Result of a star-triangle comparison: the worst relative deviation of
/// the ratio (summed side / product side) from its value at the origin.
#[derive(Clone, Copy, Debug)]
pub struct StarTriangleCheck {
    pub residual: f64,
    /// The scalar the summed side exceeds the product side by; independent
    /// of the three states when the relation holds.
    pub rho: Cplx,
}

/// Check the star-triangle relation for three curve points: for all states
/// `(a, b, c)`,
///
/// `sum_d wb_qr(b-d) w_pr(a-d) wb_pq(d-c) = rho w_pq(a-b) wb_pr(b-c) w_qr(a-c)`
///
/// with one state-independent scalar `rho`. All product-side values are
/// computed first; if any falls below `1e-12` times the largest, the
/// triangle is reported degenerate instead of dividing by it.
pub fn star_triangle_residual(
    p: &CpPoint,
    q: &CpPoint,
    r: &CpPoint,
) -> Result<StarTriangleCheck, CurveError> {
    let n = p.n as i64;
    let t_pq = cp_weight_tables(p, q)?;
    let t_pr = cp_weight_tables(p, r)?;
    let t_qr = cp_weight_tables(q, r)?;

    let nu = n as usize;
    let mut product_side = vec![Cplx::new(0.0, 0.0); nu * nu * nu];
    let mut max_abs: f64 = 0.0;
    let mut min_abs = f64::INFINITY;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = t_pq.w_diff(a - b) * t_pr.wb_diff(b - c) * t_qr.w_diff(a - c);
                product_side[((a * n + b) * n + c) as usize] = v;
                max_abs = max_abs.max(v.norm());
                min_abs = min_abs.min(v.norm());
            }
        }
    }
    let floor = 1e-12 * max_abs;
    if min_abs < floor {
        return Err(CurveError::DegenerateTriangle { min_abs, floor });
    }

    let summed = |a: i64, b: i64, c: i64| -> Cplx {
        let mut acc = Cplx::new(0.0, 0.0);
        for d in 0..n {
            acc += t_qr.wb_diff(b - d) * t_pr.w_diff(a - d) * t_pq.wb_diff(d - c);
        }
        acc
    };

    let rho = summed(0, 0, 0) / product_side[0];
    let rho_abs = rho.norm();
    let mut residual: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let ratio = summed(a, b, c) / product_side[((a * n + b) * n + c) as usize];
                residual = residual.max((ratio - rho).norm() / rho_abs);
            }
        }
    }
    Ok(StarTriangleCheck { residual, rho })
}

/// A four-point face weight on corner states `(a, b, c, d)`, stored as a
/// difference table `g[u, v, t]` with `u = a-b`, `v = a-c`, `t = a-d`; the
/// corner reading is translation invariant by construction.
#[derive(Clone, Debug)]
pub struct IrfWeight {
    n: u32,
    g: Vec<Cplx>,
}

impl IrfWeight {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn g_at(&self, u: usize, v: usize, t: usize) -> Cplx {
        let n = self.n as usize;
        self.g[(u * n + v) * n + t]
    }

    /// Weight at explicit corner states, each in `0..n`.
    pub fn table(&self, a: usize, b: usize, c: usize, d: usize) -> Cplx {
        let n = self.n as usize;
        self.g_at((a + n - b) % n, (a + n - c) % n, (a + n - d) % n)
    }
}

/// How four weight tables over two rapidity pairs combine into one
/// four-point weight, and how that weight is read as a vertex matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FourPointRoute {
    /// Center-summed star of four alternating tables; vertex legs carry
    /// corner differences subject to the cyclic charge rule.
    Star,
    /// The star with the type of its first face swapped; a negative
    /// control that must fail the vertex relation by a wide margin.
    StarSwappedControl,
    /// The center-free cyclic product pushed through the same
    /// difference-pairing as the star; a divergence control that must fail.
    DiamondWkw,
    /// The center-free cyclic product with vertex legs read directly as
    /// the four corner states; unrestricted support.
    DiamondCorners,
}

impl FourPointRoute {
    pub const ALL: [FourPointRoute; 4] = [
        FourPointRoute::Star,
        FourPointRoute::StarSwappedControl,
        FourPointRoute::DiamondWkw,
        FourPointRoute::DiamondCorners,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            FourPointRoute::Star => "star",
            FourPointRoute::StarSwappedControl => "star-swapped-control",
            FourPointRoute::DiamondWkw => "diamond-wkw",
            FourPointRoute::DiamondCorners => "diamond-corners",
        }
    }
}

impl fmt::Display for FourPointRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FourPointRoute {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, CurveError> {
        FourPointRoute::ALL
            .into_iter()
            .find(|r| r.tag() == s)
            .ok_or_else(|| CurveError::UnknownRoute(s.to_string()))
    }
}

struct PairTables {
    pq: CpWeights,
    p2q: CpWeights,
    p2q2: CpWeights,
    pq2: CpWeights,
}

fn pair_tables(pp: (&CpPoint, &CpPoint), qq: (&CpPoint, &CpPoint)) -> Result<PairTables, CurveError> {
    Ok(PairTables {
        pq: cp_weight_tables(pp.0, qq.0)?,
        p2q: cp_weight_tables(pp.1, qq.0)?,
        p2q2: cp_weight_tables(pp.1, qq.1)?,
        pq2: cp_weight_tables(pp.0, qq.1)?,
    })
}

/// Compose the four-point weight for route `route` from the rapidity pairs
/// `pp = (p, p2)` and `qq = (q, q2)`.
///
/// Star (summed over the center state `e`, written via `s = a - e`):
///
/// `g[u,v,t] = sum_s w_pq(s) wb_p2q(s-u) w_p2q2(v-s) wb_pq2(t-s)`
///
/// Diamond (cyclic product, no center):
///
/// `g[u,v,t] = w_p2q(u) wb_p2q2(v-u) w_pq2(v-t) wb_pq(t)`
pub fn compose_four_point(
    route: FourPointRoute,
    pp: (&CpPoint, &CpPoint),
    qq: (&CpPoint, &CpPoint),
) -> Result<IrfWeight, CurveError> {
    let tabs = pair_tables(pp, qq)?;
    let n = tabs.pq.n() as usize;
    let mut g = vec![Cplx::new(0.0, 0.0); n * n * n];
    match route {
        FourPointRoute::Star | FourPointRoute::StarSwappedControl => {
            let first_face: &dyn Fn(usize) -> Cplx = match route {
                FourPointRoute::StarSwappedControl => &|s| tabs.pq.wb()[s],
                _ => &|s| tabs.pq.w()[s],
            };
            for u in 0..n {
                for v in 0..n {
                    for t in 0..n {
                        let mut acc = Cplx::new(0.0, 0.0);
                        for s in 0..n {
                            acc += first_face(s)
                                * tabs.p2q.wb()[(s + n - u) % n]
                                * tabs.p2q2.w()[(v + n - s) % n]
                                * tabs.pq2.wb()[(t + n - s) % n];
                        }
                        g[(u * n + v) * n + t] = acc;
                    }
                }
            }
        }
        FourPointRoute::DiamondWkw | FourPointRoute::DiamondCorners => {
            for u in 0..n {
                for v in 0..n {
                    for t in 0..n {
                        g[(u * n + v) * n + t] = tabs.p2q.w()[u]
                            * tabs.p2q2.wb()[(v + n - u) % n]
                            * tabs.pq2.w()[(v + n - t) % n]
                            * tabs.pq.wb()[t];
                    }
                }
            }
        }
    }
    Ok(IrfWeight { n: tabs.pq.n(), g })
}

/// Read a four-point weight as a vertex matrix through the corner
/// difference pairing: legs `(i, j, k, l)` carry `(a-b, b-c, d-c, a-d)`,
/// nonzero only where `(i + j) mod N = (k + l) mod N`.
pub fn wkw_vertex_map(irf: &IrfWeight) -> Result<RMatrix, CurveError> {
    let n = irf.n as usize;
    let zero = Cplx::new(0.0, 0.0);
    let r = RMatrix::from_fn(n, n, SupportRule::ZnCharge, |i, j, k, l| {
        if (i + j) % n == (k + l) % n {
            irf.g_at(i, (i + j) % n, l)
        } else {
            zero
        }
    })?;
    Ok(r)
}

/// Read a four-point weight as a vertex matrix with the legs carrying the
/// corner states themselves; every entry is populated.
pub fn corner_vertex_map(irf: &IrfWeight) -> Result<RMatrix, CurveError> {
    let n = irf.n as usize;
    let r = RMatrix::from_fn(n, n, SupportRule::Unrestricted, |i, j, k, l| {
        irf.table(i, j, k, l)
    })?;
    Ok(r)
}

/// The vertex reading each route prescribes.
pub fn four_point_vertex(route: FourPointRoute, irf: &IrfWeight) -> Result<RMatrix, CurveError> {
    match route {
        FourPointRoute::DiamondCorners => corner_vertex_map(irf),
        _ => wkw_vertex_map(irf),
    }
}

/// Compose and map in one step.
pub fn build_four_point_vertex(
    route: FourPointRoute,
    pp: (&CpPoint, &CpPoint),
    qq: (&CpPoint, &CpPoint),
) -> Result<RMatrix, CurveError> {
    four_point_vertex(route, &compose_four_point(route, pp, qq)?)
}

/// Vertex relation residual for three four-point matrices built from three
/// rapidity pairs, sharing the route.
pub fn four_point_ybe_residual(
    route: FourPointRoute,
    l1: (&CpPoint, &CpPoint),
    l2: (&CpPoint, &CpPoint),
    l3: (&CpPoint, &CpPoint),
) -> Result<f64, CurveError> {
    let ra = build_four_point_vertex(route, l1, l2)?;
    let rb = build_four_point_vertex(route, l1, l3)?;
    let rc = build_four_point_vertex(route, l2, l3)?;
    Ok(crate::tensor::ybe_residual(&ra, &rb, &rc)?)
}

/// Largest deviation of the charge-rule vertex from its defining pattern:
/// off the conserving set entries must be exactly zero, on it they must
/// reproduce the difference table. Zero by construction; a regression
/// tripwire for the map.
pub fn charge_rule_residual(irf: &IrfWeight) -> Result<f64, CurveError> {
    let v = wkw_vertex_map(irf)?;
    let n = irf.n as usize;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let got = v.get(i, j, k, l);
                    let want = if (i + j) % n == (k + l) % n {
                        irf.g_at(i, (i + j) % n, l)
                    } else {
                        Cplx::new(0.0, 0.0)
                    };
                    worst = worst.max((got - want).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Largest change of the corner table under a simultaneous shift of all
/// four corner states by one. Zero by construction of the difference
/// storage; certifies the translation invariance of the representation.
pub fn translation_invariance_residual(irf: &IrfWeight) -> f64 {
    let n = irf.n as usize;
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let shifted =
                        irf.table((a + 1) % n, (b + 1) % n, (c + 1) % n, (d + 1) % n);
                    worst = worst.max((shifted - irf.table(a, b, c, d)).norm());
                }
            }
        }
    }
    worst
}
