//! The verification checks behind the suite and the focused subcommands.
//!
//! Every check derives a private random stream from the master seed and its
//! own name, draws parameters, evaluates residuals through the core kernels,
//! and reports the worst residual per parameter group. Negative controls are
//! inverted: they report the shortfall below a divergence floor, so a
//! "pass" means the corrupted construction failed as loudly as it must.

use std::collections::BTreeMap;

use ybkit_core::chiral_potts::{
    charge_rule_residual, closure_residuals, compose_four_point, cp_weight_tables,
    four_point_ybe_residual, sample_curve_point, star_triangle_residual,
    translation_invariance_residual, CpPoint, FourPointRoute, Modulus,
};
use ybkit_core::qseries::{pochhammer_bs, pochhammer_std, q_integer_bs, q_integer_std};
use ybkit_core::report::sort_reports;
use ybkit_core::sample::Sampler;
use ybkit_core::six_vertex::{
    build_six_vertex, resolve_q1, staggered_connect, uniform_connect, Parity, RootOfUnitySpec,
    SixVertexGauge, SixVertexParams, StaggeredDirection, UniformDirection,
};
use ybkit_core::slmn::{
    build_slmn_additive, build_slmn_multiplicative, build_slmn_root_of_unity, entry_families,
    grading_consistency_residual, monomial_span_certify, span_fit, RootReducedSpec, SlmnParams,
};
use ybkit_core::{apply_gauge, projective_distance, ybe_residual, CheckReport, Cplx};

use crate::config::SuiteConfig;

/// Grading splits exercised by every multi-state check.
pub const GRADINGS: [(usize, usize); 4] = [(2, 0), (0, 2), (1, 1), (2, 1)];

/// Residual floor the negative-control constructions must exceed.
pub const CONTROL_FLOOR: f64 = 1e-2;

fn one() -> Cplx {
    Cplx::new(1.0, 0.0)
}

/// Per-check stream seed: FNV-1a over the name, folded with the master
/// seed, so adding or reordering checks never shifts another check's draws.
fn stream_seed(master: u64, name: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^ master
}

fn kv(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// A primitive root spec of order `n` with a randomly drawn exponent.
fn random_root(sampler: &mut Sampler, n: u32) -> RootOfUnitySpec {
    loop {
        let j = 1 + sampler.index(n);
        if let Ok(spec) = RootOfUnitySpec::new(n, j) {
            return spec;
        }
    }
}

fn draw_point(sampler: &mut Sampler, modulus: Modulus, n: u32) -> CpPoint {
    for _ in 0..64 {
        if let Ok(p) = sampler.curve_point(modulus, n) {
            return p;
        }
    }
    panic!("no curve point after 64 draws at n={n}");
}

/// Vertex relation for the 2-state model: one report per gauge, same gauge
/// and q on all three matrices, rapidity arguments (x,y), (x,z), (y,z).
/// The q draws cycle through unit phases, the configured root-of-unity
/// orders, and off-circle moduli.
///
/// The monomial gauges get rapidity phases over the full circle. The
/// symmetric gauge carries the half power (xy)^(1/2), which is
/// single-valued only while arg(x) + arg(y) stays inside the principal
/// branch, so its phases are confined to (-1.4, 1.4) radians; outside that
/// domain the branch flip genuinely breaks the relation, which is the
/// half-integer-power obstruction the monomial gauges remove.
pub fn six_vertex_ybe(cfg: &SuiteConfig) -> Vec<CheckReport> {
    SixVertexGauge::ALL
        .iter()
        .map(|&gauge| {
            let name = format!("six-vertex-ybe-{}", gauge.tag());
            let tolerance = cfg.tolerance_for(&name, 1e-10);
            let samples = cfg.samples_for(&name, 100);
            let mut sampler = Sampler::new(stream_seed(cfg.seed, &name));
            let mut worst: f64 = 0.0;
            for t in 0..samples {
                let q = match t % 3 {
                    0 => sampler.unit_phase(),
                    1 => {
                        let n = cfg.n_list[t / 3 % cfg.n_list.len()];
                        random_root(&mut sampler, n).q()
                    }
                    _ => sampler.unit_phase() * sampler.uniform(0.5, 1.8),
                };
                let build = |x: Cplx, y: Cplx| {
                    build_six_vertex(&SixVertexParams::new(gauge, q, x, y).unwrap()).unwrap()
                };
                let mut rapidity = || match gauge {
                    SixVertexGauge::Sym => Cplx::from_polar(1.0, sampler.uniform(-1.4, 1.4)),
                    _ => sampler.unit_phase(),
                };
                let x = rapidity();
                let y = rapidity();
                let z = rapidity();
                let res = ybe_residual(&build(x, y), &build(x, z), &build(y, z)).unwrap();
                worst = worst.max(res);
            }
            CheckReport::new(
                name,
                kv(&[
                    ("samples", samples.to_string()),
                    ("seed", cfg.seed.to_string()),
                ]),
                worst,
                tolerance,
            )
        })
        .collect()
}

/// Parameter draws for the bridge checks: two fixed anchors (even and odd
/// root orders with a real rapidity pair), then random off-circle values.
/// The random boxes stay in the right half plane so the eighth-root
/// sandwiches never straddle a branch cut.
fn bridge_draws(sampler: &mut Sampler, n_list: &[u32], t: usize) -> (Cplx, Cplx, Cplx) {
    match t {
        0 => (
            RootOfUnitySpec::new(4, 1).unwrap().q(),
            Cplx::new(2.0, 0.0),
            Cplx::new(3.0, 0.0),
        ),
        1 => (
            RootOfUnitySpec::new(5, 1).unwrap().q(),
            Cplx::new(2.0, 0.0),
            Cplx::new(3.0, 0.0),
        ),
        _ => {
            let q = if t % 2 == 0 {
                let n = n_list[t % n_list.len()];
                random_root(sampler, n).q()
            } else {
                sampler.complex_box(0.3, 1.5, -0.8, 0.8)
            };
            let x = sampler.complex_box(0.5, 2.0, -0.5, 0.5);
            let y = sampler.complex_box(0.5, 2.0, -0.5, 0.5);
            (q, x, y)
        }
    }
}

/// The two diagonal sandwiches connecting the 2-state gauges, reported as
/// projective distances between the transformed and the directly built
/// matrix.
pub fn gauge_bridges(cfg: &SuiteConfig) -> Vec<CheckReport> {
    ["bridge-staggered", "bridge-uniform"]
        .iter()
        .map(|&name| {
            let tolerance = cfg.tolerance_for(name, 1e-12);
            let samples = cfg.samples_for(name, 20);
            let mut sampler = Sampler::new(stream_seed(cfg.seed, name));
            let mut worst: f64 = 0.0;
            for t in 0..samples {
                let (q, x, y) = bridge_draws(&mut sampler, &cfg.n_list, t);
                let build = |gauge| {
                    build_six_vertex(&SixVertexParams::new(gauge, q, x, y).unwrap()).unwrap()
                };
                let (from, to, sandwich) = if name == "bridge-staggered" {
                    (
                        build(SixVertexGauge::Bs),
                        build(SixVertexGauge::Bbp),
                        staggered_connect(StaggeredDirection::BsToBbp, q).unwrap(),
                    )
                } else {
                    (
                        build(SixVertexGauge::Sym),
                        build(SixVertexGauge::Bs),
                        uniform_connect(UniformDirection::SymToBs, x, y).unwrap(),
                    )
                };
                let moved = apply_gauge(&from, &sandwich).unwrap();
                worst = worst.max(projective_distance(&moved, &to).unwrap());
            }
            CheckReport::new(
                name,
                kv(&[
                    ("samples", samples.to_string()),
                    ("seed", cfg.seed.to_string()),
                ]),
                worst,
                tolerance,
            )
        })
        .collect()
}

struct SlmnDraw {
    base: SlmnParams,
    gauge_p: Vec<[Cplx; 2]>,
    gauge_q: Vec<[Cplx; 2]>,
    gauge_r: Vec<[Cplx; 2]>,
}

fn slmn_draw(sampler: &mut Sampler, m: usize, n: usize) -> SlmnDraw {
    let d = m + n;
    let eta = sampler.complex_box(0.2, 0.8, -0.3, 0.3);
    let twists = sampler.slmn_twists(d);
    SlmnDraw {
        base: SlmnParams::new(m, n, eta)
            .unwrap()
            .with_twists(twists)
            .unwrap(),
        gauge_p: sampler.slmn_gauge(d),
        gauge_q: sampler.slmn_gauge(d),
        gauge_r: sampler.slmn_gauge(d),
    }
}

/// Vertex relation for the graded multi-state model in its three build
/// forms, one report per (form, grading split). Each line of the relation
/// carries its own gauge pair and rapidity offset; twists and eta are
/// shared, as the relation requires.
pub fn slmn_ybe(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for form in ["additive", "multiplicative", "root"] {
        let name = format!("slmn-ybe-{form}");
        let tolerance = cfg.tolerance_for(&name, 1e-10);
        for (m, n) in GRADINGS {
            let samples = cfg.samples_for(&name, 50);
            let mut sampler = Sampler::new(stream_seed(cfg.seed, &format!("{name}:{m},{n}")));
            let mut worst: f64 = 0.0;
            for t in 0..samples {
                let res = match form {
                    "additive" => {
                        let draw = slmn_draw(&mut sampler, m, n);
                        let p0 = sampler.complex_box(-0.5, 0.5, -0.3, 0.3);
                        let q0 = sampler.complex_box(-0.5, 0.5, -0.3, 0.3);
                        let r0 = sampler.complex_box(-0.5, 0.5, -0.3, 0.3);
                        let with = |gl: &Vec<[Cplx; 2]>, gr: &Vec<[Cplx; 2]>| {
                            draw.base
                                .clone()
                                .with_gauges(gl.clone(), gr.clone())
                                .unwrap()
                        };
                        let ra =
                            build_slmn_additive(&with(&draw.gauge_p, &draw.gauge_q), p0, q0)
                                .unwrap();
                        let rb =
                            build_slmn_additive(&with(&draw.gauge_p, &draw.gauge_r), p0, r0)
                                .unwrap();
                        let rc =
                            build_slmn_additive(&with(&draw.gauge_q, &draw.gauge_r), q0, r0)
                                .unwrap();
                        ybe_residual(&ra, &rb, &rc).unwrap()
                    }
                    "multiplicative" => {
                        let draw = slmn_draw(&mut sampler, m, n);
                        let yp = (sampler.complex_box(-0.5, 0.5, -0.3, 0.3) * 2.0).exp();
                        let yq = (sampler.complex_box(-0.5, 0.5, -0.3, 0.3) * 2.0).exp();
                        let yr = (sampler.complex_box(-0.5, 0.5, -0.3, 0.3) * 2.0).exp();
                        let with = |gl: &Vec<[Cplx; 2]>, gr: &Vec<[Cplx; 2]>| {
                            draw.base
                                .clone()
                                .with_gauges(gl.clone(), gr.clone())
                                .unwrap()
                        };
                        let ra = build_slmn_multiplicative(
                            &with(&draw.gauge_p, &draw.gauge_q),
                            yq,
                            yp,
                        )
                        .unwrap();
                        let rb = build_slmn_multiplicative(
                            &with(&draw.gauge_p, &draw.gauge_r),
                            yr,
                            yp,
                        )
                        .unwrap();
                        let rc = build_slmn_multiplicative(
                            &with(&draw.gauge_q, &draw.gauge_r),
                            yr,
                            yq,
                        )
                        .unwrap();
                        ybe_residual(&ra, &rb, &rc).unwrap()
                    }
                    _ => {
                        let order = 2 + (t as u32) % 5;
                        let root = random_root(&mut sampler, order);
                        let x = sampler.unit_phase();
                        let y = sampler.unit_phase();
                        let z = sampler.unit_phase();
                        let build = |x, y| {
                            build_slmn_root_of_unity(
                                &RootReducedSpec::new(m, n, root, x, y).unwrap(),
                            )
                            .unwrap()
                        };
                        ybe_residual(&build(x, y), &build(x, z), &build(y, z)).unwrap()
                    }
                };
                worst = worst.max(res);
            }
            out.push(CheckReport::new(
                &name,
                kv(&[
                    ("m", m.to_string()),
                    ("n", n.to_string()),
                    ("samples", samples.to_string()),
                    ("seed", cfg.seed.to_string()),
                ]),
                worst,
                tolerance,
            ));
        }
    }
    out
}

/// Entrywise agreement of the additive and multiplicative builds under the
/// exponential substitution, after rescaling by the connecting prefactor
/// `sqrt(q)/2 * sqrt(y/x)`.
pub fn slmn_add_mult_agreement(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let name = "slmn-add-mult-agreement";
    let tolerance = cfg.tolerance_for(name, 1e-12);
    GRADINGS
        .iter()
        .map(|&(m, n)| {
            let samples = cfg.samples_for(name, 10);
            let mut sampler = Sampler::new(stream_seed(cfg.seed, &format!("{name}:{m},{n}")));
            let mut worst: f64 = 0.0;
            for _ in 0..samples {
                let draw = slmn_draw(&mut sampler, m, n);
                let base = draw
                    .base
                    .with_gauges(draw.gauge_p.clone(), draw.gauge_q.clone())
                    .unwrap();
                let u = sampler.complex_box(-0.5, 0.5, -0.3, 0.3);
                let v = sampler.complex_box(-0.5, 0.5, -0.3, 0.3);
                let r_add = build_slmn_additive(&base, u, v).unwrap();
                let q = (base.eta() * 2.0).exp();
                let x = (v * 2.0).exp();
                let y = (u * 2.0).exp();
                let bridge = q.sqrt() / 2.0 * (y / x).sqrt();
                let scaled = base
                    .clone()
                    .with_normalization(base.normalization() * bridge);
                let r_mul = build_slmn_multiplicative(&scaled, x, y).unwrap();
                let scale = r_add.max_abs();
                let diff = r_add
                    .entries()
                    .iter()
                    .zip(r_mul.entries())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                worst = worst.max(diff / scale);
            }
            CheckReport::new(
                name,
                kv(&[
                    ("m", m.to_string()),
                    ("n", n.to_string()),
                    ("samples", samples.to_string()),
                    ("seed", cfg.seed.to_string()),
                ]),
                worst,
                tolerance,
            )
        })
        .collect()
}

/// Monomial-span certificate for every nonzero entry family of the
/// root-of-unity build: the fit residual and the distance of the fitted
/// coefficients from {-1, 0, +1} must both sit at machine precision.
pub fn slmn_span(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let name = "slmn-span";
    let tolerance = cfg.tolerance_for(name, 1e-12);
    GRADINGS
        .iter()
        .map(|&(m, n)| {
            let cert =
                monomial_span_certify(m, n, stream_seed(cfg.seed, &format!("{name}:{m},{n}")));
            let residual = cert.max_fit_residual().max(cert.max_coefficient_distance());
            CheckReport::new(
                name,
                kv(&[
                    ("m", m.to_string()),
                    ("n", n.to_string()),
                    ("families", entry_families(m, n).len().to_string()),
                ]),
                residual,
                tolerance,
            )
        })
        .collect()
}

/// Negative control for the span certifier: the symmetric-gauge exchange
/// entry carries a half-power of x/y and must miss the four-monomial basis
/// by a wide margin. Reported as the shortfall below [`CONTROL_FLOOR`].
pub fn slmn_span_negative_control(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let name = "slmn-span-negative-control";
    let tolerance = cfg.tolerance_for(name, 1e-12);
    let fit = span_fit(
        |q, x, y| (x / y).sqrt() * (one() - one() / q),
        stream_seed(cfg.seed, name),
    );
    let shortfall = (CONTROL_FLOOR - fit.fit_residual).max(0.0);
    vec![CheckReport::new(
        name,
        kv(&[
            ("floor", format!("{CONTROL_FLOOR:e}")),
            ("achieved", format!("{:.3e}", fit.fit_residual)),
        ]),
        shortfall,
        tolerance,
    )]
}

/// The (2,0) root-of-unity reduction must reproduce the fully monomial
/// 2-state gauge entry for entry.
pub fn slmn_root_matches_two_state(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let name = "slmn-root-matches-bbp";
    let tolerance = cfg.tolerance_for(name, 1e-14);
    let samples = cfg.samples_for(name, 10);
    let mut sampler = Sampler::new(stream_seed(cfg.seed, name));
    let mut worst: f64 = 0.0;
    for t in 0..samples {
        let order = cfg.n_list[t % cfg.n_list.len()];
        let root = random_root(&mut sampler, order);
        let (x, y) = if t == 0 {
            (Cplx::new(2.0, 0.0), Cplx::new(3.0, 0.0))
        } else {
            (sampler.unit_phase(), sampler.unit_phase())
        };
        let reduced =
            build_slmn_root_of_unity(&RootReducedSpec::new(2, 0, root, x, y).unwrap()).unwrap();
        let direct =
            build_six_vertex(&SixVertexParams::new(SixVertexGauge::Bbp, root.q(), x, y).unwrap())
                .unwrap();
        let scale = direct.max_abs();
        let diff = reduced
            .entries()
            .iter()
            .zip(direct.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(diff / scale);
    }
    vec![CheckReport::new(
        name,
        kv(&[
            ("samples", samples.to_string()),
            ("seed", cfg.seed.to_string()),
        ]),
        worst,
        tolerance,
    )]
}

/// Relabeling all four legs by the grading reversal and negating the
/// off-diagonal twists must map the (m,n) build onto the (n,m) build
/// exactly.
pub fn slmn_grading_consistency(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let name = "slmn-grading-consistency";
    let tolerance = cfg.tolerance_for(name, 1e-14);
    GRADINGS
        .iter()
        .map(|&(m, n)| {
            let samples = cfg.samples_for(name, 5);
            let mut sampler = Sampler::new(stream_seed(cfg.seed, &format!("{name}:{m},{n}")));
            let mut worst: f64 = 0.0;
            for _ in 0..samples {
                let draw = slmn_draw(&mut sampler, m, n);
                let params = draw
                    .base
                    .with_gauges(draw.gauge_p.clone(), draw.gauge_q.clone())
                    .unwrap();
                let p0 = sampler.complex_box(-0.5, 0.5, -0.3, 0.3);
                let q0 = sampler.complex_box(-0.5, 0.5, -0.3, 0.3);
                worst = worst.max(grading_consistency_residual(&params, p0, q0).unwrap());
            }
            CheckReport::new(
                name,
                kv(&[
                    ("m", m.to_string()),
                    ("n", n.to_string()),
                    ("samples", samples.to_string()),
                    ("seed", cfg.seed.to_string()),
                ]),
                worst,
                tolerance,
            )
        })
        .collect()
}

/// Membership residuals of sampled parameter-curve points, sweeping every
/// root branch of the completed coordinates at each order.
pub fn cp_curve_membership(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let name = "cp-curve-membership";
    let tolerance = cfg.tolerance_for(name, 1e-12);
    (2..=7u32)
        .map(|n| {
            let mut sampler = Sampler::new(stream_seed(cfg.seed, &format!("{name}:{n}")));
            let modulus = sampler.modulus();
            let mut worst: f64 = 0.0;
            'redraw: for _ in 0..64 {
                let a = sampler.complex_box(0.4, 1.2, -0.6, 0.6);
                let b = sampler.complex_box(0.4, 1.2, -0.6, 0.6);
                let mut local: f64 = 0.0;
                for root_c in 0..n {
                    for root_d in 0..n {
                        match sample_curve_point(modulus, n, a, b, root_c, root_d) {
                            Ok(p) => local = local.max(p.curve_residual()),
                            Err(_) => continue 'redraw,
                        }
                    }
                }
                worst = local;
                break;
            }
            CheckReport::new(
                name,
                kv(&[
                    ("branches", (n * n).to_string()),
                    ("n", n.to_string()),
                    ("seed", cfg.seed.to_string()),
                ]),
                worst,
                tolerance,
            )
        })
        .collect()
}

/// Coincident-point weight tables: the direct table must be identically one
/// and the conjugate table the delta at difference zero.
pub fn cp_self_point_weights(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let name = "cp-self-point-weights";
    let tolerance = cfg.tolerance_for(name, 1e-14);
    (2..=5u32)
        .map(|n| {
            let samples = cfg.samples_for(name, 5);
            let mut sampler = Sampler::new(stream_seed(cfg.seed, &format!("{name}:{n}")));
            let modulus = sampler.modulus();
            let mut worst: f64 = 0.0;
            for _ in 0..samples {
                let p = draw_point(&mut sampler, modulus, n);
                let tables = cp_weight_tables(&p, &p).unwrap();
                for j in 0..n as usize {
                    worst = worst.max((tables.w()[j] - one()).norm());
                    let expect = if j == 0 { one() } else { Cplx::new(0.0, 0.0) };
                    worst = worst.max((tables.wb()[j] - expect).norm());
                }
            }
            CheckReport::new(
                name,
                kv(&[
                    ("n", n.to_string()),
                    ("samples", samples.to_string()),
                    ("seed", cfg.seed.to_string()),
                ]),
                worst,
                tolerance,
            )
        })
        .collect()
}

/// Cyclic closure: continuing either weight recurrence through a full
/// period must return to the normalization.
pub fn cp_closure(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let name = "cp-closure";
    let tolerance = cfg.tolerance_for(name, 1e-10);
    (2..=5u32)
        .map(|n| {
            let samples = cfg.samples_for(name, 50);
            let mut sampler = Sampler::new(stream_seed(cfg.seed, &format!("{name}:{n}")));
            let modulus = sampler.modulus();
            let mut worst: f64 = 0.0;
            for _ in 0..samples {
                let p = draw_point(&mut sampler, modulus, n);
                let q = draw_point(&mut sampler, modulus, n);
                if let Ok((r1, r2)) = closure_residuals(&p, &q) {
                    worst = worst.max(r1).max(r2);
                }
            }
            CheckReport::new(
                name,
                kv(&[
                    ("n", n.to_string()),
                    ("pairs", samples.to_string()),
                    ("seed", cfg.seed.to_string()),
                ]),
                worst,
                tolerance,
            )
        })
        .collect()
}

/// Star-triangle ratio constancy on random point triples.
pub fn cp_star_triangle(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let name = "cp-star-triangle";
    let tolerance = cfg.tolerance_for(name, 1e-9);
    (2..=5u32)
        .map(|n| {
            let samples = cfg.samples_for(name, 10);
            let mut sampler = Sampler::new(stream_seed(cfg.seed, &format!("{name}:{n}")));
            let modulus = sampler.modulus();
            let mut worst: f64 = 0.0;
            for _ in 0..samples {
                for _ in 0..64 {
                    let p = draw_point(&mut sampler, modulus, n);
                    let q = draw_point(&mut sampler, modulus, n);
                    let r = draw_point(&mut sampler, modulus, n);
                    if let Ok(check) = star_triangle_residual(&p, &q, &r) {
                        worst = worst.max(check.residual);
                        break;
                    }
                }
            }
            CheckReport::new(
                name,
                kv(&[
                    ("n", n.to_string()),
                    ("triples", samples.to_string()),
                    ("seed", cfg.seed.to_string()),
                ]),
                worst,
                tolerance,
            )
        })
        .collect()
}

fn draw_pair(sampler: &mut Sampler, modulus: Modulus, n: u32) -> (CpPoint, CpPoint) {
    (
        draw_point(sampler, modulus, n),
        draw_point(sampler, modulus, n),
    )
}

/// Checks on the four-weight composed vertex: the two valid composition
/// routes must satisfy the vertex relation, the two negative-control
/// routes must miss it by at least [`CONTROL_FLOOR`], and the structural
/// residuals (charge rule, translation invariance) must vanish identically.
pub fn four_point_checks(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for n in [2u32, 3] {
        let label = |name: &str| format!("{name}:{n}");

        for (name, route) in [
            ("r4cp-star-ybe", FourPointRoute::Star),
            ("r4cp-diamond-corner-ybe", FourPointRoute::DiamondCorners),
        ] {
            let tolerance = cfg.tolerance_for(name, 1e-8);
            let samples = cfg.samples_for(name, 3);
            let mut sampler = Sampler::new(stream_seed(cfg.seed, &label(name)));
            let modulus = sampler.modulus();
            let mut worst: f64 = 0.0;
            for _ in 0..samples {
                for _ in 0..64 {
                    let l1 = draw_pair(&mut sampler, modulus, n);
                    let l2 = draw_pair(&mut sampler, modulus, n);
                    let l3 = draw_pair(&mut sampler, modulus, n);
                    if let Ok(res) = four_point_ybe_residual(
                        route,
                        (&l1.0, &l1.1),
                        (&l2.0, &l2.1),
                        (&l3.0, &l3.1),
                    ) {
                        worst = worst.max(res);
                        break;
                    }
                }
            }
            out.push(CheckReport::new(
                name,
                kv(&[
                    ("n", n.to_string()),
                    ("samples", samples.to_string()),
                    ("seed", cfg.seed.to_string()),
                ]),
                worst,
                tolerance,
            ));
        }

        for (name, route) in [
            ("r4cp-star-swapped-control", FourPointRoute::StarSwappedControl),
            ("r4cp-diamond-wkw-divergence", FourPointRoute::DiamondWkw),
        ] {
            let tolerance = cfg.tolerance_for(name, 1e-12);
            let samples = cfg.samples_for(name, 2);
            let mut sampler = Sampler::new(stream_seed(cfg.seed, &label(name)));
            let modulus = sampler.modulus();
            let mut shortfall: f64 = 0.0;
            let mut achieved = f64::INFINITY;
            for _ in 0..samples {
                for _ in 0..64 {
                    let l1 = draw_pair(&mut sampler, modulus, n);
                    let l2 = draw_pair(&mut sampler, modulus, n);
                    let l3 = draw_pair(&mut sampler, modulus, n);
                    if let Ok(res) = four_point_ybe_residual(
                        route,
                        (&l1.0, &l1.1),
                        (&l2.0, &l2.1),
                        (&l3.0, &l3.1),
                    ) {
                        achieved = achieved.min(res);
                        shortfall = shortfall.max((CONTROL_FLOOR - res).max(0.0));
                        break;
                    }
                }
            }
            out.push(CheckReport::new(
                name,
                kv(&[
                    ("achieved", format!("{achieved:.3e}")),
                    ("floor", format!("{CONTROL_FLOOR:e}")),
                    ("n", n.to_string()),
                    ("samples", samples.to_string()),
                ]),
                shortfall,
                tolerance,
            ));
        }

        for name in ["r4cp-charge-rule", "r4cp-translation-invariance"] {
            let tolerance = cfg.tolerance_for(name, 1e-15);
            let mut sampler = Sampler::new(stream_seed(cfg.seed, &label(name)));
            let modulus = sampler.modulus();
            let pp = draw_pair(&mut sampler, modulus, n);
            let qq = draw_pair(&mut sampler, modulus, n);
            let irf =
                compose_four_point(FourPointRoute::Star, (&pp.0, &pp.1), (&qq.0, &qq.1)).unwrap();
            let residual = if name == "r4cp-charge-rule" {
                charge_rule_residual(&irf).unwrap()
            } else {
                translation_invariance_residual(&irf)
            };
            out.push(CheckReport::new(
                name,
                kv(&[
                    ("n", n.to_string()),
                    ("route", "star".to_string()),
                    ("seed", cfg.seed.to_string()),
                ]),
                residual,
                tolerance,
            ));
        }
    }
    out
}

/// Recurrences, root-of-unity annihilation, base-to-one limits, and the
/// cross identity connecting the two q-factorial normalizations.
pub fn qseries_checks(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let rel = |a: Cplx, b: Cplx| (a - b).norm() / a.norm().max(b.norm()).max(1.0);

    {
        let name = "qseries-recurrence-std";
        let tolerance = cfg.tolerance_for(name, 1e-14);
        let samples = cfg.samples_for(name, 20);
        let mut sampler = Sampler::new(stream_seed(cfg.seed, name));
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let a = sampler.complex_box(-1.2, 1.2, -1.0, 1.0);
            let q = sampler.complex_box(-1.2, 1.2, -1.0, 1.0);
            for n in 0..=20u32 {
                let lhs = pochhammer_std(a, q, n + 1);
                let rhs = pochhammer_std(a, q, n) * (one() - a * q.powi(n as i32));
                worst = worst.max(rel(lhs, rhs));
            }
        }
        out.push(CheckReport::new(
            name,
            kv(&[
                ("orders", "0..=20".to_string()),
                ("samples", samples.to_string()),
                ("seed", cfg.seed.to_string()),
            ]),
            worst,
            tolerance,
        ));
    }

    {
        let name = "qseries-recurrence-bs";
        let tolerance = cfg.tolerance_for(name, 1e-14);
        let samples = cfg.samples_for(name, 20);
        let mut sampler = Sampler::new(stream_seed(cfg.seed, name));
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let a = sampler.complex_box(0.4, 1.4, -0.8, 0.8);
            let q1 = sampler.complex_box(0.4, 1.4, -0.8, 0.8);
            for n in 0..=20u32 {
                let lhs = pochhammer_bs(a, q1, n + 1).unwrap();
                let factor = q1.powi(n as i32) / a - a * q1.powi(-(n as i32));
                let rhs = pochhammer_bs(a, q1, n).unwrap() * factor;
                worst = worst.max(rel(lhs, rhs));
            }
        }
        out.push(CheckReport::new(
            name,
            kv(&[
                ("orders", "0..=20".to_string()),
                ("samples", samples.to_string()),
                ("seed", cfg.seed.to_string()),
            ]),
            worst,
            tolerance,
        ));
    }

    {
        let name = "qseries-annihilation";
        let tolerance = cfg.tolerance_for(name, 1e-12);
        let mut worst: f64 = 0.0;
        for n in 2..=12u32 {
            let q = RootOfUnitySpec::new(n, 1).unwrap().q();
            worst = worst.max(pochhammer_std(q, q, n).norm());
            worst = worst.max(q_integer_std(q, n).value.norm());
        }
        out.push(CheckReport::new(
            name,
            kv(&[("orders", "2..=12".to_string())]),
            worst,
            tolerance,
        ));
    }

    {
        let name = "qseries-limits";
        let tolerance = cfg.tolerance_for(name, 1e-6);
        let near = Cplx::new(1.0 + 1e-8, 0.0);
        let mut worst: f64 = 0.0;
        for n in 1..=10u32 {
            let target = Cplx::new(n as f64, 0.0);
            worst = worst.max((q_integer_std(near, n).value - target).norm());
            worst = worst.max((q_integer_bs(near, n).unwrap().value - target).norm());
            worst = worst.max((q_integer_std(one(), n).value - target).norm());
            worst = worst.max((q_integer_bs(one(), n).unwrap().value - target).norm());
        }
        out.push(CheckReport::new(
            name,
            kv(&[("epsilon", "1e-8".to_string()), ("orders", "1..=10".to_string())]),
            worst,
            tolerance,
        ));
    }

    {
        let name = "qseries-cross-identity";
        let tolerance = cfg.tolerance_for(name, 1e-12);
        let samples = cfg.samples_for(name, 20);
        let mut sampler = Sampler::new(stream_seed(cfg.seed, name));
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let a = sampler.complex_box(0.4, 1.4, -0.8, 0.8);
            let q1 = sampler.complex_box(0.4, 1.4, -0.8, 0.8);
            for n in 0..=8u32 {
                let lhs = pochhammer_bs(a, q1, n).unwrap();
                let prefactor =
                    a.powi(-(n as i32)) * q1.powi((n * (n.max(1) - 1) / 2) as i32);
                let rhs = prefactor * pochhammer_std(a * a, q1.powi(-2), n);
                worst = worst.max(rel(lhs, rhs));
            }
        }
        out.push(CheckReport::new(
            name,
            kv(&[
                ("orders", "0..=8".to_string()),
                ("samples", samples.to_string()),
                ("seed", cfg.seed.to_string()),
            ]),
            worst,
            tolerance,
        ));
    }

    out
}

/// Square-root-of-q bookkeeping: the distinguished root at odd orders has
/// N-th power +1 and squares back to q; both roots at even orders have
/// N-th power -1. Exponents cover j=1 and j=N-1 at every order.
pub fn parity_scan_check(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let name = "parity-scan";
    let tolerance = cfg.tolerance_for(name, 1e-12);
    let scan = |orders: &[u32], expect: Cplx, check_square: bool| -> f64 {
        let mut worst: f64 = 0.0;
        for &n in orders {
            let mut exponents = vec![1u32];
            if n > 2 {
                exponents.push(n - 1);
            }
            for j in exponents {
                let spec = RootOfUnitySpec::new(n, j).unwrap();
                let res = resolve_q1(&spec);
                worst = worst.max((res.q1_pow_n - expect).norm());
                for q1 in &res.q1_values {
                    worst = worst.max((q1.powi(n as i32) - expect).norm());
                    if check_square {
                        worst = worst.max((q1 * q1 - spec.q()).norm());
                    }
                }
                assert_eq!(
                    res.parity_verdict,
                    if n % 2 == 0 { Parity::Even } else { Parity::Odd }
                );
            }
        }
        worst
    };
    vec![
        CheckReport::new(
            name,
            kv(&[
                ("orders", "3,5,7,9,11".to_string()),
                ("parity", "odd".to_string()),
            ]),
            scan(&[3, 5, 7, 9, 11], one(), true),
            tolerance,
        ),
        CheckReport::new(
            name,
            kv(&[
                ("orders", "2,4,6,8,10,12".to_string()),
                ("parity", "even".to_string()),
            ]),
            scan(&[2, 4, 6, 8, 10, 12], -one(), false),
            tolerance,
        ),
    ]
}

/// Re-runs a fixed subset of checks and byte-compares the serialized
/// reports; any hidden nondeterminism shows up as residual 1.
pub fn determinism_repeat(cfg: &SuiteConfig) -> CheckReport {
    let name = "determinism-repeat";
    let tolerance = cfg.tolerance_for(name, 1e-15);
    let run = || {
        let mut sub = six_vertex_ybe(cfg);
        sub.extend(qseries_checks(cfg));
        sub.extend(parity_scan_check(cfg));
        serde_json::to_string(&sub).expect("reports always serialize")
    };
    let first = run();
    let second = run();
    let residual = if first == second { 0.0 } else { 1.0 };
    CheckReport::new(
        name,
        kv(&[(
            "subset",
            "six-vertex-ybe,qseries,parity-scan".to_string(),
        )]),
        residual,
        tolerance,
    )
}

/// Every suite check, sorted by (name, parameters).
pub fn all_checks(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let mut checks = Vec::new();
    checks.extend(six_vertex_ybe(cfg));
    checks.extend(gauge_bridges(cfg));
    checks.extend(slmn_ybe(cfg));
    checks.extend(slmn_add_mult_agreement(cfg));
    checks.extend(slmn_span(cfg));
    checks.extend(slmn_span_negative_control(cfg));
    checks.extend(slmn_root_matches_two_state(cfg));
    checks.extend(slmn_grading_consistency(cfg));
    checks.extend(cp_curve_membership(cfg));
    checks.extend(cp_self_point_weights(cfg));
    checks.extend(cp_closure(cfg));
    checks.extend(cp_star_triangle(cfg));
    checks.extend(four_point_checks(cfg));
    checks.extend(qseries_checks(cfg));
    checks.extend(parity_scan_check(cfg));
    checks.push(determinism_repeat(cfg));
    sort_reports(&mut checks);
    checks
}
