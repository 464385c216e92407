//! Cross-checks the looped vertex-relation residual against an independent
//! dense-matrix evaluation: embed the three operators into the full triple
//! product space, multiply them out in both orders, and compare max-abs
//! data. The two paths must agree on passing cases, on structureless random
//! input, and on deliberately corrupted input.

use num_complex::Complex64;
use ybkit_core::six_vertex::{build_six_vertex, SixVertexGauge, SixVertexParams};
use ybkit_core::{ybe_residual_parts, Cplx, RMatrix, SupportRule};

fn dense_parts(ra: &RMatrix, rb: &RMatrix, rc: &RMatrix) -> (f64, f64) {
    let (d1, d2) = ra.dims();
    let d3 = rb.dim_right();
    let dim = d1 * d2 * d3;
    let idx = |a: usize, b: usize, c: usize| (a * d2 + b) * d3 + c;

    let mut m_a = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut m_b = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut m_c = vec![Complex64::new(0.0, 0.0); dim * dim];
    for a_in in 0..d1 {
        for b_in in 0..d2 {
            for c_in in 0..d3 {
                let col = idx(a_in, b_in, c_in);
                for a_out in 0..d1 {
                    for b_out in 0..d2 {
                        m_a[idx(a_out, b_out, c_in) * dim + col] =
                            ra.get(a_in, b_in, a_out, b_out);
                    }
                    for c_out in 0..d3 {
                        m_b[idx(a_out, b_in, c_out) * dim + col] =
                            rb.get(a_in, c_in, a_out, c_out);
                    }
                }
                for b_out in 0..d2 {
                    for c_out in 0..d3 {
                        m_c[idx(a_in, b_out, c_out) * dim + col] =
                            rc.get(b_in, c_in, b_out, c_out);
                    }
                }
            }
        }
    }

    let mul = |x: &[Complex64], y: &[Complex64]| {
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        for row in 0..dim {
            for mid in 0..dim {
                let xv = x[row * dim + mid];
                if xv == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for col in 0..dim {
                    out[row * dim + col] += xv * y[mid * dim + col];
                }
            }
        }
        out
    };

    let lhs = mul(&mul(&m_a, &m_b), &m_c);
    let rhs = mul(&mul(&m_c, &m_b), &m_a);
    let mut raw: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (l, r) in lhs.iter().zip(&rhs) {
        raw = raw.max((l - r).norm());
        scale = scale.max(l.norm());
    }
    (raw, scale)
}

fn assert_paths_agree(ra: &RMatrix, rb: &RMatrix, rc: &RMatrix) -> f64 {
    let parts = ybe_residual_parts(ra, rb, rc).unwrap();
    let (dense_raw, dense_scale) = dense_parts(ra, rb, rc);
    let tol = 1e-12 * dense_scale.max(1.0);
    assert!(
        (parts.raw - dense_raw).abs() <= tol,
        "raw mismatch: loops {} vs dense {dense_raw}",
        parts.raw
    );
    assert!(
        (parts.lhs_scale - dense_scale).abs() <= tol,
        "scale mismatch: loops {} vs dense {dense_scale}",
        parts.lhs_scale
    );
    parts.relative()
}

fn six_vertex(x: f64, y: f64) -> RMatrix {
    let q = Cplx::from_polar(1.0, std::f64::consts::TAU / 5.0);
    build_six_vertex(
        &SixVertexParams::new(SixVertexGauge::Bbp, q, Cplx::new(x, 0.0), Cplx::new(y, 0.0))
            .unwrap(),
    )
    .unwrap()
}

#[test]
fn agrees_on_a_passing_case() {
    let residual = assert_paths_agree(&six_vertex(2.0, 3.0), &six_vertex(2.0, 5.0), &six_vertex(3.0, 5.0));
    assert!(residual < 1e-14, "residual {residual}");
}

#[test]
fn agrees_on_a_corrupted_case() {
    let ra = six_vertex(2.0, 3.0);
    let mut entries = ra.entries().to_vec();
    entries[0] += Cplx::new(0.1, 0.0);
    let ra_bad = RMatrix::new(2, 2, entries, SupportRule::Multiset).unwrap();
    let residual = assert_paths_agree(&ra_bad, &six_vertex(2.0, 5.0), &six_vertex(3.0, 5.0));
    assert!(residual > 1e-3, "corruption must be visible, got {residual}");
}

// structureless input: the relation fails by a wide margin, but the two
// evaluation paths must still report identical raw data
#[test]
fn agrees_on_random_mixed_dimension_input() {
    let stir = |seed: u64, len: usize| -> Vec<Complex64> {
        // simple splitmix stream; the values only need to be reproducible
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            (z ^ (z >> 31)) as f64 / u64::MAX as f64 - 0.5
        };
        (0..len).map(|_| Complex64::new(next(), next())).collect()
    };
    let (d1, d2, d3) = (2usize, 3usize, 2usize);
    let ra = RMatrix::new(d1, d2, stir(1, (d1 * d2).pow(2)), SupportRule::Unrestricted).unwrap();
    let rb = RMatrix::new(d1, d3, stir(2, (d1 * d3).pow(2)), SupportRule::Unrestricted).unwrap();
    let rc = RMatrix::new(d2, d3, stir(3, (d2 * d3).pow(2)), SupportRule::Unrestricted).unwrap();
    let residual = assert_paths_agree(&ra, &rb, &rc);
    assert!(residual > 1e-2, "random input should fail loudly, got {residual}");
}
