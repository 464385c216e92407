//! Fixture builders shared by the kernel benchmarks. Each returns a fully
//! constructed input so the timed closures measure contraction work alone.

use ybkit_core::chiral_potts::{CpPoint, FourPointRoute, IrfWeight, compose_four_point};
use ybkit_core::sample::Sampler;
use ybkit_core::six_vertex::{SixVertexGauge, SixVertexParams, build_six_vertex};
use ybkit_core::slmn::{SlmnParams, build_slmn_multiplicative};
use ybkit_core::{Cplx, RMatrix};

/// A compatible two-state triple at the standard rational anchor.
pub fn six_vertex_triple() -> (RMatrix, RMatrix, RMatrix) {
    let q = Cplx::from_polar(1.0, std::f64::consts::TAU / 5.0);
    let x = Cplx::new(2.0, 0.0);
    let y = Cplx::new(3.0, 0.0);
    let build = |a: Cplx, b: Cplx| {
        let params = SixVertexParams::new(SixVertexGauge::Bbp, q, a, b).unwrap();
        build_six_vertex(&params).unwrap()
    };
    (build(x, y), build(x, y * y), build(y, y * y))
}

/// A graded triple with local dimension `m + n`, sharing one anisotropy.
pub fn slmn_triple(m: usize, n: usize) -> (RMatrix, RMatrix, RMatrix) {
    let params = SlmnParams::new(m, n, Cplx::new(0.35, 0.1)).unwrap();
    let yp = Cplx::new(1.3, 0.2);
    let yq = Cplx::new(0.8, -0.4);
    let yr = Cplx::new(1.9, 0.6);
    let build = |x: Cplx, y: Cplx| build_slmn_multiplicative(&params, x, y).unwrap();
    (build(yq, yp), build(yr, yp), build(yr, yq))
}

/// Deterministically sampled curve points, all on one modulus.
pub fn curve_points(n: u32, count: usize) -> Vec<CpPoint> {
    let mut sampler = Sampler::new(11);
    let modulus = sampler.modulus();
    (0..count)
        .map(|_| sampler.curve_point(modulus, n).unwrap())
        .collect()
}

/// A composed four-weight face ready for the vertex maps.
pub fn star_face(n: u32) -> IrfWeight {
    let pts = curve_points(n, 4);
    compose_four_point(FourPointRoute::Star, (&pts[0], &pts[1]), (&pts[2], &pts[3])).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ybkit_core::chiral_potts::{cp_weight_tables, star_triangle_residual};
    use ybkit_core::ybe_residual;

    #[test]
    fn fixtures_are_valid_inputs() {
        let (ra, rb, rc) = six_vertex_triple();
        assert!(ybe_residual(&ra, &rb, &rc).unwrap() < 1e-12);

        let (ra, rb, rc) = slmn_triple(2, 1);
        assert_eq!(ra.dims(), (3, 3));
        assert!(ybe_residual(&ra, &rb, &rc).unwrap() < 1e-12);
    }

    #[test]
    fn curve_fixtures_are_on_curve() {
        let pts = curve_points(5, 3);
        for p in &pts {
            assert!(p.curve_residual() < 1e-12);
        }
        assert!(cp_weight_tables(&pts[0], &pts[1]).is_ok());
        assert!(star_triangle_residual(&pts[0], &pts[1], &pts[2]).unwrap().residual < 1e-9);
        assert_eq!(star_face(3).n(), 3);
    }
}
