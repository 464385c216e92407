//! Seeded parameter sampling for checks and the command-line suite. All
//! draws go through one counter-based generator so a fixed seed replays the
//! exact same parameter stream on any platform.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chiral_potts::{sample_curve_point, CpPoint, CurveError, Modulus};
use crate::tensor::Cplx;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, n: u32) -> u32 {
        self.rng.gen_range(0..n)
    }

    /// A point on the unit circle.
    pub fn unit_phase(&mut self) -> Cplx {
        Cplx::from_polar(1.0, std::f64::consts::TAU * self.rng.gen::<f64>())
    }

    pub fn complex_box(&mut self, re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Cplx {
        let re = self.uniform(re_lo, re_hi);
        let im = self.uniform(im_lo, im_hi);
        Cplx::new(re, im)
    }

    /// A modulus pair with `k'` drawn from `[0.3, 0.9]`, safely away from
    /// both degenerations `k' = 0` and `k = 0`.
    pub fn modulus(&mut self) -> Modulus {
        let k_prime = self.uniform(0.3, 0.9);
        Modulus::from_k_prime(k_prime).expect("k' in (0, 1) always completes")
    }

    /// A curve point with unit-phase free coordinates and uniformly chosen
    /// root branches.
    pub fn curve_point(&mut self, modulus: Modulus, n: u32) -> Result<CpPoint, CurveError> {
        let a = self.unit_phase();
        let b = self.unit_phase();
        let root_c = self.index(n);
        let root_d = self.index(n);
        sample_curve_point(modulus, n, a, b, root_c, root_d)
    }

    /// Per-state gauge pairs clustered around 2 so no factor comes near
    /// zero.
    pub fn slmn_gauge(&mut self, d: usize) -> Vec<[Cplx; 2]> {
        (0..d)
            .map(|_| {
                [
                    self.complex_box(1.5, 2.5, -0.5, 0.5),
                    self.complex_box(1.5, 2.5, -0.5, 0.5),
                ]
            })
            .collect()
    }

    /// A reciprocal twist table (row-major `d x d`, unit diagonal) with the
    /// upper triangle clustered around 1.5.
    pub fn slmn_twists(&mut self, d: usize) -> Vec<Cplx> {
        let one = Cplx::new(1.0, 0.0);
        let mut g = vec![one; d * d];
        for a in 0..d {
            for b in (a + 1)..d {
                let v = self.complex_box(1.0, 2.0, -0.5, 0.5);
                g[a * d + b] = v;
                g[b * d + a] = one / v;
            }
        }
        g
    }
}
