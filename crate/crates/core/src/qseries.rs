//! q-deformed factorials and integers in two normalizations: the standard
//! one built from factors `1 - a q^(k-1)`, and a balanced one built from
//! `a^-1 q1^(k-1) - a q1^(1-k)` whose natural base variable squares to the
//! standard one.

use num_complex::Complex64;
use thiserror::Error;

use crate::tensor::{Cplx, C_ONE};

/// How far a base may sit from a degenerate point (base -> 1, or -> -1 for
/// the balanced integer) before the closed form is replaced by its limit.
pub const DEGENERATE_BASE_GUARD: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum QSeriesError {
    #[error("argument a must be nonzero")]
    ZeroArgument,
    #[error("base must be nonzero")]
    ZeroBase,
}

/// Validated parameter pack: `base` is the deformation variable, `argument`
/// the series argument, `order` the number of factors.
#[derive(Clone, Copy, Debug)]
pub struct QSeriesParams {
    pub base: Cplx,
    pub argument: Cplx,
    pub order: u32,
}

impl QSeriesParams {
    pub fn new(base: Cplx, argument: Cplx, order: u32) -> Result<Self, QSeriesError> {
        if base == Complex64::new(0.0, 0.0) {
            return Err(QSeriesError::ZeroBase);
        }
        Ok(QSeriesParams {
            base,
            argument,
            order,
        })
    }
}

/// Standard q-shifted factorial: `prod_{k=1..n} (1 - a q^(k-1))`.
/// Empty product (n = 0) is 1.
pub fn pochhammer_std(a: Cplx, q: Cplx, n: u32) -> Cplx {
    let mut acc = C_ONE;
    let mut qpow = C_ONE;
    for _ in 0..n {
        acc *= C_ONE - a * qpow;
        qpow *= q;
    }
    acc
}

/// Balanced q-shifted factorial: `prod_{k=1..n} (a^-1 q1^(k-1) - a q1^(1-k))`.
/// Empty product (n = 0) is 1. Rejects `a = 0` and `q1 = 0`, which sit on
/// poles of the factors.
pub fn pochhammer_bs(a: Cplx, q1: Cplx, n: u32) -> Result<Cplx, QSeriesError> {
    let zero = Complex64::new(0.0, 0.0);
    if a == zero {
        return Err(QSeriesError::ZeroArgument);
    }
    if q1 == zero {
        return Err(QSeriesError::ZeroBase);
    }
    let ainv = C_ONE / a;
    let q1inv = C_ONE / q1;
    let mut acc = C_ONE;
    let mut fwd = C_ONE; // q1^(k-1)
    let mut bwd = C_ONE; // q1^(1-k)
    for _ in 0..n {
        acc *= ainv * fwd - a * bwd;
        fwd *= q1;
        bwd *= q1inv;
    }
    Ok(acc)
}

/// q-integer with a degenerate-limit flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QInteger {
    pub value: Cplx,
    /// True when the base sat within [`DEGENERATE_BASE_GUARD`] of a zero of
    /// the denominator and the limit value was substituted.
    pub at_limit: bool,
}

/// Standard q-integer `(1 - q^n) / (1 - q)`, with limit `n` at `q = 1`.
pub fn q_integer_std(q: Cplx, n: u32) -> QInteger {
    if (q - C_ONE).norm() < DEGENERATE_BASE_GUARD {
        return QInteger {
            value: Cplx::new(n as f64, 0.0),
            at_limit: true,
        };
    }
    QInteger {
        value: (C_ONE - q.powi(n as i32)) / (C_ONE - q),
        at_limit: false,
    }
}

/// Balanced q-integer `(q1^n - q1^-n) / (q1 - q1^-1)`, with limit
/// `n * q1^(n-1)` at `q1 = 1` or `q1 = -1`. Rejects `q1 = 0`.
pub fn q_integer_bs(q1: Cplx, n: u32) -> Result<QInteger, QSeriesError> {
    if q1 == Complex64::new(0.0, 0.0) {
        return Err(QSeriesError::ZeroBase);
    }
    let near_one = (q1 - C_ONE).norm() < DEGENERATE_BASE_GUARD;
    let near_minus_one = (q1 + C_ONE).norm() < DEGENERATE_BASE_GUARD;
    if near_one || near_minus_one {
        let base: f64 = if near_one { 1.0 } else { -1.0 };
        let sign = if n == 0 {
            0.0
        } else {
            base.powi(n as i32 - 1)
        };
        return Ok(QInteger {
            value: Cplx::new(n as f64 * sign, 0.0),
            at_limit: true,
        });
    }
    let q1inv = C_ONE / q1;
    Ok(QInteger {
        value: (q1.powi(n as i32) - q1inv.powi(n as i32)) / (q1 - q1inv),
        at_limit: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Cplx {
        Cplx::new(re, im)
    }

    fn close(a: Cplx, b: Cplx, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn frozen_values() {
        // independently computed anchors
        assert!(close(
            pochhammer_std(c(0.5, 0.25), c(0.3, -0.6), 4),
            c(0.5096151757812499, 0.061732343749999995),
            1e-14
        ));
        assert!(close(
            pochhammer_bs(c(1.1, -0.3), c(0.8, 0.45), 5).unwrap(),
            c(-1.7292193456190201, 6.262326631552221),
            1e-13
        ));
        assert!(close(pochhammer_bs(c(2.0, 0.0), c(3.0, 0.0), 2).unwrap(), c(-1.25, 0.0), 1e-14));
        assert!(close(q_integer_std(c(2.0, 0.0), 3).value, c(7.0, 0.0), 1e-14));
        assert!(close(
            q_integer_bs(c(3.0, 0.0), 2).unwrap().value,
            c(10.0 / 3.0, 0.0),
            1e-14
        ));
    }

    #[test]
    fn order_zero_and_one_anchors() {
        let a = c(0.7, 0.4);
        let q = c(1.3, -0.2);
        assert_eq!(pochhammer_std(a, q, 0), C_ONE);
        assert_eq!(pochhammer_bs(a, q, 0).unwrap(), C_ONE);
        assert!(close(pochhammer_std(a, q, 1), C_ONE - a, 1e-15));
        assert!(close(pochhammer_bs(a, q, 1).unwrap(), C_ONE / a - a, 1e-15));
        assert_eq!(q_integer_std(q, 0).value, Cplx::new(0.0, 0.0));
        assert!(close(q_integer_std(q, 1).value, C_ONE, 1e-15));
        assert!(close(q_integer_bs(q, 1).unwrap().value, C_ONE, 1e-15));
    }

    #[test]
    fn zero_inputs_are_rejected() {
        assert!(matches!(
            pochhammer_bs(c(0.0, 0.0), c(2.0, 0.0), 3),
            Err(QSeriesError::ZeroArgument)
        ));
        assert!(matches!(
            pochhammer_bs(c(2.0, 0.0), c(0.0, 0.0), 3),
            Err(QSeriesError::ZeroBase)
        ));
        assert!(matches!(q_integer_bs(c(0.0, 0.0), 3), Err(QSeriesError::ZeroBase)));
        assert!(QSeriesParams::new(c(0.0, 0.0), c(1.0, 0.0), 2).is_err());
        assert!(QSeriesParams::new(c(1.0, 0.0), c(0.0, 0.0), 2).is_ok());
    }

    // the balanced factorial reduces to the standard one with squared
    // argument and inverse-squared base
    #[test]
    fn balanced_to_standard_identity() {
        let samples = [
            (c(1.5, 0.4), c(1.2, -0.3)),
            (c(0.8, -0.9), c(0.7, 0.6)),
            (c(2.1, 0.1), c(1.05, 0.02)),
            (c(-1.2, 0.5), c(0.4, -1.1)),
        ];
        for (a, q1) in samples {
            for n in 0..8u32 {
                let lhs = pochhammer_bs(a, q1, n).unwrap();
                let prefactor = a.powi(-(n as i32)) * q1.powi((n * n.saturating_sub(1)) as i32 / 2);
                let rhs = prefactor * pochhammer_std(a * a, (C_ONE / q1) * (C_ONE / q1), n);
                assert!(
                    close(lhs, rhs, 1e-11),
                    "identity failed at a={a}, q1={q1}, n={n}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn degenerate_guard_flags_and_limits() {
        let near = c(1.0 + 1e-14, 0.0);
        let r = q_integer_std(near, 5);
        assert!(r.at_limit);
        assert_eq!(r.value, c(5.0, 0.0));

        let r = q_integer_bs(c(-1.0, 1e-14), 4).unwrap();
        assert!(r.at_limit);
        assert_eq!(r.value, c(-4.0, 0.0)); // 4 * (-1)^3

        let r = q_integer_bs(c(-1.0 + 1e-14, 0.0), 3).unwrap();
        assert!(r.at_limit);
        assert_eq!(r.value, c(3.0, 0.0)); // 3 * (-1)^2

        // just outside the guard the closed form still applies and stays
        // consistent with the limit to ~1e-6
        let q = c(1.0 + 1e-8, 0.0);
        let r = q_integer_std(q, 7);
        assert!(!r.at_limit);
        assert!((r.value - c(7.0, 0.0)).norm() < 1e-6);

        let r = q_integer_bs(c(1.0 + 1e-8, 0.0), 7).unwrap();
        assert!(!r.at_limit);
        assert!((r.value - c(7.0, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn annihilation_at_roots_of_unity() {
        // pochhammer_std(q, q, N) = prod_{k=1..N} (1 - q^k) contains the
        // factor 1 - q^N, which vanishes at any N-th root of unity
        for n in 2..=12u32 {
            let q = Cplx::from_polar(1.0, std::f64::consts::TAU / n as f64);
            let v = pochhammer_std(q, q, n);
            assert!(v.norm() < 1e-12, "N={n}: {v}");
        }
    }

    proptest! {
        // defining recurrences, checked multiplicatively
        #[test]
        fn std_recurrence(
            re in -1.5..1.5f64, im in -1.5..1.5f64,
            qre in -1.2..1.2f64, qim in -1.2..1.2f64,
            n in 0u32..20,
        ) {
            let a = c(re, im);
            let q = c(qre, qim);
            let lhs = pochhammer_std(a, q, n + 1);
            let rhs = pochhammer_std(a, q, n) * (C_ONE - a * q.powi(n as i32));
            prop_assert!((lhs - rhs).norm() <= 1e-14 * rhs.norm().max(1.0));
        }

        #[test]
        fn bs_recurrence(
            re in 0.3..1.5f64, im in -1.0..1.0f64,
            qre in 0.3..1.3f64, qim in -1.0..1.0f64,
            n in 0u32..20,
        ) {
            let a = c(re, im);
            let q1 = c(qre, qim);
            let lhs = pochhammer_bs(a, q1, n + 1).unwrap();
            let factor = q1.powi(n as i32) / a - a * q1.powi(-(n as i32));
            let rhs = pochhammer_bs(a, q1, n).unwrap() * factor;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }

        // the balanced integer is symmetric under q1 -> 1/q1
        #[test]
        fn bs_integer_base_inversion(
            qre in 0.3..1.4f64, qim in -1.0..1.0f64,
            n in 0u32..16,
        ) {
            let q1 = c(qre, qim);
            let a = q_integer_bs(q1, n).unwrap().value;
            let b = q_integer_bs(C_ONE / q1, n).unwrap().value;
            prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0));
        }
    }
}
