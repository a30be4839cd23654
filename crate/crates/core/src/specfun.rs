//! Bessel functions of the first kind of integer order.
//!
//! `|x| <= 12` uses the ascending power series; larger arguments use
//! Miller's downward recurrence normalized by `J0 + 2 Σ J2k = 1`.

use crate::dd::Dd;
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 200;
pub const MAX_ARGUMENT: f64 = 1e4;

/// Below this magnitude the ascending series is used.
pub const SERIES_SWITCH: f64 = 12.0;

fn check_range(order: usize, x: f64) -> Result<()> {
    if order > MAX_ORDER || !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(Error::BesselRange { order, x });
    }
    Ok(())
}

fn reflect(n: usize, x: f64, v: f64) -> f64 {
    if x < 0.0 && n % 2 == 1 {
        -v
    } else {
        v
    }
}

// Summed in double-double: near |x| = 12 the terms reach ~4e3 while the
// result is O(1e-2), which costs f64 about four digits.
fn ascending_series(n: usize, x: f64) -> f64 {
    let half = Dd::from(0.5 * x);
    let mut term = Dd::ONE;
    for i in 1..=n {
        term = term * half / Dd::from(i as f64);
    }
    if term.hi == 0.0 {
        return 0.0;
    }
    let mq = -(half * half);
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term = term * mq / Dd::from(k * (n as f64 + k));
        sum += term;
        if term.hi.abs() <= 1e-20 * sum.hi.abs() {
            break;
        }
        k += 1.0;
    }
    sum.to_f64()
}

fn miller_start(n_max: usize, x: f64) -> usize {
    let top = (n_max as f64).max(x);
    let m = (top + 30.0 + 15.0 * x.cbrt()).ceil() as usize;
    m + (m % 2)
}

/// `J_0(x) .. J_{n_max}(x)` for `x > SERIES_SWITCH` by one downward pass.
fn miller_sequence(n_max: usize, x: f64) -> Vec<f64> {
    let start = miller_start(n_max, x);
    let mut out = vec![0.0; n_max + 1];
    let two_over_x = 2.0 / x;
    let (mut above, mut cur) = (0.0f64, 1e-30f64);
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let below = k as f64 * two_over_x * cur - above;
        above = cur;
        cur = below;
        // `cur` now holds the unnormalized J_{k-1}
        let order = k - 1;
        if order <= n_max {
            out[order] = cur;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            above *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// `J_n(x)`.
pub fn bessel_j(n: usize, x: f64) -> Result<f64> {
    check_range(n, x)?;
    let ax = x.abs();
    let v = if ax == 0.0 {
        if n == 0 {
            1.0
        } else {
            0.0
        }
    } else if ax <= SERIES_SWITCH {
        ascending_series(n, ax)
    } else {
        miller_sequence(n, ax)[n]
    };
    Ok(reflect(n, x, v))
}

/// `[J_0(x), ..., J_{n_max}(x)]`.
pub fn bessel_j_sequence(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_range(n_max, x)?;
    let ax = x.abs();
    let mut out = if ax == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        v
    } else if ax <= SERIES_SWITCH {
        (0..=n_max).map(|n| ascending_series(n, ax)).collect()
    } else {
        miller_sequence(n_max, ax)
    };
    for (n, v) in out.iter_mut().enumerate() {
        *v = reflect(n, x, *v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Trapezoid on the periodic integral representation
    // J_n(x) = (1/π) ∫_0^π cos(nτ - x sin τ) dτ; geometrically convergent.
    fn integral_oracle(n: usize, x: f64) -> f64 {
        let m = 1200;
        let mut s = 0.0;
        for j in 0..=m {
            let t = PI * j as f64 / m as f64;
            let w = if j == 0 || j == m { 0.5 } else { 1.0 };
            s += w * (n as f64 * t - x * t.sin()).cos();
        }
        s / m as f64
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        for n in 1..10 {
            assert_eq!(bessel_j(n, 0.0).unwrap(), 0.0);
        }
        assert_eq!(bessel_j_sequence(5, 0.0).unwrap(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn first_zero_of_j0() {
        assert!(bessel_j(0, 2.404825557695773).unwrap().abs() < 1e-12);
    }

    #[test]
    fn j1_at_one() {
        assert!((bessel_j(1, 1.0).unwrap() - 0.4400505857449335).abs() < 1e-12);
    }

    #[test]
    fn out_of_range() {
        assert!(bessel_j(201, 1.0).is_err());
        assert!(bessel_j(3, 2e4).is_err());
        assert!(bessel_j(3, f64::NAN).is_err());
        assert!(bessel_j_sequence(250, 1.0).is_err());
    }

    #[test]
    fn odd_orders_are_odd() {
        for n in 0..6 {
            for &x in &[0.7, 13.5, 44.0] {
                let s = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(bessel_j(n, -x).unwrap(), s * bessel_j(n, x).unwrap());
            }
        }
    }

    #[test]
    fn agrees_with_integral_representation() {
        let xs = [0.3, 1.0, 5.0, 11.9, 12.1, 17.3, 33.0, 60.0, 99.5, 150.0, 200.0];
        for &x in &xs {
            let seq = bessel_j_sequence(80, x).unwrap();
            for n in 0..=80 {
                let want = integral_oracle(n, x);
                let got = seq[n];
                assert!((got - want).abs() < 1e-13, "n={n} x={x}: {got} vs {want}");
                if want.abs() > 1e-2 {
                    assert!(((got - want) / want).abs() < 1e-12, "rel n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn tiny_values_keep_relative_accuracy() {
        // deep in the n > x region the leading series term dominates
        for &(n, x) in &[(40usize, 13.0f64), (80, 30.0), (60, 20.0), (120, 50.0)] {
            let got = bessel_j(n, x).unwrap();
            let mut t = 1.0;
            for i in 1..=n {
                t *= 0.5 * x / i as f64;
            }
            let mut sum = t;
            for k in 1..200 {
                t *= -(0.25 * x * x) / (k as f64 * (n + k) as f64);
                sum += t;
            }
            assert!(((got - sum) / sum).abs() < 1e-12, "n={n} x={x}");
        }
    }

    #[test]
    fn sequence_matches_single_evaluation() {
        for &x in &[0.5, 3.0, 12.0, 12.5, 25.0, 80.0] {
            let seq = bessel_j_sequence(60, x).unwrap();
            for n in 0..=60 {
                let single = bessel_j(n, x).unwrap();
                assert!((seq[n] - single).abs() <= 1e-13 * single.abs().max(1e-3), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn three_term_recurrence_at_five() {
        let x = 5.0;
        let j = bessel_j_sequence(10, x).unwrap();
        for n in 1..10 {
            let lhs = j[n - 1] + j[n + 1];
            let rhs = 2.0 * n as f64 / x * j[n];
            assert!((lhs - rhs).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn recurrence_residual_is_small_everywhere() {
        for &x in &[1.0, 7.0, 20.0, 60.0, 100.0] {
            let j = bessel_j_sequence(100, x).unwrap();
            let scale = j.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for n in 1..100 {
                let r = j[n - 1] + j[n + 1] - 2.0 * n as f64 / x * j[n];
                assert!(r.abs() < 1e-12 * scale, "n={n} x={x} r={r}");
            }
        }
    }

    #[test]
    fn normalization_identity() {
        for &x in &[1.0, 5.0, 20.0, 60.0] {
            let j = bessel_j_sequence(200, x).unwrap();
            let mut s = j[0];
            for k in 1..=100 {
                s += 2.0 * j[2 * k];
                if j[2 * k].abs() < 1e-18 {
                    break;
                }
            }
            assert!((s - 1.0).abs() < 1e-12, "x={x}: {s}");
        }
    }
}
