//! Sign-change scanning with bisection and secant polishing.

use num_complex::Complex64;

use crate::error::Result;

/// A refined zero of the real part of a characteristic function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub x: f64,
    /// `|F(x)|` (complex modulus) at the polished root.
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanOutcome {
    pub roots: Vec<Root>,
    /// Largest `|Im F| / (1 + |F|)` over the scan samples.
    pub max_im_ratio: f64,
    /// Scan abscissa at which evaluation first failed, if any; the scan
    /// stops there and keeps the roots found below it.
    pub stopped_at: Option<f64>,
}

const BISECTION_CAP: usize = 200;
const SECANT_STEPS: usize = 3;

/// Scans `start, start + step, ..` up to `stop`, brackets every sign
/// change of `Re F`, bisects each bracket to width `1e-12 (1 + |x|)` and
/// polishes with three secant steps kept inside the bracket.
///
/// Scan samples where `F` is exactly zero are reported as roots. An error
/// from `F` at a scan sample ends the scan (see [`ScanOutcome::stopped_at`]);
/// an error inside a bracket is returned.
pub fn scan_roots<F>(f: F, start: f64, stop: f64, step: f64) -> Result<ScanOutcome>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut out = ScanOutcome::default();
    let count = ((stop - start) / step).floor() as usize;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=count {
        let x = start + i as f64 * step;
        let v = match f(x) {
            Ok(v) => v,
            Err(_) => {
                out.stopped_at = Some(x);
                break;
            }
        };
        out.max_im_ratio = out.max_im_ratio.max(v.im.abs() / (1.0 + v.norm()));
        let fx = v.re;
        if fx == 0.0 {
            out.roots.push(Root {
                x,
                residual: v.norm(),
            });
            prev = None;
            continue;
        }
        if let Some((xp, fp)) = prev {
            if fp.signum() != fx.signum() {
                out.roots.push(refine(&f, xp, fp, x, fx)?);
            }
        }
        prev = Some((x, fx));
    }
    Ok(out)
}

fn refine<F>(f: &F, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> Result<Root>
where
    F: Fn(f64) -> Result<Complex64>,
{
    for _ in 0..BISECTION_CAP {
        if (b - a).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m)?.re;
        if fm == 0.0 {
            return Ok(Root {
                x: m,
                residual: f(m)?.norm(),
            });
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    let mut best = if fa.abs() < fb.abs() { a } else { b };
    for _ in 0..SECANT_STEPS {
        if fb == fa {
            break;
        }
        let s = b - fb * (b - a) / (fb - fa);
        if !(s > a.min(b) && s < a.max(b)) {
            break;
        }
        let fs = f(s)?.re;
        best = s;
        if fs == 0.0 {
            break;
        }
        if fs.signum() == fa.signum() {
            a = s;
            fa = fs;
        } else {
            b = s;
            fb = fs;
        }
    }
    Ok(Root {
        x: best,
        residual: f(best)?.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use std::f64::consts::PI;

    fn real(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Result<Complex64> {
        move |x| Ok(Complex64::new(f(x), 0.0))
    }

    #[test]
    fn finds_sine_zeros() {
        let out = scan_roots(real(f64::sin), 0.125, 16.0, 0.25).unwrap();
        let xs: Vec<f64> = out.roots.iter().map(|r| r.x).collect();
        assert_eq!(xs.len(), 5);
        for (k, x) in xs.iter().enumerate() {
            assert!((x - (k + 1) as f64 * PI).abs() < 1e-14, "{x}");
        }
    }

    #[test]
    fn exact_zero_sample() {
        let out = scan_roots(real(|x| x - 1.0), 0.0, 2.0, 0.5).unwrap();
        assert_eq!(out.roots.len(), 1);
        assert_eq!(out.roots[0].x, 1.0);
    }

    #[test]
    fn tracks_imaginary_ratio() {
        let f = |x: f64| Ok(Complex64::new(x.sin(), 1e-6));
        let out = scan_roots(f, 0.5, 4.0, 0.5).unwrap();
        assert!(out.max_im_ratio > 4e-7 && out.max_im_ratio <= 1e-6);
    }

    #[test]
    fn stops_on_failed_sample() {
        let f = |x: f64| {
            if x > 7.0 {
                Err(Error::SeriesTruncation { lambda: x, k_max: 1 })
            } else {
                Ok(Complex64::new(x.sin(), 0.0))
            }
        };
        let out = scan_roots(f, 0.25, 20.0, 0.25).unwrap();
        assert_eq!(out.roots.len(), 2);
        assert_eq!(out.stopped_at, Some(7.25));
    }
}
