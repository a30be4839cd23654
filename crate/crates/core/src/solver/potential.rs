//! Potential sources: built-in closed forms and tabulated samples.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch–Carlson
/// slopes), so coarse monotone data is never overshot.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// `xs` must be strictly increasing with at least two entries.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::InvalidProblem(
                "interpolation needs at least two samples".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProblem(
                "sample abscissae must be strictly increasing".into(),
            ));
        }
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = d[0];
        slopes[n - 1] = d[n - 2];
        for k in 1..n - 1 {
            if d[k - 1] * d[k] <= 0.0 {
                slopes[k] = 0.0;
            } else {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                slopes[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
            }
        }
        Ok(MonotoneCubic { xs, ys, slopes })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    /// Evaluates the interpolant; abscissae outside the range are clamped.
    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.range();
        let x = x.clamp(lo, hi);
        let k = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            p => (p - 1).min(self.xs.len() - 2),
        };
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[k] + h10 * h * self.slopes[k] + h01 * self.ys[k + 1] + h11 * h * self.slopes[k + 1]
    }
}

/// A potential read from `x,re[,im]` samples.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedPotential {
    label: String,
    re: MonotoneCubic,
    im: Option<MonotoneCubic>,
}

impl TabulatedPotential {
    /// Parses CSV text: one `x,re[,im]` record per line, no header. Blank
    /// lines are skipped.
    pub fn from_csv(label: impl Into<String>, text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut re = Vec::new();
        let mut im = Vec::new();
        let mut any_im = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::PotentialFile {
                line: lineno + 1,
                msg,
            };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if !(2..=3).contains(&fields.len()) {
                return Err(err(format!("expected 2 or 3 fields, found {}", fields.len())));
            }
            let mut nums = [0.0; 3];
            for (slot, s) in nums.iter_mut().zip(&fields) {
                *slot = s
                    .parse::<f64>()
                    .map_err(|e| err(format!("{s:?}: {e}")))?;
                if !slot.is_finite() {
                    return Err(err(format!("non-finite value {s:?}")));
                }
            }
            xs.push(nums[0]);
            re.push(nums[1]);
            im.push(nums[2]);
            any_im |= fields.len() == 3 && nums[2] != 0.0;
        }
        if xs.len() < 2 {
            return Err(Error::PotentialFile {
                line: 0,
                msg: "need at least two samples".into(),
            });
        }
        let im = if any_im {
            Some(MonotoneCubic::new(xs.clone(), im)?)
        } else {
            None
        };
        Ok(TabulatedPotential {
            label: label.into(),
            re: MonotoneCubic::new(xs, re)?,
            im,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::PotentialFile {
            line: 0,
            msg: format!("{}: {e}", path.display()),
        })?;
        Self::from_csv(path.display().to_string(), &text)
    }

    pub fn range(&self) -> (f64, f64) {
        self.re.range()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        Complex64::new(self.re.eval(x), self.im.as_ref().map_or(0.0, |i| i.eval(x)))
    }
}

/// Where `q` on the original interval comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum PotentialSource {
    Zero,
    Constant(f64),
    /// `q(x) = e^x`
    Exp,
    /// `q(x) = c0 + c1 x + c2 x^2 + ...`
    Polynomial(Vec<f64>),
    Tabulated(TabulatedPotential),
}

impl PotentialSource {
    pub fn eval(&self, x: f64) -> Complex64 {
        let re = match self {
            PotentialSource::Zero => 0.0,
            PotentialSource::Constant(c) => *c,
            PotentialSource::Exp => x.exp(),
            PotentialSource::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci),
            PotentialSource::Tabulated(t) => return t.eval(x),
        };
        Complex64::new(re, 0.0)
    }
}

impl fmt::Display for PotentialSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSource::Zero => write!(f, "zero"),
            PotentialSource::Constant(c) => write!(f, "const:{c}"),
            PotentialSource::Exp => write!(f, "exp"),
            PotentialSource::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            PotentialSource::Tabulated(t) => write!(f, "file:{}", t.label),
        }
    }
}

fn parse_number(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|e| Error::InvalidProblem(format!("bad number {s:?}: {e}")))?;
    if !v.is_finite() {
        return Err(Error::InvalidProblem(format!("non-finite number {s:?}")));
    }
    Ok(v)
}

/// Parses `zero`, `exp`, `const:C`, `poly:c0,c1,...` and `file:PATH` (the
/// file is read immediately).
impl FromStr for PotentialSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        match (kind, arg) {
            ("zero", None) => Ok(PotentialSource::Zero),
            ("exp", None) => Ok(PotentialSource::Exp),
            ("const", Some(a)) => Ok(PotentialSource::Constant(parse_number(a)?)),
            ("poly", Some(a)) => {
                let c = a.split(',').map(parse_number).collect::<Result<Vec<_>>>()?;
                Ok(PotentialSource::Polynomial(c))
            }
            ("file", Some(path)) if !path.is_empty() => Ok(PotentialSource::Tabulated(
                TabulatedPotential::from_path(Path::new(path))?,
            )),
            _ => Err(Error::InvalidProblem(format!(
                "unknown potential {s:?}; expected zero, exp, const:C, poly:c0,c1,... or file:PATH"
            ))),
        }
    }
}
