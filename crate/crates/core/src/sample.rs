//! Evaluation of the family on rectangular grids, with CSV emit/parse.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::{ShenContext, DEFAULT_STEP};

/// Header line of the CSV format.
pub const CSV_HEADER: &str = "re_z,im_z,re_f,im_f,is_pole";

/// Hard cap on the number of points along one axis.
pub const MAX_AXIS_POINTS: usize = 10_000_000;

/// Formats a float with the shortest representation that parses back to the
/// same value; scientific notation outside `[1e-5, 1e16)`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// One axis `start:step:stop`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn single(value: f64) -> Self {
        AxisSpec {
            start: value,
            step: 0.0,
            count: 1,
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.value(i))
    }
}

impl FromStr for AxisSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let bad = |reason| Error::GridSpec {
            spec: spec.to_string(),
            reason,
        };
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s.trim().parse().map_err(|_| bad("not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad("not finite"))
            }
        };
        let parts: Vec<&str> = spec.trim().split(':').collect();
        match parts.as_slice() {
            [""] => Err(bad("empty")),
            [v] => Ok(AxisSpec::single(parse(v)?)),
            [start, step, stop] => {
                let (start, step, stop) = (parse(start)?, parse(step)?, parse(stop)?);
                if !(step > 0.0) {
                    return Err(bad("step must be positive"));
                }
                if stop < start {
                    return Err(bad("stop below start"));
                }
                // tolerate roundoff in (stop - start) / step
                let n = ((stop - start) / step + 1e-9).floor();
                if n >= MAX_AXIS_POINTS as f64 {
                    return Err(bad("too many points"));
                }
                Ok(AxisSpec {
                    start,
                    step,
                    count: n as usize + 1,
                })
            }
            _ => Err(bad("expected start:step:stop or a single value")),
        }
    }
}

impl fmt::Display for AxisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count == 1 {
            f.write_str(&format_number(self.start))
        } else {
            write!(
                f,
                "{}:{}:{}",
                format_number(self.start),
                format_number(self.step),
                format_number(self.value(self.count - 1))
            )
        }
    }
}

/// Functions that can be sampled over the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleFunction {
    D,
    S2,
    C2,
    Sc,
    Wp,
}

impl SampleFunction {
    pub const ALL: [SampleFunction; 5] = [
        SampleFunction::D,
        SampleFunction::S2,
        SampleFunction::C2,
        SampleFunction::Sc,
        SampleFunction::Wp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SampleFunction::D => "d",
            SampleFunction::S2 => "s2",
            SampleFunction::C2 => "c2",
            SampleFunction::Sc => "sc",
            SampleFunction::Wp => "wp",
        }
    }

    /// `None` marks a pole (or a point whose stencil touches one).
    pub fn eval(self, ctx: &ShenContext, z: Complex64) -> Result<Option<Complex64>> {
        let value = match self {
            SampleFunction::D => ctx.d(z),
            SampleFunction::S2 => ctx.s_squared(z),
            SampleFunction::C2 => ctx.c_squared(z),
            SampleFunction::Sc => ctx.sc_product(z, DEFAULT_STEP),
            SampleFunction::Wp => ctx.weierstrass().wp(z),
        };
        match value {
            Ok(v) => Ok(Some(v)),
            Err(Error::Pole { .. }) | Err(Error::Degenerate(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

impl fmt::Display for SampleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SampleFunction::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub re_z: f64,
    pub im_z: f64,
    pub re_f: Option<f64>,
    pub im_f: Option<f64>,
    pub is_pole: bool,
}

impl SampleRow {
    pub fn new(z: Complex64, value: Option<Complex64>) -> Self {
        SampleRow {
            re_z: z.re,
            im_z: z.im,
            re_f: value.map(|v| v.re),
            im_f: value.map(|v| v.im),
            is_pole: value.is_none(),
        }
    }
}

/// Values of one function on a rectangular grid, row-major with the real
/// coordinate varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub k: f64,
    pub function: SampleFunction,
    pub real: AxisSpec,
    pub imag: AxisSpec,
    pub rows: Vec<SampleRow>,
}

impl SampleGrid {
    pub fn compute(
        ctx: &ShenContext,
        function: SampleFunction,
        real: AxisSpec,
        imag: AxisSpec,
        exec: Execution,
    ) -> Result<Self> {
        let points: Vec<Complex64> = imag
            .values()
            .flat_map(|y| real.values().map(move |x| Complex64::new(x, y)))
            .collect();
        let rows = exec
            .map(&points, |&z| {
                function.eval(ctx, z).map(|v| SampleRow::new(z, v))
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(SampleGrid {
            k: ctx.modulus().k(),
            function,
            real,
            imag,
            rows,
        })
    }

    pub fn to_csv(&self) -> String {
        rows_to_csv(&self.rows)
    }
}

pub fn rows_to_csv(rows: &[SampleRow]) -> String {
    let mut out = String::with_capacity(40 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format_number(r.re_z));
        out.push(',');
        out.push_str(&format_number(r.im_z));
        out.push(',');
        match (r.re_f, r.im_f, r.is_pole) {
            (Some(a), Some(b), false) => {
                out.push_str(&format_number(a));
                out.push(',');
                out.push_str(&format_number(b));
                out.push_str(",0\n");
            }
            _ => out.push_str(",,1\n"),
        }
    }
    out
}

pub fn rows_from_csv(text: &str) -> Result<Vec<SampleRow>> {
    let bad = |reason| Error::GridSpec {
        spec: "csv".to_string(),
        reason,
    };
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(bad("missing header"));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
    lines
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            let [re_z, im_z, re_f, im_f, pole] = fields.as_slice() else {
                return Err(bad("expected five fields"));
            };
            let (re_z, im_z) = (num(re_z)?, num(im_z)?);
            match *pole {
                "1" if re_f.is_empty() && im_f.is_empty() => Ok(SampleRow {
                    re_z,
                    im_z,
                    re_f: None,
                    im_f: None,
                    is_pole: true,
                }),
                "0" => Ok(SampleRow {
                    re_z,
                    im_z,
                    re_f: Some(num(re_f)?),
                    im_f: Some(num(im_f)?),
                    is_pole: false,
                }),
                _ => Err(bad("bad is_pole field")),
            }
        })
        .collect()
}
