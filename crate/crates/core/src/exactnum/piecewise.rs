use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// An exact piecewise-linear function on `[0, 2]`, stored by its breakpoints.
///
/// The breakpoint list is kept canonical: abscissae strictly increase from
/// `0` to `2` and consecutive segments never share a slope. Two functions
/// are equal exactly when their canonical breakpoint lists are equal.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<(Rational, Rational)>", into = "Vec<(Rational, Rational)>")]
pub struct PiecewiseLinear {
    breakpoints: Vec<(Rational, Rational)>,
}

impl PiecewiseLinear {
    /// Builds a function from breakpoints, merging collinear segments.
    pub fn from_breakpoints(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput(
                "a piecewise-linear function needs at least two breakpoints".into(),
            ));
        }
        if !points[0].0.is_zero() || points[points.len() - 1].0 != Rational::two() {
            return Err(Error::InvalidInput(
                "breakpoints must start at t = 0 and end at t = 2".into(),
            ));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidInput(
                "breakpoint abscissae must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            breakpoints: canonicalize(points),
        })
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn constant(value: Rational) -> Self {
        Self {
            breakpoints: vec![(Rational::zero(), value.clone()), (Rational::two(), value)],
        }
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    /// Index `i` of the segment `[t_i, t_{i+1}]` containing `t`, preferring
    /// the left segment at a breakpoint.
    fn segment_of(&self, t: &Rational) -> usize {
        let idx = self.breakpoints.partition_point(|(x, _)| x < t);
        idx.saturating_sub(1).min(self.breakpoints.len() - 2)
    }

    fn segment_slope(&self, i: usize) -> Rational {
        let (t0, v0) = &self.breakpoints[i];
        let (t1, v1) = &self.breakpoints[i + 1];
        (v1 - v0) / (t1 - t0)
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        t.check_unit_interval()?;
        let i = self.segment_of(t);
        let (t0, v0) = &self.breakpoints[i];
        Ok(v0 + self.segment_slope(i) * (t - t0))
    }

    /// One-sided derivatives at `t`; the side leaving `[0, 2]` is `None`.
    pub fn slopes(&self, t: &Rational) -> Result<(Option<Rational>, Option<Rational>)> {
        t.check_unit_interval()?;
        let idx = self.breakpoints.partition_point(|(x, _)| x < t);
        let at_breakpoint = idx < self.breakpoints.len() && &self.breakpoints[idx].0 == t;
        let left = if t.is_zero() {
            None
        } else {
            Some(self.segment_slope(idx - 1))
        };
        let right = if *t == Rational::two() {
            None
        } else if at_breakpoint {
            Some(self.segment_slope(idx))
        } else {
            Some(self.segment_slope(idx - 1))
        };
        Ok((left, right))
    }

    /// Interior breakpoints with their slope jumps `right - left`, sorted by `t`.
    pub fn singularities(&self) -> Vec<(Rational, Rational)> {
        (1..self.breakpoints.len() - 1)
            .map(|i| {
                let jump = self.segment_slope(i) - self.segment_slope(i - 1);
                (self.breakpoints[i].0.clone(), jump)
            })
            .filter(|(_, jump)| !jump.is_zero())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut ts: Vec<Rational> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .map(|(t, _)| t.clone())
            .collect();
        ts.sort();
        ts.dedup();
        let points = ts
            .into_iter()
            .map(|t| {
                let v = self.eval(&t).expect("in range") + other.eval(&t).expect("in range");
                (t, v)
            })
            .collect();
        Self {
            breakpoints: canonicalize(points),
        }
    }

    pub fn negate(&self) -> Self {
        self.scale(&Rational::from_integer(-1))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let points = self
            .breakpoints
            .iter()
            .map(|(t, v)| (t.clone(), v * c))
            .collect();
        Self {
            breakpoints: canonicalize(points),
        }
    }

    /// Largest `|f(t) - g(t)|` over the union of both breakpoint sets.
    pub fn max_gap(&self, other: &Self) -> Rational {
        self.add(&other.negate())
            .breakpoints
            .iter()
            .map(|(_, v)| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_num,t_den,v_num,v_den\n");
        for (t, v) in &self.breakpoints {
            let _ = writeln!(out, "{},{},{},{}", t.numer(), t.denom(), v.numer(), v.denom());
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "t_num,t_den,v_num,v_den" => {}
            _ => return Err(Error::InvalidInput("missing CSV header".into())),
        }
        let mut points = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::InvalidInput(format!("malformed CSV row: {line:?}")));
            }
            let t: Rational = format!("{}/{}", fields[0], fields[1]).parse()?;
            let v: Rational = format!("{}/{}", fields[2], fields[3]).parse()?;
            points.push((t, v));
        }
        Self::from_breakpoints(points)
    }
}

impl TryFrom<Vec<(Rational, Rational)>> for PiecewiseLinear {
    type Error = Error;

    fn try_from(points: Vec<(Rational, Rational)>) -> Result<Self> {
        Self::from_breakpoints(points)
    }
}

impl From<PiecewiseLinear> for Vec<(Rational, Rational)> {
    fn from(f: PiecewiseLinear) -> Self {
        f.breakpoints
    }
}

/// Drops interior breakpoints whose two adjacent segments are collinear.
fn canonicalize(points: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
    for p in points {
        while out.len() >= 2 {
            let (t0, v0) = &out[out.len() - 2];
            let (t1, v1) = &out[out.len() - 1];
            let left = (v1 - v0) * (&p.0 - t1);
            let right = (&p.1 - v1) * (t1 - t0);
            if left == right {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn pl(points: &[(i64, i64, i64, i64)]) -> PiecewiseLinear {
        PiecewiseLinear::from_breakpoints(
            points
                .iter()
                .map(|&(tn, td, vn, vd)| (r(tn, td), r(vn, vd)))
                .collect(),
        )
        .unwrap()
    }

    fn vee() -> PiecewiseLinear {
        pl(&[(0, 1, 0, 1), (1, 1, -1, 1), (2, 1, 0, 1)])
    }

    #[test]
    fn eval_examples() {
        assert_eq!(PiecewiseLinear::zero().eval(&r(1, 1)).unwrap(), r(0, 1));
        assert_eq!(vee().eval(&r(1, 2)).unwrap(), r(-1, 2));
        assert_eq!(vee().eval(&r(2, 1)).unwrap(), r(0, 1));
        assert!(vee().eval(&r(5, 2)).is_err());
        assert!(vee().eval(&r(-1, 2)).is_err());
    }

    #[test]
    fn add_negate_scale() {
        let f = vee();
        assert_eq!(f.add(&PiecewiseLinear::zero()), f);
        assert_eq!(f.add(&f.negate()), PiecewiseLinear::zero());
        assert_eq!(PiecewiseLinear::zero().negate(), PiecewiseLinear::zero());
        assert_eq!(f.scale(&r(0, 1)), PiecewiseLinear::zero());
        assert_eq!(f.scale(&r(2, 1)), f.add(&f));
    }

    #[test]
    fn slopes_at_breakpoint_and_interior() {
        let f = vee();
        assert_eq!(f.slopes(&r(1, 1)).unwrap(), (Some(r(-1, 1)), Some(r(1, 1))));
        assert_eq!(f.slopes(&r(1, 2)).unwrap(), (Some(r(-1, 1)), Some(r(-1, 1))));
        assert_eq!(f.slopes(&r(0, 1)).unwrap(), (None, Some(r(-1, 1))));
        assert_eq!(f.slopes(&r(2, 1)).unwrap(), (Some(r(1, 1)), None));
    }

    #[test]
    fn singularities_list_jumps() {
        assert!(PiecewiseLinear::zero().singularities().is_empty());
        assert_eq!(vee().singularities(), vec![(r(1, 1), r(2, 1))]);
    }

    #[test]
    fn collinear_breakpoints_are_merged() {
        let f = pl(&[(0, 1, 0, 1), (1, 2, -1, 2), (1, 1, -1, 1), (2, 1, -2, 1)]);
        assert_eq!(f.breakpoints().len(), 2);
        let g = pl(&[(0, 1, 0, 1), (2, 1, -2, 1)]);
        assert_eq!(f, g);
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(PiecewiseLinear::from_breakpoints(vec![(r(0, 1), r(0, 1))]).is_err());
        assert!(PiecewiseLinear::from_breakpoints(vec![(r(0, 1), r(0, 1)), (r(1, 1), r(0, 1))]).is_err());
        assert!(PiecewiseLinear::from_breakpoints(vec![
            (r(0, 1), r(0, 1)),
            (r(1, 1), r(0, 1)),
            (r(1, 1), r(1, 1)),
            (r(2, 1), r(0, 1))
        ])
        .is_err());
    }

    #[test]
    fn csv_round_trip() {
        let f = pl(&[(0, 1, 0, 1), (2, 3, -2, 1), (4, 3, -2, 1), (2, 1, 0, 1)]);
        let csv = f.to_csv();
        assert!(csv.starts_with("t_num,t_den,v_num,v_den\n0,1,0,1\n2,3,-2,1\n"));
        assert_eq!(PiecewiseLinear::from_csv(&csv).unwrap(), f);
        assert!(PiecewiseLinear::from_csv("a,b\n").is_err());
    }

    #[test]
    fn max_gap_between_functions() {
        assert_eq!(vee().max_gap(&PiecewiseLinear::zero()), r(1, 1));
        assert_eq!(vee().max_gap(&vee()), r(0, 1));
    }
}
