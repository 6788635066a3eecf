//! Filtration levels, the subcomplexes `F(t, s)`, `gamma(t)` and the exact
//! piecewise-linear Upsilon function.

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::BifilteredComplex;
use crate::error::{Error, Result};
use crate::exactnum::{PiecewiseLinear, Rational};
use crate::f2linalg::{in_span, solve, BitVec, EchelonBasis, F2Matrix};

/// A translate `U^k x` of a stored generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SectorElement {
    pub generator: usize,
    pub u_power: i64,
    /// Effective filtration levels `alg - k`, `alex - k`.
    pub alg: i64,
    pub alex: i64,
    pub maslov: i64,
}

impl SectorElement {
    /// `(t/2) alex + (1 - t/2) alg`.
    pub fn level(&self, t: &Rational) -> Rational {
        level_at(t, self.alg, self.alex)
    }

    /// `d/dt` of [`level`](Self::level).
    pub fn level_slope(&self) -> Rational {
        Rational::new(self.alex - self.alg, 2)
    }
}

fn level_at(t: &Rational, alg: i64, alex: i64) -> Rational {
    Rational::from_integer(alg) + t * Rational::from_integer(alex - alg) / Rational::two()
}

/// Filtration level of `g` at parameter `t`.
pub fn level(t: &Rational, g: &SectorElement) -> Result<Rational> {
    t.check_unit_interval()?;
    Ok(g.level(t))
}

/// All translates in one Maslov grading. Exactly one translate of each
/// generator whose grading has the right parity.
#[derive(Clone, Debug)]
pub struct Sector {
    grading: i64,
    elements: Vec<SectorElement>,
    position: Vec<Option<usize>>,
}

impl Sector {
    pub fn grading(&self) -> i64 {
        self.grading
    }

    pub fn elements(&self) -> &[SectorElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of the translate of generator `g`, if `g` contributes.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.position[g]
    }
}

pub fn sector(c: &BifilteredComplex, m: i64) -> Sector {
    let mut elements = Vec::new();
    let mut position = vec![None; c.len()];
    for g in c.generators() {
        if (g.maslov - m).rem_euclid(2) == 0 {
            let k = (g.maslov - m) / 2;
            position[g.id] = Some(elements.len());
            elements.push(SectorElement {
                generator: g.id,
                u_power: k,
                alg: g.alg - k,
                alex: g.alex - k,
                maslov: m,
            });
        }
    }
    Sector {
        grading: m,
        elements,
        position,
    }
}

/// Matrix of `d` from `from` (columns) to `to` (rows); `to` must be the
/// sector one grading below `from`.
pub fn sector_boundary(c: &BifilteredComplex, from: &Sector, to: &Sector) -> F2Matrix {
    debug_assert_eq!(to.grading, from.grading - 1);
    let mut m = F2Matrix::zeros(to.len(), from.len());
    for (col, e) in from.elements.iter().enumerate() {
        for &t in c.boundary(e.generator) {
            let row = to.position(t).expect("boundary target has matching parity");
            m.set(row, col, true);
        }
    }
    m
}

/// The grading -1, 0, 1 data every homology question needs.
#[derive(Clone, Debug)]
pub struct SectorData {
    pub zero: Sector,
    pub one: Sector,
    pub minus_one: Sector,
    /// `d: C_1 -> C_0`, one column per grading-1 element.
    pub d_in: F2Matrix,
    pub d_in_columns: Vec<BitVec>,
    /// `d: C_0 -> C_-1`.
    pub d_out: F2Matrix,
    pub h0: BitVec,
}

impl SectorData {
    pub fn new(c: &BifilteredComplex) -> Self {
        let zero = sector(c, 0);
        let one = sector(c, 1);
        let minus_one = sector(c, -1);
        let d_in = sector_boundary(c, &one, &zero);
        let d_out = sector_boundary(c, &zero, &minus_one);
        let d_in_columns = (0..d_in.cols()).map(|j| d_in.column(j)).collect();
        let h0 = BitVec::from_indices(
            zero.len(),
            c.h0_rep()
                .iter()
                .map(|&g| zero.position(g).expect("h0 uses even generators")),
        );
        Self {
            zero,
            one,
            minus_one,
            d_in,
            d_in_columns,
            d_out,
            h0,
        }
    }

    pub fn levels_zero(&self, t: &Rational) -> Vec<Rational> {
        self.zero.elements.iter().map(|e| e.level(t)).collect()
    }

    pub fn levels_one(&self, t: &Rational) -> Vec<Rational> {
        self.one.elements.iter().map(|e| e.level(t)).collect()
    }

    /// `d w` for a grading-1 chain `w`.
    pub fn boundary_of(&self, w: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.zero.len());
        for j in w.ones() {
            out.xor_assign(&self.d_in_columns[j]);
        }
        out
    }

    /// Whether `z` is a grading-0 cycle homologous to `h0_rep`.
    pub fn is_generating_cycle(&self, z: &BitVec) -> Result<bool> {
        if !self.d_out.mul_vec(z)?.is_zero() {
            return Ok(false);
        }
        in_span(&self.d_in_columns, &z.xor(&self.h0))
    }

    /// Whether some cycle supported on `allowed` is homologous to `h0_rep`.
    pub fn class_reachable_within(&self, allowed: &[bool]) -> Result<bool> {
        Ok(self.solve_support(allowed)?.particular.is_some())
    }

    /// Solutions `u` of `(h0 + d u)_g = 0` for every `g` outside `allowed`.
    pub fn solve_support(&self, allowed: &[bool]) -> Result<crate::f2linalg::AffineSolutionSpace> {
        let rows: Vec<usize> = (0..self.zero.len()).filter(|&g| !allowed[g]).collect();
        let a = F2Matrix::from_rows(
            self.one.len(),
            rows.iter().map(|&g| self.d_in.row(g).clone()).collect(),
        )?;
        let b = BitVec::from_indices(rows.len(), (0..rows.len()).filter(|&r| self.h0.get(rows[r])));
        solve(&a, &b)
    }
}

/// Witness for `gamma(t) = s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCertificate {
    pub t: Rational,
    pub s: Rational,
    /// Grading-0 cycle in `F(t, s)` homologous to `h0_rep`.
    pub cycle: BitVec,
    /// Grading-1 chain `w` with `d w = cycle + h0_rep`.
    pub bounding_chain: BitVec,
    /// Support of `cycle` with levels at `t`.
    pub witnesses: Vec<(SectorElement, Rational)>,
}

impl GammaCertificate {
    /// Re-checks the certificate without reusing the search: cycle and
    /// homology conditions, support bounds, and infeasibility at the next
    /// lower grading-0 level.
    pub fn verify(&self, data: &SectorData) -> Result<()> {
        let fail = |msg: &str| Err(Error::Internal(format!("gamma certificate at t = {}: {msg}", self.t)));
        if !data.d_out.mul_vec(&self.cycle)?.is_zero() {
            return fail("not a cycle");
        }
        if data.boundary_of(&self.bounding_chain) != self.cycle.xor(&data.h0) {
            return fail("bounding chain does not connect the cycle to h0");
        }
        if !data.is_generating_cycle(&self.cycle)? {
            return fail("cycle is not homologous to h0");
        }
        let levels = data.levels_zero(&self.t);
        let support_max = self.cycle.ones().map(|i| &levels[i]).max();
        if support_max != Some(&self.s) {
            return fail("support maximum differs from s");
        }
        if let Some(lower) = levels.iter().filter(|l| **l < self.s).max() {
            let allowed: Vec<bool> = levels.iter().map(|l| l <= lower).collect();
            if data.class_reachable_within(&allowed)? {
                return fail("a lower threshold already admits a generating cycle");
            }
        }
        Ok(())
    }
}

/// `gamma(t)`: the least grading-0 level `s` such that `F(t, s)` contains a
/// cycle homologous to `h0_rep`.
pub fn gamma_at(c: &BifilteredComplex, t: &Rational) -> Result<GammaCertificate> {
    gamma_with(&SectorData::new(c), t)
}

/// [`gamma_at`] on precomputed sector data.
///
/// Orders grading-0 elements by decreasing level, puts the boundaries in
/// echelon form with first-bit pivots, and reduces `h0`. The first surviving
/// bit is the highest element any representative must contain.
pub fn gamma_with(data: &SectorData, t: &Rational) -> Result<GammaCertificate> {
    t.check_unit_interval()?;
    let n0 = data.zero.len();
    let levels = data.levels_zero(t);
    let mut order: Vec<usize> = (0..n0).collect();
    order.sort_by(|&a, &b| levels[b].cmp(&levels[a]).then(a.cmp(&b)));
    let mut rank = vec![0; n0];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = pos;
    }
    let permute = |v: &BitVec| BitVec::from_indices(n0, v.ones().map(|i| rank[i]));

    let mut basis = EchelonBasis::new(n0);
    for col in &data.d_in_columns {
        basis.insert(&permute(col))?;
    }
    let (reduced, combo) = basis.reduce_with_combination(&permute(&data.h0))?;
    let Some(top) = reduced.first_one() else {
        return Err(Error::UnsupportedComplex(
            "H_0 representative is a boundary".into(),
        ));
    };
    let cycle = BitVec::from_indices(n0, reduced.ones().map(|p| order[p]));
    let bounding_chain = BitVec::from_indices(data.one.len(), combo);
    let witnesses = cycle
        .ones()
        .map(|i| (data.zero.elements[i], levels[i].clone()))
        .collect();
    Ok(GammaCertificate {
        t: t.clone(),
        s: levels[order[top]].clone(),
        cycle,
        bounding_chain,
        witnesses,
    })
}

/// Parameters in `(0, 2)` where two distinct grading-0 level lines cross,
/// plus both endpoints; sorted and deduplicated.
pub fn candidate_breakpoints(data: &SectorData) -> Vec<Rational> {
    let mut lines: Vec<(i64, i64)> = data
        .zero
        .elements
        .iter()
        .map(|e| (e.alg, e.alex - e.alg))
        .collect();
    lines.sort_unstable();
    lines.dedup();
    let two = Rational::two();
    let mut ts = vec![Rational::zero(), two.clone()];
    for (a, &(i1, d1)) in lines.iter().enumerate() {
        for &(i2, d2) in &lines[a + 1..] {
            if d1 == d2 {
                continue;
            }
            // i1 + t d1 / 2 = i2 + t d2 / 2
            let t = Rational::new(2 * (i2 - i1), d1 - d2);
            if t.is_positive() && t < two {
                ts.push(t);
            }
        }
    }
    ts.sort();
    ts.dedup();
    ts
}

/// Exact `Upsilon(t) = -2 gamma(t)` on `[0, 2]`.
///
/// Between consecutive level-line crossings the level order is constant, so
/// `gamma` is linear there. Each interval midpoint is evaluated as a check;
/// a non-collinear midpoint is reported as an internal error.
pub fn upsilon(c: &BifilteredComplex) -> Result<PiecewiseLinear> {
    upsilon_with(&SectorData::new(c), 0)
}

/// [`upsilon`] on precomputed data, additionally checking `grid` equally
/// spaced points `2k / grid`.
pub fn upsilon_with(data: &SectorData, grid: usize) -> Result<PiecewiseLinear> {
    let ts = candidate_breakpoints(data);
    let mids: Vec<Rational> = ts.windows(2).map(|w| w[0].midpoint(&w[1])).collect();
    let gamma = |t: &Rational| gamma_with(data, t).map(|cert| cert.s);
    let at_ts: Vec<Rational> = ts.par_iter().map(gamma).collect::<Result<_>>()?;
    let at_mids: Vec<Rational> = mids.par_iter().map(gamma).collect::<Result<_>>()?;
    for (k, mid) in at_mids.iter().enumerate() {
        if mid.clone() * Rational::two() != &at_ts[k] + &at_ts[k + 1] {
            return Err(Error::Internal(format!(
                "gamma is not linear on [{}, {}]; a breakpoint was missed",
                ts[k],
                ts[k + 1]
            )));
        }
    }
    let minus_two = Rational::from_integer(-2);
    let f = PiecewiseLinear::from_breakpoints(
        ts.into_iter()
            .zip(at_ts)
            .map(|(t, g)| (t, g * &minus_two))
            .collect(),
    )?;
    if grid > 0 {
        let points: Vec<Rational> = (0..=grid)
            .map(|k| Rational::new(2 * k as i64, grid as i64))
            .collect();
        points.par_iter().try_for_each(|t| -> Result<()> {
            let expected = gamma(t)? * &minus_two;
            if f.eval(t)? != expected {
                return Err(Error::Internal(format!(
                    "grid check failed at t = {t}: interpolated {} but computed {expected}",
                    f.eval(t)?
                )));
            }
            Ok(())
        })?;
    }
    Ok(f)
}
