//! Secondary Upsilon at singularities of `Upsilon'` with positive slope jump.
//!
//! Near a singularity `t0` the optimal generating cycles for `t0 - delta` and
//! `t0 + delta` are supported on different elements. `gamma2(t0)` is the
//! least level `r` at which one cycle from each side becomes homologous
//! inside `F(t0, r)`, and `Upsilon2(t0) = -2 (gamma2(t0) - gamma(t0))`.
//!
//! The infinitesimal `delta` is never given a value: an element is on the
//! `t0 + delta` side's list when its `(level, slope)` jet is at most that of
//! `gamma`, compared lexicographically (slopes negated for `t0 - delta`).

use std::cmp::Ordering;

use serde::Serialize;

use crate::complex::BifilteredComplex;
use crate::error::{Error, Result};
use crate::exactnum::{PiecewiseLinear, Rational};
use crate::f2linalg::{solve, BitVec, EchelonBasis, F2Matrix};
use crate::upsilon::{upsilon_with, SectorData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    fn sign(self) -> i64 {
        match self {
            Side::Minus => -1,
            Side::Plus => 1,
        }
    }
}

/// A level at `t0` together with its derivative in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    pub value: Rational,
    pub slope: Rational,
}

impl Jet {
    /// Order of the levels at `t0 + delta` (plus) or `t0 - delta` (minus)
    /// for all sufficiently small `delta > 0`.
    pub fn cmp_on(&self, other: &Jet, side: Side) -> Ordering {
        let sigma = Rational::from_integer(side.sign());
        self.value
            .cmp(&other.value)
            .then_with(|| (&self.slope * &sigma).cmp(&(&other.slope * &sigma)))
    }
}

/// Cycles realizing `gamma` on one side of a singularity.
#[derive(Clone, Debug)]
pub struct SideData {
    pub side: Side,
    pub gamma_jet: Jet,
    /// Grading-0 sector indices whose jet does not exceed `gamma_jet`.
    pub admissible: Vec<usize>,
    /// The side cycles are `particular + span(directions)`.
    pub particular: BitVec,
    pub directions: Vec<BitVec>,
}

impl SideData {
    pub fn allows(&self, z: &BitVec) -> bool {
        z.ones().all(|i| self.admissible.binary_search(&i).is_ok())
    }

    pub fn dimension(&self) -> usize {
        self.directions.len()
    }
}

/// `z_minus + z_plus = d w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeWitness {
    pub z_minus: BitVec,
    pub z_plus: BitVec,
    pub w: BitVec,
}

#[derive(Clone, Debug)]
pub struct Gamma2Result {
    pub t0: Rational,
    pub gamma: Rational,
    pub gamma2: Rational,
    /// Index of `gamma2` in `thresholds`.
    pub threshold_index: usize,
    pub thresholds: Vec<Rational>,
    pub witness: MergeWitness,
    pub minus: SideData,
    pub plus: SideData,
}

impl Gamma2Result {
    pub fn upsilon2(&self) -> Rational {
        (&self.gamma2 - &self.gamma) * Rational::from_integer(-2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessTerm {
    pub generator: usize,
    pub u_power: i64,
    pub alg: i64,
    pub alex: i64,
    pub level: Rational,
}

/// Audit form of a [`Gamma2Result`].
#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub t0: Rational,
    pub gamma: Rational,
    pub gamma2: Rational,
    pub upsilon2: Rational,
    pub z_minus: Vec<WitnessTerm>,
    pub z_plus: Vec<WitnessTerm>,
    pub w: Vec<WitnessTerm>,
}

/// Sector data and `Upsilon` of one complex, shared by all singularity
/// queries on it.
#[derive(Clone, Debug)]
pub struct Upsilon2Context {
    pub data: SectorData,
    pub upsilon: PiecewiseLinear,
}

impl Upsilon2Context {
    pub fn new(c: &BifilteredComplex) -> Result<Self> {
        let data = SectorData::new(c);
        let upsilon = upsilon_with(&data, 0)?;
        Ok(Self { data, upsilon })
    }

    pub fn from_parts(data: SectorData, upsilon: PiecewiseLinear) -> Self {
        Self { data, upsilon }
    }

    /// `(gamma(t0), gamma'(t0-), gamma'(t0+))`, after checking `t0` is a
    /// singularity with positive jump in `Upsilon'`.
    fn gamma_jets(&self, t0: &Rational) -> Result<(Rational, Rational, Rational)> {
        let (left, right) = self.upsilon.slopes(t0)?;
        let (Some(left), Some(right)) = (left, right) else {
            return Err(Error::NotSingular(t0.to_string()));
        };
        let jump = &right - &left;
        if jump.is_zero() {
            return Err(Error::NotSingular(t0.to_string()));
        }
        if jump.is_negative() {
            return Err(Error::NonPositiveJump {
                t: t0.to_string(),
                jump: jump.to_string(),
            });
        }
        let half = Rational::new(-1, 2);
        let gamma = self.upsilon.eval(t0)? * &half;
        Ok((gamma, left * &half, right * half))
    }

    pub fn side_cycles(&self, t0: &Rational, side: Side) -> Result<SideData> {
        let (gamma, minus_slope, plus_slope) = self.gamma_jets(t0)?;
        self.side_from_jets(t0, side, gamma, minus_slope, plus_slope)
    }

    fn side_from_jets(
        &self,
        t0: &Rational,
        side: Side,
        gamma: Rational,
        minus_slope: Rational,
        plus_slope: Rational,
    ) -> Result<SideData> {
        let gamma_jet = Jet {
            value: gamma,
            slope: match side {
                Side::Minus => minus_slope,
                Side::Plus => plus_slope,
            },
        };
        let zero = &self.data.zero;
        let allowed: Vec<bool> = zero
            .elements()
            .iter()
            .map(|e| {
                let jet = Jet {
                    value: e.level(t0),
                    slope: e.level_slope(),
                };
                jet.cmp_on(&gamma_jet, side) != Ordering::Greater
            })
            .collect();
        let space = self.data.solve_support(&allowed)?;
        let Some(u0) = space.particular else {
            return Err(Error::Internal(format!(
                "no generating cycle realizes gamma on the {side:?} side of t = {t0}"
            )));
        };
        let particular = self.data.h0.xor(&self.data.boundary_of(&u0));
        let mut basis = EchelonBasis::new(zero.len());
        let mut directions = Vec::new();
        for k in &space.kernel_basis {
            let v = self.data.boundary_of(k);
            if basis.insert(&v)? {
                directions.push(v);
            }
        }
        Ok(SideData {
            side,
            gamma_jet,
            admissible: (0..zero.len()).filter(|&i| allowed[i]).collect(),
            particular,
            directions,
        })
    }

    /// `gamma(t0)` followed by every larger grading-1 level, sorted.
    pub fn thresholds(&self, t0: &Rational, gamma: &Rational) -> Vec<Rational> {
        let mut ts: Vec<Rational> = self
            .data
            .levels_one(t0)
            .into_iter()
            .filter(|l| l > gamma)
            .collect();
        ts.push(gamma.clone());
        ts.sort();
        ts.dedup();
        ts
    }

    /// Looks for side cycles `z_-`, `z_+` and a grading-1 chain `w` of level
    /// at most `r` with `d w = z_- + z_+`.
    ///
    /// Unknowns are `u` (any grading-1 chain) and `w`; `z_- = h0 + d u` must
    /// vanish off the minus side's support and `z_+ = z_- + d w` off the plus
    /// side's. Both are then cycles in the class of `h0`.
    pub fn merge_at(
        &self,
        t0: &Rational,
        minus: &SideData,
        plus: &SideData,
        r: &Rational,
    ) -> Result<Option<MergeWitness>> {
        let data = &self.data;
        let n0 = data.zero.len();
        let n1 = data.one.len();
        let levels = data.levels_one(t0);
        let window: Vec<usize> = (0..n1).filter(|&j| &levels[j] <= r).collect();
        let restrict = |row: &BitVec| {
            BitVec::from_indices(
                window.len(),
                window
                    .iter()
                    .enumerate()
                    .filter_map(|(k, &j)| row.get(j).then_some(k)),
            )
        };
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let in_minus = mask(n0, &minus.admissible);
        let in_plus = mask(n0, &plus.admissible);
        for g in 0..n0 {
            let d_row = data.d_in.row(g);
            if !in_minus[g] {
                rows.push(d_row.concat(&BitVec::zeros(window.len())));
                rhs.push(data.h0.get(g));
            }
            if !in_plus[g] {
                rows.push(d_row.concat(&restrict(d_row)));
                rhs.push(data.h0.get(g));
            }
        }
        let a = F2Matrix::from_rows(n1 + window.len(), rows)?;
        let space = solve(&a, &BitVec::from_bools(&rhs))?;
        Ok(space.particular.map(|x| {
            let u = x.slice(0, n1);
            let w = BitVec::from_indices(n1, x.slice(n1, n1 + window.len()).ones().map(|k| window[k]));
            let z_minus = data.h0.xor(&data.boundary_of(&u));
            let z_plus = z_minus.xor(&data.boundary_of(&w));
            MergeWitness { z_minus, z_plus, w }
        }))
    }

    fn prepare(&self, t0: &Rational) -> Result<(Rational, SideData, SideData, Vec<Rational>)> {
        let (gamma, minus_slope, plus_slope) = self.gamma_jets(t0)?;
        let minus = self.side_from_jets(
            t0,
            Side::Minus,
            gamma.clone(),
            minus_slope.clone(),
            plus_slope.clone(),
        )?;
        let plus = self.side_from_jets(t0, Side::Plus, gamma.clone(), minus_slope, plus_slope)?;
        let thresholds = self.thresholds(t0, &gamma);
        Ok((gamma, minus, plus, thresholds))
    }

    /// Binary search over thresholds; solvability is monotone in `r`.
    pub fn gamma2_at(&self, t0: &Rational) -> Result<Gamma2Result> {
        let (gamma, minus, plus, thresholds) = self.prepare(t0)?;
        let last = thresholds.len() - 1;
        let Some(mut best) = self.merge_at(t0, &minus, &plus, &thresholds[last])? else {
            return Err(Error::Internal(format!(
                "side cycles at t = {t0} are not homologous in the full complex"
            )));
        };
        let (mut lo, mut hi) = (0, last);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.merge_at(t0, &minus, &plus, &thresholds[mid])? {
                Some(w) => {
                    best = w;
                    hi = mid;
                }
                None => lo = mid + 1,
            }
        }
        Ok(Gamma2Result {
            t0: t0.clone(),
            gamma,
            gamma2: thresholds[hi].clone(),
            threshold_index: hi,
            thresholds,
            witness: best,
            minus,
            plus,
        })
    }

    /// Reference search that tries every threshold in increasing order.
    pub fn gamma2_linear_scan(&self, t0: &Rational) -> Result<Gamma2Result> {
        let (gamma, minus, plus, thresholds) = self.prepare(t0)?;
        for (k, r) in thresholds.iter().enumerate() {
            if let Some(witness) = self.merge_at(t0, &minus, &plus, r)? {
                return Ok(Gamma2Result {
                    t0: t0.clone(),
                    gamma,
                    gamma2: r.clone(),
                    threshold_index: k,
                    thresholds: thresholds.clone(),
                    witness,
                    minus,
                    plus,
                });
            }
        }
        Err(Error::Internal(format!(
            "side cycles at t = {t0} are not homologous in the full complex"
        )))
    }

    pub fn upsilon2_at(&self, t0: &Rational) -> Result<Rational> {
        Ok(self.gamma2_at(t0)?.upsilon2())
    }

    /// Re-checks a result: side supports, cycle and class conditions,
    /// `d w = z_- + z_+`, the level bound on `w`, and infeasibility at the
    /// previous threshold.
    pub fn verify(&self, res: &Gamma2Result) -> Result<()> {
        let fail = |msg: &str| {
            Err(Error::Internal(format!(
                "gamma2 witness at t = {}: {msg}",
                res.t0
            )))
        };
        let wit = &res.witness;
        if !res.minus.allows(&wit.z_minus) || !res.plus.allows(&wit.z_plus) {
            return fail("side cycle leaves its admissible set");
        }
        if !self.data.is_generating_cycle(&wit.z_minus)? || !self.data.is_generating_cycle(&wit.z_plus)? {
            return fail("side cycle is not a generating cycle");
        }
        if self.data.boundary_of(&wit.w) != wit.z_minus.xor(&wit.z_plus) {
            return fail("d w differs from z_minus + z_plus");
        }
        let ones = self.data.one.elements();
        if wit.w.ones().any(|j| ones[j].level(&res.t0) > res.gamma2) {
            return fail("w exceeds the threshold");
        }
        if res.gamma2 < res.gamma {
            return fail("gamma2 below gamma");
        }
        if res.threshold_index > 0
            && self
                .merge_at(&res.t0, &res.minus, &res.plus, &res.thresholds[res.threshold_index - 1])?
                .is_some()
        {
            return fail("a lower threshold is already feasible");
        }
        Ok(())
    }

    pub fn witness_report(&self, res: &Gamma2Result) -> WitnessReport {
        let terms = |v: &BitVec, elems: &[crate::upsilon::SectorElement]| -> Vec<WitnessTerm> {
            v.ones()
                .map(|i| {
                    let e = elems[i];
                    WitnessTerm {
                        generator: e.generator,
                        u_power: e.u_power,
                        alg: e.alg,
                        alex: e.alex,
                        level: e.level(&res.t0),
                    }
                })
                .collect()
        };
        let zero = self.data.zero.elements();
        WitnessReport {
            t0: res.t0.clone(),
            gamma: res.gamma.clone(),
            gamma2: res.gamma2.clone(),
            upsilon2: res.upsilon2(),
            z_minus: terms(&res.witness.z_minus, zero),
            z_plus: terms(&res.witness.z_plus, zero),
            w: terms(&res.witness.w, self.data.one.elements()),
        }
    }
}

fn mask(n: usize, indices: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &i in indices {
        m[i] = true;
    }
    m
}

pub fn side_cycles(c: &BifilteredComplex, t0: &Rational, side: Side) -> Result<SideData> {
    Upsilon2Context::new(c)?.side_cycles(t0, side)
}

pub fn gamma2_at(c: &BifilteredComplex, t0: &Rational) -> Result<Gamma2Result> {
    Upsilon2Context::new(c)?.gamma2_at(t0)
}

pub fn upsilon2_at(c: &BifilteredComplex, t0: &Rational) -> Result<Rational> {
    Upsilon2Context::new(c)?.upsilon2_at(t0)
}
