//! Brute-force reference computations. Everything here is rebuilt from the
//! raw generators and boundary lists; nothing goes through the sector or
//! linear algebra code under test.

use std::collections::{BTreeSet, HashSet};

use upsilon_core::{BifilteredComplex, Rational};

#[derive(Clone, Debug)]
pub struct Elem {
    pub generator: usize,
    pub alg: i64,
    pub alex: i64,
}

impl Elem {
    pub fn level(&self, t: &Rational) -> Rational {
        let a = Rational::from_integer(self.alg);
        let b = Rational::from_integer(self.alex);
        &a + &(t * &(&b - &a)) / &Rational::two()
    }
}

pub struct Brute {
    pub zero: Vec<Elem>,
    pub one: Vec<Elem>,
    /// Boundary of each grading-1 element as a mask over grading 0.
    d_in: Vec<u64>,
    /// Boundary of each grading-0 element as a mask over grading -1.
    d_out: Vec<u64>,
    h0: u64,
    /// Row-reduced image of `d_in`, keyed by leading bit.
    image: Vec<(u32, u64)>,
}

fn grading_sector(c: &BifilteredComplex, m: i64) -> Vec<(usize, Elem)> {
    c.generators()
        .iter()
        .filter(|g| (g.maslov - m).rem_euclid(2) == 0)
        .map(|g| {
            let k = (g.maslov - m) / 2;
            (
                g.id,
                Elem {
                    generator: g.id,
                    alg: g.alg - k,
                    alex: g.alex - k,
                },
            )
        })
        .collect()
}

fn mask_of(targets: &[usize], sector: &[(usize, Elem)]) -> u64 {
    let mut m = 0u64;
    for t in targets {
        let pos = sector.iter().position(|(g, _)| g == t).unwrap();
        m ^= 1 << pos;
    }
    m
}

fn top_bit(v: u64) -> u32 {
    63 - v.leading_zeros()
}

impl Brute {
    pub fn new(c: &BifilteredComplex) -> Self {
        let zero = grading_sector(c, 0);
        let one = grading_sector(c, 1);
        let minus = grading_sector(c, -1);
        assert!(zero.len() <= 64 && one.len() <= 64 && minus.len() <= 64);
        let d_in: Vec<u64> = one.iter().map(|(g, _)| mask_of(c.boundary(*g), &zero)).collect();
        let d_out = zero.iter().map(|(g, _)| mask_of(c.boundary(*g), &minus)).collect();
        let h0 = mask_of(c.h0_rep(), &zero);
        let mut image: Vec<(u32, u64)> = Vec::new();
        for &v in &d_in {
            let mut v = v;
            for &(bit, row) in &image {
                if v >> bit & 1 == 1 {
                    v ^= row;
                }
            }
            if v != 0 {
                let bit = top_bit(v);
                for entry in image.iter_mut() {
                    if entry.1 >> bit & 1 == 1 {
                        entry.1 ^= v;
                    }
                }
                image.push((bit, v));
            }
        }
        Self {
            zero: zero.into_iter().map(|(_, e)| e).collect(),
            one: one.into_iter().map(|(_, e)| e).collect(),
            d_in,
            d_out,
            h0,
            image,
        }
    }

    pub fn is_boundary(&self, v: u64) -> bool {
        let mut v = v;
        for &(bit, row) in &self.image {
            if v >> bit & 1 == 1 {
                v ^= row;
            }
        }
        v == 0
    }

    /// Grading-0 chain made of the even generators `gens`.
    pub fn chain(&self, gens: &[usize]) -> u64 {
        gens.iter()
            .map(|g| self.zero.iter().position(|e| e.generator == *g).unwrap())
            .fold(0u64, |m, i| m ^ 1 << i)
    }

    pub fn is_generating_cycle(&self, z: u64) -> bool {
        let mut d = 0u64;
        for i in 0..self.zero.len() {
            if z >> i & 1 == 1 {
                d ^= self.d_out[i];
            }
        }
        d == 0 && self.is_boundary(z ^ self.h0)
    }

    /// Every generating cycle, by enumerating all `2^n` grading-0 chains.
    pub fn all_generating_cycles(&self) -> Vec<u64> {
        let n = self.zero.len();
        assert!(n <= 24, "exhaustive enumeration over {n} elements");
        (0..1u64 << n).filter(|&z| self.is_generating_cycle(z)).collect()
    }

    /// Generating cycles supported inside `allowed`.
    pub fn generating_cycles_within(&self, allowed: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut sub = allowed;
        loop {
            if self.is_generating_cycle(sub) {
                out.push(sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & allowed;
        }
        out
    }

    pub fn max_level(&self, z: u64, t: &Rational) -> Option<Rational> {
        (0..self.zero.len())
            .filter(|i| z >> i & 1 == 1)
            .map(|i| self.zero[i].level(t))
            .max()
    }

    /// `gamma(t)` as the minimum over an explicit list of generating cycles.
    pub fn gamma_over(&self, cycles: &[u64], t: &Rational) -> Rational {
        cycles
            .iter()
            .filter_map(|&z| self.max_level(z, t))
            .min()
            .expect("some generating cycle is nonzero")
    }

    /// `gamma(t)` by raising a level threshold and enumerating every chain
    /// supported below it.
    pub fn gamma_by_threshold(&self, t: &Rational) -> Rational {
        let levels: BTreeSet<Rational> = self.zero.iter().map(|e| e.level(t)).collect();
        for s in levels {
            let allowed = self.below(t, &s);
            if !self.generating_cycles_within(allowed).is_empty() {
                return s;
            }
        }
        panic!("no generating cycle")
    }

    fn below(&self, t: &Rational, s: &Rational) -> u64 {
        (0..self.zero.len())
            .filter(|&i| &self.zero[i].level(t) <= s)
            .fold(0u64, |m, i| m | 1 << i)
    }

    /// `(gamma, gamma2)` at `t0` by enumerating side cycles and grading-1
    /// chains. Sides are read off at `t0 -+ eps` with `eps` far below any
    /// breakpoint spacing of the complexes this is used on.
    pub fn gamma2(&self, t0: &Rational) -> (Rational, Rational) {
        let gamma = self.gamma_by_threshold(t0);
        let cycles = self.generating_cycles_within(self.below(t0, &gamma));
        let eps = Rational::new(1, 1_000_000_000);
        let side = |t: Rational| -> Vec<u64> {
            let g = self.gamma_over(&cycles, &t);
            cycles
                .iter()
                .copied()
                .filter(|&z| self.max_level(z, &t).as_ref() == Some(&g))
                .collect()
        };
        let minus = side(t0 - &eps);
        let plus = side(t0 + &eps);
        let one_levels: Vec<Rational> = self.one.iter().map(|e| e.level(t0)).collect();
        let mut thresholds: BTreeSet<Rational> =
            one_levels.iter().filter(|l| **l > gamma).cloned().collect();
        thresholds.insert(gamma.clone());
        for r in thresholds {
            let window: Vec<usize> = (0..self.one.len()).filter(|&j| one_levels[j] <= r).collect();
            assert!(window.len() <= 20, "window of {} elements", window.len());
            let mut reachable = HashSet::new();
            for w in 0..1u64 << window.len() {
                let mut d = 0u64;
                for (k, &j) in window.iter().enumerate() {
                    if w >> k & 1 == 1 {
                        d ^= self.d_in[j];
                    }
                }
                reachable.insert(d);
            }
            let merged = minus
                .iter()
                .any(|a| plus.iter().any(|b| reachable.contains(&(a ^ b))));
            if merged {
                return (gamma, r);
            }
        }
        panic!("sides never merge")
    }

    /// Number of grading-1 elements with level at most `r` at `t0`.
    pub fn window_size(&self, t0: &Rational, r: &Rational) -> usize {
        self.one.iter().filter(|e| &e.level(t0) <= r).count()
    }
}
