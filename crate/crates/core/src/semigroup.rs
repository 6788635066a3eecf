//! Numerical semigroups `S(p, q)`, torus knot Alexander polynomials and the
//! staircase step vectors read off from them.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Alexander polynomial `sum_i (-1)^i t^{a_i}` of an L-space knot, stored by
/// its exponents `a_0 < a_1 < ... < a_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlexanderPolynomial {
    exponents: Vec<u64>,
}

impl AlexanderPolynomial {
    pub fn new(exponents: Vec<u64>) -> Result<Self> {
        if exponents.first() != Some(&0) {
            return Err(Error::InvalidInput("lowest exponent must be 0".into()));
        }
        if exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "exponents must be strictly increasing".into(),
            ));
        }
        if exponents.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(
                "alternating sum must evaluate to 1 at t = 1".into(),
            ));
        }
        let top = exponents[exponents.len() - 1];
        let n = exponents.len();
        if (0..n).any(|i| exponents[i] + exponents[n - 1 - i] != top) {
            return Err(Error::InvalidInput("polynomial is not symmetric".into()));
        }
        Ok(Self { exponents })
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn degree(&self) -> u64 {
        self.exponents[self.exponents.len() - 1]
    }

    /// Dense integer coefficients, index = exponent.
    pub fn coefficients(&self) -> Vec<i64> {
        let mut c = vec![0; self.degree() as usize + 1];
        for (i, &a) in self.exponents.iter().enumerate() {
            c[a as usize] = if i % 2 == 0 { 1 } else { -1 };
        }
        c
    }
}

/// Horizontal/vertical step lengths `[b_1, ..., b_2n]` of a staircase,
/// starting with a horizontal step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepVector(Vec<u64>);

impl StepVector {
    pub fn new(steps: Vec<u64>) -> Result<Self> {
        if !steps.len().is_multiple_of(2) {
            return Err(Error::InvalidInput("step count must be even".into()));
        }
        if steps.contains(&0) {
            return Err(Error::InvalidInput("steps must be positive".into()));
        }
        if steps.iter().ne(steps.iter().rev()) {
            return Err(Error::InvalidInput("steps must be palindromic".into()));
        }
        let horizontal: u64 = steps.iter().step_by(2).sum();
        let vertical: u64 = steps.iter().skip(1).step_by(2).sum();
        if horizontal != vertical {
            return Err(Error::InvalidInput(
                "horizontal and vertical steps must balance".into(),
            ));
        }
        Ok(Self(steps))
    }

    /// The empty staircase of the unknot.
    pub fn trivial() -> Self {
        Self(Vec::new())
    }

    pub fn steps(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total vertical drop, equal to the total horizontal run.
    pub fn height(&self) -> u64 {
        self.0.iter().skip(1).step_by(2).sum()
    }
}

fn check_torus_parameters(p: u64, q: u64) -> Result<()> {
    if p < 2 || p >= q {
        return Err(Error::InvalidInput(format!(
            "torus parameters must satisfy 2 <= p < q, got ({p}, {q})"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::InvalidInput(format!(
            "torus parameters must be coprime, got ({p}, {q})"
        )));
    }
    Ok(())
}

/// `{ n p + m q <= bound : n, m >= 0 }`, sorted.
pub fn semigroup_elements(p: u64, q: u64, bound: u64) -> Result<Vec<u64>> {
    check_torus_parameters(p, q)?;
    let mut member = vec![false; bound as usize + 1];
    let mut np = 0;
    while np <= bound {
        let mut x = np;
        while x <= bound {
            member[x as usize] = true;
            x += q;
        }
        np += p;
    }
    Ok(member
        .iter()
        .enumerate()
        .filter_map(|(x, &m)| m.then_some(x as u64))
        .collect())
}

/// Alexander polynomial of `T(p, q)` from the telescoped semigroup series
/// `sum_{s in S} (t^s - t^{s+1})`, truncated past the conductor `(p-1)(q-1)`.
pub fn alexander_torus(p: u64, q: u64) -> Result<AlexanderPolynomial> {
    check_torus_parameters(p, q)?;
    let conductor = (p - 1) * (q - 1);
    let elements = semigroup_elements(p, q, conductor + 1)?;
    let mut member = vec![false; conductor as usize + 2];
    for &s in &elements {
        member[s as usize] = true;
    }
    let exponents = (0..=conductor)
        .filter(|&n| {
            let here = member[n as usize];
            let below = n > 0 && member[n as usize - 1];
            here != below
        })
        .collect();
    AlexanderPolynomial::new(exponents)
}

/// Gaps `a_k - a_{k-1}` between consecutive exponents.
pub fn step_vector(poly: &AlexanderPolynomial) -> Result<StepVector> {
    let steps = poly.exponents().windows(2).map(|w| w[1] - w[0]).collect();
    StepVector::new(steps)
}

/// Step vector of `T(p, q)`; any parameter equal to 1 gives the unknot.
pub fn torus_steps(p: u64, q: u64) -> Result<StepVector> {
    let (p, q) = (p.min(q), p.max(q));
    if p == 1 {
        return Ok(StepVector::trivial());
    }
    step_vector(&alexander_torus(p, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semigroup_examples() {
        assert_eq!(semigroup_elements(2, 3, 7).unwrap(), vec![0, 2, 3, 4, 5, 6, 7]);
        assert_eq!(
            semigroup_elements(5, 7, 15).unwrap(),
            vec![0, 5, 7, 10, 12, 14, 15]
        );
        assert_eq!(semigroup_elements(4, 9, 0).unwrap(), vec![0]);
        assert!(semigroup_elements(4, 6, 10).is_err());
        assert!(semigroup_elements(1, 6, 10).is_err());
        assert!(semigroup_elements(7, 5, 10).is_err());
    }

    #[test]
    fn alexander_examples() {
        assert_eq!(alexander_torus(3, 4).unwrap().exponents(), &[0, 1, 3, 5, 6]);
        assert_eq!(
            alexander_torus(5, 7).unwrap().exponents(),
            &[0, 1, 5, 6, 7, 8, 10, 11, 12, 13, 14, 16, 17, 18, 19, 23, 24]
        );
        assert_eq!(alexander_torus(2, 3).unwrap().exponents(), &[0, 1, 2]);
        assert_eq!(
            alexander_torus(3, 4).unwrap().coefficients(),
            vec![1, -1, 0, 1, 0, -1, 1]
        );
    }

    #[test]
    fn step_vector_examples() {
        let s = |p, q| step_vector(&alexander_torus(p, q).unwrap()).unwrap();
        assert_eq!(s(3, 4).steps(), &[1, 2, 2, 1]);
        assert_eq!(
            s(5, 7).steps(),
            &[1, 4, 1, 1, 1, 2, 1, 1, 1, 1, 2, 1, 1, 1, 4, 1]
        );
        for p in [3u64, 5, 7, 9, 11] {
            assert_eq!(s(2, p).steps(), vec![1; p as usize - 1].as_slice());
        }
    }

    #[test]
    fn polynomial_validation() {
        assert!(AlexanderPolynomial::new(vec![0, 1, 3]).is_err());
        assert!(AlexanderPolynomial::new(vec![1, 2, 3]).is_err());
        assert!(AlexanderPolynomial::new(vec![0, 1]).is_err());
        assert!(AlexanderPolynomial::new(vec![0, 2, 1]).is_err());
        assert!(AlexanderPolynomial::new(vec![0]).is_ok());
    }

    #[test]
    fn step_vector_validation() {
        assert!(StepVector::new(vec![1, 2]).is_err());
        assert!(StepVector::new(vec![1, 2, 1]).is_err());
        assert!(StepVector::new(vec![1, 0, 0, 1]).is_err());
        assert!(StepVector::new(vec![1, 2, 2, 1]).is_ok());
        assert_eq!(StepVector::new(vec![1, 2, 2, 1]).unwrap().height(), 3);
    }

    #[test]
    fn trivial_parameters() {
        assert!(torus_steps(2, 1).unwrap().is_empty());
        assert!(torus_steps(1, 7).unwrap().is_empty());
        assert_eq!(torus_steps(4, 3).unwrap().steps(), &[1, 2, 2, 1]);
        assert!(torus_steps(4, 6).is_err());
        assert!(torus_steps(2, 2).is_err());
    }
}
