#![allow(dead_code)]

pub mod oracle;

use upsilon_core::complex::{dual, staircase_complex, tensor};
use upsilon_core::semigroup::torus_steps;
use upsilon_core::upsilon::sector;
use upsilon_core::BifilteredComplex;

pub fn torus(p: u64, q: u64) -> BifilteredComplex {
    staircase_complex(&torus_steps(p, q).unwrap())
}

pub fn mirror(c: &BifilteredComplex) -> BifilteredComplex {
    dual(c).unwrap()
}

pub fn sum(c: &BifilteredComplex, d: &BifilteredComplex) -> BifilteredComplex {
    tensor(c, d)
}

pub fn coprime(a: u64, b: u64) -> bool {
    num_integer::gcd(a, b) == 1
}

/// Every complex reachable from small torus knots, mirrors and one tensor
/// whose grading-0 sector has at most `limit` elements.
pub fn small_complexes(limit: usize) -> Vec<(String, BifilteredComplex)> {
    let mut base = Vec::new();
    for p in 2..=13u64 {
        for q in p + 1..=25 {
            if coprime(p, q) {
                let c = torus(p, q);
                if sector(&c, 0).len() <= limit {
                    base.push((format!("T({p},{q})"), c));
                }
            }
        }
    }
    let mut out = base.clone();
    for (name, c) in &base {
        out.push((format!("-{name}"), mirror(c)));
    }
    let signed = out.clone();
    for (i, (a, c)) in signed.iter().enumerate() {
        for (b, d) in &signed[i..] {
            let t = sum(c, d);
            if sector(&t, 0).len() <= limit {
                out.push((format!("{a} # {b}"), t));
            }
        }
    }
    out
}
