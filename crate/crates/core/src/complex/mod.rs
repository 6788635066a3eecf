//! Bifiltered GF(2) chain complexes with an implicit `U`-action.
//!
//! A [`BifilteredComplex`] stores one fundamental copy of a basis over
//! `F[U, U^-1]`. The translates `U^k x`, shifted by `(-k, -k)` in filtration
//! and `-2k` in Maslov grading, are never stored; see [`crate::upsilon::sector`].

mod expr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2linalg::{solve, BitVec, EchelonBasis};
use crate::semigroup::StepVector;
use crate::upsilon::{sector, sector_boundary};

pub use expr::{parse_knot_expression, KnotExpr};

/// One basis element over `F[U, U^-1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub id: usize,
    pub alg: i64,
    pub alex: i64,
    pub maslov: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawComplex", into = "RawComplex")]
pub struct BifilteredComplex {
    generators: Vec<Generator>,
    /// `boundary[g]` lists the generators in `d(g)`, sorted.
    boundary: Vec<Vec<usize>>,
    /// Even-graded generators whose grading-0 translates sum to a cycle
    /// generating `H_0`.
    h0_rep: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawComplex {
    generators: Vec<Generator>,
    boundary: Vec<Vec<usize>>,
    h0_rep: Vec<usize>,
}

impl TryFrom<RawComplex> for BifilteredComplex {
    type Error = Error;

    fn try_from(raw: RawComplex) -> Result<Self> {
        if raw.generators.iter().enumerate().any(|(i, g)| g.id != i) {
            return Err(Error::InvalidInput(
                "generator ids must be 0, 1, 2, ... in order".into(),
            ));
        }
        let c = BifilteredComplex::from_parts(raw.generators, raw.boundary, raw.h0_rep)?;
        c.validate_h0()?;
        Ok(c)
    }
}

impl From<BifilteredComplex> for RawComplex {
    fn from(c: BifilteredComplex) -> Self {
        RawComplex {
            generators: c.generators,
            boundary: c.boundary,
            h0_rep: c.h0_rep,
        }
    }
}

impl BifilteredComplex {
    /// Assembles a complex, checking `d^2 = 0`, that `d` lowers the grading
    /// by one without raising either filtration, and that `h0_rep` is a
    /// grading-0 cycle.
    pub fn from_parts(
        generators: Vec<Generator>,
        mut boundary: Vec<Vec<usize>>,
        mut h0_rep: Vec<usize>,
    ) -> Result<Self> {
        let n = generators.len();
        if boundary.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: boundary.len(),
            });
        }
        for (g, targets) in boundary.iter_mut().enumerate() {
            targets.sort_unstable();
            if targets.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!(
                    "boundary of generator {g} repeats a target"
                )));
            }
            let src = &generators[g];
            for &t in targets.iter() {
                let Some(dst) = generators.get(t) else {
                    return Err(Error::InvalidInput(format!(
                        "boundary of generator {g} names unknown generator {t}"
                    )));
                };
                if dst.maslov != src.maslov - 1 {
                    return Err(Error::InvalidInput(format!(
                        "boundary {g} -> {t} does not lower the grading by one"
                    )));
                }
                if dst.alg > src.alg || dst.alex > src.alex {
                    return Err(Error::InvalidInput(format!(
                        "boundary {g} -> {t} raises a filtration level"
                    )));
                }
            }
        }
        h0_rep.sort_unstable();
        h0_rep.dedup();
        if h0_rep.is_empty() {
            return Err(Error::InvalidInput("H_0 representative is empty".into()));
        }
        if let Some(&g) = h0_rep
            .iter()
            .find(|&&g| g >= n || generators[g].maslov.rem_euclid(2) != 0)
        {
            return Err(Error::InvalidInput(format!(
                "H_0 representative uses generator {g}, which has no grading-0 translate"
            )));
        }
        let c = Self {
            generators,
            boundary,
            h0_rep,
        };
        c.check_square_zero()?;
        if !c.boundary_of(&c.h0_rep).is_empty() {
            return Err(Error::InvalidInput("H_0 representative is not a cycle".into()));
        }
        Ok(c)
    }

    fn check_square_zero(&self) -> Result<()> {
        for g in 0..self.len() {
            let dd = self.boundary_of(&self.boundary[g]);
            if !dd.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "d^2 != 0 on generator {g}"
                )));
            }
        }
        Ok(())
    }

    /// Boundary of a sum of generators, as a sorted list (mod 2).
    pub fn boundary_of(&self, chain: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = chain
            .iter()
            .flat_map(|&g| self.boundary[g].iter().copied())
            .collect();
        out.sort_unstable();
        let mut reduced = Vec::with_capacity(out.len());
        let mut i = 0;
        while i < out.len() {
            let mut j = i;
            while j < out.len() && out[j] == out[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                reduced.push(out[i]);
            }
            i = j;
        }
        reduced
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn boundary(&self, g: usize) -> &[usize] {
        &self.boundary[g]
    }

    pub fn h0_rep(&self) -> &[usize] {
        &self.h0_rep
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The one-generator complex of the unknot.
    pub fn trivial() -> Self {
        staircase_complex(&StepVector::trivial())
    }

    /// Checks that `h0_rep` is not a boundary and that grading-0 homology is
    /// one-dimensional.
    pub fn validate_h0(&self) -> Result<()> {
        let (basis, cycles) = grading_zero_homology(self)?;
        let rank = quotient_rank(&basis, &cycles)?;
        if rank != 1 {
            return Err(Error::UnsupportedComplex(format!(
                "grading-0 homology has dimension {rank}, expected 1"
            )));
        }
        let s0 = sector(self, 0);
        let h0 = BitVec::from_indices(
            s0.len(),
            self.h0_rep.iter().map(|&g| s0.position(g).expect("even generator")),
        );
        if basis.contains(&h0)? {
            return Err(Error::UnsupportedComplex(
                "H_0 representative is a boundary".into(),
            ));
        }
        Ok(())
    }
}

/// Image of `d: C_1 -> C_0` (as an echelon basis over the grading-0 sector)
/// and a basis of the grading-0 cycles.
fn grading_zero_homology(c: &BifilteredComplex) -> Result<(EchelonBasis, Vec<BitVec>)> {
    let s1 = sector(c, 1);
    let s0 = sector(c, 0);
    let sm1 = sector(c, -1);
    let d_in = sector_boundary(c, &s1, &s0);
    let d_out = sector_boundary(c, &s0, &sm1);
    let mut boundaries = EchelonBasis::new(s0.len());
    for col in 0..d_in.cols() {
        boundaries.insert(&d_in.column(col))?;
    }
    let cycles = solve(&d_out, &BitVec::zeros(sm1.len()))?.kernel_basis;
    Ok((boundaries, cycles))
}

fn quotient_rank(boundaries: &EchelonBasis, cycles: &[BitVec]) -> Result<usize> {
    let mut all = boundaries.clone();
    let before = all.rank();
    for z in cycles {
        all.insert(z)?;
    }
    Ok(all.rank() - before)
}

/// A grading-0 cycle that is not a boundary, as a list of even generators.
/// Fails unless grading-0 homology is one-dimensional.
pub fn compute_h0_representative(c: &BifilteredComplex) -> Result<Vec<usize>> {
    let (boundaries, cycles) = grading_zero_homology(c)?;
    let rank = quotient_rank(&boundaries, &cycles)?;
    if rank != 1 {
        return Err(Error::UnsupportedComplex(format!(
            "grading-0 homology has dimension {rank}, expected 1"
        )));
    }
    let s0 = sector(c, 0);
    for z in cycles {
        if !boundaries.contains(&z)? {
            return Ok(z.ones().map(|i| s0.elements()[i].generator).collect());
        }
    }
    unreachable!("quotient rank is one")
}

/// Staircase complex: the lattice path from `(0, V)` to `(V, 0)` taking the
/// given steps alternately right and down. Even positions along the path are
/// grading-0 vertices; odd positions are grading-1 corners whose boundary is
/// the sum of the two adjacent vertices.
pub fn staircase_complex(steps: &StepVector) -> BifilteredComplex {
    let mut alg = 0i64;
    let mut alex = steps.height() as i64;
    let mut generators = vec![Generator {
        id: 0,
        alg,
        alex,
        maslov: 0,
    }];
    for (k, &len) in steps.steps().iter().enumerate() {
        if k % 2 == 0 {
            alg += len as i64;
        } else {
            alex -= len as i64;
        }
        let id = generators.len();
        generators.push(Generator {
            id,
            alg,
            alex,
            maslov: if id % 2 == 0 { 0 } else { 1 },
        });
    }
    let n = generators.len();
    let boundary = (0..n)
        .map(|i| if i % 2 == 1 { vec![i - 1, i + 1] } else { vec![] })
        .collect();
    BifilteredComplex::from_parts(generators, boundary, vec![0])
        .expect("staircases are valid complexes")
}

/// Tensor product over `F[U, U^-1]`. Generator `x (x) y` gets id
/// `x * |D| + y`.
pub fn tensor(c: &BifilteredComplex, d: &BifilteredComplex) -> BifilteredComplex {
    let m = d.len();
    let mut generators = Vec::with_capacity(c.len() * m);
    let mut boundary = Vec::with_capacity(c.len() * m);
    for x in c.generators() {
        for y in d.generators() {
            generators.push(Generator {
                id: x.id * m + y.id,
                alg: x.alg + y.alg,
                alex: x.alex + y.alex,
                maslov: x.maslov + y.maslov,
            });
            let mut targets: Vec<usize> = c.boundary[x.id]
                .iter()
                .map(|&x2| x2 * m + y.id)
                .chain(d.boundary[y.id].iter().map(|&y2| x.id * m + y2))
                .collect();
            targets.sort_unstable();
            boundary.push(targets);
        }
    }
    let h0_rep = c
        .h0_rep
        .iter()
        .flat_map(|&x| d.h0_rep.iter().map(move |&y| x * m + y))
        .collect();
    let out = BifilteredComplex::from_parts(generators, boundary, h0_rep)
        .expect("tensor of valid complexes is valid");
    debug_assert!(out.validate_h0().is_ok());
    out
}

/// Dual complex: filtration and grading negated, arrows reversed, and a new
/// `H_0` representative computed.
pub fn dual(c: &BifilteredComplex) -> Result<BifilteredComplex> {
    let generators = c
        .generators
        .iter()
        .map(|g| Generator {
            id: g.id,
            alg: -g.alg,
            alex: -g.alex,
            maslov: -g.maslov,
        })
        .collect();
    let mut boundary = vec![Vec::new(); c.len()];
    for (x, targets) in c.boundary.iter().enumerate() {
        for &y in targets {
            boundary[y].push(x);
        }
    }
    let even: Vec<usize> = c
        .generators
        .iter()
        .filter(|g| g.maslov.rem_euclid(2) == 0)
        .map(|g| g.id)
        .collect();
    // Provisional representative only needs to satisfy the cycle check.
    let provisional = BifilteredComplex {
        generators,
        boundary,
        h0_rep: even,
    };
    provisional.check_square_zero()?;
    let h0_rep = compute_h0_representative(&provisional)?;
    BifilteredComplex::from_parts(provisional.generators, provisional.boundary, h0_rep)
}

/// Direct sum with the acyclic two-generator complex `d b = a`, where `b`
/// sits at the corner and `a` at `corner - (width, height)`.
pub fn direct_sum_with_box(
    c: &BifilteredComplex,
    corner_alg: i64,
    corner_alex: i64,
    width: u64,
    height: u64,
    top_maslov: i64,
) -> Result<BifilteredComplex> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidInput("box sides must be positive".into()));
    }
    let n = c.len();
    let mut generators = c.generators.clone();
    let mut boundary = c.boundary.clone();
    generators.push(Generator {
        id: n,
        alg: corner_alg,
        alex: corner_alex,
        maslov: top_maslov,
    });
    generators.push(Generator {
        id: n + 1,
        alg: corner_alg - width as i64,
        alex: corner_alex - height as i64,
        maslov: top_maslov - 1,
    });
    boundary.push(vec![n + 1]);
    boundary.push(vec![]);
    BifilteredComplex::from_parts(generators, boundary, c.h0_rep.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::torus_steps;

    fn coords(c: &BifilteredComplex) -> Vec<(i64, i64, i64)> {
        c.generators()
            .iter()
            .map(|g| (g.alg, g.alex, g.maslov))
            .collect()
    }

    fn torus(p: u64, q: u64) -> BifilteredComplex {
        staircase_complex(&torus_steps(p, q).unwrap())
    }

    #[test]
    fn t34_staircase() {
        let c = torus(3, 4);
        assert_eq!(
            coords(&c),
            vec![(0, 3, 0), (1, 3, 1), (1, 1, 0), (3, 1, 1), (3, 0, 0)]
        );
        assert_eq!(c.boundary(1), &[0, 2]);
        assert_eq!(c.h0_rep(), &[0]);
    }

    #[test]
    fn t57_staircase_passes_through_pivots() {
        let c = torus(5, 7);
        let pts: Vec<(i64, i64, i64)> = coords(&c);
        assert!(pts.contains(&(1, 8, 0)));
        assert!(pts.contains(&(3, 5, 0)));
        assert_eq!(c.len(), 17);
    }

    #[test]
    fn t23_staircase() {
        let c = torus(2, 3);
        assert_eq!(coords(&c), vec![(0, 1, 0), (1, 1, 1), (1, 0, 0)]);
        assert_eq!(c.generators().iter().filter(|g| g.maslov == 1).count(), 1);
    }

    #[test]
    fn unit_of_tensor() {
        let c = torus(3, 4);
        let t = tensor(&c, &BifilteredComplex::trivial());
        assert_eq!(t, c);
        let t = tensor(&BifilteredComplex::trivial(), &c);
        assert_eq!(t, c);
    }

    #[test]
    fn tensor_t25_t56_named_elements() {
        let a = torus(2, 5);
        let b = torus(5, 6);
        assert_eq!((a.len(), b.len()), (5, 9));
        let t = tensor(&a, &b);
        assert_eq!(t.len(), 45);
        let find = |x: (i64, i64), y: (i64, i64)| {
            let xi = a.generators().iter().find(|g| (g.alg, g.alex) == x).unwrap().id;
            let yi = b.generators().iter().find(|g| (g.alg, g.alex) == y).unwrap().id;
            xi * b.len() + yi
        };
        let big_a = find((0, 2), (1, 6));
        let g = t.generators()[big_a];
        assert_eq!((g.alg, g.alex, g.maslov), (1, 8, 0));
        let x1 = find((1, 2), (1, 6));
        assert_eq!(
            t.boundary(x1),
            &{
                let mut v = vec![find((0, 2), (1, 6)), find((1, 1), (1, 6))];
                v.sort();
                v
            }[..]
        );
    }

    #[test]
    fn dual_of_t23() {
        let d = dual(&torus(2, 3)).unwrap();
        assert_eq!(coords(&d), vec![(0, -1, 0), (-1, -1, -1), (-1, 0, 0)]);
        assert_eq!(d.h0_rep(), &[0, 2]);
        assert!(d.boundary_of(&[0, 2]).is_empty());
    }

    #[test]
    fn double_dual_is_identity_up_to_h0_class() {
        let c = torus(3, 5);
        let dd = dual(&dual(&c).unwrap()).unwrap();
        assert_eq!(dd.generators(), c.generators());
        for g in 0..c.len() {
            assert_eq!(dd.boundary(g), c.boundary(g));
        }
        // Vertices of a staircase are all homologous.
        assert!(dd.h0_rep().iter().all(|&g| c.generators()[g].maslov == 0));
        assert_eq!(dd.h0_rep().len() % 2, 1);
    }

    #[test]
    fn h0_representative_of_staircase_is_a_single_vertex_class() {
        let c = torus(3, 4);
        let rep = compute_h0_representative(&c).unwrap();
        assert_eq!(rep.len() % 2, 1);
        assert!(c.validate_h0().is_ok());
        // (0,3) and (1,1) differ by the boundary of (1,3).
        assert_eq!(c.boundary_of(&[1]), vec![0, 2]);
    }

    #[test]
    fn box_summand_keeps_validity_and_class() {
        let c = torus(3, 4);
        let b = direct_sum_with_box(&c, 5, 5, 1, 1, 1).unwrap();
        assert_eq!(b.len(), 7);
        assert_eq!(b.boundary(5), &[6]);
        assert!(b.validate_h0().is_ok());
        assert_eq!(b.h0_rep(), c.h0_rep());
        let rep = compute_h0_representative(&b).unwrap();
        assert!(rep.iter().all(|&g| g < 5));
        assert!(direct_sum_with_box(&c, 0, 0, 0, 1, 1).is_err());
    }

    #[test]
    fn rejects_invalid_parts() {
        let g = |id, alg, alex, maslov| Generator {
            id,
            alg,
            alex,
            maslov,
        };
        // boundary raises filtration
        assert!(BifilteredComplex::from_parts(
            vec![g(0, 0, 0, 0), g(1, 0, 0, 1), g(2, 1, 0, 0)],
            vec![vec![], vec![0, 2], vec![]],
            vec![0]
        )
        .is_err());
        // wrong grading drop
        assert!(BifilteredComplex::from_parts(
            vec![g(0, 0, 0, 0), g(1, 1, 1, 2)],
            vec![vec![], vec![0]],
            vec![0]
        )
        .is_err());
        // h0 not a cycle
        assert!(BifilteredComplex::from_parts(
            vec![g(0, 0, 0, 0), g(1, 0, 0, -1)],
            vec![vec![1], vec![]],
            vec![0]
        )
        .is_err());
        // d^2 != 0
        assert!(BifilteredComplex::from_parts(
            vec![g(0, 2, 2, 2), g(1, 1, 1, 1), g(2, 0, 0, 0)],
            vec![vec![1], vec![2], vec![]],
            vec![2]
        )
        .is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = torus(3, 4);
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.starts_with(r#"{"generators":[{"id":0,"alg":0,"alex":3,"maslov":0}"#));
        let back: BifilteredComplex = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let broken = text.replace(r#""h0_rep":[0]"#, r#""h0_rep":[1]"#);
        assert!(serde_json::from_str::<BifilteredComplex>(&broken).is_err());
    }
}
