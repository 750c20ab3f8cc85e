//! Ideals given by generators: annihilators and membership.

use serde::Serialize;

use super::Element;
use crate::error::{Error, Result};
use crate::linalg::{kernel_gens, solve_right, Matrix, Scope};

/// Finitely many nonzero generators, with the scope at which they are known
/// to generate.
#[derive(Clone, Debug, Serialize)]
pub struct IdealGenerators {
    #[serde(serialize_with = "crate::report::ser_elements")]
    pub gens: Vec<Element>,
    pub scope: Scope,
}

impl IdealGenerators {
    pub fn new(gens: Vec<Element>, scope: Scope) -> Self {
        IdealGenerators { gens: gens.into_iter().filter(|g| !g.is_zero()).collect(), scope }
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, e: &Element, bound: u32) -> Result<bool> {
        Ok(ideal_membership(e, &self.gens, bound)?.member)
    }

    /// Mutual containment of generators.
    pub fn same_ideal(&self, other: &IdealGenerators, bound: u32) -> Result<bool> {
        for g in &self.gens {
            if !other.contains(g, bound)? {
                return Ok(false);
            }
        }
        for g in &other.gens {
            if !self.contains(g, bound)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    /// Coefficients `c_i` with `e = sum c_i g_i`.
    pub witness: Option<Vec<Element>>,
}

/// `Ann(e)`: exact on the finite backend, generators up to degree `bound` on
/// the graded backend (which requires `e` homogeneous).
pub fn annihilator(e: &Element, bound: u32) -> Result<IdealGenerators> {
    let ring = e.ring();
    if ring.is_graded() && !e.is_homogeneous() {
        return Err(Error::NonHomogeneous(e.to_string()));
    }
    let m = Matrix::from_rows(ring, vec![vec![e.clone()]])?.graded();
    let gens = kernel_gens(&m, bound)?;
    let scope = if ring.is_graded() {
        Scope::Degrees { lo: 0, hi: bound as i32 }
    } else {
        Scope::Exhaustive
    };
    Ok(IdealGenerators::new(gens.into_iter().map(|mut v| v.remove(0)).collect(), scope))
}

/// Decide `e in (gens)`, with a witness when it holds.
pub fn ideal_membership(e: &Element, gens: &[Element], bound: u32) -> Result<Membership> {
    let ring = e.ring();
    let row = if gens.is_empty() {
        Matrix::zero(ring, 1, 0)
    } else {
        Matrix::from_rows(ring, vec![gens.to_vec()])?
    };
    let target = Matrix::from_rows(ring, vec![vec![e.clone()]])?;
    let sol = solve_right(&row, &target, bound)?;
    Ok(Membership {
        member: sol.is_some(),
        witness: sol.map(|m| m.col(0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn a() -> Ring {
        Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap()
    }

    #[test]
    fn annihilators() {
        let z9 = Ring::z_mod(3, 2).unwrap();
        let ann = annihilator(&z9.from_int(3), 0).unwrap();
        assert_eq!(ann.gens.len(), 1);
        assert!(ann.same_ideal(&IdealGenerators::new(vec![z9.from_int(3)], Scope::Exhaustive), 0).unwrap());
        assert!(annihilator(&z9.one(), 0).unwrap().is_zero());

        let r = a();
        let ann = annihilator(&r.parse("x").unwrap(), 6).unwrap();
        assert_eq!(ann.gens, vec![r.parse("y").unwrap()]);
    }

    #[test]
    fn membership() {
        let z9 = Ring::z_mod(3, 2).unwrap();
        let m = ideal_membership(&z9.from_int(6), &[z9.from_int(3)], 0).unwrap();
        assert!(m.member);
        assert_eq!(&m.witness.unwrap()[0] * &z9.from_int(3), z9.from_int(6));

        let r = a();
        let p = |s: &str| r.parse(s).unwrap();
        assert!(!ideal_membership(&p("z"), &[p("x"), p("y"), p("z^2")], 4).unwrap().member);
        let m = ideal_membership(&p("x*z"), &[p("x")], 4).unwrap();
        assert_eq!(m.witness.unwrap(), vec![p("z")]);
        assert!(ideal_membership(&p("x + z^2"), &[p("x"), p("z")], 4).unwrap().member);
    }
}
