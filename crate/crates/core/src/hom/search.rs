//! Search for an explicit isomorphism between two presented modules.
//!
//! Candidates `f: M -> N` are drawn from `Q / I` (all of it on the finite
//! backend, one degree slice at a time on the graded one). A candidate
//! that is surjective modulo the maximal ideal is inverted by solving
//! `p q + rho_N h = 1`, and the result is checked exactly. A failed search
//! proves nothing.

use serde::Serialize;

use super::HomProblem;
use crate::error::{Error, Result};
use crate::howell::Howell;
use crate::linalg::{minimal_extension, solve_right, vector_degree, Grading, Key, Matrix};
use crate::module::{residue_rank, vectorize, IsoWitness, PresentedModule};
use crate::ring::Element;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found { witness: IsoWitness, degree: Option<i32>, tried: usize },
    NotFound { reason: String, tried: usize },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&IsoWitness> {
        match self {
            SearchOutcome::Found { witness, .. } => Some(witness),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

fn try_candidate(
    m: &PresentedModule,
    n: &PresentedModule,
    p: &Matrix,
    bound: u32,
) -> Result<Option<IsoWitness>> {
    let rn = n.presentation();
    let stacked = p.hstack(&rn.clone().without_grading())?.without_grading();
    if residue_rank(&stacked) < n.ngens() {
        return Ok(None);
    }
    // grade [p | rho_N] by the degrees of the images of M's generators
    let stacked = match (n.shifts(), rn.grading()) {
        (Some(rows), Some(g)) => {
            let degs: Option<Vec<i32>> = (0..p.ncols())
                .map(|j| {
                    let c = p.col(j);
                    if c.iter().all(Element::is_zero) {
                        m.shifts().map(|s| s[j])
                    } else {
                        vector_degree(&c, rows)
                    }
                })
                .collect();
            match degs {
                Some(mut cols) => {
                    cols.extend(&g.cols);
                    stacked.with_grading(Grading { rows: rows.to_vec(), cols })?
                }
                None => stacked,
            }
        }
        _ => stacked,
    };
    let id = Matrix::identity(p.ring(), n.ngens());
    let x = match solve_right(&stacked, &id, bound) {
        Ok(Some(x)) => x,
        Ok(None) | Err(Error::NonHomogeneous(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let q = Matrix::from_fn(p.ring(), m.ngens(), n.ngens(), |i, j| x.get(i, j).clone());
    match IsoWitness::by_solving(m, n, p.clone(), q, bound) {
        Err(Error::NonHomogeneous(_)) => Ok(None),
        other => other,
    }
}

/// Enumerate the nonzero `F_p`-combinations of `basis`, stopping at the
/// first candidate that completes to a witness.
fn enumerate(
    m: &PresentedModule,
    n: &PresentedModule,
    basis: &[Matrix],
    bound: u32,
    tried: &mut usize,
) -> Result<Option<IsoWitness>> {
    let ring = m.ring();
    let p = ring.residue_char();
    let mut digits = vec![0u64; basis.len()];
    loop {
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(None);
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        let mut cand = Matrix::zero(ring, n.ngens(), m.ngens());
        for (c, b) in digits.iter().zip(basis) {
            if *c != 0 {
                cand = cand.add(&b.scale(&ring.from_int(*c as i64)))?;
            }
        }
        *tried += 1;
        if let Some(w) = try_candidate(m, n, &cand, bound)? {
            return Ok(Some(w));
        }
    }
}

/// Look for an isomorphism `M -> N`. At most `budget` candidates are
/// enumerated per stage.
///
/// Any surjection between isomorphic finitely generated modules is an
/// isomorphism, and surjectivity only depends on the map modulo the
/// maximal ideal. On the graded backend the candidates are therefore
/// combinations of those basis elements of `Q_d / I_d` that have a unit
/// entry, first within each degree `d` and then across degrees (summands of
/// a decomposable module may sit in different degrees).
pub fn find_iso_witness(
    m: &PresentedModule,
    n: &PresentedModule,
    bound: u32,
    budget: usize,
) -> Result<SearchOutcome> {
    let hp = HomProblem::new(m.presentation(), n.presentation())?;
    let ring = &hp.ring;
    let mut tried = 0usize;
    if !ring.is_graded() {
        let key = Key::Whole;
        let space = hp.psi_space(key);
        let rows: Vec<Vec<u64>> =
            hp.q_slice(key).iter().map(|(psi, _)| space.coords(&vectorize(psi))).collect();
        let q = Howell::new(ring.zn(), space.dim(), rows);
        let Some(elements) = q.elements(budget) else {
            return Ok(SearchOutcome::NotFound { reason: "Q exceeds the search budget".into(), tried });
        };
        for c in elements {
            let p = hp.to_matrix(&space.vector(ring, &c));
            tried += 1;
            if let Some(w) = try_candidate(m, n, &p, bound)? {
                return Ok(SearchOutcome::Found { witness: w, degree: None, tried });
            }
        }
        return Ok(SearchOutcome::NotFound { reason: "no element of Q is an isomorphism".into(), tried });
    }
    let Some(shifts) = hp.psi_shifts.clone() else {
        return Ok(SearchOutcome::NotFound { reason: "presentations are not graded".into(), tried });
    };
    // unit entries only occur in these degrees
    let mut degrees = shifts;
    degrees.sort();
    degrees.dedup();
    let image_gens = hp.image_gens();
    let p = ring.residue_char() as u128;
    let within = |k: usize| p.checked_pow(k as u32).is_some_and(|c| c <= budget as u128);
    let mut per_degree: Vec<(i32, Vec<Matrix>)> = Vec::new();
    for d in degrees {
        let key = Key::Degree(d);
        let space = hp.psi_space(key);
        let slice: Vec<(Vec<Element>, Option<i32>)> =
            hp.q_slice(key).into_iter().map(|(p, _)| (vectorize(&p), Some(d))).collect();
        let basis: Vec<Matrix> = minimal_extension(ring, &space, key, &image_gens, &slice)
            .into_iter()
            .map(|i| hp.to_matrix(&slice[i].0))
            .filter(|b| b.residue().iter().flatten().any(|&c| c != 0))
            .collect();
        if !basis.is_empty() {
            per_degree.push((d, basis));
        }
    }
    let mut over_budget = false;
    for (d, basis) in &per_degree {
        if !within(basis.len()) {
            over_budget = true;
            continue;
        }
        if let Some(w) = enumerate(m, n, basis, bound, &mut tried)? {
            return Ok(SearchOutcome::Found { witness: w, degree: Some(*d), tried });
        }
    }
    if per_degree.len() > 1 {
        let all: Vec<Matrix> = per_degree.iter().flat_map(|(_, b)| b.iter().cloned()).collect();
        if within(all.len()) {
            if let Some(w) = enumerate(m, n, &all, bound, &mut tried)? {
                return Ok(SearchOutcome::Found { witness: w, degree: None, tried });
            }
        } else {
            over_budget = true;
        }
    }
    let reason = if over_budget {
        "no isomorphism among the enumerated candidates; some stages exceeded the budget"
    } else {
        "no enumerated candidate completed to an isomorphism"
    };
    Ok(SearchOutcome::NotFound { reason: reason.into(), tried })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::verify_iso_by_witness;
    use crate::ring::Ring;

    #[test]
    fn finds_twist_and_rejects_non_iso() {
        let r = Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap();
        let m = |s: &str| PresentedModule::new(Matrix::parse_literal(&r, s).unwrap());
        let g_z = m("[[x, z], [0, y]]");
        let g_2z = m("[[x, 2*z], [0, y]]");
        let out = find_iso_witness(&g_2z, &g_z, 4, 1 << 12).unwrap();
        let w = out.witness().expect("G_2z = G_z");
        assert!(verify_iso_by_witness(&g_2z, &g_z, w).passed());
        let h_z = m("[[y, -z], [0, x]]");
        assert!(find_iso_witness(&g_z, &h_z, 4, 1 << 12).unwrap().witness().is_none());
    }

    #[test]
    fn free_module_with_redundant_presentation() {
        let r = Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap();
        let h1 = PresentedModule::new(Matrix::parse_literal(&r, "[[y, -1], [0, x]]").unwrap());
        let a = PresentedModule::free(&r, 1);
        let out = find_iso_witness(&a, &h1, 4, 1 << 12).unwrap();
        assert!(verify_iso_by_witness(&a, &h1, out.witness().unwrap()).passed());
    }

    #[test]
    fn finite_search() {
        let z9 = Ring::z_mod(3, 2).unwrap();
        let m = |s: &str| PresentedModule::new(Matrix::parse_literal(&z9, s).unwrap());
        let out = find_iso_witness(&m("[[3, 3], [0, 3]]"), &m("[[3, 0], [0, 3]]"), 0, 1 << 14).unwrap();
        assert!(out.witness().is_some());
        let out = find_iso_witness(&m("[[3, 0], [0, 0]]"), &m("[[3, 0], [0, 3]]"), 0, 1 << 14).unwrap();
        assert!(out.witness().is_none());
    }

    #[test]
    fn decomposable_target_needs_mixed_degrees() {
        // Hom(H_z, H_0) has its generators in degrees 1 and 0, H_0 in 0 and 0
        let r = Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap();
        let m = |s: &str| PresentedModule::new(Matrix::parse_literal(&r, s).unwrap());
        let h_0 = m("[[y, 0], [0, x]]").with_shifts(&[0, 0]).unwrap();
        let hom = crate::hom::hom_presentation(m("[[y, -z], [0, x]]").presentation(), h_0.presentation(), 6).unwrap();
        let hom = hom.module();
        let out = find_iso_witness(&hom, &h_0, 6, 1 << 12).unwrap();
        assert!(out.witness().is_some(), "{out:?}");
    }
}
