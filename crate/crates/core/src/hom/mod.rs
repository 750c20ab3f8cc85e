//! `Hom(Coker rho1, Coker rho2)` as `Q / I`, where `Q` is the set of
//! matrices `psi` with `psi rho1 = rho2 xi` for some `xi`, and
//! `I = rho2 M(A)`.

mod generators;
mod main_family;
mod search;
mod theorems;

pub use generators::{special_generators_gg, special_generators_hg, verify_special_generators, SpecialGenerators};
pub use main_family::{run_family, FamilyReport, HomEntry, ModuleSummary, NonIsoEntry};
pub use search::{find_iso_witness, SearchOutcome};
pub use theorems::{
    noniso_certificate, scan_idempotents, verify_end_op_iso, verify_end_ring, verify_ext_swap, verify_gg_part_a,
    verify_gg_part_b, verify_hom_g_ab_a, verify_hom_hg, IdempotentScan, Strategy,
};

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    a_span_howell, choose_scope, kernel_basis, kernel_gens, minimal_extension, solve_right, vector_degree, Grading,
    Key, Matrix, Scope, Space,
};
use crate::module::{left_mult_map, right_mult_map, slot_shifts, unvectorize, vectorize, PresentedModule};
use crate::report::{ser_matrices, ser_matrix};
use crate::ring::{Element, Ring};

type Graded = (Vec<Element>, Option<i32>);

/// The linear data behind `Q` and `I` for a pair of presentations.
#[derive(Clone, Debug)]
pub(crate) struct HomProblem {
    pub ring: Ring,
    pub rho1: Matrix,
    pub rho2: Matrix,
    /// Shifts of the slots of `vec psi` (graded backend).
    pub psi_shifts: Option<Vec<i32>>,
    /// `[psi |-> psi rho1 | xi |-> -rho2 xi]`.
    lift: Matrix,
    /// `zeta |-> rho2 zeta`, whose image is `I`.
    pub image: Matrix,
}

impl HomProblem {
    pub fn new(rho1: &Matrix, rho2: &Matrix) -> Result<HomProblem> {
        if rho1.ring() != rho2.ring() {
            return Err(Error::RingMismatch);
        }
        let ring = rho1.ring().clone();
        let (rho1, rho2) = (rho1.clone().graded(), rho2.clone().graded());
        let (m1, n1, m2) = (rho1.nrows(), rho1.ncols(), rho2.nrows());
        let left = right_mult_map(&rho1, m2);
        let right = left_mult_map(&rho2, n1).neg();
        let image = left_mult_map(&rho2, m1);
        let grades = match (ring.is_graded(), rho1.grading(), rho2.grading()) {
            (true, Some(g1), Some(g2)) => Some((g1.clone(), g2.clone())),
            _ => None,
        };
        let (lift, image, psi_shifts) = match grades {
            Some((g1, g2)) => {
                let psi = slot_shifts(&g2.rows, &g1.rows);
                let xi = slot_shifts(&g2.cols, &g1.cols);
                let rows = slot_shifts(&g2.rows, &g1.cols);
                let cols: Vec<i32> = psi.iter().chain(&xi).copied().collect();
                let lift = left.hstack(&right)?.with_grading(Grading { rows, cols })?;
                let image = image.with_grading(Grading { rows: psi.clone(), cols: slot_shifts(&g2.cols, &g1.rows) })?;
                (lift, image, Some(psi))
            }
            None => (left.hstack(&right)?, image, None),
        };
        Ok(HomProblem { ring, rho1, rho2, psi_shifts, lift, image })
    }

    pub fn psi_len(&self) -> usize {
        self.rho2.nrows() * self.rho1.nrows()
    }

    pub fn scope(&self, bound: u32) -> Scope {
        choose_scope(&self.ring, self.psi_shifts.as_deref(), bound)
    }

    pub fn to_matrix(&self, v: &[Element]) -> Matrix {
        unvectorize(&self.ring, v, self.rho2.nrows(), self.rho1.nrows())
    }

    /// Degree of `psi` as a homomorphism (`None` if zero or inhomogeneous).
    pub fn degree(&self, psi: &Matrix) -> Option<i32> {
        vector_degree(&vectorize(psi), self.psi_shifts.as_deref()?)
    }

    pub fn graded_vec(&self, psi: &Matrix) -> Graded {
        (vectorize(psi), self.degree(psi))
    }

    /// `Q` on one slice, as pairs `(psi, xi)`.
    pub fn q_slice(&self, key: Key) -> Vec<(Matrix, Matrix)> {
        let p = self.psi_len();
        let (n2, n1) = (self.rho2.ncols(), self.rho1.ncols());
        kernel_basis(&self.lift, key)
            .into_iter()
            .map(|v| (self.to_matrix(&v[..p]), unvectorize(&self.ring, &v[p..], n2, n1)))
            .filter(|(psi, _)| !psi.is_zero())
            .collect()
    }

    /// Generators of `I` as graded vectors.
    pub fn image_gens(&self) -> Vec<Graded> {
        let shifts = self.image.grading().map(|g| g.cols.clone());
        (0..self.image.ncols())
            .map(|j| (self.image.col(j), shifts.as_ref().map(|s| s[j])))
            .filter(|(v, _)| v.iter().any(|e| !e.is_zero()))
            .collect()
    }

    pub fn psi_space(&self, key: Key) -> Space {
        let zeros = vec![0; self.psi_len()];
        Space::new(&self.ring, self.psi_shifts.as_deref().unwrap_or(&zeros), key)
    }

    /// `psi` is a lifting matrix; returns a lift `xi`.
    pub fn lift_of(&self, psi: &Matrix, bound: u32) -> Result<Option<Matrix>> {
        solve_right(&self.rho2, &psi.mul(&self.rho1)?, bound)
    }

    pub fn in_image(&self, psi: &Matrix, bound: u32) -> Result<bool> {
        Ok(solve_right(&self.rho2, psi, bound)?.is_some())
    }

    /// Columns `vec psi_i` followed by the generators of `I`, graded.
    pub fn combination_matrix(&self, gens: &[Matrix]) -> Result<Matrix> {
        let cols: Vec<Vec<Element>> = gens.iter().map(vectorize).collect();
        let psi = Matrix::from_cols(&self.ring, self.psi_len(), &cols);
        let m = psi.hstack(&self.image.clone().without_grading())?;
        match (&self.psi_shifts, self.image.grading()) {
            (Some(rows), Some(g)) => {
                let mut c: Vec<i32> = gens.iter().map(|p| self.degree(p).unwrap_or(0)).collect();
                c.extend(&g.cols);
                m.with_grading(Grading { rows: rows.clone(), cols: c })
            }
            _ => Ok(m),
        }
    }

    /// Coefficients `c` with `psi - sum c_i gens_i in I`.
    pub fn coordinates(&self, gens: &[Matrix], psi: &Matrix, bound: u32) -> Result<Option<Vec<Element>>> {
        let k = self.combination_matrix(gens)?;
        let target = Matrix::column(&self.ring, &vectorize(psi));
        Ok(solve_right(&k, &target, bound)?.map(|s| s.col(0)[..gens.len()].to_vec()))
    }

    /// Every element of `Q` in the scope lies in `span(gens) + I`. Returns
    /// the first counterexample otherwise.
    pub fn q_within_span(&self, gens: &[Matrix], scope: Scope) -> Option<Matrix> {
        let mut span_gens: Vec<Graded> = gens.iter().map(|g| self.graded_vec(g)).collect();
        span_gens.extend(self.image_gens());
        for key in scope.keys() {
            let space = self.psi_space(key);
            let span = a_span_howell(&self.ring, &space, key, &span_gens);
            for (psi, _) in self.q_slice(key) {
                if !span.contains(&space.coords(&vectorize(&psi))) {
                    return Some(psi);
                }
            }
        }
        None
    }
}

/// Generators of `Q / I` with their lifts, and the relations among them:
/// `Hom(Coker rho1, Coker rho2) = Coker(relations)`.
#[derive(Clone, Debug, Serialize)]
pub struct HomPresentation {
    #[serde(serialize_with = "ser_matrix")]
    pub source: Matrix,
    #[serde(serialize_with = "ser_matrix")]
    pub target: Matrix,
    #[serde(serialize_with = "ser_matrices")]
    pub generators: Vec<Matrix>,
    #[serde(serialize_with = "ser_matrices")]
    pub lifts: Vec<Matrix>,
    pub degrees: Vec<Option<i32>>,
    #[serde(serialize_with = "ser_matrix")]
    pub relations: Matrix,
    pub scope: Scope,
}

impl HomPresentation {
    /// The Hom-module as a presented module, graded by generator degrees.
    pub fn module(&self) -> PresentedModule {
        let rel = self.relations.clone();
        match self.degrees.iter().copied().collect::<Option<Vec<i32>>>() {
            Some(d) if self.relations.ring().is_graded() => PresentedModule::new(rel.without_grading())
                .with_shifts(&d)
                .unwrap_or_else(|_| PresentedModule::new(self.relations.clone())),
            _ => PresentedModule::new(rel),
        }
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    /// `sum c_i psi_i`.
    pub fn evaluate(&self, coeffs: &[Element]) -> Matrix {
        let ring = self.source.ring();
        let mut acc = Matrix::zero(ring, self.target.nrows(), self.source.nrows());
        for (c, g) in coeffs.iter().zip(&self.generators) {
            acc = acc.add(&g.scale(c)).expect("same shape");
        }
        acc
    }
}

/// Compute a presentation of `Hom(Coker rho1, Coker rho2)`. Exact on the
/// finite backend; on the graded backend generators and relations are
/// complete in the degrees of the returned scope.
pub fn hom_presentation(rho1: &Matrix, rho2: &Matrix, bound: u32) -> Result<HomPresentation> {
    let hp = HomProblem::new(rho1, rho2)?;
    let ring = &hp.ring;
    let scope = hp.scope(bound);
    let image_gens = hp.image_gens();
    let mut gens: Vec<(Matrix, Matrix, Option<i32>)> = Vec::new();
    for key in scope.keys() {
        let space = hp.psi_space(key);
        let deg = match key {
            Key::Degree(d) => Some(d),
            _ => None,
        };
        let slice = hp.q_slice(key);
        let cands: Vec<Graded> = slice.iter().map(|(p, _)| (vectorize(p), deg)).collect();
        let mut existing = image_gens.clone();
        existing.extend(gens.iter().map(|(p, _, d)| (vectorize(p), *d)));
        for i in minimal_extension(ring, &space, key, &existing, &cands) {
            gens.push((slice[i].0.clone(), slice[i].1.clone(), deg));
        }
    }
    if !ring.is_graded() {
        // an irredundant generating set over a local ring is minimal
        let mut i = gens.len();
        while i > 0 {
            i -= 1;
            let others: Vec<Matrix> =
                gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.0.clone()).collect();
            if hp.coordinates(&others, &gens[i].0, bound)?.is_some() {
                gens.remove(i);
            }
        }
    }
    let generators: Vec<Matrix> = gens.iter().map(|g| g.0.clone()).collect();
    let degrees: Vec<Option<i32>> = gens.iter().map(|g| g.2).collect();
    let relations = relations_among(&hp, &generators, &degrees, bound)?;
    Ok(HomPresentation {
        source: hp.rho1.clone(),
        target: hp.rho2.clone(),
        lifts: gens.iter().map(|g| g.1.clone()).collect(),
        generators,
        degrees,
        relations,
        scope,
    })
}

/// Minimal relations among the cosets `[psi_i]`.
fn relations_among(hp: &HomProblem, gens: &[Matrix], degrees: &[Option<i32>], bound: u32) -> Result<Matrix> {
    let ring = &hp.ring;
    let g = gens.len();
    let k = hp.combination_matrix(gens)?;
    let mut cands: Vec<Graded> = kernel_gens(&k, bound)?
        .into_iter()
        .map(|v| v[..g].to_vec())
        .filter(|v| v.iter().any(|e| !e.is_zero()))
        .map(|v| {
            let d = degrees.iter().copied().collect::<Option<Vec<i32>>>().and_then(|s| vector_degree(&v, &s));
            (v, d)
        })
        .collect();
    cands.sort_by_key(|c| c.1);
    let shifts: Vec<i32> = degrees.iter().map(|d| d.unwrap_or(0)).collect();
    let mut chosen: Vec<Graded> = Vec::new();
    for cand in cands {
        let key = match cand.1 {
            Some(d) if ring.is_graded() => Key::Degree(d),
            _ if ring.is_graded() => {
                chosen.push(cand);
                continue;
            }
            _ => Key::Whole,
        };
        let space = Space::new(ring, &shifts, key);
        if minimal_extension(ring, &space, key, &chosen, std::slice::from_ref(&cand)).is_empty() {
            continue;
        }
        chosen.push(cand);
    }
    let cols: Vec<Vec<Element>> = chosen.iter().map(|c| c.0.clone()).collect();
    let rel = Matrix::from_cols(ring, g, &cols);
    match degrees.iter().copied().collect::<Option<Vec<i32>>>() {
        Some(rows) if ring.is_graded() => {
            let cdeg: Option<Vec<i32>> = chosen.iter().map(|c| c.1).collect();
            match cdeg {
                Some(c) => rel.with_grading(Grading { rows, cols: c }),
                None => Ok(rel),
            }
        }
        _ => Ok(rel),
    }
}

/// Canonical coset representatives of `A^m / im rho` over a finite ring,
/// computed by brute force (independently of the Howell solver).
pub(crate) struct CosetTable {
    ring: Ring,
    space: Space,
    image: BTreeSet<Vec<u64>>,
    modulus: u64,
}

impl CosetTable {
    pub fn new(rho: &Matrix, budget: usize) -> Result<CosetTable> {
        let ring = rho.ring().clone();
        if ring.is_graded() {
            return Err(Error::WrongBackend("finite"));
        }
        let carrier = ring.enumerate_carrier()?;
        let n = rho.ncols();
        let count = (carrier.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if count > budget as u128 {
            return Err(Error::TooLarge(format!("{count} combinations of relations")));
        }
        let space = Space::new(&ring, &vec![0; rho.nrows()], Key::Whole);
        let mut image = BTreeSet::new();
        let mut idx = vec![0usize; n];
        loop {
            let coeffs: Vec<Element> = idx.iter().map(|&i| carrier[i].clone()).collect();
            image.insert(space.coords(&rho.apply(&coeffs)?));
            let mut i = 0;
            loop {
                if i == n {
                    let modulus = ring.zn().n;
                    return Ok(CosetTable { ring, space, image, modulus });
                }
                idx[i] += 1;
                if idx[i] < carrier.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    /// Lexicographically least element of `v + im rho`.
    pub fn canonical(&self, v: &[Element]) -> Vec<u64> {
        let c = self.space.coords(v);
        self.image
            .iter()
            .map(|w| c.iter().zip(w).map(|(a, b)| (a + b) % self.modulus).collect::<Vec<u64>>())
            .min()
            .expect("image contains zero")
    }

    pub fn in_image(&self, v: &[Element]) -> bool {
        self.image.contains(&self.space.coords(v))
    }

    /// All canonical representatives.
    pub fn classes(&self, rank: usize) -> Result<BTreeSet<Vec<u64>>> {
        let carrier = self.ring.enumerate_carrier()?;
        let mut out = BTreeSet::new();
        let mut idx = vec![0usize; rank];
        loop {
            let v: Vec<Element> = idx.iter().map(|&i| carrier[i].clone()).collect();
            out.insert(self.canonical(&v));
            let mut i = 0;
            loop {
                if i == rank {
                    return Ok(out);
                }
                idx[i] += 1;
                if idx[i] < carrier.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    pub fn vector(&self, c: &[u64]) -> Vec<Element> {
        self.space.vector(&self.ring, c)
    }
}

/// A homomorphism `Coker rho1 -> Coker rho2`, recorded as the canonical
/// coset representatives of the images of the generators.
pub type HomTuple = Vec<Vec<u64>>;

/// All homomorphisms `Coker rho1 -> Coker rho2` over a finite ring, found by
/// enumerating generator images and keeping the well-defined assignments.
pub fn brute_force_hom_oracle(rho1: &Matrix, rho2: &Matrix, budget: usize) -> Result<BTreeSet<HomTuple>> {
    let table = CosetTable::new(rho2, budget)?;
    let classes: Vec<Vec<u64>> = table.classes(rho2.nrows())?.into_iter().collect();
    let m1 = rho1.nrows();
    let count = (classes.len() as u128).checked_pow(m1 as u32).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(Error::TooLarge(format!("{count} candidate generator images")));
    }
    let images: Vec<Vec<Element>> = classes.iter().map(|c| table.vector(c)).collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; m1];
    loop {
        let ok = (0..rho1.ncols()).all(|j| {
            let mut acc = vec![rho2.ring().zero(); rho2.nrows()];
            for (l, &i) in idx.iter().enumerate() {
                let c = rho1.get(l, j);
                for (a, e) in acc.iter_mut().zip(&images[i]) {
                    *a = &*a + &(c * e);
                }
            }
            table.in_image(&acc)
        });
        if ok {
            out.insert(idx.iter().map(|&i| classes[i].clone()).collect());
        }
        let mut i = 0;
        loop {
            if i == m1 {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < classes.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// The homomorphisms represented by `A`-combinations of the generators of a
/// presentation, in the oracle's format.
pub fn evaluation_set(hp: &HomPresentation, budget: usize) -> Result<BTreeSet<HomTuple>> {
    let ring = hp.source.ring();
    let table = CosetTable::new(&hp.target, budget)?;
    let carrier = ring.enumerate_carrier()?;
    let g = hp.ngens();
    let count = (carrier.len() as u128).checked_pow(g as u32).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(Error::TooLarge(format!("{count} coefficient vectors")));
    }
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; g];
    loop {
        let coeffs: Vec<Element> = idx.iter().map(|&i| carrier[i].clone()).collect();
        let psi = hp.evaluate(&coeffs);
        out.insert((0..psi.ncols()).map(|l| table.canonical(&psi.col(l))).collect());
        let mut i = 0;
        loop {
            if i == g {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < carrier.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// `log_p |Hom|` (finite) or the Hilbert function of the Hom-module on the
/// degrees of its scope (graded).
pub fn hom_lengths(hp: &HomPresentation) -> Result<BTreeMap<Option<i32>, u32>> {
    let m = hp.module();
    let mut out = BTreeMap::new();
    match hp.scope {
        Scope::Exhaustive => {
            out.insert(None, m.length()?);
        }
        Scope::Degrees { lo, hi } => {
            for d in lo..=hi {
                out.insert(Some(d), m.hilbert_function(d)?);
            }
        }
        Scope::Truncated { .. } => {}
    }
    Ok(out)
}
