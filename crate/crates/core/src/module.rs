//! Finitely presented modules `Coker(rho: A^n -> A^m)`.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::howell::{Howell, Zn};
use crate::linalg::{
    check_exact_at, choose_scope, flatten, grade_chain, kernel_gens, relative_homology_lengths,
    solve_right, Grading, Key, Matrix, Scope, SliceCount,
};
use crate::report::{ser_matrix, VerificationReport};
use crate::ring::{Element, IdealGenerators, Ring};

#[derive(Clone, Debug)]
pub struct PresentedModule {
    rho: Matrix,
    label: Option<String>,
}

impl PresentedModule {
    /// `Coker(rho)`. On the graded backend a grading is inferred when the
    /// matrix does not carry one.
    pub fn new(rho: Matrix) -> PresentedModule {
        PresentedModule { rho: rho.graded(), label: None }
    }

    /// The free module `A^rank`, presented by the empty matrix.
    pub fn free(ring: &Ring, rank: usize) -> PresentedModule {
        let rho = Matrix::zero(ring, rank, 0);
        let rho = if ring.is_graded() {
            rho.with_grading(Grading { rows: vec![0; rank], cols: vec![] }).unwrap()
        } else {
            rho
        };
        PresentedModule { rho, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Regrade with the given generator shifts.
    pub fn with_shifts(mut self, shifts: &[i32]) -> Result<Self> {
        self.rho = self.rho.without_grading().graded_from_rows(shifts)?;
        Ok(self)
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| format!("Coker {}", self.rho))
    }

    pub fn presentation(&self) -> &Matrix {
        &self.rho
    }

    pub fn ring(&self) -> &Ring {
        self.rho.ring()
    }

    pub fn ngens(&self) -> usize {
        self.rho.nrows()
    }

    pub fn shifts(&self) -> Option<&[i32]> {
        self.rho.grading().map(|g| g.rows.as_slice())
    }

    /// `mu(M)`: number of generators minus the rank of the presentation
    /// over the residue field.
    pub fn minimal_generators(&self) -> usize {
        self.rho.nrows() - residue_rank(&self.rho)
    }

    /// Ideal of `(m-j)`-minors of the presentation.
    pub fn fitting_ideal(&self, j: usize) -> Result<IdealGenerators> {
        let (m, n) = (self.rho.nrows(), self.rho.ncols());
        if j > m {
            return Err(Error::DimensionMismatch(format!("Fitting index {j} above {m}")));
        }
        let size = m - j;
        let ring = self.ring();
        let gens = if size == 0 {
            vec![ring.one()]
        } else if size > n {
            vec![]
        } else {
            let mut out = Vec::new();
            for rows in (0..m).combinations(size) {
                for cols in (0..n).combinations(size) {
                    let d = determinant(&self.rho, &rows, &cols);
                    if !d.is_zero() && !out.contains(&d) {
                        out.push(d);
                    }
                }
            }
            out
        };
        Ok(IdealGenerators::new(gens, Scope::Exhaustive))
    }

    /// Dual module `Hom(M, A)`. `next` is the differential `F_0 -> F_{-1}`
    /// continuing the presentation in a complete resolution, so that
    /// `M* = ker rho^t = im next^t`. The result is presented as
    /// `Coker(K)` where `K` generates `ker next^t`.
    pub fn dual_presentation(&self, next: &Matrix, bound: u32) -> Result<PresentedModule> {
        if next.ncols() != self.rho.nrows() {
            return Err(Error::DimensionMismatch("next differential shape".into()));
        }
        if !next.mul(&self.rho)?.is_zero() {
            return Err(Error::NotAComplex);
        }
        let nt = next.transpose().graded();
        let gens = kernel_gens(&nt, bound)?;
        let k = Matrix::from_cols(self.ring(), nt.ncols(), &gens);
        let k = match nt.grading() {
            Some(g) => k.graded_from_rows(&g.cols)?,
            None => k,
        };
        let mut dual = PresentedModule::new(k);
        if let Some(l) = &self.label {
            dual.label = Some(format!("{l}*"));
        }
        Ok(dual)
    }

    /// `log_p |M|` on the finite backend.
    pub fn length(&self) -> Result<u32> {
        if self.ring().is_graded() {
            return Err(Error::WrongBackend("finite"));
        }
        let (_, dst, sys) = flatten(&self.rho, Key::Whole);
        Ok(dst.dim() as u32 * self.ring().zn().k - sys.image_length())
    }

    /// `dim_k M_d` on the graded backend.
    pub fn hilbert_function(&self, d: i32) -> Result<u32> {
        if !self.ring().is_graded() {
            return Err(Error::WrongBackend("graded"));
        }
        if self.rho.grading().is_none() {
            return Err(Error::NonHomogeneous(format!("presentation {}", self.rho)));
        }
        let (_, dst, sys) = flatten(&self.rho, Key::Degree(d));
        Ok(dst.dim() as u32 - sys.image_length())
    }

    /// Homology of `Hom(F, N)` where `F` is the supplied resolution of this
    /// module (`resolution[0]` is its presentation). Entry `i-1` holds the
    /// slice lengths of `Ext^i(M, N)` for `1 <= i <= i_max`.
    pub fn ext_lengths(
        &self,
        resolution: &[Matrix],
        target: &PresentedModule,
        i_max: usize,
        bound: u32,
    ) -> Result<Vec<(Scope, Vec<SliceCount>)>> {
        self.validate_resolution(resolution, i_max, bound)?;
        let ring = self.ring();
        let refs: Vec<&Matrix> = resolution.iter().collect();
        let graded = if ring.is_graded() {
            grade_chain(&refs).filter(|_| target.rho.grading().is_some())
        } else {
            None
        };
        let mats: Vec<Matrix> = graded.clone().unwrap_or_else(|| resolution.to_vec());
        let p = target.ngens();
        // shifts of F_0, F_1, ...
        let fshifts: Option<Vec<Vec<i32>>> = graded.as_ref().map(|g| {
            std::iter::once(g[0].grading().unwrap().rows.clone())
                .chain(g.iter().map(|m| m.grading().unwrap().cols.clone()))
                .collect()
        });
        let nshifts = target.shifts().map(<[i32]>::to_vec);
        let ncols = target.rho.grading().map(|g| g.cols.clone());
        let ranks: Vec<usize> = std::iter::once(mats[0].nrows()).chain(mats.iter().map(Matrix::ncols)).collect();

        // cochain module C^i = M_{p x r_i}(A), relations I (x) rho_N
        let cochain_shifts = |i: usize| -> Option<Vec<i32>> {
            Some(slot_shifts(nshifts.as_deref()?, &fshifts.as_ref()?[i]))
        };
        let delta = |i: usize| -> Result<Matrix> {
            // C^i -> C^{i+1}, F |-> F d_{i+1}
            let m = right_mult_map(&mats[i], p);
            match (cochain_shifts(i + 1), cochain_shifts(i)) {
                (Some(rows), Some(cols)) => m.with_grading(Grading { rows, cols }),
                _ => Ok(m),
            }
        };
        let rel = |i: usize| -> Result<Matrix> {
            let m = left_mult_map(&target.rho, ranks[i]);
            match (cochain_shifts(i), &ncols, &fshifts) {
                (Some(rows), Some(nc), Some(fs)) => {
                    m.with_grading(Grading { rows, cols: slot_shifts(nc, &fs[i]) })
                }
                _ => Ok(m),
            }
        };
        let mut out = Vec::new();
        for i in 1..=i_max {
            let incoming = delta(i - 1)?;
            let outgoing = delta(i)?;
            let scope = choose_scope(ring, cochain_shifts(i).as_deref(), bound);
            let slices =
                relative_homology_lengths(&incoming, &outgoing, Some(&rel(i)?), Some(&rel(i + 1)?), scope);
            out.push((scope, slices));
        }
        Ok(out)
    }

    fn validate_resolution(&self, resolution: &[Matrix], i_max: usize, bound: u32) -> Result<()> {
        if resolution.first() != Some(&self.rho) {
            return Err(Error::InvalidResolution("first differential must be the presentation".into()));
        }
        if resolution.len() < i_max + 1 {
            return Err(Error::InvalidResolution(format!(
                "{} differentials cannot reach Ext^{i_max}",
                resolution.len()
            )));
        }
        for (k, w) in resolution.windows(2).enumerate() {
            if w[0].ncols() != w[1].nrows() {
                return Err(Error::InvalidResolution(format!("shapes at position {}", k + 1)));
            }
            let cert = check_exact_at(&w[1], &w[0], bound).map_err(|_| {
                Error::InvalidResolution(format!("composite nonzero at position {}", k + 1))
            })?;
            if !cert.pass {
                return Err(Error::InvalidResolution(format!("not exact at position {}", k + 1)));
            }
        }
        Ok(())
    }

    /// `Ext^i(M, A) = 0` for `1 <= i <= i_max` at the computed scope.
    pub fn ext_vanishing(&self, resolution: &[Matrix], i_max: usize, bound: u32) -> Result<VerificationReport> {
        let a = PresentedModule::free(self.ring(), 1);
        let mut report = VerificationReport::new("ext-vanishing", self.label()).fact("i_max", i_max);
        for (i, (scope, slices)) in self.ext_lengths(resolution, &a, i_max, bound)?.into_iter().enumerate() {
            let nonzero: Vec<&SliceCount> = slices.iter().filter(|s| !s.exact()).collect();
            let child = VerificationReport::new(&format!("ext-{}", i + 1), self.label())
                .with_scope(scope)
                .fact("total_length", slices.iter().map(|s| s.kernel - s.image).sum::<u32>())
                .require(nonzero.is_empty(), "nonzero Ext");
            report = report.child(child);
        }
        Ok(report)
    }

    /// The biduality map `M -> M**` is an isomorphism: with `W` generating
    /// `M* = ker rho^t` and `R` generating the relations among the columns of
    /// `W`, the sequence `rho, W^t, R^t` is exact at both inner spots.
    pub fn biduality_check(&self, bound: u32) -> Result<VerificationReport> {
        let ring = self.ring();
        let rt = self.rho.transpose().graded();
        let w = Matrix::from_cols(ring, self.ngens(), &kernel_gens(&rt, bound)?);
        let w = match rt.grading() {
            Some(g) => w.graded_from_rows(&g.cols)?,
            None => w,
        };
        let r = Matrix::from_cols(ring, w.ncols(), &kernel_gens(&w, bound)?);
        let r = match w.grading() {
            Some(g) => r.graded_from_rows(&g.cols)?,
            None => r,
        };
        let wt = w.transpose();
        let injective = check_exact_at(&self.rho, &wt, bound)?;
        let surjective = check_exact_at(&wt, &r.transpose(), bound)?;
        Ok(VerificationReport::new("biduality", self.label())
            .fact("dual_generators", w.ncols())
            .fact("dual_relations", r.ncols())
            .child(VerificationReport::from_exactness("biduality-injective", self.label(), &injective))
            .child(VerificationReport::from_exactness("biduality-surjective", self.label(), &surjective)))
    }
}

/// Rank of `m` reduced to the residue field.
pub(crate) fn residue_rank(m: &Matrix) -> usize {
    let p = m.ring().residue_char();
    Howell::new(Zn::new(p, 1), m.nrows(), m.transpose().residue()).rank()
}

/// Laplace expansion along the first selected row.
fn determinant(m: &Matrix, rows: &[usize], cols: &[usize]) -> Element {
    let ring = m.ring();
    if rows.is_empty() {
        return ring.one();
    }
    let mut acc = ring.zero();
    for (k, &c) in cols.iter().enumerate() {
        let e = m.get(rows[0], c);
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = e * &determinant(m, &rows[1..], &rest);
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Shifts of the slots of `M_{p x r}(A)`, vectorised column-major, for maps
/// from a free module with shifts `source` to one with shifts `target`.
pub(crate) fn slot_shifts(target: &[i32], source: &[i32]) -> Vec<i32> {
    source.iter().flat_map(|s| target.iter().map(move |t| t - s)).collect()
}

/// Matrix of `F |-> F d` on column-major vectorised `p x rows(d)` matrices.
pub(crate) fn right_mult_map(d: &Matrix, p: usize) -> Matrix {
    let ring = d.ring();
    let (r, c) = (d.nrows(), d.ncols());
    Matrix::from_fn(ring, p * c, p * r, |row, col| {
        let (l2, k2) = (row / p, row % p);
        let (l, k) = (col / p, col % p);
        if k == k2 {
            d.get(l, l2).clone()
        } else {
            ring.zero()
        }
    })
}

/// Matrix of `Z |-> rho Z` on column-major vectorised `cols(rho) x r` matrices.
pub(crate) fn left_mult_map(rho: &Matrix, r: usize) -> Matrix {
    let ring = rho.ring();
    let (m, n) = (rho.nrows(), rho.ncols());
    Matrix::from_fn(ring, m * r, n * r, |row, col| {
        let (l, k) = (row / m.max(1), row % m.max(1));
        let (l2, j) = (col / n.max(1), col % n.max(1));
        if l == l2 {
            rho.get(k, j).clone()
        } else {
            ring.zero()
        }
    })
}

pub(crate) fn vectorize(m: &Matrix) -> Vec<Element> {
    (0..m.ncols()).flat_map(|j| m.col(j)).collect()
}

pub(crate) fn unvectorize(ring: &Ring, v: &[Element], rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(ring, rows, cols, |i, j| v[j * rows + i].clone())
}

/// Maps `f: M -> N` given by `(p, s)` with `p rho_M = rho_N s` and
/// `g: N -> M` given by `(q, t)` with `q rho_N = rho_M t`, together with
/// homotopies showing `g f = 1` and `f g = 1`:
/// `q p - 1 = rho_M h_source` and `p q - 1 = rho_N h_target`.
/// When `p` is invertible with inverse `q` both homotopies vanish.
#[derive(Clone, Debug, Serialize)]
pub struct IsoWitness {
    #[serde(serialize_with = "ser_matrix")]
    pub p: Matrix,
    #[serde(serialize_with = "ser_matrix")]
    pub s: Matrix,
    #[serde(serialize_with = "ser_matrix")]
    pub q: Matrix,
    #[serde(serialize_with = "ser_matrix")]
    pub t: Matrix,
    #[serde(serialize_with = "ser_matrix")]
    pub h_source: Matrix,
    #[serde(serialize_with = "ser_matrix")]
    pub h_target: Matrix,
}

impl IsoWitness {
    /// Witness from an invertible `p` with inverse `p_inv` and the two lifts.
    pub fn square(p: Matrix, p_inv: Matrix, s: Matrix, s_back: Matrix) -> IsoWitness {
        let ring = p.ring().clone();
        IsoWitness {
            h_source: Matrix::zero(&ring, s.ncols(), p.ncols()),
            h_target: Matrix::zero(&ring, s_back.ncols(), p.nrows()),
            p,
            s,
            q: p_inv,
            t: s_back,
        }
    }

    pub fn identity(m: &PresentedModule) -> IsoWitness {
        let ring = m.ring();
        let (g, r) = (m.ngens(), m.presentation().ncols());
        IsoWitness::square(
            Matrix::identity(ring, g),
            Matrix::identity(ring, g),
            Matrix::identity(ring, r),
            Matrix::identity(ring, r),
        )
    }

    /// Compose `self: M -> N` with `next: N -> L`.
    pub fn then(&self, next: &IsoWitness) -> Result<IsoWitness> {
        Ok(IsoWitness {
            p: next.p.mul(&self.p)?,
            s: next.s.mul(&self.s)?,
            q: self.q.mul(&next.q)?,
            t: self.t.mul(&next.t)?,
            h_source: self.t.mul(&next.h_source)?.mul(&self.p)?.add(&self.h_source)?,
            h_target: next.s.mul(&self.h_target)?.mul(&next.q)?.add(&next.h_target)?,
        })
    }

    /// Complete the maps `p: M -> N` and `q: N -> M` to a witness by solving
    /// for the lifts and homotopies. `None` if any of them does not exist.
    pub fn by_solving(
        m: &PresentedModule,
        n: &PresentedModule,
        p: Matrix,
        q: Matrix,
        bound: u32,
    ) -> Result<Option<IsoWitness>> {
        let (rm, rn) = (m.presentation(), n.presentation());
        let id_m = Matrix::identity(m.ring(), m.ngens());
        let id_n = Matrix::identity(m.ring(), n.ngens());
        let Some(s) = solve_right(rn, &p.mul(rm)?, bound)? else { return Ok(None) };
        let Some(t) = solve_right(rm, &q.mul(rn)?, bound)? else { return Ok(None) };
        let Some(h_source) = solve_right(rm, &q.mul(&p)?.sub(&id_m)?, bound)? else { return Ok(None) };
        let Some(h_target) = solve_right(rn, &p.mul(&q)?.sub(&id_n)?, bound)? else { return Ok(None) };
        Ok(Some(IsoWitness { p, s, q, t, h_source, h_target }))
    }
}

/// Check an isomorphism witness exactly.
pub fn verify_iso_by_witness(m: &PresentedModule, n: &PresentedModule, w: &IsoWitness) -> VerificationReport {
    let subject = format!("{} ~ {}", m.label(), n.label());
    let report = VerificationReport::new("iso-witness", subject).fact("witness", w);
    let ring = m.ring();
    let check = || -> Result<bool> {
        let (rm, rn) = (m.presentation(), n.presentation());
        let id_n = Matrix::identity(ring, n.ngens());
        let id_m = Matrix::identity(ring, m.ngens());
        Ok(w.p.mul(rm)? == rn.mul(&w.s)?
            && w.q.mul(rn)? == rm.mul(&w.t)?
            && w.q.mul(&w.p)?.sub(&id_m)? == rm.mul(&w.h_source)?
            && w.p.mul(&w.q)?.sub(&id_n)? == rn.mul(&w.h_target)?)
    };
    match check() {
        Ok(ok) => report.require(ok, "maps are not mutually inverse"),
        Err(e) => report.fail(&e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Ring {
        Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap()
    }

    fn lit(r: &Ring, s: &str) -> Matrix {
        Matrix::parse_literal(r, s).unwrap()
    }

    #[test]
    fn mu_values() {
        let r = a();
        assert_eq!(PresentedModule::new(lit(&r, "[[x, z], [0, y]]")).minimal_generators(), 2);
        assert_eq!(PresentedModule::new(lit(&r, "[[x, 1], [0, y]]")).minimal_generators(), 1);
        assert_eq!(PresentedModule::new(Matrix::zero(&r, 2, 2)).minimal_generators(), 2);
    }

    #[test]
    fn fitting_ideals() {
        let r = a();
        let gz2 = PresentedModule::new(lit(&r, "[[x, z^2], [0, y]]"));
        assert!(gz2.fitting_ideal(0).unwrap().is_zero());
        let f1 = gz2.fitting_ideal(1).unwrap();
        assert_eq!(f1.gens.len(), 3);
        let gz = PresentedModule::new(lit(&r, "[[x, z], [0, y]]"));
        assert!(!gz.fitting_ideal(1).unwrap().same_ideal(&f1, 4).unwrap());
    }

    #[test]
    fn hilbert_values() {
        let r = a();
        let free = PresentedModule::free(&r, 1);
        assert_eq!(free.hilbert_function(2).unwrap(), 5);
        let p = |s: &str| r.parse(s).unwrap();
        let k_z = PresentedModule::new(Matrix::from_rows(&r, vec![vec![p("x"), p("y")]]).unwrap());
        assert_eq!(k_z.hilbert_function(3).unwrap(), 1);
        let gz = PresentedModule::new(lit(&r, "[[x, z], [0, y]]"));
        assert_eq!(gz.hilbert_function(0).unwrap(), 2);
        assert_eq!(gz.hilbert_function(1).unwrap(), 4);
    }

    #[test]
    fn kron_maps_match_products() {
        let r = a();
        let d = lit(&r, "[[x, z], [0, y]]");
        let f = lit(&r, "[[1, z], [x, 2], [y, 0]]");
        let v = right_mult_map(&d, 3).apply(&vectorize(&f)).unwrap();
        assert_eq!(unvectorize(&r, &v, 3, 2), f.mul(&d).unwrap());
        let rho = lit(&r, "[[x, z, 1]]");
        let zeta = lit(&r, "[[1, z], [x, 2], [y, 0]]");
        let w = left_mult_map(&rho, 2).apply(&vectorize(&zeta)).unwrap();
        assert_eq!(unvectorize(&r, &w, 1, 2), rho.mul(&zeta).unwrap());
    }

    #[test]
    fn free_module_is_reflexive() {
        let r = a();
        let rep = PresentedModule::free(&r, 1).biduality_check(4).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
        let z9 = Ring::z_mod(3, 2).unwrap();
        let rep = PresentedModule::free(&z9, 1).biduality_check(0).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }

    #[test]
    fn identity_witness_passes() {
        let r = a();
        let gz = PresentedModule::new(lit(&r, "[[x, z], [0, y]]"));
        assert!(verify_iso_by_witness(&gz, &gz, &IsoWitness::identity(&gz)).passed());
    }
}
