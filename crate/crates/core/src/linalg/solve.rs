//! Lifting solves, kernels and exactness checks.
//!
//! Every question is answered slice by slice: the whole carrier on the
//! finite backend, one homogeneous degree at a time on the graded backend.
//! When a graded input has no consistent grading the computation falls back
//! to the truncation `A/m^(D+1)`, whose answers are recorded as
//! inconclusive.

use std::collections::BTreeMap;

use serde::Serialize;

use super::slice::{columns, Key, Space};
use super::{infer_chain, Grading, Matrix};
use crate::error::{Error, Result};
use crate::howell::{Howell, LinearSystem};
use crate::ring::{Element, Ring};

/// Where a linear-algebra answer is known to be exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Scope {
    Exhaustive,
    /// Every homogeneous degree in `lo..=hi`.
    Degrees { lo: i32, hi: i32 },
    /// Computed modulo `m^(degree+1)`; not a certificate.
    Truncated { degree: u32 },
}

impl Scope {
    pub(crate) fn keys(&self) -> Vec<Key> {
        match *self {
            Scope::Exhaustive => vec![Key::Whole],
            Scope::Degrees { lo, hi } => (lo..=hi).map(Key::Degree).collect(),
            Scope::Truncated { degree } => vec![Key::Trunc(degree)],
        }
    }

    pub fn is_conclusive(&self) -> bool {
        !matches!(self, Scope::Truncated { .. })
    }

    pub fn merge(self, other: Scope) -> Scope {
        match (self, other) {
            (Scope::Degrees { lo, hi }, Scope::Degrees { lo: l2, hi: h2 }) => {
                Scope::Degrees { lo: lo.min(l2), hi: hi.max(h2) }
            }
            (t @ Scope::Truncated { .. }, _) | (_, t @ Scope::Truncated { .. }) => t,
            (s, _) => s,
        }
    }
}

impl std::fmt::Display for Scope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scope::Exhaustive => write!(f, "exhaustive"),
            Scope::Degrees { lo, hi } => write!(f, "degrees {lo}..={hi}"),
            Scope::Truncated { degree } => write!(f, "truncated mod m^{}", degree + 1),
        }
    }
}

/// Scope for a computation whose unknowns live in a free module with the
/// given shifts (`None` when no grading is available).
pub(crate) fn choose_scope(ring: &Ring, focus: Option<&[i32]>, bound: u32) -> Scope {
    if !ring.is_graded() {
        return Scope::Exhaustive;
    }
    match focus {
        Some(s) => {
            let lo = s.iter().copied().min().unwrap_or(0);
            let hi = s.iter().copied().max().unwrap_or(0) + bound as i32;
            Scope::Degrees { lo, hi }
        }
        None => Scope::Truncated { degree: bound },
    }
}

/// Shift vectors on a chain of composable matrices, reusing existing
/// gradings when they already fit together.
pub(crate) fn grade_chain(mats: &[&Matrix]) -> Option<Vec<Matrix>> {
    if mats.iter().all(|m| m.grading().is_some()) {
        let mut out: Vec<Matrix> = vec![mats[0].clone()];
        for m in &mats[1..] {
            let prev_cols = &out.last().unwrap().grading().unwrap().cols;
            let g = m.grading().unwrap();
            let offs: Vec<i32> = prev_cols.iter().zip(&g.rows).map(|(a, b)| a - b).collect();
            if !offs.windows(2).all(|w| w[0] == w[1]) {
                out.clear();
                break;
            }
            let off = offs.first().copied().unwrap_or(0);
            out.push((*m).clone().without_grading().with_grading(g.shifted(off)).ok()?);
        }
        if out.len() == mats.len() {
            return Some(out);
        }
    }
    let shifts = infer_chain(mats)?;
    mats.iter()
        .enumerate()
        .map(|(k, m)| {
            (*m).clone()
                .without_grading()
                .with_grading(Grading { rows: shifts[k].clone(), cols: shifts[k + 1].clone() })
                .ok()
        })
        .collect()
}

fn shifts_or_zero(m: &Matrix) -> (Vec<i32>, Vec<i32>) {
    match m.grading() {
        Some(g) => (g.rows.clone(), g.cols.clone()),
        None => (vec![0; m.nrows()], vec![0; m.ncols()]),
    }
}

/// Coordinate spaces and the flattened system of `m` on one slice.
pub(crate) fn flatten(m: &Matrix, key: Key) -> (Space, Space, LinearSystem) {
    let (rows, cols) = shifts_or_zero(m);
    let src = Space::new(m.ring(), &cols, key);
    let dst = Space::new(m.ring(), &rows, key);
    let sys = LinearSystem::from_columns(m.ring().zn(), dst.dim(), &columns(m, &src, &dst));
    (src, dst, sys)
}

/// Kernel of `m` on one slice, as vectors of the source module.
pub(crate) fn kernel_basis(m: &Matrix, key: Key) -> Vec<Vec<Element>> {
    let (src, _, sys) = flatten(m, key);
    sys.kernel().iter().map(|c| src.vector(m.ring(), c)).collect()
}

/// Howell form of the `A`-span of `gens` inside one slice of `A^rank`.
/// `gens` carries the homogeneous degree of each vector on the graded
/// backend.
pub(crate) fn a_span_howell(
    ring: &Ring,
    space: &Space,
    key: Key,
    gens: &[(Vec<Element>, Option<i32>)],
) -> Howell {
    let mut rows = Vec::new();
    for (g, deg) in gens {
        for mult in multipliers(ring, key, *deg) {
            let v: Vec<Element> = g.iter().map(|e| e.mul_monomial(&mult)).collect();
            rows.push(space.coords(&v));
        }
    }
    Howell::new(ring.zn(), space.dim(), rows)
}

fn multipliers(ring: &Ring, key: Key, deg: Option<i32>) -> Vec<crate::ring::Monomial> {
    match key {
        Key::Whole => ring.carrier_basis().map(|b| b.to_vec()).unwrap_or_default(),
        Key::Degree(d) => match deg {
            Some(t) if t <= d => ring.standard_monomials((d - t) as u32).to_vec(),
            _ => Vec::new(),
        },
        Key::Trunc(top) => (0..=top).flat_map(|e| ring.standard_monomials(e).to_vec()).collect(),
    }
}

/// Greedily pick candidates that enlarge the `A`-span of `existing`.
/// Returns the indices of the chosen candidates.
pub(crate) fn minimal_extension(
    ring: &Ring,
    space: &Space,
    key: Key,
    existing: &[(Vec<Element>, Option<i32>)],
    candidates: &[(Vec<Element>, Option<i32>)],
) -> Vec<usize> {
    let mut gens: Vec<(Vec<Element>, Option<i32>)> = existing.to_vec();
    let mut span = a_span_howell(ring, space, key, &gens);
    let mut chosen = Vec::new();
    for (i, cand) in candidates.iter().enumerate() {
        if span.contains(&space.coords(&cand.0)) {
            continue;
        }
        gens.push(cand.clone());
        chosen.push(i);
        // only the new generator's multiples need to join the span
        let extra = a_span_howell(ring, space, key, std::slice::from_ref(cand));
        let mut rows = span.rows.clone();
        rows.extend(extra.rows);
        span = Howell::new(ring.zn(), space.dim(), rows);
    }
    chosen
}

/// `{ v : m v in im rel }` on one slice, projected to the source of `m`.
pub(crate) fn relative_kernel(m: &Matrix, rel: Option<&Matrix>, key: Key) -> Vec<Vec<Element>> {
    match rel {
        None => kernel_basis(m, key),
        Some(r) => {
            let n = m.ncols();
            let stacked = m.hstack(r).expect("relative kernel shapes");
            kernel_basis(&stacked, key)
                .into_iter()
                .map(|v| v[..n].to_vec())
                .filter(|v| v.iter().any(|e| !e.is_zero()))
                .collect()
        }
    }
}

fn kernel_length_relative(m: &Matrix, rel: Option<&Matrix>, key: Key) -> u32 {
    match rel {
        None => flatten(m, key).2.kernel_length(),
        Some(r) => {
            let stacked = m.hstack(r).expect("relative kernel shapes");
            flatten(&stacked, key).2.kernel_length() - flatten(r, key).2.kernel_length()
        }
    }
}

/// Solve `rho * xi = b`. Exact on both backends when `rho` is graded;
/// otherwise a solution is searched modulo `m^(D+1)` and only returned if it
/// checks out exactly.
pub fn solve_right(rho: &Matrix, b: &Matrix, bound: u32) -> Result<Option<Matrix>> {
    if rho.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows against {} rows",
            rho.nrows(),
            b.nrows()
        )));
    }
    if rho.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    let ring = rho.ring();
    let rho = rho.clone().graded();
    let mut cols = Vec::with_capacity(b.ncols());
    let mut cache: BTreeMap<(i32, bool), (Space, Space, LinearSystem)> = BTreeMap::new();
    for j in 0..b.ncols() {
        let target = b.col(j);
        let mut xi = vec![ring.zero(); rho.ncols()];
        let keys: Vec<Key> = if !ring.is_graded() {
            vec![Key::Whole]
        } else if let Some(g) = rho.grading() {
            let mut degs: Vec<i32> = target
                .iter()
                .zip(&g.rows)
                .flat_map(|(e, s)| e.terms().iter().map(move |(m, _)| m.degree() as i32 + s))
                .collect();
            degs.sort();
            degs.dedup();
            degs.into_iter().map(Key::Degree).collect()
        } else {
            let top = target.iter().filter_map(Element::degree).max().unwrap_or(0);
            vec![Key::Trunc(top + bound)]
        };
        for key in keys {
            let ck = match key {
                Key::Degree(d) => (d, false),
                Key::Trunc(t) => (t as i32, true),
                Key::Whole => (0, false),
            };
            let (src, dst, sys) = cache.entry(ck).or_insert_with(|| flatten(&rho, key));
            match sys.solve(&dst.coords(&target)) {
                Some(u) => {
                    let part = src.vector(ring, &u);
                    for (x, p) in xi.iter_mut().zip(part) {
                        *x = &*x + &p;
                    }
                }
                None => return Ok(None),
            }
        }
        cols.push(xi);
    }
    let xi = Matrix::from_cols(ring, rho.ncols(), &cols);
    if rho.mul(&xi)? != *b {
        // only reachable from the truncated fallback
        return Err(Error::NonHomogeneous(format!("presentation {rho}")));
    }
    Ok(Some(xi))
}

/// Generators of `ker rho`: exact on the finite backend; on the graded
/// backend all kernel elements of degree at most `max(col shift) + bound`
/// lie in the span of the returned (minimal) generators.
pub fn kernel_gens(rho: &Matrix, bound: u32) -> Result<Vec<Vec<Element>>> {
    let ring = rho.ring();
    let rho = rho.clone().graded();
    let cols = match (ring.is_graded(), rho.grading()) {
        (false, _) => None,
        (true, Some(g)) => Some(g.cols.clone()),
        (true, None) => return Err(Error::NonHomogeneous(format!("presentation {rho}"))),
    };
    let scope = choose_scope(ring, cols.as_deref(), bound);
    let mut gens: Vec<(Vec<Element>, Option<i32>)> = Vec::new();
    for key in scope.keys() {
        let space = Space::new(ring, cols.as_deref().unwrap_or(&vec![0; rho.ncols()]), key);
        let deg = match key {
            Key::Degree(d) => Some(d),
            _ => None,
        };
        let cands: Vec<(Vec<Element>, Option<i32>)> =
            kernel_basis(&rho, key).into_iter().map(|v| (v, deg)).collect();
        for i in minimal_extension(ring, &space, key, &gens, &cands) {
            gens.push(cands[i].clone());
        }
    }
    Ok(gens.into_iter().map(|(v, _)| v).collect())
}

/// Kernel and image lengths of one slice (`log_p` of their cardinalities;
/// dimensions over `F_p` on the graded backend).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceCount {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i32>,
    pub kernel: u32,
    pub image: u32,
}

impl SliceCount {
    pub fn exact(&self) -> bool {
        self.kernel == self.image
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessCertificate {
    pub pass: bool,
    pub scope: Scope,
    pub slices: Vec<SliceCount>,
    /// A kernel element outside the image, when exactness fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl ExactnessCertificate {
    pub fn conclusive(&self) -> bool {
        self.scope.is_conclusive()
    }
}

/// Lengths of `{v : out v in im rel_target} / (im incoming + im rel_mid)`
/// on each slice of `scope`. All gradings must agree on shared modules.
pub fn relative_homology_lengths(
    incoming: &Matrix,
    outgoing: &Matrix,
    rel_mid: Option<&Matrix>,
    rel_target: Option<&Matrix>,
    scope: Scope,
) -> Vec<SliceCount> {
    let inc = match rel_mid {
        Some(r) => incoming.hstack(r).expect("relative homology shapes"),
        None => incoming.clone(),
    };
    scope
        .keys()
        .into_iter()
        .map(|key| {
            let kernel = kernel_length_relative(outgoing, rel_target, key);
            let image = flatten(&inc, key).2.image_length();
            SliceCount {
                degree: match key {
                    Key::Degree(d) => Some(d),
                    _ => None,
                },
                kernel,
                image,
            }
        })
        .collect()
}

/// Grade the data of a (relative) exactness question consistently.
/// Returns `None` if no consistent grading exists.
fn grade_relative(
    incoming: &Matrix,
    outgoing: &Matrix,
    rel_mid: Option<&Matrix>,
    rel_target: Option<&Matrix>,
) -> Option<(Matrix, Matrix, Option<Matrix>, Option<Matrix>)> {
    let chain = grade_chain(&[outgoing, incoming])?;
    let (out, inc) = (chain[0].clone(), chain[1].clone());
    let mid_rows = out.grading()?.cols.clone();
    let target_rows = out.grading()?.rows.clone();
    let rm = match rel_mid {
        Some(r) => Some(r.clone().without_grading().graded_from_rows(&mid_rows).ok()?),
        None => None,
    };
    let rt = match rel_target {
        Some(r) => Some(r.clone().without_grading().graded_from_rows(&target_rows).ok()?),
        None => None,
    };
    Some((inc, out, rm, rt))
}

/// Exactness of `F_2 --incoming--> F_1 --outgoing--> F_0 / im rel_target`
/// modulo `im rel_mid` in the middle. Composite zero (modulo the target
/// relations) is checked first.
pub fn check_exact_relative(
    incoming: &Matrix,
    outgoing: &Matrix,
    rel_mid: Option<&Matrix>,
    rel_target: Option<&Matrix>,
    bound: u32,
) -> Result<ExactnessCertificate> {
    if outgoing.ncols() != incoming.nrows() {
        return Err(Error::DimensionMismatch("incoming/outgoing shapes".into()));
    }
    let comp = outgoing.mul(incoming)?;
    let composite_zero = match rel_target {
        None => comp.is_zero(),
        Some(r) => solve_right(r, &comp, bound)?.is_some(),
    };
    if !composite_zero {
        return Err(Error::NotAComplex);
    }
    let ring = incoming.ring();
    let (inc, out, rm, rt, scope) = if !ring.is_graded() {
        (
            incoming.clone(),
            outgoing.clone(),
            rel_mid.cloned(),
            rel_target.cloned(),
            Scope::Exhaustive,
        )
    } else {
        match grade_relative(incoming, outgoing, rel_mid, rel_target) {
            Some((i, o, rm, rt)) => {
                let mid = o.grading().unwrap().cols.clone();
                let scope = choose_scope(ring, Some(&mid), bound);
                (i, o, rm, rt, scope)
            }
            None => {
                let strip = |m: &Matrix| m.clone().without_grading();
                (
                    strip(incoming),
                    strip(outgoing),
                    rel_mid.map(strip),
                    rel_target.map(strip),
                    Scope::Truncated { degree: bound },
                )
            }
        }
    };
    let slices = relative_homology_lengths(&inc, &out, rm.as_ref(), rt.as_ref(), scope);
    let pass = slices.iter().all(SliceCount::exact);
    let witness = if pass {
        None
    } else {
        let key = scope.keys()[slices.iter().position(|s| !s.exact()).unwrap()];
        let img_mat = match &rm {
            Some(r) => inc.hstack(r)?,
            None => inc.clone(),
        };
        let (_, mid_space, sys) = flatten(&img_mat, key);
        let image = sys.image();
        relative_kernel(&out, rt.as_ref(), key)
            .into_iter()
            .find(|v| !image.contains(&mid_space.coords(v)))
            .map(|v| v.iter().map(|e| e.to_string()).collect())
    };
    Ok(ExactnessCertificate { pass, scope, slices, witness })
}

/// Exactness of `incoming` followed by `outgoing` at their shared module.
pub fn check_exact_at(incoming: &Matrix, outgoing: &Matrix, bound: u32) -> Result<ExactnessCertificate> {
    check_exact_relative(incoming, outgoing, None, None, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Ring {
        Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap()
    }

    #[test]
    fn diag_three_kernel_over_z9() {
        let r = Ring::z_mod(3, 2).unwrap();
        let m = Matrix::parse_literal(&r, "[[3, 0], [0, 3]]").unwrap();
        let gens = kernel_gens(&m, 0).unwrap();
        assert_eq!(gens.len(), 2);
        for g in &gens {
            assert!(m.apply(g).unwrap().iter().all(Element::is_zero));
        }
        assert!(kernel_gens(&Matrix::identity(&r, 2), 0).unwrap().is_empty());
    }

    #[test]
    fn solve_examples() {
        let r = Ring::z_mod(3, 2).unwrap();
        let three = Matrix::parse_literal(&r, "[[3]]").unwrap();
        assert!(solve_right(&three, &Matrix::parse_literal(&r, "[[1]]").unwrap(), 0).unwrap().is_none());
        let g = a();
        let gamma = Matrix::parse_literal(&g, "[[x, z], [0, y]]").unwrap();
        let eta = Matrix::parse_literal(&g, "[[y, -z], [0, x]]").unwrap();
        let psi1 = Matrix::parse_literal(&g, "[[0, 1], [0, 0]]").unwrap();
        let rhs = psi1.mul(&eta).unwrap();
        let xi = solve_right(&gamma, &rhs, 8).unwrap().unwrap();
        assert_eq!(gamma.mul(&xi).unwrap(), rhs);
        assert_eq!(xi, Matrix::parse_literal(&g, "[[0, 1], [0, 0]]").unwrap());
        let b = Matrix::parse_literal(&g, "[[x, z^2], [y, 1]]").unwrap();
        assert_eq!(solve_right(&Matrix::identity(&g, 2), &b, 8).unwrap().unwrap(), b);
    }

    #[test]
    fn periodic_complex_is_exact() {
        let r = Ring::z_mod(3, 2).unwrap();
        let g0 = Matrix::parse_literal(&r, "[[3, 0], [0, 3]]").unwrap();
        let cert = check_exact_at(&g0, &g0, 0).unwrap();
        assert!(cert.pass);
        assert_eq!(cert.slices[0].kernel, 2);

        let g = a();
        let gamma = Matrix::parse_literal(&g, "[[x, z], [0, y]]").unwrap();
        let eta = Matrix::parse_literal(&g, "[[y, -z], [0, x]]").unwrap();
        let cert = check_exact_at(&eta, &gamma, 8).unwrap();
        assert!(cert.pass && cert.conclusive());
        assert!(matches!(check_exact_at(&gamma, &gamma, 8), Err(Error::NotAComplex)));
    }

    #[test]
    fn non_exact_spot_has_witness() {
        let r = Ring::z_mod(3, 2).unwrap();
        let rho = Matrix::parse_literal(&r, "[[0, 3], [0, 0]]").unwrap();
        let cert = check_exact_at(&rho, &rho, 0).unwrap();
        assert!(!cert.pass);
        assert!(cert.witness.is_some());
    }

    #[test]
    fn kernel_of_gamma_lies_in_image_of_eta() {
        let g = a();
        let gamma = Matrix::parse_literal(&g, "[[x, z], [0, y]]").unwrap();
        let eta = Matrix::parse_literal(&g, "[[y, -z], [0, x]]").unwrap();
        let gens = kernel_gens(&gamma, 6).unwrap();
        assert_eq!(gens.len(), 2);
        for v in gens {
            let col = Matrix::column(&g, &v);
            assert!(solve_right(&eta, &col, 6).unwrap().is_some());
        }
    }
}
