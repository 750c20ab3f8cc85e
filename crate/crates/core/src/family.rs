//! The matrices `gamma_a = [[x, a], [0, y]]`, `eta_a = [[y, -a], [0, x]]`,
//! their cokernels `G_a`, `H_a`, and the periodic complex they form.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{check_exact_at, grade_chain, Grading, Matrix};
use crate::module::{verify_iso_by_witness, IsoWitness, PresentedModule};
use crate::report::VerificationReport;
use crate::ring::Element;
use crate::zerodiv::{weakly_regular_on_quotient, ExactPair};

/// Degree of a homogeneous element; zero counts as any degree and gets `fallback`.
fn degree_of(e: &Element, fallback: i32) -> Option<i32> {
    if e.is_zero() {
        Some(fallback)
    } else {
        e.homogeneous_degree().map(|d| d as i32)
    }
}

/// Shifts for `[[p, a], [0, q]]` when all entries are homogeneous.
fn triangular_grading(p: &Element, q: &Element, a: &Element) -> Option<Grading> {
    if !p.ring().is_graded() {
        return None;
    }
    let dp = degree_of(p, 0)?;
    let dq = degree_of(q, 0)?;
    let da = degree_of(a, dq)?;
    Some(Grading { rows: vec![0, da - dq], cols: vec![dp, da] })
}

fn triangular(pair: &ExactPair, p: &Element, q: &Element, a: &Element) -> Result<Matrix> {
    let ring = &pair.ring;
    if a.ring() != ring {
        return Err(Error::RingMismatch);
    }
    let m = Matrix::from_rows(ring, vec![vec![p.clone(), a.clone()], vec![ring.zero(), q.clone()]])?;
    match triangular_grading(p, q, a) {
        Some(g) => m.with_grading(g),
        None => Ok(m),
    }
}

/// `gamma_a`. On the graded backend the matrix carries shifts whenever `a`
/// is homogeneous; otherwise it is left ungraded and later checks run on a
/// truncation.
pub fn gamma(pair: &ExactPair, a: &Element) -> Result<Matrix> {
    triangular(pair, &pair.x, &pair.y, a)
}

pub fn eta(pair: &ExactPair, a: &Element) -> Result<Matrix> {
    triangular(pair, &pair.y, &pair.x, &-a)
}

pub fn module_g(pair: &ExactPair, a: &Element) -> Result<PresentedModule> {
    Ok(PresentedModule::new(gamma(pair, a)?).with_label(format!("G_{{{a}}}")))
}

pub fn module_h(pair: &ExactPair, a: &Element) -> Result<PresentedModule> {
    Ok(PresentedModule::new(eta(pair, a)?).with_label(format!("H_{{{a}}}")))
}

/// `phi = [[0, 1], [-1, 0]]`.
pub fn phi(pair: &ExactPair) -> Matrix {
    let r = &pair.ring;
    Matrix::from_rows(r, vec![vec![r.zero(), r.one()], vec![-r.one(), r.zero()]]).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Gamma,
    Eta,
}

/// A stretch `d_1, d_2, ...` of the doubly infinite complex alternating
/// `gamma_a` and `eta_a`, with `d_k: F_k -> F_{k-1}`.
#[derive(Clone, Debug)]
pub struct PeriodicComplex {
    pub pair: ExactPair,
    pub a: Element,
    pub phase: Phase,
    pub differentials: Vec<Matrix>,
}

impl PeriodicComplex {
    /// `length` differentials starting with `phase` at `d_1`.
    pub fn new(pair: &ExactPair, a: &Element, phase: Phase, length: usize) -> Result<PeriodicComplex> {
        let g = gamma(pair, a)?;
        let h = eta(pair, a)?;
        let raw: Vec<Matrix> = (0..length)
            .map(|k| {
                let first = (k % 2 == 0) == (phase == Phase::Gamma);
                if first { g.clone() } else { h.clone() }
            })
            .collect();
        let refs: Vec<&Matrix> = raw.iter().collect();
        let differentials = if pair.ring.is_graded() && !raw.is_empty() {
            grade_chain(&refs).unwrap_or_else(|| raw.iter().map(|m| m.clone().without_grading()).collect())
        } else {
            raw
        };
        Ok(PeriodicComplex { pair: pair.clone(), a: a.clone(), phase, differentials })
    }

    /// Resolution of `G_a` (phase gamma) or `H_a` (phase eta).
    pub fn resolution(pair: &ExactPair, a: &Element, phase: Phase, length: usize) -> Result<Vec<Matrix>> {
        Ok(Self::new(pair, a, phase, length)?.differentials)
    }
}

/// Exactness at every interior position of a stretch of the periodic
/// complex, plus the commutations `phi gamma^t = eta phi` and
/// `phi eta^t = gamma phi` identifying the dual complex with itself.
pub fn verify_complex(pair: &ExactPair, a: &Element, length: usize, bound: u32) -> Result<VerificationReport> {
    pair_checked(pair)?;
    let cx = PeriodicComplex::new(pair, a, Phase::Gamma, length)?;
    let subject = format!("F({a}) over {}", pair.label());
    let mut report = VerificationReport::new("periodic-complex", subject.clone()).fact("length", length);
    for (k, w) in cx.differentials.windows(2).enumerate() {
        let cert = check_exact_at(&w[1], &w[0], bound)?;
        report = report.child(
            VerificationReport::from_exactness("exact-at", format!("F_{}", k + 1), &cert).fact("position", k + 1),
        );
    }
    let g = gamma(pair, a)?;
    let h = eta(pair, a)?;
    let f = phi(pair);
    let c1 = f.mul(&g.transpose())? == h.mul(&f)?;
    let c2 = f.mul(&h.transpose())? == g.mul(&f)?;
    let comp = g.mul(&h)?.is_zero() && h.mul(&g)?.is_zero();
    report = report.child(
        VerificationReport::new("dual-complex", subject)
            .fact("phi_gamma_t_eq_eta_phi", c1)
            .fact("phi_eta_t_eq_gamma_phi", c2)
            .fact("composites_zero", comp)
            .require(c1 && c2 && comp, "phi does not intertwine the complex with its dual"),
    );
    Ok(report)
}

fn pair_checked(pair: &ExactPair) -> Result<()> {
    if pair.verified {
        Ok(())
    } else {
        Err(Error::PreconditionFailed(format!("{} is not an exact pair", pair.label())))
    }
}

/// Ext vanishing against the periodic resolution and biduality for `G_a`
/// and `H_a`, with the witness `G_a* = H_a` (and back) via `phi`.
pub fn verify_total_reflexivity(
    pair: &ExactPair,
    a: &Element,
    i_max: usize,
    bound: u32,
) -> Result<VerificationReport> {
    pair_checked(pair)?;
    let g = module_g(pair, a)?;
    let h = module_h(pair, a)?;
    let mut report = VerificationReport::new("total-reflexivity", format!("G_{{{a}}}, H_{{{a}}}"));
    for (m, other, phase, next) in [
        (&g, &h, Phase::Gamma, eta(pair, a)?),
        (&h, &g, Phase::Eta, gamma(pair, a)?),
    ] {
        let res = PeriodicComplex::resolution(pair, a, phase, i_max + 1)?;
        let mut node = VerificationReport::new("totally-reflexive", m.label())
            .child(m.ext_vanishing(&res, i_max, bound)?)
            .child(m.biduality_check(bound)?);
        let dual = m.dual_presentation(&next, bound)?;
        let f = phi(pair);
        node = match IsoWitness::by_solving(&dual, other, f.clone(), f.neg(), bound)? {
            Some(w) => node.child(verify_iso_by_witness(&dual, other, &w)),
            None => node.child(VerificationReport::new("iso-witness", dual.label()).fail("phi does not lift")),
        };
        report = report.child(node);
    }
    Ok(report)
}

/// `G_a` is isomorphic to the ideal `(y, a)`: exactness of
/// `A^2 --gamma_a--> A^2 --(y -a)--> A`.
pub fn verify_ideal_iso(pair: &ExactPair, a: &Element, bound: u32) -> Result<VerificationReport> {
    pair_checked(pair)?;
    if !weakly_regular_on_quotient(&pair.ring, a, std::slice::from_ref(&pair.y), bound)? {
        return Err(Error::PreconditionFailed(format!("{a} is not weakly regular on A/({})", pair.y)));
    }
    let g = gamma(pair, a)?;
    let row = Matrix::from_rows(&pair.ring, vec![vec![pair.y.clone(), -a]])?;
    let row = match g.grading() {
        Some(gr) => row.graded_from_rows(&[gr.rows[0] - degree_of(&pair.y, 0).unwrap_or(0)])?,
        None => row,
    };
    let cert = check_exact_at(&g, &row, bound)?;
    Ok(VerificationReport::new("ideal-iso", format!("G_{{{a}}} = ({}, {a})", pair.y))
        .fact("ideal", vec![pair.y.to_string(), a.to_string()])
        .child(VerificationReport::from_exactness("kernel-in-image", format!("gamma_{{{a}}}"), &cert)))
}

/// Witnesses `G_{ua} -> G_a` and `H_{ua} -> H_a` for a unit `u`: both use
/// `P = S = diag(1, u)`.
pub fn unit_twist_witness(pair: &ExactPair, _a: &Element, u: &Element) -> Result<(IsoWitness, IsoWitness)> {
    let ring = &pair.ring;
    let inv = ring.inverse(u).ok_or_else(|| Error::NotAUnit(u.to_string()))?;
    let d = Matrix::diag(ring, &[ring.one(), u.clone()]);
    let d_inv = Matrix::diag(ring, &[ring.one(), inv]);
    let w = IsoWitness::square(d.clone(), d_inv.clone(), d, d_inv);
    Ok((w.clone(), w))
}

/// Report form of [`unit_twist_witness`].
pub fn verify_unit_twist(pair: &ExactPair, a: &Element, u: &Element) -> Result<VerificationReport> {
    let (wg, wh) = unit_twist_witness(pair, a, u)?;
    let ua = u * a;
    Ok(VerificationReport::new("unit-twist", format!("u = {u}"))
        .child(verify_iso_by_witness(&module_g(pair, &ua)?, &module_g(pair, a)?, &wg))
        .child(verify_iso_by_witness(&module_h(pair, &ua)?, &module_h(pair, a)?, &wh)))
}

/// For the swapped pair, `G^{yx}_a = H^{xy}_{-a}`, which the sign twist
/// carries to `H^{xy}_a`.
pub fn swap_witness(pair: &ExactPair, a: &Element) -> Result<IsoWitness> {
    Ok(unit_twist_witness(pair, a, &-pair.ring.one())?.1)
}

/// With `a = qx`, the source change `[[1, q], [0, 1]]` turns `gamma_a` into
/// `diag(x, y)`, so `G_a = A/(x) + A/(y)`.
pub fn decompose_when_a_in_x(pair: &ExactPair, q: &Element) -> Result<VerificationReport> {
    pair_checked(pair)?;
    let ring = &pair.ring;
    let a = q * &pair.x;
    let g = module_g(pair, &a)?;
    let split = Matrix::diag(ring, &[pair.x.clone(), pair.y.clone()]);
    let split = match g.shifts() {
        Some(s) => split.graded_from_rows(s)?,
        None => split,
    };
    let target = PresentedModule::new(split).with_label(format!("A/({}) + A/({})", pair.x, pair.y));
    let mk = |c: Element| Matrix::from_rows(ring, vec![vec![ring.one(), c], vec![ring.zero(), ring.one()]]).unwrap();
    let w = IsoWitness::square(Matrix::identity(ring, 2), Matrix::identity(ring, 2), mk(q.clone()), mk(-q));
    Ok(VerificationReport::new("decomposition", g.label())
        .fact("a", a.to_string())
        .fact("summands", vec![format!("A/({})", pair.x), format!("A/({})", pair.y)])
        .child(verify_iso_by_witness(&g, &target, &w)))
}
