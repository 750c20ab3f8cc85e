//! The five explicit generators of `Q` for `Hom(H_b, G_a)` and
//! `Hom(G_ab, G_a)`, with their lifts.

use serde::Serialize;

use super::HomProblem;
use crate::error::{Error, Result};
use crate::family::{eta, gamma};
use crate::linalg::Matrix;
use crate::report::{ser_matrices, VerificationReport};
use crate::ring::Element;
use crate::zerodiv::{weakly_regular_on_quotient, ExactPair};

#[derive(Clone, Debug, Serialize)]
pub struct SpecialGenerators {
    pub kind: &'static str,
    #[serde(serialize_with = "ser_matrices")]
    pub psi: Vec<Matrix>,
    #[serde(serialize_with = "ser_matrices")]
    pub xi: Vec<Matrix>,
    #[serde(skip)]
    pub rho1: Matrix,
    #[serde(skip)]
    pub rho2: Matrix,
}

fn m2(pair: &ExactPair, e: [[&Element; 2]; 2]) -> Matrix {
    Matrix::from_rows(&pair.ring, e.iter().map(|r| r.iter().map(|x| (*x).clone()).collect()).collect()).unwrap()
}

pub(crate) fn weakly_regular_mod_xy(pair: &ExactPair, a: &Element, bound: u32) -> Result<bool> {
    weakly_regular_on_quotient(&pair.ring, a, &[pair.x.clone(), pair.y.clone()], bound)
}

/// Generators for `rho1 = eta_b`, `rho2 = gamma_a`, without checking hypotheses.
pub(crate) fn hg_matrices(pair: &ExactPair, a: &Element, b: &Element) -> Result<SpecialGenerators> {
    let r = &pair.ring;
    let (o, l) = (r.zero(), r.one());
    let (x, y) = (&pair.x, &pair.y);
    let nb = -b;
    let psi = vec![
        m2(pair, [[&o, &l], [&o, &o]]),
        m2(pair, [[&o, &o], [x, b]]),
        m2(pair, [[&o, &o], [&o, y]]),
        m2(pair, [[x, &o], [&o, &o]]),
        m2(pair, [[a, &o], [y, &o]]),
    ];
    let z = m2(pair, [[&o, &o], [&o, &o]]);
    let xi = vec![
        m2(pair, [[&o, &l], [&o, &o]]),
        z.clone(),
        z,
        m2(pair, [[&o, &nb], [&o, &o]]),
        m2(pair, [[&o, &o], [y, &nb]]),
    ];
    Ok(SpecialGenerators { kind: "hg", psi, xi, rho1: eta(pair, b)?, rho2: gamma(pair, a)? })
}

/// Generators for `rho1 = gamma_ab`, `rho2 = gamma_a`, without checking hypotheses.
pub(crate) fn gg_matrices(pair: &ExactPair, a: &Element, b: &Element) -> Result<SpecialGenerators> {
    let r = &pair.ring;
    let (o, l) = (r.zero(), r.one());
    let (x, y) = (&pair.x, &pair.y);
    let ab = a * b;
    let psi = vec![
        m2(pair, [[&o, &o], [&o, x]]),
        m2(pair, [[&l, &o], [&o, b]]),
        m2(pair, [[&o, x], [&o, &o]]),
        m2(pair, [[a, &o], [y, &o]]),
        m2(pair, [[&o, a], [&o, y]]),
    ];
    let z = m2(pair, [[&o, &o], [&o, &o]]);
    let xi = vec![
        z.clone(),
        psi[1].clone(),
        z,
        m2(pair, [[a, &o], [&o, &ab]]),
        m2(pair, [[&o, &o], [&o, y]]),
    ];
    Ok(SpecialGenerators { kind: "gg", psi, xi, rho1: gamma(pair, &ab)?, rho2: gamma(pair, a)? })
}

/// The five generators of `Q` for `Hom(H_b, G_a)`. Requires a regular pair
/// with `a` or `b` weakly regular on `A/(x, y)`.
pub fn special_generators_hg(pair: &ExactPair, a: &Element, b: &Element, bound: u32) -> Result<SpecialGenerators> {
    pair.require_regular()?;
    if !weakly_regular_mod_xy(pair, a, bound)? && !weakly_regular_mod_xy(pair, b, bound)? {
        return Err(Error::PreconditionFailed(format!(
            "neither {a} nor {b} is weakly regular on A/({}, {})",
            pair.x, pair.y
        )));
    }
    hg_matrices(pair, a, b)
}

/// The five generators of `Q` for `Hom(G_ab, G_a)`. Requires a regular pair
/// with `a` weakly regular on `A/(x, y)`.
pub fn special_generators_gg(pair: &ExactPair, a: &Element, b: &Element, bound: u32) -> Result<SpecialGenerators> {
    pair.require_regular()?;
    if !weakly_regular_mod_xy(pair, a, bound)? {
        return Err(Error::PreconditionFailed(format!(
            "{a} is not weakly regular on A/({}, {})",
            pair.x, pair.y
        )));
    }
    gg_matrices(pair, a, b)
}

/// Both inclusions: every `psi_i` satisfies `psi_i rho1 = rho2 xi_i`, and
/// every element of `Q` in the scope lies in the span of the `psi_i`
/// (plus `rho2 M(A)`, which the `psi_i` span as well).
pub fn verify_special_generators(sg: &SpecialGenerators, bound: u32) -> Result<VerificationReport> {
    let hp = HomProblem::new(&sg.rho1, &sg.rho2)?;
    let scope = hp.scope(bound);
    let mut report = VerificationReport::new("five-generators", format!("Q({}, {})", sg.rho1, sg.rho2))
        .with_scope(scope)
        .fact("psi", sg.psi.iter().map(|m| m.to_string()).collect::<Vec<_>>());
    let mut lifts_ok = true;
    for (i, (p, x)) in sg.psi.iter().zip(&sg.xi).enumerate() {
        if p.mul(&sg.rho1)? != sg.rho2.mul(x)? {
            lifts_ok = false;
            report = report.fail(&format!("psi_{} has no displayed lift", i + 1));
        }
    }
    report = report.fact("lifts_verified", lifts_ok);
    // I = rho2 M(A) is generated by rho2 E_jl; each must lie in the span too
    let mut image_in_span = true;
    for (v, _) in hp.image_gens() {
        if hp.coordinates(&sg.psi, &hp.to_matrix(&v), bound)?.is_none() {
            image_in_span = false;
        }
    }
    let outside = hp.q_within_span(&sg.psi, scope);
    report = report.fact("image_in_span", image_in_span);
    if let Some(w) = &outside {
        report = report.fact("outside_span", w.to_string());
    }
    Ok(report.require(outside.is_none() && image_in_span, "Q is not spanned by the five matrices"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::zerodiv::verify_exact_pair;

    fn xy() -> ExactPair {
        let r = Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap();
        verify_exact_pair(&r, &r.parse("x").unwrap(), &r.parse("y").unwrap(), 6)
            .unwrap()
            .with_regularity(6)
            .unwrap()
    }

    #[test]
    fn displayed_entries() {
        let p = xy();
        let z = p.parse("z").unwrap();
        let hg = special_generators_hg(&p, &z, &z, 6).unwrap();
        assert_eq!(hg.psi[1].to_string(), "[[0, 0], [x, z]]");
        assert_eq!(hg.xi[4].to_string(), "[[0, 0], [y, -z]]");
        let gg = special_generators_gg(&p, &z, &p.ring.one(), 6).unwrap();
        assert_eq!(gg.psi[1], Matrix::identity(&p.ring, 2));
    }

    #[test]
    fn five_generators_span_q() {
        let p = xy();
        let z = p.parse("z").unwrap();
        let z2 = p.parse("z^2").unwrap();
        for (a, b) in [(&z, &z), (&z2, &z)] {
            for sg in [special_generators_hg(&p, a, b, 4).unwrap(), special_generators_gg(&p, a, b, 4).unwrap()] {
                let rep = verify_special_generators(&sg, 4).unwrap();
                assert!(rep.passed(), "{}", rep.to_text());
            }
        }
    }

    #[test]
    fn gg_needs_a_regular() {
        let p = xy();
        let x = p.parse("x").unwrap();
        assert!(matches!(special_generators_gg(&p, &x, &x, 4), Err(Error::PreconditionFailed(_))));
    }
}
