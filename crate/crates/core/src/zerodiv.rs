//! Exact pairs of zero divisors and weak regularity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{check_exact_relative, kernel_gens, ExactnessCertificate, Grading, Matrix, Scope};
use crate::module::PresentedModule;
use crate::report::VerificationReport;
use crate::ring::{annihilator, ideal_membership, Element, Ring, RingDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regularity {
    Yes,
    No,
    Unverified,
}

/// A pair `(x, y)` with `Ann(x) = (y)` and `Ann(y) = (x)`, as checked at
/// `scope`.
#[derive(Clone, Debug, Serialize)]
pub struct ExactPair {
    #[serde(serialize_with = "ser_ring")]
    pub ring: Ring,
    #[serde(serialize_with = "ser_element")]
    pub x: Element,
    #[serde(serialize_with = "ser_element")]
    pub y: Element,
    pub verified: bool,
    pub regular: Regularity,
    pub scope: Scope,
}

fn ser_ring<S: serde::Serializer>(r: &Ring, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_element<S: serde::Serializer>(e: &Element, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

impl ExactPair {
    pub fn label(&self) -> String {
        format!("({}, {}) in {}", self.x, self.y, self.ring)
    }

    /// Element of the pair's ring from an expression.
    pub fn parse(&self, text: &str) -> Result<Element> {
        self.ring.parse(text)
    }

    fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::PreconditionFailed(format!("{} is not an exact pair", self.label())))
        }
    }

    /// Run [`verify_regular_pair`] and record the verdict.
    pub fn with_regularity(mut self, bound: u32) -> Result<ExactPair> {
        self.regular = verify_regular_pair(&self, bound)?.0;
        Ok(self)
    }

    pub fn require_regular(&self) -> Result<()> {
        self.require_verified()?;
        match self.regular {
            Regularity::Yes => Ok(()),
            Regularity::No => Err(Error::PreconditionFailed(format!("{} is not regular", self.label()))),
            Regularity::Unverified => Err(Error::PreconditionFailed(format!(
                "regularity of {} has not been verified",
                self.label()
            ))),
        }
    }
}

fn ideal_contains_all(gens: &[Element], ideal: &[Element], bound: u32) -> Result<bool> {
    for g in gens {
        if !ideal_membership(g, ideal, bound)?.member {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check `Ann(x) = (y)` and `Ann(y) = (x)`. Both inclusions are tested:
/// `xy = 0` gives `(y) <= Ann(x)`, and each annihilator generator is tested
/// for membership.
pub fn verify_exact_pair(ring: &Ring, x: &Element, y: &Element, bound: u32) -> Result<ExactPair> {
    for e in [x, y] {
        if e.ring() != ring {
            return Err(Error::RingMismatch);
        }
        if ring.is_unit(e) {
            return Err(Error::UnitInput(e.to_string()));
        }
    }
    let ann_x = annihilator(x, bound)?;
    let ann_y = annihilator(y, bound)?;
    let verified = (x * y).is_zero()
        && ideal_contains_all(&ann_x.gens, std::slice::from_ref(y), bound)?
        && ideal_contains_all(&ann_y.gens, std::slice::from_ref(x), bound)?;
    Ok(ExactPair {
        ring: ring.clone(),
        x: x.clone(),
        y: y.clone(),
        verified,
        regular: Regularity::Unverified,
        scope: ann_x.scope.merge(ann_y.scope),
    })
}

/// Report form of [`verify_exact_pair`] followed by [`verify_regular_pair`].
pub fn pair_report(pair: &ExactPair, bound: u32) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("exact-pair", pair.label())
        .with_scope(pair.scope)
        .fact("x", pair.x.to_string())
        .fact("y", pair.y.to_string())
        .require(pair.verified, "annihilators do not match");
    if pair.verified {
        let (reg, conditions) = verify_regular_pair(pair, bound)?;
        r = r.fact("regular", reg).child(conditions);
    }
    Ok(r)
}

/// `(x) ∩ (y) = 0`, computed from the syzygies of `(x, -y)`.
fn intersection_is_zero(x: &Element, y: &Element, bound: u32) -> Result<bool> {
    let ring = x.ring();
    let row = Matrix::from_rows(ring, vec![vec![x.clone(), -y]])?.graded();
    Ok(kernel_gens(&row, bound)?.iter().all(|v| (&v[0] * x).is_zero()))
}

/// Evaluate the three equivalent regularity conditions independently:
/// `x` weakly regular on `A/(y)`, `y` weakly regular on `A/(x)`, and
/// `(x) ∩ (y) = 0`.
pub fn verify_regular_pair(pair: &ExactPair, bound: u32) -> Result<(Regularity, VerificationReport)> {
    pair.require_verified()?;
    let ring = &pair.ring;
    let c1 = weakly_regular_on_quotient(ring, &pair.x, std::slice::from_ref(&pair.y), bound)?;
    let c2 = weakly_regular_on_quotient(ring, &pair.y, std::slice::from_ref(&pair.x), bound)?;
    let c3 = intersection_is_zero(&pair.x, &pair.y, bound)?;
    let report = VerificationReport::new("regular-pair", pair.label())
        .with_scope(pair.scope)
        .fact("x_regular_mod_y", c1)
        .fact("y_regular_mod_x", c2)
        .fact("intersection_zero", c3);
    if c1 != c2 || c2 != c3 {
        return Err(Error::EquivalenceViolation(format!(
            "{}: x mod y {c1}, y mod x {c2}, intersection {c3}",
            pair.label()
        )));
    }
    Ok((if c1 { Regularity::Yes } else { Regularity::No }, report))
}

/// Multiplication by `a` on `M` is injective, at the returned certificate's
/// scope.
pub fn weakly_regular_on(m: &PresentedModule, a: &Element, bound: u32) -> Result<ExactnessCertificate> {
    let ring = m.ring();
    let k = m.ngens();
    let mult = Matrix::diag(ring, &vec![a.clone(); k]);
    let mult = match (m.shifts(), a.homogeneous_degree().or(a.is_zero().then_some(0))) {
        (Some(s), Some(d)) => mult.with_grading(Grading {
            rows: s.iter().map(|v| v - d as i32).collect(),
            cols: s.to_vec(),
        })?,
        _ => mult,
    };
    let rho = m.presentation();
    check_exact_relative(rho, &mult, None, Some(rho), bound)
}

/// `a` weakly regular on `A/(gens)`.
pub fn weakly_regular_on_quotient(ring: &Ring, a: &Element, gens: &[Element], bound: u32) -> Result<bool> {
    let rho = if gens.is_empty() {
        Matrix::zero(ring, 1, 0)
    } else {
        Matrix::from_rows(ring, vec![gens.to_vec()])?
    };
    let mut m = PresentedModule::new(rho);
    if ring.is_graded() && m.shifts().is_none() && gens.is_empty() {
        m = m.with_shifts(&[0])?;
    }
    Ok(weakly_regular_on(&m, a, bound)?.pass)
}

/// Regular on `A/(x, y)`: weakly regular and not a unit.
pub fn regular_mod_pair(pair: &ExactPair, a: &Element, bound: u32) -> Result<bool> {
    Ok(!pair.ring.is_unit(a)
        && weakly_regular_on_quotient(&pair.ring, a, &[pair.x.clone(), pair.y.clone()], bound)?)
}

/// `A = Q/(fg)` with the pair of cosets of `f` and `g`. The product must be
/// a single term so that `A` stays a monomial quotient.
pub fn pair_from_factorization(
    q: &RingDescriptor,
    f: &str,
    g: &str,
    bound: u32,
) -> Result<(Ring, ExactPair)> {
    let qr = Ring::new(q.clone())?;
    let (fq, gq) = (qr.parse(f)?, qr.parse(g)?);
    for e in [&fq, &gq] {
        if e.is_zero() || (qr.is_graded() && !e.is_homogeneous()) || !annihilator(e, bound)?.is_zero() {
            return Err(Error::PreconditionFailed(format!("{e} is not weakly regular in {qr}")));
        }
    }
    let fg = &fq * &gq;
    let term = match fg.terms() {
        [(m, c)] if qr.zn().is_unit(*c) && !m.is_one() => m.clone(),
        _ => return Err(Error::UnsupportedQuotient(format!("{fg} is not a monomial"))),
    };
    let mut desc = qr.descriptor().clone();
    desc.relations.push(term.format(qr.vars()));
    let a = Ring::new(desc)?;
    let (x, y) = (a.parse(f)?, a.parse(g)?);
    let pair = verify_exact_pair(&a, &x, &y, bound)?.with_regularity(bound)?;
    Ok((a, pair))
}

/// The pair `(y, x)`.
pub fn swap_pair(pair: &ExactPair) -> ExactPair {
    ExactPair { x: pair.y.clone(), y: pair.x.clone(), ..pair.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fxy() -> Ring {
        Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap()
    }

    fn pair(r: &Ring, x: &str, y: &str) -> ExactPair {
        verify_exact_pair(r, &r.parse(x).unwrap(), &r.parse(y).unwrap(), 6).unwrap()
    }

    #[test]
    fn corpus_pairs() {
        let z9 = Ring::z_mod(3, 2).unwrap();
        let z8 = Ring::z_mod(2, 3).unwrap();
        let a = fxy();
        for (r, x, y, regular) in
            [(&z9, "3", "3", false), (&z8, "2", "4", false), (&z8, "4", "2", false), (&a, "x", "y", true)]
        {
            let p = pair(r, x, y);
            assert!(p.verified, "{x},{y} over {r}");
            assert_eq!(verify_regular_pair(&p, 6).unwrap().0 == Regularity::Yes, regular);
        }
    }

    #[test]
    fn non_pairs() {
        let z8 = Ring::z_mod(2, 3).unwrap();
        assert!(!pair(&z8, "2", "2").verified);
        let a = fxy();
        assert!(!pair(&a, "x", "y*z").verified);
        assert!(!pair(&a, "x^2", "y").verified);
        assert!(matches!(
            verify_exact_pair(&a, &a.parse("1 + x").unwrap(), &a.parse("y").unwrap(), 4),
            Err(Error::UnitInput(_))
        ));
    }

    #[test]
    fn weak_regularity_examples() {
        let a = fxy();
        let p = |s: &str| a.parse(s).unwrap();
        let xy = [p("x"), p("y")];
        assert!(weakly_regular_on_quotient(&a, &p("z"), &xy, 8).unwrap());
        assert!(!weakly_regular_on_quotient(&a, &a.zero(), &xy, 8).unwrap());
        assert!(!weakly_regular_on_quotient(&a, &p("y"), &[p("y")], 8).unwrap());
        let z9 = Ring::z_mod(3, 2).unwrap();
        assert!(weakly_regular_on_quotient(&z9, &z9.from_int(2), &[z9.from_int(3)], 0).unwrap());
        assert!(!weakly_regular_on_quotient(&z9, &z9.from_int(3), &[], 0).unwrap());
    }

    #[test]
    fn factorization_constructor() {
        let q = RingDescriptor {
            kind: crate::ring::RingKind::Graded,
            p: 5,
            k: 1,
            vars: vec!["x".into(), "y".into(), "z".into()],
            relations: vec![],
        };
        let (a, pair) = pair_from_factorization(&q, "x", "y", 6).unwrap();
        assert_eq!(a, fxy());
        assert_eq!(pair.regular, Regularity::Yes);
        assert!(matches!(
            pair_from_factorization(&q, "x + z", "y", 4),
            Err(Error::UnsupportedQuotient(_))
        ));
    }

    #[test]
    fn swap_twice_is_identity() {
        let a = fxy();
        let p = pair(&a, "x", "y");
        let back = swap_pair(&swap_pair(&p));
        assert_eq!((back.x, back.y), (p.x, p.y));
    }
}
