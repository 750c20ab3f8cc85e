//! Exact arithmetic in the two ring backends.
//!
//! Both backends are quotients of a polynomial ring over `Z/p^k` by an ideal
//! generated by monomials:
//!
//! * **finite**: `Z/p^k[vars]/(monomials)` where every variable is nilpotent,
//!   so the ring is a finite local ring with residue field `Z/p`.
//! * **graded**: `F_p[vars]/(monomials)`, an infinite graded ring. It stands
//!   in for its localization at the irrelevant ideal: an element is a unit iff
//!   its constant term is nonzero, and nothing ever inverts a non-constant unit.
//!
//! Elements are stored in normal form: a list of standard monomials (those not
//! divisible by any relation) with nonzero coefficients, sorted descending in
//! degree-lexicographic order.

mod ideal;
mod parse;

pub use ideal::{annihilator, ideal_membership, IdealGenerators, Membership};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::howell::Zn;

/// Exponent vector, ordered degree-lexicographically with the declared
/// variable order (the first variable is the largest).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn format(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(vars)
            .filter(|(e, _)| **e > 0)
            .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Finite,
    Graded,
}

fn default_k() -> u32 {
    1
}

/// Ring definition file contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub kind: RingKind,
    pub p: u64,
    #[serde(default = "default_k")]
    pub k: u32,
    #[serde(default)]
    pub vars: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
}

impl RingDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

struct RingData {
    descriptor: RingDescriptor,
    kind: RingKind,
    zn: Zn,
    vars: Vec<String>,
    relations: Vec<Monomial>,
    carrier: Option<Arc<Vec<Monomial>>>,
    graded_cache: Mutex<HashMap<u32, Arc<Vec<Monomial>>>>,
}

/// Cheaply clonable handle to a ring.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor == other.0.descriptor
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.0.descriptor;
        let base = match d.kind {
            RingKind::Finite if d.k > 1 => format!("Z/{}^{}", d.p, d.k),
            RingKind::Finite => format!("Z/{}", d.p),
            RingKind::Graded => format!("F{}", d.p),
        };
        if d.vars.is_empty() {
            return write!(f, "{base}");
        }
        write!(f, "{base}[{}]", d.vars.join(","))?;
        if !d.relations.is_empty() {
            write!(f, "/({})", d.relations.join(", "))?;
        }
        Ok(())
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn parse_monomial(text: &str, vars: &[String]) -> Result<Monomial> {
    let mut exps = vec![0u32; vars.len()];
    for factor in text.split('*').map(str::trim) {
        let (name, e) = match factor.split_once('^') {
            Some((v, e)) => (
                v.trim(),
                e.trim().parse::<u32>().map_err(|_| {
                    Error::InvalidRing(format!("bad exponent in relation `{text}`"))
                })?,
            ),
            None => (factor, 1),
        };
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        exps[i] += e;
    }
    Ok(Monomial(exps))
}

impl Ring {
    pub fn new(descriptor: RingDescriptor) -> Result<Ring> {
        let d = descriptor;
        if !is_prime(d.p) {
            return Err(Error::InvalidRing(format!("{} is not prime", d.p)));
        }
        if d.k == 0 {
            return Err(Error::InvalidRing("k must be at least 1".into()));
        }
        if d.kind == RingKind::Graded && d.k != 1 {
            return Err(Error::InvalidRing(
                "graded rings have prime field coefficients (k = 1)".into(),
            ));
        }
        if d.p.checked_pow(d.k).is_none_or(|n| n >= 1 << 31) {
            return Err(Error::InvalidRing("modulus too large".into()));
        }
        for (i, v) in d.vars.iter().enumerate() {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || d.vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("bad variable name `{v}`")));
            }
        }
        let mut relations = Vec::new();
        for r in &d.relations {
            let m = parse_monomial(r, &d.vars)?;
            if m.is_one() {
                return Err(Error::InvalidRing("relation 1 gives the zero ring".into()));
            }
            relations.push(m);
        }
        // keep only minimal generators of the monomial ideal
        relations.sort();
        relations.dedup();
        let minimal: Vec<Monomial> = relations
            .iter()
            .filter(|m| !relations.iter().any(|o| o != *m && o.divides(m)))
            .cloned()
            .collect();
        let nvars = d.vars.len();
        let carrier = match d.kind {
            RingKind::Graded => None,
            RingKind::Finite => {
                for i in 0..nvars {
                    let pure = minimal
                        .iter()
                        .any(|m| m.0.iter().enumerate().all(|(j, &e)| (j == i) == (e > 0)));
                    if !pure {
                        return Err(Error::InvalidRing(format!(
                            "variable `{}` must be nilpotent in a finite ring",
                            d.vars[i]
                        )));
                    }
                }
                let mut basis = Vec::new();
                let mut deg = 0;
                loop {
                    let layer: Vec<Monomial> = monomials_of_degree(nvars, deg)
                        .into_iter()
                        .filter(|m| !minimal.iter().any(|r| r.divides(m)))
                        .collect();
                    if layer.is_empty() {
                        break;
                    }
                    basis.extend(layer);
                    deg += 1;
                }
                Some(Arc::new(basis))
            }
        };
        let mut normalized = d.clone();
        normalized.relations = minimal.iter().map(|m| m.format(&d.vars)).collect();
        Ok(Ring(Arc::new(RingData {
            kind: d.kind,
            zn: Zn::new(d.p, d.k),
            vars: d.vars.clone(),
            relations: minimal,
            carrier,
            graded_cache: Mutex::new(HashMap::new()),
            descriptor: normalized,
        })))
    }

    /// `Z/p^k`.
    pub fn z_mod(p: u64, k: u32) -> Result<Ring> {
        Ring::new(RingDescriptor { kind: RingKind::Finite, p, k, vars: vec![], relations: vec![] })
    }

    /// `F_p[vars]/(relations)`.
    pub fn graded(p: u64, vars: &[&str], relations: &[&str]) -> Result<Ring> {
        Ring::new(RingDescriptor {
            kind: RingKind::Graded,
            p,
            k: 1,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            relations: relations.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.descriptor
    }

    pub fn kind(&self) -> RingKind {
        self.0.kind
    }

    pub fn is_graded(&self) -> bool {
        self.0.kind == RingKind::Graded
    }

    pub fn zn(&self) -> Zn {
        self.0.zn
    }

    /// Size of the residue field.
    pub fn residue_char(&self) -> u64 {
        self.0.zn.p
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn relations(&self) -> &[Monomial] {
        &self.0.relations
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.0.relations.iter().any(|r| r.divides(m))
    }

    pub fn zero(&self) -> Element {
        Element { ring: self.clone(), terms: vec![] }
    }

    pub fn one(&self) -> Element {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i64) -> Element {
        let c = self.0.zn.reduce_i64(c);
        self.term(Monomial::one(self.nvars()), c)
    }

    pub fn term(&self, m: Monomial, c: u64) -> Element {
        let c = c % self.0.zn.n;
        if c == 0 || !self.is_standard(&m) {
            return self.zero();
        }
        Element { ring: self.clone(), terms: vec![(m, c)] }
    }

    pub fn var(&self, name: &str) -> Result<Element> {
        let i = self
            .0
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(self.term(Monomial::var(self.nvars(), i), 1))
    }

    /// Normal form of an arbitrary list of terms.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Element {
        let zn = self.0.zn;
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (m, c) in terms {
            if c % zn.n == 0 || !self.is_standard(&m) {
                continue;
            }
            let e = acc.entry(m).or_insert(0);
            *e = zn.add(*e, c % zn.n);
        }
        Element {
            ring: self.clone(),
            terms: acc.into_iter().rev().filter(|(_, c)| *c != 0).collect(),
        }
    }

    /// Standard monomials of total degree exactly `d` (graded backend).
    pub fn graded_basis(&self, d: u32) -> Result<Arc<Vec<Monomial>>> {
        if !self.is_graded() {
            return Err(Error::WrongBackend("graded"));
        }
        Ok(self.standard_monomials(d))
    }

    pub(crate) fn standard_monomials(&self, d: u32) -> Arc<Vec<Monomial>> {
        let mut cache = self.0.graded_cache.lock().unwrap();
        cache
            .entry(d)
            .or_insert_with(|| {
                let mut v: Vec<Monomial> = monomials_of_degree(self.nvars(), d)
                    .into_iter()
                    .filter(|m| self.is_standard(m))
                    .collect();
                v.sort_by(|a, b| b.cmp(a));
                Arc::new(v)
            })
            .clone()
    }

    /// Standard monomial basis of the finite carrier.
    pub fn carrier_basis(&self) -> Result<Arc<Vec<Monomial>>> {
        self.0.carrier.clone().ok_or(Error::WrongBackend("finite"))
    }

    /// Number of elements of a finite ring.
    pub fn cardinality(&self) -> Result<u128> {
        let basis = self.carrier_basis()?;
        Ok((self.0.zn.n as u128).pow(basis.len() as u32))
    }

    /// Every element of a finite ring exactly once.
    pub fn enumerate_carrier(&self) -> Result<Vec<Element>> {
        let basis = self.carrier_basis()?;
        let card = self.cardinality()?;
        if card > 1 << 20 {
            return Err(Error::TooLarge(format!("ring has {card} elements")));
        }
        let n = self.0.zn.n;
        let mut out = Vec::with_capacity(card as usize);
        let mut coords = vec![0u64; basis.len()];
        loop {
            out.push(self.from_coords(&basis, &coords));
            let mut i = 0;
            loop {
                if i == coords.len() {
                    return Ok(out);
                }
                coords[i] += 1;
                if coords[i] < n {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
    }

    pub(crate) fn from_coords(&self, basis: &[Monomial], coords: &[u64]) -> Element {
        self.from_terms(basis.iter().cloned().zip(coords.iter().copied()))
    }

    /// Units: nonzero constant term modulo `p`. On the finite backend this is
    /// exactly invertibility; on the graded backend it is invertibility in the
    /// localization at the irrelevant ideal.
    pub fn is_unit(&self, e: &Element) -> bool {
        self.0.zn.is_unit(e.constant_coeff())
    }

    /// Polynomial inverse: exact on the finite backend, constants only on the
    /// graded backend.
    pub fn inverse(&self, e: &Element) -> Option<Element> {
        if !self.is_unit(e) {
            return None;
        }
        let zn = self.0.zn;
        let c0 = zn.inv(e.constant_coeff())?;
        if self.is_graded() {
            return (e.terms.len() == 1).then(|| self.from_int(c0 as i64));
        }
        // e = c0^{-1} (1 - nil); the inverse is c0 * sum nil^i, which terminates
        let unit_part = e.scale(c0);
        let nil = &self.one() - &unit_part;
        let mut acc = self.one();
        let mut power = self.one();
        loop {
            power = &power * &nil;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Some(acc.scale(c0))
    }

    pub fn parse(&self, text: &str) -> Result<Element> {
        parse::parse_element(self, text)
    }
}

fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    if nvars == 0 {
        return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// An element of a [`Ring`] in normal form.
#[derive(Clone)]
pub struct Element {
    ring: Ring,
    terms: Vec<(Monomial, u64)>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.ring == other.ring
    }
}

impl Eq for Element {}

impl Element {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == 1
    }

    pub fn constant_coeff(&self) -> u64 {
        self.terms
            .last()
            .filter(|(m, _)| m.is_one())
            .map_or(0, |(_, c)| *c)
    }

    /// Largest total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.terms.first(), self.terms.last()) {
            (Some((a, _)), Some((b, _))) => a.degree() == b.degree(),
            _ => true,
        }
    }

    /// Homogeneous degree, if the element is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        if self.is_homogeneous() {
            self.degree()
        } else {
            None
        }
    }

    pub fn homogeneous_component(&self, d: u32) -> Element {
        Element {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect(),
        }
    }

    pub fn scale(&self, c: u64) -> Element {
        let zn = self.ring.zn();
        self.ring.from_terms(self.terms.iter().map(|(m, a)| (m.clone(), zn.mul(*a, c % zn.n))))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Element {
        // multiplying by a monomial preserves the order of the surviving terms
        Element {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), *c))
                .filter(|(t, _)| self.ring.is_standard(t))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Element {
        (0..e).fold(self.ring.one(), |acc, _| &acc * self)
    }

    fn check_ring(&self, other: &Element) {
        assert!(self.ring == other.ring, "elements of different rings: {} vs {}", self.ring, other.ring);
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.ring.zn().n;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, abs) = if *c > n / 2 { (true, n - c) } else { (false, *c) };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{}", m.format(self.ring.vars()))?;
            } else {
                write!(f, "{abs}*{}", m.format(self.ring.vars()))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.check_ring(rhs);
        self.ring.from_terms(self.terms.iter().chain(&rhs.terms).cloned())
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        let zn = self.ring.zn();
        Element {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), zn.neg(*c))).collect(),
        }
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.check_ring(rhs);
        let zn = self.ring.zn();
        let mut prods = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                prods.push((a.mul(b), zn.mul(*ca, *cb)));
            }
        }
        self.ring.from_terms(prods)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Element {
            type Output = Element;
            fn $f(self, rhs: Element) -> Element {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Element> for Element {
            type Output = Element;
            fn $f(self, rhs: &Element) -> Element {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}
