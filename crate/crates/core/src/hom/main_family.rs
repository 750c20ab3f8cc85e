//! The full battery for the families `G_{a_n}`, `H_{a_n}` with
//! `a_n = b_1 ... b_n`: per-module checks, pairwise non-isomorphism and the
//! Hom table.

use serde::Serialize;

use super::{noniso_certificate, verify_gg_part_a, verify_gg_part_b, verify_end_ring, verify_hom_hg, Strategy};
use crate::error::{Error, Result};
use crate::family::{module_g, module_h, verify_total_reflexivity};
use crate::module::PresentedModule;
use crate::report::{Verdict, VerificationReport};
use crate::ring::Element;
use crate::zerodiv::{regular_mod_pair, ExactPair};

/// Ext vanishing is checked for `1 <= i <= TR_DEPTH`.
const TR_DEPTH: usize = 4;
const IDEMPOTENT_BUDGET: usize = 1 << 12;
/// Hilbert function values recorded per module, degrees `0..=HILBERT_TOP`.
const HILBERT_TOP: i32 = 4;

#[derive(Clone, Debug, Serialize)]
pub struct ModuleSummary {
    pub label: String,
    pub index: usize,
    pub mu: usize,
    pub fitting_1: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<u32>,
    pub totally_reflexive: Verdict,
    pub indecomposable: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonIsoEntry {
    pub left: String,
    pub right: String,
    pub strategy: Strategy,
    pub verdict: Verdict,
    /// Verdict of the Fitting route, when it separates the two modules.
    pub fitting: Option<Verdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomEntry {
    pub kind: &'static str,
    pub m: usize,
    pub n: usize,
    pub identities: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub ring: String,
    pub pair: [String; 2],
    pub b: Vec<String>,
    pub a: Vec<String>,
    pub bound: u32,
    pub modules: Vec<ModuleSummary>,
    pub non_isomorphic: Vec<NonIsoEntry>,
    pub hom_table: Vec<HomEntry>,
    pub verdict: Verdict,
    pub report: VerificationReport,
}

fn summarize(m: &PresentedModule, index: usize, tr: Verdict, indec: Verdict, bound: u32) -> Result<ModuleSummary> {
    let graded = m.ring().is_graded();
    let hilbert = if graded {
        Some((0..=HILBERT_TOP.min(bound as i32)).map(|d| m.hilbert_function(d)).collect::<Result<Vec<_>>>()?)
    } else {
        None
    };
    Ok(ModuleSummary {
        label: m.label(),
        index,
        mu: m.minimal_generators(),
        fitting_1: m.fitting_ideal(1)?.gens.iter().map(|g| g.to_string()).collect(),
        hilbert,
        length: if graded { None } else { Some(m.length()?) },
        totally_reflexive: tr,
        indecomposable: indec,
    })
}

/// Product `b_{from+1} ... b_to` (indices 1-based).
fn quotient(ring: &crate::Ring, bs: &[Element], from: usize, to: usize) -> Element {
    bs[from..to].iter().fold(ring.one(), |acc, b| &acc * b)
}

/// Every identity claimed for the families up to `n_max`, each with its
/// certificate.
pub fn run_family(pair: &ExactPair, bs: &[Element], n_max: usize, bound: u32) -> Result<FamilyReport> {
    pair.require_regular()?;
    if n_max == 0 || bs.len() < n_max {
        return Err(Error::PreconditionFailed(format!("need {n_max} elements b_i, got {}", bs.len())));
    }
    let ring = &pair.ring;
    for (i, b) in bs[..n_max].iter().enumerate() {
        if !regular_mod_pair(pair, b, bound)? {
            return Err(Error::PreconditionFailed(format!(
                "b_{} = {b} is not regular on A/({}, {})",
                i + 1,
                pair.x,
                pair.y
            )));
        }
    }
    let a: Vec<Element> = (1..=n_max).map(|n| quotient(ring, bs, 0, n)).collect();
    let mut root = VerificationReport::new("family", pair.label()).fact("n_max", n_max);

    // per-module battery
    let mut modules = Vec::new();
    let mut module_node = VerificationReport::new("modules", "G_{a_n}, H_{a_n}");
    let mut gs = Vec::new();
    let mut hs = Vec::new();
    for (i, an) in a.iter().enumerate() {
        let tr = verify_total_reflexivity(pair, an, TR_DEPTH, bound)?;
        let end = verify_end_ring(pair, an, bound, IDEMPOTENT_BUDGET)?;
        let (g, h) = (module_g(pair, an)?, module_h(pair, an)?);
        let mut non_free = VerificationReport::new("non-free", format!("a_{} = {an}", i + 1));
        for m in [&g, &h] {
            let mu = m.minimal_generators();
            non_free = non_free.child(VerificationReport::new("mu", m.label()).fact("mu", mu).require(mu == 2, "mu != 2"));
        }
        modules.push(summarize(&g, i + 1, tr.verdict, end.verdict, bound)?);
        modules.push(summarize(&h, i + 1, tr.verdict, end.verdict, bound)?);
        module_node = module_node.child(tr).child(non_free).child(end);
        gs.push(g);
        hs.push(h);
    }
    root = root.child(module_node);

    // pairwise non-isomorphism, in the order G_1, H_1, G_2, H_2, ...
    let all: Vec<&PresentedModule> = gs.iter().zip(&hs).flat_map(|(g, h)| [g, h]).collect();
    let mut non_isomorphic = Vec::new();
    let mut noniso_node = VerificationReport::new("non-isomorphism", "pairwise");
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let (m, n) = (all[i], all[j]);
            let main = match noniso_certificate(m, n, Strategy::HomFreeness, bound) {
                Ok(r) => r,
                Err(Error::InconclusiveStrategy(why)) => {
                    VerificationReport::new("non-isomorphic", format!("{} !~ {}", m.label(), n.label()))
                        .fail(&format!("hom-freeness inconclusive: {why}"))
                }
                Err(e) => return Err(e),
            };
            let fitting = match noniso_certificate(m, n, Strategy::Fitting, bound) {
                Ok(r) => Some(r),
                Err(Error::InconclusiveStrategy(_)) => None,
                Err(e) => return Err(e),
            };
            non_isomorphic.push(NonIsoEntry {
                left: m.label(),
                right: n.label(),
                strategy: Strategy::HomFreeness,
                verdict: main.verdict,
                fitting: fitting.as_ref().map(|r| r.verdict),
            });
            noniso_node = noniso_node.child(main);
            if let Some(f) = fitting {
                noniso_node = noniso_node.child(f);
            }
        }
    }
    root = root.child(noniso_node);

    // Hom table
    let mut hom_table = Vec::new();
    let mut table_node = VerificationReport::new("hom-table", format!("m, n <= {n_max}"));
    for m in 1..=n_max {
        for n in 1..=n_max {
            let (am, an) = (&a[m - 1], &a[n - 1]);
            let hg = verify_hom_hg(pair, an, am, bound)?;
            let prod = am * an;
            hom_table.push(HomEntry {
                kind: "hg",
                m,
                n,
                identities: vec![
                    format!("Hom(H_{{{am}}}, G_{{{an}}}) = G_{{{prod}}}"),
                    format!("Hom(G_{{{an}}}, H_{{{am}}}) = H_{{{prod}}}"),
                ],
                verdict: hg.verdict,
            });
            table_node = table_node.child(hg);
        }
    }
    for m in 1..=n_max {
        for n in 1..=n_max {
            let (am, an) = (&a[m - 1], &a[n - 1]);
            let (node, claim) = if m >= n {
                let b = quotient(ring, bs, n, m);
                let claim = format!("Hom(G_{{{am}}}, G_{{{an}}}) = H_{{{b}}}");
                (verify_gg_part_a(pair, an, &b, bound)?, claim)
            } else {
                let b = quotient(ring, bs, m, n);
                let claim = format!("Hom(G_{{{am}}}, G_{{{an}}}) = G_{{{b}}}");
                (verify_gg_part_b(pair, am, &b, bound)?, claim)
            };
            hom_table.push(HomEntry { kind: "gg", m, n, identities: vec![claim], verdict: node.verdict });
            table_node = table_node.child(node);
        }
    }
    root = root.child(table_node);

    Ok(FamilyReport {
        ring: ring.to_string(),
        pair: [pair.x.to_string(), pair.y.to_string()],
        b: bs[..n_max].iter().map(|b| b.to_string()).collect(),
        a: a.iter().map(|e| e.to_string()).collect(),
        bound,
        modules,
        non_isomorphic,
        hom_table,
        verdict: root.verdict,
        report: root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::zerodiv::verify_exact_pair;

    #[test]
    fn smallest_instance() {
        let r = Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap();
        let p = verify_exact_pair(&r, &r.parse("x").unwrap(), &r.parse("y").unwrap(), 6)
            .unwrap()
            .with_regularity(6)
            .unwrap();
        let fam = run_family(&p, &[r.parse("z").unwrap()], 1, 4).unwrap();
        assert_eq!(fam.modules.len(), 2);
        assert_eq!(fam.non_isomorphic.len(), 1);
        assert_eq!(fam.hom_table.len(), 2);
        assert_eq!(fam.verdict, Verdict::Pass, "{}", fam.report.to_text());
    }

    #[test]
    fn rejects_unit_b() {
        let r = Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap();
        let p = verify_exact_pair(&r, &r.parse("x").unwrap(), &r.parse("y").unwrap(), 6)
            .unwrap()
            .with_regularity(6)
            .unwrap();
        assert!(matches!(run_family(&p, &[r.one()], 1, 4), Err(Error::PreconditionFailed(_))));
    }
}
