//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng as _, SeedableRng};
use totref::family::{decompose_when_a_in_x, eta, gamma, module_g, verify_complex, verify_total_reflexivity};
use totref::hom::{
    brute_force_hom_oracle, evaluation_set, hom_presentation, run_family, scan_idempotents, special_generators_gg,
    special_generators_hg, verify_end_ring, verify_ext_swap, verify_gg_part_a, verify_gg_part_b, verify_hom_hg,
    verify_special_generators,
};
use totref::module::PresentedModule;
use totref::zerodiv::{pair_report, verify_exact_pair, ExactPair, Regularity};
use totref::{Element, Error, Matrix, Ring, Verdict, VerificationReport};

type Outcome = Result<(), String>;

const D: u32 = 8;
const ORACLE_BUDGET: usize = 1 << 20;

fn graded_ring() -> Ring {
    Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap()
}

fn z9() -> Ring {
    Ring::z_mod(3, 2).unwrap()
}

fn pair(ring: &Ring, x: &str, y: &str, bound: u32) -> ExactPair {
    let p = verify_exact_pair(ring, &ring.parse(x).unwrap(), &ring.parse(y).unwrap(), bound).unwrap();
    p.with_regularity(bound).unwrap()
}

fn xy() -> ExactPair {
    pair(&graded_ring(), "x", "y", D)
}

fn z_pow(p: &ExactPair, n: u32) -> Element {
    p.parse("z").unwrap().pow(n)
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn passed(r: &VerificationReport) -> Outcome {
    ensure(r.passed(), || {
        let first = r.first_failure().unwrap_or(r);
        format!("{} :: {} did not pass", first.check, first.subject)
    })
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Exact pairs over Z/9, Z/8 and the graded ring, with regularity.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    for (ring, x, y) in [(z9(), "3", "3"), (Ring::z_mod(2, 3).unwrap(), "2", "4")] {
        let p = pair(&ring, x, y, 0);
        ensure(p.verified, || format!("({x}, {y}) over {ring} not exact"))?;
        ensure(p.regular == Regularity::No, || format!("({x}, {y}) over {ring} reported regular"))?;
    }
    let p = xy();
    ensure(p.verified && p.regular == Regularity::Yes, || "(x, y) not a regular exact pair".into())?;
    let rep = pair_report(&p, D).map_err(err)?;
    let cond = rep.find("regular-pair").ok_or("no regularity report")?;
    for key in ["x_regular_mod_y", "y_regular_mod_x", "intersection_zero"] {
        ensure(cond.facts.get(key) == Some(&serde_json::json!(true)), || format!("{key} is not true"))?;
    }
    within(start, Duration::from_secs(1))
}

/// The periodic complex is exact and self-dual through phi.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let ring = z9();
    let p = pair(&ring, "3", "3", 0);
    for a in 0..4 {
        passed(&verify_complex(&p, &ring.from_int(a), 6, 0).map_err(err)?)?;
    }
    let p = xy();
    for n in 0..4 {
        passed(&verify_complex(&p, &z_pow(&p, n), 6, D).map_err(err)?)?;
    }
    within(start, Duration::from_secs(30))
}

/// Total reflexivity of the corpus modules, and rejection of a
/// pseudo-resolution that is not exact.
fn criterion_3() -> Outcome {
    let ring = z9();
    let p = pair(&ring, "3", "3", 0);
    for a in 0..4 {
        passed(&verify_total_reflexivity(&p, &ring.from_int(a), 4, 0).map_err(err)?)?;
    }
    let p = xy();
    for n in 0..4 {
        passed(&verify_total_reflexivity(&p, &z_pow(&p, n), 4, D).map_err(err)?)?;
    }

    // Z/9 is self-injective, so the control is a matrix whose periodic
    // continuation is not an exact complex.
    let mut rng = StdRng::seed_from_u64(0x7a39);
    let rho = loop {
        let entries: Vec<Vec<Element>> =
            (0..2).map(|_| (0..2).map(|_| ring.from_int(rng.gen_range(0..9))).collect()).collect();
        let m = Matrix::from_rows(&ring, entries).unwrap();
        let cx = [m.clone(), m.clone()];
        if !matches!(totref::linalg::check_exact_at(&cx[1], &cx[0], 0), Ok(c) if c.pass) {
            break m;
        }
    };
    let m = PresentedModule::new(rho.clone());
    let res = vec![rho; 5];
    match m.ext_vanishing(&res, 4, 0) {
        Err(Error::InvalidResolution(_) | Error::NotAComplex) => {}
        Err(e) => return Err(format!("unexpected error on the control: {e}")),
        Ok(r) if r.passed() => return Err(format!("non-exact complex for {} accepted", m.presentation())),
        Ok(_) => {}
    }
    // over the graded ring the residue field is not totally reflexive
    let gr = graded_ring();
    let k = PresentedModule::new(Matrix::parse_literal(&gr, "[[x, y, z]]").unwrap());
    let bid = k.biduality_check(D).map_err(err)?;
    ensure(bid.failed(), || "A/(x, y, z) passed biduality".into())
}

/// Hom sets from the presentation agree with brute force on every pair of
/// gamma_a, eta_a over Z/9.
fn criterion_4() -> Outcome {
    let start = Instant::now();
    let ring = z9();
    let p = pair(&ring, "3", "3", 0);
    let mut mats = Vec::new();
    for a in 0..9 {
        let a = ring.from_int(a);
        mats.push(gamma(&p, &a).map_err(err)?);
        mats.push(eta(&p, &a).map_err(err)?);
    }
    let mut mismatches = 0;
    for r1 in &mats {
        for r2 in &mats {
            let hp = hom_presentation(r1, r2, 0).map_err(err)?;
            if evaluation_set(&hp, ORACLE_BUDGET).map_err(err)? != brute_force_hom_oracle(r1, r2, ORACLE_BUDGET).map_err(err)?
            {
                mismatches += 1;
            }
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} of {} pairs disagree", mats.len().pow(2)))?;
    let g0 = &mats[0];
    let n = brute_force_hom_oracle(g0, g0, ORACLE_BUDGET).map_err(err)?.len();
    ensure(n == 81, || format!("|Hom(G_0, G_0)| = {n}, expected 81"))?;
    within(start, Duration::from_secs(60))
}

/// Five-generator spans at D = 8.
fn criterion_5() -> Outcome {
    let p = xy();
    let e = |s: &str| p.parse(s).unwrap();
    let mut certified = 0;
    for (a, b) in [("z", "z"), ("z^2", "z"), ("z", "1"), ("z", "0")] {
        let (a, b) = (e(a), e(b));
        for sg in [special_generators_hg(&p, &a, &b, D), special_generators_gg(&p, &a, &b, D)] {
            match sg {
                Ok(sg) => {
                    passed(&verify_special_generators(&sg, D).map_err(err)?)?;
                    certified += 1;
                }
                Err(Error::PreconditionFailed(_)) => {}
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    ensure(certified == 8, || format!("only {certified} of 8 spans certified"))
}

/// The 18 identities of the Hom table for a_n = z^n, n <= 3.
fn criterion_6() -> Outcome {
    let start = Instant::now();
    let p = xy();
    let mut count = 0;
    for m in 1..=3 {
        for n in 1..=3 {
            passed(&verify_hom_hg(&p, &z_pow(&p, n), &z_pow(&p, m), D).map_err(err)?)?;
            let rep = if m >= n {
                verify_gg_part_a(&p, &z_pow(&p, n), &z_pow(&p, m - n), D)
            } else {
                verify_gg_part_b(&p, &z_pow(&p, m), &z_pow(&p, n - m), D)
            };
            passed(&rep.map_err(err)?)?;
            count += 2;
        }
    }
    ensure(count == 18, || format!("{count} identities"))?;
    within(start, Duration::from_secs(120))
}

/// End(G_{z^n}) = A without idempotents; the decomposable control splits.
fn criterion_7() -> Outcome {
    let p = xy();
    for n in 1..=3 {
        passed(&verify_end_ring(&p, &z_pow(&p, n), D, 1 << 12).map_err(err)?)?;
    }
    let zx = p.parse("z*x").unwrap();
    let scan = scan_idempotents(&module_g(&p, &zx).map_err(err)?, 1 << 12, D).map_err(err)?;
    ensure(scan.found.is_some(), || "no idempotent found for G_{zx}".into())?;
    passed(&decompose_when_a_in_x(&p, &p.parse("z").unwrap()).map_err(err)?)
}

/// The full battery for b = z, n_max = 3.
fn criterion_8() -> Outcome {
    let start = Instant::now();
    let p = xy();
    let fam = run_family(&p, &vec![p.parse("z").unwrap(); 3], 3, D).map_err(err)?;
    ensure(fam.modules.len() == 6, || format!("{} modules", fam.modules.len()))?;
    for m in &fam.modules {
        ensure(
            m.mu == 2 && m.totally_reflexive == Verdict::Pass && m.indecomposable == Verdict::Pass,
            || format!("{} fails the per-module battery", m.label),
        )?;
    }
    ensure(fam.non_isomorphic.len() == 15, || format!("{} certificates", fam.non_isomorphic.len()))?;
    for c in &fam.non_isomorphic {
        ensure(c.verdict == Verdict::Pass && c.fitting.map_or(true, |f| f == Verdict::Pass), || {
            format!("{} vs {} not separated", c.left, c.right)
        })?;
    }
    ensure(fam.non_isomorphic.iter().any(|c| c.fitting.is_some()), || "no Fitting cross-check applied".into())?;
    ensure(fam.hom_table.len() == 18 && fam.hom_table.iter().all(|h| h.verdict == Verdict::Pass), || {
        "Hom table incomplete or failing".into()
    })?;
    passed(&fam.report)?;
    within(start, Duration::from_secs(300))
}

/// Ext lengths are swap-symmetric.
fn criterion_9() -> Outcome {
    let p = pair(&graded_ring(), "x", "y", 6);
    let rep = verify_ext_swap(&p, &z_pow(&p, 2), &z_pow(&p, 1), 2, 6).map_err(err)?;
    passed(&rep)?;
    let ring = z9();
    let p = pair(&ring, "3", "3", 0);
    for a in 0..9 {
        for b in a..9 {
            passed(&verify_ext_swap(&p, &ring.from_int(a), &ring.from_int(b), 3, 0).map_err(err)?)?;
        }
    }
    Ok(())
}

/// Two runs of the battery through the CLI give byte-identical JSON.
fn criterion_10() -> Outcome {
    let ring = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../rings/f5_xyz_xy.json");
    let run = || {
        let args = [
            "totref", "family", "run-main", "--ring", ring.to_str().unwrap(), "--x", "x", "--y", "y", "--b", "z",
            "--n-max", "3", "--degree", "8", "--format", "json",
        ];
        let (mut out, mut errs) = (Vec::new(), Vec::new());
        let code = totref::cli::run(args, &mut out, &mut errs);
        (code, out)
    };
    let (c1, first) = run();
    let (c2, second) = run();
    ensure(c1 == 0 && c2 == 0, || format!("exit codes {c1}, {c2}"))?;
    ensure(first == second, || "reports differ".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exact pairs", criterion_1),
        ("periodic complex", criterion_2),
        ("total reflexivity", criterion_3),
        ("Hom oracle equivalence", criterion_4),
        ("five generators", criterion_5),
        ("Hom identities", criterion_6),
        ("endomorphism rings", criterion_7),
        ("main family battery", criterion_8),
        ("Ext swap", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} {name:<24} PASS ({took:.2}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} {name:<24} FAIL ({took:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
