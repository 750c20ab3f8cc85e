//! The complete battery for `a_n = z^n`, `n <= 3`, over `F_5[x, y, z]/(xy)`.
//!
//!     cargo run --release --example main_family

use std::time::Instant;

use totref::hom::run_family;
use totref::zerodiv::verify_exact_pair;
use totref::Ring;

fn main() -> totref::Result<()> {
    let ring = Ring::graded(5, &["x", "y", "z"], &["x*y"])?;
    let pair = verify_exact_pair(&ring, &ring.parse("x")?, &ring.parse("y")?, 8)?.with_regularity(8)?;
    let z = ring.parse("z")?;
    let start = Instant::now();
    let fam = run_family(&pair, &[z.clone(), z.clone(), z], 3, 8)?;
    for m in &fam.modules {
        println!(
            "{:<10} mu={} reflexive={:?} indecomposable={:?} hilbert={:?}",
            m.label, m.mu, m.totally_reflexive, m.indecomposable, m.hilbert.as_deref().unwrap_or(&[])
        );
    }
    let passed = fam.non_isomorphic.iter().filter(|e| e.verdict == totref::Verdict::Pass).count();
    println!("non-isomorphic pairs certified: {passed}/{}", fam.non_isomorphic.len());
    for e in &fam.hom_table {
        println!("[{:?}] {}", e.verdict, e.identities.join("; "));
    }
    println!("overall: {:?} in {:.1?}", fam.verdict, start.elapsed());
    Ok(())
}
