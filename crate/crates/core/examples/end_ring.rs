//! `End(G_a)`, the idempotent scan, and the decomposable case `a = zx`.
//!
//!     cargo run --example end_ring

use totref::family::{decompose_when_a_in_x, module_g};
use totref::hom::{scan_idempotents, verify_end_op_iso, verify_end_ring};
use totref::zerodiv::verify_exact_pair;
use totref::Ring;

fn main() -> totref::Result<()> {
    let ring = Ring::graded(5, &["x", "y", "z"], &["x*y"])?;
    let pair = verify_exact_pair(&ring, &ring.parse("x")?, &ring.parse("y")?, 6)?.with_regularity(6)?;
    let z = ring.parse("z")?;
    print!("{}", verify_end_ring(&pair, &z, 6, 1 << 12)?.to_text());
    print!("{}", verify_end_op_iso(&pair, &z, 6)?.to_text());

    let zx = ring.parse("z*x")?;
    let scan = scan_idempotents(&module_g(&pair, &zx)?, 1 << 12, 6)?;
    println!("G_{{zx}}: {} candidates, idempotent {:?}", scan.candidates, scan.found);
    print!("{}", decompose_when_a_in_x(&pair, &z)?.to_text());
    Ok(())
}
