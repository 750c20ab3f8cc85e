//! The periodic complex `... -> A^2 --gamma_a--> A^2 --eta_a--> A^2 -> ...`
//! and total reflexivity of `G_a`, `H_a`.
//!
//!     cargo run --example periodic_complex

use totref::family::{gamma, module_g, verify_complex, verify_ideal_iso, verify_total_reflexivity};
use totref::zerodiv::verify_exact_pair;
use totref::Ring;

fn main() -> totref::Result<()> {
    let ring = Ring::graded(5, &["x", "y", "z"], &["x*y"])?;
    let pair = verify_exact_pair(&ring, &ring.parse("x")?, &ring.parse("y")?, 8)?;
    let a = ring.parse("z^2")?;
    println!("gamma = {}", gamma(&pair, &a)?);
    println!("G_a: mu = {}, Fitt_1 = {:?}", module_g(&pair, &a)?.minimal_generators(), module_g(&pair, &a)?.fitting_ideal(1)?.gens);
    print!("{}", verify_complex(&pair, &a, 6, 8)?.to_text());
    print!("{}", verify_total_reflexivity(&pair, &a, 3, 6)?.to_text());
    print!("{}", verify_ideal_iso(&pair, &a, 8)?.to_text());
    Ok(())
}
