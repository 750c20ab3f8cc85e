//! The five special generators of the maps `A^2 -> A^2` compatible with two
//! presentations, with both inclusions checked degree by degree.
//!
//!     cargo run --example five_generators

use totref::hom::{special_generators_gg, special_generators_hg, verify_special_generators};
use totref::zerodiv::verify_exact_pair;
use totref::Ring;

fn main() -> totref::Result<()> {
    let ring = Ring::graded(5, &["x", "y", "z"], &["x*y"])?;
    let pair = verify_exact_pair(&ring, &ring.parse("x")?, &ring.parse("y")?, 8)?.with_regularity(8)?;
    let (a, b) = (ring.parse("z^2")?, ring.parse("z")?);
    for sg in [special_generators_hg(&pair, &a, &b, 8)?, special_generators_gg(&pair, &a, &b, 8)?] {
        for (i, psi) in sg.psi.iter().enumerate() {
            println!("{} psi_{} = {psi}", sg.kind, i + 1);
        }
        print!("{}", verify_special_generators(&sg, 8)?.to_text());
    }
    Ok(())
}
