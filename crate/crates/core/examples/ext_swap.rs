//! Ext lengths under swapping the roles of the two families, over the
//! graded ring (per degree) and over `Z/9` (total length).
//!
//!     cargo run --example ext_swap

use totref::hom::verify_ext_swap;
use totref::zerodiv::verify_exact_pair;
use totref::Ring;

fn main() -> totref::Result<()> {
    let ring = Ring::graded(5, &["x", "y", "z"], &["x*y"])?;
    let pair = verify_exact_pair(&ring, &ring.parse("x")?, &ring.parse("y")?, 6)?.with_regularity(6)?;
    print!("{}", verify_ext_swap(&pair, &ring.parse("z^2")?, &ring.parse("z")?, 2, 6)?.to_text());

    let z9 = Ring::z_mod(3, 2)?;
    let pair = verify_exact_pair(&z9, &z9.from_int(3), &z9.from_int(3), 0)?;
    print!("{}", verify_ext_swap(&pair, &z9.from_int(3), &z9.from_int(1), 3, 0)?.to_text());
    Ok(())
}
