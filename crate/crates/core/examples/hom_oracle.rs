//! `Hom(Coker rho1, Coker rho2)` as a presented module, compared against
//! brute-force enumeration over `Z/9`.
//!
//!     cargo run --example hom_oracle

use totref::family::{eta, gamma};
use totref::hom::{brute_force_hom_oracle, evaluation_set, hom_presentation};
use totref::zerodiv::verify_exact_pair;
use totref::Ring;

fn main() -> totref::Result<()> {
    let ring = Ring::z_mod(3, 2)?;
    let pair = verify_exact_pair(&ring, &ring.from_int(3), &ring.from_int(3), 0)?;
    for (a, b) in [(0, 0), (3, 2), (1, 3)] {
        let (ra, rb) = (gamma(&pair, &ring.from_int(a))?, eta(&pair, &ring.from_int(b))?);
        let hp = hom_presentation(&rb, &ra, 0)?;
        let computed = evaluation_set(&hp, 1 << 20)?;
        let oracle = brute_force_hom_oracle(&rb, &ra, 1 << 20)?;
        println!(
            "Hom(H_{b}, G_{a}): {} generators, relations {}, |Hom| = {} (brute force {}, equal: {})",
            hp.ngens(),
            hp.relations,
            computed.len(),
            oracle.len(),
            computed == oracle
        );
    }
    Ok(())
}
