//! Certificates that two modules of the families are not isomorphic, and
//! an explicit isomorphism when they are.
//!
//!     cargo run --example non_isomorphism

use totref::family::{module_g, module_h};
use totref::hom::{find_iso_witness, noniso_certificate, Strategy};
use totref::zerodiv::verify_exact_pair;
use totref::{Error, Ring};

fn main() -> totref::Result<()> {
    let ring = Ring::graded(5, &["x", "y", "z"], &["x*y"])?;
    let pair = verify_exact_pair(&ring, &ring.parse("x")?, &ring.parse("y")?, 6)?;
    let (z, z2) = (ring.parse("z")?, ring.parse("z^2")?);
    let (gz, hz, gz2) = (module_g(&pair, &z)?, module_h(&pair, &z)?, module_g(&pair, &z2)?);
    for (m, n) in [(&gz, &hz), (&gz, &gz2)] {
        for s in [Strategy::HomFreeness, Strategy::Fitting, Strategy::Mu] {
            match noniso_certificate(m, n, s, 6) {
                Ok(r) => print!("{}", r.to_text()),
                Err(Error::InconclusiveStrategy(why)) => println!("{s:?} inconclusive: {why}"),
                Err(e) => return Err(e),
            }
        }
    }
    let g2z = module_g(&pair, &ring.parse("2*z")?)?;
    if let Some(w) = find_iso_witness(&g2z, &gz, 6, 1 << 12)?.witness() {
        println!("G_{{2z}} -> G_z: p = {}, q = {}", w.p, w.q);
    }
    Ok(())
}
