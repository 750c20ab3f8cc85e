//! Exact pairs of zero divisors and their regularity, over finite and
//! graded rings.
//!
//!     cargo run --example exact_pairs

use totref::ring::RingDescriptor;
use totref::zerodiv::{pair_from_factorization, pair_report, verify_exact_pair};
use totref::Ring;

fn main() -> totref::Result<()> {
    for (ring, x, y) in [(Ring::z_mod(3, 2)?, "3", "3"), (Ring::z_mod(2, 3)?, "2", "4")] {
        let pair = verify_exact_pair(&ring, &ring.parse(x)?, &ring.parse(y)?, 0)?;
        print!("{}", pair_report(&pair, 0)?.to_text());
    }

    // A = F_5[x, y, z]/(xy), built from the factorisation of xy
    let poly = RingDescriptor::from_json(r#"{"kind": "graded", "p": 5, "vars": ["x", "y", "z"], "relations": []}"#)?;
    let (a, pair) = pair_from_factorization(&poly, "x", "y", 6)?;
    println!("{a}");
    print!("{}", pair_report(&pair, 6)?.to_text());
    Ok(())
}
