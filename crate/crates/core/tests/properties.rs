use proptest::prelude::*;

use totref::family::{eta, gamma};
use totref::hom::{brute_force_hom_oracle, evaluation_set, hom_presentation, verify_end_op_iso};
use totref::linalg::{kernel_gens, solve_right};
use totref::zerodiv::{swap_pair, verify_exact_pair};
use totref::{Element, Matrix, Ring};

fn graded() -> Ring {
    Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap()
}

/// Random polynomial text in x, y, z of degree <= 3.
fn poly_text() -> impl Strategy<Value = String> {
    prop::collection::vec((0u64..5, 0u32..3, 0u32..3, 0u32..3), 0..5).prop_map(|terms| {
        if terms.is_empty() {
            return "0".to_string();
        }
        terms.iter().map(|(c, i, j, k)| format!("{c}*x^{i}*y^{j}*z^{k}")).collect::<Vec<_>>().join(" + ")
    })
}

fn z_mod_matrix(ring: &Ring, entries: &[i64], rows: usize) -> Matrix {
    let rows: Vec<Vec<Element>> = entries.chunks(entries.len() / rows).map(|r| r.iter().map(|&c| ring.from_int(c)).collect()).collect();
    Matrix::from_rows(ring, rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graded_ring_axioms(a in poly_text(), b in poly_text(), c in poly_text()) {
        let r = graded();
        let (a, b, c) = (r.parse(&a).unwrap(), r.parse(&b).unwrap(), r.parse(&c).unwrap());
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert!((&a * &r.one()) == a);
    }

    #[test]
    fn print_then_parse(a in poly_text()) {
        let r = graded();
        let e = r.parse(&a).unwrap();
        prop_assert_eq!(r.parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn z27_ring_axioms(a in -30i64..30, b in -30i64..30, c in -30i64..30) {
        let r = Ring::z_mod(3, 3).unwrap();
        let (ea, eb, ec) = (r.from_int(a), r.from_int(b), r.from_int(c));
        prop_assert_eq!(&(&ea * &eb) + &ec, r.from_int(a * b + c));
        prop_assert_eq!(&ea - &eb, r.from_int(a - b));
        prop_assert_eq!(r.parse(&ea.to_string()).unwrap(), ea);
    }

    #[test]
    fn units_match_exhaustive_search(a in 0i64..27) {
        let r = Ring::z_mod(3, 3).unwrap();
        let e = r.from_int(a);
        let exhaustive = r.enumerate_carrier().unwrap().iter().any(|f| (&e * f).is_one());
        prop_assert_eq!(r.is_unit(&e), exhaustive);
        if let Some(inv) = r.inverse(&e) {
            prop_assert!((&e * &inv).is_one());
        }
    }

    #[test]
    fn solve_recovers_a_consistent_system(a in prop::collection::vec(0i64..9, 6), x in prop::collection::vec(0i64..9, 3)) {
        let r = Ring::z_mod(3, 2).unwrap();
        let a = z_mod_matrix(&r, &a, 2);
        let b = a.mul(&z_mod_matrix(&r, &x, 3)).unwrap();
        let y = solve_right(&a, &b, 0).unwrap().expect("b lies in the image");
        prop_assert_eq!(a.mul(&y).unwrap(), b);
    }

    #[test]
    fn kernel_generators_span_the_kernel(a in prop::collection::vec(0i64..9, 4)) {
        let r = Ring::z_mod(3, 2).unwrap();
        let a = z_mod_matrix(&r, &a, 2);
        let gens = kernel_gens(&a, 0).unwrap();
        for g in &gens {
            prop_assert!(a.apply(g).unwrap().iter().all(Element::is_zero));
        }
        let k = Matrix::from_cols(&r, 2, &gens);
        for u in 0..9 {
            for v in 0..9 {
                let col = vec![r.from_int(u), r.from_int(v)];
                if a.apply(&col).unwrap().iter().all(Element::is_zero) {
                    let found = solve_right(&k, &Matrix::column(&r, &col), 0).unwrap();
                    prop_assert!(found.is_some(), "({}, {}) missing from the span", u, v);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Presentations over Z/9 and Z/8 need not come from an exact pair.
    #[test]
    fn hom_agrees_with_brute_force(p in prop::collection::vec(0i64..9, 4), q in prop::collection::vec(0i64..9, 4), eight in any::<bool>()) {
        let r = if eight { Ring::z_mod(2, 3).unwrap() } else { Ring::z_mod(3, 2).unwrap() };
        let (r1, r2) = (z_mod_matrix(&r, &p, 2), z_mod_matrix(&r, &q, 2));
        let hp = hom_presentation(&r1, &r2, 0).unwrap();
        prop_assert_eq!(evaluation_set(&hp, 1 << 20).unwrap(), brute_force_hom_oracle(&r1, &r2, 1 << 20).unwrap());
    }

    #[test]
    fn swap_identities(a in poly_text()) {
        let r = graded();
        let pair = verify_exact_pair(&r, &r.parse("x").unwrap(), &r.parse("y").unwrap(), 4).unwrap();
        let sw = swap_pair(&pair);
        let a = r.parse(&a).unwrap();
        prop_assert_eq!(gamma(&sw, &a).unwrap(), eta(&pair, &-&a).unwrap());
        prop_assert_eq!(eta(&sw, &a).unwrap(), gamma(&pair, &-&a).unwrap());
        let (g, h) = (gamma(&pair, &a).unwrap(), eta(&pair, &a).unwrap());
        prop_assert!(g.mul(&h).unwrap().is_zero() && h.mul(&g).unwrap().is_zero());
    }
}

#[test]
fn end_op_anti_isomorphism_over_z9() {
    let r = Ring::z_mod(3, 2).unwrap();
    let pair = verify_exact_pair(&r, &r.from_int(3), &r.from_int(3), 0).unwrap();
    for a in 0..9 {
        let a = r.from_int(a);
        let rep = verify_end_op_iso(&pair, &a, 0).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
        // brute-force sizes of End(G_a) and End(G_a*)
        let g = gamma(&pair, &a).unwrap();
        let gt = g.transpose();
        assert_eq!(
            brute_force_hom_oracle(&g, &g, 1 << 20).unwrap().len(),
            brute_force_hom_oracle(&gt, &gt, 1 << 20).unwrap().len()
        );
    }
}
