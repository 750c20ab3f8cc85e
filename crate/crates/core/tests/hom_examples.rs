use totref::family::{eta, gamma, module_g, module_h};
use totref::hom::{brute_force_hom_oracle, find_iso_witness, hom_presentation, verify_end_ring, verify_hom_hg};
use totref::module::{verify_iso_by_witness, PresentedModule};
use totref::zerodiv::{swap_pair, verify_exact_pair, ExactPair};
use totref::{Error, Ring};

const D: u32 = 8;

fn xy() -> ExactPair {
    let r = Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap();
    verify_exact_pair(&r, &r.parse("x").unwrap(), &r.parse("y").unwrap(), D).unwrap().with_regularity(D).unwrap()
}

fn assert_iso(m: &PresentedModule, n: &PresentedModule) {
    let out = find_iso_witness(m, n, D, 1 << 12).unwrap();
    let w = out.witness().unwrap_or_else(|| panic!("no witness for {} ~ {}: {out:?}", m.label(), n.label()));
    assert!(verify_iso_by_witness(m, n, w).passed());
}

#[test]
fn hom_h_z_g_z2_is_g_z3() {
    let p = xy();
    let (z, z2, z3) = (p.parse("z").unwrap(), p.parse("z^2").unwrap(), p.parse("z^3").unwrap());
    let hom = hom_presentation(&eta(&p, &z).unwrap(), &gamma(&p, &z2).unwrap(), D).unwrap().module();
    assert_iso(&hom, &module_g(&p, &z3).unwrap());
    assert!(verify_hom_hg(&p, &z2, &z, D).unwrap().passed());
}

#[test]
fn hom_g_0_g_z_is_h_0() {
    let p = xy();
    let (z, zero) = (p.parse("z").unwrap(), p.ring.zero());
    let hom = hom_presentation(&gamma(&p, &zero).unwrap(), &gamma(&p, &z).unwrap(), D).unwrap().module();
    assert_iso(&hom, &module_h(&p, &zero).unwrap());
}

#[test]
fn swapped_pair_gives_the_same_answer() {
    // Hom(H_b, G_a) over (y, x) against Hom(G_{-b}, H_{-a}) over (x, y)
    let p = xy();
    let sw = swap_pair(&p);
    let (a, b) = (p.parse("z^2").unwrap(), p.parse("z").unwrap());
    let over_yx = hom_presentation(&eta(&sw, &b).unwrap(), &gamma(&sw, &a).unwrap(), D).unwrap().module();
    let over_xy = hom_presentation(&gamma(&p, &-&b).unwrap(), &eta(&p, &-&a).unwrap(), D).unwrap().module();
    assert_iso(&over_yx, &over_xy);
    assert_iso(&over_xy, &module_h(&p, &p.parse("z^3").unwrap()).unwrap());
}

#[test]
fn non_regular_pair_over_z9() {
    let r = Ring::z_mod(3, 2).unwrap();
    let p = verify_exact_pair(&r, &r.from_int(3), &r.from_int(3), 0).unwrap().with_regularity(0).unwrap();
    let (a, b) = (r.from_int(2), r.from_int(3));
    let rep = verify_hom_hg(&p, &a, &b, 0).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    assert_eq!(rep.facts["pair_regular"], "no");

    // |Hom(H_3, G_2)| = |G_6|, both counted by brute force
    let hom = brute_force_hom_oracle(&eta(&p, &b).unwrap(), &gamma(&p, &a).unwrap(), 1 << 20).unwrap();
    let g6 = module_g(&p, &r.from_int(6)).unwrap();
    assert_eq!(hom.len() as u64, 3u64.pow(g6.length().unwrap()));

    assert!(matches!(verify_end_ring(&p, &b, 0, 16), Err(Error::PreconditionFailed(_))));
}

#[test]
fn end_of_h_1_is_free_of_rank_one() {
    let p = xy();
    let one = p.ring.one();
    let end = hom_presentation(&eta(&p, &one).unwrap(), &eta(&p, &one).unwrap(), D).unwrap().module();
    assert_iso(&end, &PresentedModule::free(&p.ring, 1));
}
