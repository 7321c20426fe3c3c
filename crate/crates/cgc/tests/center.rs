use cgc::center::{normal_form_fixedspace_check, Budgets, Center};
use cgc::classify::refl_length;
use cgc::gf::Fq;
use cgc::grp::{Group, GroupTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn center(kind: &str, q: u32, n: usize) -> Center {
    let f = Fq::prime(q).unwrap();
    let g = if kind == "gl" { Group::gl(&f, n) } else { Group::sp(&f, n) }.unwrap();
    Center::new(g, Budgets::default())
}

#[test]
fn structure_constants_commute() {
    for c in [center("gl", 3, 2), center("sp", 3, 1)] {
        let types = c.modified_types().unwrap();
        for l in &types {
            for m in &types {
                for e in &types {
                    assert_eq!(
                        c.structure_constant(l, m, e).unwrap(),
                        c.structure_constant(m, l, e).unwrap(),
                    );
                }
            }
        }
    }
}

#[test]
fn fiber_and_orbit_sum_agree_sl2_3() {
    let c = center("sp", 3, 1);
    let types = c.modified_types().unwrap();
    for l in &types {
        for m in &types {
            for e in &types {
                let r = c.orbit_sum_check(l, m, e).unwrap();
                assert!(r.agree, "{}", serde_json::to_string(&r).unwrap());
            }
        }
    }
}

#[test]
fn mass_balances_gl2_3() {
    let c = center("gl", 3, 2);
    let types = c.modified_types().unwrap();
    for l in &types {
        for m in &types {
            let terms = c.product_expand(l, m).unwrap();
            let (lhs, rhs) = c.mass(l, m, &terms).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn reflection_length_subadditive_sp2_3() {
    let f = Fq::prime(3).unwrap();
    let g = Group::sp(&f, 2).unwrap();
    let t = GroupTable::build(&g, 1_000_000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let a = t.element(rng.gen_range(0..t.len()));
        let b = t.element(rng.gen_range(0..t.len()));
        assert!(refl_length(&f, &a.mul(&b, &f)) <= refl_length(&f, &a) + refl_length(&f, &b));
    }
}

#[test]
fn additive_pairs_satisfy_fixed_space_identities() {
    let f = Fq::prime(3).unwrap();
    let g = Group::sp(&f, 1).unwrap();
    let t = GroupTable::build(&g, 1_000_000).unwrap();
    let mut additive = 0;
    for i in 0..t.len() {
        for j in 0..t.len() {
            let (a, b) = (t.element(i), t.element(j));
            if refl_length(&f, &a) + refl_length(&f, &b) == refl_length(&f, &a.mul(&b, &f)) {
                additive += 1;
                assert!(normal_form_fixedspace_check(&f, &a, &b).unwrap().holds());
            }
        }
    }
    assert!(additive > 0);
}
