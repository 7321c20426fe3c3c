use cgc::combin::Partition;
use cgc::fh_symmetric::*;
use itertools::Itertools;

fn all_perms(n: usize) -> impl Iterator<Item = Perm> {
    (0..n).permutations(n).map(|v| Perm::from_images(v).unwrap())
}

/// The permutation restricted to its support, relabelled to 0..k.
fn restrict(g: &Perm) -> Perm {
    let supp: Vec<usize> = support(g).into_iter().collect();
    let pos = |x: usize| supp.iter().position(|&s| s == x).unwrap();
    Perm::from_images(supp.iter().map(|&s| pos(g.apply(s))).collect()).unwrap()
}

#[test]
fn centralizer_splits_over_support() {
    for n in 1..=7 {
        for g in all_perms(n) {
            let k = support(&g).len();
            let full = joint_centralizer_order(&g, &g);
            let r = restrict(&g);
            assert_eq!(full, joint_centralizer_order(&r, &r) * factorial(n - k), "{:?}", g.cycles());
            assert_eq!(full, centralizer_order_sym(&cycle_type(&g)));
        }
    }
}

#[test]
fn supports_union_when_weights_add() {
    let perms: Vec<Perm> = all_perms(6).collect();
    let mut additive = 0;
    for g in &perms {
        for h in &perms {
            let gh = g.compose(h);
            if refl_length_perm(g) + refl_length_perm(h) == refl_length_perm(&gh) {
                additive += 1;
                let union: std::collections::BTreeSet<usize> = support(g).union(&support(h)).copied().collect();
                assert_eq!(union, support(&gh));
            }
        }
    }
    assert!(additive > 720);
}

#[test]
fn transposition_square_example() {
    let one = Partition::new(vec![1]);
    assert_eq!(sc_symmetric(&one, &one, &Partition::empty(), 4).unwrap(), 6);
    // above the top degree the constant vanishes
    assert_eq!(sc_symmetric(&one, &one, &Partition::new(vec![3]), 6).unwrap(), 0);
}

#[test]
fn full_expansion_mass_s5() {
    let types: Vec<Partition> = (0..=4).flat_map(Partition::all).filter(|p| min_degree(p) <= 5).collect();
    for l in &types {
        for m in &types {
            let terms = product_expand_sym(l, m, 5).unwrap();
            let lhs: u128 = terms.iter().map(|(e, c)| *c as u128 * class_size_sym(&ncomplete(e, 5).unwrap())).sum();
            let rhs = class_size_sym(&ncomplete(l, 5).unwrap()) * class_size_sym(&ncomplete(m, 5).unwrap());
            assert_eq!(lhs, rhs, "{l} {m}");
        }
    }
}
