//! Symmetric groups: stable structure constants and polynomial index functions.
use cgc::combin::Partition;
use cgc::fh_symmetric::*;

fn main() -> cgc::Result<()> {
    let one = Partition::new(vec![1]);
    let two = Partition::new(vec![2]);
    for (l, m, e) in [(&one, &one, Partition::new(vec![1, 1])), (&one, &one, Partition::new(vec![2])), (&one, &one, Partition::empty()), (&one, &two, Partition::new(vec![3]))] {
        let cs = stability_sym(l, m, &e, 4..=9)?;
        println!("c^{e}_{{{l},{m}}}(n), n = 4..9: {cs:?}");
    }

    let t12 = Perm::from_cycles(3, &[&[1, 2]])?;
    let t23 = Perm::from_cycles(3, &[&[2, 3]])?;
    for (name, g, h) in [("(12),(23)", &t12, &t23), ("(12),(12)", &t12, &t12)] {
        let values: Vec<i128> = (3..=9).map(|n| index_function(g, h, n).map(|v| v as i128)).collect::<cgc::Result<_>>()?;
        let deg = support(g).union(&support(h)).count() - support(&g.compose(h)).len();
        println!("index function of {name}: {values:?}, polynomial of degree {deg}: {}", is_polynomial_of_degree(&values, deg));
    }

    let r = cgc::selftest::stability_check_sym(4, 4..=7)?;
    println!("all top triples fitting S_4 stable on 4..7: {} ({} triples)", r.passed, r.triples.len());
    Ok(())
}
