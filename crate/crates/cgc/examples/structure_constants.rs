//! Products of class sums in the center of the group algebra of Sp_n(3).
use cgc::center::{filter_top, Budgets, Center};
use cgc::gf::Fq;
use cgc::grp::Group;

fn main() -> cgc::Result<()> {
    let f = Fq::prime(3)?;
    let types = Center::new(Group::sp(&f, 1)?, Budgets::default()).modified_types()?;
    let (l, m) = (&types[1], &types[1]);
    for n in 1..=2 {
        let c = Center::new(Group::sp(&f, n)?, Budgets::default());
        let terms = c.product_expand(l, m)?;
        let (lhs, rhs) = c.mass(l, m, &terms)?;
        println!("Sp_{n}(3): K_lambda K_mu with lambda = mu = {}", l.describe(&f));
        for t in &terms {
            println!("  {:>4} x K_{}", t.c, t.eta.describe(&f));
        }
        println!("  top degree part: {} terms; mass {lhs} = {rhs}", filter_top(&terms, l, m).len());
    }

    let c = Center::new(Group::sp(&f, 2)?, Budgets::default());
    let eta = &types[0];
    let r = c.orbit_sum_check(l, m, eta)?;
    println!("fiber vs orbit sum at n=2: {}", serde_json::to_string(&r).expect("json"));
    Ok(())
}
