//! Top-degree structure constants do not depend on n.
use cgc::center::Budgets;
use cgc::combin::Kind;
use cgc::gf::Fq;
use cgc::selftest::stability_check;

fn main() -> cgc::Result<()> {
    let f = Fq::prime(3)?;
    for (kind, n1, n2) in [(Kind::Sp, 1, 2), (Kind::Gl, 1, 2), (Kind::Gl, 2, 3)] {
        let r = stability_check(kind, &f, n1, n2, Budgets::default())?;
        println!(
            "{} q=3 n={n1}->{n2}: {} triples, {} unstable, {} non-monotone, {} mass failures",
            r.kind,
            r.triples.len(),
            r.unstable,
            r.non_monotone,
            r.mass_failures
        );
        for t in r.triples.iter().filter(|t| t.c1 > 0).take(4) {
            println!("  c = {} at both ranks for lambda {} mu {} eta {}", t.c1, t.lambda, t.mu, t.eta);
        }
    }
    Ok(())
}
