//! Centralizer growth under the embedding Sp_1(3) -> Sp_n(3), for every
//! non-identity class, with both sides of the identity.

use std::time::Instant;

use cgc::center::growth_check_sp;
use cgc::classify::build_rep;
use cgc::gf::Fq;
use cgc::grp::Group;

fn main() -> cgc::Result<()> {
    let f = Fq::prime(3)?;
    let g = Group::sp(&f, 1)?;
    for t in g.types()? {
        let u = build_rep(&f, &t)?;
        if u.is_identity() {
            continue;
        }
        for n in [2, 3] {
            let start = Instant::now();
            let r = growth_check_sp(&f, &u, 1, n, 100_000_000)?;
            println!(
                "{:<28} n={n} d={} |C_n|={:<12} rhs={:<12} {:?} ({:.2?})",
                t.describe(&f),
                r.d,
                r.lhs,
                r.rhs,
                r.status,
                start.elapsed()
            );
        }
    }
    Ok(())
}
