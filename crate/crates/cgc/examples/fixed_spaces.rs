//! Reflection-length additivity, fixed spaces and centralizer intersections in SL_2(3).
use cgc::center::{intersection_growth_check, normal_form_fixedspace_check};
use cgc::gf::Fq;
use cgc::grp::{Group, GroupTable};

fn main() -> cgc::Result<()> {
    let f = Fq::prime(3)?;
    let g = Group::sp(&f, 1)?;
    let t = GroupTable::build(&g, 1_000_000)?;
    let reps: Vec<_> = t.class_reps().into_iter().map(|i| t.element(i)).collect();
    for a in &reps {
        for b in &reps {
            let fs = normal_form_fixedspace_check(&f, a, b)?;
            if !fs.additive {
                continue;
            }
            let gr = intersection_growth_check(&f, a, b, 1, 2, 100_000_000)?;
            println!(
                "rl {} + {} = {}  spaces ok: {}  |C(U1)∩C(U2)| at n=2: {} vs {} ({:?})",
                fs.rl1,
                fs.rl2,
                fs.rl12,
                fs.holds(),
                gr.lhs,
                gr.rhs,
                gr.status
            );
        }
    }
    Ok(())
}
