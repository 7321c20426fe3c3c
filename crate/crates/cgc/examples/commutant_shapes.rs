//! Solution spaces of A X = X B for unipotent symplectic blocks.
use cgc::center::{block_combinations, shape_check, UnipotentBlock};
use cgc::gf::Fq;

fn main() -> cgc::Result<()> {
    let f = Fq::prime(3)?;
    let eps = f.nonsquare().expect("odd q");
    let r = shape_check(&f, &[UnipotentBlock::J { m: 2 }, UnipotentBlock::JEps { m: 1, eps }])?;
    println!("{:?}", r);

    let combos = block_combinations(&f, 6);
    let mut bad = 0;
    for blocks in &combos {
        let r = shape_check(&f, blocks)?;
        if !r.holds() {
            bad += 1;
            println!("fails: {:?}", r.blocks);
        }
    }
    println!("{} block combinations up to size 6, {bad} failures", combos.len());
    Ok(())
}
