//! Finite fields, square classes, irreducible polynomials and the dual involution.
use cgc::gf::Fq;
use cgc::poly::{dual_irreducible_keys, factor, monic_irreducibles, Poly};

fn main() -> cgc::Result<()> {
    for name in ["3", "5", "7", "3^2"] {
        let f = Fq::parse(name)?;
        let squares: Vec<String> = f.units().filter(|&a| f.is_square(a)).map(|a| a.to_string()).collect();
        println!(
            "F_{}: primitive {}, nonsquare {:?}, squares [{}]",
            f.q(),
            f.primitive(),
            f.nonsquare(),
            squares.join(", ")
        );
    }

    let f = Fq::prime(3)?;
    for d in 1..=4 {
        println!(
            "deg {d}: {} monic irreducibles, {} dual-irreducible keys",
            monic_irreducibles(&f, d).len(),
            dual_irreducible_keys(&f, d).len()
        );
    }

    let g = Poly::from_ints(&f, &[2, 0, 1, 1, 1]); // ascending coefficients
    println!("g = {}", g.pretty());
    println!("dual(g) = {}", g.dual(&f)?.pretty());
    for (p, e) in factor(&f, &g)? {
        println!("  factor ({})^{e}  self-dual: {}", p.pretty(), p.is_self_dual(&f));
    }
    Ok(())
}
