//! Conjugacy types of GL and Sp elements, Wall form signs and representatives.
use cgc::classify::{build_rep, fixed_dim, gl_type, refl_length, type_of, wall_forms};
use cgc::combin::{enumerate_types, Kind};
use cgc::gf::Fq;
use cgc::mat::{j_block, j_block_eps, Matrix};

fn main() -> cgc::Result<()> {
    let f = Fq::prime(3)?;

    let u = Matrix::parse(&f, "1,1,0;0,1,0;0,0,2")?;
    println!("GL_3(3) element\n{}", u.to_text());
    println!("  type {}  fixed dim {}  reflection length {}", gl_type(&f, &u)?.describe(), fixed_dim(&f, &u), refl_length(&f, &u));

    let eps = f.nonsquare().expect("odd q");
    for (name, m) in [("J_4", j_block(&f, 4)?), ("J_2,eps", j_block_eps(&f, 2, eps)?), ("-J_2", j_block(&f, 2)?.neg(&f))] {
        let t = type_of(&f, Kind::Sp, &m)?;
        println!("{name}: {}  modified {}", t.describe(&f), t.modify(&f).describe(&f));
        for zeta in [1i8, -1] {
            for w in wall_forms(&f, &m, zeta)? {
                println!("  eigenvalue {zeta:+}: size {} mult {} sign {:+}", w.size, w.mult, w.sign);
            }
        }
    }

    println!("symplectic types of weight 2 over F_3 and their representatives:");
    for t in enumerate_types(&f, 2, Kind::Sp)? {
        let rep = build_rep(&f, &t)?;
        assert_eq!(type_of(&f, Kind::Sp, &rep)?, t);
        println!("  {:<40} rl {}", t.describe(&f), refl_length(&f, &rep));
    }
    Ok(())
}
