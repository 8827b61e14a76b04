//! Expands the Igusa generators and checks chi5^2 = chi10.
use siegel::classical::{igusa_generator, mul, Igusa};
use siegel::index::Index;

fn main() -> siegel::error::Result<()> {
    let tmax = 8;
    for g in Igusa::ALL {
        let f = igusa_generator(g, tmax)?;
        println!("{g:<6} weight {:>2}  {} coefficients", g.weight(), f.coeffs().len());
    }
    let c5 = igusa_generator(Igusa::Chi5, tmax)?;
    let c10 = igusa_generator(Igusa::Chi10, tmax)?;
    println!("chi5^2 == chi10: {}", mul(&c5, &c5)?.agrees_with(&c10, tmax));
    println!("phi4 at (1,0,0): {}", igusa_generator(Igusa::Phi4, 2)?.at(&Index::from_nmr(1, 0, 0)));
    Ok(())
}
