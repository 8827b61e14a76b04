//! Solves for RC-polynomials and checks the generator polynomials.
use siegel::rcpoly::{elliptic_rc, is_harmonic, is_homogeneous, m_op, solve_rc_space};
use siegel::structure::generator_polynomial;

fn main() {
    println!("p_(4,(6,5)) = {:?}", elliptic_rc(4, 6, 5).unwrap());
    let basis = solve_rc_space(6, 0, &[4, 6]);
    println!("dim H_(6,0)(4,6) = {}", basis.len());
    for k in [15, 17, 19, 21, 23] {
        let (p, ty) = generator_polynomial(k).unwrap();
        let m = m_op(&p, &ty);
        println!("F{k}: type {ty:?} homogeneous {} harmonic {}", is_homogeneous(&m, 6, 1), is_harmonic(&m, &ty));
    }
}
