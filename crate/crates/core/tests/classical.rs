use proptest::prelude::*;
use siegel::arith::q;
use siegel::classical::theta::{theta_chi5, theta_generator};
use siegel::classical::{divide, igusa_generator, mul, Igusa};
use siegel::expansion::Expansion;
use siegel::index::{enumerate, Coset, Index};

#[test]
fn theta_and_maass_routes_agree() {
    for g in [Igusa::Phi4, Igusa::Phi6, Igusa::Chi10, Igusa::Chi12] {
        let a = theta_generator(g.weight(), 6).unwrap();
        let b = igusa_generator(g, 6).unwrap();
        assert!(a.agrees_with(&b, 6), "{g}");
    }
    let a = theta_chi5(6).unwrap();
    let b = igusa_generator(Igusa::Chi5, 6).unwrap();
    assert!(a.agrees_with(&b, 6));
}

#[test]
fn normalizations() {
    for g in [Igusa::Phi4, Igusa::Phi6] {
        assert_eq!(igusa_generator(g, 4).unwrap().at(&Index::ZERO), q(1));
    }
    for g in [Igusa::Chi10, Igusa::Chi12] {
        let f = igusa_generator(g, 6).unwrap();
        assert_eq!(f.at(&Index::from_nmr(1, 1, 1)), q(1));
        assert!(f.is_cusp());
    }
    let c5 = igusa_generator(Igusa::Chi5, 6).unwrap();
    assert_eq!(c5.at(&Index::new(1, 1, 1)), q(1));
    assert_eq!(c5.coset, Coset::Odd);
}

#[test]
fn every_generator_is_equivariant() {
    for g in Igusa::ALL {
        let f = igusa_generator(g, 10).unwrap();
        assert!(f.check_equivariance(), "{g}");
        assert!(f.coeffs().keys().all(|n| n.coset() == Some(f.coset)));
    }
}

#[test]
fn chi5_squared_is_chi10() {
    let c5 = igusa_generator(Igusa::Chi5, 12).unwrap();
    let c10 = igusa_generator(Igusa::Chi10, 12).unwrap();
    let sq = mul(&c5, &c5).unwrap();
    assert!(sq.tmax >= 12);
    assert!(sq.agrees_with(&c10, 12));
    // positive-determinant support only
    assert!(enumerate(Coset::Odd, 12).iter().all(|n| c5.at(n) == q(0) || n.is_positive()));
}

#[test]
fn phi4_squared_is_the_weight_eight_eisenstein_series() {
    // M_8 is one-dimensional
    let p4 = igusa_generator(Igusa::Phi4, 8).unwrap();
    let sq = mul(&p4, &p4).unwrap();
    assert_eq!(sq.at(&Index::from_nmr(1, 0, 0)), q(480));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]
    #[test]
    fn multiply_then_divide(a in -5i64..5, b in -5i64..5) {
        let p4 = igusa_generator(Igusa::Phi4, 6).unwrap();
        let p6 = igusa_generator(Igusa::Phi6, 6).unwrap();
        let c10 = igusa_generator(Igusa::Chi10, 6).unwrap();
        let f = Expansion::lincomb(&[q(a), q(b)], &[&mul(&p4, &p6).unwrap(), &c10]).unwrap();
        let g = mul(&f, &p6).unwrap();
        prop_assert!(divide(&g, &p6).unwrap().agrees_with(&f, 6));
    }
}
