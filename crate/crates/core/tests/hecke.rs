use std::sync::OnceLock;

use num_bigint::BigInt;
use siegel::arith::q;
use siegel::cli::{eisenstein_reference, hecke_reference, high_first};
use siegel::factor::factorize;
use siegel::hecke::{discriminant, eigenvalue_of, format_poly, hecke_vector, matrix_on_basis};
use siegel::structure::{build_f10, build_f12, coefficient_rank, hecke_row, recover_e6, recover_theta8, HeckeRow, Workspace};

fn ws(p: u64) -> &'static Workspace {
    static W2: OnceLock<Workspace> = OnceLock::new();
    static W3: OnceLock<Workspace> = OnceLock::new();
    match p {
        2 => W2.get_or_init(|| Workspace::new(12).unwrap()),
        _ => W3.get_or_init(|| Workspace::new(18).unwrap()),
    }
}

fn row(p: u64, k: i64) -> HeckeRow {
    hecke_row(p, k, ws(p)).unwrap()
}

#[test]
fn t2_table() {
    for k in [8, 10, 11, 12, 13, 15, 17, 19] {
        let r = row(2, k);
        assert_eq!(high_first(&r.cusp), hecke_reference(2, k).unwrap(), "k = {k}");
    }
    for k in [6, 10, 12] {
        let l = eisenstein_reference(k).unwrap();
        assert_eq!(row(2, k).eisenstein(), vec![BigInt::from(-l), BigInt::from(1)], "k = {k}");
    }
}

#[test]
fn t3_table() {
    for k in [8, 10, 11, 12, 13, 15, 17] {
        let r = row(3, k);
        assert_eq!(high_first(&r.cusp), hecke_reference(3, k).unwrap(), "k = {k}");
    }
}

#[test]
fn discriminants() {
    let cases = [
        (2, 12, "2^10 * 3^2 * 7^2 * 601"),
        (3, 12, "2^14 * 3^6 * 7^2 * 13^2 * 601"),
        (2, 15, "2^10 * 3^2 * 29 * 83 * 103"),
        (3, 15, "2^12 * 3^8 * 29 * 53^2 * 83 * 103"),
    ];
    for (p, k, want) in cases {
        let r = row(p, k);
        assert_eq!(factorize(&discriminant(&r.cusp)).to_string(), want, "T({p}) at k = {k}");
    }
}

#[test]
fn e6_and_theta8_are_eigenforms() {
    let e6 = recover_e6(8).unwrap();
    assert_eq!(eigenvalue_of(&e6, 2).unwrap(), q(-408));
    let th = recover_theta8(12).unwrap();
    assert_eq!(eigenvalue_of(&th, 2).unwrap(), q(0));
    assert_eq!(eigenvalue_of(&th, 3).unwrap(), q(-27000));
}

#[test]
fn f10_and_f12_are_not_eigenforms() {
    let f10 = build_f10(16).unwrap();
    let f12 = build_f12(16).unwrap();
    assert!(!f12.is_zero() && f12.is_cusp());
    assert!(!f10.is_cusp());
    for f in [&f10, &f12] {
        assert!(eigenvalue_of(f, 2).is_err());
        let tf = hecke_vector(f, 2).unwrap();
        assert_eq!(coefficient_rank(&[&f.truncate(tf.tmax), &tf]), 2);
    }
    let m = matrix_on_basis(&[f10.truncate(8), hecke_vector(&f10, 2).unwrap()], &["F10".into(), "TF10".into()], 2).unwrap();
    assert_eq!(format_poly(&m.charpoly()), "X^2 - 57192 X + 93260160");
}
