//! Hecke operators `T(p)` on Fourier expansions of weight `(j, k)`.
//!
//! With `R_p = {(p,0;0,1)} u {(1,b;0,p) : b mod p}` the image has coefficients
//! `b(S) = a(pS) + p^(k-2) sum_D a(D S D'/p)((x,y) adj D) + p^(2k+j-3) a(S/p)`,
//! where `a` vanishes off the lattice of its expansion.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{common_denominator, pow_i64, q, qi, scaled_numerator, Q};
use crate::error::{Error, Result};
use crate::expansion::{Coeff, Expansion, ScalarExpansion, VectorExpansion};
use crate::factor::{factorize, Factorization};
use crate::index::{enumerate, is_reduced, Coset, Index};
use crate::kernel::compute_at;
use crate::linalg::{charpoly as charpoly_q, det, solve_columns, StreamingEchelon};
use crate::rcpoly::HomogPoly;

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `D S D' / p` for `D = (a b; c d)`, if it lies on the lattice of `coset`.
fn conj_div(s: &Index, d: [i64; 4], p: i64, coset: Coset) -> Option<Index> {
    let [m11, m12, m22] = [2 * s.nu1, s.rho, 2 * s.nu2];
    let [a, b, c, e] = d;
    let r11 = a * a * m11 + 2 * a * b * m12 + b * b * m22;
    let r12 = a * c * m11 + (a * e + b * c) * m12 + b * e * m22;
    let r22 = c * c * m11 + 2 * c * e * m12 + e * e * m22;
    if r11 % (2 * p) != 0 || r12 % p != 0 || r22 % (2 * p) != 0 {
        return None;
    }
    let n = Index::new(r11 / (2 * p), r22 / (2 * p), r12 / p);
    (n.coset() == Some(coset)).then_some(n)
}

/// `T(p) F` for a vector-valued (or, with `j = 0`, scalar) expansion.
pub fn hecke_vector(f: &VectorExpansion, p: u64) -> Result<VectorExpansion> {
    if !is_prime(p) {
        return Err(Error::Construction(format!("{p} is not prime")));
    }
    if f.coset != Coset::Even {
        return Err(Error::WeightMismatch("T(p) is implemented on the even lattice".into()));
    }
    let pi = p as i64;
    let tmax = f.tmax / pi / 2 * 2;
    let (j, k) = (f.j, f.k);
    let mid = pow_q(pi, k - 2);
    let low = pow_q(pi, 2 * k + j as i64 - 3);
    let mut ds: Vec<[i64; 4]> = vec![[pi, 0, 0, 1]];
    for b in 0..pi {
        ds.push([1, b, 0, pi]);
    }
    let reps: Vec<Index> = enumerate(Coset::Even, tmax).into_iter().filter(is_reduced).collect();
    let vals = compute_at(&reps, |s| -> Option<Result<HomogPoly>> {
        let run = || -> Result<HomogPoly> {
            let mut acc = f.value(&s.scale(pi))?;
            for d in &ds {
                if let Some(m) = conj_div(s, *d, pi, Coset::Even) {
                    let a = f.value(&m)?;
                    if a.is_zero() {
                        continue;
                    }
                    // (x, y) adj(D)
                    let adj = [[q(d[3]), -q(d[1])], [-q(d[2]), q(d[0])]];
                    acc.add_scaled(&a.linear_subst(&adj), &mid);
                }
            }
            if let Some(m) = s.div_exact(pi) {
                if m.coset() == Some(Coset::Even) {
                    acc.add_scaled(&f.value(&m)?, &low);
                }
            }
            Ok(acc)
        };
        Some(run())
    });
    let mut ok = BTreeMap::new();
    for (n, v) in vals {
        let v = v?;
        if !v.is_zero() {
            ok.insert(n, v);
        }
    }
    let full = crate::kernel::fill_orbits(Coset::Even, tmax, 0, &ok, |u, c: &HomogPoly| c.rho(u, k));
    Ok(Expansion::from_map(j, k, Coset::Even, tmax, f.floor.clamp(0, 4), full))
}

fn pow_q(p: i64, e: i64) -> Q {
    if e >= 0 {
        qi(&pow_i64(p, e as u32))
    } else {
        Q::one() / qi(&pow_i64(p, (-e) as u32))
    }
}

pub fn hecke_scalar(f: &ScalarExpansion, p: u64) -> Result<ScalarExpansion> {
    Ok(hecke_vector(&f.to_vector(), p)?.to_scalar())
}

/// `lambda` with `T(p) F = lambda F`, checked at every available coefficient.
pub fn eigenvalue_of(f: &VectorExpansion, p: u64) -> Result<Q> {
    let tf = hecke_vector(f, p)?;
    eigenvalue_from(f, &tf)
}

/// The ratio of `tf` to `f`, checked at every index within `tf`'s window.
pub fn eigenvalue_from(f: &VectorExpansion, tf: &VectorExpansion) -> Result<Q> {
    let mut lambda: Option<Q> = None;
    let mut any = false;
    for n in enumerate(f.coset, tf.tmax) {
        let (a, b) = (f.at(&n), tf.at(&n));
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            if x.is_zero() {
                if !y.is_zero() {
                    return Err(Error::NotEigenform(format!("image nonzero where the form vanishes at {n}")));
                }
                continue;
            }
            any = true;
            let r = y / x;
            match &lambda {
                None => lambda = Some(r),
                Some(l) if *l != r => return Err(Error::NotEigenform(format!("ratio changes at {n}"))),
                _ => {}
            }
        }
    }
    if !any {
        return Err(Error::InsufficientPrecision { need: f.floor, have: tf.tmax });
    }
    Ok(lambda.unwrap())
}

/// A Hecke operator on a basis, with columns the images of basis elements.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeMatrix {
    pub p: u64,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<Q>>,
}

impl HeckeMatrix {
    pub fn charpoly(&self) -> Vec<BigInt> {
        charpoly(&self.matrix)
    }
}

/// Coefficients at reduced indices up to `tmax`, flattened.
fn coefficient_rows(f: &VectorExpansion, tmax: i64) -> Vec<Q> {
    enumerate(f.coset, tmax)
        .into_iter()
        .filter(is_reduced)
        .flat_map(|n| f.at(&n).coeffs)
        .collect()
}

/// `T(p)` on the span of `basis`, which must be linearly independent and
/// `T(p)`-stable on the available coefficients.
pub fn matrix_on_basis(basis: &[VectorExpansion], labels: &[String], p: u64) -> Result<HeckeMatrix> {
    let images: Vec<VectorExpansion> = basis.iter().map(|f| hecke_vector(f, p)).collect::<Result<_>>()?;
    matrix_from_images(basis, &images, labels, p)
}

pub fn matrix_from_images(basis: &[VectorExpansion], images: &[VectorExpansion], labels: &[String], p: u64) -> Result<HeckeMatrix> {
    let tmax = images.iter().map(|f| f.tmax).min().ok_or(Error::NotStable(p))?;
    let cols: Vec<Vec<Q>> = basis.iter().map(|f| coefficient_rows(f, tmax)).collect();
    let mut ech = StreamingEchelon::new(basis.len());
    for r in 0..cols[0].len() {
        ech.push(cols.iter().map(|c| c[r].clone()).collect());
    }
    if ech.rank() < basis.len() {
        return Err(Error::InsufficientPrecision { need: 2 * tmax, have: tmax });
    }
    let mut m = vec![vec![Q::zero(); basis.len()]; basis.len()];
    for (i, img) in images.iter().enumerate() {
        let rhs = coefficient_rows(img, tmax);
        let x = solve_columns(&cols, &rhs).map_err(|_| Error::NotStable(p))?;
        for (r, v) in x.into_iter().enumerate() {
            m[r][i] = v;
        }
    }
    Ok(HeckeMatrix { p, labels: labels.to_vec(), matrix: m })
}

/// Characteristic polynomial `det(X - M)`, low degree first, scaled to a
/// primitive integer polynomial with positive leading coefficient.
pub fn charpoly(m: &[Vec<Q>]) -> Vec<BigInt> {
    primitive(&charpoly_q(m))
}

pub fn primitive(c: &[Q]) -> Vec<BigInt> {
    let den = common_denominator(c.iter());
    let ints: Vec<BigInt> = c.iter().map(|x| scaled_numerator(x, &den)).collect();
    let g = ints.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
    let g = if ints.last().map_or(false, |l| l.is_negative()) { -g } else { g };
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Discriminant of `sum c_i X^i`: `(-1)^(n(n-1)/2) Res(f, f') / lead`.
pub fn discriminant(c: &[BigInt]) -> BigInt {
    let n = c.len() - 1;
    if n <= 1 {
        return BigInt::one();
    }
    let deriv: Vec<BigInt> = (1..=n).map(|i| &c[i] * BigInt::from(i)).collect();
    let res = resultant(c, &deriv);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    sign * res / &c[n]
}

/// Sylvester resultant of two integer polynomials (low degree first).
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut s = vec![vec![Q::zero(); size]; size];
    for i in 0..n {
        for (d, c) in f.iter().enumerate() {
            s[i][i + m - d] = qi(c);
        }
    }
    for i in 0..m {
        for (d, c) in g.iter().enumerate() {
            s[n + i][i + n - d] = qi(c);
        }
    }
    let r = det(&s);
    r.to_integer()
}

pub fn discriminant_factored(c: &[BigInt]) -> Factorization {
    factorize(&discriminant(c))
}

/// Renders `X^2 - 22368 X + 57231360` style output.
pub fn format_poly(c: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, a) in c.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let mag = a.abs();
        let sign = if a.is_negative() { "-" } else { "+" };
        let body = match (i, mag.is_one()) {
            (0, _) => mag.to_string(),
            (1, true) => "X".to_string(),
            (1, false) => format!("{mag} X"),
            (_, true) => format!("X^{i}"),
            (_, false) => format!("{mag} X^{i}"),
        };
        if out.is_empty() {
            out = if a.is_negative() { format!("-{body}") } else { body };
        } else {
            out = format!("{out} {sign} {body}");
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{igusa_generator, Igusa};

    /// Elliptic eigenform coefficients `a(p)` of weight 18 and 22 from
    /// `Delta E6` and `Delta E4 E6`.
    fn elliptic_ap(weight: i64, p: usize) -> i64 {
        let n = p + 1;
        let sigma = |m: usize, e: u32| -> i64 { (1..=m).filter(|d| m % d == 0).map(|d| (d as i64).pow(e)).sum() };
        let e4: Vec<i64> = (0..=n).map(|m| if m == 0 { 1 } else { 240 * sigma(m, 3) }).collect();
        let e6: Vec<i64> = (0..=n).map(|m| if m == 0 { 1 } else { -504 * sigma(m, 5) }).collect();
        let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
            (0..=n).map(|m| (0..=m).map(|i| a[i] * b[m - i]).sum()).collect()
        };
        let e4c = mul(&mul(&e4, &e4), &e4);
        let e6s = mul(&e6, &e6);
        let delta: Vec<i64> = e4c.iter().zip(&e6s).map(|(a, b)| (a - b) / 1728).collect();
        let f = if weight == 18 { mul(&delta, &e6) } else { mul(&mul(&delta, &e4), &e6) };
        f[p]
    }

    #[test]
    fn scalar_eigenvalues() {
        // Eisenstein series: (1 + p^(k-1)) (1 + p^(k-2))
        let f = igusa_generator(Igusa::Phi4, 16).unwrap();
        assert_eq!(eigenvalue_of(&f.to_vector(), 2).unwrap(), q(9 * 5));
        // Saito-Kurokawa lifts: a(p) + p^(k-1) + p^(k-2)
        let c = igusa_generator(Igusa::Chi10, 16).unwrap();
        assert_eq!(eigenvalue_of(&c.to_vector(), 2).unwrap(), q(elliptic_ap(18, 2) + 512 + 256));
        let c = igusa_generator(Igusa::Chi12, 24).unwrap();
        assert_eq!(eigenvalue_of(&c.to_vector(), 3).unwrap(), q(elliptic_ap(22, 3) + 177147 + 59049));
        assert_eq!(hecke_scalar(&c, 2).unwrap().to_vector(), hecke_vector(&c.to_vector(), 2).unwrap());
    }

    #[test]
    fn charpoly_and_discriminant() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let c = charpoly(&m);
        assert_eq!(format_poly(&c), "X^2 - 5 X + 5");
        assert_eq!(discriminant(&c), BigInt::from(5));
        let one = vec![vec![q(7)]];
        assert_eq!(format_poly(&charpoly(&one)), "X - 7");
        assert_eq!(discriminant(&charpoly(&one)), BigInt::one());
    }

    #[test]
    fn zero_maps_to_zero() {
        let z = VectorExpansion::zero(6, 10, Coset::Even, 8);
        assert!(hecke_vector(&z, 2).unwrap().is_zero());
    }
}
