//! Even-weight generators as Maass lifts of index-one Jacobi forms, built
//! from half-integral weight forms in the Kohnen plus space.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{bernoulli, pow_i64, q, qi, Q};
use crate::error::{Error, Result};
use crate::expansion::ScalarExpansion;
use crate::index::{enumerate, Coset};
use crate::linalg::column_relations;

type Series = Vec<BigInt>;

fn series_mul(a: &Series, b: &Series, n: usize) -> Series {
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (l, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + l] += x * y;
        }
    }
    out
}

/// `theta = sum_{n in Z} q^(n^2)`.
fn theta(n: usize) -> Series {
    let mut s = vec![BigInt::zero(); n + 1];
    let mut m = 0usize;
    while m * m <= n {
        s[m * m] += if m == 0 { 1 } else { 2 };
        m += 1;
    }
    s
}

/// `sum_{m odd} sigma_1(m) q^m`, a weight-2 form on Gamma_0(4).
fn odd_sigma(n: usize) -> Series {
    let mut s = vec![BigInt::zero(); n + 1];
    for m in (1..=n).step_by(2) {
        let sigma: usize = (1..=m).filter(|d| m % d == 0).sum();
        s[m] = BigInt::from(sigma);
    }
    s
}

/// Basis of the plus space of weight `k - 1/2` (k even), as `q`-series.
pub fn plus_space(k: i64, n: usize) -> Vec<Vec<Q>> {
    let th = theta(n);
    let f = odd_sigma(n);
    let mut basis: Vec<Series> = Vec::new();
    let top = 2 * k - 1;
    let mut j = 0;
    while top - 4 * j >= 0 {
        let mut s: Series = vec![BigInt::zero(); n + 1];
        s[0] = BigInt::one();
        for _ in 0..(top - 4 * j) {
            s = series_mul(&s, &th, n);
        }
        for _ in 0..j {
            s = series_mul(&s, &f, n);
        }
        basis.push(s);
        j += 1;
    }
    // coefficients must vanish at N = 1, 2 mod 4
    let bad: Vec<usize> = (0..=n).filter(|m| m % 4 == 1 || m % 4 == 2).collect();
    let cols: Vec<Vec<Q>> = basis.iter().map(|s| bad.iter().map(|&m| qi(&s[m])).collect()).collect();
    column_relations(&cols)
        .into_iter()
        .map(|rel| {
            (0..=n)
                .map(|m| rel.iter().zip(&basis).fold(Q::zero(), |acc, (c, s)| acc + c * qi(&s[m])))
                .collect()
        })
        .collect()
}

/// The Maass lift `A(n, r, m) = sum_{d | (n, r, m)} d^(k-1) c((4nm - r^2) / d^2)`.
pub fn maass_lift(k: i64, c: &[Q], tmax: i64) -> Result<ScalarExpansion> {
    let b = bernoulli(k as usize);
    let const_term = -&b[k as usize] / q(2 * k) * &c[0];
    let mut coeffs = BTreeMap::new();
    for idx in enumerate(Coset::Even, tmax) {
        let (n, m, r) = (idx.nu1 / 2, idx.nu2 / 2, idx.rho / 2);
        let disc = 4 * n * m - r * r;
        if disc as usize >= c.len() {
            return Err(Error::InsufficientPrecision { need: disc, have: c.len() as i64 - 1 });
        }
        let v = if n == 0 && m == 0 && r == 0 {
            const_term.clone()
        } else {
            let g = n.gcd(&m).gcd(&r);
            let mut acc = Q::zero();
            for d in 1..=g {
                if g % d == 0 {
                    acc += qi(&pow_i64(d, (k - 1) as u32)) * &c[(disc / (d * d)) as usize];
                }
            }
            acc
        };
        coeffs.insert(idx, v);
    }
    let floor = if c[0].is_zero() { 4 } else { 0 };
    Ok(ScalarExpansion::scalar(k, Coset::Even, tmax, floor, coeffs))
}

/// Jacobi coefficients `c(N)` for the generator of weight `k`, normalized
/// so that the lift has constant term 1 (k = 4, 6) or coefficient 1 at
/// `(1, 1, 1)` in the `(n, m, r)` shorthand (k = 10, 12).
pub fn jacobi_coefficients(k: i64, n: usize) -> Result<Vec<Q>> {
    let space = plus_space(k, n.max(8));
    let expected = match k {
        4 | 6 => 1,
        10 | 12 => 2,
        _ => return Err(Error::Construction(format!("no generator of weight {k}"))),
    };
    if space.len() != expected {
        return Err(Error::Construction(format!("plus space of weight {k}-1/2 has dimension {}", space.len())));
    }
    let v = if expected == 1 {
        let s = &space[0];
        let b = bernoulli(k as usize);
        let target_c0 = -q(2 * k) / &b[k as usize];
        s.iter().map(|x| x * &target_c0 / &s[0]).collect::<Vec<Q>>()
    } else {
        // the cusp line: c(0) = 0
        let cols: Vec<Vec<Q>> = space.iter().map(|s| vec![s[0].clone()]).collect();
        let rel = column_relations(&cols);
        if rel.len() != 1 {
            return Err(Error::Construction("cusp line not unique".into()));
        }
        let s: Vec<Q> = (0..space[0].len())
            .map(|m| rel[0].iter().zip(&space).fold(Q::zero(), |acc, (c, s)| acc + c * &s[m]))
            .collect();
        let lead = s[3].clone();
        s.iter().map(|x| x / &lead).collect()
    };
    Ok(v.into_iter().take(n + 1).collect())
}

pub fn lift_generator(k: i64, tmax: i64) -> Result<ScalarExpansion> {
    let half = (tmax / 2) as usize;
    let c = jacobi_coefficients(k, half * half + 1)?;
    maass_lift(k, &c, tmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::Index;

    #[test]
    fn plus_space_dimensions() {
        assert_eq!(plus_space(4, 40).len(), 1);
        assert_eq!(plus_space(6, 40).len(), 1);
        assert_eq!(plus_space(10, 40).len(), 2);
        assert_eq!(plus_space(12, 40).len(), 2);
    }

    #[test]
    fn eisenstein_lift_restricts_to_e4() {
        let f = lift_generator(4, 8).unwrap();
        // Phi(phi_4) = E_4 = 1 + 240 q + 2160 q^2 + ...
        assert_eq!(f.at(&Index::ZERO), q(1));
        assert_eq!(f.at(&Index::from_nmr(1, 0, 0)), q(240));
        assert_eq!(f.at(&Index::from_nmr(2, 0, 0)), q(2160));
        assert_eq!(f.at(&Index::from_nmr(0, 3, 0)), q(6720));
        let g = lift_generator(6, 8).unwrap();
        assert_eq!(g.at(&Index::from_nmr(1, 0, 0)), q(-504));
    }
}
