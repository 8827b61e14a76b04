//! Independent construction of the generators from theta constants.
//!
//! Even-weight forms are invariant polynomials in the four second-order
//! theta constants `f_a(tau) = sum_{w = a mod 2} q^{w'w/4}`; the odd form is
//! proportional to the product of the ten even first-order theta constants.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::arith::{q, Q};
use crate::error::{Error, Result};
use crate::expansion::ScalarExpansion;
use crate::index::{Coset, Index};
use crate::linalg::column_relations;

type Key = (i64, i64, i64);

/// A series whose exponents are `(nu1, nu2, rho) * scale` with integer keys.
#[derive(Debug, Clone, PartialEq)]
pub struct FineSeries {
    scale: i64,
    /// keep keys with `k0 + k1 <= bound`
    bound: i64,
    terms: BTreeMap<Key, i128>,
}

impl FineSeries {
    fn one(scale: i64, bound: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0, 0), 1);
        FineSeries { scale, bound, terms }
    }

    fn mul(&self, o: &FineSeries) -> FineSeries {
        let mut terms: BTreeMap<Key, i128> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if a.0 + a.1 + b.0 + b.1 > self.bound {
                    continue;
                }
                let key = (a.0 + b.0, a.1 + b.1, a.2 + b.2);
                let p = x.checked_mul(*y).expect("theta product overflow");
                *terms.entry(key).or_insert(0) += p;
            }
        }
        terms.retain(|_, v| *v != 0);
        FineSeries { scale: self.scale, bound: self.bound, terms }
    }

    fn add_scaled(&mut self, o: &FineSeries, c: i128) {
        for (k, v) in &o.terms {
            *self.terms.entry(*k).or_insert(0) += v * c;
        }
        self.terms.retain(|_, v| *v != 0);
    }

    fn min_trace(&self) -> i64 {
        self.terms.keys().map(|k| k.0 + k.1).min().unwrap_or(i64::MAX)
    }

    /// Converts to an expansion; every surviving key must be integral.
    fn to_expansion(&self, k: i64, coset: Coset, tmax: i64) -> Result<BTreeMap<Index, Q>> {
        let s = self.scale;
        let mut out = BTreeMap::new();
        for (key, v) in &self.terms {
            if key.0 % s != 0 || key.1 % s != 0 || key.2 % s != 0 {
                return Err(Error::Construction(format!("fractional exponent {key:?} in weight {k}")));
            }
            let n = Index::new(key.0 / s, key.1 / s, key.2 / s);
            if n.trace2() <= tmax {
                out.insert(n, q(1) * Q::from_integer((*v).into()));
            }
        }
        let _ = coset;
        Ok(out)
    }
}

const CHARS: [(i64, i64); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

/// Second-order theta constant `f_a`, truncated at doubled trace `tmax`.
fn second_order(a: (i64, i64), tmax: i64) -> FineSeries {
    let bound = 2 * tmax;
    let mut s = FineSeries { scale: 2, bound, terms: BTreeMap::new() };
    let r = crate::arith::isqrt(bound) + 1;
    for w1 in -r..=r {
        for w2 in -r..=r {
            if (w1 - a.0).rem_euclid(2) != 0 || (w2 - a.1).rem_euclid(2) != 0 || w1 * w1 + w2 * w2 > bound {
                continue;
            }
            *s.terms.entry((w1 * w1, w2 * w2, 2 * w1 * w2)).or_insert(0) += 1;
        }
    }
    s
}

/// First-order theta constant with characteristic `(a, b)`; only the real
/// part survives for even characteristics.
fn first_order(a: (i64, i64), b: (i64, i64), tmax: i64) -> FineSeries {
    let bound = 4 * tmax;
    let mut s = FineSeries { scale: 4, bound, terms: BTreeMap::new() };
    let r = crate::arith::isqrt(bound) + 1;
    for w1 in -r..=r {
        for w2 in -r..=r {
            if (w1 - a.0).rem_euclid(2) != 0 || (w2 - a.1).rem_euclid(2) != 0 || w1 * w1 + w2 * w2 > bound {
                continue;
            }
            let wb = w1 * b.0 + w2 * b.1;
            if wb.rem_euclid(2) != 0 {
                continue;
            }
            let sign = if (wb / 2).rem_euclid(2) == 0 { 1 } else { -1 };
            *s.terms.entry((w1 * w1, w2 * w2, 2 * w1 * w2)).or_insert(0) += sign;
        }
    }
    s.terms.retain(|_, v| *v != 0);
    s
}

type Exps = [u32; 4];

fn monomials(d: u32) -> Vec<Exps> {
    let mut out = vec![];
    for e0 in 0..=d {
        for e1 in 0..=d - e0 {
            for e2 in 0..=d - e0 - e1 {
                out.push([e0, e1, e2, d - e0 - e1 - e2]);
            }
        }
    }
    out
}

fn translation_invariant(e: &Exps) -> bool {
    let s1: u32 = (0..4).map(|i| e[i] * CHARS[i].0 as u32).sum();
    let s2: u32 = (0..4).map(|i| e[i] * CHARS[i].1 as u32).sum();
    let s12: u32 = (0..4).map(|i| e[i] * (CHARS[i].0 * CHARS[i].1) as u32).sum();
    s1 % 4 == 0 && s2 % 4 == 0 && s12 % 2 == 0
}

/// Permutations of the characteristics induced by `GL(2, F_2)`.
fn gl2_perms() -> Vec<[usize; 4]> {
    let mut perms = vec![];
    for m in 0..16u32 {
        let g = [[m & 1, (m >> 1) & 1], [(m >> 2) & 1, (m >> 3) & 1]];
        if (g[0][0] * g[1][1] + g[0][1] * g[1][0]) % 2 == 0 {
            continue;
        }
        let mut p = [0usize; 4];
        for (i, a) in CHARS.iter().enumerate() {
            let img = (
                ((a.0 as u32 * g[0][0] + a.1 as u32 * g[1][0]) % 2) as i64,
                ((a.0 as u32 * g[0][1] + a.1 as u32 * g[1][1]) % 2) as i64,
            );
            p[i] = CHARS.iter().position(|c| *c == img).unwrap();
        }
        perms.push(p);
    }
    perms
}

/// Dense homogeneous polynomial in four variables, indexed by `(e0, e1, e2)`.
struct Dense4 {
    d: u32,
    c: Vec<i128>,
}

impl Dense4 {
    fn idx(d: u32, e: &Exps) -> usize {
        let s = (d + 1) as usize;
        (e[0] as usize * s + e[1] as usize) * s + e[2] as usize
    }

    /// The product of `(sum_b H_ab f_b)^{e_a}` over `a`.
    fn hadamard_image(e: &Exps) -> Dense4 {
        let d: u32 = e.iter().sum();
        let s = (d + 1) as usize;
        let mut cur: BTreeMap<Exps, i128> = BTreeMap::new();
        cur.insert([0; 4], 1);
        for (a, &ea) in e.iter().enumerate() {
            for _ in 0..ea {
                let mut next: BTreeMap<Exps, i128> = BTreeMap::new();
                for (m, v) in &cur {
                    for (b, cb) in CHARS.iter().enumerate() {
                        let ca = CHARS[a];
                        let sign = if (ca.0 * cb.0 + ca.1 * cb.1) % 2 == 0 { 1 } else { -1 };
                        let mut m2 = *m;
                        m2[b] += 1;
                        *next.entry(m2).or_insert(0) += sign * v;
                    }
                }
                cur = next;
            }
        }
        let mut c = vec![0i128; s * s * s];
        for (m, v) in cur {
            c[Dense4::idx(d, &m)] += v;
        }
        Dense4 { d, c }
    }
}

/// Invariant polynomials of degree `d` (weight `d / 2`) as lists of
/// monomials with rational coefficients.
pub fn invariants(d: u32) -> Vec<BTreeMap<Exps, Q>> {
    let perms = gl2_perms();
    let mut seen = BTreeSet::new();
    let mut orbits: Vec<Vec<Exps>> = vec![];
    for e in monomials(d) {
        if !translation_invariant(&e) || seen.contains(&e) {
            continue;
        }
        let orbit: BTreeSet<Exps> = perms
            .iter()
            .map(|p| {
                let mut img = [0u32; 4];
                for i in 0..4 {
                    img[p[i]] = e[i];
                }
                img
            })
            .collect();
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit.into_iter().collect());
    }
    // columns: H'(O) - 2^d O on every monomial coordinate
    let two_d: i128 = 1i128 << d;
    let cols: Vec<Vec<Q>> = orbits
        .iter()
        .map(|orb| {
            let mut acc = vec![0i128; ((d + 1) * (d + 1) * (d + 1)) as usize];
            for e in orb {
                let h = Dense4::hadamard_image(e);
                for (a, b) in acc.iter_mut().zip(&h.c) {
                    *a += b;
                }
                acc[Dense4::idx(h.d, e)] -= two_d;
            }
            acc.into_iter().map(|v| Q::from_integer(v.into())).collect()
        })
        .collect();
    column_relations(&cols)
        .into_iter()
        .map(|rel| {
            let mut p = BTreeMap::new();
            for (c, orb) in rel.iter().zip(&orbits) {
                if !c.is_zero() {
                    for e in orb {
                        p.insert(*e, c.clone());
                    }
                }
            }
            p
        })
        .collect()
}

/// Evaluates invariant polynomials on the second-order theta constants.
fn evaluate(polys: &[BTreeMap<Exps, Q>], d: u32, tmax: i64) -> Result<Vec<BTreeMap<Index, Q>>> {
    let bound = 2 * tmax;
    let base: Vec<FineSeries> = CHARS.iter().map(|a| second_order(*a, tmax)).collect();
    let mut powers: Vec<Vec<FineSeries>> = vec![];
    for f in &base {
        let mut p = vec![FineSeries::one(2, bound)];
        for i in 0..d as usize {
            let next = p[i].mul(f);
            p.push(next);
        }
        powers.push(p);
    }
    let min_tr: Vec<Vec<i64>> = powers.iter().map(|ps| ps.iter().map(|s| s.min_trace()).collect()).collect();
    let mut out = vec![];
    for poly in polys {
        let den = crate::arith::common_denominator(poly.values());
        let mut total = FineSeries { scale: 2, bound, terms: BTreeMap::new() };
        for (e, c) in poly {
            let lo: i64 = (0..4).map(|i| min_tr[i][e[i] as usize]).fold(0i64, |a, b| a.saturating_add(b));
            if lo > bound {
                continue;
            }
            let mut s = FineSeries::one(2, bound);
            for i in 0..4 {
                if e[i] > 0 {
                    s = s.mul(&powers[i][e[i] as usize]);
                }
            }
            let cn = crate::arith::scaled_numerator(c, &den);
            total.add_scaled(&s, num_traits::ToPrimitive::to_i128(&cn).expect("small coefficient"));
        }
        let m = total.to_expansion((d / 2) as i64, Coset::Even, tmax)?;
        out.push(m.into_iter().map(|(n, v)| (n, v / crate::arith::qi(&den))).collect());
    }
    Ok(out)
}

fn solve_normalized(
    space: &[BTreeMap<Index, Q>],
    zero_at: &[Index],
    norm_at: Index,
) -> Result<BTreeMap<Index, Q>> {
    let cols: Vec<Vec<Q>> = space.iter().map(|m| zero_at.iter().map(|n| m.get(n).cloned().unwrap_or_default()).collect()).collect();
    let rel = if zero_at.is_empty() { vec![vec![Q::one()]] } else { column_relations(&cols) };
    if rel.len() != 1 {
        return Err(Error::Construction(format!("expected a unique line, found {}", rel.len())));
    }
    let mut combo: BTreeMap<Index, Q> = BTreeMap::new();
    for (c, m) in rel[0].iter().zip(space) {
        for (n, v) in m {
            *combo.entry(*n).or_insert_with(Q::zero) += c * v;
        }
    }
    combo.retain(|_, v| !v.is_zero());
    let lead = combo.get(&norm_at).cloned().ok_or_else(|| Error::Construction("normalizing coefficient vanishes".into()))?;
    Ok(combo.into_iter().map(|(n, v)| (n, v / &lead)).collect())
}

/// An even-weight generator via theta constants. The weight-12 cusp form
/// needs `tmax >= 2` so the cusp conditions are visible.
pub fn theta_generator(k: i64, tmax: i64) -> Result<ScalarExpansion> {
    let d = (2 * k) as u32;
    let inv = invariants(d);
    let want = match k {
        4 | 6 => 1,
        10 => 2,
        12 => 3,
        _ => return Err(Error::Construction(format!("no generator of weight {k}"))),
    };
    if inv.len() != want {
        return Err(Error::Construction(format!("invariants of degree {d}: {} (expected {want})", inv.len())));
    }
    let space = evaluate(&inv, d, tmax)?;
    let one_one_one = Index::from_nmr(1, 1, 1);
    let coeffs = match k {
        4 | 6 => solve_normalized(&space, &[], Index::ZERO)?,
        10 => solve_normalized(&space, &[Index::ZERO], one_one_one)?,
        _ => solve_normalized(&space, &[Index::ZERO, Index::from_nmr(1, 0, 0)], one_one_one)?,
    };
    let floor = if k >= 10 { 4 } else { 0 };
    Ok(ScalarExpansion::scalar(k, Coset::Even, tmax, floor, coeffs))
}

/// The weight-5 form as a normalized product of the ten even theta constants.
pub fn theta_chi5(tmax: i64) -> Result<ScalarExpansion> {
    let mut prod = FineSeries::one(4, 4 * tmax);
    for a in CHARS {
        for b in CHARS {
            if (a.0 * b.0 + a.1 * b.1) % 2 == 0 {
                prod = prod.mul(&first_order(a, b, tmax));
            }
        }
    }
    let m = prod.to_expansion(5, Coset::Odd, tmax)?;
    let lead = m.get(&Index::new(1, 1, 1)).cloned().ok_or_else(|| Error::Construction("theta product vanishes at (1,1,1)".into()))?;
    let coeffs = m.into_iter().map(|(n, v)| (n, v / &lead)).collect();
    Ok(ScalarExpansion::scalar(5, Coset::Odd, tmax, 2, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_dimensions() {
        assert_eq!(invariants(8).len(), 1);
        assert_eq!(invariants(12).len(), 1);
        assert_eq!(invariants(20).len(), 2);
    }

    #[test]
    fn phi4_from_thetas() {
        let f = theta_generator(4, 4).unwrap();
        assert_eq!(f.at(&Index::ZERO), q(1));
        assert_eq!(f.at(&Index::from_nmr(1, 0, 0)), q(240));
    }
}
