//! Formal Fourier expansions `sum a(n) q^n` truncated at a doubled trace.
//!
//! Coefficients are stored on full orbits, so a lookup never needs the
//! transformation law. Zero coefficients are not stored; a missing index
//! within the precision window means zero.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{q, Q};
use crate::error::{Error, Result};
use crate::index::{act, enumerate, first_slot_choices, Coset, Index, SupportConstraint, Unimodular};
use crate::kernel::{compute_at, fill_orbits, targets, Acc, IntTable};
use crate::rcpoly::{rho_apply, HomogPoly};

/// Coefficient space of an expansion.
pub trait Coeff: Clone + Send + Sync + PartialEq + fmt::Debug {
    fn zero_of_degree(j: usize) -> Self;
    fn degree(&self) -> usize;
    fn vanishes(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, s: &Q);
    fn scale(&self, s: &Q) -> Self;
    /// `rho(u) c` for weight `(j, k)`.
    fn rho(&self, u: &Unimodular, k: i64) -> Self;
    fn to_vec(&self) -> Vec<Q>;
    fn from_vec(v: Vec<Q>) -> Self;
}

impl Coeff for Q {
    fn zero_of_degree(_: usize) -> Self {
        Q::zero()
    }
    fn degree(&self) -> usize {
        0
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, s: &Q) {
        *self += other * s;
    }
    fn scale(&self, s: &Q) -> Self {
        self * s
    }
    fn rho(&self, u: &Unimodular, k: i64) -> Self {
        if u.det() == -1 && k % 2 != 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn to_vec(&self) -> Vec<Q> {
        vec![self.clone()]
    }
    fn from_vec(v: Vec<Q>) -> Self {
        v.into_iter().next().unwrap()
    }
}

pub fn unimodular_q(u: &Unimodular) -> [[Q; 2]; 2] {
    [[q(u.a), q(u.b)], [q(u.c), q(u.d)]]
}

impl Coeff for HomogPoly {
    fn zero_of_degree(j: usize) -> Self {
        HomogPoly::zero(j)
    }
    fn degree(&self) -> usize {
        HomogPoly::degree(self)
    }
    fn vanishes(&self) -> bool {
        HomogPoly::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, s: &Q) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * s;
        }
    }
    fn scale(&self, s: &Q) -> Self {
        HomogPoly::scale(self, s)
    }
    fn rho(&self, u: &Unimodular, k: i64) -> Self {
        rho_apply(&unimodular_q(u), k, self).expect("unimodular")
    }
    fn to_vec(&self) -> Vec<Q> {
        self.coeffs.clone()
    }
    fn from_vec(v: Vec<Q>) -> Self {
        HomogPoly::from_coeffs(v)
    }
}

#[derive(Clone, PartialEq)]
pub struct Expansion<C: Coeff> {
    pub j: usize,
    pub k: i64,
    pub coset: Coset,
    /// Largest doubled trace for which coefficients are known.
    pub tmax: i64,
    /// No coefficient below this doubled trace is nonzero.
    pub floor: i64,
    coeffs: BTreeMap<Index, C>,
}

pub type ScalarExpansion = Expansion<Q>;
pub type VectorExpansion = Expansion<HomogPoly>;

impl<C: Coeff> fmt::Debug for Expansion<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Expansion(j={}, k={}, {}, tmax={}, floor={}, {} terms)",
            self.j,
            self.k,
            self.coset.name(),
            self.tmax,
            self.floor,
            self.coeffs.len()
        )
    }
}

impl<C: Coeff> Expansion<C> {
    pub fn from_map(j: usize, k: i64, coset: Coset, tmax: i64, floor: i64, coeffs: BTreeMap<Index, C>) -> Self {
        // a(0) is fixed by every u, so it vanishes when j > 0
        let floor = if j > 0 { floor.max(2) } else { floor };
        let coeffs = coeffs
            .into_iter()
            .filter(|(n, c)| n.trace2() <= tmax && !c.vanishes())
            .inspect(|(n, c)| debug_assert!(n.coset() == Some(coset) && c.degree() == j))
            .collect();
        Expansion { j, k, coset, tmax, floor, coeffs }
    }

    pub fn zero(j: usize, k: i64, coset: Coset, tmax: i64) -> Self {
        Expansion { j, k, coset, tmax, floor: tmax + 2, coeffs: BTreeMap::new() }
    }

    pub fn coeffs(&self) -> &BTreeMap<Index, C> {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at `n`; errors if `n` lies beyond the precision window.
    pub fn get(&self, n: &Index) -> Result<C> {
        if n.trace2() > self.tmax {
            return Err(Error::InsufficientPrecision { need: n.trace2(), have: self.tmax });
        }
        Ok(self.coeffs.get(n).cloned().unwrap_or_else(|| C::zero_of_degree(self.j)))
    }

    /// Coefficient at any semi-positive `n`, reducing indices beyond the
    /// window to a representative of smaller trace.
    pub fn value(&self, n: &Index) -> Result<C> {
        if n.trace2() <= self.tmax {
            return self.get(n);
        }
        let (u, r) = crate::index::reduce(n)?;
        let a = self.get(&r)?;
        Ok(self.transform(&u.inverse(), &a))
    }

    /// Coefficient at `n`, panicking outside the precision window.
    pub fn at(&self, n: &Index) -> C {
        self.get(n).expect("index within precision")
    }

    pub fn truncate(&self, tmax: i64) -> Self {
        let tmax = tmax.min(self.tmax);
        Expansion {
            coeffs: self.coeffs.iter().filter(|(n, _)| n.trace2() <= tmax).map(|(n, c)| (*n, c.clone())).collect(),
            tmax,
            ..self.header()
        }
    }

    fn header(&self) -> Self {
        Expansion { j: self.j, k: self.k, coset: self.coset, tmax: self.tmax, floor: self.floor, coeffs: BTreeMap::new() }
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Expansion::zero(self.j, self.k, self.coset, self.tmax);
        }
        Expansion { coeffs: self.coeffs.iter().map(|(n, c)| (*n, c.scale(s))).collect(), ..self.header() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    /// `sum c_i F_i`; all terms must share the weight and coset.
    pub fn lincomb(coeffs: &[Q], forms: &[&Self]) -> Result<Self> {
        let first = forms.first().ok_or_else(|| Error::WeightMismatch("empty combination".into()))?;
        for f in forms {
            if (f.j, f.k, f.coset) != (first.j, first.k, first.coset) {
                return Err(Error::WeightMismatch(format!("({}, {}) vs ({}, {})", f.j, f.k, first.j, first.k)));
            }
        }
        let tmax = forms.iter().map(|f| f.tmax).min().unwrap();
        let floor = forms.iter().map(|f| f.floor).min().unwrap();
        let mut out: BTreeMap<Index, C> = BTreeMap::new();
        for (c, f) in coeffs.iter().zip(forms) {
            if c.is_zero() {
                continue;
            }
            for (n, v) in f.coeffs.range(..) {
                if n.trace2() > tmax {
                    continue;
                }
                out.entry(*n).or_insert_with(|| C::zero_of_degree(first.j)).add_scaled(v, c);
            }
        }
        Ok(Expansion::from_map(first.j, first.k, first.coset, tmax, floor, out))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Expansion::lincomb(&[Q::one(), Q::one()], &[self, o])
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Expansion::lincomb(&[Q::one(), -Q::one()], &[self, o])
    }

    /// True iff every stored coefficient at a singular index vanishes.
    pub fn is_cusp(&self) -> bool {
        self.coeffs.keys().all(|n| !n.is_singular())
    }

    /// Checks `a(u n u') = rho(u) a(n)` for the generators of `GL(2, Z)`
    /// at every index where both sides are within precision.
    pub fn check_equivariance(&self) -> bool {
        self.equivariance_failures(1).is_empty()
    }

    pub fn equivariance_failures(&self, limit: usize) -> Vec<(Unimodular, Index)> {
        let gens = [Unimodular::S, Unimodular::T, Unimodular::FLIP, Unimodular::SWAP, Unimodular::lower(1)];
        let mut bad = vec![];
        for n in enumerate(self.coset, self.tmax) {
            let a = self.at(&n);
            for u in &gens {
                let m = act(u, &n);
                if m.trace2() > self.tmax {
                    continue;
                }
                if self.at(&m) != self.transform(u, &a) {
                    bad.push((*u, n));
                    if bad.len() >= limit {
                        return bad;
                    }
                }
            }
        }
        bad
    }

    /// `a(u n u')` in terms of `a(n)`. Odd-coset forms carry the extra sign
    /// character of `GL(2, F_2)`.
    pub fn transform(&self, u: &Unimodular, a: &C) -> C {
        let v = a.rho(u, self.k);
        if self.coset == Coset::Odd && u.sign_mod2() == -1 {
            v.scale(&-Q::one())
        } else {
            v
        }
    }

    pub fn support_constraint(&self) -> SupportConstraint {
        SupportConstraint { coset: self.coset, min_doubled_trace: self.floor.max(0), require_positive_det: self.is_cusp() }
    }

    pub fn int_table(&self) -> Result<IntTable> {
        let vecs: Vec<(Index, Vec<Q>)> = self.coeffs.iter().map(|(n, c)| (*n, c.to_vec())).collect();
        Ok(IntTable::build(self.tmax, self.j + 1, vecs.iter().map(|(n, v)| (n, v.as_slice())))?)
    }

    /// Agreement on all indices up to `tmax` (both must reach it).
    pub fn agrees_with(&self, other: &Self, tmax: i64) -> bool {
        if self.tmax < tmax || other.tmax < tmax {
            return false;
        }
        self.truncate(tmax).coeffs == other.truncate(tmax).coeffs
    }

    /// Builds an expansion from values at reduced representatives (for even
    /// coset forms on the full modular group) or at every index.
    pub fn from_reps<F>(j: usize, k: i64, coset: Coset, tmax: i64, floor: i64, f: F) -> Self
    where
        F: Fn(&Index) -> Option<C> + Sync,
    {
        if coset == Coset::Even {
            let reps = compute_at(&targets(coset, tmax, floor, true), &f);
            let full = fill_orbits(coset, tmax, floor, &reps, |u, c: &C| c.rho(u, k));
            Expansion::from_map(j, k, coset, tmax, floor, full)
        } else {
            let all = compute_at(&targets(coset, tmax, floor, false), &f);
            Expansion::from_map(j, k, coset, tmax, floor, all)
        }
    }

    /// `self / g` for a scalar `g` with constant term 1, by trace-graded
    /// recursion `h(n) = f(n) - sum_{n1 != 0} g(n1) h(n - n1)`.
    pub fn divide(&self, g: &ScalarExpansion) -> Result<Self> {
        if g.coset != Coset::Even || g.at(&Index::ZERO) != Q::one() {
            return Err(Error::NonUnitDivisor);
        }
        let tmax = self.tmax.min(g.tmax);
        let k = self.k - g.k;
        let coset = self.coset;
        let j = self.j;
        let mut h: BTreeMap<Index, C> = BTreeMap::new();
        let g_terms: Vec<(Index, Q)> = g.coeffs.iter().filter(|(n, _)| **n != Index::ZERO).map(|(n, c)| (*n, c.clone())).collect();
        let par = if coset == Coset::Even { 0 } else { 2 };
        let mut level = par;
        while level <= tmax {
            let level_idx: Vec<Index> = enumerate(coset, level).into_iter().filter(|n| n.trace2() == level).collect();
            let step = |n: &Index| -> Option<C> {
                let mut v = self.coeffs.get(n).cloned().unwrap_or_else(|| C::zero_of_degree(j));
                for (n1, c1) in &g_terms {
                    if n1.trace2() > level {
                        break;
                    }
                    let rest = n.sub(n1);
                    if let Some(hv) = h.get(&rest) {
                        v.add_scaled(hv, &-c1.clone());
                    }
                }
                (!v.vanishes()).then_some(v)
            };
            let new: BTreeMap<Index, C> = if coset == Coset::Even {
                let reps: Vec<Index> = level_idx.iter().filter(|n| crate::index::is_reduced(n)).cloned().collect();
                let mut rep_vals = compute_at(&reps, step);
                // representatives of this level may come from lower levels
                for n in &level_idx {
                    if let Ok((_, r)) = crate::index::reduce(n) {
                        if r.trace2() < level {
                            if let Some(v) = h.get(&r) {
                                rep_vals.insert(r, v.clone());
                            }
                        }
                    }
                }
                let filled = fill_orbits(coset, level, 0, &rep_vals, |u, c: &C| c.rho(u, k));
                filled.into_iter().filter(|(n, _)| n.trace2() == level).collect()
            } else {
                compute_at(&level_idx, step)
            };
            h.extend(new);
            level += 2;
        }
        Ok(Expansion::from_map(j, k, coset, tmax, self.floor, h))
    }
}

impl ScalarExpansion {
    pub fn scalar(k: i64, coset: Coset, tmax: i64, floor: i64, coeffs: BTreeMap<Index, Q>) -> Self {
        Expansion::from_map(0, k, coset, tmax, floor, coeffs)
    }

    /// The constant 1 of weight 0.
    pub fn one(tmax: i64) -> Self {
        let mut m = BTreeMap::new();
        m.insert(Index::ZERO, Q::one());
        Expansion::from_map(0, 0, Coset::Even, tmax, 0, m)
    }

    /// View as a vector-valued expansion with `j = 0`.
    pub fn to_vector(&self) -> VectorExpansion {
        let m = self.coeffs.iter().map(|(n, c)| (*n, HomogPoly::constant(c.clone()))).collect();
        Expansion::from_map(0, self.k, self.coset, self.tmax, self.floor, m)
    }

    pub fn mul(&self, g: &ScalarExpansion) -> Result<ScalarExpansion> {
        let v = scal_mul(self, &g.to_vector())?;
        Ok(v.to_scalar())
    }
}

impl VectorExpansion {
    pub fn to_scalar(&self) -> ScalarExpansion {
        assert_eq!(self.j, 0);
        let m = self.coeffs.iter().map(|(n, c)| (*n, c.coeffs[0].clone())).collect();
        Expansion::from_map(0, self.k, self.coset, self.tmax, self.floor, m)
    }
}

/// `phi * F` by convolution of the two expansions.
pub fn scal_mul(phi: &ScalarExpansion, f: &VectorExpansion) -> Result<VectorExpansion> {
    let coset = phi.coset.add(f.coset);
    let tmax = (phi.tmax + f.floor.max(0)).min(f.tmax + phi.floor.max(0));
    let floor = phi.floor.max(0) + f.floor.max(0);
    let (ta, tb) = (phi.int_table()?, f.int_table()?);
    let cs = [phi.support_constraint(), f.support_constraint()];
    let width = f.j + 1;
    let den = &ta.den * &tb.den;
    let out = Expansion::from_reps(f.j, phi.k + f.k, coset, tmax, floor, |n| {
        let mut acc: Vec<Acc> = vec![Acc::default(); width];
        for n1 in first_slot_choices(n, &cs) {
            let a = ta.scalar(&n1);
            if a == 0 {
                continue;
            }
            if let Some(b) = tb.get(&n.sub(&n1)) {
                for (s, bv) in acc.iter_mut().zip(b.iter()) {
                    s.add_prod(a, *bv);
                }
            }
        }
        to_coeff(&acc, &den)
    });
    Ok(out)
}

pub(crate) fn to_coeff(acc: &[Acc], den: &BigInt) -> Option<HomogPoly> {
    if acc.iter().all(|a| a.is_zero()) {
        return None;
    }
    Some(HomogPoly::from_coeffs(acc.iter().map(|a| Q::new(a.total(), den.clone())).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(k: i64) -> ScalarExpansion {
        // an even-coset series with a unit constant term, built to be GL2-invariant
        ScalarExpansion::from_reps(0, k, Coset::Even, 10, 0, |n| Some(q(1 + n.trace2() * n.trace2() + n.det16())))
    }

    #[test]
    fn mul_then_divide_roundtrip() {
        let f = toy(4);
        let g = toy(6);
        assert!(f.check_equivariance());
        let fg = f.mul(&g).unwrap();
        assert_eq!(fg.at(&Index::ZERO), q(1));
        assert!(fg.check_equivariance());
        let back = fg.divide(&f).unwrap();
        assert!(back.agrees_with(&g, 10));
        let one = ScalarExpansion::one(10);
        assert!(f.mul(&one).unwrap().agrees_with(&f, 10));
        assert!(f.divide(&one).unwrap().agrees_with(&f, 10));
    }

    #[test]
    fn lincomb_cancels() {
        let f = toy(4);
        let z = Expansion::lincomb(&[q(1), q(-1)], &[&f, &f]).unwrap();
        assert!(z.is_zero());
        assert!(Expansion::lincomb(&[q(1), q(1)], &[&f, &toy(6)]).is_err());
    }

    #[test]
    fn precision_is_enforced() {
        let f = toy(4);
        assert!(matches!(f.get(&Index::new(6, 6, 0)), Err(Error::InsufficientPrecision { .. })));
    }
}
