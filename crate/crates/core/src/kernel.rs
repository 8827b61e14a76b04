//! Dense lookup tables and accumulation helpers for the convolution loops.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{common_denominator, scaled_numerator, Q};
use crate::index::{enumerate, is_reduced, reduce, Coset, Index, Unimodular};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("coefficient numerator does not fit in 128 bits")]
    Overflow,
}

/// Values on the box `0 <= nu1, nu2`, `nu1 + nu2 <= tmax`, `|rho| <= tmax`.
#[derive(Debug, Clone)]
pub struct Dense<T> {
    tmax: i64,
    data: Vec<T>,
}

impl<T: Clone> Dense<T> {
    pub fn new(tmax: i64, fill: T) -> Self {
        let side = (tmax + 1) as usize;
        let width = (2 * tmax + 1) as usize;
        Dense { tmax, data: vec![fill; side * side * width] }
    }

    #[inline]
    fn pos(&self, n: &Index) -> Option<usize> {
        let t = self.tmax;
        if n.nu1 < 0 || n.nu2 < 0 || n.nu1 + n.nu2 > t || n.rho.abs() > t {
            return None;
        }
        Some((((n.nu1 * (t + 1) + n.nu2) * (2 * t + 1)) + n.rho + t) as usize)
    }

    #[inline]
    pub fn get(&self, n: &Index) -> Option<&T> {
        self.pos(n).map(|p| &self.data[p])
    }

    pub fn set(&mut self, n: &Index, v: T) {
        let p = self.pos(n).expect("index inside table");
        self.data[p] = v;
    }

    pub fn tmax(&self) -> i64 {
        self.tmax
    }
}

/// Integer numerators over a common denominator.
#[derive(Debug, Clone)]
pub struct IntTable {
    pub den: BigInt,
    pub width: usize,
    pub table: Dense<Option<Box<[i128]>>>,
}

impl IntTable {
    pub fn build<'a, I>(tmax: i64, width: usize, entries: I) -> Result<IntTable, KernelError>
    where
        I: IntoIterator<Item = (&'a Index, &'a [Q])> + Clone,
    {
        let den = common_denominator(entries.clone().into_iter().flat_map(|(_, v)| v.iter()));
        let mut table = Dense::new(tmax, None);
        for (n, v) in entries {
            if n.trace2() > tmax {
                continue;
            }
            let nums: Option<Vec<i128>> = v.iter().map(|x| scaled_numerator(x, &den).to_i128()).collect();
            let nums = nums.ok_or(KernelError::Overflow)?;
            if nums.iter().any(|x| *x != 0) {
                table.set(n, Some(nums.into_boxed_slice()));
            }
        }
        Ok(IntTable { den, width, table })
    }

    #[inline]
    pub fn get(&self, n: &Index) -> Option<&[i128]> {
        self.table.get(n).and_then(|o| o.as_deref())
    }

    #[inline]
    pub fn scalar(&self, n: &Index) -> i128 {
        self.get(n).map_or(0, |v| v[0])
    }
}

/// Sum of exact products, kept in `i128` until it would overflow.
#[derive(Debug, Clone, Default)]
pub struct Acc {
    small: i128,
    big: BigInt,
}

impl Acc {
    #[inline]
    pub fn add(&mut self, v: i128) {
        match self.small.checked_add(v) {
            Some(s) => self.small = s,
            None => {
                self.big += BigInt::from(self.small);
                self.small = v;
            }
        }
    }

    #[inline]
    pub fn add_prod(&mut self, a: i128, b: i128) {
        match a.checked_mul(b) {
            Some(p) => self.add(p),
            None => self.big += BigInt::from(a) * BigInt::from(b),
        }
    }

    pub fn add_big(&mut self, v: &BigInt) {
        self.big += v;
    }

    pub fn total(&self) -> BigInt {
        &self.big + BigInt::from(self.small)
    }

    pub fn is_zero(&self) -> bool {
        self.small == 0 && self.big.is_zero()
    }
}

/// Indices where a form of the given coset and support floor can be nonzero.
pub fn targets(coset: Coset, tmax: i64, floor: i64, reduced_only: bool) -> Vec<Index> {
    enumerate(coset, tmax)
        .into_iter()
        .filter(|n| n.trace2() >= floor && (!reduced_only || is_reduced(n)))
        .collect()
}

/// Computes `f` at each target in parallel, dropping zeros.
pub fn compute_at<C, F>(targets: &[Index], f: F) -> BTreeMap<Index, C>
where
    C: Send,
    F: Fn(&Index) -> Option<C> + Sync,
{
    targets.par_iter().filter_map(|n| f(n).map(|c| (*n, c))).collect::<Vec<_>>().into_iter().collect()
}

/// Extends values at reduced representatives to full orbits:
/// `a(m) = tf(u^{-1}, a(r))` where `act(u, m) = r`.
pub fn fill_orbits<C, T>(
    coset: Coset,
    tmax: i64,
    floor: i64,
    reps: &BTreeMap<Index, C>,
    tf: T,
) -> BTreeMap<Index, C>
where
    C: Clone + Send + Sync,
    T: Fn(&Unimodular, &C) -> C + Sync,
{
    let all = targets(coset, tmax, floor, false);
    compute_at(&all, |m| {
        let (u, r) = reduce(m).ok()?;
        reps.get(&r).map(|c| if u == Unimodular::IDENTITY { c.clone() } else { tf(&u.inverse(), c) })
    })
}

pub fn q_from_parts(num: BigInt, den: &BigInt) -> Q {
    Q::new(num, den.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acc_spills() {
        let mut a = Acc::default();
        a.add_prod(i128::MAX / 2, 3);
        a.add_prod(i128::MAX, 1);
        a.add(-5);
        let want = BigInt::from(i128::MAX / 2) * 3 + BigInt::from(i128::MAX) - 5;
        assert_eq!(a.total(), want);
    }

    #[test]
    fn dense_roundtrip() {
        let mut d = Dense::new(4, 0i32);
        d.set(&Index::new(2, 2, -3), 7);
        assert_eq!(d.get(&Index::new(2, 2, -3)), Some(&7));
        assert_eq!(d.get(&Index::new(4, 2, 0)), None);
    }
}
