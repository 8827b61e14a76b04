//! Half-integral exponent matrices in doubled coordinates.
//!
//! An [`Index`] `(nu1, nu2, rho)` stands for the symmetric matrix
//! `((nu1/2, rho/4), (rho/4, nu2/2))`. Integral indices have all three
//! entries even; the half-shifted coset carrying the square root of the
//! weight-10 cusp form has all three entries odd.

use std::cmp::Ordering;
use std::fmt;

use crate::arith::isqrt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coset {
    Even,
    Odd,
}

impl Coset {
    pub fn add(self, other: Coset) -> Coset {
        if self == other {
            Coset::Even
        } else {
            Coset::Odd
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coset::Even => "even",
            Coset::Odd => "odd",
        }
    }

    pub fn parse(s: &str) -> Option<Coset> {
        match s {
            "even" => Some(Coset::Even),
            "odd" => Some(Coset::Odd),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IndexError {
    #[error("index {0} is not semi-positive")]
    NotSemiPositive(Index),
    #[error("matrix has determinant {0}, not +-1")]
    NotUnimodular(i64),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Index {
    pub nu1: i64,
    pub nu2: i64,
    pub rho: i64,
}

impl Index {
    pub const ZERO: Index = Index { nu1: 0, nu2: 0, rho: 0 };

    pub const fn new(nu1: i64, nu2: i64, rho: i64) -> Index {
        Index { nu1, nu2, rho }
    }

    /// From the `(n, m, r)` shorthand with integer entries, i.e. the
    /// matrix `((n, r/2), (r/2, m))`.
    pub const fn from_nmr(n: i64, m: i64, r: i64) -> Index {
        Index { nu1: 2 * n, nu2: 2 * m, rho: 2 * r }
    }

    pub fn trace2(&self) -> i64 {
        self.nu1 + self.nu2
    }

    /// Sixteen times the determinant.
    pub fn det16(&self) -> i64 {
        4 * self.nu1 * self.nu2 - self.rho * self.rho
    }

    pub fn is_semi_positive(&self) -> bool {
        self.nu1 >= 0 && self.nu2 >= 0 && self.det16() >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.nu1 > 0 && self.det16() > 0
    }

    pub fn is_singular(&self) -> bool {
        self.det16() == 0
    }

    pub fn coset(&self) -> Option<Coset> {
        let p = (self.nu1.rem_euclid(2), self.nu2.rem_euclid(2), self.rho.rem_euclid(2));
        match p {
            (0, 0, 0) => Some(Coset::Even),
            (1, 1, 1) => Some(Coset::Odd),
            _ => None,
        }
    }

    /// Entries of the integer matrix `4n`.
    pub fn quad(&self) -> [i64; 3] {
        [2 * self.nu1, self.rho, 2 * self.nu2]
    }

    pub fn add(&self, o: &Index) -> Index {
        Index::new(self.nu1 + o.nu1, self.nu2 + o.nu2, self.rho + o.rho)
    }

    pub fn sub(&self, o: &Index) -> Index {
        Index::new(self.nu1 - o.nu1, self.nu2 - o.nu2, self.rho - o.rho)
    }

    pub fn scale(&self, s: i64) -> Index {
        Index::new(self.nu1 * s, self.nu2 * s, self.rho * s)
    }

    /// Exact division of every entry, if possible.
    pub fn div_exact(&self, p: i64) -> Option<Index> {
        if self.nu1 % p == 0 && self.nu2 % p == 0 && self.rho % p == 0 {
            Some(Index::new(self.nu1 / p, self.nu2 / p, self.rho / p))
        } else {
            None
        }
    }

    fn key(&self) -> (i64, i64, i64) {
        (self.trace2(), self.nu1, self.rho)
    }
}

impl Ord for Index {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.nu1, self.nu2, self.rho)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.nu1, self.nu2, self.rho)
    }
}

/// An integer 2x2 matrix `(a b; c d)` with determinant +-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Unimodular {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Unimodular {
    pub const IDENTITY: Unimodular = Unimodular { a: 1, b: 0, c: 0, d: 1 };
    pub const SWAP: Unimodular = Unimodular { a: 0, b: 1, c: 1, d: 0 };
    pub const FLIP: Unimodular = Unimodular { a: 1, b: 0, c: 0, d: -1 };
    pub const S: Unimodular = Unimodular { a: 0, b: 1, c: -1, d: 0 };
    pub const T: Unimodular = Unimodular { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Unimodular, IndexError> {
        let det = a * d - b * c;
        if det.abs() != 1 {
            return Err(IndexError::NotUnimodular(det));
        }
        Ok(Unimodular { a, b, c, d })
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Unimodular) -> Unimodular {
        Unimodular {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Unimodular {
        let e = self.det();
        Unimodular { a: e * self.d, b: -e * self.b, c: -e * self.c, d: e * self.a }
    }

    /// Sign of the permutation `u mod 2` induces on the three nonzero
    /// vectors of `F_2^2`.
    pub fn sign_mod2(&self) -> i64 {
        let vs = [(1, 0), (0, 1), (1, 1)];
        let img = |v: (i64, i64)| ((v.0 * self.a + v.1 * self.c).rem_euclid(2), (v.0 * self.b + v.1 * self.d).rem_euclid(2));
        let perm: Vec<usize> = vs.iter().map(|v| vs.iter().position(|w| *w == img(*v)).unwrap()).collect();
        let fixed = (0..3).filter(|i| perm[*i] == *i).count();
        // identity and 3-cycles are even; transpositions fix one vector
        if fixed == 1 { -1 } else { 1 }
    }

    /// Lower triangular translation `(1 0; s 1)`.
    pub fn lower(s: i64) -> Unimodular {
        Unimodular { a: 1, b: 0, c: s, d: 1 }
    }
}

/// The index of `u n u'`.
pub fn act(u: &Unimodular, n: &Index) -> Index {
    let [m11, m12, m22] = n.quad();
    // (u M)
    let p11 = u.a * m11 + u.b * m12;
    let p12 = u.a * m12 + u.b * m22;
    let p21 = u.c * m11 + u.d * m12;
    let p22 = u.c * m12 + u.d * m22;
    // (u M) u'
    let r11 = p11 * u.a + p12 * u.b;
    let r12 = p11 * u.c + p12 * u.d;
    let r22 = p21 * u.c + p22 * u.d;
    Index::new(r11 / 2, r22 / 2, r12)
}

pub fn is_reduced(n: &Index) -> bool {
    0 <= n.rho && n.rho <= n.nu1 && n.nu1 <= n.nu2
}

/// Returns `(u, r)` with `act(u, n) = r` and `0 <= rho <= nu1 <= nu2`.
pub fn reduce(n: &Index) -> Result<(Unimodular, Index), IndexError> {
    if !n.is_semi_positive() {
        return Err(IndexError::NotSemiPositive(*n));
    }
    let mut u = Unimodular::IDENTITY;
    let mut cur = *n;
    loop {
        if cur.nu1 > cur.nu2 {
            u = Unimodular::SWAP.mul(&u);
            cur = Index::new(cur.nu2, cur.nu1, cur.rho);
            continue;
        }
        if cur.rho.abs() > cur.nu1 {
            // nu1 > 0 here, since nu1 = 0 forces rho = 0
            let s = -(cur.rho + cur.nu1).div_euclid(2 * cur.nu1);
            let step = Unimodular::lower(s);
            u = step.mul(&u);
            cur = Index::new(cur.nu1, cur.nu2 + s * cur.rho + s * s * cur.nu1, cur.rho + 2 * s * cur.nu1);
            continue;
        }
        break;
    }
    if cur.rho < 0 {
        u = Unimodular::FLIP.mul(&u);
        cur.rho = -cur.rho;
    }
    debug_assert_eq!(act(&u, n), cur);
    Ok((u, cur))
}

/// All semi-positive indices of the coset with doubled trace at most `tmax`,
/// in canonical order.
pub fn enumerate(c: Coset, tmax: i64) -> Vec<Index> {
    let par = match c {
        Coset::Even => 0,
        Coset::Odd => 1,
    };
    let mut out = Vec::new();
    let mut t = par * 2;
    while t <= tmax {
        let mut nu1 = par;
        while nu1 <= t - par {
            let nu2 = t - nu1;
            let bound = isqrt(4 * nu1 * nu2);
            let mut rho = -bound;
            while rho <= bound {
                if rho.rem_euclid(2) == par {
                    out.push(Index::new(nu1, nu2, rho));
                }
                rho += 1;
            }
            nu1 += 2;
        }
        t += 2;
    }
    out.sort();
    out
}

/// Per-slot restriction on a partition summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportConstraint {
    pub coset: Coset,
    pub min_doubled_trace: i64,
    pub require_positive_det: bool,
}

impl SupportConstraint {
    pub fn any(coset: Coset) -> Self {
        SupportConstraint { coset, min_doubled_trace: 0, require_positive_det: false }
    }

    pub fn cusp(coset: Coset) -> Self {
        let min = match coset {
            Coset::Even => 4,
            Coset::Odd => 2,
        };
        SupportConstraint { coset, min_doubled_trace: min, require_positive_det: true }
    }

    pub fn admits(&self, n: &Index) -> bool {
        n.is_semi_positive()
            && n.coset() == Some(self.coset)
            && n.trace2() >= self.min_doubled_trace
            && (!self.require_positive_det || n.det16() > 0)
    }
}

fn isqrt_floor(x: i64) -> i64 {
    if x < 0 {
        -1
    } else {
        isqrt(x)
    }
}

/// Candidate summands for the first slot of a partition of `rest`, given
/// the constraints of the remaining slots.
fn slot_candidates(rest: &Index, cs: &[SupportConstraint]) -> Vec<Index> {
    let c = cs[0];
    let later = &cs[1..];
    if later.is_empty() {
        return if c.admits(rest) { vec![*rest] } else { vec![] };
    }
    let later_min: i64 = later.iter().map(|s| s.min_doubled_trace).sum();
    let later_pd = later.iter().any(|s| s.require_positive_det);
    let later_coset = later.iter().fold(Coset::Even, |acc, s| acc.add(s.coset));
    if c.coset.add(later_coset) != rest.coset().unwrap_or(Coset::Even) || rest.coset().is_none() {
        return vec![];
    }
    let par = match c.coset {
        Coset::Even => 0,
        Coset::Odd => 1,
    };
    let mut out = Vec::new();
    let mut nu1 = par;
    while nu1 <= rest.nu1 {
        let r1 = rest.nu1 - nu1;
        let mut nu2 = par;
        while nu2 <= rest.nu2 {
            let r2 = rest.nu2 - nu2;
            let t = nu1 + nu2;
            if t < c.min_doubled_trace {
                nu2 += 2;
                continue;
            }
            if r1 + r2 < later_min {
                break;
            }
            let b1 = isqrt_floor(4 * nu1 * nu2);
            let b2 = isqrt_floor(4 * r1 * r2);
            // |rho| <= b1 and |rest.rho - rho| <= b2
            let lo = (-b1).max(rest.rho - b2);
            let hi = b1.min(rest.rho + b2);
            let mut rho = lo;
            if rho.rem_euclid(2) != par {
                rho += 1;
            }
            while rho <= hi {
                let n = Index::new(nu1, nu2, rho);
                let r = rest.sub(&n);
                if (!c.require_positive_det || n.det16() > 0) && (!later_pd || r.det16() > 0) {
                    out.push(n);
                }
                rho += 2;
            }
            nu2 += 2;
        }
        nu1 += 2;
    }
    out
}

/// Lazy stream of additive decompositions `n = n_1 + ... + n_t`.
pub struct Partitions {
    cs: Vec<SupportConstraint>,
    // per depth: candidate list and cursor
    stack: Vec<(Vec<Index>, usize)>,
    current: Vec<Index>,
    rests: Vec<Index>,
    done: bool,
}

pub fn partitions(n: &Index, cs: &[SupportConstraint]) -> Partitions {
    let mut p = Partitions {
        cs: cs.to_vec(),
        stack: Vec::with_capacity(cs.len()),
        current: Vec::with_capacity(cs.len()),
        rests: vec![*n],
        done: cs.is_empty() || !n.is_semi_positive(),
    };
    if !p.done {
        let cands = slot_candidates(n, &p.cs);
        p.stack.push((cands, 0));
    }
    p
}

impl Iterator for Partitions {
    type Item = Vec<Index>;

    fn next(&mut self) -> Option<Vec<Index>> {
        let t = self.cs.len();
        while !self.done {
            let depth = self.stack.len();
            if depth == 0 {
                self.done = true;
                break;
            }
            let (cands, pos) = self.stack.last_mut().unwrap();
            if *pos >= cands.len() {
                self.stack.pop();
                continue;
            }
            let pick = cands[*pos];
            *pos += 1;
            // replace the entry for this depth
            self.current.truncate(depth - 1);
            self.rests.truncate(depth);
            self.current.push(pick);
            if depth == t {
                return Some(self.current.clone());
            }
            let rest = self.rests[depth - 1].sub(&pick);
            self.rests.push(rest);
            let next = slot_candidates(&rest, &self.cs[depth..]);
            self.stack.push((next, 0));
        }
        None
    }
}

/// Visits every decomposition; faster than the iterator in hot loops.
pub fn for_each_partition<F: FnMut(&[Index])>(n: &Index, cs: &[SupportConstraint], mut f: F) {
    fn rec<F: FnMut(&[Index])>(rest: &Index, cs: &[SupportConstraint], acc: &mut Vec<Index>, f: &mut F) {
        for cand in slot_candidates(rest, cs) {
            acc.push(cand);
            if cs.len() == 1 {
                f(acc);
            } else {
                rec(&rest.sub(&cand), &cs[1..], acc, f);
            }
            acc.pop();
        }
    }
    if cs.is_empty() || !n.is_semi_positive() {
        return;
    }
    let mut acc = Vec::with_capacity(cs.len());
    rec(n, cs, &mut acc, &mut f);
}

/// First-slot choices, for splitting work across threads.
pub fn first_slot_choices(n: &Index, cs: &[SupportConstraint]) -> Vec<Index> {
    if cs.is_empty() || !n.is_semi_positive() {
        return vec![];
    }
    slot_candidates(n, cs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn act_examples() {
        let n = Index::new(2, 2, 2);
        assert_eq!(act(&Unimodular::IDENTITY, &n), n);
        assert_eq!(act(&Unimodular::FLIP, &Index::new(3, 5, 1)), Index::new(3, 5, -1));
        // u n u' for upper and lower translations
        assert_eq!(act(&Unimodular::T, &Index::new(2, 0, 0)), Index::new(2, 0, 0));
        assert_eq!(act(&Unimodular::lower(1), &Index::new(2, 0, 0)), Index::new(2, 2, 4));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&Index::new(2, 2, 2)).unwrap(), (Unimodular::IDENTITY, Index::new(2, 2, 2)));
        let (u, r) = reduce(&Index::new(2, 2, -2)).unwrap();
        assert_eq!(r, Index::new(2, 2, 2));
        assert_eq!(u, Unimodular::FLIP);
        let a = reduce(&Index::from_nmr(12, 8, 4)).unwrap().1;
        let b = reduce(&Index::from_nmr(12, 8, -4)).unwrap().1;
        assert_eq!(a, b);
        assert!(reduce(&Index::new(1, 1, 3)).is_err());
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate(Coset::Even, 0), vec![Index::ZERO]);
        let e2: BTreeSet<_> = enumerate(Coset::Even, 2).into_iter().collect();
        let want: BTreeSet<_> = [Index::ZERO, Index::new(2, 0, 0), Index::new(0, 2, 0)].into_iter().collect();
        assert_eq!(e2, want);
        assert_eq!(enumerate(Coset::Odd, 2), vec![Index::new(1, 1, -1), Index::new(1, 1, 1)]);
    }

    fn brute(n: &Index, cs: &[SupportConstraint]) -> BTreeSet<Vec<Index>> {
        let mut pool: Vec<Vec<Index>> = vec![vec![]];
        for c in cs {
            let cands = enumerate(c.coset, n.trace2());
            let mut next = vec![];
            for p in &pool {
                for x in &cands {
                    if c.admits(x) {
                        let mut q = p.clone();
                        q.push(*x);
                        next.push(q);
                    }
                }
            }
            pool = next;
        }
        pool.into_iter()
            .filter(|v| v.iter().fold(Index::ZERO, |a, b| a.add(b)) == *n)
            .collect()
    }

    #[test]
    fn partitions_trivial_and_empty() {
        let any = SupportConstraint::any(Coset::Even);
        let v: Vec<_> = partitions(&Index::ZERO, &[any, any]).collect();
        assert_eq!(v, vec![vec![Index::ZERO, Index::ZERO]]);
        let cusp = SupportConstraint { coset: Coset::Even, min_doubled_trace: 4, require_positive_det: false };
        let n = Index::new(14, 12, 4);
        assert_eq!(partitions(&n, &[cusp; 7]).count(), 0);
    }

    #[test]
    fn partitions_two_slot_count() {
        let any = SupportConstraint::any(Coset::Even);
        let n = Index::new(2, 2, 2);
        let got: BTreeSet<_> = partitions(&n, &[any, any]).collect();
        assert_eq!(got, brute(&n, &[any, any]));
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn partitions_match_bruteforce_small() {
        let any = SupportConstraint::any(Coset::Even);
        let odd = SupportConstraint::any(Coset::Odd);
        let cusp_odd = SupportConstraint::cusp(Coset::Odd);
        for n in enumerate(Coset::Even, 6) {
            for cs in [vec![any, any], vec![any, any, any], vec![odd, odd], vec![cusp_odd, any, cusp_odd]] {
                let got: Vec<_> = partitions(&n, &cs).collect();
                let set: BTreeSet<_> = got.iter().cloned().collect();
                assert_eq!(set.len(), got.len());
                assert_eq!(set, brute(&n, &cs), "n={n} cs={cs:?}");
                let mut n_visit = 0;
                for_each_partition(&n, &cs, |_| n_visit += 1);
                assert_eq!(n_visit, got.len());
            }
        }
    }

    fn arb_unimodular() -> impl Strategy<Value = Unimodular> {
        proptest::collection::vec(0..4usize, 0..6).prop_map(|w| {
            let gens = [Unimodular::S, Unimodular::T, Unimodular::FLIP, Unimodular::SWAP];
            w.into_iter().fold(Unimodular::IDENTITY, |acc, i| acc.mul(&gens[i]))
        })
    }

    fn arb_index() -> impl Strategy<Value = Index> {
        (0i64..12, 0i64..12, -24i64..24, prop::bool::ANY).prop_filter_map("psd", |(a, b, r, odd)| {
            let n = if odd {
                Index::new(2 * a + 1, 2 * b + 1, 2 * r + 1)
            } else {
                Index::new(2 * a, 2 * b, 2 * r)
            };
            n.is_semi_positive().then_some(n)
        })
    }

    proptest! {
        #[test]
        fn act_is_group_action(u in arb_unimodular(), w in arb_unimodular(), n in arb_index()) {
            prop_assert_eq!(act(&u.mul(&w), &n), act(&u, &act(&w, &n)));
            let m = act(&u, &n);
            prop_assert_eq!(m.det16(), n.det16());
            prop_assert!(m.is_semi_positive());
            prop_assert_eq!(m.coset(), n.coset());
        }

        #[test]
        fn reduce_is_orbit_invariant(u in arb_unimodular(), n in arb_index()) {
            let (v, r) = reduce(&n).unwrap();
            prop_assert!(is_reduced(&r));
            prop_assert_eq!(act(&v, &n), r);
            prop_assert_eq!(reduce(&act(&u, &n)).unwrap().1, r);
            prop_assert_eq!(reduce(&r).unwrap(), (Unimodular::IDENTITY, r));
        }
    }
}
