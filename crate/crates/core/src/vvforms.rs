//! Vector-valued expansions built from scalar ones: Rankin-Cohen operators
//! at the Fourier level, the bracket `{F, phi}` and the Satoh bracket.
//!
//! For `P` of matrix degree `d` the coefficient of `D[P](f_1, ..., f_t)` is
//! `sum P(n_1, ..., n_t; v) a_1(n_1) ... a_t(n_t)` over `n_1 + ... + n_t = n`.
//! Matrix entries are fed as `R/4` with `R = (2 nu1, rho, 2 nu2)` so all
//! intermediate values are integers. The sum over the last `t - 1` slots is
//! shared between targets: `U_s(m)` holds the partial convolution of slots
//! `s..t` against each suffix monomial of `P`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{common_denominator, q, scaled_numerator, Q};
use crate::error::{Error, Result};
use crate::expansion::{Coeff, Expansion, ScalarExpansion, VectorExpansion};
use crate::index::{first_slot_choices, Coset, Index, SupportConstraint};
use crate::kernel::{compute_at, targets, Dense};
use rayon::prelude::*;
use crate::poly::Poly;
use crate::rcpoly::{cross, is_harmonic, is_homogeneous, psi, w_apply, HomogPoly, RCCandidate, Sym2};

pub use crate::expansion::scal_mul;

/// Exact integers with an `i128` fast path.
trait Int: Clone + Send + Sync + std::fmt::Debug {
    fn zero() -> Self;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// `self += a * b`
    fn fma(&mut self, a: &Self, b: &Self) -> Option<()>;
    fn mul(a: &Self, b: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Int for i128 {
    fn zero() -> Self {
        0
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn fma(&mut self, a: &Self, b: &Self) -> Option<()> {
        *self = self.checked_add(a.checked_mul(*b)?)?;
        Some(())
    }
    #[inline]
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Int for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn fma(&mut self, a: &Self, b: &Self) -> Option<()> {
        *self += a * b;
        Some(())
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        Some(a * b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type Table<N> = Dense<Option<Box<[N]>>>;

/// Evaluates `f` at every target; `None` from `f` signals overflow.
fn compute_checked<X, F>(ts: &[Index], f: F) -> Option<Vec<(Index, X)>>
where
    X: Send,
    F: Fn(&Index) -> Option<Option<X>> + Sync,
{
    let v: Option<Vec<Option<(Index, X)>>> = ts.par_iter().map(|n| f(n).map(|o| o.map(|x| (*n, x)))).collect();
    v.map(|v| v.into_iter().flatten().collect())
}

fn lookup<'a, N: Clone>(t: &'a Table<N>, n: &Index) -> Option<&'a [N]> {
    t.get(n).and_then(|o| o.as_deref())
}

/// Integer numerators of a scalar expansion over a common denominator.
fn scalar_table<N: Int>(f: &ScalarExpansion, tmax: i64) -> Option<(BigInt, Table<N>)> {
    let den = common_denominator(f.coeffs().values());
    let mut t = Dense::new(tmax, None);
    for (n, c) in f.coeffs() {
        if n.trace2() <= tmax {
            t.set(n, Some(vec![N::from_big(&scaled_numerator(c, &den))?].into_boxed_slice()));
        }
    }
    Some((den, t))
}

fn r_ints(n: &Index) -> [i64; 3] {
    [2 * n.nu1, n.rho, 2 * n.nu2]
}

fn mono_value(e: &[u8; 3], r: &[i64; 3]) -> i128 {
    let mut v: i128 = 1;
    for i in 0..3 {
        for _ in 0..e[i] {
            v *= r[i] as i128;
        }
    }
    v
}

/// `P` split by slot, with integer coefficients.
#[derive(Debug, Clone)]
struct Compiled {
    t: usize,
    width: usize,
    /// `P = P_int / den`
    den: BigInt,
    /// Per slot, the distinct monomials occurring.
    monos: Vec<Vec<[u8; 3]>>,
    /// Per slot `s >= 1`, the distinct suffixes `(e_s, ..., e_{t-1})` as
    /// monomial positions, and for each the position of its tail in level `s + 1`.
    suffixes: Vec<Vec<Vec<usize>>>,
    tails: Vec<Vec<usize>>,
    /// `(e_0 position, level-1 suffix position, coefficient vector)`
    terms: Vec<(usize, usize, Vec<BigInt>)>,
}

fn compile(p: &RCCandidate) -> Result<Compiled> {
    let t = p.t;
    let width = p.j as usize + 1;
    let d = p.r_degree().unwrap_or(0);
    let groups = p.by_r_monomial();
    let den0 = common_denominator(groups.values().flat_map(|h| h.coeffs.iter()));
    // entries are R/4
    let den = den0.clone() * BigInt::from(4).pow(d);
    let mut monos: Vec<Vec<[u8; 3]>> = vec![vec![]; t];
    let slot_mono = |rm: &[u8], s: usize| -> [u8; 3] { [rm[3 * s], rm[3 * s + 1], rm[3 * s + 2]] };
    for rm in groups.keys() {
        for (s, list) in monos.iter_mut().enumerate() {
            let e = slot_mono(rm, s);
            if !list.contains(&e) {
                list.push(e);
            }
        }
    }
    for list in monos.iter_mut() {
        list.sort();
        if list.is_empty() {
            list.push([0, 0, 0]);
        }
    }
    let pos = |s: usize, e: &[u8; 3]| monos[s].iter().position(|x| x == e).unwrap();
    // suffixes per level; level t is the empty suffix
    let mut suffixes: Vec<Vec<Vec<usize>>> = vec![vec![]; t + 1];
    suffixes[t] = vec![vec![]];
    for rm in groups.keys() {
        for s in 1..t {
            let suf: Vec<usize> = (s..t).map(|r| pos(r, &slot_mono(rm, r))).collect();
            if !suffixes[s].contains(&suf) {
                suffixes[s].push(suf);
            }
        }
    }
    if t == 1 {
        suffixes[1] = vec![vec![]];
    }
    let mut tails: Vec<Vec<usize>> = vec![vec![]; t + 1];
    for s in 1..t {
        tails[s] = suffixes[s]
            .iter()
            .map(|suf| suffixes[s + 1].iter().position(|x| x[..] == suf[1..]).unwrap())
            .collect();
    }
    let mut terms = vec![];
    for (rm, h) in &groups {
        let e0 = pos(0, &slot_mono(rm, 0));
        let suf: Vec<usize> = (1..t).map(|r| pos(r, &slot_mono(rm, r))).collect();
        let l1 = suffixes[1].iter().position(|x| *x == suf).unwrap();
        let c: Vec<BigInt> = h.coeffs.iter().map(|x| scaled_numerator(x, &den0)).collect();
        terms.push((e0, l1, c));
    }
    Ok(Compiled { t, width, den, monos, suffixes, tails, terms })
}

struct Plan {
    coset: Coset,
    tmax: i64,
    floor: i64,
    cs: Vec<SupportConstraint>,
}

fn plan(forms: &[&ScalarExpansion]) -> Plan {
    let floors: Vec<i64> = forms.iter().map(|f| f.floor.max(0)).collect();
    let total: i64 = floors.iter().sum();
    let tmax = forms.iter().zip(&floors).map(|(f, fl)| f.tmax + total - fl).min().unwrap();
    let coset = forms.iter().fold(Coset::Even, |c, f| c.add(f.coset));
    Plan { coset, tmax, floor: total, cs: forms.iter().map(|f| f.support_constraint()).collect() }
}

fn run<N: Int>(c: &Compiled, forms: &[&ScalarExpansion], pl: &Plan) -> Option<BTreeMap<Index, HomogPoly>> {
    let t = c.t;
    let mut dens = BigInt::one();
    let mut tabs: Vec<Table<N>> = vec![];
    for f in forms {
        let (d, tab) = scalar_table::<N>(f, pl.tmax)?;
        dens *= d;
        tabs.push(tab);
    }
    let coeffs: Vec<(usize, usize, Vec<N>)> = c
        .terms
        .iter()
        .map(|(e0, l1, v)| Some((*e0, *l1, v.iter().map(N::from_big).collect::<Option<Vec<N>>>()?)))
        .collect::<Option<_>>()?;
    // U_t: the empty suffix, 1 at the zero index
    let mut upper: Table<N> = Dense::new(0, None);
    upper.set(&Index::ZERO, Some(vec![N::from_big(&BigInt::one())?].into_boxed_slice()));
    let mut upper_tmax = 0;
    for s in (1..t).rev() {
        let cs = &pl.cs[s..];
        let coset = cs.iter().fold(Coset::Even, |a, x| a.add(x.coset));
        let floor: i64 = cs.iter().map(|x| x.min_doubled_trace).sum();
        let tm = pl.tmax - pl.cs[..s].iter().map(|x| x.min_doubled_trace).sum::<i64>();
        let sufs = &c.suffixes[s];
        let tails = &c.tails[s];
        let tab = &tabs[s];
        let up = &upper;
        let vals = compute_checked(&targets(coset, tm, floor, false), |m| -> Option<Option<Box<[N]>>> {
            let mut acc: Vec<N> = vec![N::zero(); sufs.len()];
            for ns in first_slot_choices(m, cs) {
                let Some(a) = lookup(tab, &ns) else { continue };
                let rest = m.sub(&ns);
                if rest.trace2() > upper_tmax {
                    continue;
                }
                let Some(u) = lookup(up, &rest) else { continue };
                let r = r_ints(&ns);
                let mv: Vec<i128> = c.monos[s].iter().map(|e| mono_value(e, &r)).collect();
                for (i, suf) in sufs.iter().enumerate() {
                    let uv = &u[tails[i]];
                    if uv.is_zero() {
                        continue;
                    }
                    let w = N::mul(&a[0], &N::from_big(&BigInt::from(mv[suf[0]]))?)?;
                    if w.is_zero() {
                        continue;
                    }
                    acc[i].fma(&w, uv)?;
                }
            }
            Some(if acc.iter().all(|x| x.is_zero()) { None } else { Some(acc.into_boxed_slice()) })
        });
        let mut next: Table<N> = Dense::new(tm, None);
        for (m, v) in vals? {
            next.set(&m, Some(v));
        }
        upper = next;
        upper_tmax = tm;
    }
    // contract level 1 with the coefficients of P: V(m)[e0][i]
    let n0 = c.monos[0].len();
    let w = c.width;
    let mut vtab: Table<N> = Dense::new(upper_tmax, None);
    let level1: Vec<Index> = if t == 1 {
        vec![Index::ZERO]
    } else {
        let cs = &pl.cs[1..];
        let coset = cs.iter().fold(Coset::Even, |a, x| a.add(x.coset));
        let floor: i64 = cs.iter().map(|x| x.min_doubled_trace).sum();
        targets(coset, upper_tmax, floor, false)
    };
    let vvals = compute_checked(&level1, |m| -> Option<Option<Box<[N]>>> {
        let Some(u) = lookup(&upper, m) else { return Some(None) };
        let mut acc = vec![N::zero(); n0 * w];
        for (e0, l1, cv) in &coeffs {
            if u[*l1].is_zero() {
                continue;
            }
            for i in 0..w {
                acc[e0 * w + i].fma(&cv[i], &u[*l1])?;
            }
        }
        Some(Some(acc.into_boxed_slice()))
    });
    for (m, v) in vvals? {
        vtab.set(&m, Some(v));
    }
    let den = &c.den * &dens;
    let tab0 = &tabs[0];
    let reduced = pl.coset == Coset::Even;
    let outs = compute_checked(&targets(pl.coset, pl.tmax, pl.floor, reduced), |n| -> Option<Option<HomogPoly>> {
        let mut acc = vec![N::zero(); w];
        for n0i in first_slot_choices(n, &pl.cs) {
            let Some(a) = lookup(tab0, &n0i) else { continue };
            let rest = n.sub(&n0i);
            let Some(v) = lookup(&vtab, &rest) else { continue };
            let r = r_ints(&n0i);
            for (e, mono) in c.monos[0].iter().enumerate() {
                let mv = N::mul(&a[0], &N::from_big(&BigInt::from(mono_value(mono, &r)))?)?;
                if mv.is_zero() {
                    continue;
                }
                for i in 0..w {
                    acc[i].fma(&mv, &v[e * w + i])?;
                }
            }
        }
        if acc.iter().all(|x| x.is_zero()) {
            return Some(None);
        }
        Some(Some(HomogPoly::from_coeffs(acc.iter().map(|x| Q::new(x.to_big(), den.clone())).collect())))
    });
    Some(outs?.into_iter().collect())
}

/// `D[P](f_1, ..., f_t)`. The weights of the inputs must equal `types`.
pub fn rc_apply(p: &RCCandidate, forms: &[&ScalarExpansion], types: &[i64]) -> Result<VectorExpansion> {
    if forms.len() != p.t || types.len() != p.t {
        return Err(Error::WeightMismatch(format!("{} slots, {} forms, {} weights", p.t, forms.len(), types.len())));
    }
    for (f, k) in forms.iter().zip(types) {
        if f.k != *k || f.j != 0 {
            return Err(Error::WeightMismatch(format!("form of weight {} in a slot of weight {k}", f.k)));
        }
    }
    let d = p.r_degree().ok_or_else(|| Error::Construction("RC polynomial not homogeneous in r".into()))? as i64;
    let ell = d - p.j as i64 / 2;
    if !is_homogeneous(p, p.j, ell) || !is_harmonic(p, types) {
        return Err(Error::Construction("not an RC polynomial for the given type".into()));
    }
    rc_apply_unchecked(p, forms, ell + types.iter().sum::<i64>())
}

/// As `rc_apply`, skipping the RC checks; `k` is the output weight.
pub fn rc_apply_unchecked(p: &RCCandidate, forms: &[&ScalarExpansion], k: i64) -> Result<VectorExpansion> {
    let c = compile(p)?;
    let pl = plan(forms);
    let j = p.j as usize;
    if p.is_zero() || forms.iter().any(|f| f.is_zero()) {
        return Ok(Expansion::zero(j, k, pl.coset, pl.tmax));
    }
    let map = match run::<i128>(&c, forms, &pl) {
        Some(m) => m,
        None => run::<BigInt>(&c, forms, &pl).expect("big integers do not overflow"),
    };
    Ok(finish(j, k, &pl, map))
}

fn finish(j: usize, k: i64, pl: &Plan, reps: BTreeMap<Index, HomogPoly>) -> VectorExpansion {
    if pl.coset == Coset::Even {
        let full = crate::kernel::fill_orbits(pl.coset, pl.tmax, pl.floor, &reps, |u, c: &HomogPoly| c.rho(u, k));
        Expansion::from_map(j, k, pl.coset, pl.tmax, pl.floor, full)
    } else {
        Expansion::from_map(j, k, pl.coset, pl.tmax, pl.floor, reps)
    }
}

/// The three linear pieces of `W`: `W(r) = r11 W11 + r12 W12 + r22 W22`.
fn w_parts(p: &HomogPoly) -> Result<[HomogPoly; 3]> {
    let z = Q::zero();
    let one = Q::one();
    Ok([
        w_apply(&Sym2::new(one.clone(), z.clone(), z.clone()), p)?,
        w_apply(&Sym2::new(z.clone(), one.clone(), z.clone()), p)?,
        w_apply(&Sym2::new(z.clone(), z, one), p)?,
    ])
}

/// The bracket `{F, phi}` of weight `(j, k + l + 1)`.
pub fn bracket(f: &VectorExpansion, phi: &ScalarExpansion) -> Result<VectorExpansion> {
    let j = f.j;
    if j < 2 {
        return Err(Error::Rc(crate::rcpoly::RcError::WDegree(j)));
    }
    let ell = phi.k;
    let k_out = f.k + ell + 1;
    let coset = f.coset.add(phi.coset);
    let tmax = (f.tmax + phi.floor.max(0)).min(phi.tmax + f.floor.max(0));
    let floor = f.floor.max(0) + phi.floor.max(0);
    // 4 (j - 1) c(n) = sum a(n1) sum_e (alpha R_e(n1) - l R_e(n2)) W_e b(n2)
    let alpha = q(f.k) + q(j as i64) / q(2) - Q::one();
    let parts: BTreeMap<Index, Vec<Q>> = f
        .coeffs()
        .iter()
        .map(|(n, b)| Ok((*n, w_parts(b)?.iter().flat_map(|h| h.coeffs.clone()).collect())))
        .collect::<Result<_>>()?;
    let wtab = crate::kernel::IntTable::build(f.tmax, 3 * (j + 1), parts.iter().map(|(n, v)| (n, v.as_slice())))?;
    let atab = phi.int_table()?;
    let alpha_den = alpha.denom().clone();
    let alpha_num = alpha.numer().to_i128().unwrap();
    let ell_num = (BigInt::from(ell) * &alpha_den).to_i128().unwrap();
    let den = &atab.den * &wtab.den * &alpha_den * BigInt::from(4 * (j as i64 - 1));
    let cs = [phi.support_constraint(), f.support_constraint()];
    let w = j + 1;
    let reduced = coset == Coset::Even;
    let reps = compute_at(&targets(coset, tmax, floor, reduced), |n| {
        let mut acc = vec![crate::kernel::Acc::default(); w];
        for n1 in first_slot_choices(n, &cs) {
            let a = atab.scalar(&n1);
            if a == 0 {
                continue;
            }
            let n2 = n.sub(&n1);
            let Some(wb) = wtab.get(&n2) else { continue };
            let (r1, r2) = (r_ints(&n1), r_ints(&n2));
            for e in 0..3 {
                let s = alpha_num * r1[e] as i128 - ell_num * r2[e] as i128;
                if s == 0 {
                    continue;
                }
                let Some(sa) = s.checked_mul(a) else {
                    for i in 0..w {
                        acc[i].add_big(&(BigInt::from(s) * BigInt::from(a) * BigInt::from(wb[e * w + i])));
                    }
                    continue;
                };
                for i in 0..w {
                    acc[i].add_prod(sa, wb[e * w + i]);
                }
            }
        }
        crate::expansion::to_coeff(&acc, &den)
    });
    let pl = Plan { coset, tmax, floor, cs: vec![] };
    Ok(finish(j, k_out, &pl, reps))
}

/// `[f1, f2] = k1 f1 d f2 - k2 f2 d f1`, of weight `(2, k1 + k2)`.
pub fn satoh_bracket(f1: &ScalarExpansion, f2: &ScalarExpansion) -> Result<VectorExpansion> {
    let mut p = Poly::zero(2);
    p.add_term(vec![0, 1], q(f1.k));
    p.add_term(vec![1, 0], q(-f2.k));
    let rc = psi(&p, 2)?;
    rc_apply_unchecked(&rc, &[f1, f2], f1.k + f2.k)
}

fn to_sym2(h: &HomogPoly) -> Sym2 {
    Sym2::new(h.coeffs[0].clone(), h.coeffs[1].clone() / q(2), h.coeffs[2].clone())
}

/// `sum A(n1) x B(n2)` for two forms with values in `H_2`; weight
/// `(2, k_A + k_B + 1)`.
pub fn cross_mul(a: &VectorExpansion, b: &VectorExpansion) -> Result<VectorExpansion> {
    if a.j != 2 || b.j != 2 {
        return Err(Error::WeightMismatch("cross product needs j = 2".into()));
    }
    let coset = a.coset.add(b.coset);
    let tmax = (a.tmax + b.floor.max(0)).min(b.tmax + a.floor.max(0));
    let floor = a.floor.max(0) + b.floor.max(0);
    let cs = [a.support_constraint(), b.support_constraint()];
    let reps = compute_at(&targets(coset, tmax, floor, coset == Coset::Even), |n| {
        let mut s = Sym2::zero();
        for n1 in first_slot_choices(n, &cs) {
            let (Some(x), Some(y)) = (a.coeffs().get(&n1), b.coeffs().get(&n.sub(&n1))) else { continue };
            let c = cross(&to_sym2(x), &to_sym2(y));
            s = Sym2::new(&s.a + &c.a, &s.b + &c.b, &s.c + &c.c);
        }
        let h = s.contract();
        (!h.is_zero()).then_some(h)
    });
    let pl = Plan { coset, tmax, floor, cs: vec![] };
    Ok(finish(2, a.k + b.k + 1, &pl, reps))
}

/// `F / g` for a scalar `g` whose lowest-trace coefficients contain a unique
/// index of largest `rho`; fails unless `g` divides `F` up to the bound.
pub fn divide_exact<C: Coeff>(f: &Expansion<C>, g: &ScalarExpansion) -> Result<Expansion<C>> {
    let lowest = g.coeffs().keys().map(|n| n.trace2()).min().ok_or(Error::NonUnitDivisor)?;
    let lead = *g.coeffs().keys().filter(|n| n.trace2() == lowest).max_by_key(|n| (n.rho, n.nu1)).unwrap();
    let lead_c = g.at(&lead);
    let coset = f.coset.add(g.coset);
    let tmax = f.tmax.min(g.tmax) - lowest;
    let mut order = crate::index::enumerate(coset, tmax);
    order.sort_by_key(|n| (n.trace2(), -n.rho, n.nu1));
    let mut h: HashMap<Index, C> = HashMap::new();
    let cs_g = SupportConstraint { coset: g.coset, min_doubled_trace: lowest, require_positive_det: false };
    let cs_h = SupportConstraint::any(coset);
    for m in order {
        let n = m.add(&lead);
        let mut v = f.get(&n)?;
        for n1 in first_slot_choices(&n, &[cs_g, cs_h]) {
            if n1 == lead {
                continue;
            }
            let Some(c1) = g.coeffs().get(&n1) else { continue };
            let n2 = n.sub(&n1);
            if n2.trace2() > m.trace2() {
                continue;
            }
            let known = h.get(&n2).ok_or(Error::Inconsistent(format!("division order at {n}")))?;
            v.add_scaled(known, &-c1.clone());
        }
        h.insert(m, v.scale(&(Q::one() / &lead_c)));
    }
    let out = Expansion::from_map(f.j, f.k - g.k, coset, tmax, (f.floor - lowest).max(0), h.into_iter().collect());
    // verify g * out = f on every index up to the bound
    let prod = if let Some(v) = as_vector(&out) {
        to_generic::<C>(&scal_mul(g, &v)?)
    } else {
        return Err(Error::Construction("unsupported coefficient type".into()));
    };
    for n in crate::index::enumerate(f.coset, f.tmax.min(g.tmax)) {
        if prod.get(&n).ok() != Some(f.at(&n)) && n.trace2() <= prod.tmax {
            return Err(Error::Inconsistent(format!("not divisible at {n}")));
        }
    }
    Ok(out)
}

fn as_vector<C: Coeff>(e: &Expansion<C>) -> Option<VectorExpansion> {
    let m = e.coeffs().iter().map(|(n, c)| (*n, HomogPoly::from_coeffs(c.to_vec()))).collect();
    Some(Expansion::from_map(e.j, e.k, e.coset, e.tmax, e.floor, m))
}

fn to_generic<C: Coeff>(e: &VectorExpansion) -> Expansion<C> {
    let m = e.coeffs().iter().map(|(n, c)| (*n, C::from_vec(c.coeffs.clone()))).collect();
    Expansion::from_map(e.j, e.k, e.coset, e.tmax, e.floor, m)
}

pub fn lincomb(coeffs: &[Q], forms: &[&VectorExpansion]) -> Result<VectorExpansion> {
    Expansion::lincomb(coeffs, forms)
}

pub fn is_cusp(f: &VectorExpansion) -> bool {
    f.is_cusp()
}

pub fn check_equivariance(f: &VectorExpansion) -> bool {
    f.check_equivariance()
}
