//! Homogeneous polynomials in `(x, y)`, RC-polynomials and the operators
//! that build them.
//!
//! An [`RCCandidate`] with `t` slots is a [`Poly`] in `3t + 2` variables:
//! `r^s_11, r^s_12, r^s_22` sit at `3s, 3s + 1, 3s + 2` and `x, y` come last.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{falling, fmt_q, q, qi, Q};
use crate::arith::binomial;
use crate::linalg::SparseEchelon;
use crate::poly::{Mono, Poly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RcError {
    #[error("j must be even, got {0}")]
    OddJ(u32),
    #[error("degree mismatch: polynomial gives j = {got}, expected {want}")]
    DegreeMismatch { got: u32, want: u32 },
    #[error("the W operator needs j >= 2, got {0}")]
    WDegree(usize),
    #[error("singular matrix")]
    Singular,
    #[error("expected {want} slots, got {got}")]
    SlotCount { want: usize, got: usize },
}

/// Element of `H_j`, stored as coefficients of `x^j, x^(j-1) y, ..., y^j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    pub coeffs: Vec<Q>,
}

impl HomogPoly {
    pub fn zero(j: usize) -> Self {
        HomogPoly { coeffs: vec![Q::zero(); j + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<Q>) -> Self {
        assert!(!coeffs.is_empty());
        HomogPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        HomogPoly::from_coeffs(c.iter().map(|&x| q(x)).collect())
    }

    /// The monomial `x^(j-i) y^i`.
    pub fn monomial(j: usize, i: usize) -> Self {
        let mut p = HomogPoly::zero(j);
        p.coeffs[i] = Q::one();
        p
    }

    pub fn constant(c: Q) -> Self {
        HomogPoly { coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &HomogPoly) -> HomogPoly {
        assert_eq!(self.degree(), o.degree());
        HomogPoly { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn add_assign(&mut self, o: &HomogPoly) {
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
    }

    pub fn sub(&self, o: &HomogPoly) -> HomogPoly {
        assert_eq!(self.degree(), o.degree());
        HomogPoly { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &Q) -> HomogPoly {
        HomogPoly { coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    pub fn neg(&self) -> HomogPoly {
        HomogPoly { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, o: &HomogPoly) -> HomogPoly {
        let mut out = HomogPoly::zero(self.degree() + o.degree());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (l, b) in o.coeffs.iter().enumerate() {
                out.coeffs[i + l] += a * b;
            }
        }
        out
    }

    /// Partial derivatives `(d/dx, d/dy)`, each of degree `j - 1`.
    pub fn partials(&self) -> (HomogPoly, HomogPoly) {
        let j = self.degree();
        assert!(j >= 1);
        let mut dx = HomogPoly::zero(j - 1);
        let mut dy = HomogPoly::zero(j - 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            let ex = (j - i) as i64;
            let ey = i as i64;
            if ex > 0 {
                dx.coeffs[i] += c * q(ex);
            }
            if ey > 0 {
                dy.coeffs[i - 1] += c * q(ey);
            }
        }
        (dx, dy)
    }

    /// `p((x, y) G)` for `G = (a b; c d)`, i.e. `x -> a x + c y`, `y -> b x + d y`.
    pub fn linear_subst(&self, g: &[[Q; 2]; 2]) -> HomogPoly {
        let j = self.degree();
        let lx = HomogPoly::from_coeffs(vec![g[0][0].clone(), g[1][0].clone()]);
        let ly = HomogPoly::from_coeffs(vec![g[0][1].clone(), g[1][1].clone()]);
        let mut px = vec![HomogPoly::constant(Q::one())];
        let mut py = vec![HomogPoly::constant(Q::one())];
        for i in 0..j {
            px.push(px[i].mul(&lx));
            py.push(py[i].mul(&ly));
        }
        let mut out = HomogPoly::zero(j);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out.add_assign(&px[j - i].mul(&py[i]).scale(c));
        }
        out
    }

    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        let j = self.degree();
        let mut acc = Q::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut t = c.clone();
            for _ in 0..(j - i) {
                t *= x;
            }
            for _ in 0..i {
                t *= y;
            }
            acc += t;
        }
        acc
    }

    /// `Some(c)` with `self = c * other`.
    pub fn ratio_to(&self, other: &HomogPoly) -> Option<Q> {
        let i = other.coeffs.iter().position(|c| !c.is_zero())?;
        let r = &self.coeffs[i] / &other.coeffs[i];
        (other.scale(&r) == *self).then_some(r)
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `det(u)^k p((x, y) u)`.
pub fn rho_apply(u: &[[Q; 2]; 2], k: i64, p: &HomogPoly) -> Result<HomogPoly, RcError> {
    let det = &u[0][0] * &u[1][1] - &u[0][1] * &u[1][0];
    if det.is_zero() {
        return Err(RcError::Singular);
    }
    let s = if k >= 0 {
        num_traits::pow(det, k as usize)
    } else {
        num_traits::pow(Q::one() / det, (-k) as usize)
    };
    Ok(p.linear_subst(u).scale(&s))
}

/// Symmetric 2x2 matrix `(a b; b c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sym2 {
    pub a: Q,
    pub b: Q,
    pub c: Q,
}

impl Sym2 {
    pub fn new(a: Q, b: Q, c: Q) -> Self {
        Sym2 { a, b, c }
    }

    pub fn zero() -> Self {
        Sym2::new(Q::zero(), Q::zero(), Q::zero())
    }

    pub fn from_index(n: &crate::index::Index) -> Self {
        Sym2::new(crate::arith::qr(n.nu1, 2), crate::arith::qr(n.rho, 4), crate::arith::qr(n.nu2, 2))
    }

    pub fn scale(&self, s: &Q) -> Sym2 {
        Sym2::new(&self.a * s, &self.b * s, &self.c * s)
    }

    pub fn sub(&self, o: &Sym2) -> Sym2 {
        Sym2::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c)
    }

    /// `G A G'` for a general 2x2 matrix `G`.
    pub fn congruence(&self, g: &[[Q; 2]; 2]) -> Sym2 {
        let m = [[self.a.clone(), self.b.clone()], [self.b.clone(), self.c.clone()]];
        let mut gm = [[Q::zero(), Q::zero()], [Q::zero(), Q::zero()]];
        for i in 0..2 {
            for l in 0..2 {
                gm[i][l] = &g[i][0] * &m[0][l] + &g[i][1] * &m[1][l];
            }
        }
        let e = |i: usize, l: usize| &gm[i][0] * &g[l][0] + &gm[i][1] * &g[l][1];
        Sym2::new(e(0, 0), e(0, 1), e(1, 1))
    }

    /// The quadratic form `A[v] = a x^2 + 2 b xy + c y^2`.
    pub fn contract(&self) -> HomogPoly {
        HomogPoly::from_coeffs(vec![self.a.clone(), &self.b * q(2), self.c.clone()])
    }
}

/// `A J B - B J A` with `J = (0 1; -1 0)`.
pub fn cross(a: &Sym2, b: &Sym2) -> Sym2 {
    let two = q(2);
    Sym2::new(
        (&a.a * &b.b - &a.b * &b.a) * &two,
        &a.a * &b.c - &a.c * &b.a,
        (&a.b * &b.c - &a.c * &b.b) * &two,
    )
}

/// Polynomial in the variables `r_1, ..., r_t` of elliptic RC-polynomials.
pub type EllipticPoly = Poly;

/// The elliptic Rankin-Cohen polynomial `p_{j,(k1,k2)}` in `r_1, r_2`.
pub fn elliptic_rc(j: u32, k1: i64, k2: i64) -> Result<EllipticPoly, RcError> {
    if j % 2 != 0 {
        return Err(RcError::OddJ(j));
    }
    let h = j / 2;
    let mut p = Poly::zero(2);
    for i in 0..=h {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let c = binomial(h, i) * falling(k1 + h as i64 - 1, i) * falling(k2 + h as i64 - 1, h - i) * sign;
        p.add_term(vec![(h - i) as u8, i as u8], qi(&c));
    }
    Ok(p)
}

/// A candidate RC-polynomial with `t` matrix slots and values in `H_j`.
#[derive(Clone, PartialEq, Eq)]
pub struct RCCandidate {
    pub t: usize,
    pub j: u32,
    pub poly: Poly,
}

impl fmt::Debug for RCCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RC(t={}, j={}): {:?}", self.t, self.j, self.poly)
    }
}

pub fn r_var(s: usize, e: usize) -> usize {
    3 * s + e
}

fn xvar(t: usize) -> usize {
    3 * t
}

fn yvar(t: usize) -> usize {
    3 * t + 1
}

/// `r^s[v]` as a polynomial in the `3t + 2` variables.
fn r_of_v(t: usize, s: usize) -> Poly {
    let n = 3 * t + 2;
    let x = Poly::var(n, xvar(t));
    let y = Poly::var(n, yvar(t));
    Poly::var(n, r_var(s, 0))
        .mul(&x.mul(&x))
        .add(&Poly::var(n, r_var(s, 1)).mul(&x.mul(&y)).scale(&q(2)))
        .add(&Poly::var(n, r_var(s, 2)).mul(&y.mul(&y)))
}

fn symbolic_matrix(t: usize, s: usize) -> [Poly; 3] {
    let n = 3 * t + 2;
    [Poly::var(n, r_var(s, 0)), Poly::var(n, r_var(s, 1)), Poly::var(n, r_var(s, 2))]
}

fn cross_poly(a: &[Poly; 3], b: &[Poly; 3]) -> [Poly; 3] {
    let two = q(2);
    [
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])).scale(&two),
        a[0].mul(&b[2]).sub(&a[2].mul(&b[0])),
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])).scale(&two),
    ]
}

fn contract_poly(m: &[Poly; 3], t: usize) -> Poly {
    let n = 3 * t + 2;
    let x = Poly::var(n, xvar(t));
    let y = Poly::var(n, yvar(t));
    m[0].mul(&x.mul(&x)).add(&m[1].mul(&x.mul(&y)).scale(&q(2))).add(&m[2].mul(&y.mul(&y)))
}

/// `Psi`: substitutes `r_s -> r^s[v]`.
pub fn psi(p: &EllipticPoly, j_out: u32) -> Result<RCCandidate, RcError> {
    let t = p.nvars();
    let images: Vec<Poly> = (0..t).map(|s| r_of_v(t, s)).collect();
    let out = if t == 0 { Poly::constant(2, p.coeff(&[])) } else { p.subst(&images) };
    if !out.is_zero() {
        let got = out.homogeneous_degree_in(&[xvar(t), yvar(t)]).unwrap_or(u32::MAX);
        if got != j_out {
            return Err(RcError::DegreeMismatch { got, want: j_out });
        }
    }
    Ok(RCCandidate { t, j: j_out, poly: out })
}

/// The operator `M_k` on `C[r_1, r_2, r_3]`.
pub fn m_op(p: &EllipticPoly, k: &[i64; 3]) -> RCCandidate {
    assert_eq!(p.nvars(), 3);
    let t = 3;
    let deg = p.homogeneous_degree_in(&[0, 1, 2]).unwrap_or(0);
    let j = 2 * deg + 2;
    let rm: Vec<[Poly; 3]> = (0..3).map(|s| symbolic_matrix(t, s)).collect();
    let inner = |s: usize| -> Poly {
        let q_s = p.scale(&q(k[s])).add(&p.deriv(s).mul_var(s));
        psi(&q_s, 2 * deg).expect("homogeneous input").poly
    };
    let c12 = contract_poly(&cross_poly(&rm[0], &rm[1]), t);
    let c13 = contract_poly(&cross_poly(&rm[0], &rm[2]), t);
    let c23 = contract_poly(&cross_poly(&rm[1], &rm[2]), t);
    let poly = c12.mul(&inner(2)).sub(&c13.mul(&inner(1))).add(&c23.mul(&inner(0)));
    RCCandidate { t, j, poly }
}

/// `W(r) p`, with each monomial multiplied after differentiating.
pub fn w_apply(r: &Sym2, p: &HomogPoly) -> Result<HomogPoly, RcError> {
    let j = p.degree();
    if j < 2 {
        return Err(RcError::WDegree(j));
    }
    let (px, py) = p.partials();
    let (pxx, pxy) = px.partials();
    let (_, pyy) = py.partials();
    let x2 = HomogPoly::monomial(2, 0);
    let xy = HomogPoly::monomial(2, 1);
    let y2 = HomogPoly::monomial(2, 2);
    // r11 (-xy p_yy - x^2 p_xy) - r12 (y^2 p_yy - x^2 p_xx) + r22 (y^2 p_xy + xy p_xx)
    let t11 = xy.mul(&pyy).add(&x2.mul(&pxy)).neg();
    let t12 = y2.mul(&pyy).sub(&x2.mul(&pxx));
    let t22 = y2.mul(&pxy).add(&xy.mul(&pxx));
    Ok(t11.scale(&r.a).sub(&t12.scale(&r.b)).add(&t22.scale(&r.c)))
}

impl RCCandidate {
    pub fn zero(t: usize, j: u32) -> Self {
        RCCandidate { t, j, poly: Poly::zero(3 * t + 2) }
    }

    pub fn scale(&self, s: &Q) -> Self {
        RCCandidate { t: self.t, j: self.j, poly: self.poly.scale(s) }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Degree in the matrix variables, if homogeneous.
    pub fn r_degree(&self) -> Option<u32> {
        let vars: Vec<usize> = (0..3 * self.t).collect();
        self.poly.homogeneous_degree_in(&vars)
    }

    /// Groups terms by their `r`-monomial, giving `H_j` coefficients.
    pub fn by_r_monomial(&self) -> BTreeMap<Mono, HomogPoly> {
        let t = self.t;
        let j = self.j as usize;
        let mut out: BTreeMap<Mono, HomogPoly> = BTreeMap::new();
        for (m, c) in self.poly.terms() {
            let ey = m[yvar(t)] as usize;
            let rm: Mono = m[..3 * t].to_vec();
            let e = out.entry(rm).or_insert_with(|| HomogPoly::zero(j));
            e.coeffs[ey] += c;
        }
        out
    }

    /// Numeric substitution of the matrix variables.
    pub fn eval_at(&self, mats: &[Sym2]) -> Result<HomogPoly, RcError> {
        if mats.len() != self.t {
            return Err(RcError::SlotCount { want: self.t, got: mats.len() });
        }
        let mut out = HomogPoly::zero(self.j as usize);
        for (rm, h) in self.by_r_monomial() {
            let mut v = Q::one();
            for (s, mat) in mats.iter().enumerate() {
                for (e, val) in [&mat.a, &mat.b, &mat.c].into_iter().enumerate() {
                    for _ in 0..rm[r_var(s, e)] {
                        v *= val;
                    }
                }
            }
            if !v.is_zero() {
                out.add_assign(&h.scale(&v));
            }
        }
        Ok(out)
    }
}

/// How the checkers decide a polynomial identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Symbolic,
    Randomized { seed: u64, points: usize },
}

impl Default for CheckMode {
    fn default() -> Self {
        CheckMode::Randomized { seed: 0x5eed, points: 8 }
    }
}

/// Lie algebra action of `E_12` and `E_21` (traceless, so no `ell` term).
fn lie_offdiag(p: &Poly, t: usize, upper: bool) -> Poly {
    let mut out = Poly::zero(p.nvars());
    for s in 0..t {
        let (i11, i12, i22) = (r_var(s, 0), r_var(s, 1), r_var(s, 2));
        if upper {
            out = out.add(&p.deriv(i11).mul_var(i12).scale(&q(2))).add(&p.deriv(i12).mul_var(i22));
        } else {
            out = out.add(&p.deriv(i12).mul_var(i11)).add(&p.deriv(i22).mul_var(i12).scale(&q(2)));
        }
    }
    if upper {
        out.sub(&p.deriv(yvar(t)).mul_var(xvar(t)))
    } else {
        out.sub(&p.deriv(xvar(t)).mul_var(yvar(t)))
    }
}

/// Torus weights `(2 A11 + A12 - ex, A12 + 2 A22 - ey)` of a monomial.
fn torus_weight(m: &[u8], t: usize) -> (i64, i64) {
    let mut w1 = 0i64;
    let mut w2 = 0i64;
    for s in 0..t {
        let (a11, a12, a22) = (m[r_var(s, 0)] as i64, m[r_var(s, 1)] as i64, m[r_var(s, 2)] as i64);
        w1 += 2 * a11 + a12;
        w2 += a12 + 2 * a22;
    }
    (w1 - m[xvar(t)] as i64, w2 - m[yvar(t)] as i64)
}

/// The Laplacian of the substituted polynomial, pulled back through
/// `r = xi xi'` by the chain rule.
fn pulled_back_laplacian(p: &Poly, k: &[i64]) -> Poly {
    let mut out = Poly::zero(p.nvars());
    for (s, &ks) in k.iter().enumerate() {
        let (i11, i12, i22) = (r_var(s, 0), r_var(s, 1), r_var(s, 2));
        let d11 = p.deriv(i11);
        let d22 = p.deriv(i22);
        let d12 = p.deriv(i12);
        let four = q(4);
        out = out
            .add(&d11.add(&d22).scale(&q(4 * ks)))
            .add(&d11.deriv(i11).mul_var(i11).scale(&four))
            .add(&d22.deriv(i22).mul_var(i22).scale(&four))
            .add(&d11.deriv(i12).add(&d22.deriv(i12)).mul_var(i12).scale(&four))
            .add(&d12.deriv(i12).mul_var(i11).add(&d12.deriv(i12).mul_var(i22)));
    }
    out
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-1000i64..=1000).into(), rng.gen_range(1i64..=50).into())
}

/// `rho`-homogeneity of weight `(j, ell)`.
pub fn is_homogeneous(p: &RCCandidate, j: u32, ell: i64) -> bool {
    is_homogeneous_with(p, j, ell, CheckMode::default())
}

pub fn is_homogeneous_with(p: &RCCandidate, j: u32, ell: i64, mode: CheckMode) -> bool {
    if p.is_zero() {
        return true;
    }
    let t = p.t;
    if p.poly.homogeneous_degree_in(&[xvar(t), yvar(t)]) != Some(j) {
        return false;
    }
    match mode {
        CheckMode::Symbolic => {
            p.poly.terms().keys().all(|m| torus_weight(m, t) == (ell, ell))
                && lie_offdiag(&p.poly, t, true).is_zero()
                && lie_offdiag(&p.poly, t, false).is_zero()
        }
        CheckMode::Randomized { seed, points } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let nv = 3 * t + 2;
            for _ in 0..points {
                let g = loop {
                    let g = [[random_q(&mut rng), random_q(&mut rng)], [random_q(&mut rng), random_q(&mut rng)]];
                    if !(&g[0][0] * &g[1][1] - &g[0][1] * &g[1][0]).is_zero() {
                        break g;
                    }
                };
                let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
                let mats: Vec<Sym2> =
                    (0..t).map(|_| Sym2::new(random_q(&mut rng), random_q(&mut rng), random_q(&mut rng))).collect();
                let (x, y) = (random_q(&mut rng), random_q(&mut rng));
                let mut lhs_pt = vec![Q::zero(); nv];
                let mut rhs_pt = vec![Q::zero(); nv];
                for (s, m) in mats.iter().enumerate() {
                    let gm = m.congruence(&g);
                    lhs_pt[r_var(s, 0)] = gm.a;
                    lhs_pt[r_var(s, 1)] = gm.b;
                    lhs_pt[r_var(s, 2)] = gm.c;
                    rhs_pt[r_var(s, 0)] = m.a.clone();
                    rhs_pt[r_var(s, 1)] = m.b.clone();
                    rhs_pt[r_var(s, 2)] = m.c.clone();
                }
                lhs_pt[xvar(t)] = x.clone();
                lhs_pt[yvar(t)] = y.clone();
                // G' v
                rhs_pt[xvar(t)] = &g[0][0] * &x + &g[1][0] * &y;
                rhs_pt[yvar(t)] = &g[0][1] * &x + &g[1][1] * &y;
                let scale = if ell >= 0 {
                    num_traits::pow(det.clone(), ell as usize)
                } else {
                    num_traits::pow(Q::one() / det.clone(), (-ell) as usize)
                };
                if p.poly.eval(&lhs_pt) != scale * p.poly.eval(&rhs_pt) {
                    return false;
                }
            }
            true
        }
    }
}

/// `k`-harmonicity.
pub fn is_harmonic(p: &RCCandidate, k: &[i64]) -> bool {
    is_harmonic_with(p, k, CheckMode::default())
}

pub fn is_harmonic_with(p: &RCCandidate, k: &[i64], mode: CheckMode) -> bool {
    if k.len() != p.t {
        return false;
    }
    if p.is_zero() {
        return true;
    }
    match mode {
        CheckMode::Symbolic => pulled_back_laplacian(&p.poly, k).is_zero(),
        CheckMode::Randomized { seed, points } => {
            let t = p.t;
            let nv = 3 * t + 2;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
            // first and second partials, evaluated pointwise
            let firsts: Vec<[Poly; 3]> = (0..t)
                .map(|s| [p.poly.deriv(r_var(s, 0)), p.poly.deriv(r_var(s, 1)), p.poly.deriv(r_var(s, 2))])
                .collect();
            for _ in 0..points {
                let pt: Vec<Q> = (0..nv).map(|_| random_q(&mut rng)).collect();
                let mut acc = Q::zero();
                for (s, &ks) in k.iter().enumerate() {
                    let (i11, i12, i22) = (r_var(s, 0), r_var(s, 1), r_var(s, 2));
                    let [d11, d12, d22] = &firsts[s];
                    acc += q(4 * ks) * (d11.eval(&pt) + d22.eval(&pt));
                    acc += q(4) * &pt[i11] * d11.deriv(i11).eval(&pt);
                    acc += q(4) * &pt[i22] * d22.deriv(i22).eval(&pt);
                    acc += q(4) * &pt[i12] * (d11.deriv(i12).eval(&pt) + d22.deriv(i12).eval(&pt));
                    acc += (&pt[i11] + &pt[i22]) * d12.deriv(i12).eval(&pt);
                }
                if !acc.is_zero() {
                    return false;
                }
            }
            true
        }
    }
}

/// A basis of the RC-polynomials of weight `(j, ell)` and type `k`.
pub fn solve_rc_space(j: u32, ell: i64, k: &[i64]) -> Vec<RCCandidate> {
    let t = k.len();
    if j % 2 != 0 || ell < 0 {
        return vec![];
    }
    let d = ell as u32 + j / 2;
    let nv = 3 * t + 2;
    // unknown monomials: r-degree d, xy-degree j, torus weight (ell, ell)
    let mut unknowns: Vec<Mono> = Vec::new();
    let mut rmonos: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..3 * t {
        let mut next = Vec::new();
        for m in &rmonos {
            let used: u32 = m.iter().map(|&e| e as u32).sum();
            for e in 0..=(d - used) {
                let mut m2 = m.clone();
                m2.push(e as u8);
                next.push(m2);
            }
        }
        rmonos = next;
    }
    for rm in rmonos {
        if rm.iter().map(|&e| e as u32).sum::<u32>() != d {
            continue;
        }
        for ey in 0..=j {
            let mut m = rm.clone();
            m.push((j - ey) as u8);
            m.push(ey as u8);
            if torus_weight(&m, t) == (ell, ell) {
                unknowns.push(m);
            }
        }
    }
    if unknowns.is_empty() {
        return vec![];
    }
    let mut eq_rows: BTreeMap<(u8, Mono), BTreeMap<usize, Q>> = BTreeMap::new();
    for (col, m) in unknowns.iter().enumerate() {
        let mono = Poly::monomial(m.clone(), Q::one());
        let images = [
            (0u8, lie_offdiag(&mono, t, true)),
            (1u8, lie_offdiag(&mono, t, false)),
            (2u8, pulled_back_laplacian(&mono, k)),
        ];
        for (tag, img) in images {
            for (om, c) in img.terms() {
                eq_rows.entry((tag, om.clone())).or_default().insert(col, c.clone());
            }
        }
    }
    let mut ech = SparseEchelon::new(unknowns.len());
    for row in eq_rows.into_values() {
        ech.insert(row);
    }
    ech.nullspace()
        .into_iter()
        .map(|v| {
            let mut poly = Poly::zero(nv);
            for (c, m) in v.iter().zip(&unknowns) {
                poly.add_term(m.clone(), c.clone());
            }
            // clear denominators and content for a canonical basis element
            let poly = normalize_content(&poly);
            RCCandidate { t, j, poly }
        })
        .collect()
}

/// Scales a polynomial to coprime integer coefficients with positive leading term.
pub fn normalize_content(p: &Poly) -> Poly {
    use num_integer::Integer;
    let den = p.terms().values().fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled = p.scale(&qi(&den));
    let g = scaled.terms().values().fold(num_bigint::BigInt::zero(), |acc, c| acc.gcd(c.numer()));
    if g.is_zero() {
        return scaled;
    }
    let lead_neg = scaled.terms().values().next_back().map(|c| c.is_negative()).unwrap_or(false);
    let s = if lead_neg { -qi(&g) } else { qi(&g) };
    scaled.scale(&(Q::one() / s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qr;

    fn sym(a: i64, b: i64, c: i64) -> Sym2 {
        Sym2::new(q(a), q(b), q(c))
    }

    #[test]
    fn elliptic_examples() {
        assert_eq!(elliptic_rc(0, 3, 4).unwrap(), Poly::one(2));
        let p2 = elliptic_rc(2, 3, 7).unwrap();
        assert_eq!(p2.coeff(&[1, 0]), q(7));
        assert_eq!(p2.coeff(&[0, 1]), q(-3));
        let p = elliptic_rc(4, 6, 5).unwrap();
        assert_eq!(p.coeff(&[2, 0]), q(30));
        assert_eq!(p.coeff(&[1, 1]), q(-84));
        assert_eq!(p.coeff(&[0, 2]), q(42));
        assert!(elliptic_rc(3, 1, 1).is_err());
    }

    #[test]
    fn psi_examples() {
        let one = psi(&Poly::one(1), 0).unwrap();
        assert_eq!(one.eval_at(&[Sym2::zero()]).unwrap(), HomogPoly::constant(q(1)));
        let r1 = psi(&Poly::var(1, 0), 2).unwrap();
        let v = r1.eval_at(&[Sym2::new(q(1), qr(1, 2), q(1))]).unwrap();
        assert_eq!(v, HomogPoly::from_ints(&[1, 1, 1]));
        assert!(psi(&Poly::var(1, 0), 4).is_err());
    }

    #[test]
    fn cross_examples() {
        let a = sym(3, -2, 5);
        assert_eq!(cross(&a, &a), Sym2::zero());
        assert_eq!(cross(&sym(1, 0, 0), &sym(0, 0, 1)), sym(0, 1, 0));
        let g = [[q(1), q(0)], [q(0), q(2)]];
        let b = sym(1, 4, -3);
        let lhs = cross(&a.congruence(&g), &b.congruence(&g));
        let rhs = cross(&a, &b).congruence(&g).scale(&q(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn w_examples() {
        let p = HomogPoly::from_ints(&[1, -2, 3, 0, 5]);
        assert!(w_apply(&Sym2::zero(), &p).unwrap().is_zero());
        let xj = HomogPoly::monomial(6, 0);
        assert!(w_apply(&sym(7, 0, 0), &xj).unwrap().is_zero());
        // r = (0,0;0,1), x^a y^b -> a (j-1) x^(a-1) y^(b+1)
        for a in 1..=6usize {
            let p = HomogPoly::monomial(6, 6 - a);
            let w = w_apply(&sym(0, 0, 1), &p).unwrap();
            assert_eq!(w, HomogPoly::monomial(6, 7 - a).scale(&q(5 * a as i64)));
        }
        assert!(w_apply(&sym(1, 0, 0), &HomogPoly::monomial(1, 0)).is_err());
    }

    #[test]
    fn rho_examples() {
        let id = [[q(1), q(0)], [q(0), q(1)]];
        let p = HomogPoly::from_ints(&[1, 2, 3, 4]);
        assert_eq!(rho_apply(&id, 5, &p).unwrap(), p);
        let flip = [[q(1), q(0)], [q(0), q(-1)]];
        for b in 0..=4usize {
            let m = HomogPoly::monomial(4, b);
            let sign = if (5 + b) % 2 == 0 { 1 } else { -1 };
            assert_eq!(rho_apply(&flip, 5, &m).unwrap(), m.scale(&q(sign)));
        }
        let tr = [[q(1), q(1)], [q(0), q(1)]];
        assert_eq!(rho_apply(&tr, 3, &HomogPoly::monomial(6, 0)).unwrap(), HomogPoly::monomial(6, 0));
    }

    #[test]
    fn m_op_of_one() {
        let k = [3, 5, 7];
        let p = m_op(&Poly::one(3), &k);
        let mats = [sym(1, 2, 3), sym(-1, 0, 4), sym(2, 1, 1)];
        let want = cross(&mats[0], &mats[1])
            .contract()
            .scale(&q(7))
            .sub(&cross(&mats[0], &mats[2]).contract().scale(&q(5)))
            .add(&cross(&mats[1], &mats[2]).contract().scale(&q(3)));
        assert_eq!(p.eval_at(&mats).unwrap(), want);
        assert!(m_op(&Poly::one(3), &k).eval_at(&[Sym2::zero(), Sym2::zero(), Sym2::zero()]).unwrap().is_zero());
        for mode in [CheckMode::Symbolic, CheckMode::default()] {
            let p = m_op(&Poly::one(3), &[1, 1, 1]);
            assert!(is_homogeneous_with(&p, 2, 1, mode));
            assert!(is_harmonic_with(&p, &[1, 1, 1], mode));
        }
    }

    #[test]
    fn m_op_degree_four() {
        let k = [4i64, 6, 9];
        // (k1+1) r2 - (k2+1) r1
        let mut p = Poly::zero(3);
        p.add_term(vec![0, 1, 0], q(k[0] + 1));
        p.add_term(vec![1, 0, 0], q(-(k[1] + 1)));
        let m = m_op(&p, &k);
        for mode in [CheckMode::Symbolic, CheckMode::default()] {
            assert!(is_homogeneous_with(&m, 4, 1, mode));
            assert!(is_harmonic_with(&m, &k, mode));
            assert!(!is_harmonic_with(&m, &[4, 6, 8], mode));
            assert!(!is_homogeneous_with(&m, 4, 2, mode));
        }
    }

    #[test]
    fn psi_elliptic_is_rc() {
        let p = psi(&elliptic_rc(6, 4, 6).unwrap(), 6).unwrap();
        for mode in [CheckMode::Symbolic, CheckMode::default()] {
            assert!(is_homogeneous_with(&p, 6, 0, mode));
            assert!(is_harmonic_with(&p, &[4, 6], mode));
            assert!(!is_harmonic_with(&p, &[4, 5], mode));
        }
        assert!(is_homogeneous(&RCCandidate::zero(2, 6), 6, 3));
    }

    /// Literal Laplacian over a 2 x 2 matrix of indeterminates, for t = 1.
    fn literal_laplacian_is_zero(p: &RCCandidate) -> bool {
        // variables: xi11, xi12, xi21, xi22, x, y
        let n = 6;
        let v = |i| Poly::var(n, i);
        let r11 = v(0).mul(&v(0)).add(&v(1).mul(&v(1)));
        let r12 = v(0).mul(&v(2)).add(&v(1).mul(&v(3)));
        let r22 = v(2).mul(&v(2)).add(&v(3).mul(&v(3)));
        let pt = p.poly.subst(&[r11, r12, r22, v(4), v(5)]);
        let lap = (0..4).fold(Poly::zero(n), |acc, i| acc.add(&pt.deriv(i).deriv(i)));
        lap.is_zero()
    }

    #[test]
    fn harmonic_matches_literal_oracle_t1() {
        let x = Poly::var(5, 3);
        let cands = [
            Poly::var(5, 0).mul(&x.pow(4)),
            r_of_v(1, 0).pow(2),
            Poly::var(5, 0).mul(&Poly::var(5, 2)).sub(&Poly::var(5, 1).pow(2)),
            Poly::var(5, 0).pow(2).scale(&q(3)).sub(&Poly::var(5, 1).pow(2)).add(&Poly::var(5, 2)),
        ];
        for c in cands {
            let j = c.homogeneous_degree_in(&[3, 4]).unwrap();
            let p = RCCandidate { t: 1, j, poly: c };
            let oracle = literal_laplacian_is_zero(&p);
            assert_eq!(is_harmonic_with(&p, &[1], CheckMode::Symbolic), oracle);
            assert_eq!(is_harmonic_with(&p, &[1], CheckMode::default()), oracle);
        }
        let p = RCCandidate { t: 1, j: 4, poly: Poly::var(5, 0).mul(&x.pow(4)) };
        assert!(!literal_laplacian_is_zero(&p));
    }

    #[test]
    fn rc_space_contains_known_members() {
        let target = psi(&elliptic_rc(6, 4, 6).unwrap(), 6).unwrap();
        let space = solve_rc_space(6, 0, &[4, 6]);
        assert!(!space.is_empty());
        assert!(in_span(&target, &space));
        for b in &space {
            assert!(is_homogeneous_with(b, 6, 0, CheckMode::Symbolic));
            assert!(is_harmonic(b, &[4, 6]));
        }
        let s2 = solve_rc_space(2, 1, &[1, 1, 1]);
        assert!(in_span(&m_op(&Poly::one(3), &[1, 1, 1]), &s2));
        assert!(!solve_rc_space(6, 2, &[4, 6]).is_empty());
        assert!(solve_rc_space(3, 0, &[4, 6]).is_empty());
    }

    fn in_span(p: &RCCandidate, basis: &[RCCandidate]) -> bool {
        let monos: Vec<Mono> = p
            .poly
            .terms()
            .keys()
            .chain(basis.iter().flat_map(|b| b.poly.terms().keys()))
            .cloned()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let cols: Vec<Vec<Q>> = basis.iter().map(|b| monos.iter().map(|m| b.poly.coeff(m)).collect()).collect();
        let rhs: Vec<Q> = monos.iter().map(|m| p.poly.coeff(m)).collect();
        crate::linalg::solve_columns(&cols, &rhs).is_ok()
    }
}
