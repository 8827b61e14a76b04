//! The generators of weight `(6, k)` with `k` odd and the freeness check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{common_denominator, q, qr, scaled_numerator, Q};
use crate::classical::{igusa_generator, Igusa};
use crate::error::{Error, Result};
use crate::expansion::{Expansion, ScalarExpansion, VectorExpansion};
use crate::hecke::{hecke_vector, matrix_on_basis};
use crate::index::{enumerate, is_reduced, Coset, Index};
use crate::linalg::solve_columns;
use crate::poly::Poly;
use crate::rcpoly::{m_op, solve_rc_space, HomogPoly, RCCandidate};
use crate::expansion::scal_mul;
use crate::vvforms::{bracket, rc_apply};

/// Coefficient of `X^ell` in
/// `(X^11 + X^13 + ... + X^23) / ((1-X^4)(1-X^6)(1-X^10)(1-X^12))`.
pub fn dim_vv(ell: i64) -> i64 {
    if ell < 0 || ell % 2 == 0 {
        return 0;
    }
    let n = ell as usize;
    let mut series = vec![0i64; n + 1];
    for e in (11..=23).step_by(2) {
        if e <= n {
            series[e] = 1;
        }
    }
    for d in [4usize, 6, 10, 12] {
        for i in d..=n {
            series[i] += series[i - d];
        }
    }
    series[n]
}

/// Scalar weights `4a + 6b + 10c + 12d = w` as exponent tuples.
pub fn classical_monomials(w: i64) -> Vec<[u32; 4]> {
    let mut out = vec![];
    if w < 0 {
        return out;
    }
    for a in 0..=w / 4 {
        for b in 0..=(w - 4 * a) / 6 {
            for c in 0..=(w - 4 * a - 6 * b) / 10 {
                let r = w - 4 * a - 6 * b - 10 * c;
                if r % 12 == 0 {
                    out.push([a as u32, b as u32, c as u32, (r / 12) as u32]);
                }
            }
        }
    }
    out
}

/// Generator weights.
pub const WEIGHTS: [i64; 7] = [11, 13, 15, 17, 19, 21, 23];

/// The elliptic polynomial `p_i` (in `r_1, r_2`) and type of the generators
/// built with `M_k`.
pub fn generator_polynomial(k: i64) -> Option<(Poly, [i64; 3])> {
    let (c, d, ty) = match k {
        15 => ([5, -14, 7], 160, [5, 4, 5]),
        17 => ([4, -8, 3], 192, [5, 6, 5]),
        19 => ([22, -24, 5], 1920, [4, 10, 4]),
        21 => ([22, -24, 5], 2880, [4, 10, 6]),
        23 => ([13, -14, 3], 16, [5, 12, 5]),
        _ => return None,
    };
    let mut p = Poly::zero(3);
    p.add_term(vec![2, 0, 0], qr(c[0], d));
    p.add_term(vec![1, 1, 0], qr(c[1], d));
    p.add_term(vec![0, 2, 0], qr(c[2], d));
    Some((p, ty))
}

/// `P_i = M_k p_i`.
pub fn generator_rc(k: i64) -> Option<(RCCandidate, [i64; 3])> {
    generator_polynomial(k).map(|(p, ty)| (m_op(&p, &ty), ty))
}

/// The classical inputs of `F_k` for `k >= 15`.
pub fn generator_inputs(k: i64) -> Option<[Igusa; 3]> {
    use Igusa::*;
    Some(match k {
        15 => [Chi5, Phi4, Chi5],
        17 => [Chi5, Phi6, Chi5],
        19 => [Phi4, Chi10, Phi4],
        21 => [Phi4, Chi10, Phi6],
        23 => [Chi5, Chi12, Chi5],
        _ => return None,
    })
}

/// Scalar applied to the raw construction so that the coefficient table
/// matches the published one.
pub fn normalization(k: i64) -> Q {
    match k {
        15 | 17 | 23 => q(-16),
        _ => q(-1),
    }
}

/// Classical generators, computed once per precision.
#[derive(Debug, Clone)]
pub struct Classical {
    pub tmax: i64,
    pub forms: BTreeMap<Igusa, ScalarExpansion>,
}

impl Classical {
    pub fn new(tmax: i64) -> Result<Self> {
        let forms = Igusa::ALL.iter().map(|g| Ok((*g, igusa_generator(*g, tmax)?))).collect::<Result<_>>()?;
        Ok(Classical { tmax, forms })
    }

    pub fn get(&self, g: Igusa) -> &ScalarExpansion {
        &self.forms[&g]
    }
}

fn phi46(tmax: i64) -> Result<(ScalarExpansion, ScalarExpansion)> {
    Ok((igusa_generator(Igusa::Phi4, tmax)?, igusa_generator(Igusa::Phi6, tmax)?))
}

fn rc_46(j: u32, ell: i64, tmax: i64) -> Result<VectorExpansion> {
    let space = solve_rc_space(j, ell, &[4, 6]);
    let p = space.first().ok_or_else(|| Error::Construction(format!("no RC polynomial of weight ({j}, {ell})")))?;
    let (a, b) = phi46(tmax)?;
    let f = rc_apply(p, &[&a, &b], &[4, 6])?;
    if f.is_zero() {
        return Err(Error::Construction("RC image vanishes".into()));
    }
    Ok(f)
}

/// A form in `M_(6,10)` from an RC polynomial of weight `(6,0)`.
pub fn build_f10(tmax: i64) -> Result<VectorExpansion> {
    rc_46(6, 0, tmax)
}

/// A cusp form in `S_(6,12)` from an RC polynomial of weight `(6,2)`.
pub fn build_f12(tmax: i64) -> Result<VectorExpansion> {
    rc_46(6, 2, tmax)
}

/// Coefficients at reduced indices up to `tmax`, flattened.
pub fn flat(f: &VectorExpansion, tmax: i64) -> Vec<Q> {
    enumerate(f.coset, tmax).into_iter().filter(is_reduced).flat_map(|n| f.at(&n).coeffs).collect()
}

/// Solves `sum_i x_i A_i = B` columnwise, asserting consistency.
pub fn solve(cols: Vec<Vec<Q>>, rhs: Vec<Q>) -> Result<Vec<Q>> {
    solve_columns(&cols, &rhs).map_err(|e| Error::Inconsistent(e.to_string()))
}

/// `E6` to doubled trace `tmax`, from `alpha F10 + beta T(2) F10 = phi4 E6`,
/// the eigenvalue `-24 (1 + 2^4)` and `a(1,0,0) = x^6`.
pub fn recover_e6(tmax: i64) -> Result<VectorExpansion> {
    let t = tmax.max(8);
    let f10 = build_f10(2 * t)?;
    let tf = hecke_vector(&f10, 2)?;
    let phi4 = igusa_generator(Igusa::Phi4, t)?;
    let e1 = f10.truncate(t).divide(&phi4)?;
    let e2 = tf.divide(&phi4)?;
    // (T(2) - lambda) E = 0
    let shift = -q(-24 * 17);
    let c1 = Expansion::lincomb(&[Q::one(), shift.clone()], &[&hecke_vector(&e1, 2)?, &e1.truncate(t / 2)])?;
    let c2 = Expansion::lincomb(&[Q::one(), shift], &[&hecke_vector(&e2, 2)?, &e2.truncate(t / 2)])?;
    // rows: eigen condition, then normalization at undoubled (1,0,0)
    let n100 = Index::from_nmr(1, 0, 0);
    let mut col1 = flat(&c1, t / 2);
    let mut col2 = flat(&c2, t / 2);
    let mut rhs = vec![Q::zero(); col1.len()];
    col1.extend(e1.at(&n100).coeffs);
    col2.extend(e2.at(&n100).coeffs);
    rhs.extend(HomogPoly::monomial(6, 0).coeffs);
    let x = solve(vec![col1, col2], rhs)?;
    let e6 = Expansion::lincomb(&x, &[&e1, &e2])?;
    Ok(e6.truncate(tmax))
}

/// `Theta8` to doubled trace `tmax`, from `alpha F12 + beta T(2) F12 =
/// phi4 Theta8` and `a(1,1,1) = x^4 y^2 + 2 x^3 y^3 + x^2 y^4`.
pub fn recover_theta8(tmax: i64) -> Result<VectorExpansion> {
    let t = tmax.max(4);
    let f12 = build_f12(2 * t)?;
    let tf = hecke_vector(&f12, 2)?;
    let phi4 = igusa_generator(Igusa::Phi4, t)?;
    let e1 = f12.truncate(t).divide(&phi4)?;
    let e2 = tf.divide(&phi4)?;
    let n111 = Index::from_nmr(1, 1, 1);
    let x = solve(vec![e1.at(&n111).coeffs, e2.at(&n111).coeffs], HomogPoly::from_ints(&[0, 0, 1, 2, 1, 0, 0]).coeffs)?;
    Ok(Expansion::lincomb(&x, &[&e1, &e2])?.truncate(tmax))
}

/// Generators `F_11, ..., F_23`, keyed by weight.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub forms: BTreeMap<i64, VectorExpansion>,
}

impl GeneratorSet {
    pub fn get(&self, k: i64) -> &VectorExpansion {
        &self.forms[&k]
    }

    pub fn tmax(&self) -> i64 {
        self.forms.values().map(|f| f.tmax).min().unwrap_or(0)
    }
}

pub fn build_f11(tmax: i64) -> Result<VectorExpansion> {
    let e6 = recover_e6(tmax)?;
    let phi4 = igusa_generator(Igusa::Phi4, tmax)?;
    Ok(bracket(&e6, &phi4)?.scale(&(normalization(11) / q(1152))))
}

pub fn build_f13(tmax: i64) -> Result<VectorExpansion> {
    let th = recover_theta8(tmax)?;
    let phi4 = igusa_generator(Igusa::Phi4, tmax)?;
    Ok(bracket(&th, &phi4)?.scale(&(normalization(13) / q(4))))
}

/// `F_k` for `k >= 15` from precomputed classical forms.
pub fn build_rc_generator(k: i64, cl: &Classical) -> Result<VectorExpansion> {
    let (p, ty) = generator_rc(k).ok_or_else(|| Error::Construction(format!("no generator of weight {k}")))?;
    let ins = generator_inputs(k).unwrap();
    let forms = [cl.get(ins[0]), cl.get(ins[1]), cl.get(ins[2])];
    Ok(rc_apply(&p, &forms, &ty)?.scale(&normalization(k)))
}

pub fn build_generators(tmax: i64) -> Result<GeneratorSet> {
    // chi5 enters twice with floor 2, so the classical inputs need less
    let cl = Classical::new(tmax)?;
    let mut forms = BTreeMap::new();
    forms.insert(11, build_f11(tmax)?);
    forms.insert(13, build_f13(tmax)?);
    for k in [15, 17, 19, 21, 23] {
        forms.insert(k, build_rc_generator(k, &cl)?.truncate(tmax));
    }
    Ok(GeneratorSet { forms })
}

/// The columns of the coefficient table for the determinant check.
pub fn table_indices() -> [(i64, Index); 7] {
    [
        (11, Index::from_nmr(1, 1, 0)),
        (13, Index::from_nmr(1, 1, 1)),
        (15, Index::from_nmr(2, 1, 0)),
        (17, Index::from_nmr(2, 1, 0)),
        (19, Index::from_nmr(2, 1, 1)),
        (21, Index::from_nmr(2, 1, 1)),
        (23, Index::from_nmr(2, 2, 1)),
    ]
}

pub fn bigint(x: &Q) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

/// The 7x7 matrix of the coefficient table, columns in generator order.
pub fn table_matrix(gens: &GeneratorSet) -> Vec<Vec<Q>> {
    let cols: Vec<Vec<Q>> = table_indices().iter().map(|(k, n)| gens.get(*k).at(n).coeffs).collect();
    (0..7).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

/// Lowest doubled trace carrying a nonzero coefficient.
fn support_floor(f: &VectorExpansion) -> Option<i64> {
    f.coeffs().iter().filter(|(_, c)| !c.is_zero()).map(|(n, _)| n.trace2()).min()
}

/// Doubled trace each generator must reach for `c(n)` to be exact, given
/// the support floors of the others.
pub fn chi140_precision(floors: &[i64; 7], n: &Index) -> [i64; 7] {
    let total: i64 = floors.iter().sum();
    let mut out = [0; 7];
    for (o, f) in out.iter_mut().zip(floors) {
        *o = n.trace2() - (total - f);
    }
    out
}

/// Floors guaranteed by the constructions: bracket outputs and the `rc`
/// forms are cusp forms, and the classical inputs vanish below their own floors.
pub const GENERATOR_FLOORS: [i64; 7] = [4, 4, 4, 4, 6, 6, 8];

/// Sign of `e_S ^ e_i`, where `S` is a bitmask, relative to `e_(S + i)`.
fn wedge_sign(mask: u8, i: usize) -> bool {
    (mask >> (i + 1)).count_ones() % 2 == 1
}

/// The coefficient `c(n)` of `F_11 ^ F_13 ^ ... ^ F_23`: the sum over
/// `n_1 + ... + n_7 = n` of `det(a_11(n_1), ..., a_23(n_7))`.
///
/// Runs a dynamic program over partial sums with values in the exterior
/// algebra, so each wedge is expanded once per partial sum.
pub fn chi140_coefficient(gens: &GeneratorSet, n: &Index) -> Result<Q> {
    if n.coset() != Some(Coset::Even) {
        return Ok(Q::zero());
    }
    let forms: Vec<&VectorExpansion> = WEIGHTS.iter().map(|k| gens.get(*k)).collect();
    let mut floors = GENERATOR_FLOORS;
    for (fl, f) in floors.iter_mut().zip(&forms) {
        if let Some(s) = support_floor(f) {
            *fl = (*fl).max(s.min(f.tmax + 2));
        }
    }
    let total: i64 = floors.iter().sum();
    if n.trace2() < total || !n.is_positive() {
        return Ok(Q::zero());
    }
    let need = chi140_precision(&floors, n);
    for (f, t) in forms.iter().zip(need) {
        if f.tmax < t {
            return Err(Error::InsufficientPrecision { need: t, have: f.tmax });
        }
    }
    // integral columns per form
    let mut dens = Vec::with_capacity(7);
    let mut supports: Vec<Vec<(Index, Vec<BigInt>)>> = Vec::with_capacity(7);
    for (f, t) in forms.iter().zip(need) {
        let mut sup = vec![];
        for m in enumerate(Coset::Even, t) {
            if !m.is_positive() || !n.sub(&m).is_semi_positive() {
                continue;
            }
            let c = f.at(&m);
            if !c.is_zero() {
                sup.push((m, c.coeffs));
            }
        }
        let den = common_denominator(sup.iter().flat_map(|(_, c)| c.iter()));
        dens.push(den.clone());
        supports.push(sup.into_iter().map(|(m, c)| (m, c.iter().map(|x| scaled_numerator(x, &den)).collect())).collect());
    }
    let mut layer: BTreeMap<Index, BTreeMap<u8, BigInt>> = BTreeMap::new();
    layer.insert(Index::ZERO, BTreeMap::from([(0u8, BigInt::one())]));
    for (i, sup) in supports.iter().enumerate() {
        let rest: i64 = floors[i + 1..].iter().sum();
        let last = i == 6;
        let steps: Vec<BTreeMap<Index, BTreeMap<u8, BigInt>>> = {
            use rayon::prelude::*;
            let entries: Vec<(&Index, &BTreeMap<u8, BigInt>)> = layer.iter().collect();
            entries
                .par_iter()
                .map(|(m, wedge)| {
                    let mut out: BTreeMap<Index, BTreeMap<u8, BigInt>> = BTreeMap::new();
                    for (m1, col) in sup {
                        let s = m.add(m1);
                        let left = n.sub(&s);
                        let ok = if last { left == Index::ZERO } else { left.is_positive() && left.trace2() >= rest };
                        if !ok {
                            continue;
                        }
                        let slot = out.entry(s).or_default();
                        for (mask, w) in wedge.iter() {
                            for (e, c) in col.iter().enumerate() {
                                if c.is_zero() || mask & (1 << e) != 0 {
                                    continue;
                                }
                                let v = w * c;
                                let acc = slot.entry(mask | (1 << e)).or_insert_with(BigInt::zero);
                                if wedge_sign(*mask, e) {
                                    *acc -= v;
                                } else {
                                    *acc += v;
                                }
                            }
                        }
                    }
                    out
                })
                .collect()
        };
        let mut next: BTreeMap<Index, BTreeMap<u8, BigInt>> = BTreeMap::new();
        for part in steps {
            for (s, w) in part {
                let slot = next.entry(s).or_default();
                for (mask, v) in w {
                    *slot.entry(mask).or_insert_with(BigInt::zero) += v;
                }
            }
        }
        next.retain(|_, w| {
            w.retain(|_, v| !v.is_zero());
            !w.is_empty()
        });
        layer = next;
    }
    let top = layer.get(n).and_then(|w| w.get(&0x7f)).cloned().unwrap_or_default();
    let den: BigInt = dens.iter().product();
    Ok(Q::new(top, den))
}

/// Every form the structure computations draw on, at one precision.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub tmax: i64,
    pub classical: Classical,
    pub gens: GeneratorSet,
    pub e6: VectorExpansion,
    pub theta8: VectorExpansion,
    pub f10: VectorExpansion,
    pub f12: VectorExpansion,
}

impl Workspace {
    pub fn new(tmax: i64) -> Result<Self> {
        let classical = Classical::new(tmax)?;
        let gens = build_generators(tmax)?;
        Ok(Workspace {
            tmax,
            e6: recover_e6(tmax)?,
            theta8: recover_theta8(tmax)?,
            f10: build_f10(tmax)?,
            f12: build_f12(tmax)?,
            classical,
            gens,
        })
    }

    /// `phi4^a phi6^b chi10^c chi12^d`.
    pub fn monomial(&self, e: &[u32; 4]) -> Result<ScalarExpansion> {
        let mut out = ScalarExpansion::one(self.tmax);
        for (g, n) in [Igusa::Phi4, Igusa::Phi6, Igusa::Chi10, Igusa::Chi12].iter().zip(e) {
            for _ in 0..*n {
                out = out.mul(self.classical.get(*g))?;
            }
        }
        Ok(out)
    }
}

pub fn monomial_label(e: &[u32; 4]) -> String {
    let names = ["phi4", "phi6", "chi10", "chi12"];
    let parts: Vec<String> = names
        .iter()
        .zip(e)
        .filter(|(_, n)| **n > 0)
        .map(|(s, n)| if *n == 1 { s.to_string() } else { format!("{s}^{n}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// One element `F_w * monomial` of the module basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLabel {
    pub generator: i64,
    pub monomial: [u32; 4],
}

impl std::fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.monomial == [0; 4] {
            write!(f, "F{}", self.generator)
        } else {
            write!(f, "F{}*{}", self.generator, monomial_label(&self.monomial))
        }
    }
}

/// Labels of `F_i * M_(k - i)` for odd `k`; their number is `dim_vv(k)` if
/// the module is free on the generators.
pub fn module_basis_labels(k: i64) -> Vec<BasisLabel> {
    WEIGHTS
        .iter()
        .filter(|w| **w <= k)
        .flat_map(|w| classical_monomials(k - w).into_iter().map(move |m| BasisLabel { generator: *w, monomial: m }))
        .collect()
}

pub fn module_basis(k: i64, ws: &Workspace) -> Result<Vec<(BasisLabel, VectorExpansion)>> {
    module_basis_labels(k)
        .into_iter()
        .map(|l| {
            let m = ws.monomial(&l.monomial)?;
            let f = scal_mul(&m, ws.gens.get(l.generator))?;
            Ok((l, f))
        })
        .collect()
}

/// Rank of the coefficient matrix of `forms` over reduced indices up to
/// their common precision.
pub fn coefficient_rank(forms: &[&VectorExpansion]) -> usize {
    let t = forms.iter().map(|f| f.tmax).min().unwrap_or(0);
    let cols: Vec<Vec<Q>> = forms.iter().map(|f| flat(f, t)).collect();
    forms.len() - crate::linalg::column_relations(&cols).len()
}

/// Coordinates of `g` in the monomial basis of its weight.
pub fn express_in_basis(g: &VectorExpansion, ws: &Workspace) -> Result<Vec<(BasisLabel, Q)>> {
    if g.j != 6 || g.k % 2 == 0 || g.k < 11 {
        return Err(Error::WeightMismatch(format!("({}, {}) is not (6, odd >= 11)", g.j, g.k)));
    }
    let basis = module_basis(g.k, ws)?;
    let t = basis.iter().map(|(_, f)| f.tmax).min().unwrap_or(0).min(g.tmax);
    let cols: Vec<Vec<Q>> = basis.iter().map(|(_, f)| flat(f, t)).collect();
    let x = solve_columns(&cols, &flat(g, t)).map_err(|e| match e {
        crate::linalg::LinalgError::Inconsistent => Error::NoRepresentation,
        _ => Error::InsufficientPrecision { need: t + 2, have: t },
    })?;
    Ok(basis.into_iter().map(|(l, _)| l).zip(x).collect())
}

/// What a computation needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// `c(n)` of the wedge form.
    Chi140(Index),
    /// `T(p)` read off at doubled trace `probe`.
    Hecke { p: i64, probe: i64 },
    /// The coefficient table columns.
    Table,
}

/// Doubled trace each input must reach, keyed by input name.
pub fn plan_precision(target: &Target) -> BTreeMap<String, i64> {
    let mut out = BTreeMap::new();
    match target {
        Target::Chi140(n) => {
            for (k, t) in WEIGHTS.iter().zip(chi140_precision(&GENERATOR_FLOORS, n)) {
                out.insert(format!("F{k}"), t);
            }
        }
        Target::Hecke { p, probe } => {
            out.insert("input".into(), p * probe);
        }
        Target::Table => {
            let t = table_indices().iter().map(|(_, n)| n.trace2()).max().unwrap();
            for g in Igusa::ALL {
                out.insert(g.name().to_string(), t);
            }
        }
    }
    out
}

/// A basis of `M_(6,k)` drawn from the workspace.
pub fn space_basis(k: i64, ws: &Workspace) -> Result<Vec<(String, VectorExpansion)>> {
    let phi = |g| ws.classical.get(g);
    Ok(match k {
        _ if k % 2 != 0 => module_basis(k, ws)?.into_iter().map(|(l, f)| (l.to_string(), f)).collect(),
        6 => vec![("E6".into(), ws.e6.clone())],
        8 => vec![("Theta8".into(), ws.theta8.clone())],
        10 => vec![("F10".into(), ws.f10.clone()), ("E6*phi4".into(), scal_mul(phi(Igusa::Phi4), &ws.e6)?)],
        12 => vec![
            ("F12".into(), ws.f12.clone()),
            ("Theta8*phi4".into(), scal_mul(phi(Igusa::Phi4), &ws.theta8)?),
            ("E6*phi6".into(), scal_mul(phi(Igusa::Phi6), &ws.e6)?),
        ],
        _ => return Err(Error::WeightMismatch(format!("no basis for (6, {k})"))),
    })
}

/// Combinations of `forms` with vanishing singular coefficients.
pub fn cusp_subspace(forms: &[VectorExpansion]) -> Result<Vec<VectorExpansion>> {
    let t = forms.iter().map(|f| f.tmax).min().unwrap_or(0);
    let singular: Vec<Index> = enumerate(Coset::Even, t).into_iter().filter(|n| is_reduced(n) && n.is_singular()).collect();
    let cols: Vec<Vec<Q>> = forms.iter().map(|f| singular.iter().flat_map(|n| f.at(n).coeffs).collect()).collect();
    let refs: Vec<&VectorExpansion> = forms.iter().collect();
    crate::linalg::column_relations(&cols).into_iter().map(|c| Expansion::lincomb(&c, &refs)).collect()
}

/// Characteristic polynomials of `T(p)` on `M_(6,k)` and on its cusp part.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeRow {
    pub p: u64,
    pub k: i64,
    pub full: Vec<BigInt>,
    pub cusp: Vec<BigInt>,
}

impl HeckeRow {
    /// The factor of `full` coming from the non-cusp part.
    pub fn eisenstein(&self) -> Vec<BigInt> {
        let (quo, rem) = poly_divmod(&self.full, &self.cusp);
        debug_assert!(rem.iter().all(|c| c.is_zero()));
        crate::hecke::primitive(&quo)
    }
}

fn poly_divmod(a: &[BigInt], b: &[BigInt]) -> (Vec<Q>, Vec<Q>) {
    let mut r: Vec<Q> = a.iter().map(crate::arith::qi).collect();
    let b: Vec<Q> = b.iter().map(crate::arith::qi).collect();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![Q::zero()], r);
    }
    let mut quo = vec![Q::zero(); r.len() - db];
    for i in (0..quo.len()).rev() {
        let c = &r[i + db] / &b[db];
        for (jj, bc) in b.iter().enumerate() {
            r[i + jj] -= &c * bc;
        }
        quo[i] = c;
    }
    r.truncate(db.max(1));
    (quo, r)
}

pub fn hecke_row(p: u64, k: i64, ws: &Workspace) -> Result<HeckeRow> {
    let basis = space_basis(k, ws)?;
    let forms: Vec<VectorExpansion> = basis.iter().map(|(_, f)| f.clone()).collect();
    let labels: Vec<String> = basis.iter().map(|(l, _)| l.clone()).collect();
    let full = matrix_on_basis(&forms, &labels, p)?;
    let cusp_forms = cusp_subspace(&forms)?;
    let cusp = if cusp_forms.is_empty() {
        vec![BigInt::one()]
    } else {
        let cl: Vec<String> = (0..cusp_forms.len()).map(|i| format!("S{i}")).collect();
        matrix_on_basis(&cusp_forms, &cl, p)?.charpoly()
    };
    Ok(HeckeRow { p, k, full: full.charpoly(), cusp })
}
