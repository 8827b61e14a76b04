use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use siegel::arith::{q, Q};
use siegel::cli::{chi140_reference, TABLE_COLUMNS, TABLE_DET};
use siegel::classical::Igusa;
use siegel::expansion::{Expansion, VectorExpansion};
use siegel::index::{enumerate, Coset, Index};
use siegel::linalg::det;
use siegel::structure::*;
use siegel::vvforms::{bracket, scal_mul};

fn ws() -> &'static Workspace {
    static W: OnceLock<Workspace> = OnceLock::new();
    W.get_or_init(|| Workspace::new(12).unwrap())
}

#[test]
fn dimension_series() {
    assert_eq!(dim_vv(11), 1);
    assert_eq!(dim_vv(13), 1);
    assert_eq!(dim_vv(9), 0);
    assert_eq!(dim_vv(23), 9);
    assert_eq!(dim_vv(12), 0);
}

#[test]
fn table_columns_and_determinant() {
    let g = &ws().gens;
    for ((k, n), want) in table_indices().iter().zip(TABLE_COLUMNS) {
        let got = g.get(*k).at(n).coeffs;
        let want: Vec<Q> = want.iter().map(|x| q(*x)).collect();
        assert_eq!(got, want, "F{k}");
    }
    assert_eq!(det(&table_matrix(g)), q(TABLE_DET));
}

#[test]
fn generators_are_cusp_and_equivariant() {
    for k in WEIGHTS {
        let f = ws().gens.get(k);
        assert_eq!((f.j, f.k), (6, k));
        assert!(f.is_cusp(), "F{k}");
        assert!(f.check_equivariance(), "F{k}");
    }
}

#[test]
fn e6_and_theta8_normalizations() {
    let w = ws();
    assert_eq!(w.e6.at(&Index::from_nmr(1, 0, 0)).coeffs, siegel::rcpoly::HomogPoly::monomial(6, 0).coeffs);
    assert_eq!(w.e6.at(&Index::ZERO), siegel::rcpoly::HomogPoly::zero(6));
    assert_eq!(w.theta8.at(&Index::from_nmr(1, 1, 1)), siegel::rcpoly::HomogPoly::from_ints(&[0, 0, 1, 2, 1, 0, 0]));
    let p4e6 = scal_mul(w.classical.get(Igusa::Phi4), &w.e6).unwrap();
    assert_eq!(p4e6.at(&Index::from_nmr(1, 0, 0)).coeffs, siegel::rcpoly::HomogPoly::monomial(6, 0).coeffs);
}

/// The determinant sum over all 7-tuples with nonzero columns.
fn brute_chi140(gens: &GeneratorSet, n: &Index) -> Q {
    let forms: Vec<&VectorExpansion> = WEIGHTS.iter().map(|k| gens.get(*k)).collect();
    let sup: Vec<Vec<(Index, Vec<Q>)>> = forms
        .iter()
        .map(|f| {
            enumerate(Coset::Even, f.tmax)
                .into_iter()
                .filter(|m| !f.at(m).is_zero())
                .map(|m| (m, f.at(&m).coeffs))
                .collect()
        })
        .collect();
    fn go(i: usize, left: Index, cols: &mut Vec<Vec<Q>>, sup: &[Vec<(Index, Vec<Q>)>], acc: &mut Q) {
        if i == sup.len() {
            if left == Index::ZERO {
                let m: Vec<Vec<Q>> = (0..7).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
                *acc += det(&m);
            }
            return;
        }
        for (m, c) in &sup[i] {
            let rest = left.sub(m);
            if !rest.is_semi_positive() {
                continue;
            }
            cols.push(c.clone());
            go(i + 1, rest, cols, sup, acc);
            cols.pop();
        }
    }
    let mut acc = Q::from_integer(0.into());
    go(0, *n, &mut vec![], &sup, &mut acc);
    acc
}

#[test]
fn chi140_at_the_published_index() {
    let g = &ws().gens;
    let want = Q::from_integer(chi140_reference());
    let n = Index::from_nmr(12, 8, 4);
    let c = chi140_coefficient(g, &n).unwrap();
    assert_eq!(c, want);
    assert_eq!(brute_chi140(g, &n), want);
    assert_eq!(chi140_coefficient(g, &Index::from_nmr(12, 8, -4)).unwrap(), want);
}

#[test]
fn chi140_dp_matches_brute_force_nearby() {
    let g = &ws().gens;
    for n in [Index::from_nmr(10, 8, 4), Index::from_nmr(9, 10, 3), Index::from_nmr(10, 9, -5)] {
        assert_eq!(chi140_coefficient(g, &n).unwrap(), brute_chi140(g, &n), "{n}");
    }
}

#[test]
fn chi140_vanishes_below_trace_14() {
    let g = &ws().gens;
    for n in enumerate(Coset::Even, 27) {
        assert_eq!(chi140_coefficient(g, &n).unwrap(), q(0), "{n}");
    }
}

#[test]
fn chi140_reports_missing_precision() {
    let small = build_generators(8).unwrap();
    assert!(chi140_coefficient(&small, &Index::from_nmr(12, 8, 4)).is_err());
}

#[test]
fn precision_plan() {
    let plan = plan_precision(&Target::Chi140(Index::from_nmr(12, 8, 4)));
    assert_eq!(plan["F11"], 8);
    assert_eq!(plan["F23"], 12);
    assert!(plan.values().all(|t| *t <= 16));
    let h = plan_precision(&Target::Hecke { p: 2, probe: 8 });
    assert_eq!(h["input"], 16);
    assert_eq!(plan_precision(&Target::Table)["phi4"], 8);
    // every F_i needed to undoubled trace 8 under the generic cusp bound
    assert_eq!(chi140_precision(&[4; 7], &Index::from_nmr(12, 8, 4)), [16; 7]);
}

#[test]
fn module_is_free_up_to_weight_23() {
    for k in (11..=23).step_by(2) {
        let basis = module_basis(k, ws()).unwrap();
        assert_eq!(basis.len() as i64, dim_vv(k), "k = {k}");
        let forms: Vec<&VectorExpansion> = basis.iter().map(|(_, f)| f).collect();
        assert_eq!(coefficient_rank(&forms), forms.len(), "k = {k}");
    }
}

#[test]
fn express_examples() {
    let w = ws();
    let coords = express_in_basis(w.gens.get(15), w).unwrap();
    for (l, x) in &coords {
        assert_eq!(*x, if l.generator == 15 { q(1) } else { q(0) }, "{l}");
    }
    let g = scal_mul(w.classical.get(Igusa::Phi4), w.gens.get(11)).unwrap();
    let coords = express_in_basis(&g, w).unwrap();
    assert_eq!(coords.len(), 2);
    for (l, x) in coords {
        let want = if l.to_string() == "F11*phi4" { q(1) } else { q(0) };
        assert_eq!(x, want);
    }
    // dim M_(6,13) = 1 forces proportionality with F13
    let b = bracket(&w.e6, w.classical.get(Igusa::Phi6)).unwrap();
    let coords = express_in_basis(&b, w).unwrap();
    assert_eq!(coords.len(), 1);
    assert_ne!(coords[0].1, q(0));
    assert!(express_in_basis(w.gens.get(11), w).is_ok());
    assert!(express_in_basis(&w.e6, w).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]
    #[test]
    fn express_round_trips(seed in any::<u64>(), half in 7i64..=11) {
        let k = 2 * half + 1;
        let w = ws();
        let basis = module_basis(k, w).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let coords: Vec<Q> = basis.iter().map(|_| q(rng.gen_range(-20..=20))).collect();
        let forms: Vec<&VectorExpansion> = basis.iter().map(|(_, f)| f).collect();
        let g = Expansion::lincomb(&coords, &forms).unwrap();
        let got: Vec<Q> = express_in_basis(&g, w).unwrap().into_iter().map(|(_, x)| x).collect();
        prop_assert_eq!(got, coords);
    }
}
