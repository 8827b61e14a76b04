//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use siegel::arith::{q, Q};
use siegel::classical::theta::{theta_chi5, theta_generator};
use siegel::classical::{igusa_generator, mul, Igusa};
use siegel::cli::{chi140_reference, eisenstein_reference, hecke_reference, high_first, parse_cache, render_cache, TABLE_COLUMNS, TABLE_DET};
use siegel::expansion::{Expansion, VectorExpansion};
use siegel::factor::factorize;
use siegel::hecke::{discriminant, eigenvalue_of};
use siegel::index::{enumerate, partitions, Coset, Index, SupportConstraint};
use siegel::linalg::det;
use siegel::rcpoly::{elliptic_rc, is_harmonic, is_homogeneous, m_op, HomogPoly};
use siegel::structure::*;
use siegel::vvforms::{bracket, rc_apply};

type Check = Box<dyn FnOnce() -> Result<(), String>>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn lift3(p: &siegel::poly::Poly) -> siegel::poly::Poly {
    let mut out = siegel::poly::Poly::zero(3);
    for (m, c) in p.terms() {
        out.add_term(vec![m[0], m[1], 0], c.clone());
    }
    out
}

fn rc_suite() -> Result<(), String> {
    for k in [15, 17, 19, 21, 23] {
        let (p, ty) = generator_polynomial(k).unwrap();
        let m = m_op(&p, &ty);
        ensure(is_homogeneous(&m, 6, 1), format!("M p{k} not homogeneous"))?;
        ensure(is_harmonic(&m, &ty), format!("M p{k} not harmonic"))?;
        let ell = lift3(&elliptic_rc(4, ty[0] + 1, ty[1] + 1).map_err(e)?);
        ensure(p.ratio_to(&ell).is_some_and(|r| r != q(0)), format!("p{k} not proportional"))?;
    }
    Ok(())
}

fn vanishing_anchor() -> Result<(), String> {
    let p = lift3(&elliptic_rc(4, 5, 5).map_err(e)?);
    let phi4 = igusa_generator(Igusa::Phi4, 16).map_err(e)?;
    let out = rc_apply(&m_op(&p, &[4, 4, 4]), &[&phi4, &phi4, &phi4], &[4, 4, 4]).map_err(e)?;
    ensure(out.tmax >= 16, "precision too low")?;
    ensure(out.is_zero(), "nonzero output")
}

fn table3(ws: &Workspace) -> Result<(), String> {
    for ((k, n), want) in table_indices().iter().zip(TABLE_COLUMNS) {
        let want: Vec<Q> = want.iter().map(|x| q(*x)).collect();
        ensure(ws.gens.get(*k).at(n).coeffs == want, format!("F{k} column"))?;
    }
    ensure(det(&table_matrix(&ws.gens)) == q(TABLE_DET), "determinant")
}

fn chi140(ws: &Workspace) -> Result<(), String> {
    let want = Q::from_integer(chi140_reference());
    let a = chi140_coefficient(&ws.gens, &Index::from_nmr(12, 8, 4)).map_err(e)?;
    let b = chi140_coefficient(&ws.gens, &Index::from_nmr(12, 8, -4)).map_err(e)?;
    ensure(a == want && b == want, format!("c(12,8,4) = {a}"))?;
    for n in enumerate(Coset::Even, 27) {
        ensure(chi140_coefficient(&ws.gens, &n).map_err(e)? == q(0), format!("c{n} != 0"))?;
    }
    Ok(())
}

fn hecke(w2: &Workspace, w3: &Workspace) -> Result<(), String> {
    for (p, ws, ks) in [(2, w2, &[8, 10, 11, 12, 13, 15, 17, 19][..]), (3, w3, &[8, 10, 11, 12, 13, 15, 17][..])] {
        for &k in ks {
            let r = hecke_row(p, k, ws).map_err(e)?;
            ensure(high_first(&r.cusp) == hecke_reference(p, k).unwrap(), format!("T({p}) k={k}"))?;
        }
    }
    for k in [6, 10, 12] {
        let l = eisenstein_reference(k).unwrap();
        let r = hecke_row(2, k, w2).map_err(e)?;
        ensure(r.eisenstein() == vec![BigInt::from(-l), BigInt::from(1)], format!("Eisenstein k={k}"))?;
    }
    let d = |p, k, ws| -> Result<String, String> {
        Ok(factorize(&discriminant(&hecke_row(p, k, ws).map_err(e)?.cusp)).to_string())
    };
    ensure(d(2, 12, w2)? == "2^10 * 3^2 * 7^2 * 601", "disc k=12")?;
    ensure(d(3, 15, w3)? == "2^12 * 3^8 * 29 * 53^2 * 83 * 103", "disc k=15")
}

fn classical() -> Result<(), String> {
    let t = 10;
    let c5 = igusa_generator(Igusa::Chi5, t).map_err(e)?;
    let c10 = igusa_generator(Igusa::Chi10, t).map_err(e)?;
    ensure(mul(&c5, &c5).map_err(e)?.agrees_with(&c10, t), "chi5^2")?;
    for g in [Igusa::Phi4, Igusa::Phi6, Igusa::Chi10, Igusa::Chi12] {
        let f = igusa_generator(g, t).map_err(e)?;
        ensure(theta_generator(g.weight(), 6).map_err(e)?.agrees_with(&f, 6), format!("{g} routes"))?;
        let lead = if g.weight() < 10 { Index::ZERO } else { Index::from_nmr(1, 1, 1) };
        ensure(f.at(&lead) == q(1), format!("{g} normalization"))?;
        ensure(f.check_equivariance(), format!("{g} equivariance"))?;
    }
    ensure(theta_chi5(6).map_err(e)?.agrees_with(&c5, 6), "chi5 routes")?;
    ensure(c5.at(&Index::new(1, 1, 1)) == q(1) && c5.check_equivariance(), "chi5")
}

fn structural(ws: &Workspace) -> Result<(), String> {
    let phi = |g| ws.classical.get(g);
    for f in [
        bracket(&ws.e6, phi(Igusa::Phi4)).map_err(e)?,
        bracket(&ws.theta8, phi(Igusa::Phi4)).map_err(e)?,
        bracket(&ws.e6, phi(Igusa::Phi6)).map_err(e)?,
    ] {
        ensure(f.is_cusp() && f.check_equivariance(), "bracket output")?;
    }
    for k in WEIGHTS {
        let f = ws.gens.get(k);
        ensure(f.is_cusp() && f.check_equivariance(), format!("F{k}"))?;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(140);
    for k in (11..=23).step_by(2) {
        let basis = module_basis(k, ws).map_err(e)?;
        let forms: Vec<&VectorExpansion> = basis.iter().map(|(_, f)| f).collect();
        ensure(forms.len() as i64 == dim_vv(k), format!("count k={k}"))?;
        ensure(coefficient_rank(&forms) == forms.len(), format!("rank k={k}"))?;
        let coords: Vec<Q> = forms.iter().map(|_| q(rng.gen_range(-50..=50))).collect();
        let g = Expansion::lincomb(&coords, &forms).map_err(e)?;
        let back: Vec<Q> = express_in_basis(&g, ws).map_err(e)?.into_iter().map(|(_, x)| x).collect();
        ensure(back == coords, format!("round trip k={k}"))?;
    }
    Ok(())
}

fn recovery(ws: &Workspace) -> Result<(), String> {
    ensure(ws.e6.at(&Index::from_nmr(1, 0, 0)) == HomogPoly::monomial(6, 0), "E6 normalization")?;
    ensure(eigenvalue_of(&ws.e6, 2).map_err(e)? == q(-408), "E6 eigenvalue")?;
    ensure(ws.theta8.at(&Index::from_nmr(1, 1, 1)) == HomogPoly::from_ints(&[0, 0, 1, 2, 1, 0, 0]), "Theta8 normalization")?;
    ensure(eigenvalue_of(&ws.theta8, 2).map_err(e)? == q(0), "Theta8 eigenvalue")?;
    // both recoveries solve overdetermined systems and error when inconsistent
    recover_e6(10).map_err(e)?;
    recover_theta8(12).map_err(e)?;
    Ok(())
}

fn plumbing(ws: &Workspace) -> Result<(), String> {
    for k in WEIGHTS {
        let f = ws.gens.get(k);
        let text = render_cache(&format!("F{k}"), f);
        let (name, g) = parse_cache(&text).map_err(e)?;
        ensure(name == format!("F{k}") && &g == f && render_cache(&name, &g) == text, "cache round trip")?;
    }
    let again = Workspace::new(10).map_err(e)?;
    for k in WEIGHTS {
        ensure(again.gens.get(k).agrees_with(ws.gens.get(k), 10), "determinism")?;
    }
    let any = SupportConstraint::any(Coset::Even);
    for n in enumerate(Coset::Even, 6) {
        for t in 1..=3 {
            let cs = vec![any; t];
            let got: BTreeSet<Vec<Index>> = partitions(&n, &cs).collect();
            let mut pool: Vec<Vec<Index>> = vec![vec![]];
            for _ in 0..t {
                pool = pool
                    .into_iter()
                    .flat_map(|v| enumerate(Coset::Even, n.trace2()).into_iter().map(move |x| [v.clone(), vec![x]].concat()))
                    .collect();
            }
            let want: BTreeSet<Vec<Index>> = pool.into_iter().filter(|v| v.iter().fold(Index::ZERO, |a, b| a.add(b)) == n).collect();
            ensure(got == want, format!("partitions at {n}"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let w2 = Box::leak(Box::new(Workspace::new(12).expect("workspace")));
    let w3 = Box::leak(Box::new(Workspace::new(18).expect("workspace")));
    let (w2, w3): (&'static Workspace, &'static Workspace) = (w2, w3);
    let checks: Vec<(&str, Check)> = vec![
        ("RC-polynomial suite", Box::new(rc_suite)),
        ("vanishing anchor", Box::new(vanishing_anchor)),
        ("generator coefficient table", Box::new(move || table3(w2))),
        ("chi140 coefficient", Box::new(move || chi140(w2))),
        ("Hecke tables", Box::new(move || hecke(w2, w3))),
        ("classical layer", Box::new(classical)),
        ("structural properties", Box::new(move || structural(w2))),
        ("E6 and Theta8 recovery", Box::new(move || recovery(w2))),
        ("plumbing", Box::new(move || plumbing(w2))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.into_iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("criterion {}: PASS {name} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {msg} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of 9 criteria pass in {:.1}s", 9 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
