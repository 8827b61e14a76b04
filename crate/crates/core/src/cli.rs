//! Command implementations, configuration and the on-disk expansion cache.
//!
//! Cache files are plain text:
//!
//! ```text
//! siegel-cache 1
//! name chi5
//! weight 0 5
//! coset odd
//! tmax 6
//! floor 2
//! sha256 <hex digest of the body>
//! 1 1 1 1
//! 1 1 -1 -1
//! ...
//! ```
//!
//! Body lines are `nu1 nu2 rho` followed by `j + 1` rationals, sorted by index.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::arith::{fmt_q, q, Q};
use crate::classical::{igusa_generator, Igusa};
use crate::error::{Error, Result};
use crate::expansion::{Expansion, ScalarExpansion, VectorExpansion};
use crate::factor::factorize;
use crate::hecke::{discriminant, format_poly};
use crate::index::{Coset, Index};
use crate::linalg::det;
use crate::rcpoly::{is_harmonic, is_homogeneous, r_var, solve_rc_space, RCCandidate};
use crate::structure::{
    chi140_coefficient, dim_vv, express_in_basis, hecke_row, module_basis, plan_precision, table_indices, table_matrix,
    Target, Workspace, WEIGHTS,
};

const MAGIC: &str = "siegel-cache 1";

pub const ENV_CACHE: &str = "SIEGEL_CACHE_DIR";
pub const ENV_THREADS: &str = "SIEGEL_THREADS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub cache_dir: Option<PathBuf>,
    pub threads: usize,
    pub seed: u64,
    pub tmax: Option<i64>,
}

impl Default for Config {
    fn default() -> Self {
        Config { cache_dir: None, threads: 1, seed: 0, tmax: None }
    }
}

impl Config {
    /// Sizes the global worker pool; later calls keep the first size.
    pub fn install(&self) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(self.threads.max(1)).build_global();
    }
}

/// What a command printed and whether its checks passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    fn new() -> Self {
        Outcome { text: String::new(), pass: true }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn check(&mut self, label: &str, ok: bool) {
        self.pass &= ok;
        self.line(format!("{} {label}", if ok { "PASS" } else { "FAIL" }));
    }
}

// ---- cache ----

fn body_text<C: crate::expansion::Coeff>(f: &Expansion<C>, payload: impl Fn(&C) -> Vec<Q>) -> String {
    let mut body = String::new();
    for (n, c) in f.coeffs() {
        let vals: Vec<String> = payload(c).iter().map(fmt_q).collect();
        let _ = writeln!(body, "{} {} {} {}", n.nu1, n.nu2, n.rho, vals.join(" "));
    }
    body
}

fn digest(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Serializes `f` under `name`.
pub fn render_cache(name: &str, f: &VectorExpansion) -> String {
    let body = body_text(f, |c| c.coeffs.clone());
    format!(
        "{MAGIC}\nname {name}\nweight {} {}\ncoset {}\ntmax {}\nfloor {}\nsha256 {}\n{body}",
        f.j,
        f.k,
        f.coset.name(),
        f.tmax,
        f.floor,
        digest(&body)
    )
}

fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::Cache(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (BigInt::from_str(a).map_err(|_| bad())?, BigInt::from_str(b).map_err(|_| bad())?);
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Parses a cache file, checking the digest and payload widths.
pub fn parse_cache(text: &str) -> Result<(String, VectorExpansion)> {
    let mut lines = text.split_inclusive('\n');
    let mut header = BTreeMap::new();
    let first = lines.next().map(str::trim_end);
    if first != Some(MAGIC) {
        return Err(Error::Cache("missing header".into()));
    }
    for key in ["name", "weight", "coset", "tmax", "floor", "sha256"] {
        let line = lines.next().ok_or_else(|| Error::Cache(format!("missing {key}")))?.trim_end();
        let rest = line.strip_prefix(key).and_then(|r| r.strip_prefix(' ')).ok_or_else(|| Error::Cache(format!("expected {key}")))?;
        header.insert(key, rest.to_string());
    }
    let body: String = lines.collect();
    if digest(&body) != header["sha256"] {
        return Err(Error::Cache("checksum mismatch".into()));
    }
    let int = |s: &str| s.parse::<i64>().map_err(|_| Error::Cache(format!("bad integer {s:?}")));
    let w: Vec<&str> = header["weight"].split(' ').collect();
    if w.len() != 2 {
        return Err(Error::Cache("bad weight".into()));
    }
    let (j, k) = (int(w[0])? as usize, int(w[1])?);
    let coset = Coset::parse(&header["coset"]).ok_or_else(|| Error::Cache("bad coset".into()))?;
    let (tmax, floor) = (int(&header["tmax"])?, int(&header["floor"])?);
    let mut coeffs = BTreeMap::new();
    for line in body.lines() {
        let toks: Vec<&str> = line.split(' ').collect();
        if toks.len() != 3 + j + 1 {
            return Err(Error::Cache(format!("payload width in {line:?}")));
        }
        let n = Index::new(int(toks[0])?, int(toks[1])?, int(toks[2])?);
        let vals = toks[3..].iter().map(|t| parse_q(t)).collect::<Result<Vec<_>>>()?;
        coeffs.insert(n, crate::rcpoly::HomogPoly::from_coeffs(vals));
    }
    Ok((header["name"].clone(), Expansion::from_map(j, k, coset, tmax, floor, coeffs)))
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    fs::write(tmp.path(), contents)?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

pub fn store(path: &Path, name: &str, f: &VectorExpansion) -> Result<()> {
    write_atomic(path, &render_cache(name, f))
}

pub fn load(path: &Path) -> Result<(String, VectorExpansion)> {
    parse_cache(&fs::read_to_string(path)?)
}

pub fn cache_path(dir: &Path, name: &str, tmax: i64) -> PathBuf {
    dir.join(format!("{name}.t{tmax}.txt"))
}

/// A classical generator, read from the cache when a file of the same
/// precision exists.
pub fn cached_classical(g: Igusa, tmax: i64, cfg: &Config) -> Result<ScalarExpansion> {
    if let Some(dir) = &cfg.cache_dir {
        let path = cache_path(dir, g.name(), tmax);
        if path.exists() {
            let (_, f) = load(&path)?;
            return Ok(f.to_scalar());
        }
        let f = igusa_generator(g, tmax)?;
        store(&path, g.name(), &f.to_vector())?;
        return Ok(f);
    }
    igusa_generator(g, tmax)
}

// ---- reference values ----

/// Published coefficient columns, in generator order.
pub const TABLE_COLUMNS: [[i64; 7]; 7] = [
    [0, -20, 0, 0, 0, 20, 0],
    [0, -2, -5, 0, 5, 2, 0],
    [0, 312, 0, 180, 0, -102, 0],
    [0, 0, 0, -300, 0, 354, 0],
    [1, 14, 36, 24, 0, 0, 0],
    [-5, -10, -6, -24, -30, -12, 0],
    [3, -37, -50, 0, 50, 37, -3],
];

/// `2^14 3^5 5^3 11`.
pub const TABLE_DET: i64 = 5_474_304_000;

/// `c(12,8,4) = -2^18 3^7 5^2`.
pub fn chi140_reference() -> BigInt {
    -BigInt::from(2).pow(18) * BigInt::from(3).pow(7) * BigInt::from(25)
}

/// Characteristic polynomials of `T(p)` on cusp forms of weight `(6,k)`,
/// leading coefficient first.
pub fn hecke_reference(p: u64, k: i64) -> Option<Vec<&'static str>> {
    let v: &[&str] = match (p, k) {
        (2, 8) => &["1", "0"],
        (2, 10) => &["1", "-1680"],
        (2, 11) => &["1", "11616"],
        (2, 12) => &["1", "-22368", "57231360"],
        (2, 13) => &["1", "24000"],
        (2, 15) => &["1", "68256", "593510400"],
        (2, 17) => &["1", "363264", "136028160", "-4603543289856000"],
        (2, 19) => &["1", "1202400", "-1311202861056", "-179858880190218240", "-1566691549034368204800"],
        (3, 8) => &["1", "27000"],
        (3, 10) => &["1", "6120"],
        (3, 11) => &["1", "106488"],
        (3, 12) => &["1", "335664", "-14832719455680"],
        (3, 13) => &["1", "8505000"],
        (3, 15) => &["1", "228022128", "8319716602228800"],
        (3, 17) => &["1", "1086146712", "-341960280255362880", "-188775313801934579676864000"],
        _ => return None,
    };
    Some(v.to_vec())
}

/// Eigenvalue of `T(2)` on the non-cusp part.
pub fn eisenstein_reference(k: i64) -> Option<i64> {
    match k {
        6 => Some(-24 * (1 + 16)),
        10 => Some(216 * (1 + 256)),
        12 => Some(-528 * (1 + 1024)),
        _ => None,
    }
}

pub fn high_first(c: &[BigInt]) -> Vec<String> {
    c.iter().rev().map(|x| x.to_string()).collect()
}

/// Doubled trace needed for `T(p)` matrices on the spaces up to weight 19.
pub fn hecke_tmax(p: u64) -> i64 {
    match p {
        2 => 12,
        _ => 6 * p as i64,
    }
}

// ---- commands ----

pub fn cmd_classical(form: &str, tmax: i64, cfg: &Config) -> Result<Outcome> {
    let g = Igusa::from_str(form)?;
    let f = cached_classical(g, tmax, cfg)?;
    let mut out = Outcome::new();
    out.line(format!("{} weight {} coset {} tmax {}", g.name(), f.k, f.coset.name(), f.tmax));
    let lead = match g {
        Igusa::Phi4 | Igusa::Phi6 => Index::ZERO,
        Igusa::Chi10 | Igusa::Chi12 => Index::from_nmr(1, 1, 1),
        Igusa::Chi5 => Index::new(1, 1, 1),
    };
    out.line(format!("a{lead} = {}", fmt_q(&f.at(&lead))));
    out.check("normalized", f.at(&lead) == Q::one());
    out.check("equivariant", f.check_equivariance());
    if g == Igusa::Chi5 && tmax >= 2 {
        let chi10 = cached_classical(Igusa::Chi10, tmax, cfg)?;
        let sq = f.mul(&f)?;
        out.check("chi5^2 = chi10", sq.agrees_with(&chi10, sq.tmax.min(tmax)));
    }
    Ok(out)
}

pub fn cmd_generators(tmax: i64, cfg: &Config) -> Result<Outcome> {
    let ws = Workspace::new(tmax.max(10))?;
    let mut out = Outcome::new();
    out.line("k   index     column");
    for ((k, n), want) in table_indices().iter().zip(TABLE_COLUMNS) {
        let col = ws.gens.get(*k).at(n).coeffs;
        let s: Vec<String> = col.iter().map(fmt_q).collect();
        out.line(format!("{k:<3} {:<9} ({})", n.to_string(), s.join(",")));
        let ok = col.iter().zip(want).all(|(a, b)| *a == q(b));
        out.check(&format!("F{k} column"), ok);
    }
    let d = det(&table_matrix(&ws.gens));
    out.line(format!("det = {}", fmt_q(&d)));
    out.check("determinant", d == q(TABLE_DET));
    for k in WEIGHTS {
        let f = ws.gens.get(k);
        out.check(&format!("F{k} cusp and equivariant"), f.is_cusp() && f.check_equivariance());
    }
    if let Some(dir) = &cfg.cache_dir {
        for k in WEIGHTS {
            let name = format!("F{k}");
            store(&cache_path(dir, &name, ws.tmax), &name, ws.gens.get(k))?;
        }
    }
    Ok(out)
}

pub fn cmd_hecke(p: u64, j: u32, k: i64, charpoly: bool, tmax: Option<i64>) -> Result<Outcome> {
    if j != 6 {
        return Err(Error::WeightMismatch(format!("only j = 6 is supported, got {j}")));
    }
    let ws = Workspace::new(tmax.unwrap_or(hecke_tmax(p)))?;
    let row = hecke_row(p, k, &ws)?;
    let mut out = Outcome::new();
    let (cusp, eis) = (format_poly(&row.cusp), format_poly(&row.eisenstein()));
    if charpoly {
        out.line(cusp.clone());
    } else {
        out.line(format!("T({p}) on M_(6,{k}): {}", format_poly(&row.full)));
        out.line(format!("cusp part: {cusp}"));
        out.line(format!("non-cusp part: {eis}"));
        if row.cusp.len() > 2 {
            out.line(format!("discriminant: {}", factorize(&discriminant(&row.cusp))));
        }
    }
    if let Some(want) = hecke_reference(p, k) {
        out.check("cusp charpoly", high_first(&row.cusp) == want);
    }
    if let (2, Some(l)) = (p, eisenstein_reference(k)) {
        out.check("non-cusp eigenvalue", row.eisenstein() == vec![BigInt::from(-l), BigInt::one()]);
    }
    Ok(out)
}

/// `dims odd 23` lists `dim M_(6,k)` for odd `k` up to 23.
pub fn cmd_dims(parity: &str, kmax: i64) -> Result<Outcome> {
    let start = match parity {
        "odd" => 1,
        "even" => 0,
        _ => return Err(Error::WeightMismatch(format!("parity must be odd or even, got {parity}"))),
    };
    let mut out = Outcome::new();
    if start == 0 {
        out.line("even weights are not covered by the series");
        out.pass = false;
        return Ok(out);
    }
    let parts: Vec<String> = (start..=kmax).step_by(2).filter(|k| dim_vv(*k) > 0).map(|k| format!("{k}:{}", dim_vv(k))).collect();
    out.line(parts.join(" "));
    Ok(out)
}

/// Computes `c(n)`; at `(12,8,4)` compares with the published value, and
/// round-trips a random module element through the generator basis.
pub fn cmd_verify(n: [i64; 3], cfg: &Config) -> Result<Outcome> {
    let idx = Index::from_nmr(n[0], n[1], n[2]);
    let plan = plan_precision(&Target::Chi140(idx));
    let need = plan.values().copied().max().unwrap_or(0).max(10);
    let ws = Workspace::new(cfg.tmax.unwrap_or(need).max(need))?;
    let mut out = Outcome::new();
    let c = chi140_coefficient(&ws.gens, &idx)?;
    let shown = if c.is_integer() && !c.is_zero() { factorize(&c.to_integer()).to_string() } else { fmt_q(&c) };
    out.line(format!("c({},{},{}) = {shown}", n[0], n[1], n[2]));
    if n[0] == 12 && n[1] == 8 && n[2].abs() == 4 {
        out.check("c(12,8,4) = -2^18 3^7 5^2", c == Q::from_integer(chi140_reference()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let k = 2 * rng.gen_range(7..=11) + 1;
    let basis = module_basis(k, &ws)?;
    let coords: Vec<Q> = basis.iter().map(|_| q(rng.gen_range(-9..=9))).collect();
    let forms: Vec<&VectorExpansion> = basis.iter().map(|(_, f)| f).collect();
    let g = Expansion::lincomb(&coords, &forms)?;
    let got: Vec<Q> = express_in_basis(&g, &ws)?.into_iter().map(|(_, x)| x).collect();
    out.check(&format!("basis round-trip at weight {k}"), got == coords);
    Ok(out)
}

/// Renders an RC polynomial in the entries `a_s, b_s, c_s` of `r_s` and `x, y`.
pub fn render_rc(p: &RCCandidate) -> String {
    let t = p.t;
    let mut names = vec![String::new(); 3 * t + 2];
    for s in 0..t {
        for (e, c) in ["a", "b", "c"].iter().enumerate() {
            names[r_var(s, e)] = format!("{c}{}", s + 1);
        }
    }
    names[3 * t] = "x".into();
    names[3 * t + 1] = "y".into();
    let terms: Vec<String> = p
        .poly
        .terms()
        .iter()
        .map(|(m, c)| {
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { names[i].clone() } else { format!("{}^{e}", names[i]) })
                .collect();
            format!("({})*{}", fmt_q(c), vars.join("*"))
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn cmd_rc_space(j: u32, ell: i64, types: &[i64]) -> Result<Outcome> {
    let space = solve_rc_space(j, ell, types);
    let mut out = Outcome::new();
    out.line(format!("dim = {}", space.len()));
    for (i, p) in space.iter().enumerate() {
        out.line(format!("P{i} = {}", render_rc(p)));
        out.check(&format!("P{i} homogeneous"), is_homogeneous(p, j, ell));
        out.check(&format!("P{i} harmonic"), is_harmonic(p, types));
    }
    Ok(out)
}
