//! Exact linear algebra over the rationals.
//!
//! Systems in this crate are tall and thin (many Fourier coordinates, few
//! unknowns) or sparse (constraint systems for RC-polynomials), so both a
//! dense streaming solver and a sparse echelon builder live here.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("underdetermined linear system (rank {rank} < {unknowns})")]
    Underdetermined { rank: usize, unknowns: usize },
}

/// Row-reduced echelon form built one sparse row at a time.
///
/// Rows are kept fully reduced against each other, so the nullspace can be
/// read off directly once all constraints have been inserted.
#[derive(Debug, Clone, Default)]
pub struct SparseEchelon {
    ncols: usize,
    // pivot column -> row (pivot entry normalized to 1)
    rows: BTreeMap<usize, BTreeMap<usize, Q>>,
}

impl SparseEchelon {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon { ncols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Inserts a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, mut row: BTreeMap<usize, Q>) -> bool {
        row.retain(|_, v| !v.is_zero());
        // reduce against existing pivots
        loop {
            let hit = row
                .iter()
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, factor)) = hit else { break };
            let prow = &self.rows[&col];
            for (c, v) in prow {
                let e = row.entry(*c).or_insert_with(Q::zero);
                *e -= &factor * v;
                if e.is_zero() {
                    row.remove(c);
                }
            }
        }
        let Some((&pc, pv)) = row.iter().next() else { return false };
        let inv = Q::one() / pv.clone();
        for v in row.values_mut() {
            *v *= &inv;
        }
        // eliminate the new pivot column from existing rows
        for prow in self.rows.values_mut() {
            if let Some(f) = prow.get(&pc).cloned() {
                for (c, v) in &row {
                    let e = prow.entry(*c).or_insert_with(Q::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        prow.remove(c);
                    }
                }
            }
        }
        self.rows.insert(pc, row);
        true
    }

    /// Basis of the nullspace, one vector per free column (free entry = 1).
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if self.rows.contains_key(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.ncols];
            v[free] = Q::one();
            for (pc, row) in &self.rows {
                if let Some(x) = row.get(&free) {
                    v[*pc] = -x.clone();
                }
            }
            out.push(v);
        }
        out
    }
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let nrows = m.len();
    if nrows == 0 {
        return vec![];
    }
    let ncols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut ech = StreamingEchelon::new(m.first().map_or(0, |r| r.len()));
    for row in m {
        ech.push(row.clone());
    }
    ech.rank()
}

/// Dense echelon for tall systems with few columns.
#[derive(Debug, Clone)]
pub struct StreamingEchelon {
    ncols: usize,
    rows: Vec<(usize, Vec<Q>)>,
}

impl StreamingEchelon {
    pub fn new(ncols: usize) -> Self {
        StreamingEchelon { ncols, rows: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the current pivots and returns the remainder.
    pub fn reduce(&self, mut row: Vec<Q>) -> Vec<Q> {
        for (pc, prow) in &self.rows {
            if !row[*pc].is_zero() {
                let f = row[*pc].clone();
                for (x, y) in row.iter_mut().zip(prow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        row
    }

    pub fn push(&mut self, row: Vec<Q>) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        let mut row = self.reduce(row);
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else { return false };
        let inv = Q::one() / row[pc].clone();
        for x in row.iter_mut() {
            *x *= &inv;
        }
        for (_, prow) in self.rows.iter_mut() {
            if !prow[pc].is_zero() {
                let f = prow[pc].clone();
                for (x, y) in prow.iter_mut().zip(&row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((pc, row));
        true
    }

    pub fn pivot_rows(&self) -> &[(usize, Vec<Q>)] {
        &self.rows
    }
}

/// Solves `sum_j x_j * cols[j] = rhs` exactly, where every column is a long
/// coordinate vector. The solution must be unique and the system consistent.
pub fn solve_columns(cols: &[Vec<Q>], rhs: &[Q]) -> Result<Vec<Q>, LinalgError> {
    let n = cols.len();
    let mut ech = StreamingEchelon::new(n + 1);
    for (i, b) in rhs.iter().enumerate() {
        let mut row: Vec<Q> = cols.iter().map(|c| c[i].clone()).collect();
        row.push(b.clone());
        ech.push(row);
    }
    let rank_a = ech.rows.iter().filter(|(pc, _)| *pc < n).count();
    if ech.rows.iter().any(|(pc, _)| *pc == n) {
        return Err(LinalgError::Inconsistent);
    }
    if rank_a < n {
        return Err(LinalgError::Underdetermined { rank: rank_a, unknowns: n });
    }
    let mut x = vec![Q::zero(); n];
    for (pc, row) in &ech.rows {
        x[*pc] = row[n].clone();
    }
    Ok(x)
}

/// Nullspace of the map `x -> sum_j x_j * cols[j]`.
pub fn column_relations(cols: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = cols.len();
    let len = cols.first().map_or(0, |c| c.len());
    let mut ech = SparseEchelon::new(n);
    for i in 0..len {
        let row: BTreeMap<usize, Q> = cols
            .iter()
            .enumerate()
            .filter(|(_, c)| !c[i].is_zero())
            .map(|(j, c)| (j, c[i].clone()))
            .collect();
        if !row.is_empty() {
            ech.insert(row);
        }
        if ech.rank() == n {
            break;
        }
    }
    ech.nullspace()
}

pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d *= &piv;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &piv;
            for jj in c..n {
                let t = &f * &a[c][jj];
                a[i][jj] -= t;
            }
        }
    }
    d
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Q::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

/// Characteristic polynomial det(X - M), coefficients from X^0 upwards.
/// Faddeev-LeVerrier recursion; exact over Q.
pub fn charpoly(m: &[Vec<Q>]) -> Vec<Q> {
    let n = m.len();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut mk = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = M (M_{k-1} + c_{n-k+1} I)
        let mut inner = mk.clone();
        for i in 0..n {
            inner[i][i] += &coeffs[n - k + 1];
        }
        mk = mat_mul(m, &inner);
        let tr = (0..n).fold(Q::zero(), |acc, i| acc + &mk[i][i]);
        coeffs[n - k] = -tr / Q::from_integer((k as i64).into());
    }
    coeffs
}
