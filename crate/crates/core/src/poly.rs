//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{fmt_q, Q};

pub type Mono = Vec<u8>;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Poly {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Poly::monomial(m, Q::one())
    }

    pub fn monomial(m: Mono, c: Q) -> Poly {
        let mut p = Poly::zero(m.len());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, m: &[u8]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                r.add_term(m, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn deriv(&self, i: usize) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut m2 = m.clone();
                m2[i] -= 1;
                r.add_term(m2, c * Q::from_integer(m[i].into()));
            }
        }
        r
    }

    /// Multiplies by the variable `i`.
    pub fn mul_var(&self, i: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2[i] += 1;
                    (m2, c.clone())
                })
                .collect(),
        }
    }

    pub fn eval(&self, pt: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in pt.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Replaces every variable `i` by `images[i]` (all in a common ring).
    pub fn subst(&self, images: &[Poly]) -> Poly {
        let nv = images.first().map_or(0, |p| p.nvars);
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(nv), p.clone()]).collect();
        let mut r = Poly::zero(nv);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(nv, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][e as usize]);
            }
            r = r.add(&t);
        }
        r
    }

    /// Total degree of every term restricted to `vars`; `None` if mixed.
    pub fn homogeneous_degree_in(&self, vars: &[usize]) -> Option<u32> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d: u32 = vars.iter().map(|&i| m[i] as u32).sum();
            match deg {
                None => deg = Some(d),
                Some(x) if x != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Sends a polynomial to a ring with more variables via `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut r = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut m2 = vec![0u8; nvars];
            for (i, &e) in m.iter().enumerate() {
                m2[map[i]] += e;
            }
            r.add_term(m2, c.clone());
        }
        r
    }

    /// `Some(c)` with `self = c * other`, if the two are proportional.
    pub fn ratio_to(&self, other: &Poly) -> Option<Q> {
        let (m, c) = other.terms.iter().next()?;
        let r = self.coeff(m) / c;
        (other.scale(&r) == *self).then_some(r)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("v{i}") } else { format!("v{i}^{e}") })
                    .collect();
                format!("{}*{}", fmt_q(c), vars.join("*"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
