//! The classical scalar generators and the square root of `chi10`.

pub mod maass;
pub mod theta;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::expansion::ScalarExpansion;
use crate::index::{enumerate, partitions, Coset, Index, SupportConstraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Igusa {
    Phi4,
    Phi6,
    Chi10,
    Chi12,
    Chi5,
}

impl Igusa {
    pub const ALL: [Igusa; 5] = [Igusa::Phi4, Igusa::Phi6, Igusa::Chi10, Igusa::Chi12, Igusa::Chi5];

    pub fn weight(self) -> i64 {
        match self {
            Igusa::Phi4 => 4,
            Igusa::Phi6 => 6,
            Igusa::Chi10 => 10,
            Igusa::Chi12 => 12,
            Igusa::Chi5 => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Igusa::Phi4 => "phi4",
            Igusa::Phi6 => "phi6",
            Igusa::Chi10 => "chi10",
            Igusa::Chi12 => "chi12",
            Igusa::Chi5 => "chi5",
        }
    }
}

impl fmt::Display for Igusa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Igusa {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Igusa::ALL
            .into_iter()
            .find(|g| g.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Construction(format!("unknown classical form {s:?}")))
    }
}

/// Expansion of a generator up to doubled trace `tmax`. The even generators
/// are Maass lifts; `chi5` is the square root of `chi10`.
pub fn igusa_generator(g: Igusa, tmax: i64) -> Result<ScalarExpansion> {
    match g {
        Igusa::Chi5 => {
            let chi10 = maass::lift_generator(10, tmax + 2)?;
            Ok(sqrt_unit_leading(&chi10)?.truncate(tmax))
        }
        _ => maass::lift_generator(g.weight(), tmax),
    }
}

/// Product of two expansions.
pub fn mul(f: &ScalarExpansion, g: &ScalarExpansion) -> Result<ScalarExpansion> {
    f.mul(g)
}

/// `f / g` for `g` with constant term 1.
pub fn divide(f: &ScalarExpansion, g: &ScalarExpansion) -> Result<ScalarExpansion> {
    f.divide(g)
}

/// The square root in the odd coset of a cusp form whose leading
/// coefficient is 1 at undoubled index `(1,1,1)`, normalized to be `+1` at the
/// leading index `(1/2,1/2,1/2)`.
///
/// With `m' = n - (1,1,1)` the coefficient of `n` in `g^2` is
/// `2 g(1,1,1) g(m')` plus products of already known coefficients, provided
/// the unknowns are visited by doubled trace and then descending `rho`.
pub fn sqrt_unit_leading(f: &ScalarExpansion) -> Result<ScalarExpansion> {
    let lead = Index::new(2, 2, 2);
    if f.coset != Coset::Even || f.get(&lead)? != Q::one() || !f.is_cusp() {
        return Err(Error::NotASquare(lead));
    }
    let base = Index::new(1, 1, 1);
    let tmax = f.tmax - 2;
    let mut order = enumerate(Coset::Odd, tmax);
    order.sort_by_key(|n| (n.trace2(), -n.rho, n.nu1));
    let odd = SupportConstraint::cusp(Coset::Odd);
    let mut g: BTreeMap<Index, Q> = BTreeMap::new();
    g.insert(base, Q::one());
    let two = Q::from_integer(2.into());
    for m in order {
        if m == base {
            continue;
        }
        if m.is_singular() {
            g.insert(m, Q::zero());
            continue;
        }
        let n = m.add(&base);
        let mut rest = f.get(&n)?;
        for p in partitions(&n, &[odd, odd]) {
            if p[0] == m || p[1] == m {
                continue;
            }
            let a = g.get(&p[0]).ok_or(Error::NotASquare(n))?;
            let b = g.get(&p[1]).ok_or(Error::NotASquare(n))?;
            rest -= a * b;
        }
        g.insert(m, rest / &two);
    }
    let out = ScalarExpansion::scalar(f.k / 2, Coset::Odd, tmax, 2, g);
    let check = out.mul(&out)?;
    for n in enumerate(Coset::Even, check.tmax) {
        if check.at(&n) != f.at(&n) {
            return Err(Error::NotASquare(n));
        }
    }
    Ok(out)
}
