//! Integer factorization for discriminants: trial division, Miller-Rabin
//! and Pollard rho.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `sign * prod p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub negative: bool,
    pub primes: BTreeMap<BigInt, u32>,
}

impl Factorization {
    pub fn value(&self) -> BigInt {
        let v = self.primes.iter().fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e));
        if self.negative {
            -v
        } else {
            v
        }
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.primes.get(&BigInt::from(p)).copied().unwrap_or(0)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.primes.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        let body = if parts.is_empty() { "1".to_string() } else { parts.join(" * ") };
        write!(f, "{}{body}", if self.negative { "-" } else { "" })
    }
}

const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with the first twelve prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for b in BASES {
        let b = BigInt::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for b in BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), n);
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut x, mut y, mut d) = (BigInt::from(2), BigInt::from(2), BigInt::one());
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

pub fn factorize(n: &BigInt) -> Factorization {
    let mut primes = BTreeMap::new();
    let negative = n.is_negative();
    let mut m = n.abs();
    if m.is_zero() {
        return Factorization { negative, primes };
    }
    let mut p = 2u64;
    while p < 10_000 && m > BigInt::one() {
        let bp = BigInt::from(p);
        while (&m % &bp).is_zero() {
            *primes.entry(bp.clone()).or_insert(0) += 1;
            m /= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        if is_probable_prime(&x) {
            *primes.entry(x).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(&x);
        stack.push(&x / &d);
        stack.push(d);
    }
    Factorization { negative, primes }
}

pub fn factorize_i64(n: i64) -> Factorization {
    factorize(&BigInt::from(n))
}

pub fn to_u64(x: &BigInt) -> Option<u64> {
    x.to_u64()
}
