//! Rational scalars and small helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number used throughout the engine.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

/// Least common multiple of the denominators of `xs` (1 for an empty slice).
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Q>>(xs: I) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Numerator of `x * den`, which must be integral.
pub fn scaled_numerator(x: &Q, den: &BigInt) -> BigInt {
    let v = x * qi(den);
    debug_assert!(v.is_integer());
    v.to_integer()
}

pub fn pow_i64(base: i64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Falling factorial x (x-1) ... (x-n+1).
pub fn falling(x: i64, n: u32) -> BigInt {
    (0..n as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(x - i))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Integer square root (floor) of a non-negative integer.
pub fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    // Newton iteration from above
    let mut x = n;
    let mut y = (x + 1) / 2;
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

/// Bernoulli numbers B_0..B_n with B_1 = -1/2.
pub fn bernoulli(n: usize) -> Vec<Q> {
    let mut b = vec![Q::zero(); n + 1];
    b[0] = Q::one();
    for m in 1..=n {
        let mut s = Q::zero();
        for k in 0..m {
            s += qi(&binomial(m as u32 + 1, k as u32)) * &b[k];
        }
        b[m] = -s / q(m as i64 + 1);
    }
    b
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small() {
        let b = bernoulli(12);
        assert_eq!(b[2], qr(1, 6));
        assert_eq!(b[4], qr(-1, 30));
        assert_eq!(b[6], qr(1, 42));
        assert_eq!(b[10], qr(5, 66));
        assert_eq!(b[12], qr(-691, 2730));
    }

    #[test]
    fn falling_factorial_convention() {
        assert_eq!(falling(6, 2), BigInt::from(30));
        assert_eq!(falling(7, 0), BigInt::from(1));
    }

    #[test]
    fn isqrt_edges() {
        for n in 0..2000i64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
    }
}
