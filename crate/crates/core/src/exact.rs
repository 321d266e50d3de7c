//! Exact scalars and the integer sequences the intersection formulas consume.
//!
//! All arithmetic is carried out in [`Rational`], an arbitrary-precision
//! rational kept in lowest terms with a positive denominator, so structural
//! equality is numeric equality.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};

pub type Integer = BigInt;
pub type Rational = num_rational::BigRational;

/// Shorthand for an integral rational.
pub fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`; panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(k: u32) -> Integer {
    (2..=k).fold(Integer::one(), |acc, i| acc * i)
}

/// `k (k-2) (k-4) ...`, with `0!! = 1!! = 1`.
pub fn double_factorial(k: u32) -> Integer {
    let mut acc = Integer::one();
    let mut i = k;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    acc
}

/// Double factorial extended by `(-1)!! = 1`.
pub fn double_factorial_signed(k: i64) -> Integer {
    if k <= 0 {
        Integer::one()
    } else {
        double_factorial(k as u32)
    }
}

pub fn binomial(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

// Entry m holds B_m (with B_1 = +1/2); extended on demand.
static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// The Bernoulli number `B_index` for an even positive `index`, in the
/// convention where `B_8 = -1/30`.
pub fn bernoulli(index: u32) -> Result<Rational> {
    if index == 0 || index % 2 == 1 {
        return domain(format!("bernoulli expects an even positive index, got {index}"));
    }
    let mut table = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if table.len() <= index as usize {
        *table = akiyama_tanigawa(index as usize);
    }
    Ok(table[index as usize].clone())
}

/// `B_0 ..= B_max` via the Akiyama–Tanigawa transform.
fn akiyama_tanigawa(max: usize) -> Vec<Rational> {
    let mut row: Vec<Rational> = Vec::with_capacity(max + 1);
    let mut out = Vec::with_capacity(max + 1);
    for m in 0..=max {
        row.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &row[j - 1] - &row[j];
            row[j - 1] = diff * BigInt::from(j);
        }
        out.push(row[0].clone());
    }
    out
}

/// `base^exp` for a possibly negative exponent; `base` must be nonzero when `exp < 0`.
pub fn pow_signed(base: &Rational, exp: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Integer {
    use num_integer::Integer as _;
    values
        .into_iter()
        .fold(Integer::one(), |acc, v| acc.lcm(v.denom()))
}

/// Greatest common divisor of the numerators (zero if all are zero).
pub fn content<'a>(values: impl IntoIterator<Item = &'a Integer>) -> Integer {
    use num_integer::Integer as _;
    values
        .into_iter()
        .fold(Integer::zero(), |acc, v| acc.gcd(v))
        .abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Standard recurrence `sum_{j=0}^{m} C(m+1, j) B_j = 0`, seeded with B_0 = 1.
    fn bernoulli_oracle(max: u32) -> Vec<Rational> {
        let mut b = vec![Rational::one()];
        for m in 1..=max {
            let mut s = Rational::zero();
            for (j, bj) in b.iter().enumerate() {
                s += Rational::from_integer(binomial(m + 1, j as u32)) * bj;
            }
            b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
        }
        b
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), 1.into());
        assert_eq!(factorial(6), 720.into());
        assert_eq!(factorial(10), 3_628_800.into());
        assert_eq!(double_factorial(5), 15.into());
        assert_eq!(double_factorial(7), 105.into());
        assert_eq!(double_factorial(0), 1.into());
        assert_eq!(double_factorial(1), 1.into());
        assert_eq!(double_factorial_signed(-1), 1.into());
    }

    #[test]
    fn odd_double_factorial_identity() {
        for k in 0..=20u32 {
            let lhs = double_factorial(2 * k + 1) * Integer::from(2).pow(k) * factorial(k);
            assert_eq!(lhs, factorial(2 * k + 1), "k = {k}");
        }
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(8).unwrap(), frac(-1, 30));
        assert_eq!(bernoulli(2).unwrap(), frac(1, 6));
        assert_eq!(bernoulli(4).unwrap(), frac(-1, 30));
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(0).is_err());
    }

    #[test]
    fn bernoulli_matches_recurrence() {
        let oracle = bernoulli_oracle(30);
        for m in (2..=30).step_by(2) {
            assert_eq!(bernoulli(m).unwrap(), oracle[m as usize], "B_{m}");
        }
    }

    #[test]
    fn bernoulli_concurrent_extension() {
        let handles: Vec<_> = (1..=8)
            .map(|i| std::thread::spawn(move || bernoulli(2 * i * 3).unwrap()))
            .collect();
        let oracle = bernoulli_oracle(48);
        for (i, h) in (1..=8).zip(handles) {
            assert_eq!(h.join().unwrap(), oracle[(6 * i) as usize]);
        }
    }

    #[test]
    fn signed_powers() {
        assert_eq!(pow_signed(&q(-4), -1), frac(-1, 4));
        assert_eq!(pow_signed(&q(-4), 3), q(-64));
        assert_eq!(pow_signed(&q(7), 0), q(1));
    }
}
