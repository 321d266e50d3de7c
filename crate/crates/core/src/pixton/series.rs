use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::exact::{factorial, frac, Rational};

/// A power series in `T` known modulo `T^{order+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn from_coeffs(order: usize, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        let mut s = Self::zero(order);
        for (i, c) in coeffs.into_iter().take(order + 1).enumerate() {
            s.coeffs[i] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Multiplies by `T^k`.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        Self::from_coeffs(order, (0..=order).map(|i| if i < k { Rational::zero() } else { self.coeffs[i - k].clone() }))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `exp(self)`; the constant term must vanish.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return domain("exponential of a series with nonzero constant term");
        }
        let order = self.order();
        let mut out = Self::one(order);
        let mut power = Self::one(order);
        for m in 1..=order {
            power = &power * self;
            power = power.scale(&frac(1, m as i64));
            out = &out + &power;
        }
        Ok(out)
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        TruncSeries::from_coeffs(order, (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]))
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        self + &rhs.scale(&-Rational::one())
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        let mut out = TruncSeries::zero(order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                out.coeffs[i + j] += &self.coeffs[i] * &rhs.coeffs[j];
            }
        }
        out
    }
}

fn hypergeometric(k: usize) -> Rational {
    let k = k as u32;
    Rational::new(factorial(6 * k), factorial(2 * k) * factorial(3 * k))
}

/// `A = Σ (6k)!/((2k)!(3k)!) T^k = 1 + 60T + 27720T² + ...`
pub fn series_a(order: usize) -> TruncSeries {
    TruncSeries::from_coeffs(order, (0..=order).map(hypergeometric))
}

/// `B = Σ (6k+1)/(6k-1) · (6k)!/((2k)!(3k)!) T^k = -1 + 84T + 32760T² + ...`
pub fn series_b(order: usize) -> TruncSeries {
    TruncSeries::from_coeffs(
        order,
        (0..=order).map(|k| frac(6 * k as i64 + 1, 6 * k as i64 - 1) * hypergeometric(k)),
    )
}

/// `C_{3i} = T^i A` and `C_{3i+1} = T^i B`; indices `≡ 2 (mod 3)` are rejected.
pub fn series_c(j: u32, order: usize) -> Result<TruncSeries> {
    let shift = (j / 3) as usize;
    match j % 3 {
        0 => Ok(series_a(order).shift(shift)),
        1 => Ok(series_b(order).shift(shift)),
        _ => domain(format!("C_{j} is undefined: index is 2 mod 3")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn leading_coefficients() {
        assert_eq!(series_a(2).coeffs(), &[q(1), q(60), q(27720)]);
        assert_eq!(series_b(2).coeffs(), &[q(-1), q(84), q(32760)]);
        let oracle = factorial(18) / (factorial(6) * factorial(9));
        assert_eq!(series_a(3).coeff(3), Rational::from_integer(oracle));
        assert_eq!(series_a(3).coeff(3), q(24504480));
    }

    #[test]
    fn shifted_series() {
        assert_eq!(series_c(0, 4).unwrap(), series_a(4));
        assert_eq!(series_c(1, 4).unwrap(), series_b(4));
        assert_eq!(series_c(3, 2).unwrap().coeffs(), &[q(0), q(1), q(60)]);
        assert_eq!(series_c(4, 2).unwrap().coeffs(), &[q(0), q(-1), q(84)]);
        assert!(series_c(2, 2).is_err());
        assert!(series_c(5, 2).is_err());
    }

    #[test]
    fn exponential() {
        let x = TruncSeries::from_coeffs(3, [q(0), q(1)]);
        let e = x.exp().unwrap();
        assert_eq!(e.coeffs(), &[q(1), q(1), frac(1, 2), frac(1, 6)]);
        assert!(TruncSeries::one(2).exp().is_err());
        assert_eq!(TruncSeries::zero(3).exp().unwrap(), TruncSeries::one(3));
    }
}
