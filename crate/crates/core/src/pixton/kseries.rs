use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use super::TruncSeries;
use crate::error::{domain, Result};
use crate::exact::{frac, Rational};
use crate::taut::{multi_kappa_expand, MultiKappa, RingContext, TautExpression};

/// A polynomial in the formal variables `K_0, K_1, ...`, keyed by the
/// ascending multiset of indices of each monomial.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KPolynomial {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl KPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn term(mut indices: Vec<u32>, c: Rational) -> Self {
        indices.sort_unstable();
        let mut p = Self::zero();
        p.add_term(indices, c);
        p
    }

    fn add_term(&mut self, indices: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(indices).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, indices: &[u32]) -> Rational {
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }
}

impl Add for &KPolynomial {
    type Output = KPolynomial;
    fn add(self, rhs: &KPolynomial) -> KPolynomial {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Mul for &KPolynomial {
    type Output = KPolynomial;
    fn mul(self, rhs: &KPolynomial) -> KPolynomial {
        let mut out = KPolynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let mut key = a.clone();
                key.extend_from_slice(b);
                key.sort_unstable();
                out.add_term(key, ca * cb);
            }
        }
        out
    }
}

/// A power series in `T` with [`KPolynomial`] coefficients, modulo `T^{order+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSeries {
    coeffs: Vec<KPolynomial>,
}

impl KSeries {
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![KPolynomial::zero(); order + 1];
        coeffs[0] = KPolynomial::constant(Rational::one());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &KPolynomial {
        &self.coeffs[k]
    }

    fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }
}

impl Add for &KSeries {
    type Output = KSeries;
    fn add(self, rhs: &KSeries) -> KSeries {
        let order = self.order().min(rhs.order());
        KSeries { coeffs: (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect() }
    }
}

impl Mul for &KSeries {
    type Output = KSeries;
    fn mul(self, rhs: &KSeries) -> KSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![KPolynomial::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                coeffs[i + j] = &coeffs[i + j] + &(&self.coeffs[i] * &rhs.coeffs[j]);
            }
        }
        KSeries { coeffs }
    }
}

/// `{S} = Σ [S]_{T^k} K_k T^k`.
pub fn decorate(s: &TruncSeries) -> KSeries {
    KSeries {
        coeffs: s
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| KPolynomial::term(vec![k as u32], c.clone()))
            .collect(),
    }
}

/// Formal exponential; the constant term in `T` must vanish.
pub fn k_exp(s: &KSeries) -> Result<KSeries> {
    if !s.coeffs[0].is_zero() {
        return domain("exponential of a K-series with nonzero constant term");
    }
    let order = s.order();
    let mut out = KSeries::one(order);
    let mut power = KSeries::one(order);
    for m in 1..=order {
        power = (&power * s).scale(&frac(1, m as i64));
        out = &out + &power;
    }
    Ok(out)
}

/// Replaces each `K_{e_1}...K_{e_l}` by `κ_{e_1,...,e_l}` expanded over
/// permutations by cycles; the result is indexed by the power of `T`.
pub fn kappa_apply(p: &KSeries, ctx: &RingContext) -> Vec<TautExpression> {
    p.coeffs
        .iter()
        .map(|poly| {
            let mut out = TautExpression::zero();
            for (indices, c) in poly.iter() {
                out.add_scaled(&multi_kappa_expand(&MultiKappa::new(indices.clone()), ctx), c);
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::{series_a, series_b};
    use super::*;
    use crate::exact::q;
    use crate::taut::parse_expression;

    fn one_minus_a(order: usize) -> TruncSeries {
        &TruncSeries::one(order) - &series_a(order)
    }

    #[test]
    fn decoration() {
        let d = decorate(&one_minus_a(2));
        assert!(d.coeff(0).is_zero());
        assert_eq!(d.coeff(1), &KPolynomial::term(vec![1], q(-60)));
        assert_eq!(d.coeff(2), &KPolynomial::term(vec![2], q(-27720)));
        let b = decorate(&series_b(2));
        assert_eq!(b.coeff(0), &KPolynomial::term(vec![0], q(-1)));
        assert_eq!(b.coeff(1), &KPolynomial::term(vec![1], q(84)));
        assert!(decorate(&TruncSeries::zero(2)).coeffs.iter().all(KPolynomial::is_zero));
    }

    #[test]
    fn exponential_of_decorated_series() {
        let e = k_exp(&decorate(&one_minus_a(2))).unwrap();
        assert_eq!(e.coeff(0), &KPolynomial::constant(q(1)));
        assert_eq!(e.coeff(1), &KPolynomial::term(vec![1], q(-60)));
        let expected = &KPolynomial::term(vec![1, 1], q(1800)) + &KPolynomial::term(vec![2], q(-27720));
        assert_eq!(e.coeff(2), &expected);
        assert!(k_exp(&KSeries::one(2)).is_err());
    }

    #[test]
    fn kappa_operator() {
        let ctx = RingContext::new(4, 3).unwrap();
        let mut s = KSeries::one(2);
        s.coeffs[0] = KPolynomial::term(vec![0], q(1));
        s.coeffs[1] = KPolynomial::term(vec![1], q(1));
        s.coeffs[2] = KPolynomial::term(vec![1, 1], q(1));
        let out = kappa_apply(&s, &ctx);
        assert_eq!(out[0], TautExpression::constant(3, q(9)));
        assert_eq!(out[1], parse_expression("k1", &ctx).unwrap());
        assert_eq!(out[2], parse_expression("k1^2 + k2", &ctx).unwrap());
    }
}
