//! Evaluation in the top nonvanishing degree and `λ_g λ_{g-1}` pairings.
//!
//! On `M_{g,n}` with `n ≥ 1` the degree `g-1` part is spanned by
//! `ψ_1^{g-1}, ..., ψ_n^{g-1}`; every class of that degree is written on this
//! basis as a [`SocleVector`]. Pairings against `λ_g λ_{g-1}` on `M̄_{g,n}`
//! are returned in units of `∫_{M̄_g} λ_g λ_{g-1} κ_{g-2}` (see
//! [`lambda_integral`] for that constant).

mod pairing;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};
use crate::exact::{bernoulli, double_factorial, double_factorial_signed, factorial, q, Rational};
use crate::taut::{single_to_multi, RingContext, TautExpression};

pub use pairing::{
    build_matrices, global_scalar, labels, m_entry, mhat_entry, col_scale, row_class, row_scale, test_class,
    IndexLabel, MatrixRecord, PairingMatrix,
};

/// Coefficients on `ψ_1^{g-1}, ..., ψ_n^{g-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocleVector {
    coeffs: Vec<Rational>,
}

impl SocleVector {
    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); n] }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn add_scaled(&mut self, other: &SocleVector, c: &Rational) {
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += y * c;
        }
    }
}

impl fmt::Display for SocleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            write!(f, "{}*s{}", c.abs(), i + 1)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn odd_double_factorial_product(values: &[u32]) -> Rational {
    values
        .iter()
        .fold(Rational::one(), |acc, &k| acc * Rational::from_integer(double_factorial(2 * k + 1)))
}

/// The `c` in `κ_{k_1,...,k_m} = c · κ_{g-2}` on `M_g`:
/// `(2g-3+m)! (2g-1)!! / ((2g-1)! ∏ (2k_i+1)!!)`.
pub fn top_no_points(g: u32, kappa: &[u32]) -> Result<Rational> {
    if g < 2 {
        return domain("top intersection needs g ≥ 2");
    }
    if kappa.contains(&0) || kappa.iter().sum::<u32>() != g - 2 {
        return domain(format!("κ indices {kappa:?} must be positive and sum to g - 2 = {}", g as i64 - 2));
    }
    let m = kappa.len() as u32;
    let num = factorial(2 * g - 3 + m) * double_factorial(2 * g - 1);
    Ok(Rational::new(num, factorial(2 * g - 1)) / odd_double_factorial_product(kappa))
}

/// `∏ ψ_i^{d_i} · κ_{k_1,...,k_m}` (a multi-index class) on the socle basis.
pub fn socle_express(g: u32, psi: &[u32], kappa: &[u32]) -> Result<SocleVector> {
    let n = psi.len();
    if g < 2 || n == 0 {
        return domain("socle evaluation needs g ≥ 2 and n ≥ 1");
    }
    if kappa.contains(&0) {
        return domain("κ indices must be positive");
    }
    let ksum: u32 = kappa.iter().sum();
    if psi.iter().sum::<u32>() + ksum != g - 1 {
        return domain(format!("class has degree {} but the socle is in degree {}", psi.iter().sum::<u32>() + ksum, g - 1));
    }
    let m = kappa.len() as u32;
    let chi = 2 * g - 2 + n as u32;
    let prefactor = Rational::new(
        double_factorial(2 * g - 1) * factorial(2 * g - 3 + n as u32 + m),
        factorial(chi),
    ) / (odd_double_factorial_product(psi) * odd_double_factorial_product(kappa));
    let coeffs = psi
        .iter()
        .map(|&d| &prefactor * Rational::new((chi * d + ksum).into(), (g - 1).into()))
        .collect();
    Ok(SocleVector { coeffs })
}

/// Linear extension of [`socle_express`] to arbitrary expressions of degree `g-1`.
pub fn socle_express_general(expr: &TautExpression, ctx: &RingContext) -> Result<SocleVector> {
    let g = ctx.genus();
    if g < 2 {
        return domain("socle evaluation needs g ≥ 2");
    }
    let mut out = SocleVector::zero(ctx.points());
    for (m, c) in expr.iter() {
        if m.degree() != g - 1 {
            return domain(format!("term {m} has degree {} but the socle is in degree {}", m.degree(), g - 1));
        }
        for (mk, d) in single_to_multi_or_one(m.kappa_indices()) {
            out.add_scaled(&socle_express(g, m.psi_exponents(), &mk)?, &(c * d));
        }
    }
    Ok(out)
}

fn single_to_multi_or_one(kappa: &[u32]) -> Vec<(Vec<u32>, Rational)> {
    if kappa.is_empty() {
        return vec![(Vec::new(), Rational::one())];
    }
    single_to_multi(kappa).into_iter().map(|(k, c)| (k.indices().to_vec(), c)).collect()
}

/// The `c` in `π_*(κ_{k_1,...,k_m} ∏ ψ_i^{e_i}) = c · κ_{g-2}` (paired with
/// `λ_g λ_{g-1}`), where `π` forgets all `n = exponents.len()` points:
/// `(2g-3+n+m)! (2g-3)!! / ((2g-2)! ∏ (2e_i-1)!! ∏ (2k_j+1)!!)`, with `(-1)!! = 1`.
pub fn pushforward_coeff(g: u32, exponents: &[u32], kappa: &[u32]) -> Rational {
    assert!(g >= 2, "pushforward coefficient needs g ≥ 2");
    let n = exponents.len() as u32;
    let m = kappa.len() as u32;
    let num = factorial(2 * g - 3 + n + m) * double_factorial(2 * g - 3);
    let psi_den = exponents
        .iter()
        .fold(Rational::one(), |acc, &e| acc * Rational::from_integer(double_factorial_signed(2 * e as i64 - 1)));
    Rational::new(num, factorial(2 * g - 2)) / (psi_den * odd_double_factorial_product(kappa))
}

/// `∫ λ_g λ_{g-1} · expr` over `M̄_{g,n}` in units of `∫_{M̄_g} λ_g λ_{g-1} κ_{g-2}`.
pub fn hodge_pairing(expr: &TautExpression, ctx: &RingContext) -> Result<Rational> {
    let g = ctx.genus();
    if g < 2 {
        return domain("λ_g λ_{g-1} pairing needs g ≥ 2");
    }
    let target = g - 2 + ctx.points() as u32;
    let mut total = Rational::zero();
    for (m, c) in expr.iter() {
        if m.degree() != target {
            return domain(format!("term {m} has degree {} but the pairing needs degree {target}", m.degree()));
        }
        for (mk, d) in single_to_multi_or_one(m.kappa_indices()) {
            total += c * d * pushforward_coeff(g, m.psi_exponents(), &mk);
        }
    }
    Ok(total)
}

/// `∫_{M̄_g} λ_g λ_{g-1} κ_{g-2} = (-1)^{g-1} B_{2g} (g-1)! / (2^g (2g)!)`.
pub fn lambda_integral(g: u32) -> Result<Rational> {
    if g < 2 {
        return domain("λ_g λ_{g-1} κ_{g-2} needs g ≥ 2");
    }
    let sign = if (g - 1) % 2 == 0 { q(1) } else { q(-1) };
    let den = Rational::from_integer(num_traits::pow(crate::exact::Integer::from(2), g as usize) * factorial(2 * g));
    Ok(sign * bernoulli(2 * g)? * Rational::from_integer(factorial(g - 1)) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;
    use crate::pixton::all_relations;
    use crate::taut::{parse_expression, TautMonomial};

    fn sv(v: Vec<Rational>) -> SocleVector {
        SocleVector::from_coeffs(v)
    }

    #[test]
    fn top_intersections() {
        assert_eq!(top_no_points(4, &[2]).unwrap(), q(1));
        assert_eq!(top_no_points(4, &[1, 1]).unwrap(), frac(35, 3));
        assert_eq!(top_no_points(3, &[1]).unwrap(), q(1));
        assert!(top_no_points(4, &[1]).is_err());
        assert!(top_no_points(1, &[]).is_err());
    }

    #[test]
    fn genus_three_examples() {
        for n in 1..=10usize {
            let nn = n as i64;
            let zero = vec![0; n];
            assert_eq!(socle_express(3, &zero, &[2]).unwrap(), sv(vec![q(1); n]));
            assert_eq!(socle_express(3, &zero, &[1, 1]).unwrap(), sv(vec![frac(5 * (nn + 5), 3); n]));
            for i in 0..n {
                let mut d = zero.clone();
                d[i] = 1;
                let mut expect = vec![frac(5, 6); n];
                expect[i] = frac(5 * (nn + 5), 6);
                assert_eq!(socle_express(3, &d, &[1]).unwrap(), sv(expect));
                for j in i + 1..n {
                    let mut d2 = d.clone();
                    d2[j] = 1;
                    let mut expect = vec![q(0); n];
                    expect[i] = frac(5, 6);
                    expect[j] = frac(5, 6);
                    assert_eq!(socle_express(3, &d2, &[]).unwrap(), sv(expect));
                }
            }
        }
    }

    #[test]
    fn genus_four_degree_three_list() {
        for n in 1..=10usize {
            let nn = n as i64;
            let zero = vec![0; n];
            let all = |c: Rational| sv(vec![c; n]);
            let at = |k: usize, own: Rational, rest: Rational| {
                let mut v = vec![rest; n];
                v[k] = own;
                sv(v)
            };
            assert_eq!(socle_express(4, &zero, &[3]).unwrap(), all(q(1)));
            assert_eq!(socle_express(4, &zero, &[2, 1]).unwrap(), all(frac(7 * (nn + 7), 3)));
            assert_eq!(socle_express(4, &zero, &[1, 1, 1]).unwrap(), all(frac(35 * (nn + 7) * (nn + 8), 9)));
            for k in 0..n {
                let mut d = zero.clone();
                d[k] = 1;
                assert_eq!(socle_express(4, &d, &[2]).unwrap(), at(k, frac(7 * (nn + 8), 9), frac(14, 9)));
                assert_eq!(
                    socle_express(4, &d, &[1, 1]).unwrap(),
                    at(k, frac(35 * (nn + 7) * (nn + 8), 27), frac(70 * (nn + 7), 27))
                );
                let mut d2 = zero.clone();
                d2[k] = 2;
                assert_eq!(socle_express(4, &d2, &[1]).unwrap(), at(k, frac(7 * (2 * nn + 13), 9), frac(7, 9)));
                for l in 0..n {
                    if l == k {
                        continue;
                    }
                    let mut kl = d.clone();
                    kl[l] = 1;
                    let mut expect = vec![frac(35, 27); n];
                    expect[k] = frac(35 * (nn + 7), 27);
                    expect[l] = frac(35 * (nn + 7), 27);
                    assert_eq!(socle_express(4, &kl, &[1]).unwrap(), sv(expect));
                    let mut k2l = d2.clone();
                    k2l[l] = 1;
                    let mut expect = vec![q(0); n];
                    expect[k] = frac(14, 9);
                    expect[l] = frac(7, 9);
                    assert_eq!(socle_express(4, &k2l, &[]).unwrap(), sv(expect));
                    for p in 0..n {
                        if p == k || p == l {
                            continue;
                        }
                        let mut klp = kl.clone();
                        klp[p] = 1;
                        let mut expect = vec![q(0); n];
                        for i in [k, l, p] {
                            expect[i] = frac(35, 27);
                        }
                        assert_eq!(socle_express(4, &klp, &[]).unwrap(), sv(expect));
                    }
                }
            }
        }
    }

    #[test]
    fn general_expressions() {
        for n in 1..6usize {
            let ctx = RingContext::new(3, n).unwrap();
            let k1sq = TautExpression::monomial(TautMonomial::kappa(n, &[1, 1]));
            let expected = frac(5 * (n as i64 + 5), 3) - q(1);
            assert_eq!(socle_express_general(&k1sq, &ctx).unwrap(), sv(vec![expected; n]));
            let p1 = parse_expression("p1^2", &ctx).unwrap();
            let mut basis = vec![q(0); n];
            basis[0] = q(1);
            assert_eq!(socle_express_general(&p1, &ctx).unwrap(), sv(basis));
            assert!(socle_express_general(&parse_expression("p1", &ctx).unwrap(), &ctx).is_err());
        }
    }

    #[test]
    fn relations_vanish_in_the_socle() {
        for n in 1..5 {
            for (g, d) in [(2, 1), (3, 2), (4, 3)] {
                let ctx = RingContext::new(g, n).unwrap();
                for (p, r) in all_relations(&ctx, d).unwrap() {
                    assert!(socle_express_general(&r, &ctx).unwrap().is_zero(), "{p:?}");
                }
            }
        }
    }

    #[test]
    fn pushforward_values() {
        assert_eq!(pushforward_coeff(4, &[], &[2]), q(1));
        for n in 1..8u32 {
            let ones = vec![1; n as usize];
            let expected = Rational::from_integer(factorial(n + 7)) / q(2i64.pow(4) * 3i64.pow(3));
            assert_eq!(pushforward_coeff(4, &ones, &[1, 1]), expected);
        }
        // ψ_k^4 with one point carrying no ψ and n-2 points carrying ψ^1
        for n in 2..8u32 {
            let mut e = vec![1; n as usize];
            e[0] = 4;
            e[1] = 0;
            let expected = Rational::from_integer(factorial(n + 5)) / q(16 * 9 * 5 * 7);
            assert_eq!(pushforward_coeff(4, &e, &[]), expected);
        }
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_integral(4).unwrap(), frac(1, 2i64.pow(11) * 9 * 25 * 7));
        assert_eq!(lambda_integral(2).unwrap(), frac(1, 2880));
        assert!(lambda_integral(1).is_err());
    }
}
