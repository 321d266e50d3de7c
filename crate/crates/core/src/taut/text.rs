use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{multi_kappa_expand, MultiForm, MultiKappa, RingContext, TautExpression, TautMonomial};
use crate::error::{Error, Result};
use crate::exact::{Integer, Rational};

fn power(base: String, e: usize) -> String {
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

fn kappa_factors(kappa: &[u32]) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < kappa.len() {
        let k = kappa[i];
        let run = kappa[i..].iter().take_while(|&&x| x == k).count();
        out.push(power(format!("k{k}"), run));
        i += run;
    }
    out
}

fn psi_factors(psi: &[u32]) -> Vec<String> {
    psi.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| power(format!("p{}", i + 1), e as usize))
        .collect()
}

impl fmt::Display for TautMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = kappa_factors(&self.kappa);
        factors.extend(psi_factors(&self.psi));
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (Vec<String>, &'a Rational)>,
) -> fmt::Result {
    let mut first = true;
    for (factors, c) in terms {
        let sign = if c.is_negative() { "-" } else { "+" };
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        let abs = c.abs();
        if factors.is_empty() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{}", factors.join("*"))?;
        } else {
            write!(f, "{abs}*{}", factors.join("*"))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for TautExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms.iter().map(|(m, c)| {
                let mut factors = kappa_factors(&m.kappa);
                factors.extend(psi_factors(&m.psi));
                (factors, c)
            }),
        )
    }
}

impl fmt::Display for MultiKappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.indices() {
            [] => write!(f, "1"),
            [k] => write!(f, "k{k}"),
            many => {
                let parts: Vec<String> = many.iter().map(u32::to_string).collect();
                write!(f, "k({})", parts.join(","))
            }
        }
    }
}

impl fmt::Display for MultiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.iter().map(|(m, c)| {
                let mut factors = Vec::new();
                if !m.kappa_indices().is_empty() {
                    factors.push(MultiKappa::new(m.kappa_indices().to_vec()).to_string());
                }
                factors.extend(psi_factors(m.psi_exponents()));
                (factors, c)
            }),
        )
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: RingContext,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at offset {}", self.pos)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<Integer> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse as an integer"))
    }

    fn small(&mut self) -> Result<u32> {
        let v = self.integer()?;
        match u32::try_from(v) {
            Ok(x) => Ok(x),
            Err(_) => self.err("index too large"),
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.eat(b'^') {
            self.small()
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<TautExpression> {
        let n = self.ctx.points();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.eat(b'/') { self.integer()? } else { Integer::one() };
                if den.is_zero() {
                    return self.err("zero denominator");
                }
                Ok(TautExpression::constant(n, Rational::new(num, den)))
            }
            Some(b'p') => {
                self.pos += 1;
                let i = self.small()?;
                if i == 0 || i as usize > n {
                    return self.err("point index out of range");
                }
                let e = self.exponent()?;
                Ok(TautExpression::monomial(TautMonomial::psi(n, i as usize - 1, e)))
            }
            Some(b'k') => {
                self.pos += 1;
                let base = if self.eat(b'(') {
                    let mut indices = vec![self.small()?];
                    while self.eat(b',') {
                        indices.push(self.small()?);
                    }
                    if !self.eat(b')') {
                        return self.err("expected ')'");
                    }
                    multi_kappa_expand(&MultiKappa::new(indices), &self.ctx)
                } else {
                    multi_kappa_expand(&MultiKappa::new(vec![self.small()?]), &self.ctx)
                };
                let e = self.exponent()?;
                let mut out = TautExpression::constant(n, Rational::one());
                for _ in 0..e {
                    out = &out * &base;
                }
                Ok(out)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            _ => self.err("expected a factor"),
        }
    }

    fn product(&mut self) -> Result<TautExpression> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<TautExpression> {
        let mut acc = TautExpression::zero();
        let mut negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let t = self.product()?;
            acc = if negate { acc - t } else { acc + t };
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }
}

/// Parses the text form, e.g. `"35*k2 - 6*k1*p1 + 3*k1^2"`. Accepts rational
/// coefficients (`5/6`), parentheses, `k0` (read as `2g - 2 + n`) and
/// multi-index classes written `k(1,1)`.
pub fn parse_expression(src: &str, ctx: &RingContext) -> Result<TautExpression> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, ctx: *ctx };
    if p.peek().is_none() {
        return Err(Error::Parse("empty expression".into()));
    }
    let e = p.sum()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, q};
    use crate::taut::to_multi_form;

    #[test]
    fn display_and_parse() {
        let ctx = RingContext::new(3, 1).unwrap();
        let e = parse_expression("35*k2 - 6*k1*p1 + 3*k1^2", &ctx).unwrap();
        assert_eq!(e.to_string(), "35*k2 + 3*k1^2 - 6*k1*p1");
        assert_eq!(parse_expression(&e.to_string(), &ctx).unwrap(), e);
        assert_eq!(parse_expression("0", &ctx).unwrap().to_string(), "0");
        let r = parse_expression("-5/6*p1^2 + 1/2", &ctx).unwrap();
        assert_eq!(r.to_string(), "1/2 - 5/6*p1^2");
        assert_eq!(r.coefficient(&TautMonomial::psi(1, 0, 2)), frac(-5, 6));
    }

    #[test]
    fn multi_index_syntax() {
        let ctx = RingContext::new(3, 1).unwrap();
        let a = parse_expression("k(1,1)", &ctx).unwrap();
        let b = parse_expression("k1^2 + k2", &ctx).unwrap();
        assert_eq!(a, b);
        assert_eq!(to_multi_form(&b).to_string(), "k(1,1)");
        let k0 = parse_expression("k0*p1", &ctx).unwrap();
        assert_eq!(k0.coefficient(&TautMonomial::psi(1, 0, 1)), q(5));
        let grouped = parse_expression("2*(k1 - p1)*p1", &ctx).unwrap();
        assert_eq!(grouped.to_string(), "2*k1*p1 - 2*p1^2");
    }

    #[test]
    fn parse_errors() {
        let ctx = RingContext::new(3, 2).unwrap();
        for bad in ["", "p3", "p0", "k1 +", "k(1,1", "2/0", "k1 k2", "x"] {
            assert!(matches!(parse_expression(bad, &ctx), Err(Error::Parse(_))), "{bad}");
        }
    }
}
