//! Relations as printed: the genus-3 degree-2 list (with `κ_0 = n + 4`
//! substituted), the BSZ relations and their displayed combinations, and
//! the two genus-4 degree-2 displays (with `κ_0 = n + 6`).

use crate::exact::{frac, q, Rational};
use crate::taut::{multi_kappa_expand, MultiKappa, RingContext, TautExpression, TautMonomial};

/// Accumulates a degree-2 expression with named coefficient slots.
struct Degree2 {
    ctx: RingContext,
    expr: TautExpression,
}

impl Degree2 {
    fn new(g: u32, n: usize) -> Self {
        Self { ctx: RingContext::new(g, n).expect("stable context"), expr: TautExpression::zero() }
    }

    fn n(&self) -> usize {
        self.ctx.points()
    }

    fn psi2(&mut self, i: usize, c: Rational) -> &mut Self {
        self.expr.add_term(TautMonomial::psi(self.n(), i, 2), c);
        self
    }

    fn pp(&mut self, i: usize, j: usize, c: Rational) -> &mut Self {
        let mut psi = vec![0; self.n()];
        psi[i] += 1;
        psi[j] += 1;
        self.expr.add_term(TautMonomial::new(psi, Vec::new()), c);
        self
    }

    fn k1p(&mut self, i: usize, c: Rational) -> &mut Self {
        let mut psi = vec![0; self.n()];
        psi[i] = 1;
        self.expr.add_term(TautMonomial::new(psi, vec![1]), c);
        self
    }

    fn k2(&mut self, c: Rational) -> &mut Self {
        self.expr.add_term(TautMonomial::kappa(self.n(), &[2]), c);
        self
    }

    /// Multi-index `κ_{1,1} = κ_1² + κ_2`.
    fn k11(&mut self, c: Rational) -> &mut Self {
        let e = multi_kappa_expand(&MultiKappa::new(vec![1, 1]), &self.ctx);
        self.expr.add_scaled(&e, &c);
        self
    }

    /// `a Σψ_i² + b Σ_{i<j} ψ_iψ_j + c Σ κ_1ψ_i` over the points not excluded.
    fn sums(&mut self, excluded: &[usize], a: Rational, b: Rational, c: Rational) -> &mut Self {
        let pts: Vec<usize> = (0..self.n()).filter(|i| !excluded.contains(i)).collect();
        for (x, &i) in pts.iter().enumerate() {
            self.psi2(i, a.clone());
            self.k1p(i, c.clone());
            for &j in &pts[x + 1..] {
                self.pp(i, j, b.clone());
            }
        }
        self
    }

    fn done(&mut self) -> TautExpression {
        std::mem::take(&mut self.expr)
    }
}

/// One printed relation with its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub label: String,
    pub expr: TautExpression,
}

fn fixture(label: String, expr: TautExpression) -> Fixture {
    Fixture { label, expr }
}

/// `35Σψ² + 6Σψψ - 6Σκ_1ψ - 35κ_2 + 3κ_{1,1}` over the points not excluded.
fn basic(n: usize, excluded: &[usize]) -> TautExpression {
    Degree2::new(3, n).sums(excluded, q(35), q(6), q(-6)).k2(q(-35)).k11(q(3)).done()
}

pub fn genus3_one(n: usize) -> TautExpression {
    basic(n, &[])
}

/// Point `k` is 0-based.
pub fn genus3_two(n: usize, k: usize) -> TautExpression {
    let mut e = Degree2::new(3, n);
    e.sums(&[k], q(35), q(6), q(-6)).psi2(k, q(-45)).k1p(k, q(10)).k2(q(-35)).k11(q(3));
    for i in (0..n).filter(|&i| i != k) {
        e.pp(k, i, q(-10));
    }
    e.done()
}

pub fn genus3_three(n: usize) -> TautExpression {
    let n_ = n as i64;
    Degree2::new(3, n)
        .sums(&[], q(35 * (n_ + 4)), q(6 * (n_ + 4)), q(-(6 * n_ + 40)))
        .k2(q(-(35 * n_ + 220)))
        .k11(q(3 * n_ + 28))
        .done()
}

pub fn genus3_four(n: usize, k: usize) -> TautExpression {
    let n_ = n as i64;
    Degree2::new(3, n)
        .sums(&[k], q(35 * (n_ + 4)), q(6 * (n_ + 4)), q(-6 * (n_ + 5)))
        .k2(q(-35 * (n_ + 5)))
        .k11(q(3 * (n_ + 6)))
        .done()
}

pub fn genus3_five(n: usize, k: usize, l: usize) -> TautExpression {
    basic(n, &[k, l])
}

/// The whole printed genus-3 list; labels use 1-based points.
pub fn genus3_relations(n: usize) -> Vec<Fixture> {
    let mut out = vec![fixture("(1)".into(), genus3_one(n))];
    out.extend((0..n).map(|k| fixture(format!("(2)_{}", k + 1), genus3_two(n, k))));
    out.push(fixture("(3)".into(), genus3_three(n)));
    out.extend((0..n).map(|k| fixture(format!("(4)_{}", k + 1), genus3_four(n, k))));
    for k in 0..n {
        for l in k + 1..n {
            out.push(fixture(format!("(5)_{{{},{}}}", k + 1, l + 1), genus3_five(n, k, l)));
        }
    }
    out
}

/// BSZ relations in genus 3 written as `LHS - RHS`, as printed.
pub fn bsz_a(n: usize, k: usize, l: usize) -> TautExpression {
    Degree2::new(3, n).pp(k, l, q(1)).psi2(k, frac(-5, 6)).psi2(l, frac(-5, 6)).done()
}

pub fn bsz_b(n: usize, l: usize) -> TautExpression {
    let mut e = Degree2::new(3, n);
    e.k1p(l, q(1)).psi2(l, frac(-5 * (n as i64 + 5), 6));
    for i in (0..n).filter(|&i| i != l) {
        e.psi2(i, frac(-5, 6));
    }
    e.done()
}

pub fn bsz_c(n: usize) -> TautExpression {
    let mut e = Degree2::new(3, n);
    e.k2(q(1));
    for i in 0..n {
        e.psi2(i, q(-1));
    }
    e.done()
}

pub fn bsz_d(n: usize) -> TautExpression {
    let mut e = Degree2::new(3, n);
    e.k11(q(1));
    for i in 0..n {
        e.psi2(i, frac(-5 * (n as i64 + 5), 3));
    }
    e.done()
}

fn combine(terms: &[(Rational, TautExpression)]) -> TautExpression {
    let mut out = TautExpression::zero();
    for (c, e) in terms {
        out.add_scaled(e, c);
    }
    out
}

/// `(1) + 3/2 (2)_k + 3/2 (2)_l - 4 (5)_{k,l}`.
pub fn combo_a(n: usize, k: usize, l: usize) -> TautExpression {
    combine(&[
        (q(1), genus3_one(n)),
        (frac(3, 2), genus3_two(n, k)),
        (frac(3, 2), genus3_two(n, l)),
        (q(-4), genus3_five(n, k.min(l), k.max(l))),
    ])
}

/// `-(2n+1)/3 (1) - (n-2) (2)_l - Σ_{i≠l} (2)_i + 8/3 Σ_{i≠l} (5)_{l,i}`.
pub fn combo_b(n: usize, l: usize) -> TautExpression {
    let n_ = n as i64;
    let mut terms = vec![(frac(-(2 * n_ + 1), 3), genus3_one(n)), (q(-(n_ - 2)), genus3_two(n, l))];
    for i in (0..n).filter(|&i| i != l) {
        terms.push((q(-1), genus3_two(n, i)));
        terms.push((frac(8, 3), genus3_five(n, i.min(l), i.max(l))));
    }
    combine(&terms)
}

/// `7/4 (1) - 3/16 (3) + 3/16 Σ (2)_i`.
pub fn combo_c(n: usize) -> TautExpression {
    let mut terms = vec![(frac(7, 4), genus3_one(n)), (frac(-3, 16), genus3_three(n))];
    terms.extend((0..n).map(|i| (frac(3, 16), genus3_two(n, i))));
    combine(&terms)
}

/// `-(2n²+4n+33)/3 (1) - (8n-9)/4 Σ (2)_i + 7/4 (3) + 16/3 Σ_{i<j} (5)_{i,j}`.
pub fn combo_d(n: usize) -> TautExpression {
    let n_ = n as i64;
    let mut terms = vec![(frac(-(2 * n_ * n_ + 4 * n_ + 33), 3), genus3_one(n)), (frac(7, 4), genus3_three(n))];
    terms.extend((0..n).map(|i| (frac(-(8 * n_ - 9), 4), genus3_two(n, i))));
    for i in 0..n {
        for j in i + 1..n {
            terms.push((frac(16, 3), genus3_five(n, i, j)));
        }
    }
    combine(&terms)
}

/// `(630 - 77κ_0)κ_2 - (24 + 5κ_0)κ_{1,1} - 77κ_0 Σψ² + (24 + 10κ_0) Σκ_1ψ - 10κ_0 Σψψ`.
pub fn genus4_sigma_one_display(n: usize) -> TautExpression {
    let k0 = n as i64 + 6;
    Degree2::new(4, n)
        .sums(&[], q(-77 * k0), q(-10 * k0), q(24 + 10 * k0))
        .k2(q(630 - 77 * k0))
        .k11(q(-(24 + 5 * k0)))
        .done()
}

/// `77κ_2 - 5κ_{1,1} + 91ψ_k² - 77Σ_{i≠k}ψ_i² - 14κ_1ψ_k + 10Σ_{i≠k}κ_1ψ_i
/// + 14Σ_{i≠k}ψ_kψ_i - 10Σ_{i<j; i,j≠k}ψ_iψ_j`.
pub fn genus4_point_display(n: usize, k: usize) -> TautExpression {
    let mut e = Degree2::new(4, n);
    e.sums(&[k], q(-77), q(-10), q(10)).psi2(k, q(91)).k1p(k, q(-14)).k2(q(77)).k11(q(-5));
    for i in (0..n).filter(|&i| i != k) {
        e.pp(k, i, q(14));
    }
    e.done()
}
