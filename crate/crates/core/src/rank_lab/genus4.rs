//! Degree 2 in genus 4: the upper-bound system from Pixton's relations and
//! the eigenstructure of the rescaled pairing matrix `M̂` that certifies the
//! lower bound.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::vectors::{self, EVector};
use super::Verdict;
use crate::error::{domain, Error, Result};
use crate::exact::{factorial, frac, pow_signed, q, Rational};
use crate::matrix::ExactMatrix;
use crate::pixton::{all_relations, pixton_relation, RelationParams};
use crate::socle::{labels, mhat_entry};
use crate::taut::{to_multi_form, MultiForm, RingContext, TautMonomial};

/// `M̂` as a matrix acting on column vectors in label order.
pub fn mhat_matrix(n: usize) -> Result<ExactMatrix> {
    if n == 0 {
        return domain("the pairing matrix needs n ≥ 1");
    }
    let labels = labels(n);
    let size = labels.len();
    let cells: Vec<Rational> = (0..size * size)
        .into_par_iter()
        .map(|k| mhat_entry(labels[k / size], labels[k % size], n))
        .collect::<Result<_>>()?;
    Ok(ExactMatrix::from_fn(size, size, |i, j| cells[i * size + j].clone()))
}

/// Coefficients of `x` on `basis`, if `x` lies in their span.
fn coefficients_on(x: &EVector, basis: &[&EVector]) -> Result<Option<Vec<Rational>>> {
    let cols = ExactMatrix::from_fn(x.coords().len(), basis.len(), |r, c| basis[c].coords()[r].clone());
    cols.solve_any(x.coords())
}

fn combination(n: usize, terms: &[(Rational, &EVector)]) -> EVector {
    let mut out = EVector::zero(n);
    for (c, v) in terms {
        out.add_scaled(v, c);
    }
    out
}

/// `None` if equal, else the first differing coordinate.
fn mismatch(what: &str, actual: &EVector, expected: &EVector) -> Option<String> {
    actual
        .first_difference(expected)
        .map(|(l, a, e)| format!("{what}: coordinate {l} is {a}, expected {e}"))
}

fn plus_four(m: &ExactMatrix, x: &EVector) -> Result<EVector> {
    let mut out = x.apply(m)?;
    out.add_scaled(x, &q(4));
    Ok(out)
}

pub fn stable_plane_check(n: usize, i: usize) -> Result<Verdict> {
    stable_plane_check_with(&mhat_matrix(n)?, n, i)
}

/// `M̂u_i = 28u_i + 10v_i`, `M̂v_i = (32i-24-4n)u_i + (12i-12-2n)v_i`, and the
/// plane block (solved for, not assumed) has determinant `-16(n-i+6)`.
pub fn stable_plane_check_with(mhat: &ExactMatrix, n: usize, i: usize) -> Result<Verdict> {
    if n < 2 || i == 0 || i >= n {
        return domain(format!("stable planes need n ≥ 2 and 1 ≤ i ≤ n-1, got n = {n}, i = {i}"));
    }
    let params = format!("n={n} i={i}");
    let (u, v) = (vectors::u(n, i), vectors::v(n, i));
    let (ni, ii) = (n as i64, i as i64);
    let mu = u.apply(mhat)?;
    let mut problems = Vec::new();
    problems.extend(mismatch("M̂u", &mu, &combination(n, &[(q(28), &u), (q(10), &v)])));
    if v.is_zero() {
        let ok = problems.is_empty();
        let details = if ok { "v_i = 0; M̂u_i = 28u_i".to_string() } else { problems.join("; ") };
        return Ok(Verdict::new("stable_plane", params, ok, details));
    }
    let mv = v.apply(mhat)?;
    let expected_mv = combination(n, &[(q(32 * ii - 24 - 4 * ni), &u), (q(12 * ii - 12 - 2 * ni), &v)]);
    problems.extend(mismatch("M̂v", &mv, &expected_mv));

    let cu = coefficients_on(&mu, &[&u, &v])?;
    let cv = coefficients_on(&mv, &[&u, &v])?;
    let expected_det = q(-16 * (ni - ii + 6));
    let det = match (cu, cv) {
        (Some(a), Some(b)) => {
            let block = ExactMatrix::from_rows(vec![vec![a[0].clone(), b[0].clone()], vec![a[1].clone(), b[1].clone()]])?;
            Some(block.determinant()?)
        }
        _ => {
            problems.push("plane not invariant".into());
            None
        }
    };
    if let Some(d) = &det {
        if *d != expected_det {
            problems.push(format!("block determinant {d}, expected {expected_det}"));
        }
    }
    let ok = problems.is_empty();
    let details = if ok { format!("block det {expected_det}") } else { problems.join("; ") };
    Ok(Verdict::new("stable_plane", params, ok, details))
}

pub fn eigenvector_check(n: usize, idx: [usize; 4]) -> Result<Verdict> {
    eigenvector_check_with(&mhat_matrix(n)?, n, idx)
}

/// `M̂w_{ijkl} = -4w_{ijkl}` and `M̂t_{ijkl} = -4t_{ijkl}`.
pub fn eigenvector_check_with(mhat: &ExactMatrix, n: usize, idx: [usize; 4]) -> Result<Verdict> {
    let [i, j, k, l] = idx;
    if !(1 <= i && i < j && j < k && k < l && l <= n) {
        return domain(format!("need 1 ≤ i < j < k < l ≤ n, got {idx:?} with n = {n}"));
    }
    let params = format!("n={n} ijkl={i},{j},{k},{l}");
    let mut problems = Vec::new();
    for (name, x) in [("w", vectors::w(n, i, j, k, l)), ("t", vectors::t(n, i, j, k, l))] {
        problems.extend(mismatch(&format!("M̂{name}"), &x.apply(mhat)?, &x.scale(&q(-4))));
    }
    let ok = problems.is_empty();
    Ok(Verdict::new("eigenvector", params, ok, if ok { "eigenvalue -4".into() } else { problems.join("; ") }))
}

/// Outcome of the `n = 8m + 2` analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalReport {
    pub n: usize,
    pub m: usize,
    /// `2m u_{3m+1} - v_{3m+1}`.
    pub eigen_u: EVector,
    pub eigen_u_holds: bool,
    /// `(M̂+4)z = -4u_{3m+1} - 2v_{3m+1}`.
    pub z_image_holds: bool,
    /// The unique `δ` with `(M̂+4)²(z + δu_{3m+1}) = 0`, if any.
    pub delta: Option<Rational>,
    pub paper_delta: Rational,
    pub paper_delta_annihilates: bool,
    /// `(M̂+4)(z + δu) ≠ 0`.
    pub not_eigenvector: bool,
    /// `(M̂+4)(z + δu)` is a multiple of `U`.
    pub image_along_u: bool,
}

impl ExceptionalReport {
    /// The structural claims: a `U` eigenvector and a Jordan partner for it.
    pub fn ok(&self) -> bool {
        self.eigen_u_holds && self.delta.is_some() && self.not_eigenvector && self.image_along_u
    }
}

pub fn exceptional_analysis(n: usize) -> Result<ExceptionalReport> {
    exceptional_analysis_with(&mhat_matrix(n)?, n)
}

pub fn exceptional_analysis_with(mhat: &ExactMatrix, n: usize) -> Result<ExceptionalReport> {
    let z = vectors::z(n)?;
    let m = (n - 2) / 8;
    let (u, v) = (vectors::u(n, 3 * m + 1), vectors::v(n, 3 * m + 1));
    let eigen_u = combination(n, &[(q(2 * m as i64), &u), (q(-1), &v)]);
    let eigen_u_holds = eigen_u.apply(mhat)? == eigen_u.scale(&q(-4));

    let z_image = plus_four(mhat, &z)?;
    let z_image_holds = z_image == combination(n, &[(q(-4), &u), (q(-2), &v)]);

    // (M̂+4)²(z + δu) = A + δB
    let a = plus_four(mhat, &z_image)?;
    let b = plus_four(mhat, &plus_four(mhat, &u)?)?;
    let neg_a: Vec<Rational> = a.coords().iter().map(|x| -x).collect();
    let column = ExactMatrix::from_fn(b.coords().len(), 1, |r, _| b.coords()[r].clone());
    let delta = if b.is_zero() { None } else { column.solve_any(&neg_a)?.map(|x| x[0].clone()) };

    let paper_delta = frac(m as i64, 5 * m as i64 + 7);
    let mut shifted = z.clone();
    shifted.add_scaled(&u, &paper_delta);
    let paper_delta_annihilates = plus_four(mhat, &plus_four(mhat, &shifted)?)?.is_zero();

    let (not_eigenvector, image_along_u) = match &delta {
        Some(d) => {
            let mut zz = z.clone();
            zz.add_scaled(&u, d);
            let image = plus_four(mhat, &zz)?;
            let along = coefficients_on(&image, &[&eigen_u])?.is_some();
            (!image.is_zero(), along)
        }
        None => (false, false),
    };
    Ok(ExceptionalReport {
        n,
        m,
        eigen_u,
        eigen_u_holds,
        z_image_holds,
        delta,
        paper_delta,
        paper_delta_annihilates,
        not_eigenvector,
        image_along_u,
    })
}

/// Named members of the spanning family; points are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    U(usize),
    V(usize),
    VTilde(usize),
    W(usize, usize, usize, usize),
    T(usize, usize, usize, usize),
    Z,
}

impl Generator {
    pub fn vector(self, n: usize) -> Result<EVector> {
        Ok(match self {
            Generator::U(i) => vectors::u(n, i),
            Generator::V(i) => vectors::v(n, i),
            Generator::VTilde(i) => vectors::v_tilde(n, i),
            Generator::W(i, j, k, l) => vectors::w(n, i, j, k, l),
            Generator::T(i, j, k, l) => vectors::t(n, i, j, k, l),
            Generator::Z => vectors::z(n)?,
        })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::U(i) => write!(f, "u_{i}"),
            Generator::V(i) => write!(f, "v_{i}"),
            Generator::VTilde(i) => write!(f, "vt_{i}"),
            Generator::W(i, j, k, l) => write!(f, "w_{{{i},{j},{k},{l}}}"),
            Generator::T(i, j, k, l) => write!(f, "t_{{{i},{j},{k},{l}}}"),
            Generator::Z => write!(f, "z"),
        }
    }
}

fn is_exceptional(n: usize) -> bool {
    n >= 10 && n % 8 == 2
}

/// `u_i, v_i, w_{i,i+1,k,l}, t_{i,i+1,i+2,i+3}, ṽ_i`, plus `z` if asked and defined.
pub fn span_family(n: usize, with_z: bool) -> Vec<Generator> {
    let mut out = Vec::new();
    out.extend((1..n).map(Generator::U));
    out.extend((1..n).map(Generator::V));
    for i in 1..n {
        for k in i + 2..=n {
            for l in k + 1..=n {
                out.push(Generator::W(i, i + 1, k, l));
            }
        }
    }
    out.extend((1..=n.saturating_sub(3)).map(|i| Generator::T(i, i + 1, i + 2, i + 3)));
    out.extend((1..=n.saturating_sub(2)).map(Generator::VTilde));
    if with_z && is_exceptional(n) {
        out.push(Generator::Z);
    }
    out
}

fn family_rank(n: usize, family: &[Generator]) -> Result<usize> {
    if family.is_empty() {
        return Ok(0);
    }
    let rows = family.iter().map(|g| Ok(g.vector(n)?.coords().to_vec())).collect::<Result<Vec<_>>>()?;
    Ok(ExactMatrix::from_rows(rows)?.rank())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub n: usize,
    /// `N`, the number of labels.
    pub labels: usize,
    pub rank: usize,
    /// Rank without `z`, recorded only when `z` is defined.
    pub rank_without_z: Option<usize>,
}

impl SpanReport {
    pub fn ok(&self) -> bool {
        self.rank + 3 == self.labels
    }
}

pub fn span_rank(n: usize) -> Result<SpanReport> {
    if n < 2 {
        return domain(format!("span_rank needs n ≥ 2, got {n}"));
    }
    let rank = family_rank(n, &span_family(n, true))?;
    let rank_without_z = if is_exceptional(n) { Some(family_rank(n, &span_family(n, false))?) } else { None };
    Ok(SpanReport { n, labels: vectors::label_count(n), rank, rank_without_z })
}

/// `s = Σ c · generator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub n: usize,
    pub terms: Vec<(Generator, Rational)>,
}

impl Decomposition {
    pub fn resum(&self) -> Result<EVector> {
        let mut out = EVector::zero(self.n);
        for (g, c) in &self.terms {
            out.add_scaled(&g.vector(self.n)?, c);
        }
        Ok(out)
    }
}

/// Writes `s` over the spanning family by the constructive sweep: clear the
/// `γ` coordinates row by row, then the `β` coordinates with the `u_i`.
pub fn decompose_in_span(s: &EVector) -> Result<Decomposition> {
    let n = s.points();
    let [alpha, beta, gamma] = s.functionals();
    if !alpha.is_zero() || !beta.is_zero() || !gamma.is_zero() {
        return Err(Error::Infeasible(format!(
            "α = {alpha}, Σβ = {beta}, Σγ = {gamma}; all three must vanish"
        )));
    }
    let mut r = s.clone();
    let mut terms: Vec<(Generator, Rational)> = Vec::new();
    let mut push = |r: &mut EVector, g: Generator, lambda: Rational| -> Result<()> {
        if !lambda.is_zero() {
            r.add_scaled(&g.vector(n)?, &lambda);
            terms.push((g, -lambda));
        }
        Ok(())
    };

    if n >= 3 {
        // column n sums to zero from here on
        let col: Rational = (1..n).map(|i| r.gamma(i, n).clone()).sum();
        push(&mut r, Generator::V(n - 1), col / q(n as i64 - 2))?;

        for i in 1..=n.saturating_sub(3) {
            let lambda = r.gamma(i, i + 1) / q(3);
            push(&mut r, Generator::T(i, i + 1, i + 2, i + 3), lambda)?;

            let row: Rational = (i + 1..=n).map(|j| r.gamma(i, j).clone()).sum();
            let slope = 3 * n as i64 + 2 - 8 * i as i64;
            if slope == 0 {
                push(&mut r, Generator::Z, -row)?;
            } else {
                push(&mut r, Generator::VTilde(i), -row * frac(3, slope))?;
            }
            for j in i + 2..n {
                let lambda = -r.gamma(i, j).clone();
                push(&mut r, Generator::W(i, i + 1, j, n), lambda)?;
            }
        }

        let slope = 3 * n as i64 + 2 - 8 * (n as i64 - 2);
        let lambda = -r.gamma(n - 2, n).clone() * frac(3, slope);
        push(&mut r, Generator::VTilde(n - 2), lambda)?;
    }
    for i in 1..n {
        let lambda = -r.beta(i).clone();
        push(&mut r, Generator::U(i), lambda)?;
    }
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!("sweep left residual {r} for n = {n}")));
    }
    Ok(Decomposition { n, terms })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementReport {
    pub n: usize,
    /// Column `j`: the functionals `(α, Σβ, Σγ)` of `M̂` applied to `a`, `b`, `c`.
    pub block: ExactMatrix,
    pub displayed: ExactMatrix,
    pub det: Rational,
    pub expected_det: Rational,
}

impl ComplementReport {
    pub fn ok(&self) -> bool {
        self.block == self.displayed && self.det == self.expected_det
    }
}

pub fn displayed_complement(n: usize) -> ExactMatrix {
    let n_ = n as i64;
    let rows = vec![
        vec![q(5 * (n_ + 6)), q(5 * n_ + 34), q(5 * (n_ + 6))],
        vec![q(7 * n_), q(7 * n_ + 28), q(7 * n_ + 24)],
        vec![
            frac(5 * n_ * (n_ - 1), 2),
            frac(5 * (n_ - 1) * (n_ + 4), 2),
            frac(5 * n_ * n_ + 11 * n_ - 24, 2),
        ],
    ];
    ExactMatrix::from_rows(rows).expect("3x3")
}

pub fn complement_block(n: usize) -> Result<ComplementReport> {
    complement_block_with(&mhat_matrix(n)?, n)
}

pub fn complement_block_with(mhat: &ExactMatrix, n: usize) -> Result<ComplementReport> {
    if n < 2 {
        return domain(format!("complement_block needs n ≥ 2, got {n}"));
    }
    let images = [vectors::a(n), vectors::b(n), vectors::c(n)]
        .iter()
        .map(|x| Ok(x.apply(mhat)?.functionals()))
        .collect::<Result<Vec<_>>>()?;
    let block = ExactMatrix::from_fn(3, 3, |r, c| images[c][r].clone());
    let det = block.determinant()?;
    let n_ = n as i64;
    Ok(ComplementReport { n, block, displayed: displayed_complement(n), det, expected_det: q(-32 * (n_ + 6) * (2 * n_ + 15)) })
}

/// `(-1)^{n(n-1)/2} 2^{n²+n+1} (2n+15) (n+6)! / 6!`.
pub fn det_closed_form(n: usize) -> Rational {
    let n_ = n as u32;
    let sign = if (n * (n.saturating_sub(1)) / 2) % 2 == 0 { 1 } else { -1 };
    let power = BigInt::from(2).pow(n_ * n_ + n_ + 1);
    let value = power * (2 * n_ + 15) * factorial(n_ + 6) / factorial(6) * sign;
    Rational::from_integer(value)
}

/// `∏_{i<n} (-16(n-i+6)) · (-4)^{n(n-3)/2} · (-32)(n+6)(2n+15)`; the middle
/// exponent is negative for `n = 1, 2`.
pub fn det_product_form(n: usize) -> Rational {
    let n_ = n as i64;
    let planes: Rational = (1..n_).map(|i| q(-16 * (n_ - i + 6))).product();
    let eigen = pow_signed(&q(-4), n_ * (n_ - 3) / 2);
    planes * eigen * q(-32 * (n_ + 6) * (2 * n_ + 15))
}

pub fn verify_det(n: usize) -> Result<Verdict> {
    let det = mhat_matrix(n)?.determinant()?;
    let closed = det_closed_form(n);
    let ok = det == closed;
    let details = if ok { format!("det = {det}") } else { format!("det = {det}, closed form = {closed}") };
    Ok(Verdict::new("det", format!("n={n}"), ok, details))
}

/// `κ_2` and `κ_1ψ_i` (multi-index form) written over `κ_{1,1}` and the
/// `ψ` monomials, from `σ = {1}` and the `a_k = 1` relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperBound {
    pub n: usize,
    /// Rows: `σ = {1}`, then `a_k = 1` for `k = 1..n`; columns `κ_2, κ_1ψ_1, ..., κ_1ψ_n`.
    pub system: ExactMatrix,
    pub det: Rational,
    pub expressions: Vec<(TautMonomial, MultiForm)>,
}

impl UpperBound {
    /// The `κ_2` entry of the `σ = {1}` row printed in the matrix display.
    pub fn displayed_sigma_one_kappa2(&self) -> Rational {
        q(1092 + 77 * self.n as i64)
    }
}

fn upper_targets(n: usize) -> Vec<TautMonomial> {
    let mut out = vec![TautMonomial::new(vec![0; n], vec![2])];
    for i in 0..n {
        let mut psi = vec![0; n];
        psi[i] = 1;
        out.push(TautMonomial::new(psi, vec![1]));
    }
    out
}

/// Every degree-2 multi-form monomial that is not a target.
fn upper_others(n: usize) -> Vec<TautMonomial> {
    let mut out = vec![TautMonomial::new(vec![0; n], vec![1, 1])];
    for i in 0..n {
        for j in i..n {
            let mut psi = vec![0; n];
            psi[i] += 1;
            psi[j] += 1;
            out.push(TautMonomial::new(psi, vec![]));
        }
    }
    out
}

fn multi_coefficient(form: &MultiForm, m: &TautMonomial) -> Rational {
    form.iter().find(|(k, _)| *k == m).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
}

pub fn upper_bound_solve(n: usize) -> Result<UpperBound> {
    let ctx = RingContext::new(4, n)?;
    let mut params = vec![RelationParams::new(ctx, 2, vec![1], vec![0; n])?];
    for k in 0..n {
        params.push(RelationParams::with_points(ctx, 2, vec![], &[(k, 1)])?);
    }
    let rows: Vec<MultiForm> = params
        .par_iter()
        .map(|p| Ok(to_multi_form(&pixton_relation(p)?)))
        .collect::<Result<_>>()?;
    let targets = upper_targets(n);
    let others = upper_others(n);
    for r in &rows {
        if let Some((m, _)) = r.iter().find(|(m, _)| !targets.contains(m) && !others.contains(m)) {
            return Err(Error::Inconsistent(format!("unexpected monomial {m} in a degree-2 relation")));
        }
    }
    let system = ExactMatrix::from_fn(n + 1, n + 1, |r, c| multi_coefficient(&rows[r], &targets[c]));
    let det = system.determinant()?;
    if det.is_zero() {
        return Err(Error::Singular(format!("upper-bound system is singular at n = {n}")));
    }
    let mut columns = Vec::with_capacity(others.len());
    for o in &others {
        let rhs: Vec<Rational> = rows.iter().map(|r| -multi_coefficient(r, o)).collect();
        columns.push(system.solve(&rhs)?);
    }
    let expressions = targets
        .iter()
        .enumerate()
        .map(|(t, m)| {
            let form = MultiForm::from_terms(others.iter().zip(&columns).map(|(o, col)| (o.clone(), col[t].clone())));
            (m.clone(), form)
        })
        .collect();
    Ok(UpperBound { n, system, det, expressions })
}

/// `(-24)^{n-1} · (-1008) · (2n+15)`: the system's determinant once the
/// `σ = {1}` row is scaled so its `κ_2` entry is `168 + 77κ_0`.
pub fn upper_bound_det_formula(n: usize) -> Rational {
    pow_signed(&q(-24), n as i64 - 1) * q(-1008) * q(2 * n as i64 + 15)
}

/// Substitutes the upper-bound expressions into every degree-2 relation in
/// genus 4; returns how many reduced to zero, or the first that did not.
pub fn upper_bound_consistency(bound: &UpperBound) -> Result<usize> {
    let ctx = RingContext::new(4, bound.n)?;
    let relations = all_relations(&ctx, 2)?;
    for (p, r) in &relations {
        let form = to_multi_form(r);
        let mut reduced: Vec<(TautMonomial, Rational)> = Vec::new();
        for (m, c) in form.iter() {
            match bound.expressions.iter().find(|(t, _)| t == m) {
                Some((_, e)) => reduced.extend(e.iter().map(|(o, d)| (o.clone(), d * c))),
                None => reduced.push((m.clone(), c.clone())),
            }
        }
        let rest = MultiForm::from_terms(reduced);
        if rest.iter().next().is_some() {
            return Err(Error::Inconsistent(format!(
                "relation sigma={:?} a={:?} leaves {rest} after substitution",
                p.sigma, p.a
            )));
        }
    }
    Ok(relations.len())
}
