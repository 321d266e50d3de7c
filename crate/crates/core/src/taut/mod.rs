//! The graded algebra generated by `ψ_1..ψ_n` and single-index `κ_k` on `M_{g,n}`.
//!
//! Expressions are stored in one normal form: monomials in `ψ_i` and
//! positive-index `κ_k`. Multi-index classes `κ_{e_1,...,e_l}` exist only as
//! [`MultiKappa`] values, converted in and out with
//! [`multi_kappa_expand`] and [`single_to_multi`]. `κ_0` never appears; it is
//! replaced by the scalar `2g - 2 + n` during expansion.

mod kappa;
mod text;

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exact::{q, Rational};

pub use kappa::{multi_kappa_expand, single_to_multi, to_multi_form, MultiForm, MultiKappa};
pub use text::parse_expression;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingContext {
    g: u32,
    n: usize,
}

impl RingContext {
    pub fn new(g: u32, n: usize) -> Result<Self> {
        if g == 0 {
            return domain("genus must be at least 1");
        }
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            return domain(format!("unstable pair (g, n) = ({g}, {n}): need 2g - 2 + n > 0"));
        }
        Ok(Self { g, n })
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn points(&self) -> usize {
        self.n
    }

    /// The value of `κ_0`.
    pub fn kappa_zero(&self) -> Rational {
        q(2 * self.g as i64 - 2 + self.n as i64)
    }

    /// Degree of the socle `R^{g-1}`.
    pub fn socle_degree(&self) -> u32 {
        self.g - 1
    }
}

/// `∏ ψ_i^{psi[i]} · ∏ κ_k` where `kappa` lists the positive κ indices with
/// repetition, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TautMonomial {
    psi: Vec<u32>,
    kappa: Vec<u32>,
}

impl TautMonomial {
    pub fn one(n: usize) -> Self {
        Self { psi: vec![0; n], kappa: Vec::new() }
    }

    /// Panics if a κ index is zero.
    pub fn new(psi: Vec<u32>, mut kappa: Vec<u32>) -> Self {
        assert!(kappa.iter().all(|&k| k > 0), "κ_0 must be substituted, not stored");
        kappa.sort_unstable_by(|a, b| b.cmp(a));
        Self { psi, kappa }
    }

    pub fn psi(n: usize, i: usize, power: u32) -> Self {
        let mut psi = vec![0; n];
        psi[i] = power;
        Self { psi, kappa: Vec::new() }
    }

    pub fn kappa(n: usize, indices: &[u32]) -> Self {
        Self::new(vec![0; n], indices.to_vec())
    }

    pub fn psi_exponents(&self) -> &[u32] {
        &self.psi
    }

    pub fn kappa_indices(&self) -> &[u32] {
        &self.kappa
    }

    pub fn points(&self) -> usize {
        self.psi.len()
    }

    pub fn kappa_multiplicity(&self, k: u32) -> usize {
        self.kappa.iter().filter(|&&x| x == k).count()
    }

    pub fn kappa_weight(&self) -> u32 {
        self.kappa.iter().sum()
    }

    pub fn degree(&self) -> u32 {
        self.psi.iter().sum::<u32>() + self.kappa_weight()
    }

    pub fn with_psi(&self, psi: Vec<u32>) -> Self {
        Self { psi, kappa: self.kappa.clone() }
    }

    fn psi_shape(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.psi.iter().copied().filter(|&e| e > 0).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    fn sort_key(&self) -> (u32, Reverse<u32>, Reverse<&[u32]>, Reverse<Vec<u32>>, Reverse<&[u32]>) {
        (
            self.degree(),
            Reverse(self.kappa_weight()),
            Reverse(&self.kappa),
            Reverse(self.psi_shape()),
            Reverse(&self.psi),
        )
    }
}

impl Mul for &TautMonomial {
    type Output = TautMonomial;

    fn mul(self, rhs: &TautMonomial) -> TautMonomial {
        debug_assert_eq!(self.psi.len(), rhs.psi.len());
        let psi = self.psi.iter().zip(&rhs.psi).map(|(a, b)| a + b).collect();
        let mut kappa = self.kappa.clone();
        kappa.extend_from_slice(&rhs.kappa);
        TautMonomial::new(psi, kappa)
    }
}

/// Canonical order: by degree; within a degree, larger κ weight first, then
/// κ part and ψ shape compared as partitions (larger first), then the ψ
/// exponent vector lexicographically (larger first).
impl Ord for TautMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for TautMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finitely supported linear combination of monomials with no zero
/// coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TautExpression {
    terms: BTreeMap<TautMonomial, Rational>,
}

impl TautExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::term(TautMonomial::one(n), c)
    }

    pub fn term(mono: TautMonomial, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(mono, c);
        e
    }

    pub fn monomial(mono: TautMonomial) -> Self {
        Self::term(mono, Rational::one())
    }

    pub fn add_term(&mut self, mono: TautMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TautExpression, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &TautMonomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical monomial order.
    pub fn iter(&self) -> impl Iterator<Item = (&TautMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn degree_set(&self) -> BTreeSet<u32> {
        self.terms.keys().map(TautMonomial::degree).collect()
    }

    /// `Some(d)` if every term has degree `d`; the zero expression is
    /// homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let ds = self.degree_set();
        if ds.len() == 1 {
            ds.into_iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Coefficient vector against `basis`; errors if a term falls outside it.
    pub fn coordinates(&self, basis: &[TautMonomial]) -> Result<Vec<Rational>> {
        let index: BTreeMap<&TautMonomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut out = vec![Rational::zero(); basis.len()];
        for (m, c) in &self.terms {
            match index.get(m) {
                Some(&i) => out[i] = c.clone(),
                None => return domain(format!("monomial {m} is not in the basis")),
            }
        }
        Ok(out)
    }

    /// Replaces each monomial by its image under `f`, summing the results.
    pub fn substitute(&self, mut f: impl FnMut(&TautMonomial) -> TautExpression) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_scaled(&f(m), c);
        }
        out
    }

    /// Relabels marked points: point `i` becomes point `perm[i]`.
    pub fn permute_points(&self, perm: &[usize]) -> Self {
        self.substitute(|m| {
            let mut psi = vec![0; m.psi.len()];
            for (i, &e) in m.psi.iter().enumerate() {
                psi[perm[i]] = e;
            }
            TautExpression::monomial(m.with_psi(psi))
        })
    }

    /// Clears denominators, divides by the integer content and makes the
    /// first coefficient in canonical order positive.
    pub fn normalized(&self) -> Self {
        let Some(first) = self.terms.values().next() else {
            return Self::zero();
        };
        let den = crate::exact::common_denominator(self.terms.values());
        let nums: Vec<_> = self.terms.values().map(|c| (c * &den).to_integer()).collect();
        let g = crate::exact::content(nums.iter());
        let mut factor = Rational::new(den, g);
        if first < &Rational::zero() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// `Some(c)` with `self = c · other` when such a nonzero `c` exists.
    pub fn proportional_to(&self, other: &TautExpression) -> Option<Rational> {
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let mut ratio: Option<Rational> = None;
        for (m, c) in &self.terms {
            let d = other.terms.get(m)?;
            let r = c / d;
            match &ratio {
                None => ratio = Some(r),
                Some(x) if *x == r => {}
                Some(_) => return None,
            }
        }
        ratio
    }
}

impl Add for TautExpression {
    type Output = TautExpression;
    fn add(mut self, rhs: TautExpression) -> TautExpression {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for TautExpression {
    type Output = TautExpression;
    fn sub(self, rhs: TautExpression) -> TautExpression {
        self + (-rhs)
    }
}

impl Neg for TautExpression {
    type Output = TautExpression;
    fn neg(mut self) -> TautExpression {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for &TautExpression {
    type Output = TautExpression;
    fn mul(self, rhs: &TautExpression) -> TautExpression {
        let mut out = TautExpression::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a * b, ca * cb);
            }
        }
        out
    }
}

impl Mul for TautExpression {
    type Output = TautExpression;
    fn mul(self, rhs: TautExpression) -> TautExpression {
        &self * &rhs
    }
}

impl FromIterator<(TautMonomial, Rational)> for TautExpression {
    fn from_iter<T: IntoIterator<Item = (TautMonomial, Rational)>>(iter: T) -> Self {
        let mut e = Self::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }
}

/// Partitions of `total` into positive parts, largest part first, each part at most `max`.
pub fn partitions(total: u32, max: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(total)).rev() {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All exponent vectors of length `n` with the given total.
pub(crate) fn compositions(total: u32, n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for rest in compositions(total - first, n - 1) {
            let mut v = Vec::with_capacity(n);
            v.push(first);
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// Every degree-`d` monomial in `ψ_1..ψ_n` and single-index κ's, in canonical order.
pub fn monomial_basis(ctx: &RingContext, d: u32) -> Vec<TautMonomial> {
    let mut out = Vec::new();
    for w in 0..=d {
        for kappa in partitions(w, w) {
            for psi in compositions(d - w, ctx.points()) {
                out.push(TautMonomial::new(psi, kappa.clone()));
            }
        }
    }
    out.sort();
    out
}
