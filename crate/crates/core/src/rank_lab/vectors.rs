//! Vectors in the label space `E` (coordinates `α`, `β_i`, `γ_{ij}`) and the
//! special families used to decompose the rescaled pairing matrix.

use std::fmt;

use num_traits::Zero;

use crate::error::{domain, Result};
use crate::exact::{frac, q, Rational};
use crate::matrix::ExactMatrix;
use crate::socle::{labels, IndexLabel};

/// Position of a label in the canonical order `∅, 1..n, {1,2}, ..., {n-1,n}`.
pub fn label_index(label: IndexLabel, n: usize) -> usize {
    match label {
        IndexLabel::Empty => 0,
        IndexLabel::Point(i) => i,
        IndexLabel::Pair(i, j) => {
            // pairs with first index < i come first
            let before: usize = (1..i).map(|p| n - p).sum();
            1 + n + before + (j - i - 1)
        }
    }
}

/// Number of labels for `n` points.
pub fn label_count(n: usize) -> usize {
    1 + n + n * n.saturating_sub(1) / 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EVector {
    n: usize,
    coords: Vec<Rational>,
}

impl EVector {
    pub fn zero(n: usize) -> Self {
        Self { n, coords: vec![Rational::zero(); label_count(n)] }
    }

    pub fn from_coords(n: usize, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != label_count(n) {
            return domain(format!("expected {} coordinates for n = {n}, got {}", label_count(n), coords.len()));
        }
        Ok(Self { n, coords })
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn get(&self, label: IndexLabel) -> &Rational {
        &self.coords[label_index(label, self.n)]
    }

    pub fn alpha(&self) -> &Rational {
        &self.coords[0]
    }

    pub fn beta(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    /// `γ` for the unordered pair `{i, j}`.
    pub fn gamma(&self, i: usize, j: usize) -> &Rational {
        self.get(pair(i, j))
    }

    pub fn add_at(&mut self, label: IndexLabel, c: Rational) {
        let k = label_index(label, self.n);
        self.coords[k] += c;
    }

    fn add_gamma(&mut self, i: usize, j: usize, c: i64) {
        self.add_at(pair(i, j), q(c));
    }

    fn add_beta(&mut self, i: usize, c: i64) {
        self.add_at(IndexLabel::Point(i), q(c));
    }

    pub fn add_scaled(&mut self, other: &EVector, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (x, y) in self.coords.iter_mut().zip(&other.coords) {
            *x += y * c;
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { n: self.n, coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `(α, Σ β_i, Σ γ_{ij})`.
    pub fn functionals(&self) -> [Rational; 3] {
        let beta = self.coords[1..=self.n].iter().sum();
        let gamma = self.coords[self.n + 1..].iter().sum();
        [self.coords[0].clone(), beta, gamma]
    }

    pub fn apply(&self, m: &ExactMatrix) -> Result<EVector> {
        Ok(Self { n: self.n, coords: m.mul_vec(&self.coords)? })
    }

    /// First coordinate where `self` and `other` differ, with both values.
    pub fn first_difference(&self, other: &EVector) -> Option<(IndexLabel, Rational, Rational)> {
        labels(self.n)
            .into_iter()
            .zip(self.coords.iter().zip(&other.coords))
            .find(|(_, (a, b))| a != b)
            .map(|(l, (a, b))| (l, a.clone(), b.clone()))
    }
}

impl fmt::Display for EVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = labels(self.n)
            .into_iter()
            .zip(&self.coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| format!("{l}: {c}"))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn pair(i: usize, j: usize) -> IndexLabel {
    if i < j {
        IndexLabel::Pair(i, j)
    } else {
        IndexLabel::Pair(j, i)
    }
}

/// `β_i = 1, β_{i+1} = -1`.
pub fn u(n: usize, i: usize) -> EVector {
    let mut v = EVector::zero(n);
    v.add_beta(i, 1);
    v.add_beta(i + 1, -1);
    v
}

/// `γ_{i,k} = 1, γ_{i+1,k} = -1` for every `k ∉ {i, i+1}`.
pub fn v(n: usize, i: usize) -> EVector {
    let mut out = EVector::zero(n);
    for k in (1..=n).filter(|&k| k != i && k != i + 1) {
        out.add_gamma(i, k, 1);
        out.add_gamma(i + 1, k, -1);
    }
    out
}

/// `γ_{ik} = γ_{jl} = 1, γ_{il} = γ_{jk} = -1`.
pub fn w(n: usize, i: usize, j: usize, k: usize, l: usize) -> EVector {
    let mut out = EVector::zero(n);
    out.add_gamma(i, k, 1);
    out.add_gamma(j, l, 1);
    out.add_gamma(i, l, -1);
    out.add_gamma(j, k, -1);
    out
}

/// `β_j = 2, β_k = -2, γ_{ij} = -3, γ_{ik} = 3, γ_{jl} = -5, γ_{kl} = 5`.
pub fn t(n: usize, i: usize, j: usize, k: usize, l: usize) -> EVector {
    let mut out = EVector::zero(n);
    out.add_beta(j, 2);
    out.add_beta(k, -2);
    out.add_gamma(i, j, -3);
    out.add_gamma(i, k, 3);
    out.add_gamma(j, l, -5);
    out.add_gamma(k, l, 5);
    out
}

/// For `n = 8m + 2`: `γ_{3m+1,n} = 1, γ_{3m+2,n} = -1`.
pub fn z(n: usize) -> Result<EVector> {
    if n < 10 || n % 8 != 2 {
        return domain(format!("z is defined for n = 8m + 2 with m ≥ 1, not n = {n}"));
    }
    let m = (n - 2) / 8;
    let mut out = EVector::zero(n);
    out.add_gamma(3 * m + 1, n, 1);
    out.add_gamma(3 * m + 2, n, -1);
    Ok(out)
}

/// `v_i + (1/3) Σ_{p<i} t_{p,i,i+1,n}`: the `γ_{p,i}` and `γ_{p,i+1}` entries
/// of `v_i` with `p < i` cancel, leaving `γ` support on pairs whose smaller
/// index is `i` or `i+1`.
pub fn v_tilde(n: usize, i: usize) -> EVector {
    let mut out = v(n, i);
    for p in 1..i {
        out.add_scaled(&t(n, p, i, i + 1, n), &frac(1, 3));
    }
    out
}

/// `α = 1`.
pub fn a(n: usize) -> EVector {
    let mut out = EVector::zero(n);
    out.add_at(IndexLabel::Empty, q(1));
    out
}

/// `β_1 = 1`.
pub fn b(n: usize) -> EVector {
    let mut out = EVector::zero(n);
    out.add_beta(1, 1);
    out
}

/// `γ_{12} = 1`.
pub fn c(n: usize) -> EVector {
    let mut out = EVector::zero(n);
    out.add_gamma(1, 2, 1);
    out
}
