//! The genus-4 pairing matrices between the degree-2 spanning set and the
//! degree `n+1` test classes times `λ_4 λ_3`.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hodge_pairing;
use crate::error::{domain, Error, Result};
use crate::exact::{frac, q, Rational};
use crate::matrix::ExactMatrix;
use crate::taut::{multi_kappa_expand, MultiKappa, RingContext, TautExpression, TautMonomial};

/// Row and column labels; points are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IndexLabel {
    Empty,
    Point(usize),
    Pair(usize, usize),
}

impl IndexLabel {
    pub fn validate(self, n: usize) -> Result<Self> {
        let ok = match self {
            IndexLabel::Empty => true,
            IndexLabel::Point(i) => (1..=n).contains(&i),
            IndexLabel::Pair(i, j) => 1 <= i && i < j && j <= n,
        };
        if ok {
            Ok(self)
        } else {
            domain(format!("label {self} is not valid for n = {n}"))
        }
    }
}

impl fmt::Display for IndexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexLabel::Empty => write!(f, "{{}}"),
            IndexLabel::Point(i) => write!(f, "{i}"),
            IndexLabel::Pair(i, j) => write!(f, "{{{i},{j}}}"),
        }
    }
}

/// `∅, 1, ..., n, {1,2}, {1,3}, ..., {n-1,n}`.
pub fn labels(n: usize) -> Vec<IndexLabel> {
    let mut out = vec![IndexLabel::Empty];
    out.extend((1..=n).map(IndexLabel::Point));
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(IndexLabel::Pair(i, j));
        }
    }
    out
}

fn genus_four(n: usize) -> Result<RingContext> {
    RingContext::new(4, n)
}

/// Degree-2 class of a row: `κ_{1,1}`, `ψ_i²` or `ψ_i ψ_j`.
pub fn row_class(label: IndexLabel, n: usize) -> Result<TautExpression> {
    let ctx = genus_four(n)?;
    Ok(match label.validate(n)? {
        IndexLabel::Empty => multi_kappa_expand(&MultiKappa::new(vec![1, 1]), &ctx),
        IndexLabel::Point(i) => TautExpression::monomial(TautMonomial::psi(n, i - 1, 2)),
        IndexLabel::Pair(i, j) => {
            let mut psi = vec![0; n];
            psi[i - 1] = 1;
            psi[j - 1] = 1;
            TautExpression::monomial(TautMonomial::new(psi, Vec::new()))
        }
    })
}

/// Degree `n` class of a column (the `λ_4 λ_3` factor is implicit):
/// `∏ψ_i`, `κ_1 ∏_{i≠p} ψ_i`, or `ψ_p² ∏_{i≠p,q} ψ_i` with `p < q`.
pub fn test_class(label: IndexLabel, n: usize) -> Result<TautExpression> {
    let mut psi = vec![1; n];
    let mut kappa = Vec::new();
    match label.validate(n)? {
        IndexLabel::Empty => {}
        IndexLabel::Point(p) => {
            psi[p - 1] = 0;
            kappa.push(1);
        }
        IndexLabel::Pair(p, q) => {
            psi[p - 1] = 2;
            psi[q - 1] = 0;
        }
    }
    Ok(TautExpression::monomial(TautMonomial::new(psi, kappa)))
}

/// `∫ λ_4 λ_3 · row(α) · test(β)` over `M̄_{4,n}`, in units of `∫_{M̄_4} λ_4 λ_3 κ_2`.
pub fn m_entry(alpha: IndexLabel, beta: IndexLabel, n: usize) -> Result<Rational> {
    let product = &row_class(alpha, n)? * &test_class(beta, n)?;
    hodge_pairing(&product, &genus_four(n)?)
}

/// The integer table of the rescaled matrix.
pub fn mhat_entry(alpha: IndexLabel, beta: IndexLabel, n: usize) -> Result<Rational> {
    use IndexLabel::*;
    alpha.validate(n)?;
    beta.validate(n)?;
    let n = n as i64;
    let v = match (alpha, beta) {
        (Empty, Empty) => 5 * (n + 6),
        (Empty, Point(_)) => 5 * n + 34,
        (Empty, Pair(..)) => 5 * (n + 6),
        (Point(_), Empty) => 7,
        (Point(k), Point(p)) => {
            if k == p {
                35
            } else {
                7
            }
        }
        (Point(k), Pair(p, q)) => {
            if k == p {
                3
            } else if k == q {
                35
            } else {
                7
            }
        }
        (Pair(..), Empty) => 5,
        (Pair(k, l), Point(p)) => {
            if p == k || p == l {
                15
            } else {
                5
            }
        }
        (Pair(k, l), Pair(p, q)) => {
            let shares_p = k == p || l == p;
            let shares_q = k == q || l == q;
            match (shares_p, shares_q) {
                (true, true) => 9,
                (true, false) => 3,
                (false, true) => 15,
                (false, false) => 5,
            }
        }
    };
    Ok(q(v))
}

/// Row rescaling taking the pairing matrix to the integer table.
pub fn row_scale(label: IndexLabel, n: usize) -> Rational {
    match label {
        IndexLabel::Empty => frac(1, n as i64 + 7),
        IndexLabel::Point(_) => frac(7, 3),
        IndexLabel::Pair(..) => q(1),
    }
}

/// Column rescaling taking the pairing matrix to the integer table.
pub fn col_scale(label: IndexLabel, n: usize) -> Rational {
    match label {
        IndexLabel::Empty => frac(1, 3),
        IndexLabel::Point(_) => frac(1, n as i64 + 6),
        IndexLabel::Pair(..) => q(1),
    }
}

/// The scalar `s` with `row_scale · M · col_scale = s · M̂`, read off one
/// entry: `({1,2}, ∅)`, or `(∅, ∅)` when `n = 1`.
pub fn global_scalar(n: usize) -> Result<Rational> {
    let (a, b) = if n >= 2 {
        (IndexLabel::Pair(1, 2), IndexLabel::Empty)
    } else {
        (IndexLabel::Empty, IndexLabel::Empty)
    };
    Ok(m_entry(a, b, n)? * row_scale(a, n) * col_scale(b, n) / mhat_entry(a, b, n)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingMatrix {
    pub n: usize,
    pub labels: Vec<IndexLabel>,
    pub entries: ExactMatrix,
}

/// Serializable form with exact entries written as `p/q` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub n: usize,
    pub labels: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

impl PairingMatrix {
    fn from_entries(n: usize, f: impl Fn(IndexLabel, IndexLabel) -> Result<Rational> + Sync) -> Result<Self> {
        let labels = labels(n);
        let size = labels.len();
        let cells: Vec<Rational> = (0..size * size)
            .into_par_iter()
            .map(|k| f(labels[k / size], labels[k % size]))
            .collect::<Result<_>>()?;
        let entries = ExactMatrix::from_fn(size, size, |i, j| cells[i * size + j].clone());
        Ok(Self { n, labels, entries })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels.iter().map(ToString::to_string).collect()
    }

    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord {
            n: self.n,
            labels: self.label_strings(),
            entries: self
                .entries
                .to_rows()
                .into_iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    /// CSV with a header row of column labels; labels containing commas are quoted.
    pub fn to_csv(&self) -> String {
        let quoted: Vec<String> = self
            .label_strings()
            .into_iter()
            .map(|l| if l.contains(',') { format!("\"{l}\"") } else { l })
            .collect();
        self.entries.to_csv(&quoted, &quoted)
    }
}

/// `M` from [`m_entry`] and `M̂` from [`mhat_entry`], after checking that the
/// rescaled `M` is exactly `global_scalar(n) · M̂`.
pub fn build_matrices(n: usize) -> Result<(PairingMatrix, PairingMatrix)> {
    if n == 0 {
        return domain("pairing matrices need n ≥ 1");
    }
    let m = PairingMatrix::from_entries(n, |a, b| m_entry(a, b, n))?;
    let mhat = PairingMatrix::from_entries(n, |a, b| mhat_entry(a, b, n))?;
    let s = global_scalar(n)?;
    for (i, &a) in m.labels.iter().enumerate() {
        for (j, &b) in m.labels.iter().enumerate() {
            let scaled = m.entries.get(i, j) * row_scale(a, n) * col_scale(b, n);
            let expected = &s * mhat.entries.get(i, j);
            if scaled != expected {
                return Err(Error::Inconsistent(format!(
                    "n = {n}, entry ({a}, {b}): rescaled pairing {scaled} but table gives {expected}"
                )));
            }
        }
    }
    debug_assert!(!s.is_zero());
    Ok((m, mhat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::factorial;

    #[test]
    fn label_order() {
        let l: Vec<String> = labels(3).iter().map(ToString::to_string).collect();
        assert_eq!(l, ["{}", "1", "2", "3", "{1,2}", "{1,3}", "{2,3}"]);
        assert!(IndexLabel::Pair(2, 1).validate(3).is_err());
        assert!(IndexLabel::Point(4).validate(3).is_err());
    }

    #[test]
    fn displayed_entries() {
        for n in 2..8usize {
            let f = |k| Rational::from_integer(factorial(k));
            let unit = q(16 * 81 * 5);
            assert_eq!(m_entry(IndexLabel::Empty, IndexLabel::Empty, n).unwrap(), f(n as u32 + 7) / q(16 * 27));
            assert_eq!(
                m_entry(IndexLabel::Empty, IndexLabel::Point(1), n).unwrap(),
                q(5 * n as i64 + 34) * f(n as u32 + 7) / unit
            );
            assert_eq!(
                m_entry(IndexLabel::Point(1), IndexLabel::Pair(1, 2), n).unwrap(),
                f(n as u32 + 5) / q(16 * 9 * 5 * 7)
            );
        }
    }

    #[test]
    fn scalar_and_proportionality() {
        for n in 1..=8usize {
            let expected = Rational::from_integer(factorial(n as u32 + 5)) / q(16 * 81 * 5);
            assert_eq!(global_scalar(n).unwrap(), expected);
            let (m, mhat) = build_matrices(n).unwrap();
            assert_eq!(m.size(), 1 + n + n * (n - 1) / 2);
            assert_eq!(m.entries.rank(), mhat.entries.rank());
        }
        let (_, mhat) = build_matrices(1).unwrap();
        assert_eq!(mhat.entries.to_rows(), vec![vec![q(35), q(39)], vec![q(7), q(35)]]);
    }
}
