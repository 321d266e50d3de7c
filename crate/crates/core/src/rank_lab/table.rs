//! Ranks `r_g^d(n)` of `R^d(M_{g,n})` for `g ≤ 4`, each certified by a
//! matching upper bound (relations) and lower bound (a nondegenerate pairing).

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::genus3::relation_matrix;
use super::genus4::mhat_matrix;
use crate::error::{domain, Result};
use crate::exact::Rational;
use crate::matrix::ExactMatrix;
use crate::pixton::all_relations;
use crate::socle::{build_matrices, socle_express_general};
use crate::taut::{monomial_basis, RingContext, TautExpression, TautMonomial};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeRank {
    pub d: u32,
    /// Number of monomials in degree `d`.
    pub dim: usize,
    /// `dim` minus the rank of the known relations.
    pub upper: usize,
    /// Rank of a pairing into the socle or against `λ_g λ_{g-1}` test classes.
    pub lower: usize,
}

impl DegreeRank {
    pub fn rank(&self) -> Option<usize> {
        (self.upper == self.lower).then_some(self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankTable {
    pub g: u32,
    pub n: usize,
    pub degrees: Vec<DegreeRank>,
}

impl RankTable {
    /// Certified ranks for `d = 0..g-1`; `None` where the bounds differ.
    pub fn ranks(&self) -> Vec<Option<usize>> {
        self.degrees.iter().map(DegreeRank::rank).collect()
    }

    /// CSV rows `g,n,d,rank` (empty rank where uncertified).
    pub fn to_csv_rows(&self) -> Vec<String> {
        self.degrees
            .iter()
            .map(|r| {
                let rank = r.rank().map(|x| x.to_string()).unwrap_or_default();
                format!("{},{},{},{}", self.g, self.n, r.d, rank)
            })
            .collect()
    }
}

/// The closed-form values: `(1)`, `(1, n)`, `(1, n+1, n)`, `(1, n+1, n(n+1)/2+1, n)`.
pub fn expected_ranks(g: u32, n: usize) -> Vec<usize> {
    match g {
        1 => vec![1],
        2 => vec![1, n],
        3 => vec![1, n + 1, n],
        _ => vec![1, n + 1, n * (n + 1) / 2 + 1, n],
    }
}

/// `X - Σ socle(X)_i ψ_i^{g-1}` for every top-degree monomial `X`.
fn bsz_relations(ctx: &RingContext, basis: &[TautMonomial]) -> Result<Vec<TautExpression>> {
    let g = ctx.genus();
    basis
        .par_iter()
        .map(|m| {
            let mut rel = TautExpression::monomial(m.clone());
            let image = socle_express_general(&rel, ctx)?;
            for (i, c) in image.coeffs().iter().enumerate() {
                rel.add_term(TautMonomial::psi(ctx.points(), i, g - 1), -c.clone());
            }
            Ok(rel)
        })
        .collect()
}

/// Rank of `X ↦ (Y ↦ socle(XY))` from degree `d` to the dual of degree `g-1-d`.
fn socle_pairing_rank(ctx: &RingContext, d: u32) -> Result<usize> {
    let g = ctx.genus();
    let rows = monomial_basis(ctx, d);
    let cols = monomial_basis(ctx, g - 1 - d);
    let entries: Vec<Vec<Rational>> = rows
        .par_iter()
        .map(|x| {
            let mut row = Vec::with_capacity(cols.len() * ctx.points());
            for y in &cols {
                let image = socle_express_general(&TautExpression::monomial(x * y), ctx)?;
                row.extend(image.coeffs().iter().cloned());
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(ExactMatrix::from_rows(entries)?.rank())
}

fn degree_rank(ctx: &RingContext, d: u32) -> Result<DegreeRank> {
    let g = ctx.genus();
    let n = ctx.points();
    let basis = monomial_basis(ctx, d);
    let dim = basis.len();
    if d == 0 {
        return Ok(DegreeRank { d, dim, upper: 1, lower: 1 });
    }
    // In genus 4 the top degree is handled by the socle formula; elsewhere
    // Pixton's relations are used as generated.
    let relations = if g == 4 && d == g - 1 {
        bsz_relations(ctx, &basis)?
    } else {
        all_relations(ctx, d)?.into_iter().map(|(_, r)| r).collect()
    };
    let upper = dim - relation_matrix(&relations, &basis)?.rank();
    let mut lower = socle_pairing_rank(ctx, d)?;
    if g == 4 && d == 2 && lower < upper {
        // the λ_4 λ_3 pairing: M is a diagonal rescaling of M̂
        let full = if n <= 8 {
            build_matrices(n)?.0.entries.rank()
        } else if !mhat_matrix(n)?.determinant()?.is_zero() {
            super::vectors::label_count(n)
        } else {
            0
        };
        lower = lower.max(full);
    }
    Ok(DegreeRank { d, dim, upper, lower })
}

pub fn rank_table(g: u32, n: usize) -> Result<RankTable> {
    if !(1..=4).contains(&g) {
        return domain(format!("rank_table covers 1 ≤ g ≤ 4, got g = {g}"));
    }
    let ctx = RingContext::new(g, n)?;
    let degrees = (0..g).map(|d| degree_rank(&ctx, d)).collect::<Result<_>>()?;
    Ok(RankTable { g, n, degrees })
}
