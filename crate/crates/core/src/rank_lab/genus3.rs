//! Degree-2 relations in genus 3: completeness of Pixton's relations and the
//! BSZ relations written in their span.

use rayon::prelude::*;
use serde::Serialize;

use super::fixtures::{self, Fixture};
use crate::error::Result;
use crate::exact::Rational;
use crate::matrix::ExactMatrix;
use crate::pixton::{all_relations, RelationParams};
use crate::socle::socle_express_general;
use crate::taut::{monomial_basis, multi_kappa_expand, MultiKappa, RingContext, TautExpression, TautMonomial};

/// One row per relation, one column per basis monomial.
pub fn relation_matrix(relations: &[TautExpression], basis: &[TautMonomial]) -> Result<ExactMatrix> {
    let rows = relations.iter().map(|r| r.coordinates(basis)).collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(ExactMatrix::zeros(0, basis.len()));
    }
    ExactMatrix::from_rows(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelationSource {
    /// Generated by the Pixton module.
    Generated,
    /// The genus-3 list as printed.
    Printed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub n: usize,
    pub source: RelationSource,
    pub dim: usize,
    pub relations: usize,
    pub rank: usize,
    pub ok: bool,
}

impl CompletenessReport {
    /// `dim - rank`, the rank of `R²(M_{3,n})` the relations leave room for.
    pub fn quotient_rank(&self) -> usize {
        self.dim - self.rank
    }
}

fn genus3_relations(n: usize, source: RelationSource) -> Result<Vec<TautExpression>> {
    let ctx = RingContext::new(3, n)?;
    Ok(match source {
        RelationSource::Generated => all_relations(&ctx, 2)?.into_iter().map(|(_, r)| r).collect(),
        RelationSource::Printed => fixtures::genus3_relations(n).into_iter().map(|f| f.expr).collect(),
    })
}

/// Rank of the degree-2 relations over the full monomial basis; OK iff the
/// quotient has rank `n`.
pub fn genus3_completeness(n: usize, source: RelationSource) -> Result<CompletenessReport> {
    let ctx = RingContext::new(3, n)?;
    let basis = monomial_basis(&ctx, 2);
    let relations = genus3_relations(n, source)?;
    let rank = relation_matrix(&relations, &basis)?.rank();
    Ok(CompletenessReport { n, source, dim: basis.len(), relations: relations.len(), rank, ok: basis.len() - rank == n })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BszEntry {
    pub label: String,
    pub relation: TautExpression,
    /// Some representation `Σ c_j · relation_j`, nonzero terms only.
    pub representation: Option<Vec<(String, Rational)>>,
}

/// BSZ relation for a degree-2 class `X`: `X - (its socle image)`.
fn bsz_from_socle(class: TautExpression, ctx: &RingContext) -> Result<TautExpression> {
    let image = socle_express_general(&class, ctx)?;
    let mut out = class;
    for (i, c) in image.coeffs().iter().enumerate() {
        out.add_term(TautMonomial::psi(ctx.points(), i, 2), -c.clone());
    }
    Ok(out)
}

/// The four BSZ families in genus 3, built from the socle formula, with
/// their printed labels. Points are 0-based internally, 1-based in labels.
pub fn bsz_relations(n: usize) -> Result<Vec<(String, TautExpression)>> {
    let ctx = RingContext::new(3, n)?;
    let mono = |m: TautMonomial| TautExpression::monomial(m);
    let mut out = Vec::new();
    for k in 0..n {
        for l in k + 1..n {
            let mut psi = vec![0; n];
            psi[k] = 1;
            psi[l] = 1;
            let rel = bsz_from_socle(mono(TautMonomial::new(psi, vec![])), &ctx)?;
            out.push((format!("(a)_{{{},{}}}", k + 1, l + 1), rel));
        }
    }
    for l in 0..n {
        let mut psi = vec![0; n];
        psi[l] = 1;
        let rel = bsz_from_socle(mono(TautMonomial::new(psi, vec![1])), &ctx)?;
        out.push((format!("(b)_{}", l + 1), rel));
    }
    out.push(("(c)".into(), bsz_from_socle(mono(TautMonomial::kappa(n, &[2])), &ctx)?));
    let k11 = multi_kappa_expand(&MultiKappa::new(vec![1, 1]), &ctx);
    out.push(("(d)".into(), bsz_from_socle(k11, &ctx)?));
    Ok(out)
}

/// Solves for each BSZ relation as a combination of the chosen relation list.
pub fn bsz_in_pixton(n: usize, source: RelationSource) -> Result<Vec<BszEntry>> {
    let ctx = RingContext::new(3, n)?;
    let basis = monomial_basis(&ctx, 2);
    let (labels, relations): (Vec<String>, Vec<TautExpression>) = match source {
        RelationSource::Printed => fixtures::genus3_relations(n).into_iter().map(|f| (f.label, f.expr)).unzip(),
        RelationSource::Generated => all_relations(&ctx, 2)?
            .into_iter()
            .map(|(p, r)| (describe_params(&p), r))
            .unzip(),
    };
    let columns = relation_matrix(&relations, &basis)?.transpose();
    bsz_relations(n)?
        .into_par_iter()
        .map(|(label, relation)| {
            let target = relation.coordinates(&basis)?;
            let representation = columns.solve_any(&target)?.map(|x| {
                labels
                    .iter()
                    .zip(x)
                    .filter(|(_, c)| !num_traits::Zero::is_zero(c))
                    .map(|(l, c)| (l.clone(), c))
                    .collect()
            });
            Ok(BszEntry { label, relation, representation })
        })
        .collect()
}

/// Result of checking one printed combination against its BSZ relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComboCheck {
    pub label: String,
    /// `combination = ratio · relation`, if the two are proportional.
    pub ratio: Option<Rational>,
    pub expected_ratio: Rational,
}

impl ComboCheck {
    pub fn ok(&self) -> bool {
        self.ratio.as_ref() == Some(&self.expected_ratio)
    }
}

/// Scalars relating each printed combination to the relation as printed
/// (`LHS - RHS`); they do not depend on `n`.
pub const COMBO_RATIOS: [(&str, i64); 4] = [("(a)", -24), ("(b)", 16), ("(c)", -20), ("(d)", 16)];

/// Evaluates the four printed combinations for all index choices at this `n` (`n ≥ 3`).
pub fn check_displayed_combinations(n: usize) -> Vec<ComboCheck> {
    let ratio = |name: &str| {
        let v = COMBO_RATIOS.iter().find(|(l, _)| *l == name).expect("known label").1;
        Rational::from_integer(v.into())
    };
    let mut out = Vec::new();
    for k in 0..n {
        for l in k + 1..n {
            out.push(ComboCheck {
                label: format!("(a)_{{{},{}}}", k + 1, l + 1),
                ratio: fixtures::combo_a(n, k, l).proportional_to(&fixtures::bsz_a(n, k, l)),
                expected_ratio: ratio("(a)"),
            });
        }
    }
    for l in 0..n {
        out.push(ComboCheck {
            label: format!("(b)_{}", l + 1),
            ratio: fixtures::combo_b(n, l).proportional_to(&fixtures::bsz_b(n, l)),
            expected_ratio: ratio("(b)"),
        });
    }
    out.push(ComboCheck {
        label: "(c)".into(),
        ratio: fixtures::combo_c(n).proportional_to(&fixtures::bsz_c(n)),
        expected_ratio: ratio("(c)"),
    });
    out.push(ComboCheck {
        label: "(d)".into(),
        ratio: fixtures::combo_d(n).proportional_to(&fixtures::bsz_d(n)),
        expected_ratio: ratio("(d)"),
    });
    out
}

pub fn describe_params(p: &RelationParams) -> String {
    let sigma: Vec<String> = p.sigma.iter().map(u32::to_string).collect();
    let a: Vec<String> = p.a.iter().map(u32::to_string).collect();
    format!("sigma={{{}}} a=({})", sigma.join(","), a.join(","))
}

/// For each printed relation, a generated relation proportional to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureMatch {
    pub label: String,
    pub matched: Option<(String, Rational)>,
}

pub fn match_fixtures(printed: &[Fixture], generated: &[(RelationParams, TautExpression)]) -> Vec<FixtureMatch> {
    printed
        .iter()
        .map(|f| FixtureMatch {
            label: f.label.clone(),
            matched: generated
                .iter()
                .find_map(|(p, r)| f.expr.proportional_to(r).map(|c| (describe_params(p), c))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completeness_small_n() {
        let one = genus3_completeness(1, RelationSource::Generated).unwrap();
        assert_eq!((one.dim, one.rank), (4, 3));
        for n in 1..6 {
            for source in [RelationSource::Generated, RelationSource::Printed] {
                let r = genus3_completeness(n, source).unwrap();
                assert!(r.ok, "{r:?}");
                assert_eq!(r.quotient_rank(), n);
            }
        }
    }

    #[test]
    fn socle_built_bsz_match_printed() {
        for n in 2..6 {
            let built = bsz_relations(n).unwrap();
            let find = |l: &str| built.iter().find(|(x, _)| x == l).unwrap().1.clone();
            assert_eq!(find("(a)_{1,2}"), fixtures::bsz_a(n, 0, 1));
            assert_eq!(find("(b)_2"), fixtures::bsz_b(n, 1));
            assert_eq!(find("(c)"), fixtures::bsz_c(n));
            assert_eq!(find("(d)"), fixtures::bsz_d(n));
        }
    }

    #[test]
    fn bsz_representable() {
        for n in 3..6 {
            for source in [RelationSource::Printed, RelationSource::Generated] {
                for e in bsz_in_pixton(n, source).unwrap() {
                    assert!(e.representation.is_some(), "{} at n = {n}", e.label);
                }
            }
        }
    }

    #[test]
    fn printed_combinations() {
        for n in 3..7 {
            for c in check_displayed_combinations(n) {
                assert!(c.ok(), "{c:?} at n = {n}");
            }
        }
        assert_eq!(check_displayed_combinations(3).len(), 3 + 3 + 2);
    }
}
