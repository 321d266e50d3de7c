use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::{RingContext, TautExpression, TautMonomial};
use crate::exact::{factorial, Rational};

/// The multi-index class `κ_{e_1,...,e_l}`: the pushforward of
/// `ψ_{n+1}^{e_1+1} ... ψ_{n+l}^{e_l+1}` forgetting the last `l` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiKappa {
    indices: Vec<u32>,
}

impl MultiKappa {
    pub fn new(mut indices: Vec<u32>) -> Self {
        indices.sort_unstable_by(|a, b| b.cmp(a));
        Self { indices }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }
}

/// Calls `f` once per set partition of `0..len`, given as a block label per element.
fn for_each_set_partition(len: usize, f: &mut impl FnMut(&[usize], usize)) {
    fn go(labels: &mut Vec<usize>, blocks: usize, len: usize, f: &mut impl FnMut(&[usize], usize)) {
        if labels.len() == len {
            f(labels, blocks);
            return;
        }
        for b in 0..=blocks {
            labels.push(b);
            go(labels, blocks.max(b + 1), len, f);
            labels.pop();
        }
    }
    go(&mut Vec::with_capacity(len), 0, len, f);
}

/// Expands `κ_{indices}` as a polynomial in single-index κ's keyed by the
/// (descending) index list; any `κ_0` factor becomes `kappa_zero`.
fn expand_indices(indices: &[u32], kappa_zero: &Rational) -> BTreeMap<Vec<u32>, Rational> {
    let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for_each_set_partition(indices.len(), &mut |labels, blocks| {
        let mut sums = vec![0u32; blocks];
        let mut sizes = vec![0u32; blocks];
        for (i, &b) in labels.iter().enumerate() {
            sums[b] += indices[i];
            sizes[b] += 1;
        }
        let mut coeff = Rational::one();
        let mut parts = Vec::new();
        for (s, size) in sums.into_iter().zip(sizes) {
            coeff *= Rational::from_integer(factorial(size - 1));
            if s == 0 {
                coeff *= kappa_zero;
            } else {
                parts.push(s);
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        *out.entry(parts).or_insert_with(Rational::zero) += coeff;
    });
    out.retain(|_, c| !c.is_zero());
    out
}

/// `κ_{e_1,...,e_l}` in single-index normal form: a sum over set partitions
/// of the index positions, each block `B` contributing `κ_{Σ_B e}` with
/// weight `(|B|-1)!`.
pub fn multi_kappa_expand(kappa: &MultiKappa, ctx: &RingContext) -> TautExpression {
    let n = ctx.points();
    expand_indices(&kappa.indices, &ctx.kappa_zero())
        .into_iter()
        .map(|(parts, c)| (TautMonomial::new(vec![0; n], parts), c))
        .collect()
}

fn single_to_multi_cache() -> &'static Mutex<HashMap<Vec<u32>, BTreeMap<MultiKappa, Rational>>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u32>, BTreeMap<MultiKappa, Rational>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Writes the product `κ_{k_1} ... κ_{k_r}` of positive single-index classes
/// as a combination of multi-index classes.
///
/// The expansion of `κ_λ` (multi) is `κ_λ` (product) plus products with fewer
/// factors, so the inverse is found by recursion on the number of factors.
pub fn single_to_multi(kappa: &[u32]) -> BTreeMap<MultiKappa, Rational> {
    let mut key = kappa.to_vec();
    assert!(key.iter().all(|&k| k > 0), "single_to_multi takes positive indices");
    key.sort_unstable_by(|a, b| b.cmp(a));
    if let Some(hit) = single_to_multi_cache().lock().unwrap().get(&key) {
        return hit.clone();
    }
    let mut out = BTreeMap::new();
    out.insert(MultiKappa::new(key.clone()), Rational::one());
    // No κ_0 can arise from positive indices, so the scalar is irrelevant.
    for (parts, c) in expand_indices(&key, &Rational::zero()) {
        if parts == key {
            continue;
        }
        for (m, d) in single_to_multi(&parts) {
            *out.entry(m).or_insert_with(Rational::zero) -= &c * d;
        }
    }
    out.retain(|_, c| !c.is_zero());
    single_to_multi_cache().lock().unwrap().insert(key, out.clone());
    out
}

/// An expression written with multi-index κ classes. Each stored monomial's
/// κ list is read as one multi-index class rather than a product.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiForm {
    terms: BTreeMap<TautMonomial, Rational>,
}

impl MultiForm {
    /// Terms keyed by monomials whose κ list is a multi-index; zeros are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (TautMonomial, Rational)>) -> Self {
        let mut out: BTreeMap<TautMonomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            *out.entry(m).or_insert_with(Rational::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        Self { terms: out }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TautMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, psi: &[u32], kappa: &MultiKappa) -> Rational {
        self.terms
            .get(&TautMonomial::new(psi.to_vec(), kappa.indices.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Back to single-index normal form.
    pub fn to_single(&self, ctx: &RingContext) -> TautExpression {
        let mut out = TautExpression::zero();
        for (m, c) in &self.terms {
            let kappa = multi_kappa_expand(&MultiKappa::new(m.kappa_indices().to_vec()), ctx);
            let psi = TautExpression::monomial(TautMonomial::new(m.psi_exponents().to_vec(), Vec::new()));
            out.add_scaled(&(&psi * &kappa), c);
        }
        out
    }
}

/// Rewrites every κ product in `expr` through [`single_to_multi`].
pub fn to_multi_form(expr: &TautExpression) -> MultiForm {
    let mut terms: BTreeMap<TautMonomial, Rational> = BTreeMap::new();
    for (m, c) in expr.iter() {
        let kappa = if m.kappa_indices().is_empty() {
            BTreeMap::from([(MultiKappa::new(Vec::new()), Rational::one())])
        } else {
            single_to_multi(m.kappa_indices())
        };
        for (mk, d) in kappa {
            let key = TautMonomial::new(m.psi_exponents().to_vec(), mk.indices);
            *terms.entry(key).or_insert_with(Rational::zero) += c * d;
        }
    }
    terms.retain(|_, c| !c.is_zero());
    MultiForm { terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn single(n: usize, parts: &[u32]) -> TautExpression {
        TautExpression::monomial(TautMonomial::kappa(n, parts))
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        for (len, bell) in [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15), (5, 52)] {
            let mut count = 0;
            for_each_set_partition(len, &mut |_, _| count += 1);
            assert_eq!(count, bell);
        }
    }

    #[test]
    fn small_expansions() {
        let ctx = RingContext::new(2, 1).unwrap();
        let k11 = multi_kappa_expand(&MultiKappa::new(vec![1, 1]), &ctx);
        assert_eq!(k11, single(1, &[1, 1]) + single(1, &[2]));
        let k111 = multi_kappa_expand(&MultiKappa::new(vec![1, 1, 1]), &ctx);
        let expected = single(1, &[1, 1, 1]) + single(1, &[2, 1]).scale(&q(3)) + single(1, &[3]).scale(&q(2));
        assert_eq!(k111, expected);
    }

    #[test]
    fn zero_index_uses_euler_characteristic() {
        let ctx = RingContext::new(3, 2).unwrap();
        let k0 = multi_kappa_expand(&MultiKappa::new(vec![0]), &ctx);
        assert_eq!(k0, TautExpression::constant(2, q(6)));
        // κ_{1,0} = κ_0 κ_1 + κ_1
        let k10 = multi_kappa_expand(&MultiKappa::new(vec![1, 0]), &ctx);
        assert_eq!(k10, single(2, &[1]).scale(&q(7)));
    }

    #[test]
    fn inverse_worked_example() {
        // κ_1 · κ_{1,1} = κ_{1,1,1} - 2 κ_{1,2} written back through the expansion
        let ctx = RingContext::new(4, 1).unwrap();
        let lhs = &single(1, &[1]) * &multi_kappa_expand(&MultiKappa::new(vec![1, 1]), &ctx);
        let rhs = multi_kappa_expand(&MultiKappa::new(vec![1, 1, 1]), &ctx)
            - multi_kappa_expand(&MultiKappa::new(vec![2, 1]), &ctx).scale(&q(2));
        assert_eq!(lhs, rhs);
        let inv = single_to_multi(&[1, 1]);
        assert_eq!(inv.len(), 2);
        assert_eq!(inv[&MultiKappa::new(vec![1, 1])], q(1));
        assert_eq!(inv[&MultiKappa::new(vec![2])], q(-1));
    }

    #[test]
    fn round_trip_through_multi_form() {
        let ctx = RingContext::new(4, 2).unwrap();
        for d in 0..=4 {
            for m in super::super::monomial_basis(&ctx, d) {
                let e = TautExpression::monomial(m);
                assert_eq!(to_multi_form(&e).to_single(&ctx), e);
            }
        }
    }
}
