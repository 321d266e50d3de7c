//! Pixton's relations restricted to `M_{g,n}`.
//!
//! For a partition `σ` and point weights `a_i` (no entry `≡ 2 mod 3`), the
//! `T^d` coefficient of `κ(exp({1-A}) ∏ {C_{σ_j}}) · ∏ C_{a_i}(ψ_i T)` vanishes
//! whenever `3d ≥ g + 1 + |σ| + Σ a_i` with matching parity.

mod kseries;
mod series;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exact::factorial;
use crate::taut::{partitions, RingContext, TautExpression, TautMonomial};

pub use kseries::{decorate, k_exp, kappa_apply, KPolynomial, KSeries};
pub use series::{series_a, series_b, series_c, TruncSeries};

fn allowed(j: u32) -> bool {
    j % 3 != 2
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationParams {
    pub ctx: RingContext,
    pub degree: u32,
    /// Parts in descending order.
    pub sigma: Vec<u32>,
    /// One weight per marked point.
    pub a: Vec<u32>,
}

impl RelationParams {
    pub fn new(ctx: RingContext, degree: u32, mut sigma: Vec<u32>, a: Vec<u32>) -> Result<Self> {
        if a.len() != ctx.points() {
            return domain(format!("expected {} point weights, got {}", ctx.points(), a.len()));
        }
        if let Some(p) = sigma.iter().find(|&&p| p == 0 || !allowed(p)) {
            return domain(format!("partition part {p} is not allowed"));
        }
        if let Some(x) = a.iter().find(|&&x| !allowed(x)) {
            return domain(format!("point weight {x} is 2 mod 3"));
        }
        sigma.sort_unstable_by(|x, y| y.cmp(x));
        let params = Self { ctx, degree, sigma, a };
        let weight = params.weight();
        let target = 3 * u64::from(degree);
        if target < weight || (target - weight) % 2 != 0 {
            return domain(format!(
                "inadmissible: 3d = {} against g + 1 + |σ| + Σa = {weight}",
                3 * degree
            ));
        }
        Ok(params)
    }

    /// Shorthand with all point weights zero except the listed `(point, weight)` pairs (0-based points).
    pub fn with_points(ctx: RingContext, degree: u32, sigma: Vec<u32>, weights: &[(usize, u32)]) -> Result<Self> {
        let mut a = vec![0; ctx.points()];
        for &(i, w) in weights {
            if i >= a.len() {
                return domain(format!("point {} out of range", i + 1));
            }
            a[i] = w;
        }
        Self::new(ctx, degree, sigma, a)
    }

    /// `g + 1 + |σ| + Σ a_i`.
    pub fn weight(&self) -> u64 {
        self.ctx.genus() as u64 + 1 + self.sigma.iter().map(|&x| x as u64).sum::<u64>()
            + self.a.iter().map(|&x| x as u64).sum::<u64>()
    }

    /// The same relation with point `i` relabelled `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut a = vec![0; self.a.len()];
        for (i, &w) in self.a.iter().enumerate() {
            a[perm[i]] = w;
        }
        Self { a, ..self.clone() }
    }
}

/// The `T^d` coefficient itself, before normalization.
pub fn raw_relation(params: &RelationParams) -> Result<TautExpression> {
    let order = params.degree as usize;
    let ctx = &params.ctx;
    let n = ctx.points();

    let one_minus_a = &TruncSeries::one(order) - &series_a(order);
    let mut k = k_exp(&decorate(&one_minus_a))?;
    for &part in &params.sigma {
        k = &k * &decorate(&series_c(part, order)?);
    }
    let mut series = kappa_apply(&k, ctx);

    for (i, &w) in params.a.iter().enumerate() {
        let c = series_c(w, order)?;
        let mut next = vec![TautExpression::zero(); order + 1];
        for (x, term) in series.iter().enumerate() {
            if term.is_zero() {
                continue;
            }
            for y in 0..=order - x {
                let cy = c.coeff(y);
                if num_traits::Zero::is_zero(&cy) {
                    continue;
                }
                let psi = TautExpression::term(TautMonomial::psi(n, i, y as u32), cy);
                next[x + y] = std::mem::take(&mut next[x + y]) + term * &psi;
            }
        }
        series = next;
    }
    Ok(series.swap_remove(order))
}

/// The relation for `params`, normalized: integer coefficients with no common
/// factor and a positive leading coefficient in canonical order.
pub fn pixton_relation(params: &RelationParams) -> Result<TautExpression> {
    Ok(raw_relation(params)?.normalized())
}

/// An orbit of admissible parameters under relabelling of the marked points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFamily {
    pub sigma: Vec<u32>,
    /// The nonzero point weights, descending.
    pub profile: Vec<u32>,
    /// Profile assigned to the first points.
    pub representative: RelationParams,
    pub orbit_size: u64,
}

impl RelationFamily {
    /// Every distinct assignment of the profile to the marked points.
    pub fn members(&self) -> Vec<RelationParams> {
        let n = self.representative.ctx.points();
        let mut pool: Vec<u32> = self.profile.clone();
        pool.resize(n, 0);
        let mut counts: Vec<(u32, usize)> = Vec::new();
        for x in pool {
            match counts.iter_mut().find(|(y, _)| *y == x) {
                Some((_, m)) => *m += 1,
                None => counts.push((x, 1)),
            }
        }
        let mut out = Vec::new();
        distinct_arrangements(&mut counts, &mut Vec::with_capacity(n), n, &mut out);
        out.into_iter()
            .map(|a| RelationParams { a, ..self.representative.clone() })
            .collect()
    }

    pub fn describe(&self) -> String {
        let sigma: Vec<String> = self.sigma.iter().map(u32::to_string).collect();
        let points = if self.profile.is_empty() {
            "a = 0".to_string()
        } else {
            let names = ["k", "l", "m", "p", "q", "r"];
            let parts: Vec<String> = self
                .profile
                .iter()
                .enumerate()
                .map(|(i, w)| format!("a_{} = {w}", names.get(i).copied().unwrap_or("*")))
                .collect();
            parts.join(", ")
        };
        format!("sigma = {{{}}}, {points}", sigma.join(","))
    }
}

fn distinct_arrangements(counts: &mut [(u32, usize)], prefix: &mut Vec<u32>, n: usize, out: &mut Vec<Vec<u32>>) {
    if prefix.len() == n {
        out.push(prefix.clone());
        return;
    }
    for i in 0..counts.len() {
        if counts[i].1 == 0 {
            continue;
        }
        counts[i].1 -= 1;
        prefix.push(counts[i].0);
        distinct_arrangements(counts, prefix, n, out);
        prefix.pop();
        counts[i].1 += 1;
    }
}

fn allowed_partitions(total: u32) -> Vec<Vec<u32>> {
    partitions(total, total).into_iter().filter(|p| p.iter().all(|&x| allowed(x))).collect()
}

/// All admissible `(σ, a)` for degree `d`, one family per orbit of point relabellings.
pub fn enumerate_admissible(ctx: &RingContext, d: u32) -> Vec<RelationFamily> {
    let budget = 3 * d as i64 - ctx.genus() as i64 - 1;
    let n = ctx.points();
    let mut out = Vec::new();
    let mut total = budget.rem_euclid(2);
    while total <= budget {
        let total_u = total as u32;
        for sigma_total in (0..=total_u).rev() {
            for sigma in allowed_partitions(sigma_total) {
                for profile in allowed_partitions(total_u - sigma_total) {
                    if profile.len() > n {
                        continue;
                    }
                    let mut a = profile.clone();
                    a.resize(n, 0);
                    let representative = RelationParams::new(*ctx, d, sigma.clone(), a)
                        .expect("enumerated parameters are admissible");
                    let mut orbit = factorial(n as u32) / factorial((n - profile.len()) as u32);
                    let mut i = 0;
                    while i < profile.len() {
                        let run = profile[i..].iter().take_while(|&&x| x == profile[i]).count();
                        orbit /= factorial(run as u32);
                        i += run;
                    }
                    out.push(RelationFamily {
                        sigma: sigma.clone(),
                        profile,
                        representative,
                        orbit_size: u64::try_from(orbit).expect("orbit size fits in u64"),
                    });
                }
            }
        }
        total += 2;
    }
    out
}

/// Every admissible relation of degree `d`, generated in parallel, paired with its parameters.
pub fn all_relations(ctx: &RingContext, d: u32) -> Result<Vec<(RelationParams, TautExpression)>> {
    let params: Vec<RelationParams> = enumerate_admissible(ctx, d).iter().flat_map(RelationFamily::members).collect();
    params
        .into_par_iter()
        .map(|p| pixton_relation(&p).map(|r| (p, r)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::taut::{parse_expression, to_multi_form, MultiKappa};

    fn ctx(g: u32, n: usize) -> RingContext {
        RingContext::new(g, n).unwrap()
    }

    #[test]
    fn admissibility() {
        let c = ctx(4, 2);
        assert!(RelationParams::new(c, 2, vec![1], vec![0, 0]).is_ok());
        assert!(RelationParams::new(c, 2, vec![], vec![1, 0]).is_ok());
        assert!(RelationParams::new(c, 2, vec![], vec![0, 0]).is_err());
        assert!(RelationParams::new(c, 2, vec![2], vec![0, 0]).is_err());
        assert!(RelationParams::new(c, 2, vec![0], vec![1, 0]).is_err());
        assert!(RelationParams::new(c, 2, vec![], vec![1]).is_err());
        assert!(RelationParams::new(c, 3, vec![], vec![5, 0]).is_err());
    }

    #[test]
    fn genus_two_degree_one() {
        for n in 1..6 {
            let c = ctx(2, n);
            let rel = pixton_relation(&RelationParams::new(c, 1, vec![], vec![0; n]).unwrap()).unwrap();
            let psis: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
            let expected = parse_expression(&format!("k1 - {}", psis.join(" - ")), &c).unwrap();
            assert_eq!(rel, expected);
        }
    }

    #[test]
    fn genus_four_sigma_one_intermediate() {
        // In multi-index form the κ part is 360((168 + 77κ_0)κ_2 - (24 + 5κ_0)κ_{1,1}).
        for n in 1..5 {
            let c = ctx(4, n);
            let k0 = n as i64 + 6;
            let p = RelationParams::new(c, 2, vec![1], vec![0; n]).unwrap();
            let multi = to_multi_form(&raw_relation(&p).unwrap());
            let none = vec![0; n];
            assert_eq!(multi.coefficient(&none, &MultiKappa::new(vec![2])), q(360 * (168 + 77 * k0)));
            assert_eq!(multi.coefficient(&none, &MultiKappa::new(vec![1, 1])), q(-360 * (24 + 5 * k0)));
        }
    }

    #[test]
    fn genus_four_point_family_matches_display() {
        for n in 2..6 {
            let c = ctx(4, n);
            let rel = pixton_relation(&RelationParams::with_points(c, 2, vec![], &[(0, 1)]).unwrap()).unwrap();
            let mut s = String::from("77*k2 - 5*k(1,1) + 91*p1^2 - 14*k1*p1");
            for i in 2..=n {
                s += &format!(" - 77*p{i}^2 + 10*k1*p{i} + 14*p1*p{i}");
                for j in i + 1..=n {
                    s += &format!(" - 10*p{i}*p{j}");
                }
            }
            let expected = parse_expression(&s, &c).unwrap();
            assert!(rel.proportional_to(&expected).is_some(), "n = {n}: {rel}");
        }
    }

    #[test]
    fn families() {
        let f = enumerate_admissible(&ctx(4, 5), 2);
        let described: Vec<String> = f.iter().map(RelationFamily::describe).collect();
        assert_eq!(described, ["sigma = {1}, a = 0", "sigma = {}, a_k = 1"]);
        assert_eq!(f[1].orbit_size, 5);
        assert_eq!(f[1].members().len(), 5);
        assert!(enumerate_admissible(&ctx(3, 3), 1).is_empty());
        let g3 = enumerate_admissible(&ctx(3, 4), 2);
        assert_eq!(g3.len(), 4);
        let sizes: Vec<u64> = g3.iter().map(|f| f.orbit_size).collect();
        assert_eq!(sizes, [1, 1, 4, 6]);
        for fam in &g3 {
            assert_eq!(fam.members().len() as u64, fam.orbit_size);
        }
    }

    #[test]
    fn homogeneous() {
        let c = ctx(4, 3);
        for (p, r) in all_relations(&c, 3).unwrap() {
            assert_eq!(r.homogeneous_degree(), Some(3), "{p:?}");
        }
    }
}
