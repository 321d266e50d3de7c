use serde::Serialize;
use serde_json::json;

use tautring::exact::q;
use tautring::pixton::{enumerate_admissible, pixton_relation};
use tautring::rank_lab::genus3::{bsz_in_pixton, check_displayed_combinations, genus3_completeness, RelationSource};
use tautring::rank_lab::genus4::{
    complement_block_with, eigenvector_check_with, exceptional_analysis_with, mhat_matrix, span_rank,
    stable_plane_check_with, upper_bound_solve, verify_det,
};
use tautring::rank_lab::table::rank_table;
use tautring::rank_lab::Verdict;
use tautring::socle::{build_matrices, socle_express_general};
use tautring::taut::{parse_expression, RingContext};

use crate::cache::CachedOutput;
use crate::{CliError, Command, Format, PointRange, Suite, Which};

fn json_body(value: &impl Serialize) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Failure(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_body(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Failure(e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(&r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Failure(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Failure(e.to_string()))
}

fn ok(body: String) -> Result<CachedOutput, CliError> {
    Ok(CachedOutput { body, failed: false })
}

pub(crate) fn execute(command: &Command, format: Format) -> Result<CachedOutput, CliError> {
    match command {
        Command::Relations { genus, n, degree } => relations(*genus, *n, *degree, format),
        Command::Socle { genus, n, class } => socle(*genus, *n, class, format),
        Command::Matrix { n, which } => matrix(*n, *which, format),
        Command::Verify { suite, n } => verify(*suite, *n, format),
        Command::Ranks { genus, n } => ranks(*genus, *n, format),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn relations(g: u32, n: usize, d: u32, format: Format) -> Result<CachedOutput, CliError> {
    let ctx = RingContext::new(g, n)?;
    let mut families = Vec::new();
    for family in enumerate_admissible(&ctx, d) {
        let mut members = Vec::new();
        for p in family.members() {
            let rel = pixton_relation(&p)?;
            members.push((p, rel));
        }
        families.push((family, members));
    }
    let body = match format {
        Format::Json => {
            let list: Vec<_> = families
                .iter()
                .map(|(f, ms)| {
                    json!({
                        "family": f.describe(),
                        "orbit_size": f.orbit_size,
                        "relations": ms.iter().map(|(p, r)| json!({
                            "sigma": p.sigma,
                            "a": p.a,
                            "relation": r.to_string(),
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json_body(&json!({ "genus": g, "n": n, "degree": d, "families": list }))?
        }
        Format::Csv => csv_body(
            &["family", "sigma", "a", "relation"],
            families.iter().flat_map(|(f, ms)| {
                ms.iter().map(move |(p, r)| vec![f.describe(), join(&p.sigma), join(&p.a), r.to_string()])
            }),
        )?,
        Format::Text => {
            let mut s = String::new();
            for (f, ms) in &families {
                s.push_str(&format!("# {} ({} relations)\n", f.describe(), ms.len()));
                for (p, r) in ms {
                    s.push_str(&format!("a = ({}): {r}\n", join(&p.a)));
                }
            }
            s
        }
    };
    ok(body)
}

fn socle(g: u32, n: usize, class: &str, format: Format) -> Result<CachedOutput, CliError> {
    let ctx = RingContext::new(g, n)?;
    let expr = parse_expression(class, &ctx)?;
    let v = socle_express_general(&expr, &ctx)?;
    let coeffs: Vec<String> = v.coeffs().iter().map(ToString::to_string).collect();
    let body = match format {
        Format::Json => json_body(&json!({ "genus": g, "n": n, "class": class, "socle": coeffs }))?,
        Format::Csv => csv_body(
            &["point", "coefficient"],
            coeffs.iter().enumerate().map(|(i, c)| vec![(i + 1).to_string(), c.clone()]),
        )?,
        Format::Text => format!("{v}\n"),
    };
    ok(body)
}

fn matrix(n: usize, which: Which, format: Format) -> Result<CachedOutput, CliError> {
    let (m, mhat) = build_matrices(n)?;
    let chosen = match which {
        Which::M => m,
        Which::Mhat => mhat,
    };
    let body = match format {
        Format::Json => json_body(&chosen.to_record())?,
        Format::Csv => chosen.to_csv(),
        Format::Text => format!("labels: {}\n{}\n", chosen.label_strings().join(" "), chosen.entries),
    };
    ok(body)
}

fn suite_verdicts(suite: Suite, n: usize) -> Result<Vec<Verdict>, CliError> {
    let params = format!("n={n}");
    Ok(match suite {
        Suite::Det => vec![verify_det(n)?],
        Suite::StablePlane => {
            let m = mhat_matrix(n)?;
            if n < 2 {
                return Err(CliError::Usage(format!("stable_plane_check needs n ≥ 2, got {n}")));
            }
            (1..n).map(|i| stable_plane_check_with(&m, n, i)).collect::<Result<_, _>>()?
        }
        Suite::Eigenvector => {
            if n < 4 {
                return Err(CliError::Usage(format!("eigenvector_check needs n ≥ 4, got {n}")));
            }
            let m = mhat_matrix(n)?;
            let mut out = Vec::new();
            for i in 1..=n {
                for j in i + 1..=n {
                    for k in j + 1..=n {
                        for l in k + 1..=n {
                            out.push(eigenvector_check_with(&m, n, [i, j, k, l])?);
                        }
                    }
                }
            }
            out
        }
        Suite::Exceptional => {
            let r = exceptional_analysis_with(&mhat_matrix(n)?, n)?;
            let delta = r.delta.as_ref().map(ToString::to_string).unwrap_or_else(|| "none".into());
            let details = format!(
                "MU=-4U: {}; (M+4)z printed: {}; delta = {delta}; printed delta {} annihilates: {}; (M+4)(z+delta u) nonzero: {}, along U: {}",
                r.eigen_u_holds, r.z_image_holds, r.paper_delta, r.paper_delta_annihilates, r.not_eigenvector, r.image_along_u
            );
            vec![Verdict::new("exceptional_analysis", params, r.ok(), details)]
        }
        Suite::Span => {
            let r = span_rank(n)?;
            let z_ok = r.rank_without_z.map_or(true, |k| k + 4 == r.labels);
            let details = match r.rank_without_z {
                Some(k) => format!("rank {} of N = {} (without z: {k})", r.rank, r.labels),
                None => format!("rank {} of N = {}", r.rank, r.labels),
            };
            vec![Verdict::new("span_rank", params, r.ok() && z_ok, details)]
        }
        Suite::Complement => {
            let r = complement_block_with(&mhat_matrix(n)?, n)?;
            let details = format!("det {} expected {}", r.det, r.expected_det);
            vec![Verdict::new("complement_block", params, r.ok(), details)]
        }
        Suite::UpperBound => {
            let verdict = match upper_bound_solve(n) {
                Ok(b) => {
                    let generated = b.system.get(0, 0).clone();
                    let details = format!(
                        "det {}; sigma={{1}} row kappa_2 entry {generated} (printed {})",
                        b.det,
                        b.displayed_sigma_one_kappa2()
                    );
                    Verdict::new("upper_bound_solve", params, true, details)
                }
                Err(tautring::Error::Singular(msg)) => Verdict::new("upper_bound_solve", params, false, msg),
                Err(e) => return Err(e.into()),
            };
            vec![verdict]
        }
        Suite::Genus3 => {
            let r = genus3_completeness(n, RelationSource::Generated)?;
            let details = format!("dim {} rank {} quotient {}", r.dim, r.rank, r.quotient_rank());
            vec![Verdict::new("genus3_completeness", params, r.ok, details)]
        }
        Suite::Bsz => {
            if n < 3 {
                return Err(CliError::Usage(format!("bsz_in_pixton needs n ≥ 3, got {n}")));
            }
            let mut out = Vec::new();
            for c in check_displayed_combinations(n) {
                let ratio = c.ratio.as_ref().map(ToString::to_string).unwrap_or_else(|| "not proportional".into());
                let details = format!("ratio {ratio}, expected {}", c.expected_ratio);
                out.push(Verdict::new("bsz_in_pixton", format!("{params} combination={}", c.label), c.ok(), details));
            }
            for e in bsz_in_pixton(n, RelationSource::Printed)? {
                let details = match &e.representation {
                    Some(terms) => terms
                        .iter()
                        .map(|(l, c)| if *c == q(1) { l.clone() } else { format!("{c}*{l}") })
                        .collect::<Vec<_>>()
                        .join(" + "),
                    None => "no representation".into(),
                };
                out.push(Verdict::new("bsz_in_pixton", format!("{params} relation={}", e.label), e.representation.is_some(), details));
            }
            out
        }
    })
}

fn verify(suite: Suite, range: PointRange, format: Format) -> Result<CachedOutput, CliError> {
    let mut verdicts = Vec::new();
    for n in range.iter() {
        verdicts.extend(suite_verdicts(suite, n)?);
    }
    let failed = verdicts.iter().any(|v| !v.ok());
    let body = match format {
        Format::Json => json_body(&verdicts)?,
        Format::Csv => csv_body(
            &["check", "params", "verdict", "details"],
            verdicts.iter().map(|v| {
                let status = if v.ok() { "OK" } else { "FAIL" };
                vec![v.check.clone(), v.params.clone(), status.into(), v.details.clone()]
            }),
        )?,
        Format::Text => verdicts
            .iter()
            .map(|v| format!("{} {} {}: {}\n", if v.ok() { "OK  " } else { "FAIL" }, v.check, v.params, v.details))
            .collect(),
    };
    Ok(CachedOutput { body, failed })
}

fn ranks(g: u32, range: PointRange, format: Format) -> Result<CachedOutput, CliError> {
    let tables = range.iter().map(|n| rank_table(g, n)).collect::<Result<Vec<_>, _>>()?;
    let failed = tables.iter().any(|t| t.ranks().iter().any(Option::is_none));
    let body = match format {
        Format::Json => {
            let rows: Vec<_> = tables
                .iter()
                .flat_map(|t| {
                    t.degrees.iter().map(move |r| {
                        json!({ "g": t.g, "n": t.n, "d": r.d, "dim": r.dim, "upper": r.upper, "lower": r.lower, "rank": r.rank() })
                    })
                })
                .collect();
            json_body(&rows)?
        }
        Format::Csv => {
            let mut s = String::from("g,n,d,rank\n");
            for t in &tables {
                for row in t.to_csv_rows() {
                    s.push_str(&row);
                    s.push('\n');
                }
            }
            s
        }
        Format::Text => tables
            .iter()
            .map(|t| {
                let ranks: Vec<String> = t
                    .degrees
                    .iter()
                    .map(|r| r.rank().map_or_else(|| format!("[{}..{}]", r.lower, r.upper), |x| x.to_string()))
                    .collect();
                format!("g={} n={}: {}\n", t.g, t.n, ranks.join(" "))
            })
            .collect(),
    };
    Ok(CachedOutput { body, failed })
}
