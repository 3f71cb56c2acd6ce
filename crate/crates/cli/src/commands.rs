use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use flatmodels::formula::prime_power_exponent;
use flatmodels::oracle::cell_candidates;
use flatmodels::verify::{run_suite, Suite};
use flatmodels::{
    census as cells, census_count, coefficient_table, model_count, moduli_dimension, oracle_count,
    zeta_factors, FieldSpec, ModelCount, RamificationInput,
};

use crate::{Format, Point};

/// Oracle runs beyond these sizes need `--force`.
const ORACLE_MAX_E: u32 = 8;
const ORACLE_MAX_WORK: u64 = 100_000_000;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments; exit status 1.
    Invalid(String),
    /// A cross-check inside the library failed; exit status 2.
    Inconsistent(String),
    /// Output was produced but reports failures; exit status 2.
    Failed(String),
}

impl From<flatmodels::Error> for CliError {
    fn from(err: flatmodels::Error) -> Self {
        if err.is_inconsistency() {
            CliError::Inconsistent(err.to_string())
        } else {
            CliError::Invalid(err.to_string())
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn resolve(point: &Point) -> Result<(RamificationInput, u32, u64)> {
    let input = RamificationInput::new(point.p, point.e)?;
    match point.q {
        Some(q) => {
            let k = prime_power_exponent(input.p(), q)?;
            Ok((input, k, q))
        }
        None => {
            if point.k < 1 {
                return Err(CliError::Invalid("--k must be at least 1".into()));
            }
            let q = (point.p as u64)
                .checked_pow(point.k)
                .ok_or_else(|| CliError::Invalid(format!("{}^{} overflows", point.p, point.k)))?;
            Ok((input, point.k, q))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn count(point: &Point, format: Format) -> Result<String> {
    let (input, _, q) = resolve(point)?;
    let c = model_count(&input, q)?;
    Ok(match format {
        Format::Plain => format!("{c}\n"),
        Format::Json => to_json(&json!({"p": input.p(), "e": input.e(), "q": q, "count": c})),
        Format::Csv => to_csv(
            &["p", "e", "q", "count"],
            [vec![input.p().to_string(), input.e().to_string(), q.to_string(), c.to_string()]],
        ),
    })
}

/// Parses `N` or the inclusive range `A..B`.
fn parse_range(spec: &str) -> Result<Vec<u32>> {
    let bad = || CliError::Invalid(format!("invalid --e `{spec}` (expected N or A..B)"));
    let (lo, hi) = match spec.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = spec.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(CliError::Invalid(format!("empty range --e {spec}")));
    }
    Ok((lo..=hi).collect())
}

#[derive(Serialize)]
struct TableRow {
    p: i64,
    e: i64,
    q: u64,
    count: ModelCount,
    dimension: u32,
}

pub fn table(ps: &[u32], e: &str, ks: &[u32], format: Format) -> Result<String> {
    let es = parse_range(e)?;
    let mut ps = ps.to_vec();
    ps.sort_unstable();
    ps.dedup();
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ps.is_empty() || ks.is_empty() {
        return Err(CliError::Invalid("empty grid".into()));
    }

    let mut rows = Vec::new();
    for &p in &ps {
        for &e in &es {
            let input = RamificationInput::new(p, e)?;
            let table = coefficient_table(&input)?;
            for &k in &ks {
                let (_, _, q) = resolve(&Point { p, e, k, q: None })?;
                rows.push(TableRow {
                    p: input.p(),
                    e: input.e(),
                    q,
                    count: ModelCount(table.evaluate(&q.into())),
                    dimension: table.dimension(),
                });
            }
        }
    }
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv => to_csv(
            &["p", "e", "q", "count", "dimension"],
            rows.iter().map(|r| {
                vec![
                    r.p.to_string(),
                    r.e.to_string(),
                    r.q.to_string(),
                    r.count.to_string(),
                    r.dimension.to_string(),
                ]
            }),
        ),
        Format::Plain => rows
            .iter()
            .map(|r| format!("{} {} {} {} {}\n", r.p, r.e, r.q, r.count, r.dimension))
            .collect(),
    })
}

pub fn zeta(point: &Point, format: Format) -> Result<String> {
    let (input, _, q) = resolve(point)?;
    let z = zeta_factors(&input, q)?;
    Ok(match format {
        Format::Json => {
            let factors: Vec<_> = z
                .factors
                .iter()
                .map(|&(n, c)| json!({"n": n, "multiplicity": c}))
                .collect();
            to_json(&json!({"p": input.p(), "e": input.e(), "q": q, "factors": factors}))
        }
        Format::Csv => to_csv(
            &["n", "multiplicity"],
            z.factors.iter().map(|&(n, c)| vec![n.to_string(), c.to_string()]),
        ),
        Format::Plain => {
            // Z(T) = prod (1 - q^n T)^(-c_n)
            let q = flatmodels::BigUint::from(q);
            let parts: Vec<String> = z
                .factors
                .iter()
                .map(|&(n, c)| format!("(1 - {}*T)^-{c}", q.pow(n)))
                .collect();
            format!("Z(T) = {}\n", parts.join(" * "))
        }
    })
}

pub fn dim(p: u32, e: u32, format: Format) -> Result<String> {
    let input = RamificationInput::new(p, e)?;
    let d = moduli_dimension(&input)?;
    Ok(match format {
        Format::Json => to_json(&json!({"p": input.p(), "e": input.e(), "dimension": d})),
        Format::Csv => to_csv(
            &["p", "e", "dimension"],
            [vec![input.p().to_string(), input.e().to_string(), d.to_string()]],
        ),
        Format::Plain => format!("{d}\n"),
    })
}

pub fn census(point: &Point, sum: bool, format: Format) -> Result<String> {
    let (input, _, q) = resolve(point)?;
    if sum {
        let c = census_count(&input, q)?;
        return Ok(match format {
            Format::Json => to_json(&json!({"p": input.p(), "e": input.e(), "q": q, "total": c})),
            Format::Csv => to_csv(&["total"], [vec![c.to_string()]]),
            Format::Plain => format!("{c}\n"),
        });
    }
    let rows = cells(&input)?;
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv | Format::Plain => to_csv(
            &["s", "t", "case", "r", "h"],
            rows.iter().map(|c| {
                vec![
                    c.s.to_string(),
                    c.t.to_string(),
                    c.case_tag.to_string(),
                    c.r.to_string(),
                    c.h.to_string(),
                ]
            }),
        ),
    })
}

pub fn oracle(point: &Point, force: bool, format: Format) -> Result<String> {
    let (input, k, q) = resolve(point)?;
    if !force {
        if point.e > ORACLE_MAX_E {
            return Err(CliError::Invalid(format!(
                "oracle refuses e > {ORACLE_MAX_E} without --force"
            )));
        }
        let work = q.checked_pow((input.e() + input.e0() + 1) as u32);
        if work.map_or(true, |w| w > ORACLE_MAX_WORK) {
            return Err(CliError::Invalid(format!(
                "oracle refuses q^(e+e_0+1) > {ORACLE_MAX_WORK} without --force"
            )));
        }
    } else if cell_candidates(&input, q, input.e0()).is_none() {
        return Err(CliError::Invalid("enumeration size overflows 64 bits".into()));
    }
    let spec = Arc::new(FieldSpec::new(point.p, k)?);
    let report = oracle_count(&input, &spec)?;
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => to_csv(
            &["s", "t", "count"],
            report
                .cells
                .iter()
                .map(|c| vec![c.s.to_string(), c.t.to_string(), c.count.to_string()]),
        ),
        Format::Plain => {
            let mut s = format!("{}\n", report.total);
            for f in &report.cross_check_failures {
                s.push_str(&format!("cross-check failure: {f}\n"));
            }
            s
        }
    };
    if report.cross_check_failures.is_empty() {
        Ok(text)
    } else {
        Err(CliError::Failed(text))
    }
}

pub fn verify(suite: &str, format: Format) -> Result<String> {
    let suite: Suite = suite.parse().map_err(CliError::Invalid)?;
    let outcomes = run_suite(suite);
    let text = match format {
        Format::Json => to_json(&outcomes),
        Format::Csv => to_csv(
            &["check", "status", "detail"],
            outcomes.iter().map(|o| {
                vec![
                    o.name.to_string(),
                    if o.passed { "PASS" } else { "FAIL" }.to_string(),
                    o.detail.clone(),
                ]
            }),
        ),
        Format::Plain => outcomes
            .iter()
            .map(|o| {
                format!(
                    "{} {:<32} {}\n",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.detail
                )
            })
            .collect(),
    };
    if outcomes.iter().all(|o| o.passed) {
        Ok(text)
    } else {
        Err(CliError::Failed(text))
    }
}
