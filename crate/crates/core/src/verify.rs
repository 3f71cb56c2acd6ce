//! Cross-check suite behind `flatmodels verify`.
//!
//! Each check compares two independent routes to the same number over a
//! grid of (p, e, q) and reports pass/fail with a short detail line.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use crate::census::{census, census_count, histogram, partition_sizes};
use crate::error::Result;
use crate::formula::{
    coeff_a, coeff_a_prime, coefficient_table, example_decomposition, model_count,
    moduli_dimension, zeta_factors, ModelCount, RamificationInput,
};
use crate::gf::FieldSpec;
use crate::laurent::LaurentPoly;
use crate::oracle::{cancellation_holds, scan_cell, valuation_condition};

pub const PRIMES: [u32; 5] = [3, 5, 7, 11, 13];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Small grid, a few seconds.
    Quick,
    /// The full desk-scale grid.
    Desk,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "quick" => Ok(Suite::Quick),
            "desk" => Ok(Suite::Desk),
            other => Err(format!("unknown suite `{other}` (expected quick or desk)")),
        }
    }
}

struct Scale {
    primes: Vec<u32>,
    e_max: u32,
    /// (p, e range, k) for the brute-force oracle
    oracle_runs: Vec<(u32, u32, u32)>,
}

impl Suite {
    fn scale(self) -> Scale {
        match self {
            Suite::Quick => Scale {
                primes: vec![3, 5, 7],
                e_max: 12,
                oracle_runs: vec![(3, 4, 1), (3, 2, 2), (5, 5, 1)],
            },
            Suite::Desk => Scale {
                primes: PRIMES.to_vec(),
                e_max: 40,
                oracle_runs: vec![(3, 6, 1), (3, 4, 2), (5, 6, 1)],
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from_failures(name: &'static str, checked: usize, failures: Vec<String>) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{checked} cases")
        } else {
            format!(
                "{} of {checked} cases failed; first: {}",
                failures.len(),
                failures[0]
            )
        };
        CheckOutcome {
            name,
            passed,
            detail,
        }
    }
}

fn inputs(scale: &Scale) -> Vec<RamificationInput> {
    let mut out = Vec::new();
    for &p in &scale.primes {
        for e in 1..=scale.e_max {
            out.push(RamificationInput::new(p, e).expect("valid grid"));
        }
    }
    out
}

struct OracleRun {
    input: RamificationInput,
    q: u64,
    /// (s, t) -> point count
    cells: BTreeMap<(i64, i64), u64>,
    total: u64,
    candidates: u64,
    mismatches: usize,
    cancellation_failures: Vec<String>,
    truncation_failures: Vec<String>,
    truncation_checked: usize,
}

fn run_oracle(input: RamificationInput, spec: &Arc<FieldSpec>) -> Result<OracleRun> {
    let mut run = OracleRun {
        input,
        q: spec.q(),
        cells: BTreeMap::new(),
        total: 0,
        candidates: 0,
        mismatches: 0,
        cancellation_failures: Vec::new(),
        truncation_failures: Vec::new(),
        truncation_checked: 0,
    };
    for s in 0..=input.e0() {
        for t in 0..=input.e0() {
            let scan = scan_cell(&input, spec, s, t)?;
            run.candidates += scan.candidates;
            run.mismatches += scan.mismatches.len();
            run.total += scan.points.len() as u64;
            run.cells.insert((s, t), scan.points.len() as u64);
            for pt in &scan.points {
                let v = pt.twist();
                if !cancellation_holds(&input, s, t, &v)? {
                    run.cancellation_failures.push(format!(
                        "p={} e={} q={} cell ({s},{t}) v={v}",
                        input.p(),
                        input.e(),
                        spec.q()
                    ));
                }
                // adding u^t * (power series) to the Iwasawa entry must not
                // change validity
                for j in 0..4 {
                    let w = LaurentPoly::monomial(spec.clone(), spec.one(), t + j);
                    let moved = pt.entry.add(&w)?.shift(-t);
                    run.truncation_checked += 1;
                    if !valuation_condition(&input, s, t, &moved) {
                        run.truncation_failures.push(format!(
                            "p={} e={} cell ({s},{t}) entry {} + u^{}",
                            input.p(),
                            input.e(),
                            pt.entry,
                            t + j
                        ));
                    }
                }
            }
        }
    }
    Ok(run)
}

/// Runs every check of the suite. Errors from the library surface as
/// failed checks, never as a panic.
pub fn run_suite(suite: Suite) -> Vec<CheckOutcome> {
    let scale = suite.scale();
    let grid = inputs(&scale);
    let mut out = Vec::new();

    // model_count(p, p-1, p) = p + 3
    let mut fails = Vec::new();
    for &p in &PRIMES {
        let got = RamificationInput::new(p, p - 1).and_then(|i| model_count(&i, p as u64));
        match got {
            Ok(c) if c == ModelCount::from(p as u64 + 3) => {}
            other => fails.push(format!("p={p}: {other:?}")),
        }
    }
    out.push(CheckOutcome::from_failures("example_p_plus_3", PRIMES.len(), fails));

    // e < p-1 gives a single model
    let mut fails = Vec::new();
    let mut n = 0;
    for &p in &PRIMES {
        for e in 1..p - 1 {
            for q in [p as u64, (p as u64).pow(2)] {
                n += 1;
                let got = RamificationInput::new(p, e).and_then(|i| model_count(&i, q));
                if got != Ok(ModelCount::from(1)) {
                    fails.push(format!("p={p} e={e} q={q}: {got:?}"));
                }
            }
        }
    }
    out.push(CheckOutcome::from_failures("low_ramification_singleton", n, fails));

    // coefficient table == h histogram, partition identity, dimension
    let mut table_fails = Vec::new();
    let mut part_fails = Vec::new();
    let mut dim_fails = Vec::new();
    let mut count_fails = Vec::new();
    for input in &grid {
        let tag = format!("p={} e={}", input.p(), input.e());
        match (coefficient_table(input), histogram(input)) {
            (Ok(table), Ok(hist)) => {
                let coeffs: Vec<u64> = table.coefficients();
                if coeffs != hist {
                    table_fails.push(format!("{tag}: c={coeffs:?} hist={hist:?}"));
                }
            }
            (a, b) => table_fails.push(format!("{tag}: {:?} / {:?}", a.err(), b.err())),
        }
        for n in 0..=input.e() as u32 {
            match partition_sizes(input, n) {
                Ok(s) => {
                    if s.s_n1 + s.s_n2 != coeff_a(input, n)
                        || s.s_n1p + s.s_n2p != coeff_a_prime(input, n)
                    {
                        part_fails.push(format!("{tag} n={n}: {s:?}"));
                    }
                }
                Err(err) => part_fails.push(format!("{tag} n={n}: {err}")),
            }
        }
        let max_h = census(input).map(|cells| cells.iter().map(|c| c.h).max().unwrap_or(0));
        match (moduli_dimension(input), max_h) {
            (Ok(d), Ok(h)) if d as i64 == h => {}
            (d, h) => dim_fails.push(format!("{tag}: dim={d:?} max h={h:?}")),
        }
        for q in [input.p() as u64, (input.p() as u64).pow(2)] {
            let a = model_count(input, q);
            let b = census_count(input, q);
            if a.is_err() || a != b {
                count_fails.push(format!("{tag} q={q}: {a:?} vs {b:?}"));
            }
        }
    }
    out.push(CheckOutcome::from_failures("formula_equals_census", grid.len(), table_fails));
    out.push(CheckOutcome::from_failures(
        "partition_identity",
        grid.iter().map(|i| i.e() as usize + 1).sum(),
        part_fails,
    ));
    out.push(CheckOutcome::from_failures("moduli_dimension", grid.len(), dim_fails));
    out.push(CheckOutcome::from_failures(
        "census_count_equals_model_count",
        2 * grid.len(),
        count_fails,
    ));

    out.push(CheckOutcome::from_failures("aut_bookkeeping", 3, {
        [3, 5, 7]
            .iter()
            .filter_map(|&p| match example_decomposition(p) {
                Ok(d) if d.aut_order == (p as u64) * (p as u64 + 1) * (p as u64 - 1).pow(2) => {
                    None
                }
                other => Some(format!("p={p}: {other:?}")),
            })
            .collect()
    }));

    // brute force
    let mut runs = Vec::new();
    let mut oracle_errors = Vec::new();
    for &(p, e_max, k) in &scale.oracle_runs {
        let spec = match FieldSpec::new(p, k) {
            Ok(s) => Arc::new(s),
            Err(err) => {
                oracle_errors.push(err.to_string());
                continue;
            }
        };
        for e in 1..=e_max {
            let input = RamificationInput::new(p, e).expect("valid grid");
            match run_oracle(input, &spec) {
                Ok(run) => runs.push(run),
                Err(err) => oracle_errors.push(format!("p={p} e={e} k={k}: {err}")),
            }
        }
    }

    let mut fails = oracle_errors.clone();
    for run in &runs {
        let tag = format!("p={} e={} q={}", run.input.p(), run.input.e(), run.q);
        match model_count(&run.input, run.q) {
            Ok(c) if c == ModelCount::from(run.total) => {}
            other => fails.push(format!("{tag}: oracle {} vs formula {other:?}", run.total)),
        }
        if let Ok(cells) = census(&run.input) {
            for c in cells {
                let expect = run.q.pow(c.h as u32);
                let got = run.cells[&(c.s, c.t)];
                if got != expect {
                    fails.push(format!("{tag} cell ({},{}): {got} vs q^{}", c.s, c.t, c.h));
                }
            }
        }
    }
    out.push(CheckOutcome::from_failures("oracle_agreement", runs.len(), fails));

    // extension field: oracle over GF(q^2) against sum c_n q^(2n)
    let mut fails = oracle_errors.clone();
    let mut n = 0;
    for run in runs.iter().filter(|r| r.q != r.input.p() as u64) {
        n += 1;
        let base = run.input.p() as u64;
        let k = run.q.ilog(base);
        match zeta_factors(&run.input, base) {
            Ok(z) if z.point_count(k) == BigUint::from(run.total) => {}
            other => fails.push(format!(
                "p={} e={} q={}: oracle {} vs {other:?}",
                run.input.p(),
                run.input.e(),
                run.q,
                run.total
            )),
        }
    }
    out.push(CheckOutcome::from_failures("zeta_extension", n, fails));

    let candidates: u64 = runs.iter().map(|r| r.candidates).sum();
    let mismatches: usize = runs.iter().map(|r| r.mismatches).sum();
    out.push(CheckOutcome {
        name: "condition_equivalence",
        passed: mismatches == 0 && oracle_errors.is_empty(),
        detail: format!("{mismatches} mismatches over {candidates} candidates"),
    });

    let fails: Vec<String> = runs
        .iter()
        .flat_map(|r| r.cancellation_failures.iter().cloned())
        .collect();
    let points: u64 = runs.iter().map(|r| r.total).sum();
    out.push(CheckOutcome::from_failures("cancellation_structure", points as usize, fails));

    let fails: Vec<String> = runs
        .iter()
        .flat_map(|r| r.truncation_failures.iter().cloned())
        .collect();
    let checked = runs.iter().map(|r| r.truncation_checked).sum();
    out.push(CheckOutcome::from_failures("truncation_well_defined", checked, fails));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        for check in run_suite(Suite::Quick) {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("desk".parse::<Suite>(), Ok(Suite::Desk));
        assert!("full".parse::<Suite>().is_err());
    }
}
