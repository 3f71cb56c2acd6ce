//! Brute-force point count of the moduli space.
//!
//! A point of cell (s, t) is a lattice with Iwasawa basis matrix
//! `(u^s, w; 0, u^t)`, and two entries w give the same lattice iff they agree
//! modulo `u^t GF(q)[[u]]`. Writing the lattice as `(1, v; 0, 1) . M_{s,t}`
//! gives the twist `v = w u^{-t}`, on which Frobenius acts as
//!
//! ```text
//! A = ( u^{(p-1)s}   phi(v) u^{(p-1)t} - v u^{(p-1)s} )
//!     ( 0            u^{(p-1)t}                       )
//! ```
//!
//! and the Kisin condition `u^e M ⊂ (1⊗φ)(φ*M) ⊂ M` holds iff both `A` and
//! `u^e A^{-1}` are integral. The oracle enumerates every canonical entry w
//! with support in `[-e, t-1]` and tests the condition two ways.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::census::{r_st, threshold};
use crate::error::{Error, Result};
use crate::formula::{ModelCount, RamificationInput};
use crate::gf::{FieldElement, FieldSpec};
use crate::laurent::{LaurentPoly, Valuation};

/// One point of the moduli space in canonical Iwasawa form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePoint {
    pub s: i64,
    pub t: i64,
    /// The upper-right Iwasawa entry, reduced modulo u^t.
    pub entry: LaurentPoly,
}

impl LatticePoint {
    /// Canonicalizes `entry` modulo u^t.
    pub fn new(s: i64, t: i64, entry: &LaurentPoly) -> Self {
        LatticePoint {
            s,
            t,
            entry: entry.truncate_mod(t),
        }
    }

    /// The twist parameter `v = w u^{-t}`.
    pub fn twist(&self) -> LaurentPoly {
        self.entry.shift(-self.t)
    }
}

/// The inequality form of the lattice condition on the twist v:
/// `0 <= (p-1)s, (p-1)t <= e` and
/// `v_u(v u^{(p-1)s} - phi(v) u^{(p-1)t}) >= max{0, (p-1)(s+t) - e}`.
pub fn valuation_condition(input: &RamificationInput, s: i64, t: i64, v: &LaurentPoly) -> bool {
    let m = input.p() - 1;
    let range = 0..=input.e();
    if !range.contains(&(m * s)) || !range.contains(&(m * t)) {
        return false;
    }
    let diff = v
        .shift(m * s)
        .sub(&v.phi().shift(m * t))
        .expect("operands share a field");
    diff.valuation() >= Valuation::Finite(threshold(input, s, t))
}

fn integral(f: &LaurentPoly) -> bool {
    f.valuation() >= Valuation::Finite(0)
}

/// The matrix form of the lattice condition: builds the Frobenius matrix
/// and checks integrality of `A` and of `u^e adj(A) / det(A)`.
pub fn matrix_condition(input: &RamificationInput, s: i64, t: i64, v: &LaurentPoly) -> bool {
    let spec = v.spec().clone();
    let m = input.p() - 1;
    let u_pow = |k: i64| LaurentPoly::monomial(spec.clone(), spec.one(), k);

    let a11 = u_pow(m * s);
    let a12 = v
        .phi()
        .shift(m * t)
        .sub(&v.shift(m * s))
        .expect("operands share a field");
    let a21 = LaurentPoly::zero(spec.clone());
    let a22 = u_pow(m * t);
    let a = [&a11, &a12, &a21, &a22];
    if !a.iter().all(|x| integral(x)) {
        return false;
    }

    let det = a11
        .mul(&a22)
        .and_then(|d| d.sub(&a12.mul(&a21)?))
        .expect("operands share a field");
    let Some(det_inv) = det.inverse_monomial() else {
        return false;
    };
    let scale = u_pow(input.e()).mul(&det_inv).expect("operands share a field");
    let adj = [a22.clone(), a12.neg(), a21.neg(), a11.clone()];
    adj.iter()
        .all(|x| integral(&x.mul(&scale).expect("operands share a field")))
}

/// A candidate on which the two conditions disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub s: i64,
    pub t: i64,
    pub entry: String,
    pub valuation_condition: bool,
    pub matrix_condition: bool,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "cell ({},{}) entry {}: valuation_condition={} matrix_condition={}",
            self.s, self.t, self.entry, self.valuation_condition, self.matrix_condition
        )
    }
}

/// Result of scanning one cell.
#[derive(Debug, Clone)]
pub struct CellScan {
    pub s: i64,
    pub t: i64,
    pub candidates: u64,
    pub points: Vec<LatticePoint>,
    pub mismatches: Vec<Mismatch>,
}

/// Exponent window `[-e, t-1]` of the enumerated Iwasawa entries.
pub fn entry_window(input: &RamificationInput, t: i64) -> std::ops::Range<i64> {
    -input.e()..t
}

/// Number of candidates `q^(t+e)` in cell (s, t), or `None` on overflow.
pub fn cell_candidates(input: &RamificationInput, q: u64, t: i64) -> Option<u64> {
    q.checked_pow(entry_window(input, t).count() as u32)
}

fn check_args(input: &RamificationInput, spec: &FieldSpec, s: i64, t: i64) -> Result<()> {
    if spec.p() as i64 != input.p() {
        return Err(Error::invalid(
            "spec",
            format!("characteristic {} differs from p = {}", spec.p(), input.p()),
        ));
    }
    for (name, x) in [("s", s), ("t", t)] {
        if !(0..=input.e0()).contains(&x) {
            return Err(Error::invalid(name, format!("{x} outside [0, {}]", input.e0())));
        }
    }
    Ok(())
}

/// Odometer over coefficient vectors of a fixed exponent window, yielding
/// entries in base-q counter order with the lowest exponent fastest.
struct EntryOdometer {
    spec: Arc<FieldSpec>,
    elements: Vec<FieldElement>,
    low: i64,
    digits: Vec<usize>,
    done: bool,
}

impl EntryOdometer {
    fn new(spec: Arc<FieldSpec>, window: std::ops::Range<i64>) -> Self {
        let elements = spec.elements();
        let len = window.clone().count();
        EntryOdometer {
            spec,
            elements,
            low: window.start,
            digits: vec![0; len],
            done: false,
        }
    }
}

impl Iterator for EntryOdometer {
    type Item = LaurentPoly;

    fn next(&mut self) -> Option<LaurentPoly> {
        if self.done {
            return None;
        }
        let terms: BTreeMap<i64, FieldElement> = self
            .digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| (self.low + i as i64, self.elements[d].clone()))
            .collect();
        let poly = LaurentPoly::from_canonical(self.spec.clone(), terms);

        self.done = true;
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < self.elements.len() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(poly)
    }
}

/// Enumerates every canonical entry of the cell, tests both conditions,
/// and keeps the points; disagreements are collected, not raised.
pub fn scan_cell(
    input: &RamificationInput,
    spec: &Arc<FieldSpec>,
    s: i64,
    t: i64,
) -> Result<CellScan> {
    check_args(input, spec, s, t)?;
    let mut scan = CellScan {
        s,
        t,
        candidates: 0,
        points: Vec::new(),
        mismatches: Vec::new(),
    };
    for entry in EntryOdometer::new(spec.clone(), entry_window(input, t)) {
        scan.candidates += 1;
        let v = entry.shift(-t);
        let by_valuation = valuation_condition(input, s, t, &v);
        let by_matrix = matrix_condition(input, s, t, &v);
        if by_valuation != by_matrix {
            scan.mismatches.push(Mismatch {
                s,
                t,
                entry: entry.to_string(),
                valuation_condition: by_valuation,
                matrix_condition: by_matrix,
            });
        }
        if by_valuation {
            scan.points.push(LatticePoint { s, t, entry });
        }
    }
    Ok(scan)
}

/// All points of cell (s, t) over `spec`, in enumeration order. A
/// disagreement between the two forms of the lattice condition is an error.
pub fn enumerate_cell(
    input: &RamificationInput,
    spec: &Arc<FieldSpec>,
    s: i64,
    t: i64,
) -> Result<Vec<LatticePoint>> {
    let scan = scan_cell(input, spec, s, t)?;
    if let Some(m) = scan.mismatches.first() {
        return Err(Error::Inconsistency(m.to_string()));
    }
    Ok(scan.points)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub s: i64,
    pub t: i64,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub p: i64,
    pub e: i64,
    pub q: u64,
    pub cells: Vec<CellReport>,
    pub total: ModelCount,
    pub cross_check_failures: Vec<String>,
    #[serde(skip)]
    pub candidates: u64,
}

/// Sums the cell scans over `[0, e_0]^2`.
pub fn oracle_count(input: &RamificationInput, spec: &Arc<FieldSpec>) -> Result<OracleReport> {
    let mut cells = Vec::new();
    let mut failures = Vec::new();
    let mut candidates = 0;
    for s in 0..=input.e0() {
        for t in 0..=input.e0() {
            let scan = scan_cell(input, spec, s, t)?;
            candidates += scan.candidates;
            failures.extend(scan.mismatches.iter().map(|m| m.to_string()));
            cells.push(CellReport {
                s,
                t,
                count: scan.points.len() as u64,
            });
        }
    }
    let total: u64 = cells.iter().map(|c| c.count).sum();
    Ok(OracleReport {
        p: input.p(),
        e: input.e(),
        q: spec.q(),
        cells,
        total: ModelCount::from(total),
        cross_check_failures: failures,
        candidates,
    })
}

/// For a valid twist v with pole order above `r_{s,t}`: the lowest term
/// sits at exponent `s - t`, and removing it leaves pole order at most
/// `r_{s,t}`. Vacuously true for pole order `<= r_{s,t}`.
pub fn cancellation_holds(
    input: &RamificationInput,
    s: i64,
    t: i64,
    v: &LaurentPoly,
) -> Result<bool> {
    let r = r_st(input, s, t)?;
    let Some((low, _)) = v.lowest_term() else {
        return Ok(true);
    };
    if -low <= r {
        return Ok(true);
    }
    if low != s - t {
        return Ok(false);
    }
    let rest = LaurentPoly::from_terms(
        v.spec().clone(),
        v.terms().filter(|&(e, _)| e != low).map(|(e, c)| (e, c.clone())),
    )?;
    Ok(match rest.valuation() {
        Valuation::Finite(vr) => -vr <= r,
        Valuation::Infinity => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(p: u32, e: u32) -> RamificationInput {
        RamificationInput::new(p, e).unwrap()
    }

    fn gf(p: u32, k: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::new(p, k).unwrap())
    }

    #[test]
    fn zero_twist_always_valid() {
        for (p, e) in [(3, 4), (5, 7), (5, 12)] {
            let i = input(p, e);
            let zero = LaurentPoly::zero(gf(p, 1));
            for s in 0..=i.e0() {
                for t in 0..=i.e0() {
                    assert!(valuation_condition(&i, s, t, &zero));
                    assert!(matrix_condition(&i, s, t, &zero));
                }
            }
        }
    }

    #[test]
    fn cancelling_pole_examples() {
        let i = input(5, 7);
        let f = gf(5, 1);
        for a in 1..5 {
            let alpha = f.from_int(a);
            let good = LaurentPoly::monomial(f.clone(), alpha.clone(), -1);
            assert!(valuation_condition(&i, 0, 1, &good));
            assert!(matrix_condition(&i, 0, 1, &good));
            let bad = LaurentPoly::monomial(f.clone(), alpha, -2);
            assert!(!valuation_condition(&i, 0, 1, &bad));
            assert!(!matrix_condition(&i, 0, 1, &bad));
        }
    }

    #[test]
    fn cell_examples() {
        let i = input(5, 7);
        let f5 = gf(5, 1);
        let pts = enumerate_cell(&i, &f5, 0, 0).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].entry.is_zero());
        assert_eq!(enumerate_cell(&i, &f5, 0, 1).unwrap().len(), 5);
        assert_eq!(enumerate_cell(&input(3, 2), &gf(3, 1), 0, 1).unwrap().len(), 3);
    }

    #[test]
    fn cell_arguments_validated() {
        let i = input(5, 7);
        assert!(enumerate_cell(&i, &gf(3, 1), 0, 0).is_err());
        assert!(enumerate_cell(&i, &gf(5, 1), 2, 0).is_err());
    }

    #[test]
    fn oracle_examples() {
        let r = oracle_count(&input(5, 4), &gf(5, 1)).unwrap();
        assert_eq!(r.total, ModelCount::from(8));
        assert!(r.cross_check_failures.is_empty());
        assert_eq!(oracle_count(&input(3, 2), &gf(3, 1)).unwrap().total, ModelCount::from(6));
        let r = oracle_count(&input(3, 2), &gf(3, 2)).unwrap();
        assert_eq!(r.total, ModelCount::from(12));
        assert_eq!(r.cells.iter().map(|c| c.count).sum::<u64>(), 12);
    }

    #[test]
    fn points_are_canonical() {
        let i = input(3, 4);
        let f = gf(3, 1);
        for s in 0..=i.e0() {
            for t in 0..=i.e0() {
                for pt in enumerate_cell(&i, &f, s, t).unwrap() {
                    assert_eq!(LatticePoint::new(s, t, &pt.entry), pt);
                    assert!(pt.entry.max_exponent().map_or(true, |m| m < t));
                }
            }
        }
    }

    #[test]
    fn cancellation_structure() {
        let i = input(3, 5);
        let f = gf(3, 1);
        let mut saw_deep_pole = false;
        for s in 0..=i.e0() {
            for t in 0..=i.e0() {
                let r = r_st(&i, s, t).unwrap();
                for pt in enumerate_cell(&i, &f, s, t).unwrap() {
                    let v = pt.twist();
                    assert!(cancellation_holds(&i, s, t, &v).unwrap());
                    if let Valuation::Finite(low) = v.valuation() {
                        saw_deep_pole |= -low > r;
                    }
                }
            }
        }
        assert!(saw_deep_pole);
    }
}
