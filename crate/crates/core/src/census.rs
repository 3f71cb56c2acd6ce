//! Cell-by-cell census of the moduli space.
//!
//! Points split into cells indexed by the Iwasawa exponents (s, t) with
//! `0 <= s, t <= e_0`; the cell (s, t) has exactly `q^h` points. Each cell
//! is classified by whether `(p-1)(s+t) <= e` (low/high) and by how
//! `ps - t` compares to the valuation threshold `max{0, (p-1)(s+t) - e}`.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{prime_power_exponent, ModelCount, RamificationInput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    /// s + t <= e_0, ps - t >= 0
    #[serde(rename = "LOW_GE")]
    LowGe,
    /// s + t <= e_0, ps - t < 0
    #[serde(rename = "LOW_LT")]
    LowLt,
    /// s + t > e_0, ps - t >= (p-1)(s+t) - e
    #[serde(rename = "HIGH_GE")]
    HighGe,
    /// s + t > e_0, ps - t < (p-1)(s+t) - e
    #[serde(rename = "HIGH_LT")]
    HighLt,
}

impl CaseTag {
    pub fn is_low(self) -> bool {
        matches!(self, CaseTag::LowGe | CaseTag::LowLt)
    }

    /// The lowest terms of `v u^{(p-1)s}` and `phi(v) u^{(p-1)t}` can cancel
    /// below the threshold, adding one free coefficient.
    pub fn has_cancellation(self) -> bool {
        matches!(self, CaseTag::LowLt | CaseTag::HighLt)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::LowGe => "LOW_GE",
            CaseTag::LowLt => "LOW_LT",
            CaseTag::HighGe => "HIGH_GE",
            CaseTag::HighLt => "HIGH_LT",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CellCount {
    pub s: i64,
    pub t: i64,
    #[serde(rename = "case")]
    pub case_tag: CaseTag,
    pub r: i64,
    pub h: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PartitionSizes {
    pub n: u32,
    pub s_n1: u64,
    pub s_n2: u64,
    pub s_n1p: u64,
    pub s_n2p: u64,
}

impl PartitionSizes {
    pub fn total(&self) -> u64 {
        self.s_n1 + self.s_n2 + self.s_n1p + self.s_n2p
    }
}

fn check_cell(input: &RamificationInput, s: i64, t: i64) -> Result<()> {
    let e0 = input.e0();
    if !(0..=e0).contains(&s) {
        return Err(Error::invalid("s", format!("{s} outside [0, {e0}]")));
    }
    if !(0..=e0).contains(&t) {
        return Err(Error::invalid("t", format!("{t} outside [0, {e0}]")));
    }
    Ok(())
}

/// The valuation threshold `max{0, (p-1)(s+t) - e}`.
pub fn threshold(input: &RamificationInput, s: i64, t: i64) -> i64 {
    ((input.p() - 1) * (s + t) - input.e()).max(0)
}

/// Pole bound `min{(p-1)s, [(e-(p-1)s)/p], e-(p-1)t, [(p-1)t/p]}`.
pub fn r_st(input: &RamificationInput, s: i64, t: i64) -> Result<i64> {
    check_cell(input, s, t)?;
    let (p, e) = (input.p(), input.e());
    let m = p - 1;
    Ok((m * s)
        .min((e - m * s).div_euclid(p))
        .min(e - m * t)
        .min((m * t).div_euclid(p)))
}

/// Classifies the cell and computes h from the case formula, checking it
/// against `r_{s,t}` (+1 in the cancelling cases).
pub fn h_st(input: &RamificationInput, s: i64, t: i64) -> Result<CellCount> {
    let r = r_st(input, s, t)?;
    let (p, e, e0) = (input.p(), input.e(), input.e0());
    let m = p - 1;

    let thr = threshold(input, s, t);
    let low = thr == 0;
    if low != (s + t <= e0) {
        return Err(Error::Inconsistency(format!(
            "p={p} e={e} cell ({s},{t}): threshold {thr} disagrees with s+t <= e_0 = {e0}"
        )));
    }
    let ge = p * s - t >= thr;
    let (case_tag, h) = match (low, ge) {
        (true, true) => (CaseTag::LowGe, (m * t).div_euclid(p)),
        (true, false) => (CaseTag::LowLt, m * s + 1),
        (false, true) => (CaseTag::HighGe, (e - m * s).div_euclid(p)),
        (false, false) => (CaseTag::HighLt, e - m * t + 1),
    };
    let expected = r + i64::from(case_tag.has_cancellation());
    if h != expected {
        return Err(Error::Inconsistency(format!(
            "p={p} e={e} cell ({s},{t}) {case_tag}: case formula gives h={h}, r_st gives {expected}"
        )));
    }
    if !(0..=e).contains(&h) {
        return Err(Error::Inconsistency(format!(
            "p={p} e={e} cell ({s},{t}): h={h} outside [0, e]"
        )));
    }
    Ok(CellCount {
        s,
        t,
        case_tag,
        r,
        h,
    })
}

/// All (e_0+1)^2 cells, s major.
pub fn census(input: &RamificationInput) -> Result<Vec<CellCount>> {
    let e0 = input.e0();
    let mut cells = Vec::with_capacity(((e0 + 1) * (e0 + 1)) as usize);
    for s in 0..=e0 {
        for t in 0..=e0 {
            cells.push(h_st(input, s, t)?);
        }
    }
    Ok(cells)
}

/// Number of cells with each h, indexed 0..=e.
pub fn histogram(input: &RamificationInput) -> Result<Vec<u64>> {
    let mut hist = vec![0u64; input.e() as usize + 1];
    for cell in census(input)? {
        hist[cell.h as usize] += 1;
    }
    Ok(hist)
}

/// `sum over cells of q^h`.
pub fn census_count(input: &RamificationInput, q: u64) -> Result<ModelCount> {
    prime_power_exponent(input.p(), q)?;
    let q = BigUint::from(q);
    let total = census(input)?
        .iter()
        .map(|c| q.pow(c.h as u32))
        .sum();
    Ok(ModelCount(total))
}

/// Sizes of S_{n,1}, S_{n,2}, S'_{n,1}, S'_{n,2}: the cells with h = n in
/// each of the four regions.
pub fn partition_sizes(input: &RamificationInput, n: u32) -> Result<PartitionSizes> {
    let mut out = PartitionSizes {
        n,
        ..Default::default()
    };
    for cell in census(input)? {
        if cell.h != n as i64 {
            continue;
        }
        match cell.case_tag {
            CaseTag::LowGe => out.s_n1 += 1,
            CaseTag::LowLt => out.s_n2 += 1,
            CaseTag::HighGe => out.s_n1p += 1,
            CaseTag::HighLt => out.s_n2p += 1,
        }
    }
    Ok(out)
}
