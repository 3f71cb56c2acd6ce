//! Closed-form count of finite flat models.
//!
//! For a totally ramified K/Q_p of degree e and a residue field of size q,
//! the number of models is `sum_n c_n q^n` with `c_n = a_n + a'_n`. The
//! coefficients depend only on (p, e); this module evaluates them, the
//! resulting count, its zeta factorization and the moduli dimension.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::census;
use crate::error::{Error, Result};
use crate::gf::is_prime;

/// The pair (p, e) with `e = (p-1) e_0 + e_1`, `0 <= e_1 <= p-2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RamificationInput {
    p: i64,
    e: i64,
    e0: i64,
    e1: i64,
}

impl RamificationInput {
    /// Validates (p, e) and computes the decomposition of e.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::invalid("p", format!("{p} is not an odd prime")));
        }
        if e < 1 {
            return Err(Error::invalid("e", "ramification degree must be at least 1"));
        }
        let (p, e) = (p as i64, e as i64);
        Ok(RamificationInput {
            p,
            e,
            e0: e / (p - 1),
            e1: e % (p - 1),
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn e0(&self) -> i64 {
        self.e0
    }

    pub fn e1(&self) -> i64 {
        self.e1
    }
}

/// `n = (p-1) n_0 + n_1 = (p-1) n'_0 + n'_1 + e_1` with both remainders in
/// `[0, p-2]`. `n'_0` is `-1` exactly when `n < e_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightDecomposition {
    pub n: i64,
    pub n0: i64,
    pub n1: i64,
    pub n0p: i64,
    pub n1p: i64,
}

pub fn decompose_n(input: &RamificationInput, n: u32) -> WeightDecomposition {
    let n = n as i64;
    let m = input.p - 1;
    // floor semantics: n - e_1 may be negative
    let shifted = n - input.e1;
    WeightDecomposition {
        n,
        n0: n / m,
        n1: n % m,
        n0p: shifted.div_euclid(m),
        n1p: shifted.rem_euclid(m),
    }
}

fn pos(x: i64) -> u64 {
    x.max(0) as u64
}

/// The unprimed coefficient a_n.
pub fn coeff_a(input: &RamificationInput, n: u32) -> u64 {
    let w = decompose_n(input, n);
    let base = input.e0 - (input.p + 1) * w.n0 - w.n1;
    if w.n1 == 0 || w.n1 == 1 {
        pos(base - 1) + pos(base + 1)
    } else {
        pos(base - 1)
    }
}

/// The primed coefficient a'_n, with a'_0 = e_0 when e_1 = p - 2.
pub fn coeff_a_prime(input: &RamificationInput, n: u32) -> u64 {
    if n == 0 && input.e1 == input.p - 2 {
        return input.e0 as u64;
    }
    let w = decompose_n(input, n);
    let base = input.e0 - input.e1 - (input.p + 1) * w.n0p - w.n1p;
    if w.n1p == 0 || w.n1p == 1 {
        pos(base - 2) + pos(base)
    } else {
        pos(base - 2)
    }
}

/// An exact nonnegative count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelCount(pub BigUint);

impl ModelCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl fmt::Display for ModelCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for ModelCount {
    fn from(v: u64) -> Self {
        ModelCount(BigUint::from(v))
    }
}

// Decimal string so that no JSON consumer truncates it.
impl Serialize for ModelCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

/// a_n and a'_n for n = 0..=e.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientTable {
    pub input: RamificationInput,
    pub a: Vec<u64>,
    pub a_prime: Vec<u64>,
}

impl CoefficientTable {
    /// c_n = a_n + a'_n; zero past the table.
    pub fn c(&self, n: usize) -> u64 {
        match (self.a.get(n), self.a_prime.get(n)) {
            (Some(a), Some(b)) => a + b,
            _ => 0,
        }
    }

    pub fn coefficients(&self) -> Vec<u64> {
        (0..self.a.len()).map(|n| self.c(n)).collect()
    }

    /// Largest n with c_n != 0.
    pub fn dimension(&self) -> u32 {
        (0..self.a.len())
            .rev()
            .find(|&n| self.c(n) != 0)
            .unwrap_or(0) as u32
    }

    /// `sum_n c_n q^n`.
    pub fn evaluate(&self, q: &BigUint) -> BigUint {
        // Horner
        let mut acc = BigUint::zero();
        for n in (0..self.a.len()).rev() {
            acc = acc * q + BigUint::from(self.c(n));
        }
        acc
    }
}

/// Computes the table for n = 0..=e and checks it against the cell census:
/// every c_n with n above the largest cell exponent must vanish.
pub fn coefficient_table(input: &RamificationInput) -> Result<CoefficientTable> {
    let len = input.e as u32 + 1;
    let a: Vec<u64> = (0..len).map(|n| coeff_a(input, n)).collect();
    let a_prime: Vec<u64> = (0..len).map(|n| coeff_a_prime(input, n)).collect();
    let table = CoefficientTable {
        input: *input,
        a,
        a_prime,
    };

    let max_h = census::census(input)?
        .iter()
        .map(|c| c.h)
        .max()
        .unwrap_or(0);
    if let Some(n) = (0..len as usize).find(|&n| n as i64 > max_h && table.c(n) != 0) {
        return Err(Error::Inconsistency(format!(
            "p={} e={}: c_{n} = {} but the census has no cell with h > {max_h}",
            input.p,
            input.e,
            table.c(n)
        )));
    }
    if table.c(0) == 0 {
        return Err(Error::Inconsistency(format!(
            "p={} e={}: c_0 = 0",
            input.p, input.e
        )));
    }
    Ok(table)
}

/// Returns k with q = p^k, k >= 1.
pub fn prime_power_exponent(p: i64, q: u64) -> Result<u32> {
    let p = p as u64;
    let mut k = 0;
    let mut r = q;
    while r > 1 && r % p == 0 {
        r /= p;
        k += 1;
    }
    if r != 1 || k == 0 {
        return Err(Error::invalid("q", format!("{q} is not a power of {p}")));
    }
    Ok(k)
}

/// `|M(C_F, K)| = sum_n c_n q^n` for |F| = q.
pub fn model_count(input: &RamificationInput, q: u64) -> Result<ModelCount> {
    prime_power_exponent(input.p, q)?;
    let table = coefficient_table(input)?;
    Ok(ModelCount(table.evaluate(&BigUint::from(q))))
}

/// Multiplicities of Z(T) = prod_n (1 - q^n T)^(-c_n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaFactors {
    /// (weight n, multiplicity c_n), weights increasing, c_n > 0.
    pub factors: Vec<(u32, u64)>,
    pub q: u64,
}

impl ZetaFactors {
    /// Point count over the degree-m extension: `sum c_n q^(m n)`.
    pub fn point_count(&self, m: u32) -> BigUint {
        let qm = BigUint::from(self.q).pow(m);
        self.factors
            .iter()
            .map(|&(n, c)| BigUint::from(c) * qm.pow(n))
            .sum()
    }
}

pub fn zeta_factors(input: &RamificationInput, q: u64) -> Result<ZetaFactors> {
    prime_power_exponent(input.p, q)?;
    let table = coefficient_table(input)?;
    let factors = table
        .coefficients()
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(n, c)| (n as u32, c))
        .collect();
    Ok(ZetaFactors { factors, q })
}

pub fn moduli_dimension(input: &RamificationInput) -> Result<u32> {
    Ok(coefficient_table(input)?.dimension())
}

/// Bookkeeping for K = Q_p(zeta_p), F = F_p: the p + 3 models split as
/// Z/p+Z/p, mu_p+mu_p and the (p+1) twists of Z/p+mu_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleDecomposition {
    pub p: u32,
    pub total: ModelCount,
    pub aut_order: u64,
    pub middle_orbit: u64,
}

pub fn example_decomposition(p: u32) -> Result<ExampleDecomposition> {
    let input = RamificationInput::new(p, p - 1)?;
    let total = model_count(&input, p as u64)?;
    let pp = p as u64;
    // |Aut(C_{F_p})| = |GL_2(F_p)|
    let aut_order = pp * (pp + 1) * (pp - 1) * (pp - 1);
    // |Aut(Z/p + mu_p)| = |Aut(Z/p)| |Hom(Z/p, mu_p)| |Aut(mu_p)|
    let stabilizer = (pp - 1) * pp * (pp - 1);
    let middle_orbit = aut_order / stabilizer;
    if middle_orbit != pp + 1 || total.0 != BigUint::from(1 + middle_orbit + 1) {
        return Err(Error::Inconsistency(format!(
            "p={p}: total {} != 1 + {middle_orbit} + 1",
            total
        )));
    }
    Ok(ExampleDecomposition {
        p,
        total,
        aut_order,
        middle_orbit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(p: u32, e: u32) -> RamificationInput {
        RamificationInput::new(p, e).unwrap()
    }

    #[test]
    fn decompose_e_examples() {
        let i = input(5, 7);
        assert_eq!((i.e0(), i.e1()), (1, 3));
        let i = input(3, 2);
        assert_eq!((i.e0(), i.e1()), (1, 0));
        let i = input(7, 5);
        assert_eq!((i.e0(), i.e1()), (0, 5));
    }

    #[test]
    fn decompose_e_rejects_bad_input() {
        assert!(RamificationInput::new(4, 3).is_err());
        assert!(RamificationInput::new(2, 3).is_err());
        assert!(RamificationInput::new(5, 0).is_err());
    }

    #[test]
    fn decompose_n_examples() {
        let w = decompose_n(&input(5, 7), 1);
        assert_eq!((w.n0, w.n1, w.n0p, w.n1p), (0, 1, -1, 2));
        let w = decompose_n(&input(5, 4), 0);
        assert_eq!((w.n0, w.n1, w.n0p, w.n1p), (0, 0, 0, 0));
        // p = 3, e_1 = 1
        let w = decompose_n(&input(3, 5), 4);
        assert_eq!((w.n0, w.n1, w.n0p, w.n1p), (2, 0, 1, 1));
    }

    #[test]
    fn coefficient_examples() {
        let i = input(5, 4);
        assert_eq!([coeff_a(&i, 0), coeff_a(&i, 1), coeff_a(&i, 2)], [2, 1, 0]);
        assert_eq!([coeff_a_prime(&i, 0), coeff_a_prime(&i, 1)], [1, 0]);
        // exceptional case e_1 = p - 2
        assert_eq!(coeff_a_prime(&input(5, 7), 0), 1);
    }

    #[test]
    fn table_examples() {
        assert_eq!(coefficient_table(&input(5, 4)).unwrap().coefficients(), vec![3, 1, 0, 0, 0]);
        let t = coefficient_table(&input(5, 7)).unwrap();
        assert_eq!((t.a[0], t.a_prime[0], t.a[1], t.a_prime[1]), (2, 1, 1, 0));
        assert_eq!(t.coefficients(), vec![3, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(coefficient_table(&input(5, 2)).unwrap().coefficients(), vec![1, 0, 0]);
    }

    #[test]
    fn counts() {
        assert_eq!(model_count(&input(5, 4), 5).unwrap(), ModelCount::from(8));
        assert_eq!(model_count(&input(3, 2), 3).unwrap(), ModelCount::from(6));
        assert_eq!(model_count(&input(5, 2), 25).unwrap(), ModelCount::from(1));
        assert!(model_count(&input(5, 4), 9).is_err());
        assert!(model_count(&input(5, 4), 1).is_err());
    }

    #[test]
    fn count_exceeds_64_bits() {
        // q = 13^2, large e: the count must not wrap
        let c = model_count(&input(13, 40 * 12), 169).unwrap();
        assert!(c.0.bits() > 64);
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta_factors(&input(5, 4), 5).unwrap().factors, vec![(0, 3), (1, 1)]);
        assert_eq!(zeta_factors(&input(5, 2), 5).unwrap().factors, vec![(0, 1)]);
        let z = zeta_factors(&input(5, 7), 5).unwrap();
        assert_eq!(z.factors, vec![(0, 3), (1, 1)]);
        assert_eq!(z.point_count(2), BigUint::from(28u32));
    }

    #[test]
    fn dimensions() {
        assert_eq!(moduli_dimension(&input(5, 4)).unwrap(), 1);
        assert_eq!(moduli_dimension(&input(5, 2)).unwrap(), 0);
        assert_eq!(moduli_dimension(&input(3, 2)).unwrap(), 1);
    }

    #[test]
    fn example_bookkeeping() {
        let d = example_decomposition(5).unwrap();
        assert_eq!((d.total.clone(), d.middle_orbit), (ModelCount::from(8), 6));
        let d = example_decomposition(3).unwrap();
        assert_eq!((d.total.clone(), d.middle_orbit), (ModelCount::from(6), 4));
        assert_eq!(example_decomposition(7).unwrap().aut_order, 2016);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_exponent(3, 27).unwrap(), 3);
        assert!(prime_power_exponent(3, 12).is_err());
        assert!(prime_power_exponent(3, 0).is_err());
    }
}
