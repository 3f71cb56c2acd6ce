//! Arithmetic in GF(p^k) for odd primes p.
//!
//! Elements are coordinate vectors in the power basis of a fixed monic
//! irreducible modulus. The modulus is the lexicographically smallest monic
//! irreducible polynomial of degree k, comparing coefficients from the
//! constant term upward, so element enumeration order is reproducible.

use std::fmt;

use crate::error::{Error, Result};

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A finite field GF(p^k) together with its defining modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    /// Coefficients of the monic modulus, constant term first; length k + 1.
    modulus: Vec<u32>,
    q: u64,
}

/// An element of GF(p^k) as k residues mod p, constant coordinate first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl FieldSpec {
    /// Builds GF(p^k) with the smallest-lex monic irreducible modulus.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::invalid("p", "characteristic 2 is not supported"));
        }
        if !is_prime(p as u64) {
            return Err(Error::invalid("p", format!("{p} is not prime")));
        }
        if k < 1 {
            return Err(Error::invalid("k", "extension degree must be at least 1"));
        }
        let q = (p as u64)
            .checked_pow(k)
            .ok_or_else(|| Error::invalid("k", format!("{p}^{k} does not fit in 64 bits")))?;
        let modulus = smallest_irreducible(p, k as usize);
        Ok(FieldSpec { p, k, modulus, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.k as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The image of an integer under Z -> GF(p) -> GF(p^k).
    pub fn from_int(&self, n: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = n.rem_euclid(self.p as i64) as u32;
        e
    }

    /// Validates a coordinate vector against this field.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.k as usize {
            return Err(Error::invalid(
                "coeffs",
                format!("expected {} coordinates, got {}", self.k, coeffs.len()),
            ));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::invalid(
                "coeffs",
                format!("coordinate {c} is not reduced mod {}", self.p),
            ));
        }
        Ok(FieldElement {
            coeffs: coeffs.to_vec(),
        })
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        a.coeffs.len() == self.k as usize && a.coeffs.iter().all(|&c| c < self.p)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .map(|&x| if x == 0 { 0 } else { self.p - x })
            .collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        if self.k == 1 {
            let c = (a.coeffs[0] as u64 * b.coeffs[0] as u64) % self.p as u64;
            return FieldElement {
                coeffs: vec![c as u32],
            };
        }
        let prod = poly::mul(&a.coeffs, &b.coeffs, self.p);
        let mut coeffs = poly::rem(&prod, &self.modulus, self.p);
        coeffs.resize(self.k as usize, 0);
        FieldElement { coeffs }
    }

    pub fn pow(&self, a: &FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(q-2).
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// The element at position `index` of the enumeration order: the
    /// coordinates read as a base-p counter with the constant coordinate
    /// fastest.
    pub fn element_at(&self, mut index: u64) -> FieldElement {
        debug_assert!(index < self.q);
        let mut coeffs = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            coeffs.push((index % self.p as u64) as u32);
            index /= self.p as u64;
        }
        FieldElement { coeffs }
    }

    /// All q elements, zero first.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.q).map(|i| self.element_at(i)).collect()
    }
}

fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    // Lexicographic with the constant term most significant: treat
    // (c_0, ..., c_{k-1}) as a base-p number whose leading digit is c_0.
    let mut digits = vec![0u32; k];
    loop {
        let mut f = digits.clone();
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
        // increment, least significant digit is c_{k-1}
        let mut i = k;
        loop {
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "no irreducible polynomial of degree {k} over GF({p})");
        }
    }
}

/// Dense polynomials over GF(p), constant term first, no trailing zeros
/// unless stated otherwise.
mod poly {
    pub fn trim(mut f: Vec<u32>) -> Vec<u32> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        // Fermat; p is prime
        let (mut base, mut exp, mut acc) = (a as u64, p as u64 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            exp >>= 1;
        }
        acc as u32
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Remainder of `a` modulo a nonzero `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = r[dr] as u64 * lead_inv % p as u64;
            let shift = dr - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = c * mi as u64 % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    fn powmod(a: &[u32], mut exp: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut base = rem(a, m, p);
        let mut acc = vec![1u32];
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            exp >>= 1;
        }
        acc
    }

    /// Ben-Or: a monic f of degree k is irreducible iff
    /// gcd(x^(p^i) - x, f) = 1 for 1 <= i <= k/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let k = f.len() - 1;
        if k == 1 {
            return true;
        }
        let x = vec![0u32, 1];
        let mut xp = x.clone();
        for _ in 0..k / 2 {
            xp = powmod(&xp, p as u64, f, p);
            let mut diff = xp.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(f, &trim(diff), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_prime_fields() {
        let f = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(FieldSpec::new(5, 1).unwrap().q(), 5);
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f9.q(), 9);
        assert_eq!(f9.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn make_rejects_bad_arguments() {
        for (p, k, name) in [(2, 1, "p"), (9, 1, "p"), (1, 1, "p"), (3, 0, "k")] {
            match FieldSpec::new(p, k) {
                Err(Error::InvalidArgument { name: n, .. }) => assert_eq!(n, name),
                other => panic!("({p},{k}) gave {other:?}"),
            }
        }
    }

    #[test]
    fn make_is_deterministic() {
        for (p, k) in [(3, 3), (5, 2), (7, 3), (13, 2)] {
            assert_eq!(FieldSpec::new(p, k).unwrap(), FieldSpec::new(p, k).unwrap());
        }
    }

    #[test]
    fn prime_field_small_identities() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let two = f3.from_int(2);
        assert_eq!(f3.add(&two, &two), f3.one());
        assert_eq!(f3.mul(&two, &two), f3.one());
        assert_eq!(f3.inv(&two).unwrap(), two);
        let f5 = FieldSpec::new(5, 1).unwrap();
        assert_eq!(f5.inv(&f5.from_int(2)).unwrap(), f5.from_int(3));
        assert_eq!(f5.inv(&f5.one()).unwrap(), f5.one());
    }

    #[test]
    fn inverse_of_zero_is_domain_error() {
        let f = FieldSpec::new(3, 2).unwrap();
        assert!(matches!(f.inv(&f.zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn enumeration_order() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let els = f3.elements();
        assert_eq!(els.len(), 3);
        assert!(els[0].is_zero());

        let f9 = FieldSpec::new(3, 2).unwrap();
        let els = f9.elements();
        assert_eq!(els.len(), 9);
        let mut sorted = els.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 9);
        assert_eq!(els[1].coeffs(), &[1, 0]);
        assert_eq!(els[3].coeffs(), &[0, 1]);

        let f5 = FieldSpec::new(5, 1).unwrap();
        assert_eq!(f5.elements().iter().filter(|&x| *x == f5.one()).count(), 1);
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for (p, k) in [(3, 1), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = FieldSpec::new(p, k).unwrap();
            for a in f.elements().into_iter().skip(1) {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one(), "GF({p}^{k}) {a}");
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
        // a^(q-1) = 1 for all nonzero a, and some element has full order
        let f = FieldSpec::new(3, 3).unwrap();
        let q = f.q();
        let mut has_generator = false;
        for a in f.elements().into_iter().skip(1) {
            assert_eq!(f.pow(&a, q - 1), f.one());
            let order = (1..q).find(|&d| f.pow(&a, d) == f.one()).unwrap();
            has_generator |= order == q - 1;
        }
        assert!(has_generator);
    }

    fn field_and_triple() -> impl Strategy<Value = (FieldSpec, u64, u64, u64)> {
        prop_oneof![
            Just((3u32, 1u32)),
            Just((3, 2)),
            Just((5, 2)),
            Just((7, 3)),
            Just((13, 2))
        ]
        .prop_flat_map(|(p, k)| {
            let f = FieldSpec::new(p, k).unwrap();
            let q = f.q();
            (Just(f), 0..q, 0..q, 0..q)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn field_axioms((f, i, j, l) in field_and_triple()) {
            let (a, b, c) = (f.element_at(i), f.element_at(j), f.element_at(l));
            prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
            prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(
                f.mul(&a, &f.add(&b, &c)),
                f.add(&f.mul(&a, &b), &f.mul(&a, &c))
            );
            prop_assert_eq!(f.add(&a, &f.zero()), a.clone());
            prop_assert_eq!(f.mul(&a, &f.one()), a.clone());
            prop_assert!(f.mul(&a, &f.zero()).is_zero());
            prop_assert!(f.add(&a, &f.neg(&a)).is_zero());
            if !a.is_zero() {
                prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
        }
    }
}
