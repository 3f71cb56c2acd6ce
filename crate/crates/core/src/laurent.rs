//! Finite-support Laurent polynomials over GF(q) in the variable u.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// The u-adic valuation; `Infinity` is reserved for zero and exceeds every
/// finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinity
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// A Laurent polynomial stored as a sparse map exponent -> nonzero coefficient.
#[derive(Debug, Clone)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, FieldElement>,
    spec: Arc<FieldSpec>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl LaurentPoly {
    pub fn zero(spec: Arc<FieldSpec>) -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
            spec,
        }
    }

    pub fn one(spec: Arc<FieldSpec>) -> Self {
        let one = spec.one();
        Self::monomial(spec, one, 0)
    }

    /// `coeff * u^exp`; zero if `coeff` is zero.
    pub fn monomial(spec: Arc<FieldSpec>, coeff: FieldElement, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { terms, spec }
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, summing
    /// repeated exponents and dropping zeros.
    pub fn from_terms(
        spec: Arc<FieldSpec>,
        terms: impl IntoIterator<Item = (i64, FieldElement)>,
    ) -> Result<Self> {
        let mut out = BTreeMap::<i64, FieldElement>::new();
        for (exp, c) in terms {
            if !spec.contains(&c) {
                return Err(Error::FieldMismatch(format!(
                    "coefficient {c} of u^{exp} is not an element of GF({})",
                    spec.q()
                )));
            }
            let sum = match out.get(&exp) {
                Some(prev) => spec.add(prev, &c),
                None => c,
            };
            if sum.is_zero() {
                out.remove(&exp);
            } else {
                out.insert(exp, sum);
            }
        }
        Ok(LaurentPoly { terms: out, spec })
    }

    /// Trusted constructor for callers that already hold canonical terms.
    pub(crate) fn from_canonical(spec: Arc<FieldSpec>, terms: BTreeMap<i64, FieldElement>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero() && spec.contains(c)));
        LaurentPoly { terms, spec }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &FieldElement)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> FieldElement {
        self.terms
            .get(&exp)
            .cloned()
            .unwrap_or_else(|| self.spec.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.keys().next() {
            Some(&e) => Valuation::Finite(e),
            None => Valuation::Infinity,
        }
    }

    /// The term of least exponent, if any.
    pub fn lowest_term(&self) -> Option<(i64, &FieldElement)> {
        self.terms.iter().next().map(|(&e, c)| (e, c))
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || *self.spec == *other.spec
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!(
                "GF({}) vs GF({})",
                self.spec.q(),
                other.spec.q()
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let mut terms = self.terms.clone();
        for (&exp, c) in &other.terms {
            match terms.get_mut(&exp) {
                Some(prev) => {
                    let sum = self.spec.add(prev, c);
                    if sum.is_zero() {
                        terms.remove(&exp);
                    } else {
                        *prev = sum;
                    }
                }
                None => {
                    terms.insert(exp, c.clone());
                }
            }
        }
        Ok(LaurentPoly {
            terms,
            spec: self.spec.clone(),
        })
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&e, c)| (e, self.spec.neg(c)))
            .collect();
        LaurentPoly {
            terms,
            spec: self.spec.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let mut terms = BTreeMap::<i64, FieldElement>::new();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &other.terms {
                let prod = self.spec.mul(ca, cb);
                let entry = terms.entry(ea + eb).or_insert_with(|| self.spec.zero());
                *entry = self.spec.add(entry, &prod);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(LaurentPoly {
            terms,
            spec: self.spec.clone(),
        })
    }

    /// Multiplies every coefficient by a field element.
    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.spec.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(&e, a)| (e, self.spec.mul(a, c)))
            .collect();
        LaurentPoly {
            terms,
            spec: self.spec.clone(),
        }
    }

    /// Multiplication by u^m.
    pub fn shift(&self, m: i64) -> Self {
        let terms = self.terms.iter().map(|(&e, c)| (e + m, c.clone())).collect();
        LaurentPoly {
            terms,
            spec: self.spec.clone(),
        }
    }

    /// The twist u -> u^p with coefficients fixed, p the characteristic.
    pub fn phi(&self) -> Self {
        let p = self.spec.p() as i64;
        let terms = self.terms.iter().map(|(&e, c)| (p * e, c.clone())).collect();
        LaurentPoly {
            terms,
            spec: self.spec.clone(),
        }
    }

    /// Like [`phi`](Self::phi) but checks that `p` is the characteristic.
    pub fn phi_with(&self, p: u32) -> Result<Self> {
        if p != self.spec.p() {
            return Err(Error::invalid(
                "p",
                format!("{p} is not the characteristic {}", self.spec.p()),
            ));
        }
        Ok(self.phi())
    }

    /// Drops every term of exponent >= t: the canonical representative of
    /// the class of `self` modulo u^t GF(q)[[u]].
    pub fn truncate_mod(&self, t: i64) -> Self {
        let terms = self.terms.range(..t).map(|(&e, c)| (e, c.clone())).collect();
        LaurentPoly {
            terms,
            spec: self.spec.clone(),
        }
    }

    /// Inverse of a nonzero monomial `c u^m`; `None` for anything else.
    pub fn inverse_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&e, c) = self.terms.iter().next()?;
        let inv = self.spec.inv(c).ok()?;
        Some(Self::monomial(self.spec.clone(), inv, -e))
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending exponents joined by " + ", e.g. `2*u^-1 + 1*u^3`; zero is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*u^{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u32, k: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::new(p, k).unwrap())
    }

    fn mono(spec: &Arc<FieldSpec>, c: i64, e: i64) -> LaurentPoly {
        LaurentPoly::monomial(spec.clone(), spec.from_int(c), e)
    }

    #[test]
    fn valuations() {
        let f = gf(3, 1);
        assert_eq!(LaurentPoly::zero(f.clone()).valuation(), Valuation::Infinity);
        assert_eq!(mono(&f, 1, 1).valuation(), Valuation::Finite(1));
        let g = mono(&f, 1, -2).add(&mono(&f, 1, 3)).unwrap();
        assert_eq!(g.valuation(), Valuation::Finite(-2));
        assert!(Valuation::Infinity > Valuation::Finite(i64::MAX));
    }

    #[test]
    fn addition_cancels() {
        let f = gf(3, 1);
        let a = mono(&f, 1, 1).add(&mono(&f, 1, 2)).unwrap();
        let b = mono(&f, 2, 1);
        assert_eq!(a.add(&b).unwrap(), mono(&f, 1, 2));
        assert!(a.add(&a.neg()).unwrap().is_zero());
        assert_eq!(a.add(&LaurentPoly::zero(f.clone())).unwrap(), a);
    }

    #[test]
    fn products_and_shifts() {
        let f = gf(5, 1);
        assert_eq!(mono(&f, 1, 3).mul(&mono(&f, 1, -7)).unwrap(), mono(&f, 1, -4));
        let g = mono(&f, 2, -1).add(&mono(&f, 3, 4)).unwrap();
        assert_eq!(g.mul(&LaurentPoly::one(f.clone())).unwrap(), g);
        assert_eq!(mono(&f, 1, 2).shift(3), mono(&f, 1, 5));
        assert_eq!(g.shift(0), g);
        assert!(LaurentPoly::zero(f.clone()).shift(4).is_zero());
    }

    #[test]
    fn phi_fixes_coefficients() {
        let f = gf(3, 2);
        let alpha = f.element(&[2, 1]).unwrap();
        let m = LaurentPoly::monomial(f.clone(), alpha.clone(), -2);
        assert_eq!(m.phi(), LaurentPoly::monomial(f.clone(), alpha, -6));
        assert!(LaurentPoly::zero(f.clone()).phi().is_zero());
        assert!(m.phi_with(5).is_err());
    }

    #[test]
    fn truncation() {
        let f = gf(3, 1);
        let g = mono(&f, 1, -1).add(&mono(&f, 1, 2)).unwrap();
        assert_eq!(g.truncate_mod(2), mono(&f, 1, -1));
        assert_eq!(g.truncate_mod(3), g);
        assert!(mono(&f, 2, 4).truncate_mod(4).is_zero());
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = mono(&gf(3, 1), 1, 0);
        let b = mono(&gf(3, 2), 1, 0);
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(_))));
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn rendering() {
        let f = gf(3, 1);
        let g = mono(&f, 2, -1).add(&mono(&f, 1, 3)).unwrap();
        assert_eq!(g.to_string(), "2*u^-1 + 1*u^3");
        assert_eq!(LaurentPoly::zero(f).to_string(), "0");
        let f9 = gf(3, 2);
        let h = LaurentPoly::monomial(f9.clone(), f9.element(&[0, 1]).unwrap(), 2);
        assert_eq!(h.to_string(), "[0,1]*u^2");
    }

    #[test]
    fn monomial_inverse() {
        let f = gf(5, 1);
        let m = mono(&f, 2, 3);
        let inv = m.inverse_monomial().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), LaurentPoly::one(f.clone()));
        let g = m.add(&mono(&f, 1, 0)).unwrap();
        assert!(g.inverse_monomial().is_none());
        assert!(LaurentPoly::zero(f).inverse_monomial().is_none());
    }

    fn poly_strategy(spec: Arc<FieldSpec>) -> impl Strategy<Value = LaurentPoly> {
        let q = spec.q();
        proptest::collection::vec((-6i64..6, 0..q), 0..6).prop_map(move |pairs| {
            let terms = pairs.into_iter().map(|(e, i)| (e, spec.element_at(i)));
            LaurentPoly::from_terms(spec.clone(), terms).unwrap()
        })
    }

    fn pair() -> impl Strategy<Value = (LaurentPoly, LaurentPoly)> {
        prop_oneof![Just((3u32, 1u32)), Just((3, 2)), Just((5, 1))].prop_flat_map(|(p, k)| {
            let spec = gf(p, k);
            (poly_strategy(spec.clone()), poly_strategy(spec))
        })
    }

    proptest! {
        #[test]
        fn ultrametric((f, g) in pair()) {
            let sum = f.add(&g).unwrap();
            let (vf, vg) = (f.valuation(), g.valuation());
            prop_assert!(sum.valuation() >= vf.min(vg));
            if vf != vg {
                prop_assert_eq!(sum.valuation(), vf.min(vg));
            }
        }

        #[test]
        fn valuation_is_multiplicative((f, g) in pair()) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let vfg = f.mul(&g).unwrap().valuation().finite().unwrap();
            prop_assert_eq!(vfg, f.valuation().finite().unwrap() + g.valuation().finite().unwrap());
        }

        #[test]
        fn phi_is_a_ring_map((f, g) in pair()) {
            prop_assert_eq!(f.mul(&g).unwrap().phi(), f.phi().mul(&g.phi()).unwrap());
            prop_assert_eq!(f.add(&g).unwrap().phi(), f.phi().add(&g.phi()).unwrap());
            if let Some(v) = f.valuation().finite() {
                prop_assert_eq!(f.phi().valuation(), Valuation::Finite(v * f.spec().p() as i64));
            }
        }

        #[test]
        fn truncation_is_idempotent((f, _g) in pair(), t in -4i64..5) {
            let tr = f.truncate_mod(t);
            prop_assert_eq!(tr.truncate_mod(t), tr.clone());
            prop_assert!(f.sub(&tr).unwrap().valuation() >= Valuation::Finite(t));
        }
    }
}
