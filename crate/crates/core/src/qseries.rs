//! Exact polynomials in `q` with rational exponents and arbitrary-precision
//! integer coefficients, plus the q-binomial and q-multinomial builders.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QSeriesError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division left a nonzero remainder")]
    Remainder,
}

/// A finite sum `Σ c_e q^e`. Zero coefficients are never stored, so derived
/// equality is exact term-by-term equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    terms: BTreeMap<Rat, BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rat::zero(), 1)
    }

    pub fn monomial(exponent: Rat, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exponent, coeff.into());
        p
    }

    /// `q^exponent` with coefficient one.
    pub fn q_pow(exponent: Rat) -> Self {
        Self::monomial(exponent, 1)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Rat, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Adds `c q^e` in place, keeping the canonical form.
    pub fn add_term(&mut self, exponent: Rat, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponent: Rat) -> BigInt {
        self.terms.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn min_exponent(&self) -> Option<Rat> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<Rat> {
        self.terms.keys().next_back().copied()
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e.is_integer())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Multiplies by `q^a`.
    pub fn scale_by_monomial(&self, a: Rat) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + a, c.clone())).collect(),
        }
    }

    pub fn scale_by_integer(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Drops every term with exponent strictly greater than `order`.
    pub fn truncate(&self, order: Rat) -> Self {
        Self {
            terms: self
                .terms
                .range(..=order)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Product keeping only exponents `<= order`.
    pub fn mul_truncated(&self, other: &Self, order: Rat) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in other.terms.range(..=(order - e1)) {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Exact quotient `self / divisor`; fails if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, QSeriesError> {
        let (&lead_e, lead_c) = divisor
            .terms
            .iter()
            .next_back()
            .ok_or(QSeriesError::DivisionByZero)?;
        let lead_c = lead_c.clone();
        let Some(self_min) = self.min_exponent() else {
            return Ok(Self::zero());
        };
        let floor = self_min - divisor.min_exponent().unwrap_or(lead_e);
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        while let Some((&top_e, top_c)) = rem.terms.iter().next_back() {
            let qe = top_e - lead_e;
            if qe < floor {
                return Err(QSeriesError::Remainder);
            }
            let (qc, r) = top_c.div_rem(&lead_c);
            if !r.is_zero() {
                return Err(QSeriesError::Remainder);
            }
            for (de, dc) in &divisor.terms {
                rem.add_term(qe + de, -(&qc * dc));
            }
            quotient.add_term(qe, qc);
        }
        Ok(quotient)
    }

    /// Returns `a` such that `self = q^a · other`, if one exists.
    pub fn monomial_ratio(&self, other: &Self) -> Option<Rat> {
        let a = self.min_exponent()? - other.min_exponent()?;
        (other.scale_by_monomial(a) == *self).then_some(a)
    }
}

/// `(q)_m = Π_{k=1}^{m} (1 − q^k)`; the empty product for `m <= 0`.
pub fn q_pochhammer(m: i64) -> QPoly {
    let mut dense = vec![BigInt::one()];
    for k in 1..=m.max(0) as usize {
        let mut next = dense.clone();
        next.resize(dense.len() + k, BigInt::zero());
        for (e, c) in dense.iter().enumerate() {
            next[e + k] -= c;
        }
        dense = next;
    }
    from_dense(&dense)
}

/// Series of `1/(q)_m` truncated to exponents `<= order`. Passing
/// `m >= order` yields the truncation of `1/(q)_∞`.
pub fn inv_q_pochhammer(m: i64, order: Rat) -> QPoly {
    if order < Rat::zero() {
        return QPoly::zero();
    }
    let top = order.floor().to_integer() as usize;
    let mut dense = vec![BigInt::zero(); top + 1];
    dense[0] = BigInt::one();
    for k in 1..=(m.max(0) as usize).min(top) {
        for e in k..=top {
            let prev = dense[e - k].clone();
            dense[e] += prev;
        }
    }
    from_dense(&dense)
}

fn from_dense(dense: &[BigInt]) -> QPoly {
    QPoly::from_terms(
        dense
            .iter()
            .enumerate()
            .map(|(e, c)| (Rat::from_integer(e as i64), c.clone())),
    )
}

/// The q-multinomial `(q)_N / Π (q)_{λ_i}`, or zero outside its support
/// (a negative part, or parts not summing to `N`).
pub fn multinomial(total: i64, parts: &[i64]) -> QPoly {
    if parts.iter().any(|&p| p < 0) || parts.iter().sum::<i64>() != total {
        return QPoly::zero();
    }
    let mut acc = q_pochhammer(total);
    for &p in parts.iter().filter(|&&p| p > 0) {
        acc = acc
            .div_exact(&q_pochhammer(p))
            .expect("(q)_N is divisible by (q)_a (q)_b when a + b = N");
    }
    acc
}

/// The Gaussian polynomial `[N choose m]_q`, zero unless `0 <= m <= N`.
pub fn gaussian(total: i64, m: i64) -> QPoly {
    multinomial(total, &[m, total - m])
}

impl Add<&QPoly> for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QPoly {
    type Output = QPoly;
    fn add(mut self, rhs: QPoly) -> QPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Sub<&QPoly> for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for QPoly {
    type Output = QPoly;
    fn sub(mut self, rhs: QPoly) -> QPoly {
        self -= &rhs;
        self
    }
}

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul<&QPoly> for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for QPoly {
    type Output = QPoly;
    fn mul(self, rhs: QPoly) -> QPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::zero(), |acc, p| acc + p)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            f.write_str("q")?;
            if e.is_integer() {
                if !e.is_one() {
                    write!(f, "^{}", e.numer())?;
                }
            } else {
                write!(f, "^({}/{})", e.numer(), e.denom())?;
            }
        }
        Ok(())
    }
}

/// JSON form: `[[num, den, "coeff"], ...]` sorted by exponent.
impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let triples: Vec<(i64, i64, String)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e.numer(), *e.denom(), c.to_string()))
            .collect();
        triples.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let triples = Vec::<(i64, i64, String)>::deserialize(d)?;
        let mut p = QPoly::zero();
        for (num, den, coeff) in triples {
            if den == 0 {
                return Err(D::Error::custom("zero exponent denominator"));
            }
            let c: BigInt = coeff
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient {coeff:?}")))?;
            p.add_term(Rat::new(num, den), c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n)
    }

    fn coeff_i64(p: &QPoly, e: Rat) -> Option<i64> {
        p.coeff(e).to_i64()
    }

    fn poly(cs: &[i64]) -> QPoly {
        QPoly::from_terms(cs.iter().enumerate().map(|(e, &c)| (r(e as i64), c)))
    }

    #[test]
    fn gaussian_basics() {
        assert_eq!(gaussian(5, 0), QPoly::one());
        assert_eq!(gaussian(3, 2), poly(&[1, 1, 1]));
        assert!(gaussian(2, 3).is_zero());
        assert!(gaussian(2, -1).is_zero());
    }

    #[test]
    fn multinomial_basics() {
        assert_eq!(multinomial(4, &[4, 0, 0]), QPoly::one());
        assert_eq!(multinomial(2, &[1, 1]), poly(&[1, 1]));
        assert!(multinomial(2, &[3, -1]).is_zero());
        assert!(multinomial(3, &[1, 1]).is_zero());
    }

    #[test]
    fn monomial_scaling_and_truncation() {
        let p = gaussian(3, 2);
        assert_eq!(&p * &QPoly::one(), p);
        let half = Rat::new(1, 2);
        assert_eq!(
            QPoly::one().scale_by_monomial(half).scale_by_monomial(half),
            QPoly::q_pow(r(1))
        );
        assert_eq!(p.truncate(r(1)), poly(&[1, 1]));
    }

    #[test]
    fn exact_division_detects_remainder() {
        let num = poly(&[1, 0, 1]);
        assert_eq!(num.div_exact(&poly(&[1, 1])), Err(QSeriesError::Remainder));
        assert_eq!(
            poly(&[1, 0, -1]).div_exact(&poly(&[1, 1])).unwrap(),
            poly(&[1, -1])
        );
        assert_eq!(
            num.div_exact(&QPoly::zero()),
            Err(QSeriesError::DivisionByZero)
        );
    }

    #[test]
    fn inverse_pochhammer_counts_partitions() {
        let p = inv_q_pochhammer(100, r(10));
        let parts: Vec<i64> = (0..=10).map(|e| coeff_i64(&p, r(e)).unwrap()).collect();
        assert_eq!(parts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        let two = inv_q_pochhammer(2, r(6));
        assert_eq!(two, poly(&[1, 1, 2, 2, 3, 3, 4]));
    }

    #[test]
    fn display_and_json() {
        let p = QPoly::from_terms([(r(0), 1), (Rat::new(1, 3), -2), (r(2), 1)]);
        assert_eq!(p.to_string(), "1 - 2q^(1/3) + q^2");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[[0,1,"1"],[1,3,"-2"],[2,1,"1"]]"#);
        let back: QPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn monomial_ratio_detects_offsets() {
        let p = gaussian(4, 2);
        let shifted = p.scale_by_monomial(Rat::new(2, 3));
        assert_eq!(shifted.monomial_ratio(&p), Some(Rat::new(2, 3)));
        assert_eq!(p.monomial_ratio(&gaussian(4, 1)), None);
    }
}
