//! Laurent polynomials in the grading variable `t` with arbitrary-precision
//! integer coefficients.
//!
//! These are the coefficients of every truncated series in the crate: the
//! t-Kostant counts, Kostka-Foulkes polynomials and theta-term weights all
//! live here. Exponents may be negative (`t^j` with `j < 0` occurs in the
//! alternating sums), coefficients are exact `BigInt`s.
//!
//! Invariants: no stored zero coefficients, exponent keys unique.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Self::t_pow(1)
    }

    /// The monomial `t^e` (negative `e` allowed).
    pub fn t_pow(e: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::one());
        Self { terms }
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        Self { terms }
    }

    /// Build from `(exponent, coefficient)` pairs, collecting like terms.
    pub fn from_terms(pairs: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in pairs {
            p.add_term(e, &BigInt::from(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Add `c * t^e` in place, pruning a resulting zero.
    pub fn add_term(&mut self, e: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(*e, c);
        }
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c)).collect();
        Self { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        out
    }

    pub fn scale<C: Into<BigInt>>(&self, c: C) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(e, v)| (*e, v * &c)).collect();
        Self { terms }
    }

    /// Multiply by `t^dt`.
    pub fn shift(&self, dt: i64) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e + dt, c.clone())).collect();
        Self { terms }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    /// Value at `t = 1`: the exact sum of coefficients.
    pub fn eval_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Floating-point evaluation at a real `t > 0`.
    pub fn eval_f64(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().expect("coefficient out of f64 range") * t.powi(*e as i32))
            .sum()
    }

    /// True if all coefficients are nonnegative and all exponents >= 0.
    pub fn is_polynomial_nonneg(&self) -> bool {
        self.terms.iter().all(|(e, c)| *e >= 0 && !c.is_negative())
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let one = mag.is_one();
            match (*e, one) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{}*t", mag)?,
                (_, true) => write!(f, "t^{}", e)?,
                (_, false) => write!(f, "{}*t^{}", mag, e)?,
            }
        }
        Ok(())
    }
}
