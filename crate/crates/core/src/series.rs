//! Truncated trivariate series over the integers.
//!
//! A [`Series3`] is a finite sum of terms `P(t) * q^a * z^b` where `P` is a
//! [`TPoly`], the exponents `a`, `b` are exact rationals, and every stored
//! `q`-exponent is bounded by a truncation order `qmax`. Multiplication drops
//! any product term whose total `q`-exponent exceeds `qmax`; nothing else is
//! ever discarded. Zero coefficients are pruned eagerly, so structural
//! equality of two series with equal `qmax` is semantic equality.
//!
//! Storage is `q-exponent -> z-exponent -> TPoly`, sparse at both levels.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::rat;
use crate::tpoly::TPoly;

type ZLayer = BTreeMap<BigRational, TPoly>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series3 {
    qmax: BigRational,
    terms: BTreeMap<BigRational, ZLayer>,
}

impl Series3 {
    pub fn zero(qmax: &BigRational) -> Self {
        Self { qmax: qmax.clone(), terms: BTreeMap::new() }
    }

    pub fn one(qmax: &BigRational) -> Self {
        let mut s = Self::zero(qmax);
        s.add_term(&rat::int(0), &rat::int(0), &TPoly::one());
        s
    }

    /// The single term `coeff * q^q_exp * z^z_exp`; silently empty if the
    /// `q`-exponent already exceeds the truncation order.
    pub fn monomial(qmax: &BigRational, q_exp: &BigRational, z_exp: &BigRational, coeff: &TPoly) -> Self {
        let mut s = Self::zero(qmax);
        s.add_term(q_exp, z_exp, coeff);
        s
    }

    pub fn qmax(&self) -> &BigRational {
        &self.qmax
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored `(q, z)` cells.
    pub fn num_cells(&self) -> usize {
        self.terms.values().map(|l| l.len()).sum()
    }

    /// Add `coeff * q^q_exp * z^z_exp` in place, pruning zeros and dropping
    /// exponents beyond `qmax`.
    pub fn add_term(&mut self, q_exp: &BigRational, z_exp: &BigRational, coeff: &TPoly) {
        if coeff.is_zero() || *q_exp > self.qmax {
            return;
        }
        let layer = self.terms.entry(q_exp.clone()).or_default();
        let slot = layer.entry(z_exp.clone()).or_default();
        slot.add_assign(coeff);
        if slot.is_zero() {
            layer.remove(z_exp);
            if layer.is_empty() {
                self.terms.remove(q_exp);
            }
        }
    }

    fn check_qmax(&self, other: &Self) -> Result<()> {
        if self.qmax != other.qmax {
            return Err(Error::TruncationMismatch {
                lhs: rat::render(&self.qmax),
                rhs: rat::render(&other.qmax),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_qmax(other)?;
        let mut out = self.clone();
        for (q, layer) in &other.terms {
            for (z, p) in layer {
                out.add_term(q, z, p);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(q, layer)| {
                let l = layer.iter().map(|(z, p)| (z.clone(), p.neg())).collect();
                (q.clone(), l)
            })
            .collect();
        Self { qmax: self.qmax.clone(), terms }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Convolution product, truncated at `qmax`. Dispatches to the
    /// data-parallel path when the workload warrants it.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_qmax(other)?;
        #[cfg(feature = "parallel")]
        {
            if self.terms.len() >= 8 && self.num_cells() * other.num_cells() >= 4096 {
                return Ok(self.mul_parallel(other));
            }
        }
        Ok(self.mul_kernel(other))
    }

    /// Sequential reference implementation of [`Series3::mul`].
    pub fn mul_serial(&self, other: &Self) -> Result<Self> {
        self.check_qmax(other)?;
        Ok(self.mul_kernel(other))
    }

    fn mul_kernel(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.qmax);
        for (qa, la) in &self.terms {
            Self::mul_layer_into(&mut out, qa, la, other);
        }
        out
    }

    /// One q-layer of `self` against all of `other`.
    fn mul_layer_into(out: &mut Self, qa: &BigRational, la: &ZLayer, other: &Self) {
        for (qb, lb) in &other.terms {
            let q = qa + qb;
            if q > out.qmax {
                break; // q-keys ascend
            }
            for (za, pa) in la {
                for (zb, pb) in lb {
                    out.add_term(&q, &(za + zb), &pa.mul(pb));
                }
            }
        }
    }

    #[cfg(feature = "parallel")]
    fn mul_parallel(&self, other: &Self) -> Self {
        // Partition by the q-exponent of the left factor; merge is exact
        // addition, so the result does not depend on task order.
        let layers: Vec<(&BigRational, &ZLayer)> = self.terms.iter().collect();
        let partials = crate::par::par_map(layers, |(qa, la)| {
            let mut part = Self::zero(&self.qmax);
            Self::mul_layer_into(&mut part, qa, la, other);
            part
        });
        let mut out = Self::zero(&self.qmax);
        for part in partials {
            for (q, layer) in &part.terms {
                for (z, p) in layer {
                    out.add_term(q, z, p);
                }
            }
        }
        out
    }

    /// Expand `1 / (1 - coeff * q^q_exp * z^z_exp)` as a geometric series,
    /// truncated at `qmax`. The `q`-exponent must be strictly positive so
    /// that the expansion has finite support under truncation.
    pub fn geometric_inverse(
        qmax: &BigRational,
        coeff: &TPoly,
        q_exp: &BigRational,
        z_exp: &BigRational,
    ) -> Result<Self> {
        if *q_exp <= rat::int(0) {
            return Err(Error::NonPositiveQExponent(rat::render(q_exp)));
        }
        let mut out = Self::zero(qmax);
        let mut q = rat::int(0);
        let mut z = rat::int(0);
        let mut c = TPoly::one();
        while q <= *qmax {
            out.add_term(&q, &z, &c);
            q += q_exp;
            z += z_exp;
            c = c.mul(coeff);
        }
        Ok(out)
    }

    /// Pair against the formal Poisson kernel `sum_n t^|n| z^n` and take the
    /// constant term in `z`: the `q^a` coefficient of the result is
    /// `sum_n t^|n| * [q^a z^-n] self`. All `z`-exponents must be integers.
    pub fn ct_poisson(&self) -> Result<Self> {
        let mut out = Self::zero(&self.qmax);
        let z0 = rat::int(0);
        for (q, layer) in &self.terms {
            for (z, p) in layer {
                let n = rat::to_i64(z).ok_or_else(|| Error::NonIntegerZExponent(rat::render(z)))?;
                out.add_term(q, &z0, &p.shift(n.abs()));
            }
        }
        Ok(out)
    }

    /// The `z`-layer at a given `q`-exponent (empty if absent).
    pub fn coeff(&self, q_exp: &BigRational) -> ZLayer {
        self.terms.get(q_exp).cloned().unwrap_or_default()
    }

    /// Single coefficient at `(q_exp, z_exp)`.
    pub fn coeff_at(&self, q_exp: &BigRational, z_exp: &BigRational) -> TPoly {
        self.terms
            .get(q_exp)
            .and_then(|l| l.get(z_exp))
            .cloned()
            .unwrap_or_default()
    }

    /// z-free coefficient at `q_exp` (the `z^0` slot).
    pub fn coeff_z0(&self, q_exp: &BigRational) -> TPoly {
        self.coeff_at(q_exp, &rat::int(0))
    }

    /// Monomial prefactor: shift every exponent by `(dq, dz, dt)`. Terms
    /// pushed above `qmax` are dropped; `qmax` itself is unchanged.
    pub fn shift(&self, dq: &BigRational, dz: &BigRational, dt: i64) -> Self {
        let mut out = Self::zero(&self.qmax);
        for (q, layer) in &self.terms {
            let nq = q + dq;
            if nq > self.qmax {
                continue;
            }
            for (z, p) in layer {
                out.add_term(&nq, &(z + dz), &p.shift(dt));
            }
        }
        out
    }

    /// Iterate stored terms in `(q, z)` ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (&BigRational, &BigRational, &TPoly)> {
        self.terms
            .iter()
            .flat_map(|(q, layer)| layer.iter().map(move |(z, p)| (q, z, p)))
    }

    /// Smallest stored `q`-exponent.
    pub fn min_q(&self) -> Option<&BigRational> {
        self.terms.keys().next()
    }

    /// Specialize `t = 1, z = 1`: exact integer coefficient per `q`-exponent.
    pub fn specialize_t1_z1(&self) -> BTreeMap<BigRational, BigInt> {
        let mut out = BTreeMap::new();
        for (q, layer) in &self.terms {
            let mut acc = BigInt::zero();
            for p in layer.values() {
                acc += p.eval_one();
            }
            if !acc.is_zero() {
                out.insert(q.clone(), acc);
            }
        }
        out
    }

    /// JSON emission: a list of records `{q, z, t_poly}` sorted by
    /// `(q, z, t)` ascending, rationals as `"p/r"`, coefficients as decimal
    /// strings.
    pub fn to_json(&self) -> serde_json::Value {
        let records: Vec<serde_json::Value> = self
            .iter()
            .map(|(q, z, p)| {
                let tp: Vec<serde_json::Value> = p
                    .iter()
                    .map(|(e, c)| serde_json::json!([e, c.to_string()]))
                    .collect();
                serde_json::json!({
                    "q": rat::render(q),
                    "z": rat::render(z),
                    "t_poly": tp,
                })
            })
            .collect();
        serde_json::Value::Array(records)
    }
}

impl fmt::Display for Series3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O(q^({}))", self.qmax);
        }
        let mut first = true;
        for (q, z, p) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", p)?;
            if !q.is_zero() {
                write!(f, "*q^({})", q)?;
            }
            if !z.is_zero() {
                write!(f, "*z^({})", z)?;
            }
        }
        write!(f, " + O(q^({}))", self.qmax)
    }
}
