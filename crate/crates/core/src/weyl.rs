//! Root-space bookkeeping for the affine algebra of rank one.
//!
//! Weights are stored in the standard basis `{alpha_1, delta, Lambda_0}`:
//! `lambda = b*alpha_1 + d*delta + m*Lambda_0` with exact rational `b`, `d`
//! and level `m`. The normalized invariant form is realized concretely as
//! `<lambda, delta> = m`, `<lambda, alpha_1> = 2b`, `<lambda, Lambda_0> = d`,
//! so the pairing of two weights is `2 b1 b2 + m1 d2 + m2 d1`.
//!
//! The Weyl group is `T x {1, r1}` with `T` the translations `tau^(2n)`,
//! where `tau` is the translation by `alpha_1 / 2` in the extended group:
//!
//! `tau(lambda) = lambda + (m*alpha_1 - 2b*delta - m*delta/2) / 2`.
//!
//! The diagram automorphism is `sigma = tau r1`; it swaps `alpha_0` and
//! `alpha_1` and fixes the Weyl vector up to `delta`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::rational::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::rat;

/// A weight in the standard basis: `b*alpha_1 + d*delta + level*Lambda_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVec {
    b: BigRational,
    d: BigRational,
    level: BigRational,
}

impl WeightVec {
    pub fn new(b: BigRational, d: BigRational, level: BigRational) -> Self {
        Self { b, d, level }
    }

    pub fn from_ints(b: i64, d: i64, level: i64) -> Self {
        Self::new(rat::int(b), rat::int(d), rat::int(level))
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0)
    }

    pub fn alpha1() -> Self {
        Self::from_ints(1, 0, 0)
    }

    pub fn delta() -> Self {
        Self::from_ints(0, 1, 0)
    }

    /// `alpha_0 = delta - alpha_1`.
    pub fn alpha0() -> Self {
        Self::from_ints(-1, 1, 0)
    }

    pub fn lambda0() -> Self {
        Self::from_ints(0, 0, 1)
    }

    /// The Weyl vector, stored with `d(rho) = 0`: `rho = alpha_1/2 + 2*Lambda_0`.
    /// All quantities in this crate use only differences `w(mu+rho) - (mu+rho)`,
    /// which do not depend on the `d`-component convention.
    pub fn rho() -> Self {
        Self::new(rat::frac(1, 2), rat::int(0), rat::int(2))
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn d(&self) -> &BigRational {
        &self.d
    }

    pub fn level(&self) -> &BigRational {
        &self.level
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(&self.b * c, &self.d * c, &self.level * c)
    }

    /// Normalized invariant form: `(x, y) = 2 b(x) b(y) + m(x) d(y) + m(y) d(x)`.
    pub fn form(&self, other: &Self) -> BigRational {
        rat::int(2) * &self.b * &other.b + &self.level * &other.d + &other.level * &self.d
    }

    /// Membership in the root lattice: integer `b`, `d` and level zero.
    pub fn in_root_lattice(&self) -> bool {
        self.level.is_zero() && rat::is_integer(&self.b) && rat::is_integer(&self.d)
    }

    /// `(b, d)` as integers; errors unless the weight is in the root lattice.
    pub fn root_coords(&self) -> Result<(i64, i64)> {
        if !self.in_root_lattice() {
            return Err(Error::NotInRootLattice(self.to_string()));
        }
        Ok((rat::to_i64(&self.b).unwrap(), rat::to_i64(&self.d).unwrap()))
    }
}

impl Add for &WeightVec {
    type Output = WeightVec;
    fn add(self, rhs: &WeightVec) -> WeightVec {
        WeightVec::new(&self.b + &rhs.b, &self.d + &rhs.d, &self.level + &rhs.level)
    }
}

impl Sub for &WeightVec {
    type Output = WeightVec;
    fn sub(self, rhs: &WeightVec) -> WeightVec {
        WeightVec::new(&self.b - &rhs.b, &self.d - &rhs.d, &self.level - &rhs.level)
    }
}

impl Neg for &WeightVec {
    type Output = WeightVec;
    fn neg(self) -> WeightVec {
        WeightVec::new(-&self.b, -&self.d, -&self.level)
    }
}

impl fmt::Display for WeightVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})a1 + ({})d + ({})L0", self.b, self.d, self.level)
    }
}

/// Simple reflection of the underlying finite diagram: `b -> -b`.
pub fn r1_act(v: &WeightVec) -> WeightVec {
    WeightVec::new(-&v.b, v.d.clone(), v.level.clone())
}

/// The translation `tau = t_{alpha_1/2}`: `b -> b + m/2`, `d -> d - b - m/4`.
pub fn tau_act(v: &WeightVec) -> WeightVec {
    tau_pow_act(1, v)
}

/// Exact inverse of [`tau_act`].
pub fn tau_act_inv(v: &WeightVec) -> WeightVec {
    tau_pow_act(-1, v)
}

/// `tau^j` in closed form: `b -> b + j m/2`, `d -> d - j b - m j^2 / 4`.
pub fn tau_pow_act(j: i64, v: &WeightVec) -> WeightVec {
    let jr = rat::int(j);
    let b = &v.b + &v.level * &jr / rat::int(2);
    let d = &v.d - &jr * &v.b - &v.level * &jr * &jr / rat::int(4);
    WeightVec::new(b, d, v.level.clone())
}

/// Diagram automorphism `sigma = tau r1`; swaps `alpha_0` and `alpha_1`.
pub fn sigma_act(v: &WeightVec) -> WeightVec {
    tau_act(&r1_act(v))
}

/// An element `tau^(2n)` (`flip = false`) or `tau^(2n) r1` (`flip = true`)
/// of the Weyl group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeylElem {
    pub n: i64,
    pub flip: bool,
}

impl WeylElem {
    pub fn identity() -> Self {
        Self { n: 0, flip: false }
    }

    pub fn r1() -> Self {
        Self { n: 0, flip: true }
    }

    pub fn translation(n: i64) -> Self {
        Self { n, flip: false }
    }

    /// Sign character: `+1` on translations, `-1` with the reflection.
    pub fn sign(&self) -> i64 {
        if self.flip {
            -1
        } else {
            1
        }
    }

    /// Composition via the dihedral relation `r1 tau^(2m) = tau^(-2m) r1`.
    pub fn compose(&self, other: &Self) -> Self {
        let m = if self.flip { -other.n } else { other.n };
        Self { n: self.n + m, flip: self.flip ^ other.flip }
    }

    pub fn inverse(&self) -> Self {
        if self.flip {
            *self // (tau^(2n) r1)^2 = e
        } else {
            Self { n: -self.n, flip: false }
        }
    }

    /// Apply to a weight: `r1` first if present, then `tau^(2n)`.
    pub fn apply(&self, v: &WeightVec) -> WeightVec {
        let v = if self.flip { r1_act(v) } else { v.clone() };
        tau_pow_act(2 * self.n, &v)
    }

    /// The four elements with translation part `tau^(+-2r)` (two at `r = 0`).
    pub fn ring(r: i64) -> Vec<WeylElem> {
        assert!(r >= 0);
        if r == 0 {
            vec![Self::identity(), Self::r1()]
        } else {
            vec![
                Self { n: r, flip: false },
                Self { n: -r, flip: false },
                Self { n: r, flip: true },
                Self { n: -r, flip: true },
            ]
        }
    }
}

impl fmt::Display for WeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.n, self.flip) {
            (0, false) => write!(f, "e"),
            (0, true) => write!(f, "r1"),
            (n, false) => write!(f, "tau^{}", 2 * n),
            (n, true) => write!(f, "tau^{} r1", 2 * n),
        }
    }
}

/// Dot action `w . v = w(v + rho) - rho`.
pub fn dot_action(w: &WeylElem, v: &WeightVec) -> WeightVec {
    let rho = WeightVec::rho();
    &w.apply(&(v + &rho)) - &rho
}

/// Dot action of the extended-group power `tau^j`.
pub fn tau_dot_pow(j: i64, v: &WeightVec) -> WeightVec {
    let rho = WeightVec::rho();
    &tau_pow_act(j, &(v + &rho)) - &rho
}

/// The index function: `+1` when `b(beta) >= 0, j >= 0`; `-1` when
/// `b(beta) < 0, j < 0`; `0` otherwise. `beta` must be in the root lattice.
pub fn index_i(beta: &WeightVec, j: i64) -> Result<i64> {
    let (b, _) = beta.root_coords()?;
    Ok(if b >= 0 && j >= 0 {
        1
    } else if b < 0 && j < 0 {
        -1
    } else {
        0
    })
}

/// A validated string-function instance: level `m`, `<Lambda, a1^> = k`,
/// `<lambda, a1^> = l`, with the derived constants
/// `A = (k+1)/(2(m+2))`, `B = l/(2m)` and the anomaly
/// `s = (m+2) A^2 - m B^2 - 1/8`.
///
/// Both `Lambda` and `lambda` are stored with `d = 0`, so that
/// `Lambda - lambda` lies in `Z alpha_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringProblem {
    m: i64,
    k: i64,
    l: i64,
    cap_a: BigRational,
    cap_b: BigRational,
    anomaly: BigRational,
    normalized: bool,
}

impl StringProblem {
    /// Validate and normalize `(m, k, l)`. If `B > A` the instance is
    /// replaced by its diagram twist `(m-k, m-l)`, after which
    /// `0 <= B <= A < 1/2` holds.
    pub fn new(m: i64, k: i64, l: i64) -> Result<Self> {
        let (m, k, l) = Self::validate(m, k, l)?;
        // B > A  <=>  l (m+2) > m (k+1)
        let (k, l) = if l * (m + 2) > m * (k + 1) { (m - k, m - l) } else { (k, l) };
        Ok(Self::build(m, k, l, true))
    }

    /// Validated but untwisted instance; `B > A` is allowed. The lattice
    /// pipeline rejects such instances, the Weyl-sum route does not need the
    /// normalization.
    pub fn unnormalized(m: i64, k: i64, l: i64) -> Result<Self> {
        let (m, k, l) = Self::validate(m, k, l)?;
        let normalized = l * (m + 2) <= m * (k + 1);
        Ok(Self::build(m, k, l, normalized))
    }

    fn validate(m: i64, k: i64, l: i64) -> Result<(i64, i64, i64)> {
        if m < 1 {
            return Err(Error::InvalidProblem(format!("level m = {} must be >= 1", m)));
        }
        if !(0..=m).contains(&k) || !(0..=m).contains(&l) {
            return Err(Error::InvalidProblem(format!(
                "labels k = {}, l = {} must lie in [0, {}]",
                k, l, m
            )));
        }
        if (k - l) % 2 != 0 {
            return Err(Error::InvalidProblem(format!(
                "k = {} and l = {} must have equal parity",
                k, l
            )));
        }
        Ok((m, k, l))
    }

    fn build(m: i64, k: i64, l: i64, normalized: bool) -> Self {
        let cap_a = rat::frac(k + 1, 2 * (m + 2));
        let cap_b = rat::frac(l, 2 * m);
        let anomaly = rat::int(m + 2) * &cap_a * &cap_a - rat::int(m) * &cap_b * &cap_b
            - rat::frac(1, 8);
        Self { m, k, l, cap_a, cap_b, anomaly, normalized }
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn cap_a(&self) -> &BigRational {
        &self.cap_a
    }

    pub fn cap_b(&self) -> &BigRational {
        &self.cap_b
    }

    /// The anomaly `s`.
    pub fn anomaly(&self) -> &BigRational {
        &self.anomaly
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// The highest weight `Lambda` (with `d = 0`).
    pub fn lambda_top(&self) -> WeightVec {
        WeightVec::new(rat::frac(self.k, 2), rat::int(0), rat::int(self.m))
    }

    /// The string base weight `lambda` (with `d = 0`).
    pub fn lambda_base(&self) -> WeightVec {
        WeightVec::new(rat::frac(self.l, 2), rat::int(0), rat::int(self.m))
    }

    /// `s(w) = w(Lambda + rho) - (lambda + rho)`, an element of the root
    /// lattice.
    pub fn s_of(&self, w: &WeylElem) -> WeightVec {
        &dot_action(w, &self.lambda_top()) - &self.lambda_base()
    }
}

impl fmt::Display for StringProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m, k, l) = ({}, {}, {})", self.m, self.k, self.l)
    }
}
