//! The lattice route: an indefinite binary quadratic form, its isometry
//! groups, fundamental-domain reduction, and the theta series.
//!
//! The form is `N(x, y) = 2(m+2) x^2 - 2m y^2` on `R^2` with `M = Z^2` and
//! dual lattice `M* = Z/(2(m+2)) + Z/(2m)`. The group `G` is generated by
//!
//! `a(u, v) = ((m+1) u + m v, (m+2) u + (m+1) v)`,
//!
//! `G_0 = <a^2>`, and `G~ = <zeta> x| G` with `zeta(u, v) = (-u, v)`; `G~`
//! is infinite dihedral (`zeta a zeta = a^-1`). On the positivity cone
//! `U+ = {N > 0}` the wedge
//!
//! `F~ = {0 <= y <= x} u {0 > y > x}`
//!
//! is a fundamental domain for `G~`, and `F_0 = F~ u aF~ u zF~ u azF~` one
//! for `G_0`. The dagger map sends a cone point to its unique
//! `F~`-representative; on light-cone coordinates `a` scales by
//! `lambda^(+-1)` with `lambda = m + 1 + sqrt(m(m+2)) > 1`, so `|x|` is
//! strictly unimodal along an `<a>`-orbit and reduction by `a^(+-1)` until
//! `|x|` is minimal terminates, with at most one tied neighbor on a wall.
//!
//! Four shifted copies of `M` (the cosets `L_1..L_4` through `(A, B)`,
//! `(A+1/2, B+1/2)`, `(-A, B)`, `(-A+1/2, B+1/2)`) carry the support of the
//! theta series; `psi` transports their `F~`-points into `L_1` intersected
//! with `F_0`, producing one representative per `G_0`-orbit.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::par::par_map;
use crate::rat;
use crate::series::Series3;
use crate::tpoly::TPoly;
use crate::weyl::{StringProblem, WeylElem};

/// The form `N(x, y) = 2(m+2) x^2 - 2m y^2`.
#[derive(Clone, Copy, Debug)]
pub struct QuadForm {
    m: i64,
}

impl QuadForm {
    pub fn new(m: i64) -> Self {
        assert!(m >= 1);
        Self { m }
    }

    pub fn for_problem(p: &StringProblem) -> Self {
        Self::new(p.m())
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.half(x, y) * rat::int(2)
    }

    /// `N(x, y) / 2 = (m+2) x^2 - m y^2`.
    pub fn half(&self, x: &BigRational, y: &BigRational) -> BigRational {
        rat::int(self.m + 2) * x * x - rat::int(self.m) * y * y
    }
}

/// An element `a^power . zeta^flip` of the infinite dihedral group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupElem {
    pub power: i64,
    pub flip: bool,
}

impl GroupElem {
    pub fn identity() -> Self {
        Self { power: 0, flip: false }
    }

    pub fn gen_a(power: i64) -> Self {
        Self { power, flip: false }
    }

    pub fn zeta() -> Self {
        Self { power: 0, flip: true }
    }

    /// Apply to a point: `zeta` first (if present), then `a^power`.
    pub fn apply(&self, m: i64, x: &BigRational, y: &BigRational) -> (BigRational, BigRational) {
        let (mut u, mut v) = if self.flip { (-x, y.clone()) } else { (x.clone(), y.clone()) };
        let steps = self.power.abs();
        for _ in 0..steps {
            let (nu, nv) = if self.power > 0 { apply_a(m, &u, &v) } else { apply_a_inv(m, &u, &v) };
            u = nu;
            v = nv;
        }
        (u, v)
    }

    /// `(a^p zeta^e)(a^q zeta^f) = a^(p + (-1)^e q) zeta^(e xor f)`.
    pub fn compose(&self, other: &Self) -> Self {
        let q = if self.flip { -other.power } else { other.power };
        Self { power: self.power + q, flip: self.flip ^ other.flip }
    }

    pub fn inverse(&self) -> Self {
        if self.flip {
            Self { power: self.power, flip: true }
        } else {
            Self { power: -self.power, flip: false }
        }
    }
}

fn apply_a(m: i64, u: &BigRational, v: &BigRational) -> (BigRational, BigRational) {
    (
        rat::int(m + 1) * u + rat::int(m) * v,
        rat::int(m + 2) * u + rat::int(m + 1) * v,
    )
}

fn apply_a_inv(m: i64, u: &BigRational, v: &BigRational) -> (BigRational, BigRational) {
    (
        rat::int(m + 1) * u - rat::int(m) * v,
        rat::int(-(m + 2)) * u + rat::int(m + 1) * v,
    )
}

/// Membership in the wedge `F~ = {0 <= y <= x} u {0 > y > x}`.
pub fn in_fundamental(x: &BigRational, y: &BigRational) -> bool {
    let zero = rat::int(0);
    (y >= &zero && y <= x) || (y < &zero && y > x)
}

/// Reduce a cone point to its unique `F~`-representative, returning the
/// representative and the witness `g` with `g(x', y') = (x, y)`.
pub fn dagger(
    m: i64,
    x: &BigRational,
    y: &BigRational,
) -> Result<(BigRational, BigRational, GroupElem)> {
    let qf = QuadForm::new(m);
    if qf.half(x, y) <= rat::int(0) {
        return Err(Error::OutsideCone { x: rat::render(x), y: rat::render(y) });
    }

    // Walk along the <a>-orbit to the |x|-minimum; strict unimodality in the
    // light-cone coordinates makes this terminate.
    let mut cur = (x.clone(), y.clone());
    let mut wit = GroupElem::identity();
    loop {
        let fwd = apply_a(m, &cur.0, &cur.1);
        let bwd = apply_a_inv(m, &cur.0, &cur.1);
        if rat::abs(&fwd.0) < rat::abs(&cur.0) {
            cur = fwd;
            wit = wit.compose(&GroupElem::gen_a(-1));
        } else if rat::abs(&bwd.0) < rat::abs(&cur.0) {
            cur = bwd;
            wit = wit.compose(&GroupElem::gen_a(1));
        } else {
            break;
        }
    }

    // Ties (|x| equal under one neighbor) occur exactly on the walls
    // y = +-x; the wedge keeps one of the four mirror candidates.
    let mut candidates = vec![(cur.clone(), wit)];
    let fwd = apply_a(m, &cur.0, &cur.1);
    if rat::abs(&fwd.0) == rat::abs(&cur.0) {
        candidates.push((fwd, wit.compose(&GroupElem::gen_a(-1))));
    }
    let bwd = apply_a_inv(m, &cur.0, &cur.1);
    if rat::abs(&bwd.0) == rat::abs(&cur.0) {
        candidates.push((bwd, wit.compose(&GroupElem::gen_a(1))));
    }

    for ((cx, cy), g) in candidates {
        if in_fundamental(&cx, &cy) {
            debug_assert_eq!(g.apply(m, &cx, &cy), (x.clone(), y.clone()));
            return Ok((cx, cy, g));
        }
        let zx = -&cx;
        if in_fundamental(&zx, &cy) {
            let g = g.compose(&GroupElem::zeta());
            debug_assert_eq!(g.apply(m, &zx, &cy), (x.clone(), y.clone()));
            return Ok((zx, cy, g));
        }
    }
    Err(Error::Invariant(format!(
        "no fundamental-domain representative found for ({}, {})",
        x, y
    )))
}

/// Base point of the coset `L_i`.
pub fn coset_base(p: &StringProblem, coset: u8) -> (BigRational, BigRational) {
    let a = p.cap_a().clone();
    let b = p.cap_b().clone();
    let half = rat::frac(1, 2);
    match coset {
        1 => (a, b),
        2 => (a + half.clone(), b + half),
        3 => (-a, b),
        4 => (-a + half.clone(), b + half),
        _ => panic!("coset index must be 1..=4"),
    }
}

/// Which coset (if any) contains the point.
pub fn coset_of(p: &StringProblem, x: &BigRational, y: &BigRational) -> Option<u8> {
    (1..=4).find(|&i| in_coset(p, i, x, y))
}

fn in_coset(p: &StringProblem, coset: u8, x: &BigRational, y: &BigRational) -> bool {
    let (bx, by) = coset_base(p, coset);
    rat::is_integer(&(x - bx)) && rat::is_integer(&(y - by))
}

/// All points of `L_coset` inside `F~` with `N/2 <= halfn_max`, sorted by
/// `(x, y)`. On the wedge `N >= 4 x^2`, so `|x| <= sqrt(halfn_max / 2)`
/// bounds the slices; the walk is exact.
pub fn enumerate_coset_in_f(
    p: &StringProblem,
    coset: u8,
    halfn_max: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    let slices = coset_slices(p, coset, halfn_max);
    let (_, y0) = coset_base(p, coset);
    let qf = QuadForm::for_problem(p);
    let mut points: Vec<(BigRational, BigRational)> = par_map(slices, |x| {
        slice_points(&qf, &x, &y0, halfn_max)
    })
    .into_iter()
    .flatten()
    .collect();
    points.sort();
    points
}

/// Sequential reference implementation of [`enumerate_coset_in_f`].
pub fn enumerate_coset_in_f_serial(
    p: &StringProblem,
    coset: u8,
    halfn_max: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    let (_, y0) = coset_base(p, coset);
    let qf = QuadForm::for_problem(p);
    let mut points: Vec<(BigRational, BigRational)> = coset_slices(p, coset, halfn_max)
        .into_iter()
        .flat_map(|x| slice_points(&qf, &x, &y0, halfn_max))
        .collect();
    points.sort();
    points
}

/// The x-values of the coset with `2 x^2 <= halfn_max`.
fn coset_slices(p: &StringProblem, coset: u8, halfn_max: &BigRational) -> Vec<BigRational> {
    let (x0, _) = coset_base(p, coset);
    let fits = |px: i64| -> Option<BigRational> {
        let x = &x0 + rat::int(px);
        if rat::int(2) * &x * &x <= *halfn_max {
            Some(x)
        } else {
            None
        }
    };
    // closest integer offset to -x0; the admissible offsets form an interval
    let center = rat::floor_i64(&(-&x0 + rat::frac(1, 2)));
    let mut xs = Vec::new();
    let mut px = center;
    while let Some(x) = fits(px) {
        xs.push(x);
        px += 1;
    }
    px = center - 1;
    while let Some(x) = fits(px) {
        xs.insert(0, x);
        px -= 1;
    }
    xs
}

fn slice_points(
    qf: &QuadForm,
    x: &BigRational,
    y0: &BigRational,
    halfn_max: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    let zero = rat::int(0);
    if x.is_zero() {
        return Vec::new();
    }
    let (ylo, yhi) = if *x > zero { (zero.clone(), x.clone()) } else { (x.clone(), zero) };
    let lo = rat::ceil_i64(&(&ylo - y0));
    let hi = rat::floor_i64(&(&yhi - y0));
    let mut out = Vec::new();
    for py in lo..=hi {
        let y = y0 + rat::int(py);
        if in_fundamental(x, &y) && qf.half(x, &y) <= *halfn_max {
            out.push((x.clone(), y));
        }
    }
    out
}

/// Transport an `F~`-point of `L_coset` into `L_1` intersected with `F_0`:
/// identity on `L_1`, `a zeta` on `L_2`, `zeta` on `L_3`, `a` on `L_4`.
pub fn psi(
    p: &StringProblem,
    x: &BigRational,
    y: &BigRational,
    coset: u8,
) -> Result<(BigRational, BigRational)> {
    if !(1..=4).contains(&coset) || !in_coset(p, coset, x, y) || !in_fundamental(x, y) {
        return Err(Error::CosetPrecondition {
            x: rat::render(x),
            y: rat::render(y),
            coset,
        });
    }
    let g = match coset {
        1 => GroupElem::identity(),
        2 => GroupElem { power: 1, flip: true },
        3 => GroupElem::zeta(),
        _ => GroupElem::gen_a(1),
    };
    let (ix, iy) = g.apply(p.m(), x, y);
    if !in_coset(p, 1, &ix, &iy) {
        return Err(Error::Invariant(format!(
            "psi image ({}, {}) left L1",
            ix, iy
        )));
    }
    Ok((ix, iy))
}

/// `sign(x, y) = +1` if `x > 0`, `-1` otherwise (only cone points occur, so
/// `x != 0`).
pub fn epsilon_sign(x: &BigRational, _y: &BigRational) -> i64 {
    if *x > rat::int(0) {
        1
    } else {
        -1
    }
}

/// The parametrization `(w, j) -> (x, y)` of the coset points:
/// `x = j/2 + b(w(Lambda + rho))/(m+2)`, `y = j/2 + B`.
pub fn phi(p: &StringProblem, w: &WeylElem, j: i64) -> (BigRational, BigRational) {
    let top = &p.lambda_top() + &crate::weyl::WeightVec::rho();
    let jw = rat::frac(j, 2);
    let x = &jw + w.apply(&top).b() / rat::int(p.m() + 2);
    let y = jw + p.cap_b();
    (x, y)
}

/// One `G_0`-orbit contribution to the theta series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaTerm {
    /// Orbit representative in `L_1` intersected with `F_0`.
    pub x: BigRational,
    pub y: BigRational,
    /// `+1` iff `x > 0`.
    pub sign: i64,
    /// `N(x, y) / 2`.
    pub half_n: BigRational,
    /// `2 (y' - B)` at the `F~`-representative; an integer.
    pub tshift: i64,
    /// `(m+2) x' - m y' - 1/2`; integer-valued but kept rational.
    pub zshift: BigRational,
}

impl ThetaTerm {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "x": rat::render(&self.x),
            "y": rat::render(&self.y),
            "sign": self.sign,
            "halfN": rat::render(&self.half_n),
            "tshift": self.tshift,
            "zshift": rat::render(&self.zshift),
        })
    }
}

pub fn theta_terms_to_json(terms: &[ThetaTerm]) -> serde_json::Value {
    serde_json::Value::Array(terms.iter().map(ThetaTerm::to_json).collect())
}

/// All `G_0`-orbit terms with `N/2 <= halfn_max`: the `psi`-images of the
/// four coset enumerations, ordered by `(halfN, x, y)`.
pub fn theta_term_list(p: &StringProblem, halfn_max: &BigRational) -> Result<Vec<ThetaTerm>> {
    if !p.is_normalized() {
        return Err(Error::InvalidProblem(format!(
            "{} is not normalized (B > A); coset enumeration requires B <= A",
            p
        )));
    }
    let qf = QuadForm::for_problem(p);
    let m = rat::int(p.m());
    let m2 = rat::int(p.m() + 2);
    let mut terms = Vec::new();
    for coset in 1..=4u8 {
        for (fx, fy) in enumerate_coset_in_f(p, coset, halfn_max) {
            let (x, y) = psi(p, &fx, &fy, coset)?;
            let half_n = qf.half(&fx, &fy);
            debug_assert_eq!(half_n, qf.half(&x, &y));
            let tshift_r = rat::int(2) * (&fy - p.cap_b());
            let tshift = rat::to_i64(&tshift_r).ok_or_else(|| {
                Error::Invariant(format!("non-integer t-shift {}", tshift_r))
            })?;
            let zshift = &m2 * &fx - &m * &fy - rat::frac(1, 2);
            let sign = epsilon_sign(&x, &y);
            terms.push(ThetaTerm { x, y, sign, half_n, tshift, zshift });
        }
    }
    terms.sort_by(|a, b| {
        (&a.half_n, &a.x, &a.y).cmp(&(&b.half_n, &b.x, &b.y))
    });
    Ok(terms)
}

/// Assemble the formal series `sum sign q^(N/2) t^tshift z^zshift` from a
/// term list. Every `z`-exponent must come out an integer.
pub fn theta_series_from_terms(terms: &[ThetaTerm], qmax: &BigRational) -> Result<Series3> {
    let mut out = Series3::zero(qmax);
    for term in terms {
        if term.half_n > *qmax {
            continue;
        }
        if !rat::is_integer(&term.zshift) {
            return Err(Error::NonIntegerZExponent(rat::render(&term.zshift)));
        }
        let coeff = TPoly::t_pow(term.tshift).scale(term.sign);
        out.add_term(&term.half_n, &term.zshift, &coeff);
    }
    Ok(out)
}

/// The theta series truncated at `q`-order `qmax_effective`.
pub fn theta_formal(p: &StringProblem, qmax_effective: &BigRational) -> Result<Series3> {
    let terms = theta_term_list(p, qmax_effective)?;
    theta_series_from_terms(&terms, qmax_effective)
}

/// Exact coefficients of `theta_L`: the `t = 1, z = 1` specialization,
/// grouped by `N/2`.
pub fn theta_l_coefficients(terms: &[ThetaTerm]) -> Vec<(BigRational, BigInt)> {
    let mut acc: std::collections::BTreeMap<BigRational, BigInt> = Default::default();
    for term in terms {
        *acc.entry(term.half_n.clone()).or_default() += BigInt::from(term.sign);
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}
