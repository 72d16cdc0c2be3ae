//! Cross-method verification: the exact identity between the Weyl-sum and
//! lattice routes, the intermediate exponential-sum identity, and the
//! numeric radial-average comparison.
//!
//! The exact checks compare coefficient windows rather than whole truncated
//! series: with working truncation `qmax = s + 1/8 + dmax`, every
//! coefficient of `ct(P_t (q^(-1/8) xi_t) theta)` at exponents `s + k`,
//! `0 <= k <= dmax`, is exact, because the factor exponents are bounded
//! below by `-1/8` and `s + 1/8` respectively.

use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;

use crate::analytic::{
    eval_eta_m3, eval_tstring_series, radial_average, radial_average_with_nodes, theta_l_value,
    EvalConfig,
};
use crate::error::Result;
use crate::kostant::{build_hbar, table_for, tstring_a, xi_series};
use crate::lattice::{theta_series_from_terms, theta_term_list, ThetaTerm};
use crate::rat;
use crate::series::Series3;
use crate::tpoly::TPoly;
use crate::weyl::StringProblem;

/// First differing `(q, z, t)` entry between two series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalDiff {
    pub q: BigRational,
    pub z: BigRational,
    pub t: i64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl std::fmt::Display for FormalDiff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "q^({}) z^({}) t^{}: {} vs {}",
            self.q, self.z, self.t, self.lhs, self.rhs
        )
    }
}

/// Scan two series in `(q, z, t)` order up to a `q`-bound and report the
/// first mismatch.
pub fn first_difference(a: &Series3, b: &Series3, upto: &BigRational) -> Option<FormalDiff> {
    let mut qkeys: BTreeSet<BigRational> = BTreeSet::new();
    for (q, _, _) in a.iter().chain(b.iter()) {
        if q <= upto {
            qkeys.insert(q.clone());
        }
    }
    for q in qkeys {
        let la = a.coeff(&q);
        let lb = b.coeff(&q);
        let mut zkeys: BTreeSet<BigRational> = la.keys().cloned().collect();
        zkeys.extend(lb.keys().cloned());
        for z in zkeys {
            let pa = la.get(&z).cloned().unwrap_or_default();
            let pb = lb.get(&z).cloned().unwrap_or_default();
            if pa == pb {
                continue;
            }
            let mut texps: BTreeSet<i64> = pa.iter().map(|(e, _)| *e).collect();
            texps.extend(pb.iter().map(|(e, _)| *e));
            for t in texps {
                let ca = pa.coeff(t);
                let cb = pb.coeff(t);
                if ca != cb {
                    return Some(FormalDiff { q, z, t, lhs: ca, rhs: cb });
                }
            }
        }
    }
    None
}

/// String coefficients by the Weyl-sum route, with the dual-route assertion
/// of [`tstring_a`] included.
pub fn method_a_coeffs(p: &StringProblem, dmax: i64) -> Result<Vec<TPoly>> {
    let tbl = table_for(p, dmax)?;
    let a = tstring_a(p, dmax, &tbl)?;
    Ok((0..=dmax).map(|k| a.coeff_z0(&rat::int(k))).collect())
}

/// The lattice-route series `ct(P_t (q^(-1/8) xi_t) theta)` assembled from
/// an explicit term list (the injection point for fault tests), reliable at
/// exponents up to `s + dmax`.
pub fn method_b_series(p: &StringProblem, dmax: i64, terms: &[ThetaTerm]) -> Result<Series3> {
    let qmax_w = p.anomaly() + rat::frac(1, 8) + rat::int(dmax);
    let xi = xi_series(&qmax_w)?;
    let xi_shifted = xi.shift(&rat::frac(-1, 8), &rat::int(0), 0);
    let theta = theta_series_from_terms(terms, &qmax_w)?;
    xi_shifted.mul(&theta)?.ct_poisson()
}

/// Result of the main exact comparison `q^s a = ct(P_t (q^(-1/8) xi_t) theta)`.
#[derive(Clone, Debug)]
pub struct FormalCheck {
    pub dmax: i64,
    pub anomaly: BigRational,
    /// Weyl-route coefficients `K_{Lambda, lambda - k delta}` for `k <= dmax`.
    pub coeffs_a: Vec<TPoly>,
    /// Lattice-route series, supported on `s + 1/8`-shifted integer grid.
    pub lattice_side: Series3,
    pub first_diff: Option<FormalDiff>,
}

impl FormalCheck {
    pub fn pass(&self) -> bool {
        self.first_diff.is_none()
    }
}

/// Run the main identity at order `dmax` for a normalized instance.
pub fn formal_identity(p: &StringProblem, dmax: i64) -> Result<FormalCheck> {
    let coeffs_a = method_a_coeffs(p, dmax)?;
    let halfn_max = p.anomaly() + rat::frac(1, 8) + rat::int(dmax);
    let terms = theta_term_list(p, &halfn_max)?;
    let lattice_side = method_b_series(p, dmax, &terms)?;

    let qmax_w = halfn_max;
    let mut weyl_side = Series3::zero(&qmax_w);
    let z0 = rat::int(0);
    for (k, c) in coeffs_a.iter().enumerate() {
        weyl_side.add_term(&(p.anomaly() + rat::int(k as i64)), &z0, c);
    }
    let upto = p.anomaly() + rat::int(dmax);
    let first_diff = first_difference(&weyl_side, &lattice_side, &upto);
    Ok(FormalCheck {
        dmax,
        anomaly: p.anomaly().clone(),
        coeffs_a,
        lattice_side,
        first_diff,
    })
}

/// The intermediate identity `a = ct(P_t xi_t Hbar)` at order `dmax`;
/// `None` means exact agreement.
pub fn hbar_identity(p: &StringProblem, dmax: i64) -> Result<Option<FormalDiff>> {
    let tbl = table_for(p, dmax)?;
    let a = tstring_a(p, dmax, &tbl)?;
    let xi = xi_series(&rat::int(dmax))?;
    let hbar = build_hbar(p, dmax)?;
    let ct = xi.mul(&hbar)?.ct_poisson()?;
    Ok(first_difference(&a, &ct, &rat::int(dmax)))
}

/// Result of the numeric radial-average comparison.
#[derive(Clone, Debug)]
pub struct IntegralCheck {
    /// Series-side value of the string function.
    pub series_value: Complex64,
    /// Radial average of the extended theta times the eta factor.
    pub average_value: Complex64,
    pub abs_err: f64,
    /// Magnitude of the last kept series term, as a truncation indicator.
    pub tail_estimate: f64,
}

/// Evaluate both sides of the radial-average identity at the configured
/// point.
pub fn integral_identity(p: &StringProblem, cfg: &EvalConfig) -> Result<IntegralCheck> {
    cfg.validate()?;
    let terms = theta_term_list(p, &cfg.half_n_max)?;
    let average_value = radial_average(&terms, cfg)?;

    let coeffs = method_a_coeffs(p, cfg.qmax)?;
    let series_value = eval_tstring_series(p, &coeffs, cfg.t, cfg.tau);

    let qabs = (-2.0 * std::f64::consts::PI * cfg.tau.im).exp();
    let s = rat::to_f64(p.anomaly());
    let tail_estimate = coeffs
        .last()
        .map(|c| c.eval_f64(cfg.t).abs() * qabs.powf(s + cfg.qmax as f64))
        .unwrap_or(0.0);

    Ok(IntegralCheck {
        series_value,
        average_value,
        abs_err: (series_value - average_value).norm(),
        tail_estimate,
    })
}

/// One row of the `t -> 1` degeneration experiment.
#[derive(Clone, Copy, Debug)]
pub struct LimitRow {
    pub t: f64,
    pub nodes: u32,
    pub abs_err: f64,
}

/// Radial averages against the `omega = 1` limit value
/// `theta_L(tau) * eta^(-3)(1; tau)` for a schedule of `(t, nodes)` pairs.
pub fn limit_experiment(
    p: &StringProblem,
    tau: Complex64,
    half_n_max: &BigRational,
    nmax: u32,
    steps: &[(f64, u32)],
) -> Result<(Complex64, Vec<LimitRow>)> {
    let terms = theta_term_list(p, half_n_max)?;
    let target = theta_l_value(&terms, tau) * eval_eta_m3(Complex64::new(1.0, 0.0), tau, nmax);
    let mut rows = Vec::new();
    for &(t, nodes) in steps {
        let cfg = EvalConfig {
            tau,
            t,
            half_n_max: half_n_max.clone(),
            nmax,
            quad_points: nodes,
            qmax: 0,
        };
        let value = radial_average_with_nodes(&terms, &cfg, nodes)?;
        rows.push(LimitRow { t, nodes, abs_err: (value - target).norm() });
    }
    Ok((target, rows))
}
