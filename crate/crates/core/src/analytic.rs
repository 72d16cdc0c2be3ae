//! Complex-numeric evaluation: the extended theta function, the extended
//! eta factor, the Poisson kernel, the radial-average integral, and the
//! series side it is compared against.
//!
//! Conventions: `q = e^(2 pi i tau)` with `tau` in the upper half plane,
//! `omega = t e^(2 pi i u)` with `0 < t <= 1`, `u` in `[0, 1)`. The
//! integrand of the radial average is smooth and periodic in `u`, so the
//! composite trapezoid rule (equivalently, the node mean) converges
//! spectrally; the driver doubles the node count until two successive
//! values agree to `1e-9` or a configured cap is reached.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::rational::BigRational;

use crate::error::{Error, Result};
use crate::lattice::ThetaTerm;
use crate::par::par_map;
use crate::rat;
use crate::tpoly::TPoly;
use crate::weyl::StringProblem;

/// Parameters for one numeric comparison.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    /// Point in the upper half plane.
    pub tau: Complex64,
    /// Radius of the circle, in `(0, 1]` (strictly below 1 for averages).
    pub t: f64,
    /// Theta enumeration cutoff on `N/2`.
    pub half_n_max: BigRational,
    /// Eta-product cutoff.
    pub nmax: u32,
    /// Quadrature node cap (the doubling driver stops here).
    pub quad_points: u32,
    /// Series cutoff for the string side.
    pub qmax: i64,
}

impl EvalConfig {
    pub fn new(tau: Complex64, t: f64) -> Self {
        Self { tau, t, half_n_max: rat::int(30), nmax: 60, quad_points: 1024, qmax: 20 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau.im <= 0.0 {
            return Err(Error::InvalidConfig(format!("Im(tau) = {} must be positive", self.tau.im)));
        }
        if !(self.t > 0.0 && self.t <= 1.0) {
            return Err(Error::InvalidConfig(format!("t = {} must lie in (0, 1]", self.t)));
        }
        if self.quad_points < 16 || !self.quad_points.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "quad_points = {} must be even and at least 16",
                self.quad_points
            )));
        }
        if self.qmax < 0 {
            return Err(Error::InvalidConfig("qmax must be nonnegative".into()));
        }
        Ok(())
    }
}

/// The extended theta value at `omega = t e^(2 pi i u)`:
/// `sum sign * e^(pi i tau N) * t^tshift * e^(2 pi i u zshift)`.
pub fn eval_theta_ext(terms: &[ThetaTerm], t: f64, u: f64, tau: Complex64) -> Complex64 {
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let mut acc = Complex64::new(0.0, 0.0);
    for term in terms {
        let half_n = rat::to_f64(&term.half_n);
        let zshift = rat::to_f64(&term.zshift);
        let phase = (i2pi * tau * half_n + i2pi * u * zshift).exp();
        acc += term.sign as f64 * t.powi(term.tshift as i32) * phase;
    }
    acc
}

/// The extended eta factor
/// `e^(-pi i tau / 4) prod_{n=1}^{nmax} [(1 - |w| q^n)(1 - w q^n)(1 - conj(w) q^n)]^-1`.
///
/// This is the value of the formal triple product `q^(-1/8) xi_t` at
/// `t = |omega|, z = omega/|omega|`; the constant-term identity forces the
/// radial factor `|omega|` on the first family (at `|omega| = 1` it reduces
/// to `eta^-3`, and only there does it coincide with the variant whose
/// first family is `1 - q^n`).
pub fn eval_eta_m3(omega: Complex64, tau: Complex64, nmax: u32) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let mut acc = (Complex64::new(0.0, -PI / 4.0) * tau).exp();
    let radius = omega.norm();
    let wbar = omega.conj();
    let mut qn = Complex64::new(1.0, 0.0);
    for _ in 1..=nmax {
        qn *= q;
        acc /= (1.0 - radius * qn) * (1.0 - omega * qn) * (1.0 - wbar * qn);
    }
    acc
}

/// Poisson kernel `P(omega) = (1 - |omega|^2) / |1 - omega|^2` on the open
/// disc.
pub fn poisson(omega: Complex64) -> Result<f64> {
    let r2 = omega.norm_sqr();
    if r2 >= 1.0 {
        return Err(Error::InvalidConfig(format!("|omega| = {} must be < 1", r2.sqrt())));
    }
    Ok((1.0 - r2) / (1.0 - omega).norm_sqr())
}

fn integrand(terms: &[ThetaTerm], cfg: &EvalConfig, u: f64) -> Complex64 {
    let omega = cfg.t * Complex64::new(0.0, 2.0 * PI * u).exp();
    let theta = eval_theta_ext(terms, cfg.t, u, cfg.tau);
    let eta = eval_eta_m3(omega, cfg.tau, cfg.nmax);
    let kernel = poisson(omega).expect("t < 1 guarantees |omega| < 1");
    theta * eta * kernel
}

/// Fixed-node composite trapezoid over `u` in `[0, 1)`: for a periodic
/// integrand this is the plain node mean. Nodes are evaluated independently
/// and summed in index order.
pub fn radial_average_with_nodes(
    terms: &[ThetaTerm],
    cfg: &EvalConfig,
    nodes: u32,
) -> Result<Complex64> {
    cfg.validate()?;
    if cfg.t >= 1.0 {
        return Err(Error::InvalidConfig("radial average needs t < 1 strictly".into()));
    }
    let us: Vec<f64> = (0..nodes).map(|j| j as f64 / nodes as f64).collect();
    let values = par_map(us, |u| integrand(terms, cfg, u));
    let sum: Complex64 = values.into_iter().sum();
    Ok(sum / nodes as f64)
}

/// Sequential reference implementation of [`radial_average_with_nodes`].
pub fn radial_average_with_nodes_serial(
    terms: &[ThetaTerm],
    cfg: &EvalConfig,
    nodes: u32,
) -> Result<Complex64> {
    cfg.validate()?;
    if cfg.t >= 1.0 {
        return Err(Error::InvalidConfig("radial average needs t < 1 strictly".into()));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        sum += integrand(terms, cfg, j as f64 / nodes as f64);
    }
    Ok(sum / nodes as f64)
}

/// Adaptive driver: double the node count until two successive values agree
/// to `1e-9` or `cfg.quad_points` is reached; returns the last value.
pub fn radial_average(terms: &[ThetaTerm], cfg: &EvalConfig) -> Result<Complex64> {
    let mut nodes = 64.min(cfg.quad_points);
    let mut value = radial_average_with_nodes(terms, cfg, nodes)?;
    while nodes * 2 <= cfg.quad_points {
        nodes *= 2;
        let refined = radial_average_with_nodes(terms, cfg, nodes)?;
        let delta = (refined - value).norm();
        value = refined;
        if delta < 1e-9 {
            break;
        }
    }
    Ok(value)
}

/// Series-side value `q^s sum_k K_{Lambda, lambda - k delta}(t) q^k` at
/// `q = e^(2 pi i tau)`.
pub fn eval_tstring_series(
    p: &StringProblem,
    coeffs: &[TPoly],
    t: f64,
    tau: Complex64,
) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let s = rat::to_f64(p.anomaly());
    let prefactor = (Complex64::new(0.0, 2.0 * PI) * tau * s).exp();
    let mut qk = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs {
        acc += c.eval_f64(t) * qk;
        qk *= q;
    }
    prefactor * acc
}

/// `theta_L(tau)` from a term list: the `omega = 1` specialization.
pub fn theta_l_value(terms: &[ThetaTerm], tau: Complex64) -> Complex64 {
    eval_theta_ext(terms, 1.0, 0.0, tau)
}
