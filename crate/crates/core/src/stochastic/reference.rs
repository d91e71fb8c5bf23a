//! Closed-form and ODE reference curves for the random graph model with
//! vertex rates `ν±` and edge rates `ε±`.
//!
//! The vertex count starting from `N` vertices is distributed as
//! `Poisson(a) + Binomial(N, p)` with `p = e^{-ν₋t}` and
//! `a = (ν₊/ν₋)(1 − p)`, so its moment generating function is
//!
//! ```text
//! M_V(t; λ) = exp(a (e^λ − 1)) · (1 + (e^λ − 1) p)^N
//! ```
//!
//! and differentiating at `λ = 0` gives
//!
//! ```text
//! E[V]        = a + N p
//! E[V(V − 1)] = (a + N p)² − N p²
//! ```
//!
//! The edge mean solves `E' = ε₊ E[V(V − 1)] − (ε₋ + 2ν₋) E`.

use ode_solvers::{Dopri5, OutputType, System, Vector1};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ReferenceError {
    #[error("vertex deletion rate must be positive, got {0}")]
    VertexDeletionRate(f64),
    #[error("{name} must be a finite non-negative number, got {value}")]
    Domain { name: &'static str, value: f64 },
    #[error("edge mean integration failed: {0}")]
    Integration(String),
    #[error("finite-difference check of {what} at t={t}: closed form {exact}, differences {approx}")]
    SelfCheck { what: &'static str, t: f64, exact: f64, approx: f64 },
}

pub const RTOL: f64 = 1e-8;
const ATOL: f64 = 1e-12;

fn non_negative(name: &'static str, value: f64) -> Result<(), ReferenceError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ReferenceError::Domain { name, value })
    }
}

/// Vertex creation rate `ν₊`, deletion rate `ν₋ > 0` and initial count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexModel {
    pub nu_plus: f64,
    pub nu_minus: f64,
    pub n_v: f64,
}

impl VertexModel {
    pub fn new(nu_plus: f64, nu_minus: f64, n_v: f64) -> Result<Self, ReferenceError> {
        non_negative("nu_plus", nu_plus)?;
        non_negative("n_v", n_v)?;
        if !(nu_minus.is_finite() && nu_minus > 0.0) {
            return Err(ReferenceError::VertexDeletionRate(nu_minus));
        }
        Ok(VertexModel { nu_plus, nu_minus, n_v })
    }

    /// `(a, p)` at time `t`.
    fn params(&self, t: f64) -> (f64, f64) {
        let p = (-self.nu_minus * t).exp();
        (self.nu_plus / self.nu_minus * (-(-self.nu_minus * t).exp_m1()), p)
    }

    pub fn mgf(&self, t: f64, lambda: f64) -> f64 {
        let (a, p) = self.params(t);
        let x = lambda.exp_m1();
        (a * x).exp() * (1.0 + x * p).powf(self.n_v)
    }

    pub fn mean(&self, t: f64) -> f64 {
        let (a, p) = self.params(t);
        a + self.n_v * p
    }

    pub fn factorial_moment(&self, t: f64) -> f64 {
        let (a, p) = self.params(t);
        let m = a + self.n_v * p;
        m * m - self.n_v * p * p
    }

    pub fn variance(&self, t: f64) -> f64 {
        let m = self.mean(t);
        self.factorial_moment(t) + m - m * m
    }

    /// Compares the differentiated closed form with central differences of
    /// the generating function.
    pub fn self_check(&self, t: f64) -> Result<(), ReferenceError> {
        let h = 1e-4;
        let (lo, mid, hi) = (self.mgf(t, -h), self.mgf(t, 0.0), self.mgf(t, h));
        let mean = (hi - lo) / (2.0 * h);
        let second = (hi - 2.0 * mid + lo) / (h * h);
        let close = |exact: f64, approx: f64| (exact - approx).abs() <= 1e-5 * (1.0 + exact.abs());
        let exact_mean = self.mean(t);
        if !close(exact_mean, mean) {
            return Err(ReferenceError::SelfCheck { what: "E[V]", t, exact: exact_mean, approx: mean });
        }
        let exact = self.factorial_moment(t);
        if !close(exact, second - mean) {
            return Err(ReferenceError::SelfCheck { what: "E[V(V-1)]", t, exact, approx: second - mean });
        }
        Ok(())
    }
}

/// `M_V(t; λ)`. Rejects `ν₋ = 0`.
pub fn reference_vertex_mgf(t: f64, lambda: f64, nu_plus: f64, nu_minus: f64, n_v: f64) -> Result<f64, ReferenceError> {
    Ok(VertexModel::new(nu_plus, nu_minus, n_v)?.mgf(t, lambda))
}

pub fn vertex_mean(t: f64, nu_plus: f64, nu_minus: f64, n_v: f64) -> Result<f64, ReferenceError> {
    Ok(VertexModel::new(nu_plus, nu_minus, n_v)?.mean(t))
}

pub fn vertex_factorial_moment(t: f64, nu_plus: f64, nu_minus: f64, n_v: f64) -> Result<f64, ReferenceError> {
    Ok(VertexModel::new(nu_plus, nu_minus, n_v)?.factorial_moment(t))
}

pub fn vertex_variance(t: f64, nu_plus: f64, nu_minus: f64, n_v: f64) -> Result<f64, ReferenceError> {
    Ok(VertexModel::new(nu_plus, nu_minus, n_v)?.variance(t))
}

/// Rates and initial counts of the full model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeModel {
    pub vertices: VertexModel,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub n_e: f64,
}

impl EdgeModel {
    pub fn new(
        nu_plus: f64,
        nu_minus: f64,
        eps_plus: f64,
        eps_minus: f64,
        n_v: f64,
        n_e: f64,
    ) -> Result<Self, ReferenceError> {
        non_negative("eps_plus", eps_plus)?;
        non_negative("eps_minus", eps_minus)?;
        non_negative("n_e", n_e)?;
        Ok(EdgeModel { vertices: VertexModel::new(nu_plus, nu_minus, n_v)?, eps_plus, eps_minus, n_e })
    }

    /// `ν₊² ε₊ / (ν₋² (2ν₋ + ε₋))`.
    pub fn stationary_mean(&self) -> f64 {
        let v = &self.vertices;
        v.nu_plus * v.nu_plus * self.eps_plus / (v.nu_minus * v.nu_minus * (2.0 * v.nu_minus + self.eps_minus))
    }
}

struct EdgeOde<'a>(&'a EdgeModel);

impl System<f64, Vector1<f64>> for EdgeOde<'_> {
    fn system(&self, t: f64, y: &Vector1<f64>, dy: &mut Vector1<f64>) {
        let m = self.0;
        let decay = m.eps_minus + 2.0 * m.vertices.nu_minus;
        dy[0] = m.eps_plus * m.vertices.factorial_moment(t) - decay * y[0];
    }
}

/// Edge mean at each of `times` (sorted, non-negative), integrating with
/// Dormand–Prince 5(4) at relative tolerance [`RTOL`].
pub fn reference_edge_mean_curve(model: &EdgeModel, times: &[f64]) -> Result<Vec<f64>, ReferenceError> {
    for &t in times {
        non_negative("t", t)?;
    }
    for t in [0.0, 0.5, 2.0] {
        model.vertices.self_check(t)?;
    }
    let mut out = Vec::with_capacity(times.len());
    let (mut t0, mut y0) = (0.0, model.n_e);
    for &t in times {
        if t > t0 {
            y0 = integrate(model, t0, t, y0)?;
            t0 = t;
        } else if t < t0 {
            return Err(ReferenceError::Integration("times must be sorted".into()));
        }
        out.push(y0);
    }
    Ok(out)
}

fn integrate(model: &EdgeModel, t0: f64, t1: f64, y0: f64) -> Result<f64, ReferenceError> {
    let span = t1 - t0;
    let mut stepper = Dopri5::from_param(
        EdgeOde(model),
        t0,
        t1,
        span,
        Vector1::new(y0),
        RTOL,
        ATOL,
        0.9,
        0.04,
        0.2,
        10.0,
        span,
        0.0,
        100_000,
        1000,
        OutputType::Sparse,
    );
    stepper.integrate().map_err(|e| ReferenceError::Integration(e.to_string()))?;
    let (&t_end, y) = stepper
        .x_out()
        .last()
        .zip(stepper.y_out().last())
        .ok_or_else(|| ReferenceError::Integration("no output".into()))?;
    if (t_end - t1).abs() > 1e-9 * (1.0 + t1.abs()) {
        return Err(ReferenceError::Integration(format!("stopped at t={t_end} before {t1}")));
    }
    Ok(y[0])
}

pub fn reference_edge_mean(t: f64, model: &EdgeModel) -> Result<f64, ReferenceError> {
    Ok(reference_edge_mean_curve(model, &[t])?[0])
}

/// Limit of the edge mean as `t → ∞`.
pub fn stationary_edge_mean(nu_plus: f64, nu_minus: f64, eps_plus: f64, eps_minus: f64) -> Result<f64, ReferenceError> {
    Ok(EdgeModel::new(nu_plus, nu_minus, eps_plus, eps_minus, 0.0, 0.0)?.stationary_mean())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The edge mean integrated in closed form: the source term is a
    /// combination of `e^{-kν₋t}`, `k = 0, 1, 2`.
    fn edge_mean_exact(m: &EdgeModel, t: f64) -> f64 {
        let v = &m.vertices;
        let (r, nu, n) = (v.nu_plus / v.nu_minus, v.nu_minus, v.n_v);
        // (a + Np)² − Np² with a = r(1 − p): coefficients of p⁰, p¹, p²
        let c = [r * r, 2.0 * r * (n - r), (n - r) * (n - r) - n];
        let d = m.eps_minus + 2.0 * nu;
        let mut e = m.n_e * (-d * t).exp();
        for (k, ck) in c.iter().enumerate() {
            let rate = k as f64 * nu;
            // ∫₀ᵗ e^{-d(t-s)} e^{-rate s} ds
            let integral = if (d - rate).abs() < 1e-14 {
                t * (-d * t).exp()
            } else {
                ((-rate * t).exp() - (-d * t).exp()) / (d - rate)
            };
            e += m.eps_plus * ck * integral;
        }
        e
    }

    #[test]
    fn mgf_boundary_values() {
        let v = VertexModel::new(2.0, 1.0, 3.0).unwrap();
        assert!((v.mgf(0.0, 0.7) - (0.7f64 * 3.0).exp()).abs() < 1e-12);
        assert_eq!(v.mgf(1.3, 0.0), 1.0);
        let limit = (2.0 * (0.4f64.exp() - 1.0)).exp();
        assert!((v.mgf(60.0, 0.4) - limit).abs() < 1e-12);
    }

    #[test]
    fn zero_deletion_rate_is_rejected() {
        assert_eq!(
            reference_vertex_mgf(1.0, 0.1, 1.0, 0.0, 0.0),
            Err(ReferenceError::VertexDeletionRate(0.0))
        );
        assert!(stationary_edge_mean(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(matches!(EdgeModel::new(1.0, 1.0, -1.0, 1.0, 0.0, 0.0), Err(ReferenceError::Domain { .. })));
    }

    #[test]
    fn closed_form_moments_match_finite_differences() {
        for (np, nm, n) in [(2.0, 1.0, 0.0), (0.5, 3.0, 4.0), (5.0, 0.2, 7.0)] {
            let v = VertexModel::new(np, nm, n).unwrap();
            for t in [0.0, 0.1, 1.0, 4.0] {
                v.self_check(t).unwrap();
            }
        }
    }

    #[test]
    fn poisson_limit() {
        let v = VertexModel::new(2.0, 1.0, 5.0).unwrap();
        assert!((v.mean(50.0) - 2.0).abs() < 1e-12);
        assert!((v.variance(50.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn stationary_values() {
        assert_eq!(stationary_edge_mean(1.0, 1.0, 0.0, 1.0).unwrap(), 0.0);
        assert!((stationary_edge_mean(1.0, 1.0, 1.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((stationary_edge_mean(2.0, 1.0, 3.0, 1.0).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn edge_mean_matches_closed_form_integral() {
        for (np, nm, ep, em, nv, ne) in [(1.0, 1.0, 5.0, 1.0, 0.0, 0.0), (2.0, 0.5, 1.0, 3.0, 4.0, 2.0), (1.0, 1.0, 1.0, 0.0, 3.0, 0.0)] {
            let m = EdgeModel::new(np, nm, ep, em, nv, ne).unwrap();
            let times = [0.0, 0.3, 1.0, 2.5, 10.0];
            let curve = reference_edge_mean_curve(&m, &times).unwrap();
            for (&t, &y) in times.iter().zip(&curve) {
                let exact = edge_mean_exact(&m, t);
                assert!((y - exact).abs() <= 1e-7 * (1.0 + exact.abs()), "t={t}: {y} vs {exact}");
            }
        }
    }

    #[test]
    fn edge_mean_without_creation_stays_zero() {
        let m = EdgeModel::new(1.0, 1.0, 0.0, 1.0, 3.0, 0.0).unwrap();
        assert!(reference_edge_mean_curve(&m, &[0.0, 1.0, 5.0]).unwrap().iter().all(|&y| y == 0.0));
    }

    #[test]
    fn edge_mean_approaches_stationary_value() {
        let m = EdgeModel::new(1.0, 1.0, 5.0, 1.0, 0.0, 0.0).unwrap();
        let y = reference_edge_mean(40.0, &m).unwrap();
        assert!((y - 5.0 / 3.0).abs() < 1e-7);
    }
}
