//! Integration rules on the circle [0, 2π) and the half-line [0, ∞).

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{ComplexSum, KahanSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Circle,
    HalfLine,
}

/// Nodes and positive weights; `integrate` computes Σ wᵢ f(xᵢ).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub domain: Domain,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Circle rules: highest Fourier degree integrated exactly.
    /// Half-line rules: the node count.
    pub order_hint: usize,
}

/// Equispaced periodic trapezoid rule with weight 2π/n.
pub fn circle_rule(n_nodes: usize) -> Result<QuadratureRule> {
    if n_nodes < 4 {
        return Err(Error::InvalidParam {
            name: "n_nodes",
            msg: format!("circle rule needs at least 4 nodes, got {n_nodes}"),
        });
    }
    let h = TAU / n_nodes as f64;
    Ok(QuadratureRule {
        domain: Domain::Circle,
        nodes: (0..n_nodes).map(|k| k as f64 * h).collect(),
        weights: vec![h; n_nodes],
        order_hint: n_nodes.div_ceil(2) - 1,
    })
}

/// Tanh-sinh rule on [0, 2π] with nodes clustered double-exponentially at
/// θ = 0 and θ = 2π,
///
///   θ(t) = π (1 + tanh(π/2 · sinh t)),   t ∈ [-T, T].
///
/// Used for integrands carrying |sin θ/2|^γ with fractional γ, whose kink
/// at θ = 0 ruins the spectral accuracy of [`circle_rule`].
pub fn circle_rule_clustered(n_nodes: usize) -> Result<QuadratureRule> {
    if n_nodes < 4 {
        return Err(Error::InvalidParam {
            name: "n_nodes",
            msg: format!("circle rule needs at least 4 nodes, got {n_nodes}"),
        });
    }
    const T: f64 = 3.2;
    let h = 2.0 * T / (n_nodes - 1) as f64;
    let mut nodes = Vec::with_capacity(n_nodes);
    let mut weights = Vec::with_capacity(n_nodes);
    for k in 0..n_nodes {
        let t = -T + k as f64 * h;
        let s = FRAC_PI_2 * t.sinh();
        let ch = s.cosh();
        // π(1 + tanh s) = 2π/(1 + e^{-2s}), written to stay exact near both ends
        let theta = if s < 0.0 {
            TAU / (1.0 + (-2.0 * s).exp())
        } else {
            TAU - TAU / (1.0 + (2.0 * s).exp())
        };
        nodes.push(theta);
        weights.push(h * PI * FRAC_PI_2 * t.cosh() / (ch * ch));
    }
    Ok(QuadratureRule {
        domain: Domain::Circle,
        nodes,
        weights,
        order_hint: n_nodes / 8,
    })
}

/// Double-exponential rule on [0, ∞) from the map
///
///   x(t) = s · exp(t - e^{-t}),   x'(t) = x (1 + e^{-t}),
///
/// which decays double-exponentially at the origin (absorbing x^{α-1/2}
/// endpoint behaviour) and grows single-exponentially at infinity, where
/// Gaussian decay makes the integrand double-exponentially small. The
/// truncated interval t ∈ [-4.5, 3.5] spans x ∈ [≈10⁻³⁹ s, ≈33 s].
pub fn half_line_rule(n_nodes: usize, scale: f64) -> Result<QuadratureRule> {
    if n_nodes < 8 {
        return Err(Error::InvalidParam {
            name: "n_nodes",
            msg: format!("half-line rule needs at least 8 nodes, got {n_nodes}"),
        });
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParam {
            name: "scale",
            msg: format!("must be positive, got {scale}"),
        });
    }
    const T_LO: f64 = -4.5;
    const T_HI: f64 = 3.5;
    let h = (T_HI - T_LO) / (n_nodes - 1) as f64;
    let mut nodes = Vec::with_capacity(n_nodes);
    let mut weights = Vec::with_capacity(n_nodes);
    for k in 0..n_nodes {
        let t = T_LO + k as f64 * h;
        let e = (-t).exp();
        let x = scale * (t - e).exp();
        nodes.push(x);
        weights.push(h * x * (1.0 + e));
    }
    Ok(QuadratureRule {
        domain: Domain::HalfLine,
        nodes,
        weights,
        order_hint: n_nodes,
    })
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ f(xᵢ) for a complex integrand.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F) -> Result<Complex64> {
        let mut sum = ComplexSum::new();
        for (i, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = f(x);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite { index: i, x });
            }
            sum.add(v * w);
        }
        Ok(sum.value())
    }

    /// Σ wᵢ f(xᵢ) for a real integrand.
    pub fn integrate_real<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut sum = KahanSum::new();
        for (i, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { index: i, x });
            }
            sum.add(v * w);
        }
        Ok(sum.value())
    }

    /// Σ wᵢ vᵢ for integrand samples taken at the rule's nodes.
    pub fn integrate_samples(&self, values: &[Complex64]) -> Result<Complex64> {
        assert_eq!(values.len(), self.len(), "sample count must match the rule");
        let mut sum = ComplexSum::new();
        for (i, (&v, &w)) in values.iter().zip(&self.weights).enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite {
                    index: i,
                    x: self.nodes[i],
                });
            }
            sum.add(v * w);
        }
        Ok(sum.value())
    }
}
