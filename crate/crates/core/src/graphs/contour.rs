//! Two representations of the time-simplex propagator product
//!
//!   S(ω₁, …, ω_{k+1}) = ∫_{s_j ≥ 0, Σs_j = t} Π_j e^{−i s_j ω_j} ds₁ … ds_k
//!
//! and its frequency form
//!
//!   (−i)^k S = (i e^{ηt} / 2π) ∫_ℝ dα e^{−iαt} Π_j 1/(α − ω_j + iη),
//!
//! valid for every η > 0 and Im ω_j ≤ 0.

use num_complex::Complex64;

use super::GraphError;
use crate::quad::GaussLegendre;

/// Largest k for the contour identity check.
pub const MAX_CONTOUR_K: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ContourOptions {
    /// Gauss–Legendre nodes per panel.
    pub nodes_per_panel: usize,
    /// Bound on the truncation error of the α-integral, relative to
    /// max(1, t^k/k!).
    pub tail_tolerance: f64,
    /// Hard cap on the truncation radius.
    pub max_extent: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self { nodes_per_panel: 10, tail_tolerance: 1e-7, max_extent: 5e3 }
    }
}

/// Fixed α-quadrature for the frequency form, shared by every frequency
/// tuple whose real parts lie in [re_min, re_max].
///
/// The integrand is split as f = h + (f − h) with h = (α − c)^{−(k+1)},
/// c the mean of the poles ω_j − iη; h integrates in closed form and f − h
/// decays like α^{−(k+3)}.
#[derive(Debug, Clone)]
pub struct AlphaRule {
    k: usize,
    t: f64,
    eta: f64,
    extent: f64,
    nodes: Vec<f64>,
    weights: Vec<Complex64>,
}

impl AlphaRule {
    /// `spread` bounds Σ_j |a_j − c|² over the tuples to be evaluated.
    pub fn new(
        k: usize,
        t: f64,
        eta: f64,
        re_min: f64,
        re_max: f64,
        spread: f64,
        opts: &ContourOptions,
    ) -> Result<Self, GraphError> {
        if !(t > 0.0) || !(eta > 0.0) {
            return Err(GraphError::InvalidParameter(format!(
                "need t > 0 and η > 0, got t = {t}, η = {eta}"
            )));
        }
        let kk = (k + 2) as f64;
        let scale = spread.max(1e-300) * (eta * t).exp() / (2.0 * std::f64::consts::PI * kk);
        let tolerance = opts.tail_tolerance * simplex_scale(k, t);
        let from_tail = (4.0 * scale / tolerance).powf(1.0 / kk);
        let reach = re_min.abs().max(re_max.abs()) + 1.0;
        let extent = from_tail.max(4.0 * reach).max(re_max + 10.0 * eta);
        if extent > opts.max_extent {
            return Err(GraphError::QuadratureDivergence {
                estimate: scale * opts.max_extent.powf(-kk),
                tolerance,
            });
        }
        let gl = GaussLegendre::new(opts.nodes_per_panel);
        let oscillation = std::f64::consts::PI / (2.0 * t);
        let core_w = (eta / 2.0).min(oscillation);
        let (lo, hi) = (re_min - 2.0, re_max + 2.0);
        let mut edges = Vec::new();
        // left outer region, panels growing away from the core
        let mut x = lo;
        let mut left = vec![x];
        while x > -extent {
            let w = oscillation.min(core_w.max(0.5 * (lo - x).max(core_w)));
            x = (x - w).max(-extent);
            left.push(x);
        }
        left.reverse();
        edges.extend(left);
        let core_panels = ((hi - lo) / core_w).ceil() as usize;
        for i in 1..=core_panels {
            edges.push(lo + (hi - lo) * i as f64 / core_panels as f64);
        }
        let mut x = hi;
        while x < extent {
            let w = oscillation.min(core_w.max(0.5 * (x - hi).max(core_w)));
            x = (x + w).min(extent);
            edges.push(x);
        }
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for pair in edges.windows(2) {
            for (a, w) in gl.on(pair[0], pair[1]) {
                nodes.push(a);
                weights.push(w * Complex64::from_polar(1.0, -a * t));
            }
        }
        Ok(Self { k, t, eta, extent, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// (i e^{ηt}/2π) ∫ dα e^{−iαt} Π 1/(α − ω_j + iη), and an estimate of
    /// the truncation error.
    pub fn eval(&self, omegas: &[Complex64]) -> (Complex64, f64) {
        assert_eq!(omegas.len(), self.k + 1);
        let i = Complex64::i();
        let poles: Vec<Complex64> = omegas.iter().map(|w| w - i * self.eta).collect();
        let c = poles.iter().sum::<Complex64>() / poles.len() as f64;
        let m = self.k as i32 + 1;
        let resid = |a: f64| -> Complex64 {
            let f = poles.iter().fold(Complex64::new(1.0, 0.0), |acc, p| acc / (a - p));
            f - (a - c).powi(-m)
        };
        let mut sum = Complex64::default();
        for (&a, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * resid(a);
        }
        let kf: f64 = (1..=self.k).map(|j| j as f64).product();
        let exact = -2.0 * std::f64::consts::PI * i * (-i * self.t).powi(self.k as i32) / kf
            * (-i * c * self.t).exp();
        let pref = i * (self.eta * self.t).exp() / (2.0 * std::f64::consts::PI);
        let tail = (resid(self.extent).norm() + resid(-self.extent).norm()) * self.extent
            / (self.k as f64 + 2.0);
        (pref * (sum + exact), pref.norm() * tail)
    }
}

/// max(1, t^k/k!), the size of S for real frequencies; tail tolerances
/// are relative to it.
pub fn simplex_scale(k: usize, t: f64) -> f64 {
    let kf: f64 = (1..=k).map(|j| j as f64).product();
    (t.powi(k as i32) / kf).max(1.0)
}

/// Σ_j |a_j − c|² for the poles a_j = ω_j − iη (independent of η).
pub fn pole_spread(omegas: &[Complex64]) -> f64 {
    let c = omegas.iter().sum::<Complex64>() / omegas.len() as f64;
    omegas.iter().map(|w| (w - c).norm_sqr()).sum()
}

/// Frequency form of (−i)^k S with its own quadrature rule.
pub fn contour_integral(
    omegas: &[Complex64],
    t: f64,
    eta: f64,
    opts: &ContourOptions,
) -> Result<Complex64, GraphError> {
    if omegas.is_empty() {
        return Err(GraphError::InvalidParameter("need at least one frequency".into()));
    }
    let re_min = omegas.iter().map(|w| w.re).fold(f64::INFINITY, f64::min);
    let re_max = omegas.iter().map(|w| w.re).fold(f64::NEG_INFINITY, f64::max);
    let rule = AlphaRule::new(omegas.len() - 1, t, eta, re_min, re_max, pole_spread(omegas), opts)?;
    let (value, tail) = rule.eval(omegas);
    let tolerance = opts.tail_tolerance * simplex_scale(omegas.len() - 1, t);
    if tail > tolerance {
        return Err(GraphError::QuadratureDivergence { estimate: tail, tolerance });
    }
    Ok(value)
}

/// Nodes and cumulative integration matrix on [−1, 1]:
/// `cum[a][b]` = ∫_{−1}^{x_a} ℓ_b(x) dx for the Lagrange basis ℓ_b.
struct PanelRule {
    gl: GaussLegendre,
    cum: Vec<Vec<f64>>,
}

fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![1.0, x];
    for m in 1..n {
        let next = ((2 * m + 1) as f64 * x * p[m] - m as f64 * p[m - 1]) / (m + 1) as f64;
        p.push(next);
    }
    p.truncate(n + 1);
    p
}

impl PanelRule {
    fn new(q: usize) -> Self {
        let gl = GaussLegendre::new(q);
        let cum = gl
            .nodes
            .iter()
            .map(|&xa| {
                let pa = legendre_all(q + 1, xa);
                let integral = |n: usize| {
                    if n == 0 {
                        xa + 1.0
                    } else {
                        (pa[n + 1] - pa[n - 1]) / (2 * n + 1) as f64
                    }
                };
                gl.nodes
                    .iter()
                    .zip(&gl.weights)
                    .map(|(&xb, &wb)| {
                        let pb = legendre_all(q, xb);
                        (0..q).map(|n| wb * (2 * n + 1) as f64 / 2.0 * pb[n] * integral(n)).sum()
                    })
                    .collect()
            })
            .collect();
        Self { gl, cum }
    }
}

/// S(ω) by iterated cumulative quadrature on composite Gauss–Legendre
/// panels: I₀(τ) = e^{−iτω₁}, I_j(τ) = ∫_0^τ e^{−i(τ−s)ω_{j+1}} I_{j−1}(s) ds.
pub fn simplex_integral(omegas: &[Complex64], t: f64) -> Complex64 {
    const Q: usize = 16;
    let k = omegas.len() - 1;
    let i = Complex64::i();
    if k == 0 {
        return (-i * omegas[0] * t).exp();
    }
    let rule = PanelRule::new(Q);
    let wmax = omegas.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let panels = ((t * wmax / 2.0).ceil() as usize).max(1) + 1;
    let h = t / panels as f64;
    let half = h / 2.0;
    let taus: Vec<f64> = (0..panels)
        .flat_map(|m| rule.gl.nodes.iter().map(move |x| m as f64 * h + half * (x + 1.0)))
        .collect();
    let mut vals: Vec<Complex64> = taus.iter().map(|&s| (-i * omegas[0] * s).exp()).collect();
    let mut total = Complex64::default();
    for j in 1..=k {
        let w = omegas[j];
        let g: Vec<Complex64> = taus.iter().zip(&vals).map(|(&s, v)| (i * w * s).exp() * v).collect();
        let mut running = Complex64::default();
        let mut next = vec![Complex64::default(); taus.len()];
        for m in 0..panels {
            let gp = &g[m * Q..(m + 1) * Q];
            for a in 0..Q {
                let partial: Complex64 = rule.cum[a].iter().zip(gp).map(|(c, v)| v * *c).sum();
                let tau = taus[m * Q + a];
                next[m * Q + a] = (-i * w * tau).exp() * (running + half * partial);
            }
            running += half * rule.gl.weights.iter().zip(gp).map(|(c, v)| v * *c).sum::<Complex64>();
        }
        total = (-i * w * t).exp() * running;
        vals = next;
    }
    total
}

/// ((−i)^k S by simplex quadrature, frequency-form value) for k = len − 1.
pub fn contour_identity_check(
    omegas: &[Complex64],
    t: f64,
    eta: f64,
    opts: &ContourOptions,
) -> Result<(Complex64, Complex64), GraphError> {
    if omegas.is_empty() {
        return Err(GraphError::InvalidParameter("need at least one frequency".into()));
    }
    let k = omegas.len() - 1;
    if k > MAX_CONTOUR_K {
        return Err(GraphError::KTooLarge { k, max: MAX_CONTOUR_K });
    }
    let lhs = (-Complex64::i()).powi(k as i32) * simplex_integral(omegas, t);
    let rhs = contour_integral(omegas, t, eta, opts)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divided_difference(omegas: &[f64], t: f64) -> Complex64 {
        let i = Complex64::i();
        omegas
            .iter()
            .enumerate()
            .map(|(j, &wj)| {
                let den = omegas
                    .iter()
                    .enumerate()
                    .filter(|&(l, _)| l != j)
                    .fold(Complex64::new(1.0, 0.0), |acc, (_, &wl)| acc * (-i * (wj - wl)));
                (-i * wj * t).exp() / den
            })
            .sum()
    }

    #[test]
    fn simplex_matches_closed_form() {
        for omegas in [vec![0.3, 2.1], vec![0.0, 1.7, 4.2], vec![5.5, 0.2, 3.3, 1.1, 2.6]] {
            let w: Vec<Complex64> = omegas.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            for t in [0.7, 4.0, 15.0] {
                let a = simplex_integral(&w, t);
                let b = divided_difference(&omegas, t);
                assert!((a - b).norm() < 1e-10 * b.norm().max(1.0), "{omegas:?} {t}: {a} {b}");
            }
        }
    }

    #[test]
    fn coincident_frequencies() {
        // all equal: S = t^k/k! e^{−iωt}
        let w = vec![Complex64::new(1.3, 0.0); 3];
        let s = simplex_integral(&w, 2.0);
        let expect = 2.0 * Complex64::from_polar(1.0, -2.6);
        assert!((s - expect).norm() < 1e-12);
        let (l, r) = contour_identity_check(&w, 2.0, 0.5, &ContourOptions::default()).unwrap();
        assert!((l - r).norm() < 1e-6);
    }

    #[test]
    fn single_propagator() {
        let (l, r) =
            contour_identity_check(&[Complex64::new(2.2, 0.0)], 3.0, 1.0 / 3.0, &Default::default())
                .unwrap();
        let expect = Complex64::from_polar(1.0, -6.6);
        assert!((l - expect).norm() < 1e-12);
        assert!((r - expect).norm() < 1e-6);
    }

    #[test]
    fn too_many_propagators() {
        let w = vec![Complex64::new(1.0, 0.0); 6];
        assert!(matches!(
            contour_identity_check(&w, 1.0, 1.0, &Default::default()),
            Err(GraphError::KTooLarge { .. })
        ));
    }
}
