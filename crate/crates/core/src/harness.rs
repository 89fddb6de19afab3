//! Discretized wavelet-side realizations: R_k* maps f ∈ L₂(ℝ₊) to the upper
//! half-plane with measure v^{-2} du dv, R_k maps back, and T_a = R_k M_a R_k*.
//! These check isometry, projection and multiplier-equivalence identities
//! numerically, with explicit discretization budgets.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{domain, Error, Result};
use crate::gamma::{gamma, gamma_profile};
use crate::laguerre::ell;
use crate::quadrature::gauss::GaussLegendre;
use crate::symbols::{fit_line, iterated_mean, Symbol};

pub const ISOMETRY_BUDGET: f64 = 2e-2;
pub const IDENTITY_BUDGET: f64 = 2e-2;
pub const ORTHOGONALITY_BUDGET: f64 = 2e-2;
pub const PROJECTION_BUDGET: f64 = 3e-2;
pub const EQUIVALENCE_BUDGET: f64 = 3e-2;
/// Allowed shortfall of the fitted decay slope relative to α - β.
pub const DECAY_SLOPE_MARGIN: f64 = 0.15;

/// Sample points (u, v) of the upper half-plane with weights for v^{-2} du dv.
#[derive(Debug, Clone, Serialize)]
pub struct Grid2D {
    pub u: Vec<f64>,
    pub du: f64,
    /// cell centres in log v
    pub v: Vec<f64>,
    /// cell edges, one more than `v`
    pub v_edges: Vec<f64>,
    /// step in ln v
    pub dlnv: f64,
}

impl Grid2D {
    pub fn new(u_max: f64, du: f64, v_min: f64, v_max: f64, nv: usize) -> Result<Self> {
        if !(du > 0.0 && u_max > 0.0 && v_min > 0.0 && v_max > v_min && nv >= 2) {
            return domain(format!("bad grid u_max={u_max} du={du} v=[{v_min}, {v_max}] nv={nv}"));
        }
        let nu = (2.0 * u_max / du).round() as usize;
        let u = (0..=nu).map(|j| -u_max + j as f64 * du).collect();
        let dlnv = (v_max / v_min).ln() / nv as f64;
        let v_edges = (0..=nv).map(|i| v_min * (i as f64 * dlnv).exp()).collect();
        let v = (0..nv).map(|i| v_min * ((i as f64 + 0.5) * dlnv).exp()).collect();
        Ok(Self { u, du, v, v_edges, dlnv })
    }

    /// u ∈ [-40, 40] with step 1/16, 400 log cells on v ∈ [1e-3, 50].
    pub fn standard() -> Self {
        Self::new(40.0, 1.0 / 16.0, 1e-3, 50.0, 400).expect("valid defaults")
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.v.len(), self.u.len())
    }

    /// dν = du dv / v² with dv = v d(ln v).
    fn row_weight(&self, i: usize) -> f64 {
        self.du * self.dlnv / self.v[i]
    }
}

/// A function on a ξ grid with trapezoid weights.
#[derive(Debug, Clone, Serialize)]
pub struct HalfLineSignal {
    pub xi: Vec<f64>,
    pub values: Vec<Complex64>,
    pub weights: Vec<f64>,
}

fn trapezoid_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|j| {
            let left = if j > 0 { x[j] - x[j - 1] } else { 0.0 };
            let right = if j + 1 < n { x[j + 1] - x[j] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

/// C^∞ step: 0 for x ≤ 0, 1 for x ≥ 1.
fn smooth_step(x: f64) -> f64 {
    let psi = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let (a, b) = (psi(x), psi(1.0 - x));
    a / (a + b)
}

pub const SIGNAL_LO: f64 = 0.2;
pub const SIGNAL_HI: f64 = 4.2;
const RAMP: f64 = 0.4;

/// Smooth window supported on [0.2, 4.2], equal to 1 on [0.6, 3.8].
pub fn window(xi: f64) -> f64 {
    smooth_step((xi - SIGNAL_LO) / RAMP) * smooth_step((SIGNAL_HI - xi) / RAMP)
}

impl HalfLineSignal {
    pub fn new(xi: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if xi.len() != values.len() || xi.len() < 2 {
            return Err(Error::Dimension(format!("{} grid points but {} values", xi.len(), values.len())));
        }
        if xi[0] <= 0.0 || xi.windows(2).any(|w| w[1] <= w[0]) {
            return domain("signal grid must be positive and strictly increasing");
        }
        let weights = trapezoid_weights(&xi);
        Ok(Self { xi, values, weights })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(xi: Vec<f64>, f: F) -> Result<Self> {
        let values = xi.iter().map(|&x| f(x)).collect();
        Self::new(xi, values)
    }

    /// 401 points on [0.2, 4.2].
    pub fn standard_grid() -> Vec<f64> {
        (0..=400).map(|j| SIGNAL_LO + 0.01 * j as f64).collect()
    }

    /// ξ e^{-ξ} times the window.
    pub fn standard() -> Self {
        Self::from_fn(Self::standard_grid(), |x| Complex64::from(x * (-x).exp() * window(x))).expect("valid grid")
    }

    /// Windowed random trigonometric polynomial, reproducible from the seed.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<Complex64> =
            (0..6).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        Self::from_fn(Self::standard_grid(), |x| {
            let t = (x - SIGNAL_LO) / (SIGNAL_HI - SIGNAL_LO);
            let s: Complex64 = coeffs.iter().enumerate().map(|(j, c)| c * (PI * (j + 1) as f64 * t).sin()).sum();
            s * window(x)
        })
        .expect("valid grid")
    }

    pub fn inner(&self, other: &HalfLineSignal) -> Result<Complex64> {
        if self.xi != other.xi {
            return Err(Error::Dimension("signals live on different grids".into()));
        }
        Ok(self.values.iter().zip(&other.values).zip(&self.weights).map(|((a, b), w)| a * b.conj() * w).sum())
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(a, w)| a.norm_sqr() * w).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn minus(&self, other: &HalfLineSignal) -> HalfLineSignal {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        HalfLineSignal { xi: self.xi.clone(), values, weights: self.weights.clone() }
    }
}

/// Wavelet-side samples F(u, v), rows indexed by v and columns by u.
#[derive(Debug, Clone)]
pub struct WaveletSamples {
    pub re: Array2<f64>,
    pub im: Array2<f64>,
}

impl WaveletSamples {
    pub fn zeros(g: &Grid2D) -> Self {
        Self { re: Array2::zeros(g.shape()), im: Array2::zeros(g.shape()) }
    }

    fn check(&self, g: &Grid2D) -> Result<()> {
        if self.re.dim() != g.shape() || self.im.dim() != g.shape() {
            return Err(Error::Dimension(format!("samples have shape {:?}, grid {:?}", self.re.dim(), g.shape())));
        }
        Ok(())
    }

    /// ⟨F, G⟩ in L₂(v^{-2} du dv).
    pub fn inner(&self, other: &WaveletSamples, g: &Grid2D) -> Result<Complex64> {
        self.check(g)?;
        other.check(g)?;
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..g.v.len() {
            let (ar, ai) = (self.re.row(i), self.im.row(i));
            let (br, bi) = (other.re.row(i), other.im.row(i));
            let re = ar.dot(&br) + ai.dot(&bi);
            let im = ai.dot(&br) - ar.dot(&bi);
            total += Complex64::new(re, im) * g.row_weight(i);
        }
        Ok(total)
    }

    pub fn norm(&self, g: &Grid2D) -> Result<f64> {
        Ok(self.inner(self, g)?.re.sqrt())
    }

    pub fn add(&self, other: &WaveletSamples) -> WaveletSamples {
        WaveletSamples { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn sub(&self, other: &WaveletSamples) -> WaveletSamples {
        WaveletSamples { re: &self.re - &other.re, im: &self.im - &other.im }
    }

    /// Multiplies row i by c[i].
    fn scale_rows(&self, c: &[Complex64]) -> WaveletSamples {
        let mut out = self.clone();
        for (i, ci) in c.iter().enumerate() {
            let (r, m) = (self.re.row(i), self.im.row(i));
            out.re.row_mut(i).assign(&(&r * ci.re - &m * ci.im));
            out.im.row_mut(i).assign(&(&r * ci.im + &m * ci.re));
        }
        out
    }
}

/// cos and sin of 2π ξ_j u_l, shape (n_ξ, n_u).
fn fourier_tables(xi: &[f64], u: &[f64]) -> (Array2<f64>, Array2<f64>) {
    let mut c = Array2::zeros((xi.len(), u.len()));
    let mut s = Array2::zeros((xi.len(), u.len()));
    for (j, &x) in xi.iter().enumerate() {
        for (l, &t) in u.iter().enumerate() {
            let (sn, cs) = (2.0 * PI * x * t).sin_cos();
            c[[j, l]] = cs;
            s[[j, l]] = sn;
        }
    }
    (c, s)
}

/// F(u, v) = √2 v ∫ f(ξ) ℓ_k(2ξv) e^{2πiξu} √ξ dξ on every grid point.
pub fn r_star_apply(k: usize, f: &HalfLineSignal, g: &Grid2D) -> Result<WaveletSamples> {
    let (nv, nx) = (g.v.len(), f.xi.len());
    let mut a_re = Array2::zeros((nv, nx));
    let mut a_im = Array2::zeros((nv, nx));
    for (i, &v) in g.v.iter().enumerate() {
        for j in 0..nx {
            let x = f.xi[j];
            let base = SQRT_2 * v * ell(k, 2.0 * x * v) * x.sqrt() * f.weights[j];
            a_re[[i, j]] = base * f.values[j].re;
            a_im[[i, j]] = base * f.values[j].im;
        }
    }
    let (c, s) = fourier_tables(&f.xi, &g.u);
    Ok(WaveletSamples { re: a_re.dot(&c) - a_im.dot(&s), im: a_re.dot(&s) + a_im.dot(&c) })
}

/// (R_k F)(ξ) = √(2ξ) ∬ F(u,v) ℓ_k(2vξ) e^{-2πiξu} du dv / v at each ξ of `xi_out`.
pub fn r_apply(k: usize, samples: &WaveletSamples, g: &Grid2D, xi_out: &[f64]) -> Result<HalfLineSignal> {
    samples.check(g)?;
    if xi_out.iter().any(|&x| !(x > 0.0)) {
        return domain("output ξ must be positive");
    }
    let (c, s) = fourier_tables(xi_out, &g.u);
    // G[v, ξ] = Σ_u F(u, v) e^{-2πiξu} du
    let g_re = (samples.re.dot(&c.t()) + samples.im.dot(&s.t())) * g.du;
    let g_im = (samples.im.dot(&c.t()) - samples.re.dot(&s.t())) * g.du;
    let values = xi_out
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &v) in g.v.iter().enumerate() {
                acc += Complex64::new(g_re[[i, j]], g_im[[i, j]]) * ell(k, 2.0 * v * x);
            }
            acc * (2.0 * x).sqrt() * g.dlnv
        })
        .collect();
    HalfLineSignal::new(xi_out.to_vec(), values)
}

/// Average of the symbol over each v cell, so that fast oscillation near 0
/// enters through exact integrals rather than point samples.
fn cell_averages(s: &Symbol, g: &Grid2D) -> Result<Vec<Complex64>> {
    let tol = |v: f64| 1e-12 * v.max(1e-6);
    let means: Result<Vec<Complex64>> = g.v_edges.iter().map(|&e| iterated_mean(s, 1, e, tol(e))).collect();
    match means {
        Ok(c) => Ok(c.windows(2).zip(g.v_edges.windows(2)).map(|(m, e)| (m[1] - m[0]) / (e[1] - e[0])).collect()),
        // not integrable at 0: fall back to centre values
        Err(Error::Integrability(_)) => Ok(g.v.iter().map(|&v| s.value(v)).collect()),
        Err(e) => Err(e),
    }
}

/// R_k(a · R_k* f) on f's grid.
pub fn toeplitz_apply(s: &Symbol, k: usize, f: &HalfLineSignal, g: &Grid2D) -> Result<HalfLineSignal> {
    let lifted = r_star_apply(k, f, g)?;
    let a = cell_averages(s, g)?;
    r_apply(k, &lifted.scale_rows(&a), g, &f.xi)
}

/// Relative L₂ mass of f whose wavelet image falls outside the v range:
/// Σ |f(ξ)|² (1 - ∫_{2ξ v_min}^{2ξ v_max} ℓ_k²) / ‖f‖².
pub fn truncation_estimate(k: usize, f: &HalfLineSignal, g: &Grid2D) -> f64 {
    let gl = GaussLegendre::new(24);
    let (v_min, v_max) = (g.v_edges[0], g.v_edges[g.v_edges.len() - 1]);
    let norm2 = f.norm().powi(2);
    if norm2 == 0.0 {
        return 0.0;
    }
    let lost: f64 = f
        .xi
        .iter()
        .zip(&f.values)
        .zip(&f.weights)
        .map(|((&x, z), w)| {
            let (a, b) = (2.0 * x * v_min, 2.0 * x * v_max);
            let inside = gl.composite(|t| ell(k, t).powi(2), a, b, 64);
            z.norm_sqr() * w * (1.0 - inside).max(0.0)
        })
        .sum();
    lost / norm2
}

/// One measured quantity against its budget.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_other: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    pub value: f64,
    pub budget: f64,
    pub passed: bool,
    pub truncation_estimate: f64,
}

impl Check {
    fn new(name: &str, k: usize, value: f64, budget: f64, truncation_estimate: f64) -> Self {
        Self {
            name: name.to_string(),
            k,
            k_other: None,
            symbol: None,
            value,
            budget,
            passed: value <= budget,
            truncation_estimate,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridSummary {
    pub u_max: f64,
    pub du: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub v_points: usize,
    pub signal_points: usize,
    pub signal_support: (f64, f64),
}

impl GridSummary {
    pub fn new(g: &Grid2D, f: &HalfLineSignal) -> Self {
        Self {
            u_max: g.u[g.u.len() - 1],
            du: g.du,
            v_min: g.v_edges[0],
            v_max: g.v_edges[g.v_edges.len() - 1],
            v_points: g.v.len(),
            signal_points: f.xi.len(),
            signal_support: (f.xi[0], f.xi[f.xi.len() - 1]),
        }
    }
}

/// Machine-readable outcome of a verification run.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub grid: GridSummary,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay: Option<Vec<DecayReport>>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(grid: GridSummary, checks: Vec<Check>, decay: Option<Vec<DecayReport>>) -> Self {
        let passed = checks.iter().all(|c| c.passed) && decay.iter().flatten().all(|d| d.passed);
        Self { grid, checks, decay, passed }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} k={} value={:.3e} budget={:.1e}", c.name, c.k, c.value, c.budget))
            .collect();
        for d in self.decay.iter().flatten().filter(|d| !d.passed) {
            out.push(format!("decay k={} slope={:.3} required={:.3}", d.k, d.slope, d.required_slope));
        }
        out
    }
}

/// Isometry, identity, orthogonality, cross-annihilation and projection
/// checks for every k in `ks`.
///
/// `signals` must hold at least two signals; isometry is checked on all of
/// them, the other identities on the first (and second, for pairs).
pub fn isometry_suite(ks: &[usize], signals: &[HalfLineSignal], g: &Grid2D) -> Result<Vec<Check>> {
    if signals.len() < 2 {
        return domain("the isometry suite needs at least two signals");
    }
    let mut checks = Vec::new();
    let (f, h) = (&signals[0], &signals[1]);
    let mut images_f = Vec::new();
    let mut images_h = Vec::new();
    for &k in ks {
        let trunc = truncation_estimate(k, f, g);
        for (idx, sig) in signals.iter().enumerate() {
            let img = r_star_apply(k, sig, g)?;
            let rel = (img.norm(g)? - sig.norm()).abs() / sig.norm();
            checks.push(Check::new("isometry", k, rel, ISOMETRY_BUDGET, truncation_estimate(k, sig, g)));
            match idx {
                0 => images_f.push(img),
                1 => images_h.push(img),
                _ => {}
            }
        }
        let back = r_apply(k, images_f.last().expect("pushed"), g, &f.xi)?;
        checks.push(Check::new("identity", k, back.minus(f).norm() / f.norm(), IDENTITY_BUDGET, trunc));
    }
    for (a, &k) in ks.iter().enumerate() {
        for (b, &k2) in ks.iter().enumerate() {
            if k2 <= k {
                continue;
            }
            let ip = images_f[a].inner(&images_h[b], g)?.norm() / (f.norm() * h.norm());
            let mut c = Check::new("orthogonality", k, ip, ORTHOGONALITY_BUDGET, truncation_estimate(k, f, g));
            c.k_other = Some(k2);
            checks.push(c);
        }
    }
    for (a, &k) in ks.iter().enumerate() {
        let trunc = truncation_estimate(k, f, g);
        // R_k annihilates the image of the neighbouring level
        if a + 1 < ks.len() {
            let k2 = ks[a + 1];
            let cross = r_apply(k, &images_f[a + 1], g, &f.xi)?.norm() / f.norm();
            let mut c = Check::new("cross_annihilation", k, cross, IDENTITY_BUDGET, trunc);
            c.k_other = Some(k2);
            checks.push(c);
        }
        // P = R_k* R_k applied once and twice to a mixture of levels
        let other = if a + 1 < ks.len() { &images_h[a + 1] } else { &images_h[0] };
        let mixture = images_f[a].add(other);
        let once = r_star_apply(k, &r_apply(k, &mixture, g, &f.xi)?, g)?;
        let twice = r_star_apply(k, &r_apply(k, &once, g, &f.xi)?, g)?;
        let rel = twice.sub(&once).norm(g)? / once.norm(g)?;
        checks.push(Check::new("projection_idempotence", k, rel, PROJECTION_BUDGET, trunc));
    }
    Ok(checks)
}

/// Fraction of the grid excluded at each end when comparing with γ f.
const EDGE_FRACTION: f64 = 0.1;

/// Result of comparing T_a f with γ_{a,k} f.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub symbol: String,
    pub k: usize,
    pub max_deviation: f64,
    pub argmax_xi: f64,
    pub truncation_estimate: f64,
}

/// max over interior ξ of |T_a f - γ_{a,k} f| / (|f| + ε), ε = 1e-8 max|f|.
pub fn verify_multiplier_equivalence(s: &Symbol, k: usize, f: &HalfLineSignal, g: &Grid2D) -> Result<EquivalenceReport> {
    let out = toeplitz_apply(s, k, f, g)?;
    let n = f.xi.len();
    let skip = (EDGE_FRACTION * n as f64).ceil() as usize;
    let eps = 1e-8 * f.max_abs();
    let mut worst = (0.0, f.xi[skip.min(n - 1)]);
    for j in skip..n.saturating_sub(skip) {
        let x = f.xi[j];
        let gm = gamma(s, k, x, 1e-10)?;
        let dev = (out.values[j] - gm * f.values[j]).norm() / (f.values[j].norm() + eps);
        if dev > worst.0 {
            worst = (dev, x);
        }
    }
    Ok(EquivalenceReport {
        symbol: s.to_string(),
        k,
        max_deviation: worst.0,
        argmax_xi: worst.1,
        truncation_estimate: truncation_estimate(k, f, g),
    })
}

pub fn equivalence_check(s: &Symbol, k: usize, f: &HalfLineSignal, g: &Grid2D) -> Result<Check> {
    let r = verify_multiplier_equivalence(s, k, f, g)?;
    let mut c = Check::new("multiplier_equivalence", k, r.max_deviation, EQUIVALENCE_BUDGET, r.truncation_estimate);
    c.symbol = Some(r.symbol);
    Ok(c)
}

/// ϑ_n = (πn)^{-1/α}, the n-th zero of v^{-β} sin v^{-α} counted from ∞.
pub fn truncation_point(alpha: f64, n: u32) -> f64 {
    (PI * n as f64).powf(-1.0 / alpha)
}

fn check_decay_params(alpha: f64, beta: f64) -> Result<()> {
    Symbol::sininvpow(alpha, beta)?;
    if !(alpha > beta) {
        return domain(format!("the truncation approximation needs alpha > beta, got {alpha} <= {beta}"));
    }
    Ok(())
}

/// a_n: the sininvpow symbol set to zero on [0, ϑ_n).
pub fn truncation_sequence(alpha: f64, beta: f64, n: u32) -> Result<Symbol> {
    check_decay_params(alpha, beta)?;
    if n == 0 {
        return domain("n must be at least 1");
    }
    Symbol::truncate(truncation_point(alpha, n), Symbol::sininvpow(alpha, beta)?)
}

/// sup_ξ |γ_{(a - a_n),k}| for each n with a log-log fit against ϑ_n.
#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub alpha: f64,
    pub beta: f64,
    pub k: usize,
    pub n: Vec<u32>,
    pub theta: Vec<f64>,
    pub sup_norms: Vec<f64>,
    pub slope: f64,
    /// d_n ≤ q ϑ_n^{α-β} holds for every n with this q
    pub q: f64,
    pub monotone: bool,
    pub required_slope: f64,
    pub passed: bool,
}

pub fn approximation_decay(alpha: f64, beta: f64, k: usize, n_list: &[u32]) -> Result<DecayReport> {
    check_decay_params(alpha, beta)?;
    if n_list.len() < 2 || n_list.windows(2).any(|w| w[1] <= w[0]) || n_list[0] == 0 {
        return domain("n_list needs at least two ascending positive entries");
    }
    let full = Symbol::sininvpow(alpha, beta)?;
    let mut theta = Vec::new();
    let mut sup_norms = Vec::new();
    for &n in n_list {
        let t = truncation_point(alpha, n);
        // a - a_n lives on (0, ϑ_n)
        let diff = Symbol::head(t, full.clone())?;
        let p = gamma_profile(&diff, k, 1e-4, 1e4, 201, 1e-12)?;
        theta.push(t);
        sup_norms.push(p.sup_estimate);
    }
    let x: Vec<f64> = theta.iter().map(|t| t.ln()).collect();
    let y: Vec<f64> = sup_norms.iter().map(|d| d.ln()).collect();
    let (slope, _, _) = fit_line(&x, &y);
    let q = theta.iter().zip(&sup_norms).map(|(t, d)| d / t.powf(alpha - beta)).fold(0.0, f64::max);
    let monotone = sup_norms.windows(2).all(|w| w[1] < w[0]);
    let required_slope = (1.0 - DECAY_SLOPE_MARGIN) * (alpha - beta);
    Ok(DecayReport {
        alpha,
        beta,
        k,
        n: n_list.to_vec(),
        theta,
        sup_norms,
        slope,
        q,
        monotone,
        required_slope,
        passed: monotone && slope >= required_slope,
    })
}
