//! Sufficient conditions for k-contraction of Lurie and networked systems.
//!
//! A Lurie system `ẋ = Ax − BΦ(t, Cx)` is certified by a scaling `P = QQ`,
//! `Q ≻ 0`, and reals `η₁, η₂` such that
//!
//! ```text
//! M(η₁) := P⁽ᵏ⁾A⁽ᵏ⁾ + (A⁽ᵏ⁾)ᵀP⁽ᵏ⁾ + η₁P⁽ᵏ⁾
//!          + Q⁽ᵏ⁾[(QBBᵀQ)[k] + (Q⁻¹CᵀCQ⁻¹)[k]]Q⁽ᵏ⁾  ⪯ 0            (Riccati)
//! Σᵢ₌₁ᵏ λᵢ(Q⁻¹Cᵀ(J_ΦᵀJ_Φ − I)CQ⁻¹) ≤ −η₂   for all t, y        (gain)
//! ```
//!
//! (here `X⁽ᵏ⁾` is the multiplicative and `X[k]` the additive compound). Then
//! `μ_{2,Q⁽ᵏ⁾}(J[k]) ≤ −(η₁+η₂)/2` everywhere, and the system is k-contractive
//! when `η₁ + η₂ > 0`.
//!
//! The gain condition quantifies over all of `R^q`. It is only discharged
//! through certified bounds: exact evaluation for linear feedback, vertex
//! enumeration for diagonal (`tanh`-type) Jacobians, and the norm / top-k
//! bounds of [`crate::systems::jacobian_gain_bounds`]. Sampling is available
//! as an explicitly non-rigorous fallback.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compound::{additive_compound, multiplicative_compound};
use crate::error::{Error, Result};
use crate::linalg::{inverse, singular_values, spectral_norm};
use crate::matrix::Matrix;
use crate::measures::{
    lambda_max_sym, lambda_min_sym, mu2_similar, symmetric_sqrt, top_k_eig_sum, top_k_singular_sq_sum, ScalingQ,
};
use crate::scalar::Real;
use crate::systems::{jacobian_gain_bounds, network_to_lurie, Dynamics, Family, LurieSystem, NetworkSystem};

/// Numerical tolerances used by the checks; echoed into every certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// `λ_max(M) <= psd_rel * (1 + ||M||_2)` accepts a non-strict `M ⪯ 0`.
    pub psd_rel: f64,
    /// `λ_max(R) <= -strict_rel * (1 + ||R||_2)` is required for a strict `R ≺ 0`.
    pub strict_rel: f64,
    /// Relative slack when comparing the gain bound with `−η₂`.
    pub gain_rel: f64,
    /// Largest input dimension for which diagonal Jacobian boxes are enumerated.
    pub max_vertex_dim: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { psd_rel: 1e-9, strict_rel: 1e-9, gain_rel: 1e-9, max_vertex_dim: 16 }
    }
}

/// How the gain condition's supremum over `(t, y)` is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GainMode {
    /// Certified bounds only; families without one are an error.
    Certified,
    /// Certified bounds where available, otherwise the maximum over random
    /// `y` in `[-radius, radius]^q`. Such certificates are marked non-rigorous.
    Sampled { samples: usize, radius: f64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub tolerances: Tolerances,
    pub gain_mode: GainMode,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { tolerances: Tolerances::default(), gain_mode: GainMode::Certified }
    }
}

/// Outcome of a sufficient-condition check.
///
/// `margins` hold tolerance-inclusive slacks: each is `>= 0` exactly when the
/// corresponding inequality was accepted. `passed` implies all margins are
/// nonnegative and `eta1 + eta2 > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate<T: Real> {
    pub passed: bool,
    pub k: usize,
    pub eta1: T,
    pub eta2: T,
    pub rate_bound: T,
    pub scaling: ScalingQ<T>,
    pub margins: BTreeMap<String, T>,
    pub assumptions: Vec<String>,
    pub tolerances: Tolerances,
}

impl<T: Real> Certificate<T> {
    pub fn margin(&self, name: &str) -> Option<T> {
        self.margins.get(name).copied()
    }
}

/// Result of the scalar `(γ, p)` construction for a networked system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarSearchResult<T: Real> {
    pub gamma: T,
    pub p: T,
    pub eta1: T,
    pub eta2: T,
    pub feasible: bool,
}

fn check_order(k: usize, n: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::InvalidDimension { k, n });
    }
    Ok(())
}

fn scaling_for<T: Real>(p: &Matrix<T>, n: usize) -> Result<ScalingQ<T>> {
    if p.shape() != (n, n) {
        return Err(Error::Shape(format!("P is {}x{}, system dimension is {n}", p.rows(), p.cols())));
    }
    symmetric_sqrt(p)
}

/// Part of the Riccati matrix that does not depend on `η₁`, plus `P⁽ᵏ⁾`.
fn riccati_parts<T: Real>(sys: &LurieSystem<T>, k: usize, scaling: &ScalingQ<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let q = scaling.q();
    let q_inv = scaling.q_inverse()?;
    let a_k = additive_compound(sys.a(), k)?.into_body();
    let p_k = multiplicative_compound(scaling.p(), k)?.into_body();
    let q_k = multiplicative_compound(q, k)?.into_body();
    let qb = q.matmul(sys.b())?;
    let cq = sys.c().matmul(&q_inv)?;
    let inner = additive_compound(&qb.matmul(&qb.transpose())?, k)?
        .into_body()
        .try_add(&additive_compound(&cq.transpose().matmul(&cq)?, k)?.into_body())?;
    let m0 = p_k.matmul(&a_k)?.try_add(&a_k.transpose().matmul(&p_k)?)?.try_add(&q_k.matmul(&inner)?.matmul(&q_k)?)?;
    Ok((m0, p_k))
}

/// The Riccati-type matrix `M(η₁)`, evaluated directly from its definition.
pub fn riccati_matrix<T: Real>(sys: &LurieSystem<T>, k: usize, p: &Matrix<T>, eta1: T) -> Result<Matrix<T>> {
    check_order(k, sys.dim())?;
    let scaling = scaling_for(p, sys.dim())?;
    let (m0, p_k) = riccati_parts(sys, k, &scaling)?;
    m0.try_add(&p_k.scale(eta1))
}

/// Largest `η₁` for which the Riccati condition holds with this `P`:
/// `−λ_max((Q⁽ᵏ⁾)⁻¹ M(0) (Q⁽ᵏ⁾)⁻¹)`.
pub fn max_eta1<T: Real>(sys: &LurieSystem<T>, k: usize, p: &Matrix<T>) -> Result<T> {
    check_order(k, sys.dim())?;
    let scaling = scaling_for(p, sys.dim())?;
    max_eta1_scaled(sys, k, &scaling)
}

fn max_eta1_scaled<T: Real>(sys: &LurieSystem<T>, k: usize, scaling: &ScalingQ<T>) -> Result<T> {
    let (m0, _) = riccati_parts(sys, k, scaling)?;
    let qk_inv = multiplicative_compound(&scaling.q_inverse()?, k)?.into_body();
    Ok(-lambda_max_sym(&qk_inv.matmul(&m0)?.matmul(&qk_inv)?)?)
}

/// Upper bound on the gain condition's left-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct GainConditionBound<T> {
    /// Bound on `sup_{t,y} Σᵢ₌₁ᵏ λᵢ(Q⁻¹Cᵀ(J_ΦᵀJ_Φ − I)CQ⁻¹)`.
    pub value: T,
    pub method: String,
    pub assumptions: Vec<String>,
    pub rigorous: bool,
}

fn gain_lhs<T: Real>(j: &Matrix<T>, g: &Matrix<T>, gtg: &Matrix<T>, k: usize) -> Result<T> {
    let x = j.matmul(g)?;
    top_k_eig_sum(&x.transpose().matmul(&x)?.try_sub(gtg)?, k)
}

/// Bounds `sup_{t,y} Σᵢ₌₁ᵏ λᵢ(Gᵀ(J_ΦᵀJ_Φ − I)G)` with `G = CQ⁻¹`, taking the
/// smallest of the available certified bounds.
pub fn gain_condition_bound<T: Real>(
    sys: &LurieSystem<T>,
    k: usize,
    scaling: &ScalingQ<T>,
    opts: &CertifyOptions,
) -> Result<GainConditionBound<T>> {
    check_order(k, sys.dim())?;
    let phi = sys.phi();
    let g = sys.c().matmul(&scaling.q_inverse()?)?;
    let gtg = g.transpose().matmul(&g)?;
    let mut best: Option<GainConditionBound<T>> = None;
    let mut offer = |cand: GainConditionBound<T>| {
        if best.as_ref().is_none_or(|b| cand.value < b.value) {
            best = Some(cand);
        }
    };

    match phi.family() {
        Family::Linear { gain_matrix } => offer(GainConditionBound {
            value: gain_lhs(gain_matrix, &g, &gtg, k)?,
            method: "exact (constant Jacobian)".into(),
            assumptions: vec![],
            rigorous: true,
        }),
        Family::Composed { weights, inner } if matches!(inner.family(), Family::Linear { .. }) => {
            if let Family::Linear { gain_matrix } = inner.family() {
                offer(GainConditionBound {
                    value: gain_lhs(&weights.matmul(gain_matrix)?, &g, &gtg, k)?,
                    method: "exact (constant Jacobian)".into(),
                    assumptions: vec![],
                    rigorous: true,
                });
            }
        }
        _ => {}
    }

    // J = W diag(s), s in [0, gain]^q: the left-hand side is convex in s, so
    // its supremum over the box is attained at a vertex.
    if let Some((weights, gain)) = phi.diagonal_box() {
        let q = phi.input_dim();
        if q <= opts.tolerances.max_vertex_dim {
            let mut worst = T::neg_infinity();
            for mask in 0u64..(1u64 << q) {
                let d: Vec<T> = (0..q).map(|i| if mask >> i & 1 == 1 { gain } else { T::zero() }).collect();
                let dm = Matrix::diag(&d);
                let j = match weights {
                    Some(w) => w.matmul(&dm)?,
                    None => dm,
                };
                worst = worst.max(gain_lhs(&j, &g, &gtg, k)?);
            }
            offer(GainConditionBound {
                value: worst,
                method: format!("vertex enumeration over {} diagonal Jacobians", 1u64 << q),
                assumptions: vec![],
                rigorous: true,
            });
        }
    }

    let declared_note = |what: &str, v: T| format!("declared {what} = {v} on the feedback Jacobian (trusted, not verified)");

    if let Some(b) = phi.norm_bound()? {
        let l2m1 = b.value * b.value - T::one();
        offer(GainConditionBound {
            value: top_k_eig_sum(&gtg.scale(l2m1), k)?,
            method: format!("norm bound ||J_Φ||_2 <= {}", b.value),
            assumptions: if b.declared { vec![declared_note("||J_Φ||_2 bound", b.value)] } else { vec![] },
            rigorous: true,
        });
    }

    match jacobian_gain_bounds(phi, k) {
        Ok(b) => {
            let s1 = singular_values(&g)?.first().copied().unwrap_or_else(T::zero);
            let value = s1 * s1 * b.value + top_k_eig_sum(&gtg.scale(-T::one()), k)?;
            offer(GainConditionBound {
                value,
                method: format!("top-{k} singular-value bound {}", b.value),
                assumptions: if b.declared {
                    vec![declared_note(&format!("top-{k} squared singular value bound"), b.value)]
                } else {
                    vec![]
                },
                rigorous: true,
            });
        }
        Err(Error::UnboundedNonlinearity(_)) => {}
        Err(e) => return Err(e),
    }

    if let Some(b) = best {
        return Ok(b);
    }
    match opts.gain_mode {
        GainMode::Certified => Err(Error::UnboundedNonlinearity(format!(
            "no certified bound on the feedback Jacobian; declare jac_norm_bound or jac_topk_sq_bound[{k}]"
        ))),
        GainMode::Sampled { samples, radius, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = T::lit(radius);
            let mut worst = T::neg_infinity();
            for _ in 0..samples.max(1) {
                let y: Vec<T> = (0..phi.input_dim()).map(|_| T::lit(rng.gen_range(-1.0..=1.0)) * r).collect();
                worst = worst.max(gain_lhs(&phi.jacobian(T::zero(), &y)?, &g, &gtg, k)?);
            }
            Ok(GainConditionBound {
                value: worst,
                method: format!("sampling ({samples} points, radius {radius}, seed {seed})"),
                assumptions: vec![format!(
                    "non-rigorous: gain condition bounded by sampling {samples} points in [-{radius}, {radius}]^q"
                )],
                rigorous: false,
            })
        }
    }
}

/// Largest `η₂` admitted by the certified gain bound.
pub fn max_eta2<T: Real>(sys: &LurieSystem<T>, k: usize, p: &Matrix<T>, opts: &CertifyOptions) -> Result<T> {
    let scaling = scaling_for(p, sys.dim())?;
    Ok(-gain_condition_bound(sys, k, &scaling, opts)?.value)
}

/// Checks both conditions for given `(k, P, η₁, η₂)`.
pub fn check_theorem1<T: Real>(sys: &LurieSystem<T>, k: usize, p: &Matrix<T>, eta1: T, eta2: T) -> Result<Certificate<T>> {
    check_theorem1_with(sys, k, p, eta1, eta2, &CertifyOptions::default())
}

pub fn check_theorem1_with<T: Real>(
    sys: &LurieSystem<T>,
    k: usize,
    p: &Matrix<T>,
    eta1: T,
    eta2: T,
    opts: &CertifyOptions,
) -> Result<Certificate<T>> {
    check_order(k, sys.dim())?;
    let scaling = scaling_for(p, sys.dim())?;
    let tol = &opts.tolerances;

    let (m0, p_k) = riccati_parts(sys, k, &scaling)?;
    let m = m0.try_add(&p_k.scale(eta1))?.symmetric_part();
    let lam = lambda_max_sym(&m)?;
    let tol12 = T::lit(tol.psd_rel) * (T::one() + spectral_norm(&m)?);
    let riccati_ok = lam <= tol12;

    let gain = gain_condition_bound(sys, k, &scaling, opts)?;
    let tol13 = T::lit(tol.gain_rel) * (T::one() + eta2.abs() + gain.value.abs());
    let gain_ok = gain.value <= -eta2 + tol13;

    let mut margins = BTreeMap::new();
    margins.insert("riccati_slack".to_string(), tol12 - lam);
    margins.insert("gain_gap".to_string(), -eta2 - gain.value + tol13);

    let mut assumptions = gain.assumptions;
    assumptions.push(format!("gain condition bounded by {}", gain.method));

    Ok(Certificate {
        passed: riccati_ok && gain_ok && eta1 + eta2 > T::zero(),
        k,
        eta1,
        eta2,
        rate_bound: (eta1 + eta2) / T::lit(2.0),
        scaling,
        margins,
        assumptions,
        tolerances: *tol,
    })
}

/// Certifies with the largest `η₁` and `η₂` admitted by `P`.
pub fn certify_lurie<T: Real>(sys: &LurieSystem<T>, k: usize, p: &Matrix<T>, opts: &CertifyOptions) -> Result<Certificate<T>> {
    check_order(k, sys.dim())?;
    let scaling = scaling_for(p, sys.dim())?;
    let eta1 = max_eta1_scaled(sys, k, &scaling)?;
    let eta2 = -gain_condition_bound(sys, k, &scaling, opts)?.value;
    check_theorem1_with(sys, k, p, eta1, eta2, opts)
}

/// Searches `P = pI` maximizing `η₁(p) + η₂(p)`: a log-spaced scan of
/// `p in [1e-6, 1e6]` followed by golden-section refinement.
pub fn scalar_search_lurie<T: Real>(sys: &LurieSystem<T>, k: usize, opts: &CertifyOptions) -> Result<(T, Certificate<T>)> {
    check_order(k, sys.dim())?;
    let n = sys.dim();
    let objective = |log_p: f64| -> Result<f64> {
        let scaling = ScalingQ::scalar(n, T::lit(10f64.powf(log_p)))?;
        let e1 = max_eta1_scaled(sys, k, &scaling)?;
        let e2 = -gain_condition_bound(sys, k, &scaling, opts)?.value;
        Ok((e1 + e2).as_f64())
    };
    let grid: Vec<f64> = (0..=120).map(|i| -6.0 + 0.1 * i as f64).collect();
    let mut best = (grid[0], f64::NEG_INFINITY);
    for &x in &grid {
        let v = objective(x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    let (mut lo, mut hi) = (best.0 - 0.1, best.0 + 0.1);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let x1 = hi - ratio * (hi - lo);
        let x2 = lo + ratio * (hi - lo);
        if objective(x1)? >= objective(x2)? {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let mid = 0.5 * (lo + hi);
    let log_p = if objective(mid)? >= best.1 { mid } else { best.0 };
    let p = T::lit(10f64.powf(log_p));
    let cert = certify_lurie(sys, k, &Matrix::scalar(n, p), opts)?;
    Ok((p, cert))
}

/// Strict algebraic Riccati inequality `PA + AᵀP + PBBᵀP + CᵀC ≺ 0`.
///
/// Returns whether it holds and the margin `−λ_max` of the left-hand side.
pub fn check_ari_k1<T: Real>(sys: &LurieSystem<T>, p: &Matrix<T>) -> Result<(bool, T)> {
    check_ari_k1_with(sys, p, &Tolerances::default())
}

pub fn check_ari_k1_with<T: Real>(sys: &LurieSystem<T>, p: &Matrix<T>, tol: &Tolerances) -> Result<(bool, T)> {
    let scaling = scaling_for(p, sys.dim())?;
    let p = scaling.p();
    let pb = p.matmul(sys.b())?;
    let r = p
        .matmul(sys.a())?
        .try_add(&sys.a().transpose().matmul(p)?)?
        .try_add(&pb.matmul(&pb.transpose())?)?
        .try_add(&sys.c().transpose().matmul(sys.c())?)?
        .symmetric_part();
    let lam = lambda_max_sym(&r)?;
    let strict = lam <= -T::lit(tol.strict_rel) * (T::one() + spectral_norm(&r)?);
    Ok((strict, -lam))
}

/// Scalar-scaling test for `C = I`, `P = pI`:
/// `sup Σᵢ₌₁ᵏ σᵢ²(J_Φ) < k + η₁p`, with `η₁` validated against the Riccati
/// condition. The implied `η₂` is `(k − bound)/p`.
pub fn check_scalar_remark<T: Real>(sys: &LurieSystem<T>, k: usize, p: T, eta1: T) -> Result<Certificate<T>> {
    check_scalar_remark_with(sys, k, p, eta1, &CertifyOptions::default())
}

pub fn check_scalar_remark_with<T: Real>(
    sys: &LurieSystem<T>,
    k: usize,
    p: T,
    eta1: T,
    opts: &CertifyOptions,
) -> Result<Certificate<T>> {
    let n = sys.dim();
    check_order(k, n)?;
    if sys.c() != &Matrix::identity(n) {
        return Err(Error::WrongStructure("the scalar-scaling test requires C = I".into()));
    }
    let scaling = ScalingQ::scalar(n, p)?;
    let tol = &opts.tolerances;

    let (m0, p_k) = riccati_parts(sys, k, &scaling)?;
    let m = m0.try_add(&p_k.scale(eta1))?.symmetric_part();
    let lam = lambda_max_sym(&m)?;
    let tol12 = T::lit(tol.psd_rel) * (T::one() + spectral_norm(&m)?);

    let bound = jacobian_gain_bounds(sys.phi(), k)?;
    let kt = T::from_count(k);
    let gap = kt + eta1 * p - bound.value;
    let eta2 = (kt - bound.value) / p;

    let mut margins = BTreeMap::new();
    margins.insert("riccati_slack".to_string(), tol12 - lam);
    margins.insert("scalar_gain_gap".to_string(), gap);
    let mut assumptions = vec![format!("sup sum of top-{k} squared singular values of J_Φ <= {}", bound.value)];
    if bound.declared {
        assumptions.push("bound rests on declared nonlinearity bounds (trusted, not verified)".into());
    }
    Ok(Certificate {
        passed: lam <= tol12 && gap > T::zero(),
        k,
        eta1,
        eta2,
        rate_bound: (eta1 + eta2) / T::lit(2.0),
        scaling,
        margins,
        assumptions,
        tolerances: *tol,
    })
}

/// The two sides of the network condition `L² Σᵢ₌₁ᵏ σᵢ²(W) < α²k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkCondition<T: Real> {
    /// `L`, a bound on `||J_f||_2`.
    pub norm_bound: T,
    pub declared_bound: bool,
    /// `Σᵢ₌₁ᵏ σᵢ²(W)`.
    pub sigma_sq_sum: T,
    /// `L² Σᵢ₌₁ᵏ σᵢ²(W)`.
    pub value: T,
    /// `α² k`.
    pub threshold: T,
}

impl<T: Real> NetworkCondition<T> {
    pub fn holds(&self) -> bool {
        self.value < self.threshold
    }
}

pub fn network_condition<T: Real>(net: &NetworkSystem<T>, k: usize) -> Result<NetworkCondition<T>> {
    check_order(k, net.dim())?;
    let b = net.f().norm_bound()?.ok_or_else(|| {
        Error::UnboundedNonlinearity("the activation needs a Jacobian norm bound; declare jac_norm_bound".into())
    })?;
    let sigma_sq_sum = top_k_singular_sq_sum(net.w(), k)?;
    Ok(NetworkCondition {
        norm_bound: b.value,
        declared_bound: b.declared,
        sigma_sq_sum,
        value: b.value * b.value * sigma_sq_sum,
        threshold: net.alpha() * net.alpha() * T::from_count(k),
    })
}

/// Explicit `(γ, p, η₁, η₂)` realizing the Lurie certificate for a network.
///
/// `γ` is the midpoint of `(sqrt(L²Σσᵢ²(W)/k), α)` and `p = 1/γ`, which
/// maximizes `η₁(p) = k(2α − γ²p − 1/p)`; then `η₁ = 2k(α − γ)` and
/// `η₂ = γ(k − L²Σσᵢ²(W)/γ²)`. Both are re-validated on the matrices.
pub fn find_scalar_gamma_p<T: Real>(net: &NetworkSystem<T>, k: usize) -> Result<ScalarSearchResult<T>> {
    find_scalar_gamma_p_with(net, k, &CertifyOptions::default())
}

pub fn find_scalar_gamma_p_with<T: Real>(
    net: &NetworkSystem<T>,
    k: usize,
    opts: &CertifyOptions,
) -> Result<ScalarSearchResult<T>> {
    let cond = network_condition(net, k)?;
    if !cond.holds() {
        return Err(Error::NoFeasibleGamma(format!(
            "{} is not below {}: the interval for gamma is empty",
            cond.value, cond.threshold
        )));
    }
    let kt = T::from_count(k);
    let two = T::lit(2.0);
    let alpha = net.alpha();
    let lower = (cond.value / kt).sqrt();
    let gamma = (lower + alpha) / two;
    let p = T::one() / gamma;
    let eta1 = two * kt * (alpha - gamma);
    let eta2 = gamma * (kt - cond.value / (gamma * gamma));

    let lurie = network_to_lurie(net, gamma)?;
    let cert = check_theorem1_with(&lurie, k, &Matrix::scalar(net.dim(), p), eta1, eta2, opts)?;
    let feasible = cert.passed && eta1 > T::zero() && eta2 > T::zero() && gamma < alpha;
    Ok(ScalarSearchResult { gamma, p, eta1, eta2, feasible })
}

/// Network condition plus the explicit Lurie certificate behind it.
pub fn check_network_k_contraction<T: Real>(net: &NetworkSystem<T>, k: usize) -> Result<Certificate<T>> {
    check_network_k_contraction_with(net, k, &CertifyOptions::default())
}

pub fn check_network_k_contraction_with<T: Real>(
    net: &NetworkSystem<T>,
    k: usize,
    opts: &CertifyOptions,
) -> Result<Certificate<T>> {
    let cond = network_condition(net, k)?;
    let n = net.dim();
    let mut assumptions = vec![format!(
        "||J_f||_2 <= {} ({}); sum of top-{k} squared singular values of W = {}",
        cond.norm_bound,
        if cond.declared_bound { "declared, trusted" } else { "analytic" },
        cond.sigma_sq_sum
    )];
    let gap = cond.threshold - cond.value;

    if !cond.holds() {
        let mut margins = BTreeMap::new();
        margins.insert("network_gap".to_string(), gap);
        return Ok(Certificate {
            passed: false,
            k,
            eta1: T::zero(),
            eta2: T::zero(),
            rate_bound: T::zero(),
            scaling: ScalingQ::identity(n),
            margins,
            assumptions,
            tolerances: opts.tolerances,
        });
    }

    let search = find_scalar_gamma_p_with(net, k, opts)?;
    let lurie = network_to_lurie(net, search.gamma)?;
    let mut cert = check_theorem1_with(&lurie, k, &Matrix::scalar(n, search.p), search.eta1, search.eta2, opts)?;
    cert.margins.insert("network_gap".to_string(), gap);
    assumptions.push(format!(
        "Lurie form with gamma = {}, P = {} I (A = -alpha I, B = gamma I, C = I, Φ = -W f / gamma)",
        search.gamma, search.p
    ));
    assumptions.append(&mut cert.assumptions);
    cert.assumptions = assumptions;
    cert.passed = cert.passed && search.feasible;
    Ok(cert)
}

/// `λ_min((MMᵀ)[k] − (−MN − NᵀMᵀ − NᵀN)[k])`, which is nonnegative for all
/// conformable `M` (`n x m`), `N` (`m x n`) and `k in [1, n]`.
pub fn lemma1_gap<T: Real>(m: &Matrix<T>, n: &Matrix<T>, k: usize) -> Result<T> {
    if n.rows() != m.cols() || n.cols() != m.rows() {
        return Err(Error::Shape(format!(
            "M is {}x{} and N is {}x{}; need n x m and m x n",
            m.rows(),
            m.cols(),
            n.rows(),
            n.cols()
        )));
    }
    check_order(k, m.rows())?;
    let mn = m.matmul(n)?;
    let rhs = mn.try_add(&mn.transpose())?.try_add(&n.transpose().matmul(n)?)?.scale(-T::one());
    let lhs = m.matmul(&m.transpose())?;
    let diff = additive_compound(&lhs, k)?.into_body().try_sub(&additive_compound(&rhs, k)?.into_body())?;
    lambda_min_sym(&diff)
}

/// Largest `μ_{2,Q⁽ᵏ⁾}(J[k](t, x))` over the given samples.
pub fn sampled_mu_bound<T: Real, D: Dynamics<T> + ?Sized>(
    sys: &D,
    k: usize,
    scaling: &ScalingQ<T>,
    samples: &[(T, Vec<T>)],
) -> Result<T> {
    let n = sys.dim();
    check_order(k, n)?;
    if scaling.dim() != n {
        return Err(Error::Shape(format!("scaling has dimension {}, system has {n}", scaling.dim())));
    }
    if samples.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let q_k = multiplicative_compound(scaling.q(), k)?.into_body();
    let q_k_inv = inverse(&q_k)?;
    let mut worst = T::neg_infinity();
    for (t, x) in samples {
        if x.len() != n {
            return Err(Error::Shape(format!("sample state has length {}, system dimension is {n}", x.len())));
        }
        let j_k = additive_compound(&sys.jacobian_at(*t, x), k)?.into_body();
        worst = worst.max(mu2_similar(&j_k, &q_k, &q_k_inv)?);
    }
    Ok(worst)
}

/// Seeded random `(t, x)` samples with `t in [0, t_max]` and `x in [-radius, radius]^n`.
pub fn random_samples<T: Real>(n: usize, count: usize, radius: f64, t_max: f64, seed: u64) -> Vec<(T, Vec<T>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let t = T::lit(rng.gen_range(0.0..=t_max.max(0.0)));
            let x = (0..n).map(|_| T::lit(rng.gen_range(-radius..=radius))).collect();
            (t, x)
        })
        .collect()
}
