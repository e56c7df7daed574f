//! Lurie systems `ẋ = Ax − BΦ(t, Cx)`, networked systems `ẋ = −αx + W f(x)`,
//! and the feedback nonlinearities they are built from.
//!
//! Built-in nonlinearities are time-invariant; `t` is carried through every
//! evaluation so time-varying families can be added without changing callers.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::matrix::Matrix;
use crate::measures::top_k_singular_sq_sum;
use crate::scalar::Real;

/// Functional form of a feedback nonlinearity.
#[derive(Debug, Clone, PartialEq)]
pub enum Family<T: Real> {
    /// Componentwise `y_i -> gain * tanh(y_i)`.
    ScaledTanh { gain: T },
    /// `y -> K y`.
    Linear { gain_matrix: Matrix<T> },
    /// Componentwise piecewise-linear interpolation through `(knots[i], values[i])`,
    /// held constant outside the knot range. Simulation only: it has no analytic
    /// Jacobian bound, so certification needs declared bounds.
    PiecewiseTable { knots: Vec<T>, values: Vec<T> },
    /// `y -> weights * inner(y)`.
    Composed { weights: Matrix<T>, inner: Box<Nonlinearity<T>> },
}

/// A nonlinearity `Φ: R^q -> R^m` with optional user-declared Jacobian bounds.
///
/// Declared bounds are trusted as facts about `sup_{t,y}` and are reported as
/// assumptions wherever a certificate relies on them.
#[derive(Debug, Clone, PartialEq)]
pub struct Nonlinearity<T: Real> {
    family: Family<T>,
    input_dim: usize,
    output_dim: usize,
    jac_norm_bound: Option<T>,
    jac_topk_sq_bound: BTreeMap<usize, T>,
}

/// An upper bound together with whether it rests on a declared assumption.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound<T> {
    pub value: T,
    pub declared: bool,
}

fn min_bound<T: Real>(a: Option<Bound<T>>, b: Option<Bound<T>>) -> Option<Bound<T>> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.value < x.value { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<T: Real> Nonlinearity<T> {
    fn from_family(family: Family<T>, input_dim: usize, output_dim: usize) -> Self {
        Self { family, input_dim, output_dim, jac_norm_bound: None, jac_topk_sq_bound: BTreeMap::new() }
    }

    pub fn scaled_tanh(dim: usize, gain: T) -> Result<Self> {
        if !gain.is_finite() {
            return Err(Error::InvalidParameter("tanh gain must be finite".into()));
        }
        Ok(Self::from_family(Family::ScaledTanh { gain }, dim, dim))
    }

    /// `Φ(y) = K y` with `K` of shape `m x q`.
    pub fn linear(gain_matrix: Matrix<T>) -> Self {
        let (m, q) = gain_matrix.shape();
        Self::from_family(Family::Linear { gain_matrix }, q, m)
    }

    pub fn zero(input_dim: usize, output_dim: usize) -> Self {
        Self::linear(Matrix::zeros(output_dim, input_dim))
    }

    pub fn piecewise_table(dim: usize, knots: Vec<T>, values: Vec<T>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "piecewise table needs >= 2 knots with matching values, got {} knots and {} values",
                knots.len(),
                values.len()
            )));
        }
        if knots.windows(2).any(|w| !(w[0] < w[1])) || knots.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("piecewise table knots must be finite and strictly increasing".into()));
        }
        Ok(Self::from_family(Family::PiecewiseTable { knots, values }, dim, dim))
    }

    /// `Φ(y) = weights * inner(y)`.
    pub fn composed(weights: Matrix<T>, inner: Nonlinearity<T>) -> Result<Self> {
        if weights.cols() != inner.output_dim {
            return Err(Error::Shape(format!(
                "weights are {}x{} but inner nonlinearity has output dimension {}",
                weights.rows(),
                weights.cols(),
                inner.output_dim
            )));
        }
        let (q, m) = (inner.input_dim, weights.rows());
        Ok(Self::from_family(Family::Composed { weights, inner: Box::new(inner) }, q, m))
    }

    /// Declares `||J_Φ(t, y)||_2 <= bound` for all `t, y`.
    pub fn with_norm_bound(mut self, bound: T) -> Result<Self> {
        if !(bound >= T::zero()) || !bound.is_finite() {
            return Err(Error::InvalidParameter(format!("declared norm bound must be finite and >= 0, got {bound}")));
        }
        self.jac_norm_bound = Some(bound);
        Ok(self)
    }

    /// Declares `sum_{i<=k} sigma_i^2(J_Φ(t, y)) <= bound` for all `t, y`.
    pub fn with_topk_sq_bound(mut self, k: usize, bound: T) -> Result<Self> {
        if k < 1 || !(bound >= T::zero()) || !bound.is_finite() {
            return Err(Error::InvalidParameter(format!("declared top-{k} bound must be finite and >= 0, got {bound}")));
        }
        self.jac_topk_sq_bound.insert(k, bound);
        Ok(self)
    }

    pub fn family(&self) -> &Family<T> {
        &self.family
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn declared_norm_bound(&self) -> Option<T> {
        self.jac_norm_bound
    }

    pub fn declared_topk_sq_bounds(&self) -> &BTreeMap<usize, T> {
        &self.jac_topk_sq_bound
    }

    /// `Φ(t, y)`; `y` must have length `input_dim`.
    pub fn eval(&self, t: T, y: &[T]) -> Result<Vec<T>> {
        if y.len() != self.input_dim {
            return Err(Error::Shape(format!("nonlinearity expects {} inputs, got {}", self.input_dim, y.len())));
        }
        let mut out = vec![T::zero(); self.output_dim];
        self.eval_into(t, y, &mut out);
        Ok(out)
    }

    // No current family depends on time; the argument is threaded through for ones that do.
    #[allow(clippy::only_used_in_recursion)]
    pub(crate) fn eval_into(&self, t: T, y: &[T], out: &mut [T]) {
        match &self.family {
            Family::ScaledTanh { gain } => {
                for (o, &v) in out.iter_mut().zip(y) {
                    *o = *gain * v.tanh();
                }
            }
            Family::Linear { gain_matrix } => gain_matrix.mul_vec_into(y, out),
            Family::PiecewiseTable { knots, values } => {
                for (o, &v) in out.iter_mut().zip(y) {
                    *o = table_value(knots, values, v);
                }
            }
            Family::Composed { weights, inner } => {
                let mut mid = vec![T::zero(); inner.output_dim];
                inner.eval_into(t, y, &mut mid);
                weights.mul_vec_into(&mid, out);
            }
        }
    }

    /// `J_Φ(t, y) = ∂Φ/∂y`, an `output_dim x input_dim` matrix.
    pub fn jacobian(&self, t: T, y: &[T]) -> Result<Matrix<T>> {
        if y.len() != self.input_dim {
            return Err(Error::Shape(format!("nonlinearity expects {} inputs, got {}", self.input_dim, y.len())));
        }
        Ok(self.jacobian_unchecked(t, y))
    }

    // No current family depends on time; the argument is threaded through for ones that do.
    #[allow(clippy::only_used_in_recursion)]
    pub(crate) fn jacobian_unchecked(&self, t: T, y: &[T]) -> Matrix<T> {
        match &self.family {
            Family::ScaledTanh { gain } => {
                let d: Vec<T> = y.iter().map(|&v| *gain * sech2(v)).collect();
                Matrix::diag(&d)
            }
            Family::Linear { gain_matrix } => gain_matrix.clone(),
            Family::PiecewiseTable { knots, values } => {
                let d: Vec<T> = y.iter().map(|&v| table_slope(knots, values, v)).collect();
                Matrix::diag(&d)
            }
            Family::Composed { weights, inner } => weights * &inner.jacobian_unchecked(t, y),
        }
    }

    /// Writes the diagonal of `J_Φ` for component-wise families; `false` otherwise.
    pub(crate) fn diagonal_slopes_into(&self, y: &[T], out: &mut [T]) -> bool {
        match &self.family {
            Family::ScaledTanh { gain } => {
                for (o, &v) in out.iter_mut().zip(y) {
                    *o = *gain * sech2(v);
                }
                true
            }
            Family::PiecewiseTable { knots, values } => {
                for (o, &v) in out.iter_mut().zip(y) {
                    *o = table_slope(knots, values, v);
                }
                true
            }
            _ => false,
        }
    }

    /// Best available bound on `sup ||J_Φ||_2`: analytic where the family allows,
    /// otherwise (or if smaller) the declared one.
    pub fn norm_bound(&self) -> Result<Option<Bound<T>>> {
        let analytic = match &self.family {
            Family::ScaledTanh { gain } => Some(gain.abs()),
            Family::Linear { gain_matrix } => Some(spectral_norm(gain_matrix)?),
            Family::PiecewiseTable { .. } => None,
            Family::Composed { weights, inner } => match inner.norm_bound()? {
                // The inner bound may itself be declared; carry that through.
                Some(b) => {
                    let v = spectral_norm(weights)? * b.value;
                    return Ok(min_bound(
                        Some(Bound { value: v, declared: b.declared }),
                        self.jac_norm_bound.map(|value| Bound { value, declared: true }),
                    ));
                }
                None => None,
            },
        };
        Ok(min_bound(
            analytic.map(|value| Bound { value, declared: false }),
            self.jac_norm_bound.map(|value| Bound { value, declared: true }),
        ))
    }

    /// Diagonal Jacobian structure `J = W diag(s)`, `s_i in [0, gain]`, used to
    /// locate suprema at the vertices of the box. `W` is `None` for the identity.
    pub(crate) fn diagonal_box(&self) -> Option<(Option<&Matrix<T>>, T)> {
        match &self.family {
            Family::ScaledTanh { gain } => Some((None, *gain)),
            Family::Composed { weights, inner } => match inner.family {
                Family::ScaledTanh { gain } => Some((Some(weights), gain)),
                _ => None,
            },
            _ => None,
        }
    }
}

#[inline]
fn sech2<T: Real>(v: T) -> T {
    let c = v.cosh();
    if c.is_infinite() {
        T::zero()
    } else {
        T::one() / (c * c)
    }
}

fn table_segment<T: Real>(knots: &[T], v: T) -> Option<usize> {
    if v < knots[0] || v >= knots[knots.len() - 1] {
        return None;
    }
    Some(knots.partition_point(|&k| k <= v) - 1)
}

fn table_value<T: Real>(knots: &[T], values: &[T], v: T) -> T {
    if v <= knots[0] {
        return values[0];
    }
    match table_segment(knots, v) {
        Some(i) => values[i] + (values[i + 1] - values[i]) * (v - knots[i]) / (knots[i + 1] - knots[i]),
        None => values[values.len() - 1],
    }
}

fn table_slope<T: Real>(knots: &[T], values: &[T], v: T) -> T {
    match table_segment(knots, v) {
        Some(i) => (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]),
        None => T::zero(),
    }
}

/// Certified upper bound on `sup_{t,y} sum_{i<=k} sigma_i^2(J_Φ(t, y))`.
///
/// Uses the smallest of: the analytic value for the family (`k g^2` for
/// `g tanh`, the exact top-k sum for linear maps, `L^2 sum_{i<=k} sigma_i^2(W)`
/// for `W f` with `||J_f|| <= L`), a declared top-k bound, and `k L^2` from
/// any norm bound.
pub fn jacobian_gain_bounds<T: Real>(phi: &Nonlinearity<T>, k: usize) -> Result<Bound<T>> {
    if k < 1 {
        return Err(Error::InvalidDimension { k, n: phi.input_dim.min(phi.output_dim) });
    }
    let kk = k.min(phi.input_dim).min(phi.output_dim);
    let analytic = match &phi.family {
        Family::ScaledTanh { gain } => Some(Bound { value: T::from_count(kk) * *gain * *gain, declared: false }),
        Family::Linear { gain_matrix } if kk > 0 => {
            Some(Bound { value: top_k_singular_sq_sum(gain_matrix, kk)?, declared: false })
        }
        Family::Composed { weights, inner } => {
            let kw = kk.min(weights.rows()).min(weights.cols());
            match inner.norm_bound()? {
                Some(b) if kw > 0 => {
                    Some(Bound { value: b.value * b.value * top_k_singular_sq_sum(weights, kw)?, declared: b.declared })
                }
                _ => None,
            }
        }
        _ => None,
    };
    let declared_topk = phi.jac_topk_sq_bound.get(&k).map(|&value| Bound { value, declared: true });
    let from_norm = phi.norm_bound()?.map(|b| Bound { value: T::from_count(kk) * b.value * b.value, declared: b.declared });
    min_bound(min_bound(analytic, declared_topk), from_norm).ok_or_else(|| {
        Error::UnboundedNonlinearity(format!(
            "{} has no analytic Jacobian bound; declare jac_norm_bound or jac_topk_sq_bound[{k}]",
            family_name(&phi.family)
        ))
    })
}

pub fn family_name<T: Real>(f: &Family<T>) -> &'static str {
    match f {
        Family::ScaledTanh { .. } => "scaled_tanh",
        Family::Linear { .. } => "linear",
        Family::PiecewiseTable { .. } => "piecewise_table",
        Family::Composed { .. } => "composed",
    }
}

/// Right-hand side and Jacobian of an autonomous-or-not ODE `ẋ = F(t, x)`.
pub trait Dynamics<T: Real> {
    fn dim(&self) -> usize;

    /// Writes `F(t, x)` into `out`. Lengths are not checked.
    fn field_into(&self, t: T, x: &[T], out: &mut [T]);

    /// `∂F/∂x (t, x)`. Length of `x` is not checked.
    fn jacobian_at(&self, t: T, x: &[T]) -> Matrix<T>;

    /// Writes `∂F/∂x (t, x)` into an `n x n` buffer.
    fn jacobian_into(&self, t: T, x: &[T], out: &mut Matrix<T>) {
        *out = self.jacobian_at(t, x);
    }

    /// Right-hand side of the ODE at `(t, x)`.
    fn evaluate_field(&self, t: T, x: &[T]) -> Result<Vec<T>> {
        check_state(self.dim(), x)?;
        let mut out = vec![T::zero(); self.dim()];
        self.field_into(t, x, &mut out);
        Ok(out)
    }
}

fn check_state<T>(n: usize, x: &[T]) -> Result<()> {
    if x.len() != n {
        return Err(Error::Shape(format!("state has length {}, system dimension is {n}", x.len())));
    }
    Ok(())
}

/// `ẋ = Ax − BΦ(t, Cx)` (no feedthrough).
#[derive(Debug, Clone, PartialEq)]
pub struct LurieSystem<T: Real> {
    a: Matrix<T>,
    b: Matrix<T>,
    c: Matrix<T>,
    phi: Nonlinearity<T>,
}

impl<T: Real> LurieSystem<T> {
    pub fn new(a: Matrix<T>, b: Matrix<T>, c: Matrix<T>, phi: Nonlinearity<T>) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() {
            return Err(Error::Shape(format!("A must be square, got {}x{}", a.rows(), a.cols())));
        }
        if b.rows() != n || c.cols() != n {
            return Err(Error::Shape(format!(
                "B is {}x{} and C is {}x{}; both must match n = {n}",
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols()
            )));
        }
        if b.cols() != phi.output_dim || c.rows() != phi.input_dim {
            return Err(Error::Shape(format!(
                "nonlinearity maps R^{} -> R^{}, but C has {} rows and B has {} columns",
                phi.input_dim,
                phi.output_dim,
                c.rows(),
                b.cols()
            )));
        }
        Ok(Self { a, b, c, phi })
    }

    pub fn a(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<T> {
        &self.b
    }

    pub fn c(&self) -> &Matrix<T> {
        &self.c
    }

    pub fn phi(&self) -> &Nonlinearity<T> {
        &self.phi
    }

    /// `J(t, x) = A − B J_Φ(t, Cx) C`.
    pub fn jacobian_closed_loop(&self, t: T, x: &[T]) -> Result<Matrix<T>> {
        check_state(self.a.rows(), x)?;
        Ok(self.jacobian_at(t, x))
    }
}

impl<T: Real> Dynamics<T> for LurieSystem<T> {
    fn dim(&self) -> usize {
        self.a.rows()
    }

    fn field_into(&self, t: T, x: &[T], out: &mut [T]) {
        let mut y = vec![T::zero(); self.c.rows()];
        self.c.mul_vec_into(x, &mut y);
        let mut u = vec![T::zero(); self.phi.output_dim];
        self.phi.eval_into(t, &y, &mut u);
        let mut bu = vec![T::zero(); out.len()];
        self.b.mul_vec_into(&u, &mut bu);
        self.a.mul_vec_into(x, out);
        for (o, v) in out.iter_mut().zip(bu) {
            *o -= v;
        }
    }

    fn jacobian_at(&self, t: T, x: &[T]) -> Matrix<T> {
        let mut y = vec![T::zero(); self.c.rows()];
        self.c.mul_vec_into(x, &mut y);
        let jphi = self.phi.jacobian_unchecked(t, &y);
        &self.a - &(&(&self.b * &jphi) * &self.c)
    }
}

/// `ẋ = −αx + W f(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSystem<T: Real> {
    alpha: T,
    w: Matrix<T>,
    f: Nonlinearity<T>,
}

impl<T: Real> NetworkSystem<T> {
    pub fn new(alpha: T, w: Matrix<T>, f: Nonlinearity<T>) -> Result<Self> {
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if !w.is_square() {
            return Err(Error::Shape(format!("W must be square, got {}x{}", w.rows(), w.cols())));
        }
        let n = w.rows();
        if f.input_dim != n || f.output_dim != n {
            return Err(Error::Shape(format!(
                "activation maps R^{} -> R^{}, network dimension is {n}",
                f.input_dim, f.output_dim
            )));
        }
        Ok(Self { alpha, w, f })
    }

    /// `n` neurons, `W = coupling * 1 1ᵀ`, `f = gain * tanh`.
    pub fn rank_one_hopfield(n: usize, alpha: T, coupling: T, gain: T) -> Result<Self> {
        Self::new(alpha, Matrix::filled(n, n, coupling), Nonlinearity::scaled_tanh(n, gain)?)
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn w(&self) -> &Matrix<T> {
        &self.w
    }

    pub fn f(&self) -> &Nonlinearity<T> {
        &self.f
    }
}

impl<T: Real> Dynamics<T> for NetworkSystem<T> {
    fn dim(&self) -> usize {
        self.w.rows()
    }

    fn field_into(&self, t: T, x: &[T], out: &mut [T]) {
        let mut fx = vec![T::zero(); x.len()];
        self.f.eval_into(t, x, &mut fx);
        self.w.mul_vec_into(&fx, out);
        for (o, &xi) in out.iter_mut().zip(x) {
            *o -= self.alpha * xi;
        }
    }

    fn jacobian_into(&self, t: T, x: &[T], out: &mut Matrix<T>) {
        let n = x.len();
        let mut d = vec![T::zero(); n];
        if out.shape() != (n, n) || !self.f.diagonal_slopes_into(x, &mut d) {
            *out = self.jacobian_at(t, x);
            return;
        }
        // W diag(d) - alpha I without forming diag(d).
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.w[(i, j)] * d[j];
            }
            out[(i, i)] -= self.alpha;
        }
    }

    fn jacobian_at(&self, t: T, x: &[T]) -> Matrix<T> {
        let mut j = &self.w * &self.f.jacobian_unchecked(t, x);
        for i in 0..x.len() {
            j[(i, i)] -= self.alpha;
        }
        j
    }
}

/// Either kind of system, as loaded from a description file.
#[derive(Debug, Clone, PartialEq)]
pub enum System<T: Real> {
    Lurie(LurieSystem<T>),
    Network(NetworkSystem<T>),
}

impl<T: Real> Dynamics<T> for System<T> {
    fn dim(&self) -> usize {
        match self {
            System::Lurie(s) => s.dim(),
            System::Network(s) => s.dim(),
        }
    }

    fn field_into(&self, t: T, x: &[T], out: &mut [T]) {
        match self {
            System::Lurie(s) => s.field_into(t, x, out),
            System::Network(s) => s.field_into(t, x, out),
        }
    }

    fn jacobian_at(&self, t: T, x: &[T]) -> Matrix<T> {
        match self {
            System::Lurie(s) => s.jacobian_at(t, x),
            System::Network(s) => s.jacobian_at(t, x),
        }
    }

    fn jacobian_into(&self, t: T, x: &[T], out: &mut Matrix<T>) {
        match self {
            System::Lurie(s) => s.jacobian_into(t, x, out),
            System::Network(s) => s.jacobian_into(t, x, out),
        }
    }
}

/// Lurie form of a network: `A = −αI`, `B = γI`, `C = I`, `Φ(y) = −γ⁻¹ W f(y)`.
///
/// The closed-loop vector field coincides with the network's for every `γ > 0`.
pub fn network_to_lurie<T: Real>(net: &NetworkSystem<T>, gamma: T) -> Result<LurieSystem<T>> {
    if !(gamma > T::zero()) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    let n = net.dim();
    let phi = Nonlinearity::composed(net.w.scale(-T::one() / gamma), net.f.clone())?;
    LurieSystem::new(Matrix::scalar(n, -net.alpha), Matrix::scalar(n, gamma), Matrix::identity(n), phi)
}

/// Closed-loop Jacobian `A − B J_Φ(t, Cx) C`.
pub fn jacobian_closed_loop<T: Real>(sys: &LurieSystem<T>, t: T, x: &[T]) -> Result<Matrix<T>> {
    sys.jacobian_closed_loop(t, x)
}

/// Right-hand side of either system kind.
pub fn evaluate_field<T: Real, D: Dynamics<T> + ?Sized>(sys: &D, t: T, x: &[T]) -> Result<Vec<T>> {
    sys.evaluate_field(t, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopfield() -> NetworkSystem<f64> {
        NetworkSystem::rank_one_hopfield(10, 0.5, 1.0, 0.07).unwrap()
    }

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows).unwrap()
    }

    fn simple_lurie(phi: Nonlinearity<f64>) -> LurieSystem<f64> {
        let a = m(&[&[-1.0, 2.0], &[0.0, -3.0]]);
        let b = m(&[&[1.0], &[0.5]]);
        let c = m(&[&[0.25, -1.0]]);
        LurieSystem::new(a, b, c, phi).unwrap()
    }

    #[test]
    fn zero_feedback_jacobian_is_a() {
        let sys = simple_lurie(Nonlinearity::zero(1, 1));
        let j = sys.jacobian_closed_loop(0.0, &[0.3, -7.0]).unwrap();
        assert_eq!(&j, sys.a());
    }

    #[test]
    fn linear_feedback_jacobian_and_field() {
        let k = m(&[&[1.5]]);
        let sys = simple_lurie(Nonlinearity::linear(k.clone()));
        let expected = sys.a() - &(&(sys.b() * &k) * sys.c());
        for x in [[0.0, 0.0], [1.0, -2.0], [10.0, 3.5]] {
            assert!(sys.jacobian_closed_loop(2.0, &x).unwrap().max_abs_diff(&expected) < 1e-15);
            let field = sys.evaluate_field(0.0, &x).unwrap();
            let lin = expected.mul_vec(&x).unwrap();
            for (a, b) in field.iter().zip(&lin) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hopfield_lurie_jacobian_at_origin() {
        let lurie = network_to_lurie(&hopfield(), 0.7).unwrap();
        let j = lurie.jacobian_closed_loop(0.0, &[0.0; 10]).unwrap();
        // sech^2(0) = 1: J = -0.5 I - 0.7 * (-1/0.7) * 0.07 * 1 1ᵀ.
        let expected = &Matrix::scalar(10, -0.5) + &Matrix::filled(10, 10, 0.07);
        assert!(j.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn network_to_lurie_preserves_field() {
        let zero_net = NetworkSystem::new(0.8, Matrix::filled(3, 3, 2.0), Nonlinearity::zero(3, 3)).unwrap();
        let lz = network_to_lurie(&zero_net, 0.3).unwrap();
        assert_eq!(lz.evaluate_field(0.0, &[1.0, -2.0, 4.0]).unwrap(), vec![-0.8, 1.6, -3.2]);

        let net = hopfield();
        let lurie = network_to_lurie(&net, 0.7).unwrap();
        for c in [-2.0, -0.3, 0.0, 0.9, 1.7] {
            let x = vec![c; 10];
            // Oracle: hand evaluation, W tanh(c 1) * 0.07 = 0.7 tanh(c) 1.
            let expected = -0.5 * c + 0.7 * f64::tanh(c);
            for v in lurie.evaluate_field(0.0, &x).unwrap().iter().chain(&net.evaluate_field(0.0, &x).unwrap()) {
                assert!((v - expected).abs() < 1e-14);
            }
        }
        assert!(matches!(network_to_lurie(&net, 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(network_to_lurie(&net, -1.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn network_field_examples() {
        let net = NetworkSystem::new(0.5, Matrix::zeros(3, 3), Nonlinearity::scaled_tanh(3, 1.0).unwrap()).unwrap();
        assert_eq!(net.evaluate_field(0.0, &[2.0, -4.0, 1.0]).unwrap(), vec![-1.0, 2.0, -0.5]);
        let at_eq = hopfield().evaluate_field(0.0, &[1.1403; 10]).unwrap();
        let norm = at_eq.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(norm <= 1e-3, "residual {norm}");
        assert!(matches!(hopfield().evaluate_field(0.0, &[0.0; 3]), Err(Error::Shape(_))));
    }

    #[test]
    fn in_place_jacobian_matches() {
        let net = hopfield();
        let x: Vec<f64> = (0..10).map(|i| 0.3 * i as f64 - 1.2).collect();
        let mut j = Matrix::zeros(10, 10);
        net.jacobian_into(0.0, &x, &mut j);
        assert!(j.max_abs_diff(&net.jacobian_at(0.0, &x)) < 1e-15);
        let lin = NetworkSystem::new(1.0, Matrix::identity(2), Nonlinearity::linear(m(&[&[1.0, 2.0], &[0.0, 1.0]]))).unwrap();
        let mut j = Matrix::zeros(2, 2);
        lin.jacobian_into(0.0, &[0.0, 0.0], &mut j);
        assert_eq!(j, m(&[&[0.0, 2.0], &[0.0, 0.0]]));
    }

    #[test]
    fn gain_bound_examples() {
        let tanh = Nonlinearity::scaled_tanh(10, 0.07_f64).unwrap();
        assert!((jacobian_gain_bounds(&tanh, 2).unwrap().value - 0.0098).abs() < 1e-15);
        for k in 1..=4 {
            let id = Nonlinearity::linear(Matrix::<f64>::identity(4));
            assert_eq!(jacobian_gain_bounds(&id, k).unwrap().value, k as f64);
        }
        let lurie = network_to_lurie(&hopfield(), 0.7).unwrap();
        let b = jacobian_gain_bounds(lurie.phi(), 2).unwrap();
        assert!((b.value - 1.0).abs() < 1e-12, "{}", b.value);
        assert!(!b.declared);
    }

    #[test]
    fn piecewise_table_requires_declared_bound() {
        let table = Nonlinearity::piecewise_table(2, vec![-1.0, 0.0, 1.0], vec![-0.5, 0.0, 2.0]).unwrap();
        assert!(matches!(jacobian_gain_bounds(&table, 1), Err(Error::UnboundedNonlinearity(_))));
        assert_eq!(table.eval(0.0, &[0.5, -3.0]).unwrap(), vec![1.0, -0.5]);
        assert_eq!(table.jacobian(0.0, &[0.5, -0.5]).unwrap(), Matrix::diag(&[2.0, 0.5]));
        let declared = table.with_norm_bound(2.0).unwrap();
        let b = jacobian_gain_bounds(&declared, 2).unwrap();
        assert_eq!(b.value, 8.0);
        assert!(b.declared);
        let declared = declared.with_topk_sq_bound(2, 4.25).unwrap();
        assert_eq!(jacobian_gain_bounds(&declared, 2).unwrap().value, 4.25);
    }

    #[test]
    fn shape_validation() {
        let a = Matrix::<f64>::identity(2);
        let bad_b = Matrix::zeros(3, 1);
        assert!(LurieSystem::new(a.clone(), bad_b, Matrix::zeros(1, 2), Nonlinearity::zero(1, 1)).is_err());
        assert!(LurieSystem::new(a.clone(), Matrix::zeros(2, 2), Matrix::zeros(1, 2), Nonlinearity::zero(1, 1)).is_err());
        assert!(NetworkSystem::new(0.0, a.clone(), Nonlinearity::zero(2, 2)).is_err());
        assert!(NetworkSystem::new(1.0, a, Nonlinearity::zero(3, 3)).is_err());
    }
}
