//! Fixed-step RK4 trajectories, variational frames and volume decay, and
//! convergence classification for networks with symmetric equilibria.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compound::multiplicative_compound;
use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::matrix::Matrix;
use crate::measures::ScalingQ;
use crate::scalar::Real;
use crate::systems::{Dynamics, Family, NetworkSystem};

/// Volumes below this are treated as a collapsed frame.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;
/// Default transient fraction dropped before fitting a decay rate.
pub const DEFAULT_SKIP_FRACTION: f64 = 0.2;
/// Fewest volume samples accepted by [`estimate_decay_rate`].
pub const MIN_FIT_POINTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T: Real> {
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<Matrix<T>>>,
    /// `|Q⁽ᵏ⁾ X⁽ᵏ⁾(t)|_2` at each sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volumes: Option<Vec<T>>,
    /// First sample time at which the volume fell below [`UNDERFLOW_FLOOR`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_collapse_at: Option<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&[T]> {
        self.states.last().map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    /// Record every `sample_every`-th step (the final step is always recorded).
    pub sample_every: usize,
    /// Keep the variational frames `X(t)` in the trajectory.
    pub keep_frames: bool,
    /// A state norm above this aborts with [`Error::Divergence`].
    pub divergence_norm: f64,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self { sample_every: 1, keep_frames: false, divergence_norm: 1e9 }
    }
}

fn check_run<T: Real>(t_end: T, dt: T) -> Result<usize> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if !(t_end > T::zero()) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!("t_end must be positive, got {t_end}")));
    }
    let steps = (t_end / dt).ceil().to_usize().ok_or_else(|| Error::InvalidParameter("too many steps".into()))?;
    Ok(steps.max(1))
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Classical RK4 on a flat state vector with reusable stage buffers.
struct Rk4<T> {
    k1: Vec<T>,
    k2: Vec<T>,
    k3: Vec<T>,
    k4: Vec<T>,
    tmp: Vec<T>,
}

impl<T: Real> Rk4<T> {
    fn new(len: usize) -> Self {
        let z = vec![T::zero(); len];
        Self { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    fn step(&mut self, f: &mut impl FnMut(T, &[T], &mut [T]), t: T, h: T, z: &mut [T]) {
        let half = h / T::lit(2.0);
        let sixth = h / T::lit(6.0);
        f(t, z, &mut self.k1);
        for ((o, &zi), &k) in self.tmp.iter_mut().zip(z.iter()).zip(&self.k1) {
            *o = zi + half * k;
        }
        f(t + half, &self.tmp, &mut self.k2);
        for ((o, &zi), &k) in self.tmp.iter_mut().zip(z.iter()).zip(&self.k2) {
            *o = zi + half * k;
        }
        f(t + half, &self.tmp, &mut self.k3);
        for ((o, &zi), &k) in self.tmp.iter_mut().zip(z.iter()).zip(&self.k3) {
            *o = zi + h * k;
        }
        f(t + h, &self.tmp, &mut self.k4);
        let two = T::lit(2.0);
        for (i, zi) in z.iter_mut().enumerate() {
            *zi += sixth * (self.k1[i] + two * (self.k2[i] + self.k3[i]) + self.k4[i]);
        }
    }
}

/// RK4 samples of `x(t)` on `[0, t_end]` with step `t_end / ceil(t_end / dt)`.
pub fn integrate<T: Real, D: Dynamics<T> + ?Sized>(sys: &D, x0: &[T], t_end: T, dt: T) -> Result<Trajectory<T>> {
    integrate_with(sys, x0, t_end, dt, &IntegrationOptions::default())
}

pub fn integrate_with<T: Real, D: Dynamics<T> + ?Sized>(
    sys: &D,
    x0: &[T],
    t_end: T,
    dt: T,
    opts: &IntegrationOptions,
) -> Result<Trajectory<T>> {
    let n = sys.dim();
    if x0.len() != n {
        return Err(Error::Shape(format!("x0 has length {}, system dimension is {n}", x0.len())));
    }
    let steps = check_run(t_end, dt)?;
    let h = t_end / T::from_count(steps);
    let stride = opts.sample_every.max(1);
    let limit = T::lit(opts.divergence_norm);

    let mut x = x0.to_vec();
    let mut traj =
        Trajectory { times: vec![T::zero()], states: vec![x.clone()], frames: None, volumes: None, rank_collapse_at: None };
    let mut rk = Rk4::new(n);
    let mut field = |t: T, z: &[T], out: &mut [T]| sys.field_into(t, z, out);
    for i in 0..steps {
        let t = T::from_count(i) * h;
        rk.step(&mut field, t, h, &mut x);
        let t_next = T::from_count(i + 1) * h;
        let r = norm(&x);
        if !(r <= limit) {
            return Err(Error::Divergence { time: t_next.as_f64(), norm: r.as_f64() });
        }
        if (i + 1) % stride == 0 || i + 1 == steps {
            traj.times.push(t_next);
            traj.states.push(x.clone());
        }
    }
    Ok(traj)
}

/// `|Q⁽ᵏ⁾ X⁽ᵏ⁾|_2` for an `n x k` frame `X`.
pub fn scaled_volume<T: Real>(q_k: &Matrix<T>, x: &Matrix<T>) -> Result<T> {
    let xk = multiplicative_compound(x, x.cols())?.into_body();
    Ok(q_k.matmul(&xk)?.frobenius_norm())
}

/// Co-integrates `ẋ = F(t, x)` with `Ẋ = J(t, x) X` and records the scaled
/// parallelotope volume `|Q⁽ᵏ⁾ X⁽ᵏ⁾(t)|_2`. Frames are never re-orthonormalized.
pub fn integrate_with_variational<T: Real, D: Dynamics<T> + ?Sized>(
    sys: &D,
    x0: &[T],
    frame0: &Matrix<T>,
    scaling: &ScalingQ<T>,
    t_end: T,
    dt: T,
    opts: &IntegrationOptions,
) -> Result<Trajectory<T>> {
    let n = sys.dim();
    if x0.len() != n {
        return Err(Error::Shape(format!("x0 has length {}, system dimension is {n}", x0.len())));
    }
    let k = frame0.cols();
    if frame0.rows() != n || k < 1 || k > n {
        return Err(Error::Shape(format!("frame is {}x{}, need {n} x k with 1 <= k <= {n}", frame0.rows(), frame0.cols())));
    }
    if scaling.dim() != n {
        return Err(Error::Shape(format!("scaling has dimension {}, system has {n}", scaling.dim())));
    }
    let sv = singular_values(frame0)?;
    let (hi, lo) = (sv[0], sv[k - 1]);
    if !(lo > T::epsilon() * T::from_count(n) * hi) {
        return Err(Error::InvalidParameter("initial frame is not of full column rank".into()));
    }
    let steps = check_run(t_end, dt)?;
    let h = t_end / T::from_count(steps);
    let stride = opts.sample_every.max(1);
    let limit = T::lit(opts.divergence_norm);
    let q_k = multiplicative_compound(scaling.q(), k)?.into_body();
    let floor = T::lit(UNDERFLOW_FLOOR);

    // z = [x; X row-major]
    let mut z: Vec<T> = x0.iter().copied().chain(frame0.as_slice().iter().copied()).collect();
    let frame_of = |z: &[T]| Matrix::new(n, k, z[n..].to_vec());

    let mut traj = Trajectory {
        times: vec![T::zero()],
        states: vec![x0.to_vec()],
        frames: opts.keep_frames.then(|| vec![frame0.clone()]),
        volumes: Some(vec![scaled_volume(&q_k, frame0)?]),
        rank_collapse_at: None,
    };
    let mut rk = Rk4::new(z.len());
    let mut j = Matrix::zeros(n, n);
    let mut field = |t: T, z: &[T], out: &mut [T]| {
        let (x, xf) = z.split_at(n);
        let (dx, dxf) = out.split_at_mut(n);
        sys.field_into(t, x, dx);
        sys.jacobian_into(t, x, &mut j);
        for r in 0..n {
            let jr = j.row(r);
            for c in 0..k {
                let mut acc = T::zero();
                for (l, &jl) in jr.iter().enumerate() {
                    acc += jl * xf[l * k + c];
                }
                dxf[r * k + c] = acc;
            }
        }
    };
    for i in 0..steps {
        let t = T::from_count(i) * h;
        rk.step(&mut field, t, h, &mut z);
        let t_next = T::from_count(i + 1) * h;
        let r = norm(&z[..n]);
        if !(r <= limit) {
            return Err(Error::Divergence { time: t_next.as_f64(), norm: r.as_f64() });
        }
        if (i + 1) % stride == 0 || i + 1 == steps {
            let frame = frame_of(&z)?;
            let v = scaled_volume(&q_k, &frame)?;
            if v < floor && traj.rank_collapse_at.is_none() {
                traj.rank_collapse_at = Some(t_next);
            }
            traj.times.push(t_next);
            traj.states.push(z[..n].to_vec());
            if let Some(v_list) = traj.volumes.as_mut() {
                v_list.push(v);
            }
            if let Some(f) = traj.frames.as_mut() {
                f.push(frame);
            }
        }
    }
    Ok(traj)
}

/// Least-squares slope of `ln v(t)` after dropping the first `skip_fraction`
/// of the time span. The window ends at the first volume below the underflow floor.
pub fn estimate_decay_rate<T: Real>(traj: &Trajectory<T>, skip_fraction: f64) -> Result<T> {
    if !(0.0..1.0).contains(&skip_fraction) {
        return Err(Error::InvalidParameter(format!("skip fraction must lie in [0, 1), got {skip_fraction}")));
    }
    let volumes = traj.volumes.as_ref().ok_or(Error::InsufficientData { needed: MIN_FIT_POINTS, got: 0 })?;
    let (Some(&t0), Some(&t1)) = (traj.times.first(), traj.times.last()) else {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, got: 0 });
    };
    let start = t0 + T::lit(skip_fraction) * (t1 - t0);
    let floor = T::lit(UNDERFLOW_FLOOR);
    let pts: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(volumes)
        .take_while(|(_, &v)| v >= floor)
        .filter(|(&t, _)| t >= start)
        .map(|(&t, &v)| (t.as_f64(), v.as_f64().ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, got: pts.len() });
    }
    // Offsetting by the first value keeps a constant series exactly flat.
    let y0 = pts[0].1;
    let pts: Vec<(f64, f64)> = pts.into_iter().map(|(t, y)| (t, y - y0)).collect();
    let m = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - ym)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - tm) * (p.0 - tm)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, got: 1 });
    }
    Ok(T::lit(sxy / sxx))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSet<T: Real> {
    pub points: Vec<Vec<T>>,
    pub residual_tol: T,
}

/// Largest `|F(0, p)|_2` over the points.
pub fn max_residual<T: Real, D: Dynamics<T> + ?Sized>(sys: &D, points: &[Vec<T>]) -> Result<T> {
    let mut worst = T::zero();
    for p in points {
        worst = worst.max(norm(&sys.evaluate_field(T::zero(), p)?));
    }
    Ok(worst)
}

/// Equilibria `{0, ±s·1}` of `ẋ = −αx + c 11ᵀ g tanh(x)`, where `s > 0` solves
/// `α s = n c g tanh(s)` (bisection to 1e-12). Only the origin when `n c g <= α`.
pub fn hopfield_symmetric_equilibria<T: Real>(net: &NetworkSystem<T>) -> Result<EquilibriumSet<T>> {
    let n = net.dim();
    let w = net.w();
    let c = w[(0, 0)];
    if w.as_slice().iter().any(|&v| v != c) {
        return Err(Error::WrongStructure("W must be a multiple of the all-ones matrix".into()));
    }
    let Family::ScaledTanh { gain } = *net.f().family() else {
        return Err(Error::WrongStructure("the activation must be a scaled tanh".into()));
    };
    let alpha = net.alpha();
    let slope = T::from_count(n) * c * gain;
    let mut points = vec![vec![T::zero(); n]];
    if slope > alpha {
        let h = |s: T| slope * s.tanh() - alpha * s;
        let (mut lo, mut hi) = (T::zero(), slope / alpha);
        // h > 0 just right of 0, h(slope/alpha) < 0.
        let tol = T::lit(1e-12);
        let mut iters = 0;
        while hi - lo > tol && iters < 200 {
            let mid = (lo + hi) / T::lit(2.0);
            if mid == lo || mid == hi {
                break;
            }
            if h(mid) > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
            iters += 1;
        }
        let s = (lo + hi) / T::lit(2.0);
        points.push(vec![s; n]);
        points.push(vec![-s; n]);
    }
    let residual_tol = T::lit(1e-10);
    let worst = max_residual(net, &points)?;
    if worst > residual_tol {
        return Err(Error::NoConvergence(format!("equilibrium residual {worst} exceeds {residual_tol}")));
    }
    Ok(EquilibriumSet { points, residual_tol })
}

/// Index of the nearest equilibrium within `tol` of the final state.
pub fn classify_convergence<T: Real>(traj: &Trajectory<T>, eq: &EquilibriumSet<T>, tol: T) -> Option<usize> {
    let x = traj.final_state()?;
    eq.points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.len() == x.len())
        .map(|(i, p)| (i, norm(&p.iter().zip(x).map(|(&a, &b)| a - b).collect::<Vec<_>>())))
        .filter(|&(_, d)| d <= tol)
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, _)| i)
}

/// `count` points uniform in `[-radius, radius]^n` from a seeded generator.
pub fn random_initial_conditions<T: Real>(n: usize, count: usize, radius: f64, seed: u64) -> Vec<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..n).map(|_| T::lit(rng.gen_range(-radius..=radius))).collect()).collect()
}

/// Seeded `n x k` frame with standard-normal-like entries (sum of uniforms),
/// redrawn until it has full column rank.
pub fn random_frame<T: Real>(n: usize, k: usize, seed: u64) -> Result<Matrix<T>> {
    if k < 1 || k > n {
        return Err(Error::InvalidDimension { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let data: Vec<T> = (0..n * k).map(|_| T::lit((0..4).map(|_| rng.gen_range(-1.0..1.0)).sum::<f64>())).collect();
        let x = Matrix::new(n, k, data)?;
        let sv = singular_values(&x)?;
        if sv[k - 1] > T::lit(1e-6) * sv[0] {
            return Ok(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::determinant;
    use crate::systems::{LurieSystem, Nonlinearity};

    fn hopfield() -> NetworkSystem<f64> {
        NetworkSystem::rank_one_hopfield(10, 0.5, 1.0, 0.07).unwrap()
    }

    fn linear(a: Matrix<f64>) -> LurieSystem<f64> {
        let n = a.rows();
        LurieSystem::new(a, Matrix::zeros(n, 1), Matrix::zeros(1, n), Nonlinearity::zero(1, 1)).unwrap()
    }

    #[test]
    fn linear_decay_matches_exponential() {
        let alpha = 0.7;
        let sys = linear(Matrix::scalar(3, -alpha));
        let x0 = [1.0, -2.0, 0.5];
        let traj = integrate(&sys, &x0, 1.0, 1e-3).unwrap();
        assert_eq!(traj.len(), 1001);
        let xf = traj.final_state().unwrap();
        for (a, b) in xf.iter().zip(x0) {
            let exact = (-alpha).exp() * b;
            assert!(((a - exact) / exact).abs() < 1e-8);
        }
    }

    #[test]
    fn divergence_is_reported() {
        let sys = linear(Matrix::scalar(1, 5.0));
        match integrate(&sys, &[1.0], 10.0, 1e-2) {
            Err(Error::Divergence { time, norm }) => {
                assert!(time > 4.0 && time < 4.2, "{time}");
                assert!(norm > 1e9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sampling_stride_keeps_endpoint() {
        let sys = linear(Matrix::scalar(2, -1.0));
        let opts = IntegrationOptions { sample_every: 300, ..Default::default() };
        let traj = integrate_with(&sys, &[1.0, 1.0], 1.0, 1e-3, &opts).unwrap();
        assert_eq!(traj.times.len(), 5);
        assert!((traj.times[4] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hopfield_equilibria() {
        let net = hopfield();
        let eq = hopfield_symmetric_equilibria(&net).unwrap();
        assert_eq!(eq.points.len(), 3);
        assert!((eq.points[1][0] - 1.1403).abs() < 1e-3);
        assert_eq!(eq.points[2][0], -eq.points[1][0]);

        let weak = NetworkSystem::rank_one_hopfield(10, 0.5, 1.0, 0.04).unwrap();
        assert_eq!(hopfield_symmetric_equilibria(&weak).unwrap().points.len(), 1);

        let w = Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let other = NetworkSystem::new(0.5, w, Nonlinearity::scaled_tanh(2, 0.1).unwrap()).unwrap();
        assert!(matches!(hopfield_symmetric_equilibria(&other), Err(Error::WrongStructure(_))));
    }

    #[test]
    fn hopfield_trajectories_and_classification() {
        let net = hopfield();
        let eq = hopfield_symmetric_equilibria(&net).unwrap();
        let opts = IntegrationOptions { sample_every: 1000, ..Default::default() };

        let from_zero = integrate_with(&net, &[0.0; 10], 5.0, 1e-3, &opts).unwrap();
        assert!(from_zero.states.iter().all(|s| s.iter().all(|&v| v == 0.0)));
        assert_eq!(classify_convergence(&from_zero, &eq, 1e-4), Some(0));

        let up = integrate_with(&net, &[3.0; 10], 60.0, 1e-3, &opts).unwrap();
        assert_eq!(classify_convergence(&up, &eq, 1e-4), Some(1));

        let short = integrate_with(&net, &[3.0; 10], 0.5, 1e-3, &opts).unwrap();
        assert_eq!(classify_convergence(&short, &eq, 1e-4), None);
    }

    #[test]
    fn liouville_volume_for_full_frame() {
        let a = Matrix::from_rows(&[&[-1.0, 2.0, 0.0], &[0.0, -0.5, 1.0], &[0.3, 0.0, -2.0]]).unwrap();
        let sys = linear(a.clone());
        let q = crate::measures::symmetric_sqrt(&Matrix::diag(&[1.0, 4.0, 0.25])).unwrap();
        let frame0 = Matrix::from_rows(&[&[1.0, 0.2, 0.0], &[0.0, 1.0, 0.3], &[0.5, 0.0, 1.0]]).unwrap();
        let traj = integrate_with_variational(&sys, &[0.0; 3], &frame0, &q, 1.0, 1e-3, &IntegrationOptions::default()).unwrap();
        let v = traj.volumes.unwrap();
        // det(Q) = 1 here, so v(t) = |det X0| e^{tr(A) t}.
        let expected = determinant(&frame0).unwrap().abs() * (a.trace()).exp();
        assert!(((v[v.len() - 1] - expected) / expected).abs() < 1e-6);
    }

    #[test]
    fn minus_identity_two_frame() {
        let sys = linear(Matrix::scalar(4, -1.0));
        let frame0 = random_frame::<f64>(4, 2, 5).unwrap();
        let traj = integrate_with_variational(
            &sys,
            &[1.0; 4],
            &frame0,
            &ScalingQ::identity(4),
            2.0,
            1e-3,
            &IntegrationOptions::default(),
        )
        .unwrap();
        let v = traj.volumes.as_ref().unwrap();
        let expected = v[0] * (-4.0f64).exp();
        assert!(((v[v.len() - 1] - expected) / expected).abs() < 1e-10);
        assert!((estimate_decay_rate(&traj, 0.2).unwrap() + 2.0).abs() < 1e-8);
    }

    #[test]
    fn rank_deficient_frame_rejected() {
        let sys = linear(Matrix::scalar(3, -1.0));
        let frame0 = Matrix::from_rows(&[&[1.0, 2.0], &[1.0, 2.0], &[0.0, 0.0]]).unwrap();
        let r = integrate_with_variational(
            &sys,
            &[0.0; 3],
            &frame0,
            &ScalingQ::identity(3),
            1.0,
            1e-2,
            &IntegrationOptions::default(),
        );
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
    }

    fn synthetic(volumes: Vec<f64>) -> Trajectory<f64> {
        let n = volumes.len();
        Trajectory {
            times: (0..n).map(|i| i as f64 * 0.1).collect(),
            states: vec![vec![]; n],
            frames: None,
            volumes: Some(volumes),
            rank_collapse_at: None,
        }
    }

    #[test]
    fn decay_rate_examples() {
        let t = synthetic((0..100).map(|i| (-3.0 * i as f64 * 0.1).exp()).collect());
        assert!((estimate_decay_rate(&t, 0.2).unwrap() + 3.0).abs() < 1e-9);
        let flat = synthetic(vec![2.5; 50]);
        assert_eq!(estimate_decay_rate(&flat, 0.2).unwrap(), 0.0);
        let few = synthetic(vec![1.0; 11]);
        assert!(matches!(estimate_decay_rate(&few, 0.2), Err(Error::InsufficientData { .. })));
        let mut underflow: Vec<f64> = (0..100).map(|i| (-3.0 * i as f64 * 0.1).exp()).collect();
        for v in underflow.iter_mut().skip(40) {
            *v = 0.0;
        }
        assert!((estimate_decay_rate(&synthetic(underflow), 0.2).unwrap() + 3.0).abs() < 1e-9);
        let mut none = synthetic(vec![1.0; 20]);
        none.volumes = None;
        assert!(estimate_decay_rate(&none, 0.2).is_err());
    }

    #[test]
    fn seeded_initial_conditions_are_reproducible() {
        let a: Vec<Vec<f64>> = random_initial_conditions(10, 5, 3.0, 42);
        let b: Vec<Vec<f64>> = random_initial_conditions(10, 5, 3.0, 42);
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|v| v.abs() <= 3.0));
        assert_ne!(a, random_initial_conditions::<f64>(10, 5, 3.0, 43));
    }
}
