//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Run with `cargo test -p kcontract-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use kcontract::certify::{
    certify_lurie, check_ari_k1, check_network_k_contraction, check_theorem1, find_scalar_gamma_p, lemma1_gap, max_eta1,
    max_eta2, network_condition, random_samples, sampled_mu_bound, CertifyOptions,
};
use kcontract::linalg::inverse;
use kcontract::measures::mu2;
use kcontract::simulate::{
    classify_convergence, estimate_decay_rate, hopfield_symmetric_equilibria, integrate_with, integrate_with_variational,
    max_residual, random_frame, random_initial_conditions, IntegrationOptions,
};
use kcontract::systems::network_to_lurie;
use kcontract::{
    additive_compound, finite_diff_additive, multiplicative_compound, symmetric_sqrt, volume_parallelotope, Dynamics,
    LurieSystem, Matrix, NetworkSystem, Nonlinearity, ScalingQ,
};
use nalgebra::Complex;
use rand::Rng;

type Outcome = Result<String, String>;

/// A passing certificate together with the dynamics it covers, for the
/// sampling check.
struct Certified {
    label: String,
    system: Box<dyn Dynamics<f64>>,
    k: usize,
    scaling: ScalingQ<f64>,
    rate: f64,
}

fn hopfield() -> NetworkSystem<f64> {
    NetworkSystem::rank_one_hopfield(10, 0.5, 1.0, 0.07).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mult(a: &Matrix<f64>, k: usize) -> Matrix<f64> {
    multiplicative_compound(a, k).unwrap().into_body()
}

fn add(a: &Matrix<f64>, k: usize) -> Matrix<f64> {
    additive_compound(a, k).unwrap().into_body()
}

fn hopfield_certification(certified: &mut Vec<Certified>) -> Outcome {
    let net = hopfield();
    let c2 = network_condition(&net, 2).map_err(|e| e.to_string())?;
    ensure((c2.value - 0.49).abs() <= 1e-12, || format!("condition value {} != 0.49", c2.value))?;
    ensure((c2.threshold - 0.5).abs() <= 1e-12, || format!("threshold {} != 0.5", c2.threshold))?;
    let cert2 = check_network_k_contraction(&net, 2).map_err(|e| e.to_string())?;
    let cert1 = check_network_k_contraction(&net, 1).map_err(|e| e.to_string())?;
    ensure(cert2.passed, || "k = 2 does not pass".into())?;
    ensure(!cert1.passed, || "k = 1 passes".into())?;
    let c1 = network_condition(&net, 1).map_err(|e| e.to_string())?;
    certified.push(Certified {
        label: "hopfield k=2".into(),
        system: Box::new(net),
        k: 2,
        scaling: cert2.scaling.clone(),
        rate: cert2.rate_bound,
    });
    Ok(format!("k=2: {} < {}; k=1: {} >= {}; rate {:.6}", c2.value, c2.threshold, c1.value, c1.threshold, cert2.rate_bound))
}

fn hopfield_equilibria() -> Outcome {
    // Oracle: bisection on 0.5 c = 0.7 tanh(c) over (0.5, 2).
    let h = |c: f64| 0.7 * c.tanh() - 0.5 * c;
    let (mut lo, mut hi) = (0.5, 2.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    ensure((oracle - 1.1403).abs() <= 1e-3, || format!("oracle root {oracle}"))?;

    let net = hopfield();
    let eq = hopfield_symmetric_equilibria(&net).map_err(|e| e.to_string())?;
    ensure(eq.points.len() == 3, || format!("{} equilibria", eq.points.len()))?;
    let s = eq.points.iter().map(|p| p[0]).fold(0.0_f64, f64::max);
    ensure((s - 1.1403).abs() <= 1e-3 && (s - oracle).abs() <= 1e-9, || format!("magnitude {s}, oracle {oracle}"))?;
    let res = max_residual(&net, &eq.points).map_err(|e| e.to_string())?;
    ensure(res <= 1e-10, || format!("residual {res}"))?;
    Ok(format!("magnitude {s:.10}, max residual {res:.1e}"))
}

fn hopfield_convergence() -> Outcome {
    let net = hopfield();
    let eq = hopfield_symmetric_equilibria(&net).map_err(|e| e.to_string())?;
    let opts = IntegrationOptions { sample_every: usize::MAX, ..Default::default() };
    let mut hits = [0usize; 3];
    for (i, x0) in random_initial_conditions::<f64>(10, 100, 3.0, 2024).iter().enumerate() {
        let traj = integrate_with(&net, x0, 200.0, 1e-3, &opts).map_err(|e| format!("run {i}: {e}"))?;
        let idx =
            classify_convergence(&traj, &eq, 1e-4).ok_or_else(|| format!("run {i} unclassified: {:?}", traj.final_state()))?;
        hits[idx] += 1;
    }
    Ok(format!("100/100 classified; per equilibrium (0, +, -): {hits:?}"))
}

fn certified_volume_decay(certified: &mut Vec<Certified>) -> Outcome {
    let net = hopfield();
    let s = find_scalar_gamma_p(&net, 2).map_err(|e| e.to_string())?;
    ensure(s.feasible, || "scalar construction infeasible".into())?;
    let rate = 0.5 * (s.eta1 + s.eta2);
    let q = symmetric_sqrt(&Matrix::scalar(10, s.p)).map_err(|e| e.to_string())?;
    let opts = IntegrationOptions { sample_every: 100, ..Default::default() };
    let mut worst = f64::NEG_INFINITY;
    for (i, x0) in random_initial_conditions::<f64>(10, 10, 3.0, 99).iter().enumerate() {
        let frame = random_frame::<f64>(10, 2, 1000 + i as u64).map_err(|e| e.to_string())?;
        let traj = integrate_with_variational(&net, x0, &frame, &q, 50.0, 1e-3, &opts).map_err(|e| format!("run {i}: {e}"))?;
        let slope = estimate_decay_rate(&traj, 0.2).map_err(|e| format!("run {i}: {e}"))?;
        ensure(slope <= -rate + 0.01, || format!("run {i}: slope {slope} > {}", -rate + 0.01))?;
        worst = worst.max(slope);
    }
    let lurie = network_to_lurie(&net, s.gamma).map_err(|e| e.to_string())?;
    let cert = check_theorem1(&lurie, 2, &Matrix::scalar(10, s.p), s.eta1, s.eta2).map_err(|e| e.to_string())?;
    if cert.passed {
        certified.push(Certified { label: "hopfield lurie form k=2".into(), system: Box::new(lurie), k: 2, scaling: q, rate });
    }
    Ok(format!("gamma {:.6}, p {:.6}, rate {rate:.6}; slowest slope {worst:.4}", s.gamma, s.p))
}

fn compound_suite() -> Outcome {
    let mut g = rng(5);
    let mut worst = [0.0_f64; 4];
    for trial in 0..200 {
        let n = 1 + trial % 6;
        let (m, p) = (1 + (trial / 6) % 6, 1 + (trial / 36) % 6);
        let a = random_matrix(&mut g, n, m, -2.0, 2.0);
        let b = random_matrix(&mut g, m, p, -2.0, 2.0);
        for k in 1..=n.min(m).min(p) {
            let rhs = &mult(&a, k) * &mult(&b, k);
            let err = mult(&(&a * &b), k).try_sub(&rhs).unwrap().frobenius_norm() / (1.0 + rhs.frobenius_norm());
            worst[0] = worst[0].max(err);
        }
    }
    ensure(worst[0] <= 1e-9, || format!("Cauchy-Binet error {}", worst[0]))?;

    for trial in 0..100 {
        let n = 1 + trial % 6;
        let a = random_matrix(&mut g, n, n, -1.0, 1.0);
        let lambda = na_complex_eigenvalues(&a);
        for k in 1..=n {
            let sets = subsets(n, k);
            let prods: Vec<Complex<f64>> = sets.iter().map(|s| s.iter().map(|&i| lambda[i]).product()).collect();
            let sums: Vec<Complex<f64>> = sets.iter().map(|s| s.iter().map(|&i| lambda[i]).sum()).collect();
            worst[1] = worst[1]
                .max(multiset_distance(&prods, &na_complex_eigenvalues(&mult(&a, k))))
                .max(multiset_distance(&sums, &na_complex_eigenvalues(&add(&a, k))));
            let fd = finite_diff_additive(&a, k, 1e-6).unwrap().into_body();
            worst[2] = worst[2].max(add(&a, k).max_abs_diff(&fd));
            let x = random_matrix(&mut g, n, k, -2.0, 2.0);
            let gram = na_det(&(&x.transpose() * &x)).sqrt();
            let v = volume_parallelotope(&x).unwrap();
            worst[3] = worst[3].max((v - gram).abs() / gram);
        }
    }
    ensure(worst[1] <= 1e-7, || format!("spectrum mapping error {}", worst[1]))?;
    ensure(worst[2] <= 1e-5, || format!("finite-difference error {}", worst[2]))?;
    ensure(worst[3] <= 1e-10, || format!("volume error {}", worst[3]))?;
    Ok(format!(
        "max errors: Cauchy-Binet {:.1e}, spectra {:.1e}, finite differences {:.1e}, volume {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn lemma1_suite() -> Outcome {
    let mut g = rng(6);
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let n = g.gen_range(1..=5);
        let m = g.gen_range(1..=5);
        let k = g.gen_range(1..=n);
        let mm = random_matrix(&mut g, n, m, -2.0, 2.0);
        let nn = random_matrix(&mut g, m, n, -2.0, 2.0);
        worst = worst.min(lemma1_gap(&mm, &nn, k).map_err(|e| e.to_string())?);
    }
    ensure(worst >= -1e-10, || format!("gap {worst}"))?;
    Ok(format!("smallest gap {worst:.3e}"))
}

fn similarity_identities() -> Outcome {
    let mut g = rng(7);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n = 1 + trial % 5;
        let k = 1 + (trial / 5) % n;
        let a = random_matrix(&mut g, n, n, -2.0, 2.0);
        let t = well_conditioned(&mut g, n, 2.0);
        let t_inv = inverse(&t).unwrap();
        let tat = &(&t * &a) * &t_inv;
        let tk = mult(&t, k);
        let tk_inv = inverse(&tk).unwrap();
        worst = worst
            .max(rel_err(&mult(&tat, k), &(&(&tk * &mult(&a, k)) * &tk_inv)))
            .max(rel_err(&add(&tat, k), &(&(&tk * &add(&a, k)) * &tk_inv)));
        // μ₂ of the similar additive compound equals the scaled measure.
        let lhs = mu2(&(&(&tk * &add(&a, k)) * &tk_inv)).unwrap();
        let rhs = mu2(&add(&tat, k)).unwrap();
        worst = worst.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
    }
    ensure(worst <= 1e-7, || format!("relative error {worst}"))?;
    Ok(format!("max relative error {worst:.1e}"))
}

fn first_order_reduction(certified: &mut Vec<Certified>) -> Outcome {
    let one = |v: f64| Matrix::scalar(1, v);
    let scalar = |c: f64, phi: Nonlinearity<f64>| LurieSystem::new(one(-1.0), one(1.0), one(c), phi).unwrap();
    let p = one(1.0);

    let (ok, margin) = check_ari_k1(&scalar(0.5, Nonlinearity::zero(1, 1)), &p).map_err(|e| e.to_string())?;
    ensure(ok && (margin - 0.75).abs() <= 1e-12, || format!("ARI at C = 0.5: holds {ok}, margin {margin}"))?;

    let opts = CertifyOptions::default();
    let mut etas = Vec::new();
    for (name, phi) in [("K = 0.9", Nonlinearity::linear(one(0.9))), ("0.9 tanh", Nonlinearity::scaled_tanh(1, 0.9).unwrap())] {
        let sys = scalar(0.5, phi);
        let e1 = max_eta1(&sys, 1, &p).map_err(|e| e.to_string())?;
        let e2 = max_eta2(&sys, 1, &p, &opts).map_err(|e| e.to_string())?;
        ensure(e1 > 0.0 && e2 > 0.0, || format!("{name}: eta1 {e1}, eta2 {e2}"))?;
        let cert = check_theorem1(&sys, 1, &p, e1, e2).map_err(|e| e.to_string())?;
        ensure(cert.passed, || format!("{name}: certificate fails at eta1 {e1}, eta2 {e2}"))?;
        etas.push(format!("{name}: eta1 {e1:.4}, eta2 {e2:.4}"));
        certified.push(Certified {
            label: format!("scalar {name}"),
            system: Box::new(sys),
            k: 1,
            scaling: cert.scaling,
            rate: cert.rate_bound,
        });
    }

    let (ok1, margin1) = check_ari_k1(&scalar(1.0, Nonlinearity::zero(1, 1)), &p).map_err(|e| e.to_string())?;
    ensure(!ok1, || format!("ARI holds at C = 1 with margin {margin1}"))?;
    Ok(format!("margin {margin}; {}; C = 1 margin {margin1}", etas.join("; ")))
}

/// Extra Lurie instances so the sampling check covers higher orders and
/// non-scalar scalings.
fn extra_certificates(certified: &mut Vec<Certified>) -> Result<(), String> {
    let opts = CertifyOptions::default();
    let mut g = rng(8);
    for trial in 0..6 {
        let n = 2 + trial % 3;
        let a = &Matrix::scalar(n, -1.5) + &random_matrix(&mut g, n, n, -0.5, 0.5);
        let b = random_matrix(&mut g, n, n, -0.5, 0.5);
        let c = random_matrix(&mut g, n, n, -0.5, 0.5);
        let phi = Nonlinearity::scaled_tanh(n, 0.8).unwrap();
        let sys = LurieSystem::new(a, b, c, phi).unwrap();
        let p = random_spd(&mut g, n, 1.0);
        for k in 1..=n {
            let cert = certify_lurie(&sys, k, &p, &opts).map_err(|e| e.to_string())?;
            if cert.passed {
                certified.push(Certified {
                    label: format!("random lurie #{trial} k={k}"),
                    system: Box::new(sys.clone()),
                    k,
                    scaling: cert.scaling,
                    rate: cert.rate_bound,
                });
            }
        }
    }
    Ok(())
}

fn sampling_consistency(certified: &mut Vec<Certified>) -> Outcome {
    extra_certificates(certified)?;
    ensure(!certified.is_empty(), || "no passing certificates".into())?;
    let mut tightest = f64::INFINITY;
    for (i, c) in certified.iter().enumerate() {
        let samples = random_samples::<f64>(c.system.dim(), 1000, 4.0, 10.0, 500 + i as u64);
        let mu = sampled_mu_bound(c.system.as_ref(), c.k, &c.scaling, &samples).map_err(|e| format!("{}: {e}", c.label))?;
        ensure(mu <= -c.rate + 1e-8, || format!("{}: sampled mu {mu} > -rate {}", c.label, -c.rate))?;
        tightest = tightest.min(-c.rate - mu);
    }
    Ok(format!("{} certificates, smallest slack {tightest:.3e}", certified.len()))
}

fn main() -> ExitCode {
    let mut certified = Vec::new();
    let mut failed = 0;
    let mut report = |id: usize, name: &str, budget: Duration, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= budget {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {:.2} s, budget {:.0} s", elapsed.as_secs_f64(), budget.as_secs_f64()))
            }
        });
        let (tag, msg) = match outcome {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("{tag} [{id}] {name} ({:.2} s): {msg}", elapsed.as_secs_f64());
    };
    let secs = Duration::from_secs;

    report(1, "hopfield certification", secs(1), &mut || hopfield_certification(&mut certified));
    report(2, "hopfield equilibria", secs(1), &mut hopfield_equilibria);
    report(3, "hopfield convergence", secs(60), &mut hopfield_convergence);
    report(4, "certified volume decay", secs(30), &mut || certified_volume_decay(&mut certified));
    report(5, "compound properties", secs(30), &mut compound_suite);
    report(6, "product gap inequality", secs(10), &mut lemma1_suite);
    report(7, "similarity and measure identities", secs(10), &mut similarity_identities);
    report(8, "first-order reduction", secs(1), &mut || first_order_reduction(&mut certified));
    report(9, "sampled measure consistency", secs(30), &mut || sampling_consistency(&mut certified));

    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
