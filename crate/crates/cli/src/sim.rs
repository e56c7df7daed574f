use std::path::Path;

use kcontract::simulate::{
    classify_convergence, estimate_decay_rate, integrate_with, integrate_with_variational, max_residual, random_frame,
    EquilibriumSet, IntegrationOptions, DEFAULT_SKIP_FRACTION,
};
use kcontract::{Dynamics, Error, ScalingQ, System};
use serde::Serialize;

use crate::io::{trajectory_csv, write_atomic};
use crate::CliError;

pub struct BatchSpec<'a> {
    pub system: &'a System<f64>,
    pub initial: Vec<Vec<f64>>,
    pub k: Option<usize>,
    pub scaling: ScalingQ<f64>,
    pub t_end: f64,
    pub dt: f64,
    pub sample_every: usize,
    pub frame_seed: u64,
    pub equilibria: Option<&'a EquilibriumSet<f64>>,
    pub tol: f64,
    pub out_dir: Option<&'a Path>,
}

#[derive(Debug, Serialize)]
pub struct TrajectoryRecord {
    pub index: usize,
    pub x0: Vec<f64>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equilibrium: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_state: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diverged_at: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

/// Frame seeds are derived from the batch seed and the trajectory index.
pub fn frame_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64 + 1)
}

pub fn run_batch(spec: &BatchSpec) -> Result<Vec<TrajectoryRecord>, CliError> {
    let n = spec.system.dim();
    let opts = IntegrationOptions { sample_every: spec.sample_every, ..Default::default() };
    let mut records = Vec::with_capacity(spec.initial.len());
    for (index, x0) in spec.initial.iter().enumerate() {
        let run = match spec.k {
            Some(k) => {
                let frame = random_frame(n, k, frame_seed(spec.frame_seed, index))?;
                integrate_with_variational(spec.system, x0, &frame, &spec.scaling, spec.t_end, spec.dt, &opts)
            }
            None => integrate_with(spec.system, x0, spec.t_end, spec.dt, &opts),
        };
        let mut rec = TrajectoryRecord {
            index,
            x0: x0.clone(),
            status: "ok",
            equilibrium: None,
            fitted_rate: None,
            fit_error: None,
            final_state: None,
            final_residual: None,
            diverged_at: None,
            csv: None,
        };
        match run {
            Ok(traj) => {
                let last = traj.final_state().expect("nonempty").to_vec();
                rec.final_residual = Some(max_residual(spec.system, std::slice::from_ref(&last))?);
                rec.final_state = Some(last);
                if let Some(eq) = spec.equilibria {
                    rec.equilibrium = classify_convergence(&traj, eq, spec.tol);
                    if rec.equilibrium.is_none() {
                        rec.status = "unclassified";
                    }
                }
                if spec.k.is_some() {
                    match estimate_decay_rate(&traj, DEFAULT_SKIP_FRACTION) {
                        Ok(r) => rec.fitted_rate = Some(r),
                        Err(e) => rec.fit_error = Some(e.to_string()),
                    }
                }
                if let Some(dir) = spec.out_dir {
                    let name = format!("traj_{index:03}.csv");
                    write_atomic(&dir.join(&name), &trajectory_csv(&traj))?;
                    rec.csv = Some(name);
                }
            }
            Err(Error::Divergence { time, .. }) => {
                rec.status = "diverged";
                rec.diverged_at = Some(time);
            }
            Err(e) => return Err(e.into()),
        }
        records.push(rec);
    }
    Ok(records)
}

#[derive(Debug, Default, Serialize)]
pub struct Counts {
    pub total: usize,
    pub converged: usize,
    pub unclassified: usize,
    pub diverged: usize,
    /// Trajectories per equilibrium index.
    pub per_equilibrium: Vec<usize>,
}

pub fn counts(records: &[TrajectoryRecord], equilibria: Option<&EquilibriumSet<f64>>) -> Counts {
    let mut c =
        Counts { total: records.len(), per_equilibrium: vec![0; equilibria.map_or(0, |e| e.points.len())], ..Default::default() };
    for r in records {
        match (r.status, r.equilibrium) {
            ("diverged", _) => c.diverged += 1,
            (_, Some(i)) => {
                c.converged += 1;
                c.per_equilibrium[i] += 1;
            }
            _ => c.unclassified += 1,
        }
    }
    c
}
