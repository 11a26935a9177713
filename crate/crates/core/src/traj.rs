//! Quantum-jump (Monte Carlo wavefunction) trajectories for a continuously
//! monitored cavity output in the diagonal-measurement regime, where both the
//! no-count evolution and the jump act diagonally on the amplitude basis.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ops::SparseOperator;
use crate::solve;

/// Diagonal jump process: state component `n` scatters amplitude `alphas[n]`
/// into a cavity decaying at rate `kappa`, so photons are detected at rate
/// `2 kappa |alpha_n|^2`.
#[derive(Debug, Clone)]
pub struct JumpProcess {
    alphas: Vec<C64>,
    kappa: f64,
}

/// Record of a single simulated trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    pub seed: u64,
    /// Photon detection times.
    pub jump_times: Vec<f64>,
    /// Sample times for the stored expectations.
    pub times: Vec<f64>,
    /// Cumulative photocount k(t) at each sample time (non-decreasing).
    pub photocounts: Vec<usize>,
    /// Probability weight of each amplitude group at each sample time,
    /// indexed `[time][group]`.
    pub group_probabilities: Vec<Vec<f64>>,
    /// Largest single-group probability at the final time.
    pub final_purity: f64,
    /// Index of the dominant group at the final time.
    pub final_group: usize,
}

impl JumpProcess {
    pub fn new(alphas: Vec<C64>, kappa: f64) -> Result<Self> {
        if kappa < 0.0 {
            return Err(Error::Invalid(format!(
                "jump process requires kappa >= 0, got {kappa}"
            )));
        }
        if alphas.is_empty() {
            return Err(Error::Invalid("empty amplitude list".into()));
        }
        Ok(Self { alphas, kappa })
    }

    pub fn alphas(&self) -> &[C64] {
        &self.alphas
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Total photodetection rate for the current state.
    pub fn detection_rate(&self, state: &[C64]) -> f64 {
        state
            .iter()
            .zip(&self.alphas)
            .map(|(c, a)| c.norm_sqr() * 2.0 * self.kappa * a.norm_sqr())
            .sum()
    }

    /// Deterministic no-count evolution over `dt`:
    /// `c_n <- c_n exp(-|alpha_n|^2 kappa dt)`, then renormalize.
    pub fn no_jump_step(&self, state: &mut [C64], dt: f64) -> Result<()> {
        for (c, a) in state.iter_mut().zip(&self.alphas) {
            *c *= (-a.norm_sqr() * self.kappa * dt).exp();
        }
        normalize(state)
    }

    /// Photodetection: `c_n <- c_n alpha_n`, then renormalize. Errors if the
    /// state only has support where `alpha_n = 0` (no photons to detect).
    pub fn jump(&self, state: &mut [C64]) -> Result<()> {
        let mut norm2 = 0.0;
        for (c, a) in state.iter_mut().zip(&self.alphas) {
            *c *= *a;
            norm2 += c.norm_sqr();
        }
        if norm2 == 0.0 {
            return Err(Error::JumpImpossible);
        }
        normalize(state)
    }

    /// Simulate one trajectory from `initial` over total time `t_final` with
    /// step `dt`, sampling group probabilities every `sample_every` steps.
    ///
    /// `groups[n]` assigns each basis component to an amplitude group
    /// (typically a measurement sector); probabilities are accumulated per
    /// group. When `hamiltonian` is given, each step applies the unitary
    /// substep `exp(-i H dt)` before the measurement update. Each step draws
    /// one uniform variate and compares it to the jump probability
    /// `p = dt * sum_n |c_n|^2 2 kappa |alpha_n|^2`; `p` must stay below 0.1
    /// for the first-order splitting to be valid.
    pub fn sample_trajectory(
        &self,
        initial: &[C64],
        groups: &[usize],
        hamiltonian: Option<&SparseOperator>,
        dt: f64,
        t_final: f64,
        sample_every: usize,
        seed: u64,
    ) -> Result<TrajectoryRecord> {
        if initial.len() != self.alphas.len() || groups.len() != self.alphas.len() {
            return Err(Error::DimensionMismatch(initial.len(), self.alphas.len()));
        }
        let propagator = match hamiltonian {
            Some(h) => {
                if h.dim() != self.alphas.len() {
                    return Err(Error::DimensionMismatch(h.dim(), self.alphas.len()));
                }
                Some(solve::expm(&(h.to_dense() * C64::new(0.0, -dt))))
            }
            None => None,
        };
        let num_groups = groups.iter().copied().max().unwrap_or(0) + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = initial.to_vec();
        normalize(&mut state)?;

        let steps = (t_final / dt).round() as usize;
        let mut record = TrajectoryRecord {
            seed,
            jump_times: Vec::new(),
            times: Vec::new(),
            photocounts: Vec::new(),
            group_probabilities: Vec::new(),
            final_purity: 0.0,
            final_group: 0,
        };
        let sample = |state: &[C64], t: f64, record: &mut TrajectoryRecord| {
            let mut probs = vec![0.0; num_groups];
            for (c, &g) in state.iter().zip(groups) {
                probs[g] += c.norm_sqr();
            }
            record.times.push(t);
            record.photocounts.push(record.jump_times.len());
            record.group_probabilities.push(probs);
        };
        sample(&state, 0.0, &mut record);

        for step in 0..steps {
            let t = step as f64 * dt;
            if let Some(u) = &propagator {
                let v = DVector::from_column_slice(&state);
                state = (u * v).iter().copied().collect();
                normalize(&mut state)?;
            }
            let p = dt * self.detection_rate(&state);
            if p >= 0.1 {
                return Err(Error::StepTooLarge { dt, p });
            }
            if rng.gen::<f64>() < p {
                self.jump(&mut state)?;
                record.jump_times.push(t);
            } else {
                self.no_jump_step(&mut state, dt)?;
            }
            if (step + 1) % sample_every == 0 || step + 1 == steps {
                sample(&state, (step + 1) as f64 * dt, &mut record);
            }
        }

        let last = record.group_probabilities.last().unwrap();
        let (g, &p) = last
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        record.final_purity = p;
        record.final_group = g;
        Ok(record)
    }
}

fn normalize(state: &mut [C64]) -> Result<()> {
    let norm: f64 = state.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    for c in state.iter_mut() {
        *c /= norm;
    }
    Ok(())
}

/// Ensemble summary over many trajectories of the same process.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceSummary {
    pub num_trajectories: usize,
    /// Fraction of trajectories whose dominant group carries more than
    /// `purity_threshold` of the weight at the final time.
    pub converged_fraction: f64,
    pub purity_threshold: f64,
    /// Ensemble-mean final probability of each group.
    pub mean_final_probabilities: Vec<f64>,
    /// Fraction of trajectories that converged onto each group.
    pub selection_frequencies: Vec<f64>,
    /// Standard error of each selection frequency.
    pub selection_standard_errors: Vec<f64>,
    pub mean_jumps: f64,
}

/// Largest total probability carried by any single amplitude group; 1 means
/// the state has collapsed into one measurement sector.
pub fn convergence_metric(state: &[C64], groups: &[usize]) -> Result<f64> {
    if state.len() != groups.len() {
        return Err(Error::DimensionMismatch(state.len(), groups.len()));
    }
    let num_groups = groups.iter().copied().max().unwrap_or(0) + 1;
    let mut probs = vec![0.0; num_groups];
    for (c, &g) in state.iter().zip(groups) {
        probs[g] += c.norm_sqr();
    }
    Ok(probs.into_iter().fold(0.0, f64::max))
}

/// Aggregate convergence statistics from a batch of finished trajectories.
pub fn ensemble_summary(
    records: &[TrajectoryRecord],
    purity_threshold: f64,
) -> Result<ConvergenceSummary> {
    if records.is_empty() {
        return Err(Error::Invalid("no trajectories to summarize".into()));
    }
    let num_groups = records[0].group_probabilities[0].len();
    let n = records.len() as f64;

    let mut converged = 0usize;
    let mut mean_final = vec![0.0; num_groups];
    let mut selected = vec![0.0; num_groups];
    let mut jumps = 0usize;
    for r in records {
        if r.group_probabilities[0].len() != num_groups {
            return Err(Error::DimensionMismatch(
                r.group_probabilities[0].len(),
                num_groups,
            ));
        }
        if r.final_purity > purity_threshold {
            converged += 1;
            selected[r.final_group] += 1.0;
        }
        for (acc, &p) in mean_final.iter_mut().zip(r.group_probabilities.last().unwrap()) {
            *acc += p / n;
        }
        jumps += r.jump_times.len();
    }
    let freqs: Vec<f64> = selected.iter().map(|&s| s / n).collect();
    let ses: Vec<f64> = freqs
        .iter()
        .map(|&f| (f * (1.0 - f) / n).sqrt())
        .collect();
    Ok(ConvergenceSummary {
        num_trajectories: records.len(),
        converged_fraction: converged as f64 / n,
        purity_threshold,
        mean_final_probabilities: mean_final,
        selection_frequencies: freqs,
        selection_standard_errors: ses,
        mean_jumps: jumps as f64 / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn two_group_process() -> JumpProcess {
        // amplitudes 2 and 1: distinguishable groups
        JumpProcess::new(vec![c(2.0), c(1.0)], 1.0).unwrap()
    }

    #[test]
    fn no_jump_favours_weak_scatterer() {
        let p = two_group_process();
        let mut state = vec![c(1.0 / 2f64.sqrt()), c(1.0 / 2f64.sqrt())];
        p.no_jump_step(&mut state, 0.5).unwrap();
        // |alpha| = 2 decays faster than |alpha| = 1
        assert!(state[1].norm() > state[0].norm());
        let norm: f64 = state.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jump_favours_strong_scatterer() {
        let p = two_group_process();
        let mut state = vec![c(1.0 / 2f64.sqrt()), c(1.0 / 2f64.sqrt())];
        p.jump(&mut state).unwrap();
        let r = state[0].norm() / state[1].norm();
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn jump_from_dark_state_is_an_error() {
        let p = JumpProcess::new(vec![c(0.0), c(1.0)], 1.0).unwrap();
        let mut state = vec![c(1.0), c(0.0)];
        assert!(matches!(p.jump(&mut state), Err(Error::JumpImpossible)));
    }

    #[test]
    fn analytic_single_component_amplitude_decay() {
        // pure |alpha| = a state: conditional amplitude must follow
        // e^{-a^2 kappa t} before renormalization; after renormalization the
        // state is stationary, so check the detection rate instead
        let p = JumpProcess::new(vec![c(3.0)], 0.7).unwrap();
        let mut state = vec![c(1.0)];
        p.no_jump_step(&mut state, 0.2).unwrap();
        assert!((state[0].norm() - 1.0).abs() < 1e-12);
        assert!((p.detection_rate(&state) - 2.0 * 0.7 * 9.0).abs() < 1e-12);
    }

    #[test]
    fn seeded_trajectories_are_deterministic() {
        let p = two_group_process();
        let init = vec![c(0.6), c(0.8)];
        let a = p
            .sample_trajectory(&init, &[0, 1], None, 0.01, 2.0, 10, 42)
            .unwrap();
        let b = p
            .sample_trajectory(&init, &[0, 1], None, 0.01, 2.0, 10, 42)
            .unwrap();
        assert_eq!(a.jump_times, b.jump_times);
        assert_eq!(a.group_probabilities, b.group_probabilities);
        let c_rec = p
            .sample_trajectory(&init, &[0, 1], None, 0.01, 2.0, 10, 43)
            .unwrap();
        // different seed should (almost surely) differ
        assert!(
            a.jump_times != c_rec.jump_times
                || a.group_probabilities != c_rec.group_probabilities
        );
    }

    #[test]
    fn oversized_step_rejected() {
        let p = JumpProcess::new(vec![c(10.0)], 1.0).unwrap();
        let err = p
            .sample_trajectory(&[c(1.0)], &[0], None, 0.01, 1.0, 1, 1)
            .unwrap_err();
        assert!(matches!(err, Error::StepTooLarge { .. }));
    }

    #[test]
    fn probabilities_always_sum_to_one() {
        let p = two_group_process();
        let rec = p
            .sample_trajectory(&[c(0.6), c(0.8)], &[0, 1], None, 0.01, 3.0, 5, 7)
            .unwrap();
        for probs in &rec.group_probabilities {
            let s: f64 = probs.iter().sum();
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn ensemble_converges_and_is_martingale() {
        // small ensemble smoke test; the full 1000-seed run lives in the
        // acceptance suite
        let p = two_group_process();
        let init = vec![c(1.0 / 2f64.sqrt()), c(1.0 / 2f64.sqrt())];
        let records: Vec<_> = (0..200)
            .map(|s| {
                p.sample_trajectory(&init, &[0, 1], None, 0.005, 3.0, 100, s)
                    .unwrap()
            })
            .collect();
        let summary = ensemble_summary(&records, 0.99).unwrap();
        assert!(summary.converged_fraction > 0.9);
        // initial weights are (1/2, 1/2); selection frequencies must agree
        // within ~4 standard errors
        for (f, se) in summary
            .selection_frequencies
            .iter()
            .zip(&summary.selection_standard_errors)
        {
            assert!((f - 0.5).abs() < 4.0 * se.max(0.01), "freq {f}, se {se}");
        }
    }

    #[test]
    fn invalid_construction() {
        assert!(JumpProcess::new(vec![], 1.0).is_err());
        assert!(JumpProcess::new(vec![c(1.0)], -1.0).is_err());
    }

    #[test]
    fn zero_kappa_no_jump_is_identity() {
        let p = JumpProcess::new(vec![c(2.0), c(1.0)], 0.0).unwrap();
        let mut state = vec![c(0.6), c(0.8)];
        p.no_jump_step(&mut state, 1.0).unwrap();
        assert!((state[0] - c(0.6)).norm() < 1e-15);
        assert!((state[1] - c(0.8)).norm() < 1e-15);
    }

    #[test]
    fn convergence_metric_extremes() {
        let one_sector = vec![c(1.0), c(0.0)];
        assert!((convergence_metric(&one_sector, &[0, 1]).unwrap() - 1.0).abs() < 1e-15);
        let split = vec![c(1.0 / 2f64.sqrt()), c(1.0 / 2f64.sqrt())];
        assert!((convergence_metric(&split, &[0, 1]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn commuting_hamiltonian_keeps_sector_probabilities_exact() {
        // diagonal H commutes with the measured amplitudes: sector weights
        // must be constant along every single trajectory
        use crate::ops::SparseOperator;
        let h = SparseOperator::from_triplets(
            2,
            "t",
            vec![(0, 0, c(1.3)), (1, 1, c(-0.4))],
        )
        .unwrap();
        let p = two_group_process();
        let rec = p
            .sample_trajectory(
                &[c(0.6), c(0.8)],
                &[0, 1],
                Some(&h),
                0.005,
                2.0,
                20,
                11,
            )
            .unwrap();
        // between jumps the weights drift deterministically; at a jump they
        // move discontinuously, but with [H, D] = 0 the H-substep itself must
        // not transfer weight. Check via a jump-free seed segment: all
        // variation must match the measurement-only run exactly.
        let rec_ref = p
            .sample_trajectory(&[c(0.6), c(0.8)], &[0, 1], None, 0.005, 2.0, 20, 11)
            .unwrap();
        for (a, b) in rec
            .group_probabilities
            .iter()
            .zip(&rec_ref.group_probabilities)
        {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn photocount_non_decreasing() {
        let p = two_group_process();
        let rec = p
            .sample_trajectory(&[c(0.6), c(0.8)], &[0, 1], None, 0.01, 3.0, 5, 3)
            .unwrap();
        for w in rec.photocounts.windows(2) {
            assert!(w[1] >= w[0]);
        }
        assert_eq!(*rec.photocounts.last().unwrap(), rec.jump_times.len());
    }
}
