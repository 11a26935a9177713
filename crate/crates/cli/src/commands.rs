//! Implementations of the five subcommands. Each takes a parsed config, runs
//! the computation, and writes its artifacts plus the resolved config through
//! the sink.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use cavitylattice_core::fock::FockBasis;
use cavitylattice_core::geometry::compute_couplings;
use cavitylattice_core::model::{self, classify_two_body, heisenberg_residual, OrderingConvention};
use cavitylattice_core::ops::{self, SparseOperator};
use cavitylattice_core::solve::{self, ground_state, Method};
use cavitylattice_core::traj::{ensemble_summary, JumpProcess};
use cavitylattice_core::zeno::{self, MeasurementSpec, SurvivingTerm, ZenoSector};

use crate::config::*;
use crate::output::{CliError, CliResult, Sink};

fn check_version(version: u32) -> CliResult<()> {
    if version != 1 {
        return Err(CliError::Schema(format!(
            "unsupported config version {version} (expected 1)"
        )));
    }
    Ok(())
}

fn c2(v: [f64; 2]) -> C64 {
    C64::new(v[0], v[1])
}

// ---------------------------------------------------------------------------
// couplings
// ---------------------------------------------------------------------------

pub fn cmd_couplings(config: &CouplingsConfig, sink: &Sink) -> CliResult<()> {
    check_version(config.version)?;
    let (tensor, report) = compute_couplings(
        &config.lattice,
        &config.mode_m,
        &config.mode_n,
        config.range,
        &config.quadrature,
    )?;

    let rows: Vec<String> = tensor
        .canonical_entries()
        .map(|((i, j), v)| format!("{i},{j},{},{}", v.re, v.im))
        .collect();
    sink.write_csv("couplings.csv", "i,j,re,im", &rows)?;

    #[derive(Serialize)]
    struct Report {
        num_sites: usize,
        max_error_estimate: f64,
        symmetry_deviation: f64,
    }
    sink.write_json(
        "couplings_report.json",
        &Report {
            num_sites: tensor.num_sites(),
            max_error_estimate: report.max_error_estimate,
            symmetry_deviation: report.symmetry_deviation,
        },
    )?;
    sink.write_resolved_config(config)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

fn build_preset(preset: &PresetConfig) -> CliResult<(FockBasis, SparseOperator)> {
    let built = match preset {
        PresetConfig::GeneralisedDicke(p) => model::preset_generalised_dicke(
            (p.mu[0], p.mu[1]),
            C64::new(p.lambda_1, 0.0),
            C64::new(p.lambda_2, 0.0),
            p.cap,
        )?,
        PresetConfig::TwoSpeciesDicke(p) => {
            model::preset_two_species_dicke(&model::TwoSpeciesDicke {
                mu: p.mu,
                lambda_1: [
                    C64::new(p.lambda_1[0], 0.0),
                    C64::new(p.lambda_1[1], 0.0),
                ],
                lambda_2: [
                    C64::new(p.lambda_2[0], 0.0),
                    C64::new(p.lambda_2[1], 0.0),
                ],
                cap: p.cap,
            })?
        }
        PresetConfig::PairBhm(p) => {
            model::preset_pair_bhm(p.j, p.u, C64::new(p.lambda, 0.0), p.num_sites, p.cap)?
        }
        PresetConfig::Superexchange(p) => {
            let preset = model::preset_superexchange(p.delta_c, c2(p.c_c), c2(p.j_nn))?;
            (preset.basis, preset.hamiltonian)
        }
        PresetConfig::GaugeField(p) => {
            let preset = model::preset_gauge_field(p.lambda, p.vartheta, p.lattice_sites, p.cap)?;
            (preset.basis, preset.hamiltonian)
        }
        PresetConfig::Model(p) => {
            let basis = FockBasis::build(
                p.basis.num_sites,
                p.basis.max_per_site,
                p.basis.total_number,
            )?;
            let h = model::build_effective_hamiltonian(&basis, &p.model)?;
            (basis, h)
        }
    };
    Ok(built)
}

pub fn cmd_spectrum(config: &SpectrumConfig, sink: &Sink) -> CliResult<()> {
    check_version(config.version)?;
    let (basis, h) = build_preset(&config.preset)?;
    let gs = ground_state(&h, config.method)?;

    // Full spectrum as CSV whenever the dense path is feasible and requested.
    if config.method != Method::Lanczos && h.dim() <= 2000 {
        let (values, _) = solve::dense_spectrum(&h)?;
        let rows: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(k, e)| format!("{k},{e}"))
            .collect();
        sink.write_csv("eigenvalues.csv", "index,energy", &rows)?;
    }

    #[derive(Serialize)]
    struct OrderingResiduals {
        site: usize,
        symmetrized: f64,
        unsymmetrized: f64,
    }
    let ordering = match config.ordering_residual_site {
        None => None,
        Some(site) => {
            let PresetConfig::Model(p) = &config.preset else {
                return Err(CliError::Schema(
                    "ordering_residual_site requires an explicit model preset".into(),
                ));
            };
            Some(OrderingResiduals {
                site,
                symmetrized: heisenberg_residual(
                    &basis,
                    &p.model,
                    site,
                    OrderingConvention::Symmetrized,
                )?,
                unsymmetrized: heisenberg_residual(
                    &basis,
                    &p.model,
                    site,
                    OrderingConvention::Unsymmetrized,
                )?,
            })
        }
    };

    #[derive(Serialize)]
    struct Ground {
        dim: usize,
        energy: f64,
        residual: f64,
        degenerate: bool,
        method: Method,
        #[serde(skip_serializing_if = "Option::is_none")]
        ordering_residuals: Option<OrderingResiduals>,
    }
    sink.write_json(
        "ground.json",
        &Ground {
            dim: h.dim(),
            energy: gs.energy,
            residual: gs.residual,
            degenerate: gs.degenerate,
            method: gs.method,
            ordering_residuals: ordering,
        },
    )?;
    sink.write_resolved_config(config)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

pub fn cmd_sweep(config: &SweepConfig, sink: &Sink) -> CliResult<()> {
    check_version(config.version)?;
    let l1 = config.lambda_1.values();
    let l2 = config.lambda_2.values();
    let result = solve::dicke_phase_sweep((config.mu[0], config.mu[1]), &l1, &l2, config.cap)?;

    // Boundary at the configured occupation threshold (the sweep's built-in
    // contour is the 0.5 default).
    let n1_grid: Vec<f64> = result.points.iter().map(|p| p.n1).collect();
    let boundary = solve::level_set_segments(&l1, &l2, &n1_grid, config.threshold);

    let rows: Vec<String> = result
        .points
        .iter()
        .map(|p| {
            format!(
                "{},{},{},{},{}",
                p.lambda_1, p.lambda_2, p.n1, p.n2, p.energy
            )
        })
        .collect();
    sink.write_csv("sweep.csv", "lambda_1,lambda_2,n1,n2,E0", &rows)?;

    let boundary_rows: Vec<String> = boundary
        .iter()
        .map(|((x1, y1), (x2, y2))| format!("{x1},{y1},{x2},{y2}"))
        .collect();
    sink.write_csv("boundary.csv", "x1,y1,x2,y2", &boundary_rows)?;

    #[derive(Serialize)]
    struct SweepMeta {
        mu: [f64; 2],
        cap: u32,
        threshold: f64,
        grid: [usize; 2],
        num_boundary_segments: usize,
        tolerances: Tolerances,
    }
    #[derive(Serialize)]
    struct Tolerances {
        ground_state_residual_factor: f64,
        degeneracy_gap: f64,
    }
    sink.write_json(
        "sweep_meta.json",
        &SweepMeta {
            mu: config.mu,
            cap: config.cap,
            threshold: config.threshold,
            grid: [l1.len(), l2.len()],
            num_boundary_segments: boundary.len(),
            tolerances: Tolerances {
                ground_state_residual_factor: 1e-10,
                degeneracy_gap: 1e-8,
            },
        },
    )?;
    sink.write_resolved_config(config)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// zeno
// ---------------------------------------------------------------------------

pub fn cmd_zeno(config: &ZenoConfig, sink: &Sink) -> CliResult<()> {
    check_version(config.version)?;
    let basis = FockBasis::build(
        config.basis.num_sites,
        config.basis.max_per_site,
        config.basis.total_number,
    )?;
    let sectors = zeno::sectors(&basis, &config.measurement)?;
    write_sector_report(&basis, &sectors, sink)?;
    write_survival_report(&basis, &config.measurement, &sectors, sink)?;

    if let Some(model_spec) = &config.model {
        let h = model::build_effective_hamiltonian(&basis, model_spec)?;
        #[derive(Serialize)]
        struct SectorTransitions {
            sector: usize,
            eigenvalue: [f64; 2],
            transitions: Vec<SurvivingTerm>,
        }
        let report: Vec<SectorTransitions> = sectors
            .iter()
            .enumerate()
            .map(|(k, s)| -> CliResult<SectorTransitions> {
                Ok(SectorTransitions {
                    sector: k,
                    eigenvalue: [s.eigenvalue.re, s.eigenvalue.im],
                    transitions: zeno::surviving_transitions(&basis, &h, s)?,
                })
            })
            .collect::<CliResult<_>>()?;
        sink.write_json("transitions.json", &report)?;
    }
    sink.write_resolved_config(config)?;
    Ok(())
}

fn write_sector_report(
    basis: &FockBasis,
    sectors: &[ZenoSector],
    sink: &Sink,
) -> CliResult<()> {
    #[derive(Serialize)]
    struct SectorInfo {
        sector: usize,
        eigenvalue: [f64; 2],
        size: usize,
        members: Vec<Vec<u32>>,
    }
    let report: Vec<SectorInfo> = sectors
        .iter()
        .enumerate()
        .map(|(k, s)| -> CliResult<SectorInfo> {
            Ok(SectorInfo {
                sector: k,
                eigenvalue: [s.eigenvalue.re, s.eigenvalue.im],
                size: s.members.len(),
                members: s
                    .members
                    .iter()
                    .map(|&i| Ok(basis.unrank(i)?.to_vec()))
                    .collect::<CliResult<_>>()?,
            })
        })
        .collect::<CliResult<_>>()?;
    sink.write_json("sectors.json", &report)?;
    Ok(())
}

/// Catalog of single nearest-neighbour hops and all ordered pairs of directed
/// nearest-neighbour bonds, with their survival under each sector projection.
fn write_survival_report(
    basis: &FockBasis,
    _meas: &MeasurementSpec,
    sectors: &[ZenoSector],
    sink: &Sink,
) -> CliResult<()> {
    let n = basis.num_sites();
    let mut bonds: Vec<(usize, usize)> = Vec::new();
    for i in 0..n.saturating_sub(1) {
        bonds.push((i, i + 1));
        bonds.push((i + 1, i));
    }

    let mut terms: Vec<(String, Option<String>, SparseOperator)> = Vec::new();
    for &(i, j) in &bonds {
        terms.push((format!("b{i}^ b{j}"), None, ops::hop(basis, i, j)?));
    }
    for &b1 in &bonds {
        for &b2 in &bonds {
            let class = classify_two_body(b1, b2)?;
            let op = ops::hop(basis, b1.0, b1.1)?.multiply(&ops::hop(basis, b2.0, b2.1)?)?;
            terms.push((
                format!("b{}^ b{} b{}^ b{}", b1.0, b1.1, b2.0, b2.1),
                Some(format!("{class:?}")),
                op,
            ));
        }
    }

    #[derive(Serialize)]
    struct TermSurvival {
        label: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        class: Option<String>,
        survives_any: bool,
        per_sector: Vec<bool>,
    }
    let labelled: Vec<(String, SparseOperator)> = terms
        .iter()
        .map(|(label, _, op)| (label.clone(), op.clone()))
        .collect();
    let mut per_sector: Vec<Vec<bool>> = vec![Vec::new(); terms.len()];
    for s in sectors {
        for (t, (_, survived)) in zeno::surviving_terms_report(&labelled, s)?
            .into_iter()
            .enumerate()
        {
            per_sector[t].push(survived);
        }
    }
    let report: Vec<TermSurvival> = terms
        .iter()
        .zip(per_sector)
        .map(|((label, class, _), sector_flags)| TermSurvival {
            label: label.clone(),
            class: class.clone(),
            survives_any: sector_flags.iter().any(|&b| b),
            per_sector: sector_flags,
        })
        .collect();
    sink.write_json("survival.json", &report)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// trajectory
// ---------------------------------------------------------------------------

pub fn cmd_trajectory(config: &TrajectoryConfig, seed: u64, sink: &Sink) -> CliResult<()> {
    check_version(config.version)?;
    if config.initial.len() != config.alphas.len() || config.groups.len() != config.alphas.len() {
        return Err(CliError::Schema(format!(
            "alphas, initial, and groups must have equal length (got {}, {}, {})",
            config.alphas.len(),
            config.initial.len(),
            config.groups.len()
        )));
    }
    let process = JumpProcess::new(
        config.alphas.iter().map(|&v| c2(v)).collect(),
        config.kappa,
    )?;
    let initial: Vec<C64> = config.initial.iter().map(|&v| c2(v)).collect();

    let records = (seed..seed + config.num_trajectories)
        .into_par_iter()
        .map(|s| {
            process.sample_trajectory(
                &initial,
                &config.groups,
                None,
                config.dt,
                config.t_final,
                config.sample_every,
                s,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;

    let rows: Vec<String> = records
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{}",
                r.seed,
                r.final_purity,
                r.final_group,
                r.jump_times.len()
            )
        })
        .collect();
    sink.write_csv(
        "trajectories.csv",
        "seed,final_purity,final_group,num_jumps",
        &rows,
    )?;

    let summary = ensemble_summary(&records, config.purity_threshold)?;
    sink.write_json("ensemble.json", &summary)?;
    sink.write_resolved_config(config)?;
    Ok(())
}
