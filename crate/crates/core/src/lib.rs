//! Numerical toolkit for ultracold atoms in optical lattices coupled to
//! driven cavity modes: effective Hamiltonians after adiabatic elimination of
//! the light, measurement-induced (Zeno) subspace dynamics, quantum-jump
//! trajectories, and exact-diagonalization solvers.
//!
//! Module map:
//! - [`fock`]: occupation-number bases with caps and number sectors
//! - [`ops`]: sparse complex operators and second-quantized builders
//! - [`geometry`]: lattice/mode geometry and coupling tensors by quadrature
//! - [`model`]: effective Hamiltonian assembly and named model presets
//! - [`zeno`]: measurement sectors, projectors, and projected Hamiltonians
//! - [`traj`]: stochastic quantum-jump trajectory simulation
//! - [`solve`]: dense/Lanczos eigensolvers, matrix exponential, phase sweeps

pub mod error;
pub mod fock;
pub mod geometry;
pub mod model;
pub mod ops;
pub mod solve;
pub mod traj;
pub mod zeno;

pub use error::{Error, Result};
pub use fock::FockBasis;
pub use geometry::{
    compute_couplings, wannier, CouplingTensor, LatticeSpec, ModeFunction, PairRange,
    QuadratureReport, QuadratureSpec,
};
pub use model::{
    build_effective_hamiltonian, cavity_prefactor, chain_tunneling, classify_two_body,
    heisenberg_residual, matter_hamiltonian, CavityMode, ModelSpec, OrderingConvention,
    TwoBodyTermClass,
};
pub use ops::SparseOperator;
pub use solve::{dicke_phase_sweep, dense_spectrum, expm, ground_state, Method, SpectrumResult};
pub use traj::{convergence_metric, ensemble_summary, ConvergenceSummary, JumpProcess, TrajectoryRecord};
pub use zeno::{sectors, zeno_hamiltonian, MeasurementSpec, ZenoSector};
