//! Assembly of the effective atomic Hamiltonian from a [`ModelSpec`], the
//! named model presets (density-density, superexchange, generalised Dicke,
//! pair Bose-Hubbard, global gauge link), two-body term classification, and
//! the symmetrization identity for the post-elimination Heisenberg equations.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::geometry::CouplingTensor;
use crate::ops::{self, SparseOperator};

pub(crate) mod complex_serde {
    use num_complex::Complex64 as C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wire {
        re: f64,
        #[serde(default)]
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &C64, s: S) -> Result<S::Ok, S::Error> {
        Wire { re: v.re, im: v.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let w = Wire::deserialize(d)?;
        Ok(C64::new(w.re, w.im))
    }
}

/// One driven cavity mode scattering pump light off the atoms.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityMode {
    pub label: String,
    /// Detuning from the pump frequency.
    pub detuning: f64,
    /// Photon decay rate; must be positive.
    pub kappa: f64,
    /// Two-photon coupling Omega_m0 = g_m g_0 / Delta_a.
    pub pump_coupling: f64,
    /// Bare mode frequency, kept only for detuning bookkeeping.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<f64>,
}

/// Full physical parameter set for the effective atomic Hamiltonian. Energies
/// are in units of the nearest-neighbour tunnelling unless stated otherwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    /// Directed classical tunnelling entries (i, j, J^T_ij); the set must be
    /// Hermitian-symmetric for assembly to succeed.
    pub tunneling: Vec<(usize, usize, f64)>,
    /// On-site interaction U.
    pub onsite_u: f64,
    /// Pump coherent amplitude alpha_0.
    #[serde(with = "complex_serde")]
    pub pump_amplitude: C64,
    /// Pump self-coupling Omega_00.
    pub pump_self_coupling: f64,
    /// Reference pump frequency, bookkeeping only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pump_frequency: Option<f64>,
    pub cavities: Vec<CavityMode>,
    /// Coupling tensors; mode pair ("0", "0") feeds the pump-pump term and
    /// (label, "0") the cavity-pump terms.
    pub tensors: Vec<CouplingTensor>,
}

impl ModelSpec {
    /// Spec with no light at all (bare Bose-Hubbard).
    pub fn bare(tunneling: Vec<(usize, usize, f64)>, onsite_u: f64) -> Self {
        Self {
            tunneling,
            onsite_u,
            pump_amplitude: C64::new(0.0, 0.0),
            pump_self_coupling: 0.0,
            pump_frequency: None,
            cavities: Vec::new(),
            tensors: Vec::new(),
        }
    }

    pub fn tensor(&self, m: &str, n: &str) -> Option<&CouplingTensor> {
        self.tensors
            .iter()
            .find(|t| t.mode_pair() == (m, n))
    }
}

/// Symmetric nearest-neighbour chain tunnelling entries (both directions).
pub fn chain_tunneling(num_sites: usize, j: f64) -> Vec<(usize, usize, f64)> {
    let mut t = Vec::new();
    for i in 0..num_sites.saturating_sub(1) {
        t.push((i, i + 1, j));
        t.push((i + 1, i, j));
    }
    t
}

/// Cavity steady-state prefactor C_m = Omega_m0 alpha_0 / (i kappa_m + Delta_m).
pub fn cavity_prefactor(spec: &ModelSpec, cavity: usize) -> Result<C64> {
    let m = &spec.cavities[cavity];
    if m.kappa == 0.0 && m.detuning == 0.0 {
        return Err(Error::SingularPrefactor(m.label.clone()));
    }
    Ok(spec.pump_amplitude * m.pump_coupling / C64::new(m.detuning, m.kappa))
}

/// Bare matter Hamiltonian H_M = sum J^T_ij b_i^dag b_j + U/2 sum n_i(n_i - 1).
pub fn matter_hamiltonian(basis: &FockBasis, spec: &ModelSpec) -> Result<SparseOperator> {
    let mut h = SparseOperator::zero(basis.len(), basis.tag());
    for &(i, j, jt) in &spec.tunneling {
        if jt != 0.0 {
            h = h.add(&ops::hop(basis, i, j)?.scale(C64::new(jt, 0.0)))?;
        }
    }
    if spec.onsite_u != 0.0 {
        let mut triplets = Vec::new();
        for (idx, state) in basis.states().iter().enumerate() {
            let val: f64 = state.iter().map(|&n| (n * n.saturating_sub(1)) as f64).sum();
            if val != 0.0 {
                triplets.push((idx, idx, C64::new(0.5 * spec.onsite_u * val, 0.0)));
            }
        }
        h = h.add(&SparseOperator::from_triplets(
            basis.len(),
            basis.tag(),
            triplets,
        )?)?;
    }
    Ok(h)
}

/// Effective atomic Hamiltonian after adiabatic elimination of the cavity
/// modes:
///
/// `H = H_M + Omega_00 |alpha_0|^2 J_00
///      + sum_m (Delta_m |C_m|^2 / 2)(J_m0^dag J_m0 + J_m0 J_m0^dag)`
pub fn build_effective_hamiltonian(basis: &FockBasis, spec: &ModelSpec) -> Result<SparseOperator> {
    let mut h = matter_hamiltonian(basis, spec)?;

    let pump_strength = spec.pump_self_coupling * spec.pump_amplitude.norm_sqr();
    if pump_strength != 0.0 {
        let t00 = spec
            .tensor("0", "0")
            .ok_or_else(|| Error::MissingTensor("0".into(), "0".into()))?;
        let j00 = ops::coupling_operator(basis, t00)?;
        h = h.add(&j00.scale(C64::new(pump_strength, 0.0)))?;
    }

    for (idx, cavity) in spec.cavities.iter().enumerate() {
        let tensor = spec
            .tensor(&cavity.label, "0")
            .ok_or_else(|| Error::MissingTensor(cavity.label.clone(), "0".into()))?;
        let c_m = cavity_prefactor(spec, idx)?;
        let coef = 0.5 * cavity.detuning * c_m.norm_sqr();
        if coef == 0.0 {
            continue;
        }
        let j_m0 = ops::coupling_operator(basis, tensor)?;
        let j_dag = j_m0.adjoint();
        let sym = j_dag.multiply(&j_m0)?.add(&j_m0.multiply(&j_dag)?)?;
        h = h.add(&sym.scale(C64::new(coef, 0.0)))?;
    }

    let dev = h.hermiticity_deviation();
    let scale = h.max_abs_entry().max(1.0);
    if dev > 1e-12 * scale {
        return Err(Error::NonHermitianAssembly(dev));
    }
    Ok(h)
}

/// Validity check for the dispersive-shift assumption Omega_mm J_mm << Delta_m;
/// returns one human-readable warning per violating cavity (never an error).
pub fn dispersive_shift_warnings(spec: &ModelSpec, self_couplings: &[(String, f64)]) -> Vec<String> {
    let mut warnings = Vec::new();
    for cavity in &spec.cavities {
        let omega_mm = self_couplings
            .iter()
            .find(|(l, _)| l == &cavity.label)
            .map(|(_, v)| *v);
        let tensor = spec.tensor(&cavity.label, &cavity.label);
        if let (Some(omega), Some(t)) = (omega_mm, tensor) {
            let max_coeff: f64 = t
                .canonical_entries()
                .map(|(_, v)| v.norm())
                .fold(0.0, f64::max);
            if (omega * max_coeff).abs() > 0.1 * cavity.detuning.abs() {
                warnings.push(format!(
                    "cavity {}: dispersive shift Omega_mm*J_mm = {:.3e} is not small \
                     against detuning {:.3e}",
                    cavity.label,
                    omega * max_coeff,
                    cavity.detuning
                ));
            }
        }
    }
    warnings
}

/// Operator-ordering convention for the steady-state-substituted Heisenberg
/// right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingConvention {
    /// Light and matter operators symmetrized before elimination; matches the
    /// effective Hamiltonian exactly.
    Symmetrized,
    /// Naive substitution keeping only the b^dag b b ordering; misses the
    /// reversed-order terms.
    Unsymmetrized,
}

/// Max-entry residual of `i [H_eff, b_k] - RHS`, where RHS is the
/// steady-state-substituted Heisenberg right-hand side under the chosen
/// ordering convention.
///
/// The constituent one-body operators are realized as commutators of the
/// truncated coupling matrices so the identity is exact on the capped basis
/// (cap-saturated configurations would otherwise inject truncation noise
/// unrelated to the ordering question).
pub fn heisenberg_residual(
    basis: &FockBasis,
    spec: &ModelSpec,
    k: usize,
    ordering: OrderingConvention,
) -> Result<f64> {
    if basis.total_number().is_some() {
        return Err(Error::SectorRestrictedBasis);
    }
    let h_eff = build_effective_hamiltonian(basis, spec)?;
    let b_k = ops::annihilate(basis, k)?;
    let i_unit = C64::new(0.0, 1.0);

    // LHS: i [H_eff, b_k]
    let lhs = h_eff
        .multiply(&b_k)?
        .sub(&b_k.multiply(&h_eff)?)?
        .scale(i_unit);

    // Bare-matter contribution, unchanged by the elimination.
    let h_m = matter_hamiltonian(basis, spec)?;
    let mut rhs = h_m
        .multiply(&b_k)?
        .sub(&b_k.multiply(&h_m)?)?
        .scale(i_unit);

    let commutator_with_bk = |a: &SparseOperator| -> Result<SparseOperator> {
        // -[A, b_k] = b_k A - A b_k
        b_k.multiply(a)?.sub(&a.multiply(&b_k)?)
    };

    let pump_strength = spec.pump_self_coupling * spec.pump_amplitude.norm_sqr();
    if pump_strength != 0.0 {
        let t00 = spec
            .tensor("0", "0")
            .ok_or_else(|| Error::MissingTensor("0".into(), "0".into()))?;
        let j00 = ops::coupling_operator(basis, t00)?;
        let v00 = commutator_with_bk(&j00)?;
        rhs = rhs.add(&v00.scale(-i_unit * pump_strength))?;
    }

    for (idx, cavity) in spec.cavities.iter().enumerate() {
        let tensor = spec
            .tensor(&cavity.label, "0")
            .ok_or_else(|| Error::MissingTensor(cavity.label.clone(), "0".into()))?;
        let c_m = cavity_prefactor(spec, idx)?;
        let coef = cavity.detuning * c_m.norm_sqr();
        if coef == 0.0 {
            continue;
        }
        let j = ops::coupling_operator(basis, tensor)?;
        let j_dag = j.adjoint();
        let v = commutator_with_bk(&j)?;
        let w = commutator_with_bk(&j_dag)?;
        let term = match ordering {
            OrderingConvention::Symmetrized => j_dag
                .multiply(&v)?
                .add(&v.multiply(&j_dag)?)?
                .add(&j.multiply(&w)?)?
                .add(&w.multiply(&j)?)?
                .scale(C64::new(0.5 * coef, 0.0)),
            OrderingConvention::Unsymmetrized => j_dag
                .multiply(&v)?
                .add(&j.multiply(&w)?)?
                .scale(C64::new(coef, 0.0)),
        };
        rhs = rhs.add(&term.scale(-i_unit))?;
    }

    Ok(lhs.sub(&rhs)?.max_abs_entry())
}

/// Relationship classes between two correlated nearest-neighbour tunnelling
/// events `b_i^dag b_j` and `b_k^dag b_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoBodyTermClass {
    /// Same bond, same direction: two atoms tunnel together.
    PairTunnelling,
    /// Same bond, opposite directions.
    PairExchange,
    /// Chained bonds (one hop feeds the other): net next-nearest-neighbour
    /// move.
    NextNearestEffective,
    /// Both hops arrive at a shared site.
    EffectivePair1,
    /// Both hops depart from a shared site.
    EffectivePair2,
    /// Disjoint bonds anywhere in the illuminated region.
    LongRangeCorrelated,
}

/// Classify the ordered pair of nearest-neighbour bonds; total on its domain.
pub fn classify_two_body(
    bond1: (usize, usize),
    bond2: (usize, usize),
) -> Result<TwoBodyTermClass> {
    for &(a, b) in &[bond1, bond2] {
        if a.abs_diff(b) != 1 {
            return Err(Error::NotNearestNeighbour(a, b));
        }
    }
    let (i, j) = bond1;
    let (k, l) = bond2;
    let class = if i == k && j == l {
        TwoBodyTermClass::PairTunnelling
    } else if i == l && j == k {
        TwoBodyTermClass::PairExchange
    } else if j == k || i == l {
        TwoBodyTermClass::NextNearestEffective
    } else if i == k {
        TwoBodyTermClass::EffectivePair1
    } else if j == l {
        TwoBodyTermClass::EffectivePair2
    } else {
        TwoBodyTermClass::LongRangeCorrelated
    };
    Ok(class)
}

/// One cavity participating in a density-density preset: its detuning,
/// steady-state prefactor, and the scattering phase it imprints on each
/// region (`None` = region not illuminated by this cavity).
#[derive(Debug, Clone)]
pub struct RegionCavity {
    pub label: String,
    pub detuning: f64,
    pub prefactor: C64,
    pub phases: Vec<Option<f64>>,
}

/// Interaction strength U^L_AB between two regions.
#[derive(Debug, Clone, Serialize)]
pub struct RegionInteraction {
    pub region_a: usize,
    pub region_b: usize,
    pub strength: f64,
}

/// Density-density Hamiltonian from on-site coupling tensors over site
/// regions, plus the report U^L_AB = sum_c Delta_c |C_c|^2 cos(phi_AB).
pub fn preset_density_density(
    basis: &FockBasis,
    regions: &[Vec<usize>],
    cavities: &[RegionCavity],
) -> Result<(SparseOperator, Vec<RegionInteraction>)> {
    // regions must partition their union: one phase per site per cavity
    let mut seen = vec![false; basis.num_sites()];
    for region in regions {
        for &site in region {
            if site >= basis.num_sites() {
                return Err(Error::InvalidSite {
                    site,
                    num_sites: basis.num_sites(),
                });
            }
            if seen[site] {
                return Err(Error::AmbiguousRegions);
            }
            seen[site] = true;
        }
    }

    let mut h = SparseOperator::zero(basis.len(), basis.tag());
    for cavity in cavities {
        if cavity.phases.len() != regions.len() {
            return Err(Error::Invalid(format!(
                "cavity {} declares {} region phases for {} regions",
                cavity.label,
                cavity.phases.len(),
                regions.len()
            )));
        }
        // D_c = sum_A e^{i phi_A} N_A over illuminated regions
        let mut d = SparseOperator::zero(basis.len(), basis.tag());
        for (region, phase) in regions.iter().zip(&cavity.phases) {
            if let Some(phi) = phase {
                let factor = C64::new(phi.cos(), phi.sin());
                for &site in region {
                    d = d.add(&ops::number(basis, site)?.scale(factor))?;
                }
            }
        }
        let d_dag = d.adjoint();
        let coef = 0.5 * cavity.detuning * cavity.prefactor.norm_sqr();
        let sym = d_dag.multiply(&d)?.add(&d.multiply(&d_dag)?)?;
        h = h.add(&sym.scale(C64::new(coef, 0.0)))?;
    }

    let mut report = Vec::new();
    for a in 0..regions.len() {
        for b in a..regions.len() {
            let mut strength = 0.0;
            for cavity in cavities {
                if let (Some(pa), Some(pb)) = (cavity.phases[a], cavity.phases[b]) {
                    strength +=
                        cavity.detuning * cavity.prefactor.norm_sqr() * (pa - pb).cos();
                }
            }
            report.push(RegionInteraction {
                region_a: a,
                region_b: b,
                strength,
            });
        }
    }
    Ok((h, report))
}

/// Superexchange double well. Modes are ordered (L-up, R-up, L-down, R-down)
/// with cap 1 and total number 2; the physical one-atom-per-site states span
/// the 2x2 exchange block.
#[derive(Debug, Clone)]
pub struct SuperexchangePreset {
    pub basis: FockBasis,
    pub hamiltonian: SparseOperator,
    pub j_ex: f64,
}

/// H_ex = 2 Delta_c |C_c J_nn|^2 (b_Lu^dag b_Ru b_Rd^dag b_Ld + h.c.).
pub fn preset_superexchange(delta_c: f64, c_c: C64, j_nn: C64) -> Result<SuperexchangePreset> {
    let basis = FockBasis::build(4, 1, Some(2))?;
    let j_ex = 2.0 * delta_c * (c_c * j_nn).norm_sqr();
    // b_Lu^dag b_Ru * b_Rd^dag b_Ld  with mode order (0,1,2,3) = (Lu,Ru,Ld,Rd)
    let term = ops::hop(&basis, 0, 1)?.multiply(&ops::hop(&basis, 3, 2)?)?;
    let h = term
        .add(&term.adjoint())?
        .scale(C64::new(j_ex, 0.0));
    Ok(SuperexchangePreset {
        basis,
        hamiltonian: h,
        j_ex,
    })
}

/// Co-rotating Dicke coupling lambda_1 = J^T + Omega_00 |alpha_0|^2 J_nn^00.
pub fn dicke_lambda1(j_t: f64, omega_00: f64, alpha_0: C64, j_nn_00: f64) -> f64 {
    j_t + omega_00 * alpha_0.norm_sqr() * j_nn_00
}

/// Counter-rotating coupling lambda_2 = 2 beta_1 beta_2 Delta_c |C_c J_nn^c0|^2.
pub fn dicke_lambda2(beta_1: f64, beta_2: f64, delta_c: f64, c_c: C64, j_nn_c0: C64) -> f64 {
    2.0 * beta_1 * beta_2 * delta_c * (c_c * j_nn_c0).norm_sqr()
}

/// Generalised Dicke Hamiltonian on two capped modes:
/// `H = sum mu_i n_i + (lambda_1 b_1^dag b_2 + lambda_2 b_1^dag b_2^dag + h.c.)`.
pub fn preset_generalised_dicke(
    mu: (f64, f64),
    lambda_1: C64,
    lambda_2: C64,
    cap: u32,
) -> Result<(FockBasis, SparseOperator)> {
    let basis = FockBasis::build(2, cap, None)?;
    let mut h = ops::number(&basis, 0)?
        .scale(C64::new(mu.0, 0.0))
        .add(&ops::number(&basis, 1)?.scale(C64::new(mu.1, 0.0)))?;
    let co = ops::hop(&basis, 0, 1)?.scale(lambda_1);
    let counter = ops::pair_create(&basis, 0, 1)?.scale(lambda_2);
    h = h.add(&co.add(&co.adjoint())?)?;
    h = h.add(&counter.add(&counter.adjoint())?)?;
    Ok((basis, h))
}

/// Parameters for the two-species generalised Dicke model on modes
/// (A, B, L) = (0, 1, 2).
#[derive(Debug, Clone)]
pub struct TwoSpeciesDicke {
    pub mu: [f64; 3],
    pub lambda_1: [C64; 2],
    pub lambda_2: [C64; 2],
    pub cap: u32,
}

/// `H = sum mu_i n_i + sum_{i in {A,B}} (lambda_1^i b_i^dag b_L
///      + lambda_2^i b_i^dag b_L^dag + h.c.)`.
pub fn preset_two_species_dicke(p: &TwoSpeciesDicke) -> Result<(FockBasis, SparseOperator)> {
    let basis = FockBasis::build(3, p.cap, None)?;
    let mut h = SparseOperator::zero(basis.len(), basis.tag());
    for (i, &mu) in p.mu.iter().enumerate() {
        h = h.add(&ops::number(&basis, i)?.scale(C64::new(mu, 0.0)))?;
    }
    for wing in 0..2 {
        let co = ops::hop(&basis, wing, 2)?.scale(p.lambda_1[wing]);
        let counter = ops::pair_create(&basis, wing, 2)?.scale(p.lambda_2[wing]);
        h = h.add(&co.add(&co.adjoint())?)?;
        h = h.add(&counter.add(&counter.adjoint())?)?;
    }
    Ok((basis, h))
}

/// Bose-Hubbard chain with long-range pair creation/annihilation:
/// `H = -J sum_<ij> b_i^dag b_j + U/2 sum n(n-1)
///      + (lambda sum_{i<=j} b_i^dag b_j^dag + h.c.)`.
pub fn preset_pair_bhm(
    j: f64,
    u: f64,
    lambda: C64,
    num_sites: usize,
    cap: u32,
) -> Result<(FockBasis, SparseOperator)> {
    let basis = FockBasis::build(num_sites, cap, None)?;
    let spec = ModelSpec::bare(chain_tunneling(num_sites, -j), u);
    let mut h = matter_hamiltonian(&basis, &spec)?;
    if lambda != C64::new(0.0, 0.0) {
        let mut pair_sum = SparseOperator::zero(basis.len(), basis.tag());
        for i in 0..num_sites {
            for jj in 0..num_sites {
                pair_sum = pair_sum.add(&ops::pair_create(&basis, i, jj)?)?;
            }
        }
        let term = pair_sum.scale(lambda);
        h = h.add(&term.add(&term.adjoint())?)?;
    }
    Ok((basis, h))
}

/// Global gauge-link model: an M-site chain plus an auxiliary (L, R) pair
/// whose state gates every lattice current.
#[derive(Debug, Clone)]
pub struct GaugeFieldPreset {
    pub basis: FockBasis,
    pub hamiltonian: SparseOperator,
    pub lattice_sites: usize,
    /// Mode indices of the auxiliary link sites (L, R).
    pub link: (usize, usize),
}

/// `H = lambda sum_j (b_{j+1}^dag b_j (sum_k b_k^dag b_{k+1} + theta b_L^dag b_R)
///      + h.c.) + lambda theta^2 (b_L^dag b_R b_R^dag b_L + h.c.)`
///
/// An up-lattice hop (j -> j+1) raises the gradient-measurement value by one
/// unit, a down-hop or a link R -> L hop lowers it; only compensating pairs
/// survive the measurement, which this Hamiltonian realizes directly.
pub fn preset_gauge_field(
    lambda: f64,
    vartheta: f64,
    lattice_sites: usize,
    cap: u32,
) -> Result<GaugeFieldPreset> {
    assert!(lattice_sites >= 2);
    let num_modes = lattice_sites + 2;
    let basis = FockBasis::build(num_modes, cap, None)?;
    let (site_l, site_r) = (lattice_sites, lattice_sites + 1);

    // sum_k b_k^dag b_{k+1}: lattice down-hops
    let mut down = SparseOperator::zero(basis.len(), basis.tag());
    for k in 0..lattice_sites - 1 {
        down = down.add(&ops::hop(&basis, k, k + 1)?)?;
    }
    let link_down = ops::hop(&basis, site_l, site_r)?; // R -> L

    let gate = down.add(&link_down.scale(C64::new(vartheta, 0.0)))?;

    let mut h = SparseOperator::zero(basis.len(), basis.tag());
    for j in 0..lattice_sites - 1 {
        let up = ops::hop(&basis, j + 1, j)?; // j -> j+1
        let term = up.multiply(&gate)?;
        h = h.add(&term.add(&term.adjoint())?)?;
    }
    h = h.scale(C64::new(lambda, 0.0));

    let link_exchange = ops::hop(&basis, site_l, site_r)?
        .multiply(&ops::hop(&basis, site_r, site_l)?)?;
    let le = link_exchange.add(&link_exchange.adjoint())?;
    h = h.add(&le.scale(C64::new(lambda * vartheta * vartheta, 0.0)))?;

    Ok(GaugeFieldPreset {
        basis,
        hamiltonian: h,
        lattice_sites,
        link: (site_l, site_r),
    })
}

/// Spin mapping of the link: 2 S^Z = N_L - N_R.
pub fn gauge_link_sz(preset: &GaugeFieldPreset) -> Result<SparseOperator> {
    let n_l = ops::number(&preset.basis, preset.link.0)?;
    let n_r = ops::number(&preset.basis, preset.link.1)?;
    Ok(n_l.sub(&n_r)?.scale(C64::new(0.5, 0.0)))
}
