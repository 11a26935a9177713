//! Measurement-induced (quantum Zeno) subspace decomposition: grouping Fock
//! states by the coherent light amplitude they scatter, projecting, and
//! restricting Hamiltonians to a measurement sector.

use std::collections::HashMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::model::complex_serde;
use crate::ops::SparseOperator;

/// A single measured cavity output channel. The amplitude scattered by an
/// occupation state `n` is `alpha(n) = prefactor * sum_j coefficients[j] * n_j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSpec {
    /// Per-site diagonal coupling coefficients J_jj.
    pub coefficients: Vec<C64Wire>,
    /// Overall cavity prefactor C_Pi.
    #[serde(with = "complex_serde")]
    pub prefactor: C64,
    /// Photon decay rate of the measured cavity; must be positive.
    pub kappa: f64,
}

/// Serde-friendly complex number used for coefficient lists.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct C64Wire {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<C64> for C64Wire {
    fn from(v: C64) -> Self {
        Self { re: v.re, im: v.im }
    }
}

impl From<C64Wire> for C64 {
    fn from(v: C64Wire) -> Self {
        C64::new(v.re, v.im)
    }
}

impl MeasurementSpec {
    pub fn new(coefficients: Vec<C64>, prefactor: C64, kappa: f64) -> Self {
        assert!(kappa > 0.0, "measured cavity must decay");
        assert!(
            coefficients.iter().any(|c| *c != C64::new(0.0, 0.0)),
            "measurement needs at least one nonzero coefficient"
        );
        Self {
            coefficients: coefficients.into_iter().map(Into::into).collect(),
            prefactor,
            kappa,
        }
    }

    /// Scattered amplitude for one occupation vector.
    pub fn amplitude(&self, occupation: &[u32]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (coef, &n) in self.coefficients.iter().zip(occupation) {
            s += C64::from(*coef) * n as f64;
        }
        self.prefactor * s
    }

    /// Scattered amplitude for every state of a basis, in basis order.
    pub fn amplitudes(&self, basis: &FockBasis) -> Result<Vec<C64>> {
        if self.coefficients.len() != basis.num_sites() {
            return Err(Error::TensorSiteMismatch {
                tensor_sites: self.coefficients.len(),
                basis_sites: basis.num_sites(),
            });
        }
        Ok(basis.states().iter().map(|s| self.amplitude(s)).collect())
    }

    fn coefficients_are_integer(&self) -> bool {
        self.coefficients.iter().all(|c| {
            c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() < 2f64.powi(40)
        })
    }
}

/// One degenerate eigenspace of the measured amplitude.
#[derive(Debug, Clone)]
pub struct ZenoSector {
    /// Common scattered amplitude of every member state.
    pub eigenvalue: C64,
    /// Member indices into the parent basis, ascending.
    pub members: Vec<usize>,
    /// Projector onto the sector in the parent basis.
    pub projector: SparseOperator,
}

/// Partition a basis into measurement sectors. When every coupling
/// coefficient is integer-valued the grouping key is exact; otherwise
/// amplitudes within `1e-9` of each other share a sector.
pub fn sectors(basis: &FockBasis, meas: &MeasurementSpec) -> Result<Vec<ZenoSector>> {
    let amplitudes = meas.amplitudes(basis)?;

    let mut groups: Vec<(C64, Vec<usize>)> = Vec::new();
    if meas.coefficients_are_integer() {
        // prefactor * integer: key on the exact integer sum
        let mut by_key: HashMap<i64, usize> = HashMap::new();
        for (idx, state) in basis.states().iter().enumerate() {
            let key: i64 = meas
                .coefficients
                .iter()
                .zip(state)
                .map(|(c, &n)| c.re as i64 * n as i64)
                .sum();
            let slot = *by_key.entry(key).or_insert_with(|| {
                groups.push((amplitudes[idx], Vec::new()));
                groups.len() - 1
            });
            groups[slot].1.push(idx);
        }
    } else {
        const EPS: f64 = 1e-9;
        for (idx, &a) in amplitudes.iter().enumerate() {
            match groups.iter_mut().find(|(g, _)| (*g - a).norm() <= EPS) {
                Some((_, members)) => members.push(idx),
                None => groups.push((a, vec![idx])),
            }
        }
    }

    // deterministic order: ascending eigenvalue (real part, then imaginary)
    groups.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));

    let one = C64::new(1.0, 0.0);
    groups
        .into_iter()
        .map(|(eigenvalue, members)| {
            if members.is_empty() {
                return Err(Error::EmptySector);
            }
            let projector = SparseOperator::from_triplets(
                basis.len(),
                basis.tag(),
                members.iter().map(|&i| (i, i, one)).collect(),
            )?;
            Ok(ZenoSector {
                eigenvalue,
                members,
                projector,
            })
        })
        .collect()
}

/// Find the sector containing a given parent-basis state index.
pub fn sector_of<'a>(sectors: &'a [ZenoSector], index: usize) -> Option<&'a ZenoSector> {
    sectors.iter().find(|s| s.members.binary_search(&index).is_ok())
}

/// Zeno Hamiltonian H_Z = P H P restricted to the sector's internal indexing
/// (dimension = number of member states).
pub fn zeno_hamiltonian(h: &SparseOperator, sector: &ZenoSector) -> Result<SparseOperator> {
    if h.dim() != sector.projector.dim() {
        return Err(Error::DimensionMismatch(h.dim(), sector.projector.dim()));
    }
    let mut pos = HashMap::with_capacity(sector.members.len());
    for (internal, &parent) in sector.members.iter().enumerate() {
        pos.insert(parent, internal);
    }
    let triplets = h.entries().iter().filter_map(|&(r, c, v)| {
        match (pos.get(&r), pos.get(&c)) {
            (Some(&ri), Some(&ci)) => Some((ri, ci, v)),
            _ => None,
        }
    });
    SparseOperator::from_triplets(
        sector.members.len(),
        format!("{}|zeno[{}]", h.basis_tag(), sector.members[0]),
        triplets.collect(),
    )
}

/// Embed a sector-internal vector back into the parent basis.
pub fn embed(sector: &ZenoSector, parent_dim: usize, internal: &[C64]) -> Result<Vec<C64>> {
    if internal.len() != sector.members.len() {
        return Err(Error::DimensionMismatch(
            internal.len(),
            sector.members.len(),
        ));
    }
    let mut out = vec![C64::new(0.0, 0.0); parent_dim];
    for (&parent, &v) in sector.members.iter().zip(internal) {
        out[parent] = v;
    }
    Ok(out)
}

/// One surviving matrix element of a projected Hamiltonian, reported in
/// occupation-vector form.
#[derive(Debug, Clone, Serialize)]
pub struct SurvivingTerm {
    pub from: Vec<u32>,
    pub to: Vec<u32>,
    #[serde(with = "complex_serde")]
    pub amplitude: C64,
}

/// Which labeled Hamiltonian terms survive projection onto the sector:
/// survives iff `P T P` has any nonzero entry.
pub fn surviving_terms_report(
    terms: &[(String, SparseOperator)],
    sector: &ZenoSector,
) -> Result<Vec<(String, bool)>> {
    terms
        .iter()
        .map(|(label, op)| {
            let projected = sector
                .projector
                .multiply(op)?
                .multiply(&sector.projector)?;
            Ok((label.clone(), !projected.is_zero(0.0)))
        })
        .collect()
}

/// All off-diagonal matrix elements of H that survive projection onto the
/// sector, as transitions between occupation vectors.
pub fn surviving_transitions(
    basis: &FockBasis,
    h: &SparseOperator,
    sector: &ZenoSector,
) -> Result<Vec<SurvivingTerm>> {
    let hz = zeno_hamiltonian(h, sector)?;
    let mut report = Vec::new();
    for &(r, c, v) in hz.entries() {
        if r == c {
            continue;
        }
        report.push(SurvivingTerm {
            from: basis.unrank(sector.members[c])?.to_vec(),
            to: basis.unrank(sector.members[r])?.to_vec(),
            amplitude: v,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{self, chain_tunneling, ModelSpec};
    use crate::ops;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn total_number_measurement_sectors() {
        // uniform coefficients: sectors are the total-number sectors
        let basis = FockBasis::build(3, 2, None).unwrap();
        let meas = MeasurementSpec::new(vec![c(1.0); 3], c(1.0), 1.0);
        let secs = sectors(&basis, &meas).unwrap();
        assert_eq!(secs.len(), 7); // N = 0..6
        let total: usize = secs.iter().map(|s| s.members.len()).sum();
        assert_eq!(total, basis.len());
        for s in &secs {
            let n = s.eigenvalue.re.round() as u32;
            for &m in &s.members {
                let state = basis.unrank(m).unwrap();
                assert_eq!(state.iter().sum::<u32>(), n);
            }
        }
    }

    #[test]
    fn alternating_pattern_sectors() {
        // coefficients (+1, -1, +1, ...) group by population imbalance
        let basis = FockBasis::build(2, 2, Some(2)).unwrap();
        let meas = MeasurementSpec::new(vec![c(1.0), c(-1.0)], c(0.7), 1.0);
        let secs = sectors(&basis, &meas).unwrap();
        // states (0,2), (1,1), (2,0) -> imbalances -2, 0, 2
        assert_eq!(secs.len(), 3);
        assert!(secs.iter().all(|s| s.members.len() == 1));
    }

    #[test]
    fn projectors_are_orthogonal_idempotent_complete() {
        let basis = FockBasis::build(3, 2, Some(3)).unwrap();
        let meas = MeasurementSpec::new(vec![c(0.0), c(1.0), c(2.0)], c(1.0), 0.5);
        let secs = sectors(&basis, &meas).unwrap();
        let mut sum = SparseOperator::zero(basis.len(), basis.tag());
        for (a, sa) in secs.iter().enumerate() {
            let p2 = sa.projector.multiply(&sa.projector).unwrap();
            assert!(p2.sub(&sa.projector).unwrap().is_zero(0.0));
            for (b, sb) in secs.iter().enumerate() {
                if a != b {
                    assert!(sa
                        .projector
                        .multiply(&sb.projector)
                        .unwrap()
                        .is_zero(0.0));
                }
            }
            sum = sum.add(&sa.projector).unwrap();
        }
        assert!(sum
            .sub(&SparseOperator::identity(basis.len(), basis.tag()))
            .unwrap()
            .is_zero(0.0));
    }

    #[test]
    fn near_degenerate_amplitudes_merge() {
        let basis = FockBasis::build(2, 1, None).unwrap();
        let meas = MeasurementSpec::new(vec![c(0.5), c(0.5 + 1e-12)], c(1.0), 1.0);
        let secs = sectors(&basis, &meas).unwrap();
        // (0,1) and (1,0) differ by 1e-12 < eps: same sector
        assert_eq!(secs.len(), 3);
    }

    #[test]
    fn zeno_hamiltonian_blocks_inter_sector_tunnelling() {
        // 4-site chain, measurement distinguishes odd/even sites
        let basis = FockBasis::build(4, 2, Some(2)).unwrap();
        let spec = ModelSpec::bare(chain_tunneling(4, 1.0), 0.5);
        let h = model::build_effective_hamiltonian(&basis, &spec).unwrap();
        let meas =
            MeasurementSpec::new(vec![c(0.0), c(1.0), c(0.0), c(1.0)], c(1.0), 1.0);
        let secs = sectors(&basis, &meas).unwrap();
        for sector in &secs {
            let hz = zeno_hamiltonian(&h, sector).unwrap();
            // every surviving element stays within the sector's amplitude
            for &(r, _c, _) in hz.entries() {
                assert!(sector.members.get(r).is_some());
            }
            // P H P == embedded hz
            let p = &sector.projector;
            let php = p.multiply(&h).unwrap().multiply(p).unwrap();
            let mut dense_ref = nalgebra::DMatrix::from_element(
                basis.len(),
                basis.len(),
                C64::new(0.0, 0.0),
            );
            for &(r, cc, v) in hz.entries() {
                dense_ref[(sector.members[r], sector.members[cc])] = v;
            }
            assert!((php.to_dense() - dense_ref).camax() < 1e-14);
        }
    }

    #[test]
    fn embed_roundtrip() {
        let basis = FockBasis::build(2, 2, Some(2)).unwrap();
        let meas = MeasurementSpec::new(vec![c(1.0), c(1.0)], c(1.0), 1.0);
        let secs = sectors(&basis, &meas).unwrap();
        assert_eq!(secs.len(), 1);
        let v = vec![c(0.5), c(0.5), c(0.5)];
        let emb = embed(&secs[0], basis.len(), &v).unwrap();
        assert_eq!(emb.len(), 3);
        assert_eq!(emb[1], c(0.5));
    }

    #[test]
    fn surviving_terms_match_brute_force() {
        let basis = FockBasis::build(3, 3, Some(3)).unwrap();
        let spec = ModelSpec::bare(chain_tunneling(3, 1.0), 0.0);
        let h = model::build_effective_hamiltonian(&basis, &spec).unwrap();
        // measure only site 1 occupation
        let meas = MeasurementSpec::new(vec![c(0.0), c(1.0), c(0.0)], c(1.0), 1.0);
        let secs = sectors(&basis, &meas).unwrap();
        for sector in &secs {
            let report = surviving_transitions(&basis, &h, sector).unwrap();
            // brute force: scan all pairs within the sector
            let mut expect = 0usize;
            for &a in &sector.members {
                for &b in &sector.members {
                    if a != b {
                        let mut eb = vec![C64::new(0.0, 0.0); basis.len()];
                        eb[b] = c(1.0);
                        let hb = h.apply(&eb);
                        if hb[a].norm() > 0.0 {
                            expect += 1;
                        }
                    }
                }
            }
            assert_eq!(report.len(), expect);
        }
    }

    #[test]
    fn mismatched_coefficients_rejected() {
        let basis = FockBasis::build(3, 1, None).unwrap();
        let meas = MeasurementSpec::new(vec![c(1.0)], c(1.0), 1.0);
        assert!(sectors(&basis, &meas).is_err());
    }

    #[test]
    fn hardcore_diagonal_number_measurement() {
        // occupation-resolving measurement on hard-core doublet example
        let basis = FockBasis::build(3, 1, Some(2)).unwrap();
        let meas = MeasurementSpec::new(vec![c(1.0), c(2.0), c(4.0)], c(1.0), 1.0);
        let secs = sectors(&basis, &meas).unwrap();
        assert_eq!(secs.len(), basis.len()); // all amplitudes distinct
        let spec = ModelSpec::bare(chain_tunneling(3, 1.0), 0.0);
        let h = model::build_effective_hamiltonian(&basis, &spec).unwrap();
        for s in &secs {
            let hz = zeno_hamiltonian(&h, s).unwrap();
            assert!(hz.entries().iter().all(|&(r, cc, _)| r == cc));
        }
    }

    #[test]
    fn number_operator_commutes_with_uniform_projectors() {
        let basis = FockBasis::build(2, 3, None).unwrap();
        let meas = MeasurementSpec::new(vec![c(1.0), c(1.0)], c(2.0), 1.0);
        let secs = sectors(&basis, &meas).unwrap();
        let n0 = ops::number(&basis, 0).unwrap();
        for s in &secs {
            let pn = s.projector.multiply(&n0).unwrap();
            let np = n0.multiply(&s.projector).unwrap();
            assert!(pn.sub(&np).unwrap().is_zero(0.0));
        }
    }
}
