//! Sparse complex operator algebra over a [`FockBasis`], and second-quantized
//! builders for hopping, number, pair and light-matter coupling operators.
//!
//! Transitions that would violate the occupation cap or leave the number
//! sector are silently dropped (truncated), matching standard capped-ED
//! practice. Callers relying on untruncated pair processes must build on a
//! sector-free basis with a sufficiently large cap.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::geometry::CouplingTensor;

/// Complex sparse matrix acting on a [`FockBasis`].
///
/// Entries are kept sorted row-major with duplicate coordinates merged and
/// exact zeros pruned; `basis_tag` guards against mixing bases.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    basis_tag: String,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOperator {
    /// Build from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(
        dim: usize,
        basis_tag: impl Into<String>,
        triplets: Vec<(usize, usize, C64)>,
    ) -> Result<Self> {
        let mut entries = triplets;
        for &(r, c, _) in &entries {
            if r >= dim || c >= dim {
                return Err(Error::IndexOutOfRange {
                    index: r.max(c),
                    dim,
                });
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != C64::new(0.0, 0.0));
        Ok(Self {
            dim,
            basis_tag: basis_tag.into(),
            entries: merged,
        })
    }

    pub fn zero(dim: usize, basis_tag: impl Into<String>) -> Self {
        Self {
            dim,
            basis_tag: basis_tag.into(),
            entries: Vec::new(),
        }
    }

    pub fn identity(dim: usize, basis_tag: impl Into<String>) -> Self {
        Self {
            dim,
            basis_tag: basis_tag.into(),
            entries: (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_tag(&self) -> &str {
        &self.basis_tag
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.basis_tag != other.basis_tag {
            return Err(Error::BasisMismatch(
                self.basis_tag.clone(),
                other.basis_tag.clone(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut triplets = self.entries.clone();
        triplets.extend_from_slice(&other.entries);
        Self::from_triplets(self.dim, self.basis_tag.clone(), triplets)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> Self {
        let entries = if factor == C64::new(0.0, 0.0) {
            Vec::new()
        } else {
            self.entries
                .iter()
                .map(|&(r, c, v)| (r, c, v * factor))
                .collect()
        };
        Self {
            dim: self.dim,
            basis_tag: self.basis_tag.clone(),
            entries,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let triplets = self
            .entries
            .iter()
            .map(|&(r, c, v)| (c, r, v.conj()))
            .collect();
        Self::from_triplets(self.dim, self.basis_tag.clone(), triplets)
            .expect("adjoint preserves index bounds")
    }

    /// Sparse matrix product `self * other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        // row start offsets for `other`
        let mut row_start = vec![other.entries.len(); other.dim + 1];
        for (pos, &(r, _, _)) in other.entries.iter().enumerate().rev() {
            row_start[r] = pos;
        }
        for r in (0..other.dim).rev() {
            if row_start[r] > row_start[r + 1] {
                row_start[r] = row_start[r + 1];
            }
        }
        let mut triplets = Vec::new();
        let mut acc: HashMap<usize, C64> = HashMap::new();
        let mut i = 0;
        while i < self.entries.len() {
            let row = self.entries[i].0;
            acc.clear();
            while i < self.entries.len() && self.entries[i].0 == row {
                let (_, k, a) = self.entries[i];
                for &(_, j, b) in &other.entries[row_start[k]..row_start[k + 1]] {
                    *acc.entry(j).or_insert(C64::new(0.0, 0.0)) += a * b;
                }
                i += 1;
            }
            triplets.extend(acc.iter().map(|(&j, &v)| (row, j, v)));
        }
        Self::from_triplets(self.dim, self.basis_tag.clone(), triplets)
    }

    /// Apply to a state vector.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// Largest entry magnitude of `A - A^dag`; zero for Hermitian operators.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.sub(&self.adjoint())
            .expect("same basis")
            .max_abs_entry()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries
            .iter()
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs_entry() <= tol
    }

    /// Expectation value `<x| A |x>`.
    pub fn expectation(&self, x: &[C64]) -> C64 {
        let ax = self.apply(x);
        x.iter()
            .zip(ax.iter())
            .map(|(xi, yi)| xi.conj() * yi)
            .sum()
    }
}

fn check_site(basis: &FockBasis, site: usize) -> Result<()> {
    if site >= basis.num_sites() {
        return Err(Error::InvalidSite {
            site,
            num_sites: basis.num_sites(),
        });
    }
    Ok(())
}

/// Hopping operator `b_i^dag b_j`; for `i == j` this is the number operator.
///
/// Matrix element sqrt((n_i + 1) n_j) on the shifted configuration;
/// cap- or sector-violating targets are dropped.
pub fn hop(basis: &FockBasis, i: usize, j: usize) -> Result<SparseOperator> {
    check_site(basis, i)?;
    check_site(basis, j)?;
    let mut triplets = Vec::new();
    for (col, state) in basis.states().iter().enumerate() {
        if i == j {
            if state[i] > 0 {
                triplets.push((col, col, C64::new(state[i] as f64, 0.0)));
            }
            continue;
        }
        if state[j] == 0 || state[i] + 1 > basis.max_per_site() {
            continue;
        }
        let mut target = state.clone();
        target[j] -= 1;
        target[i] += 1;
        if let Some(row) = basis.try_rank(&target) {
            let amp = (((state[i] + 1) * state[j]) as f64).sqrt();
            triplets.push((row, col, C64::new(amp, 0.0)));
        }
    }
    SparseOperator::from_triplets(basis.len(), basis.tag(), triplets)
}

/// Number operator `n_i`.
pub fn number(basis: &FockBasis, i: usize) -> Result<SparseOperator> {
    hop(basis, i, i)
}

/// Annihilation operator `b_i` (changes particle number; only meaningful on a
/// sector-free basis, where the top rung is truncated by the cap).
pub fn annihilate(basis: &FockBasis, i: usize) -> Result<SparseOperator> {
    check_site(basis, i)?;
    if basis.total_number().is_some() {
        return Err(Error::SectorRestrictedBasis);
    }
    let mut triplets = Vec::new();
    for (col, state) in basis.states().iter().enumerate() {
        if state[i] == 0 {
            continue;
        }
        let mut target = state.clone();
        target[i] -= 1;
        if let Some(row) = basis.try_rank(&target) {
            triplets.push((row, col, C64::new((state[i] as f64).sqrt(), 0.0)));
        }
    }
    SparseOperator::from_triplets(basis.len(), basis.tag(), triplets)
}

/// Creation operator `b_i^dag`.
pub fn create(basis: &FockBasis, i: usize) -> Result<SparseOperator> {
    Ok(annihilate(basis, i)?.adjoint())
}

/// Pair creation `b_i^dag b_j^dag`; element sqrt((n_i+1)(n_j+1)) for
/// `i != j`, sqrt((n_i+2)(n_i+1)) for `i == j`. Requires a sector-free basis.
pub fn pair_create(basis: &FockBasis, i: usize, j: usize) -> Result<SparseOperator> {
    check_site(basis, i)?;
    check_site(basis, j)?;
    if basis.total_number().is_some() {
        return Err(Error::SectorRestrictedBasis);
    }
    let mut triplets = Vec::new();
    for (col, state) in basis.states().iter().enumerate() {
        let mut target = state.clone();
        let amp = if i == j {
            if state[i] + 2 > basis.max_per_site() {
                continue;
            }
            target[i] += 2;
            (((state[i] + 2) * (state[i] + 1)) as f64).sqrt()
        } else {
            if state[i] + 1 > basis.max_per_site() || state[j] + 1 > basis.max_per_site() {
                continue;
            }
            target[i] += 1;
            target[j] += 1;
            (((state[i] + 1) * (state[j] + 1)) as f64).sqrt()
        };
        if let Some(row) = basis.try_rank(&target) {
            triplets.push((row, col, C64::new(amp, 0.0)));
        }
    }
    SparseOperator::from_triplets(basis.len(), basis.tag(), triplets)
}

/// Pair annihilation `b_i b_j`, the adjoint of [`pair_create`].
pub fn pair_annihilate(basis: &FockBasis, i: usize, j: usize) -> Result<SparseOperator> {
    Ok(pair_create(basis, i, j)?.adjoint())
}

/// Light-matter coupling operator `J_mn = sum_ij J_ij^mn b_i^dag b_j` from a
/// coupling tensor. With a Hermitian-symmetric tensor the adjoint of the
/// result equals the operator of the swapped mode pair.
pub fn coupling_operator(basis: &FockBasis, tensor: &CouplingTensor) -> Result<SparseOperator> {
    if tensor.num_sites() != basis.num_sites() {
        return Err(Error::TensorSiteMismatch {
            tensor_sites: tensor.num_sites(),
            basis_sites: basis.num_sites(),
        });
    }
    let mut acc = SparseOperator::zero(basis.len(), basis.tag());
    for ((i, j), value) in tensor.canonical_entries() {
        if value == C64::new(0.0, 0.0) {
            continue;
        }
        let term = if i == j {
            number(basis, i)?.scale(value)
        } else {
            // J_ij = J_ji: both hop directions carry the same coefficient
            hop(basis, i, j)?.add(&hop(basis, j, i)?)?.scale(value)
        };
        acc = acc.add(&term)?;
    }
    Ok(acc)
}
