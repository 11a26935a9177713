//! Bosonic Fock bases over a finite lattice with per-site occupation caps and
//! optional conserved-total-number sectors.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Enumerated occupation-number basis for `num_sites` bosonic modes.
///
/// States are stored in strict lexicographic order on `(n_1, ..., n_M)` so
/// indices are reproducible across runs. `index_of` is the exact inverse of
/// position-in-`states`.
#[derive(Debug, Clone)]
pub struct FockBasis {
    num_sites: usize,
    max_per_site: u32,
    total_number: Option<u32>,
    states: Vec<Vec<u32>>,
    index_of: HashMap<Vec<u32>, usize>,
}

impl FockBasis {
    /// Enumerate all occupation vectors with `0 <= n_i <= n_max`, optionally
    /// restricted to the sector `sum n_i = N`.
    pub fn build(num_sites: usize, max_per_site: u32, total_number: Option<u32>) -> Result<Self> {
        assert!(num_sites >= 1, "need at least one site");
        if let Some(n) = total_number {
            let capacity = num_sites as u32 * max_per_site;
            if n > capacity {
                return Err(Error::InfeasibleSector {
                    total: n as usize,
                    capacity: capacity as usize,
                });
            }
        }
        let mut states = Vec::new();
        let mut current = vec![0u32; num_sites];
        enumerate(&mut states, &mut current, 0, max_per_site, total_number);
        let index_of = states
            .iter()
            .enumerate()
            .map(|(idx, s)| (s.clone(), idx))
            .collect();
        Ok(Self {
            num_sites,
            max_per_site,
            total_number,
            states,
            index_of,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn max_per_site(&self) -> u32 {
        self.max_per_site
    }

    pub fn total_number(&self) -> Option<u32> {
        self.total_number
    }

    /// Basis dimension.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    /// Index of an occupation vector.
    pub fn rank(&self, occupation: &[u32]) -> Result<usize> {
        self.index_of
            .get(occupation)
            .copied()
            .ok_or_else(|| Error::UnknownState(occupation.to_vec()))
    }

    /// Occupation vector at a given index.
    pub fn unrank(&self, index: usize) -> Result<&[u32]> {
        self.states
            .get(index)
            .map(|s| s.as_slice())
            .ok_or(Error::IndexOutOfRange {
                index,
                dim: self.states.len(),
            })
    }

    /// Index lookup for a vector already known to be in the basis; `None`
    /// when the vector fell outside the cap or sector (truncated transition).
    pub fn try_rank(&self, occupation: &[u32]) -> Option<usize> {
        self.index_of.get(occupation).copied()
    }

    /// Identifier used to guard against mixing operators across bases.
    pub fn tag(&self) -> String {
        match self.total_number {
            Some(n) => format!("fock(M={},cap={},N={})", self.num_sites, self.max_per_site, n),
            None => format!("fock(M={},cap={})", self.num_sites, self.max_per_site),
        }
    }
}

impl fmt::Display for FockBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.tag(), self.len())
    }
}

fn enumerate(
    states: &mut Vec<Vec<u32>>,
    current: &mut Vec<u32>,
    site: usize,
    cap: u32,
    total: Option<u32>,
) {
    if site == current.len() {
        if total.map_or(true, |n| current.iter().sum::<u32>() == n) {
            states.push(current.clone());
        }
        return;
    }
    let used: u32 = current[..site].iter().sum();
    let remaining_sites = (current.len() - site - 1) as u32;
    for n in 0..=cap {
        if let Some(target) = total {
            if used + n > target {
                break;
            }
            // remaining sites must be able to absorb the rest
            if target - used - n > remaining_sites * cap {
                continue;
            }
        }
        current[site] = n;
        enumerate(states, current, site + 1, cap, total);
    }
    current[site] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut acc = 1usize;
        for i in 0..k.min(n - k) {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn two_sites_two_atoms() {
        let b = FockBasis::build(2, 2, Some(2)).unwrap();
        assert_eq!(b.states(), &[vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(b.len(), 3);
        assert_eq!(b.rank(&[1, 1]).unwrap(), 1);
        assert_eq!(b.rank(&[0, 2]).unwrap(), 0);
    }

    #[test]
    fn stars_and_bars_size() {
        let b = FockBasis::build(4, 3, Some(3)).unwrap();
        assert_eq!(b.len(), 20); // C(6, 3)
    }

    #[test]
    fn hardcore_three_sites() {
        let b = FockBasis::build(3, 1, Some(2)).unwrap();
        assert_eq!(
            b.states(),
            &[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
        );
    }

    #[test]
    fn infeasible_sector_is_an_error() {
        let err = FockBasis::build(2, 1, Some(3)).unwrap_err();
        assert!(matches!(err, Error::InfeasibleSector { .. }));
    }

    #[test]
    fn out_of_sector_lookups_fail() {
        let b = FockBasis::build(2, 2, Some(2)).unwrap();
        assert!(b.rank(&[2, 2]).is_err());
        assert!(b.unrank(3).is_err());
    }

    #[test]
    fn unrestricted_basis_size() {
        let b = FockBasis::build(3, 2, None).unwrap();
        assert_eq!(b.len(), 27);
    }

    proptest! {
        #[test]
        fn rank_unrank_roundtrip(m in 1usize..5, cap in 0u32..4, pick_sector in any::<bool>()) {
            let total = if pick_sector { Some((m as u32 * cap) / 2) } else { None };
            let b = FockBasis::build(m, cap, total).unwrap();
            for (idx, s) in b.states().iter().enumerate() {
                prop_assert_eq!(b.rank(s).unwrap(), idx);
                prop_assert_eq!(b.unrank(idx).unwrap(), s.as_slice());
            }
        }

        #[test]
        fn sector_size_matches_stars_and_bars(m in 1usize..6, n in 0u32..5) {
            // cap >= N so the cap never binds
            let b = FockBasis::build(m, n, Some(n)).unwrap();
            prop_assert_eq!(b.len(), binomial(n as usize + m - 1, m - 1));
        }

        #[test]
        fn lexicographic_and_deterministic(m in 1usize..5, cap in 0u32..4) {
            let b = FockBasis::build(m, cap, None).unwrap();
            for w in b.states().windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            let b2 = FockBasis::build(m, cap, None).unwrap();
            prop_assert_eq!(b.states(), b2.states());
        }
    }
}
