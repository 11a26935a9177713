//! Eigensolvers (dense and Lanczos), a scaled-and-squared matrix exponential,
//! and the generalised-Dicke phase-diagram sweep with boundary extraction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model;
use crate::ops::{self, SparseOperator};

/// Result of a ground-state computation.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub energy: f64,
    pub state: Vec<C64>,
    /// `||H v - E v||_2`.
    pub residual: f64,
    /// Set when the lowest gap is below 1e-8: the returned state is an
    /// arbitrary member of the (near-)degenerate ground manifold.
    pub degenerate: bool,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Auto,
    Dense,
    Lanczos,
}

const DENSE_LIMIT: usize = 2000;
const RESIDUAL_FACTOR: f64 = 1e-10;

fn check_hermitian(h: &SparseOperator) -> Result<()> {
    let dev = h.hermiticity_deviation();
    if dev > 1e-12 * h.max_abs_entry().max(1.0) {
        return Err(Error::NonHermitianInput(dev));
    }
    Ok(())
}

/// Full spectrum of a Hermitian operator, eigenvalues ascending with matching
/// eigenvector columns.
pub fn dense_spectrum(h: &SparseOperator) -> Result<(Vec<f64>, DMatrix<C64>)> {
    check_hermitian(h)?;
    let dense = h.to_dense();
    // enforce exact Hermiticity so the symmetric eigensolver is applicable
    let sym = (&dense + dense.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::from_element(h.dim(), h.dim(), C64::new(0.0, 0.0));
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// Lowest eigenpair by Lanczos with full reorthogonalization. Restarts from
/// the current Ritz vector when the Krylov space is exhausted without
/// reaching the residual target.
pub fn lanczos_ground(h: &SparseOperator, max_iters: usize, restarts: usize) -> Result<SpectrumResult> {
    check_hermitian(h)?;
    let dim = h.dim();
    if dim == 0 {
        return Err(Error::Invalid("empty operator".into()));
    }
    if dim == 1 {
        let e = h.to_dense()[(0, 0)].re;
        return Ok(SpectrumResult {
            energy: e,
            state: vec![C64::new(1.0, 0.0)],
            residual: 0.0,
            degenerate: false,
            method: Method::Lanczos,
        });
    }

    // deterministic full-support start vector
    let mut v0: Vec<C64> = (0..dim)
        .map(|i| C64::new(1.0, 0.3 * ((i % 7) as f64 - 3.0)))
        .collect();
    normalize(&mut v0);

    let mut best: Option<SpectrumResult> = None;
    for _ in 0..restarts {
        let (energy, state) = lanczos_pass(h, &v0, max_iters.min(dim), RESIDUAL_FACTOR)?;
        let residual = residual_norm(h, &state, energy);
        let tol = RESIDUAL_FACTOR * energy.abs().max(1.0);
        let result = SpectrumResult {
            energy,
            state: state.clone(),
            residual,
            degenerate: false,
            method: Method::Lanczos,
        };
        let improved = best
            .as_ref()
            .map_or(true, |b| result.residual < b.residual);
        if improved {
            best = Some(result);
        }
        if best.as_ref().unwrap().residual <= tol {
            return Ok(best.unwrap());
        }
        v0 = state;
    }
    Err(Error::LanczosNoConvergence {
        restarts,
        iters: max_iters,
    })
}

fn tridiag_lowest(alphas: &[f64], betas: &[f64]) -> (f64, DVector<f64>) {
    let k = alphas.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut imin = 0;
    for i in 1..k {
        if eig.eigenvalues[i] < eig.eigenvalues[imin] {
            imin = i;
        }
    }
    (
        eig.eigenvalues[imin],
        eig.eigenvectors.column(imin).into_owned(),
    )
}

fn lanczos_pass(
    h: &SparseOperator,
    v0: &[C64],
    m: usize,
    residual_factor: f64,
) -> Result<(f64, Vec<C64>)> {
    let dim = h.dim();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m);
    let mut alphas: Vec<f64> = Vec::with_capacity(m);
    let mut betas: Vec<f64> = Vec::with_capacity(m);

    let mut v = v0.to_vec();
    normalize(&mut v);
    basis.push(v.clone());

    for j in 0..m {
        let mut w = h.apply(&basis[j]);
        let alpha = dot(&basis[j], &w).re;
        alphas.push(alpha);
        // full reorthogonalization, twice for stability
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let beta = norm(&w);
        if beta < 1e-14 || j + 1 == m || basis.len() == dim {
            break;
        }
        // Ritz residual bound beta * |last Ritz coefficient| lets us stop
        // long before the iteration cap on easy spectra
        if (j + 1) % 8 == 0 {
            let (theta, s) = tridiag_lowest(&alphas, &betas);
            let bound = beta * s[s.len() - 1].abs();
            if bound <= 0.1 * residual_factor * theta.abs().max(1.0) {
                break;
            }
        }
        betas.push(beta);
        for wi in w.iter_mut() {
            *wi /= beta;
        }
        basis.push(w);
    }

    let (energy, coeffs) = tridiag_lowest(&alphas, &betas);
    let mut state = vec![C64::new(0.0, 0.0); dim];
    for (j, q) in basis.iter().enumerate() {
        let c = C64::new(coeffs[j], 0.0);
        for (si, qi) in state.iter_mut().zip(q) {
            *si += c * qi;
        }
    }
    normalize(&mut state);
    Ok((energy, state))
}

/// Ground state with automatic method routing (dense up to dimension 2000,
/// Lanczos above), residual verification, and near-degeneracy detection.
pub fn ground_state(h: &SparseOperator, method: Method) -> Result<SpectrumResult> {
    let use_dense = match method {
        Method::Dense => true,
        Method::Lanczos => false,
        Method::Auto => h.dim() <= DENSE_LIMIT,
    };
    let mut result = if use_dense {
        let (values, vectors) = dense_spectrum(h)?;
        let mut energy = values[0];
        let mut state: Vec<C64> = vectors.column(0).iter().copied().collect();
        // the QR pass alone can leave the residual above the contract bound
        // on larger matrices; polish the ground pair by inverse iteration
        refine_eigenpair(h, &mut energy, &mut state);
        let residual = residual_norm(h, &state, energy);
        let degenerate = values.len() > 1 && values[1] - values[0] < 1e-8;
        SpectrumResult {
            energy,
            state,
            residual,
            degenerate,
            method: Method::Dense,
        }
    } else {
        let mut r = lanczos_ground(h, 300, 10)?;
        // estimate the gap from a second pass deflated against the ground state
        r.degenerate = lanczos_gap_below(h, &r, 1e-8)?;
        r
    };
    let tol = RESIDUAL_FACTOR * result.energy.abs().max(1.0);
    if result.residual > tol {
        return Err(Error::Invalid(format!(
            "eigensolver residual {:.3e} exceeds bound {:.3e}",
            result.residual, tol
        )));
    }
    // fix the overall phase: largest component real positive
    fix_phase(&mut result.state);
    Ok(result)
}

/// Inverse-iteration polish of an approximate eigenpair (dense path only).
fn refine_eigenpair(h: &SparseOperator, energy: &mut f64, state: &mut Vec<C64>) {
    let dense = h.to_dense();
    let n = dense.nrows();
    let scale = h.max_abs_entry().max(1.0);
    for _ in 0..4 {
        let target = RESIDUAL_FACTOR * energy.abs().max(1.0);
        if residual_norm(h, state, *energy) <= 0.1 * target {
            break;
        }
        // small shift off the eigenvalue keeps the LU well defined
        let sigma = C64::new(*energy + 1e-13 * scale, 0.0);
        let mut shifted = dense.clone();
        for i in 0..n {
            shifted[(i, i)] -= sigma;
        }
        let lu = shifted.full_piv_lu();
        let rhs = DVector::from_column_slice(state);
        match lu.solve(&rhs) {
            Some(x) => {
                let mut next: Vec<C64> = x.iter().copied().collect();
                normalize(&mut next);
                let hv = h.apply(&next);
                let rq = dot(&next, &hv).re;
                *state = next;
                *energy = rq;
            }
            None => break,
        }
    }
}

fn lanczos_gap_below(h: &SparseOperator, ground: &SpectrumResult, gap_tol: f64) -> Result<bool> {
    // shift-deflate: H' = H + shift |g><g| pushes the ground state up
    let shift = 10.0 * (h.max_abs_entry().max(1.0));
    let dim = h.dim();
    let g = DVector::from_column_slice(&ground.state);
    let mut v0: Vec<C64> = (0..dim)
        .map(|i| C64::new(0.7, 0.2 * ((i % 5) as f64 - 2.0)))
        .collect();
    // orthogonalize against the ground state
    let overlap = dot(&ground.state, &v0);
    for (vi, gi) in v0.iter_mut().zip(g.iter()) {
        *vi -= overlap * gi;
    }
    normalize(&mut v0);

    // run Lanczos on the deflated operator applied functionally
    let apply = |x: &[C64]| -> Vec<C64> {
        let mut y = h.apply(x);
        let c = dot(&ground.state, x) * shift;
        for (yi, gi) in y.iter_mut().zip(&ground.state) {
            *yi += c * gi;
        }
        y
    };
    let e1 = lanczos_lowest_functional(&apply, &v0, 300.min(dim))?;
    Ok(e1 - ground.energy < gap_tol)
}

fn lanczos_lowest_functional(
    apply: &dyn Fn(&[C64]) -> Vec<C64>,
    v0: &[C64],
    m: usize,
) -> Result<f64> {
    let mut basis: Vec<Vec<C64>> = vec![v0.to_vec()];
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    for j in 0..m {
        let mut w = apply(&basis[j]);
        alphas.push(dot(&basis[j], &w).re);
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let beta = norm(&w);
        if beta < 1e-14 || j + 1 == m {
            break;
        }
        // the gap test only needs the first excited level to ~1e-9
        if (j + 1) % 8 == 0 {
            let (theta, s) = tridiag_lowest(&alphas, &betas);
            if beta * s[s.len() - 1].abs() <= 1e-10 * theta.abs().max(1.0) {
                break;
            }
        }
        betas.push(beta);
        for wi in w.iter_mut() {
            *wi /= beta;
        }
        basis.push(w);
    }
    Ok(tridiag_lowest(&alphas, &betas).0)
}

/// Expectation value `<v|A|v>` (state assumed normalized).
pub fn expectation(a: &SparseOperator, state: &[C64]) -> C64 {
    a.expectation(state)
}

/// `exp(A)` by scaling-and-squaring on a truncated Taylor series.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let norm1: f64 = (0..a.ncols())
        .map(|j| a.column(j).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * C64::new(0.5f64.powi(s), 0.0);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=20 {
        term = (&term * &scaled) / C64::new(k as f64, 0.0);
        result += &term;
        if term.camax() < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [C64]) {
    let n = norm(v);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

fn residual_norm(h: &SparseOperator, state: &[C64], energy: f64) -> f64 {
    let hv = h.apply(state);
    hv.iter()
        .zip(state)
        .map(|(a, b)| (a - b * energy).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn fix_phase(state: &mut [C64]) {
    if let Some(max) = state
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
    {
        if max.norm() > 0.0 {
            let phase = max / max.norm();
            for c in state.iter_mut() {
                *c /= phase;
            }
        }
    }
}

/// One grid point of the generalised-Dicke sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub lambda_1: f64,
    pub lambda_2: f64,
    pub energy: f64,
    /// Ground-state expectations of the two mode occupations.
    pub n1: f64,
    pub n2: f64,
    pub degenerate: bool,
}

/// Phase-diagram sweep of the two-mode generalised Dicke model over a
/// (lambda_1, lambda_2) grid at fixed mu, with the normal/superradiant
/// boundary extracted as the `<n_1> = 0.5` level set.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub mu: (f64, f64),
    pub cap: u32,
    pub lambda_1: Vec<f64>,
    pub lambda_2: Vec<f64>,
    /// Row-major `[i * len(lambda_2) + j]` over (lambda_1[i], lambda_2[j]).
    pub points: Vec<SweepPoint>,
    /// Interpolated boundary segments in the (lambda_1, lambda_2) plane.
    pub boundary: Vec<((f64, f64), (f64, f64))>,
}

/// Run the sweep in parallel. Grid points are independent; results are
/// emitted in deterministic row-major order regardless of thread count.
pub fn dicke_phase_sweep(
    mu: (f64, f64),
    lambda_1: &[f64],
    lambda_2: &[f64],
    cap: u32,
) -> Result<SweepResult> {
    let coords: Vec<(f64, f64)> = lambda_1
        .iter()
        .flat_map(|&l1| lambda_2.iter().map(move |&l2| (l1, l2)))
        .collect();
    let points: Vec<SweepPoint> = coords
        .par_iter()
        .map(|&(l1, l2)| -> Result<SweepPoint> {
            let (basis, h) = model::preset_generalised_dicke(
                mu,
                C64::new(l1, 0.0),
                C64::new(l2, 0.0),
                cap,
            )?;
            // Lanczos first: at this dimension it is an order of magnitude
            // faster than the dense QR pass and the fallback keeps the rare
            // hard points (near-degenerate boundary cells) correct.
            let gs = ground_state(&h, Method::Lanczos)
                .or_else(|_| ground_state(&h, Method::Dense))?;
            let n1 = expectation(&ops::number(&basis, 0)?, &gs.state).re;
            let n2 = expectation(&ops::number(&basis, 1)?, &gs.state).re;
            Ok(SweepPoint {
                lambda_1: l1,
                lambda_2: l2,
                energy: gs.energy,
                n1,
                n2,
                degenerate: gs.degenerate,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n1_grid: Vec<f64> = points.iter().map(|p| p.n1).collect();
    let boundary = level_set_segments(lambda_1, lambda_2, &n1_grid, 0.5);
    Ok(SweepResult {
        mu,
        cap,
        lambda_1: lambda_1.to_vec(),
        lambda_2: lambda_2.to_vec(),
        points,
        boundary,
    })
}

/// Marching-squares extraction of the `f = level` contour from a row-major
/// grid `f[i * ny + j]` over `xs[i]`, `ys[j]`.
pub fn level_set_segments(
    xs: &[f64],
    ys: &[f64],
    f: &[f64],
    level: f64,
) -> Vec<((f64, f64), (f64, f64))> {
    let (nx, ny) = (xs.len(), ys.len());
    let at = |i: usize, j: usize| f[i * ny + j] - level;
    let interp = |a: f64, b: f64, fa: f64, fb: f64| {
        if (fb - fa).abs() < 1e-300 {
            0.5 * (a + b)
        } else {
            a + (b - a) * (-fa) / (fb - fa)
        }
    };
    let mut segments = Vec::new();
    for i in 0..nx.saturating_sub(1) {
        for j in 0..ny.saturating_sub(1) {
            // cell corners: 00 = (i,j), 10 = (i+1,j), 01 = (i,j+1), 11 = (i+1,j+1)
            let f00 = at(i, j);
            let f10 = at(i + 1, j);
            let f01 = at(i, j + 1);
            let f11 = at(i + 1, j + 1);
            let mut crossings: Vec<(f64, f64)> = Vec::new();
            if f00 * f10 < 0.0 {
                crossings.push((interp(xs[i], xs[i + 1], f00, f10), ys[j]));
            }
            if f01 * f11 < 0.0 {
                crossings.push((interp(xs[i], xs[i + 1], f01, f11), ys[j + 1]));
            }
            if f00 * f01 < 0.0 {
                crossings.push((xs[i], interp(ys[j], ys[j + 1], f00, f01)));
            }
            if f10 * f11 < 0.0 {
                crossings.push((xs[i + 1], interp(ys[j], ys[j + 1], f10, f11)));
            }
            if crossings.len() >= 2 {
                // ambiguous saddle cells contribute both pairings' first edge
                segments.push((crossings[0], crossings[1]));
                if crossings.len() == 4 {
                    segments.push((crossings[2], crossings[3]));
                }
            }
        }
    }
    segments
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockBasis;
    use crate::model::{chain_tunneling, ModelSpec};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn two_site_single_particle_analytic() {
        // H = -J (b1^dag b2 + h.c.), ground energy -J
        let basis = FockBasis::build(2, 1, Some(1)).unwrap();
        let spec = ModelSpec::bare(chain_tunneling(2, -1.0), 0.0);
        let h = model::build_effective_hamiltonian(&basis, &spec).unwrap();
        let gs = ground_state(&h, Method::Dense).unwrap();
        assert!((gs.energy + 1.0).abs() < 1e-12);
        assert!((gs.state[0].norm_sqr() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dense_and_lanczos_agree() {
        let basis = FockBasis::build(4, 2, Some(4)).unwrap();
        let spec = ModelSpec::bare(chain_tunneling(4, -1.0), 2.0);
        let h = model::build_effective_hamiltonian(&basis, &spec).unwrap();
        let d = ground_state(&h, Method::Dense).unwrap();
        let l = ground_state(&h, Method::Lanczos).unwrap();
        assert!((d.energy - l.energy).abs() < 1e-8, "dense {} lanczos {}", d.energy, l.energy);
        let overlap: C64 = d
            .state
            .iter()
            .zip(&l.state)
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn degenerate_ground_state_flagged() {
        // two decoupled sites at equal energy: single-particle ground doublet
        let basis = FockBasis::build(2, 1, Some(1)).unwrap();
        let spec = ModelSpec::bare(vec![], 0.0);
        let h = model::build_effective_hamiltonian(&basis, &spec).unwrap();
        let gs = ground_state(&h, Method::Dense).unwrap();
        assert!(gs.degenerate);
    }

    #[test]
    fn non_hermitian_rejected() {
        let op = SparseOperator::from_triplets(2, "t", vec![(0, 1, c(1.0))]).unwrap();
        assert!(matches!(
            ground_state(&op, Method::Dense),
            Err(Error::NonHermitianInput(_))
        ));
    }

    #[test]
    fn expm_matches_diagonal_exponential() {
        let mut a = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
        a[(0, 0)] = C64::new(0.0, -1.5);
        a[(1, 1)] = C64::new(0.0, 2.0);
        let e = expm(&a);
        assert!((e[(0, 0)] - C64::new(0.0, -1.5).exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - C64::new(0.0, 2.0).exp()).norm() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn expm_pauli_x_rotation() {
        // exp(-i t X) = cos t - i sin t X
        let t = 0.37;
        let mut x = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
        x[(0, 1)] = c(1.0);
        x[(1, 0)] = c(1.0);
        let e = expm(&(&x * C64::new(0.0, -t)));
        assert!((e[(0, 0)] - c(t.cos())).norm() < 1e-14);
        assert!((e[(0, 1)] - C64::new(0.0, -t.sin())).norm() < 1e-14);
    }

    #[test]
    fn expm_unitarity_for_antihermitian_input() {
        let basis = FockBasis::build(3, 2, Some(2)).unwrap();
        let spec = ModelSpec::bare(chain_tunneling(3, 1.0), 0.7);
        let h = model::build_effective_hamiltonian(&basis, &spec).unwrap();
        let u = expm(&(h.to_dense() * C64::new(0.0, -0.8)));
        let err = (&u * u.adjoint() - DMatrix::<C64>::identity(u.nrows(), u.ncols())).camax();
        assert!(err < 1e-12);
    }

    #[test]
    fn sweep_special_case_decoupled() {
        // lambda_1 = lambda_2 = 0 at positive mu: empty ground state, n1 = 0
        let res = dicke_phase_sweep((1.0, 1.0), &[0.0], &[0.0], 6).unwrap();
        assert!(res.points[0].n1.abs() < 1e-10);
        assert!(res.points[0].energy.abs() < 1e-10);
    }

    #[test]
    fn sweep_is_deterministic_and_ordered() {
        let l1: Vec<f64> = (0..4).map(|i| 0.2 * i as f64).collect();
        let l2: Vec<f64> = (0..3).map(|i| 0.3 * i as f64).collect();
        let a = dicke_phase_sweep((1.0, 1.0), &l1, &l2, 5).unwrap();
        let b = dicke_phase_sweep((1.0, 1.0), &l1, &l2, 5).unwrap();
        for (pa, pb) in a.points.iter().zip(&b.points) {
            assert_eq!(pa.energy.to_bits(), pb.energy.to_bits());
            assert_eq!(pa.n1.to_bits(), pb.n1.to_bits());
        }
        for (k, p) in a.points.iter().enumerate() {
            assert_eq!(p.lambda_1, l1[k / l2.len()]);
            assert_eq!(p.lambda_2, l2[k % l2.len()]);
        }
    }

    #[test]
    fn sweep_equal_mu_is_mode_exchange_symmetric() {
        // With mu_1 = mu_2 the Hamiltonian is invariant under relabelling
        // the two modes, so away from degeneracies <n_1> = <n_2> pointwise.
        let grid: Vec<f64> = (0..4).map(|i| 0.35 * i as f64).collect();
        let result = dicke_phase_sweep((1.0, 1.0), &grid, &grid, 8).unwrap();
        for p in &result.points {
            if !p.degenerate {
                assert!(
                    (p.n1 - p.n2).abs() < 1e-6,
                    "n1 {} vs n2 {} at ({}, {})",
                    p.n1,
                    p.n2,
                    p.lambda_1,
                    p.lambda_2
                );
            }
        }
    }

    #[test]
    fn marching_squares_recovers_a_line() {
        // f(x, y) = x - y: level 0 contour is the diagonal
        let xs: Vec<f64> = (0..5).map(|i| i as f64).collect();
        let ys = xs.clone();
        let f: Vec<f64> = xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| x - y + 0.25))
            .collect();
        let segs = level_set_segments(&xs, &ys, &f, 0.0);
        assert!(!segs.is_empty());
        for ((x1, y1), (x2, y2)) in segs {
            assert!((x1 - y1 + 0.25).abs() < 1e-12);
            assert!((x2 - y2 + 0.25).abs() < 1e-12);
        }
    }
}
