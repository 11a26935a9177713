//! Light modefunctions, Gaussian Wannier functions, and the coupling tensors
//! J_ij^mn computed by numerical quadrature of the four-factor overlap
//! integral.
//!
//! Wannier functions are normalized Gaussians of width sigma,
//! `w(x) = (pi sigma^2)^{-1/4} exp(-x^2 / 2 sigma^2)`, so the
//! nearest-neighbour overlap has the closed form `exp(-d^2 / 4 sigma^2)`.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Regular 1D or 2D lattice with Gaussian Wannier functions of width `sigma`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    /// 1 or 2.
    pub dimension: u8,
    /// Lattice spacing d (internally d = 1 is conventional).
    pub spacing: f64,
    /// Sites along x.
    pub sites_x: usize,
    /// Sites along y; 1 for a 1D lattice.
    #[serde(default = "one")]
    pub sites_y: usize,
    /// Gaussian Wannier width.
    pub sigma: f64,
}

fn one() -> usize {
    1
}

impl LatticeSpec {
    pub fn chain(num_sites: usize, spacing: f64, sigma: f64) -> Self {
        Self {
            dimension: 1,
            spacing,
            sites_x: num_sites,
            sites_y: 1,
            sigma,
        }
    }

    pub fn num_sites(&self) -> usize {
        self.sites_x * self.sites_y
    }

    /// Row-major site position.
    pub fn position(&self, site: usize) -> (f64, f64) {
        let ix = site % self.sites_x;
        let iy = site / self.sites_x;
        (ix as f64 * self.spacing, iy as f64 * self.spacing)
    }

    /// Nearest-neighbour unordered site pairs on the grid.
    pub fn nearest_neighbour_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for iy in 0..self.sites_y {
            for ix in 0..self.sites_x {
                let s = iy * self.sites_x + ix;
                if ix + 1 < self.sites_x {
                    pairs.push((s, s + 1));
                }
                if iy + 1 < self.sites_y {
                    pairs.push((s, s + self.sites_x));
                }
            }
        }
        pairs
    }
}

/// Single normalized Gaussian factor.
fn gaussian(x: f64, sigma: f64) -> f64 {
    let norm = (std::f64::consts::PI * sigma * sigma).powf(-0.25);
    norm * (-(x * x) / (2.0 * sigma * sigma)).exp()
}

/// Wannier function of site `i` at position `r`, product form across axes.
pub fn wannier(lattice: &LatticeSpec, site: usize, r: (f64, f64)) -> f64 {
    let (x0, y0) = lattice.position(site);
    let wx = gaussian(r.0 - x0, lattice.sigma);
    if lattice.dimension == 1 {
        wx
    } else {
        wx * gaussian(r.1 - y0, lattice.sigma)
    }
}

/// Light modefunction: travelling or standing plane wave, uniform field, or a
/// finite superposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeFunction {
    Uniform {
        amplitude_re: f64,
        #[serde(default)]
        amplitude_im: f64,
    },
    Travelling {
        wavenumber: f64,
        #[serde(default)]
        angle: f64,
        #[serde(default)]
        phase: f64,
    },
    Standing {
        wavenumber: f64,
        #[serde(default)]
        angle: f64,
        #[serde(default)]
        phase: f64,
    },
    Superposition {
        components: Vec<ModeFunction>,
    },
}

impl ModeFunction {
    pub fn uniform(amplitude: C64) -> Self {
        ModeFunction::Uniform {
            amplitude_re: amplitude.re,
            amplitude_im: amplitude.im,
        }
    }

    /// Evaluate at position `r = (x, y)`.
    pub fn evaluate(&self, r: (f64, f64)) -> C64 {
        match self {
            ModeFunction::Uniform {
                amplitude_re,
                amplitude_im,
            } => C64::new(*amplitude_re, *amplitude_im),
            ModeFunction::Travelling {
                wavenumber,
                angle,
                phase,
            } => {
                let arg = wavenumber * (r.0 * angle.cos() + r.1 * angle.sin()) + phase;
                C64::new(arg.cos(), arg.sin())
            }
            ModeFunction::Standing {
                wavenumber,
                angle,
                phase,
            } => {
                let arg = wavenumber * (r.0 * angle.cos() + r.1 * angle.sin()) + phase;
                C64::new(arg.cos(), 0.0)
            }
            ModeFunction::Superposition { components } => {
                components.iter().map(|m| m.evaluate(r)).sum()
            }
        }
    }

    /// Whether evaluation varies along y.
    fn depends_on_y(&self) -> bool {
        match self {
            ModeFunction::Uniform { .. } => false,
            ModeFunction::Travelling {
                wavenumber, angle, ..
            }
            | ModeFunction::Standing {
                wavenumber, angle, ..
            } => *wavenumber != 0.0 && angle.sin().abs() > 1e-15,
            ModeFunction::Superposition { components } => {
                components.iter().any(|m| m.depends_on_y())
            }
        }
    }
}

/// Which site pairs a tensor covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRange {
    OnSite,
    NearestNeighbour,
    All,
}

/// Complex coupling coefficients J_ij^mn per unordered site pair; the
/// symmetry J_ij = J_ji is built into the storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTensor {
    mode_pair: (String, String),
    num_sites: usize,
    entries: BTreeMap<(usize, usize), C64>,
}

impl CouplingTensor {
    pub fn new(mode_m: impl Into<String>, mode_n: impl Into<String>, num_sites: usize) -> Self {
        Self {
            mode_pair: (mode_m.into(), mode_n.into()),
            num_sites,
            entries: BTreeMap::new(),
        }
    }

    pub fn mode_pair(&self) -> (&str, &str) {
        (&self.mode_pair.0, &self.mode_pair.1)
    }

    pub fn set_labels(&mut self, mode_m: impl Into<String>, mode_n: impl Into<String>) {
        self.mode_pair = (mode_m.into(), mode_n.into());
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        assert!(i < self.num_sites && j < self.num_sites);
        let key = (i.min(j), i.max(j));
        self.entries.insert(key, value);
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let key = (i.min(j), i.max(j));
        self.entries
            .get(&key)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    /// Stored entries, keyed by canonical (min, max) site pair.
    pub fn canonical_entries(&self) -> impl Iterator<Item = ((usize, usize), C64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Max entrywise deviation from `conj` of another tensor (checks the
    /// J^mn = conj(J^nm) invariant); both tensors are averaged into
    /// conjugate-consistent form in place.
    pub fn symmetrize_conjugate_pair(a: &mut CouplingTensor, b: &mut CouplingTensor) -> f64 {
        let keys: Vec<_> = a
            .entries
            .keys()
            .chain(b.entries.keys())
            .copied()
            .collect();
        let mut deviation = 0.0f64;
        for key in keys {
            let va = a.entries.get(&key).copied().unwrap_or(C64::new(0.0, 0.0));
            let vb = b.entries.get(&key).copied().unwrap_or(C64::new(0.0, 0.0));
            deviation = deviation.max((va - vb.conj()).norm());
            let avg = (va + vb.conj()) * 0.5;
            a.entries.insert(key, avg);
            b.entries.insert(key, avg.conj());
        }
        deviation
    }
}

// JSON wire format:
// {"mode_pair": [m, n], "entries": [{"i":0, "j":1, "re":0.5, "im":0.0}, ...]}
#[derive(Serialize, Deserialize)]
struct TensorEntryWire {
    i: usize,
    j: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct TensorWire {
    mode_pair: (String, String),
    num_sites: usize,
    entries: Vec<TensorEntryWire>,
}

impl Serialize for CouplingTensor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = TensorWire {
            mode_pair: self.mode_pair.clone(),
            num_sites: self.num_sites,
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), v)| TensorEntryWire {
                    i,
                    j,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CouplingTensor {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = TensorWire::deserialize(deserializer)?;
        let mut t = CouplingTensor::new(wire.mode_pair.0, wire.mode_pair.1, wire.num_sites);
        for e in wire.entries {
            t.set(e.i, e.j, C64::new(e.re, e.im));
        }
        Ok(t)
    }
}

/// Quadrature controls for [`compute_couplings`]: fixed-grid composite
/// Simpson with a Richardson error estimate from grid doubling.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Sample points per lattice period per axis.
    pub points_per_period: usize,
    /// Integration window extends this many sigma beyond the outer Wannier
    /// centers.
    pub window_sigmas: f64,
    /// Accepted absolute error estimate per coefficient.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            points_per_period: 512,
            window_sigmas: 6.0,
            tolerance: 1e-8,
        }
    }
}

/// Per-tensor quadrature diagnostics.
#[derive(Debug, Clone, Default)]
pub struct QuadratureReport {
    /// Largest Richardson error estimate over all computed coefficients.
    pub max_error_estimate: f64,
    /// Deviation absorbed when enforcing J_ij = J_ji (zero here by
    /// construction: each unordered pair is integrated once).
    pub symmetry_deviation: f64,
}

/// Compute J_ij^mn = integral of w_i conj(u_m) u_n w_j over the declared pair
/// range.
pub fn compute_couplings(
    lattice: &LatticeSpec,
    mode_m: &ModeFunction,
    mode_n: &ModeFunction,
    range: PairRange,
    quad: &QuadratureSpec,
) -> Result<(CouplingTensor, QuadratureReport)> {
    let pairs: Vec<(usize, usize)> = match range {
        PairRange::OnSite => (0..lattice.num_sites()).map(|i| (i, i)).collect(),
        PairRange::NearestNeighbour => {
            let mut p: Vec<_> = (0..lattice.num_sites()).map(|i| (i, i)).collect();
            p.extend(lattice.nearest_neighbour_pairs());
            p
        }
        PairRange::All => {
            let n = lattice.num_sites();
            (0..n)
                .flat_map(|i| (i..n).map(move |j| (i, j)))
                .collect()
        }
    };

    let two_dim = lattice.dimension == 2 || mode_m.depends_on_y() || mode_n.depends_on_y();
    if two_dim && lattice.dimension == 1 {
        return Err(Error::Invalid(
            "y-dependent modefunctions require a 2D lattice (set dimension 2, sites_y 1 \
             for a chain)"
                .into(),
        ));
    }

    let results: Vec<Result<((usize, usize), C64, f64)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (value, err) = integrate_pair(lattice, mode_m, mode_n, i, j, quad, two_dim);
            if err > quad.tolerance {
                return Err(Error::QuadratureTolerance {
                    requested: quad.tolerance,
                    achieved: err,
                });
            }
            Ok(((i, j), value, err))
        })
        .collect();

    let mut tensor = CouplingTensor::new("m", "n", lattice.num_sites());
    let mut report = QuadratureReport::default();
    for r in results {
        let ((i, j), value, err) = r?;
        tensor.set(i, j, value);
        report.max_error_estimate = report.max_error_estimate.max(err);
    }
    Ok((tensor, report))
}

fn integrate_pair(
    lattice: &LatticeSpec,
    mode_m: &ModeFunction,
    mode_n: &ModeFunction,
    i: usize,
    j: usize,
    quad: &QuadratureSpec,
    two_dim: bool,
) -> (C64, f64) {
    let (xi, yi) = lattice.position(i);
    let (xj, yj) = lattice.position(j);
    let w = quad.window_sigmas * lattice.sigma;
    let x_lo = xi.min(xj) - w;
    let x_hi = xi.max(xj) + w;
    let y_lo = yi.min(yj) - w;
    let y_hi = yi.max(yj) + w;

    let nx = simpson_points(x_hi - x_lo, lattice.spacing, quad.points_per_period);
    let f = |x: f64, y: f64| -> C64 {
        let r = (x, y);
        let ww = wannier(lattice, i, r) * wannier(lattice, j, r);
        mode_m.evaluate(r).conj() * mode_n.evaluate(r) * ww
    };

    if !two_dim {
        let coarse = simpson_1d(x_lo, x_hi, nx, |x| f(x, 0.0));
        let fine = simpson_1d(x_lo, x_hi, 2 * nx, |x| f(x, 0.0));
        let err = (fine - coarse).norm() / 15.0;
        (fine, err)
    } else {
        let ny = simpson_points(y_hi - y_lo, lattice.spacing, quad.points_per_period);
        let coarse = simpson_2d(x_lo, x_hi, nx, y_lo, y_hi, ny, &f);
        let fine = simpson_2d(x_lo, x_hi, 2 * nx, y_lo, y_hi, 2 * ny, &f);
        let err = (fine - coarse).norm() / 15.0;
        (fine, err)
    }
}

fn simpson_points(range: f64, period: f64, per_period: usize) -> usize {
    let n = ((range / period) * per_period as f64).ceil() as usize;
    let n = n.max(8);
    if n % 2 == 0 {
        n
    } else {
        n + 1
    }
}

fn simpson_weight(k: usize, n: usize) -> f64 {
    if k == 0 || k == n {
        1.0
    } else if k % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Composite Simpson on `n` intervals (`n` even).
fn simpson_1d(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> C64) -> C64 {
    let h = (hi - lo) / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=n {
        acc += f(lo + k as f64 * h) * simpson_weight(k, n);
    }
    acc * (h / 3.0)
}

fn simpson_2d(
    x_lo: f64,
    x_hi: f64,
    nx: usize,
    y_lo: f64,
    y_hi: f64,
    ny: usize,
    f: &impl Fn(f64, f64) -> C64,
) -> C64 {
    let hx = (x_hi - x_lo) / nx as f64;
    let hy = (y_hi - y_lo) / ny as f64;
    let mut acc = C64::new(0.0, 0.0);
    for kx in 0..=nx {
        let x = x_lo + kx as f64 * hx;
        let wx = simpson_weight(kx, nx);
        let mut row = C64::new(0.0, 0.0);
        for ky in 0..=ny {
            row += f(x, y_lo + ky as f64 * hy) * simpson_weight(ky, ny);
        }
        acc += row * wx;
    }
    acc * (hx / 3.0) * (hy / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_mode_is_constant() {
        let m = ModeFunction::uniform(C64::new(1.0, 0.0));
        assert_eq!(m.evaluate((0.3, -2.0)), C64::new(1.0, 0.0));
    }

    #[test]
    fn standing_wave_alternates_at_sites() {
        let m = ModeFunction::Standing {
            wavenumber: std::f64::consts::PI,
            angle: 0.0,
            phase: 0.0,
        };
        for j in 0..5 {
            let v = m.evaluate((j as f64, 0.0));
            let expect = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert!((v.re - expect).abs() < 1e-12);
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn travelling_wave_at_origin() {
        let m = ModeFunction::Travelling {
            wavenumber: 2.0,
            angle: 0.4,
            phase: 0.0,
        };
        assert_eq!(m.evaluate((0.0, 0.0)), C64::new(1.0, 0.0));
    }

    #[test]
    fn wannier_normalization_and_symmetry() {
        let lattice = LatticeSpec::chain(3, 1.0, 0.15);
        let n = 20001;
        let h = 4.0 / (n as f64 - 1.0);
        let mut integral = 0.0;
        for k in 0..n {
            let x = 1.0 - 2.0 + k as f64 * h; // centered on site 1
            let w = wannier(&lattice, 1, (x, 0.0));
            integral += w * w * h;
        }
        assert!((integral - 1.0).abs() < 1e-8);
        assert!(
            (wannier(&lattice, 1, (1.3, 0.0)) - wannier(&lattice, 1, (0.7, 0.0))).abs() < 1e-15
        );
    }

    #[test]
    fn neighbour_overlap_closed_form() {
        let sigma = 0.2;
        let lattice = LatticeSpec::chain(2, 1.0, sigma);
        let uniform = ModeFunction::uniform(C64::new(1.0, 0.0));
        let (t, _) = compute_couplings(
            &lattice,
            &uniform,
            &uniform,
            PairRange::NearestNeighbour,
            &QuadratureSpec::default(),
        )
        .unwrap();
        let expect = (-1.0 / (4.0 * sigma * sigma)).exp();
        assert!((t.get(0, 1).re - expect).abs() < 1e-8);
        assert!((t.get(0, 0).re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn tensor_json_roundtrip() {
        let mut t = CouplingTensor::new("c", "0", 3);
        t.set(0, 1, C64::new(0.5, -0.25));
        t.set(2, 2, C64::new(-1.0, 0.0));
        let json = serde_json::to_string(&t).unwrap();
        let back: CouplingTensor = serde_json::from_str(&json).unwrap();
        assert_eq!(t, back);
        assert!(json.contains("\"mode_pair\""));
        assert!(json.contains("\"re\""));
    }

    #[test]
    fn quadrature_failure_is_reported() {
        let lattice = LatticeSpec::chain(2, 1.0, 0.15);
        let uniform = ModeFunction::uniform(C64::new(1.0, 0.0));
        let quad = QuadratureSpec {
            points_per_period: 8,
            window_sigmas: 6.0,
            tolerance: 1e-14,
        };
        let err = compute_couplings(&lattice, &uniform, &uniform, PairRange::OnSite, &quad);
        assert!(matches!(
            err,
            Err(Error::QuadratureTolerance { .. })
        ));
    }
}
