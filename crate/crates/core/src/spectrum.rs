//! Spherical spectra of quaternionic matrices.
//!
//! In finite dimension `σ_S(T)` is a finite union of similarity spheres, so it
//! is reported through representatives `α + mβ` with `β ≥ 0`. The primary
//! route takes eigenvalues of `χ(T)`; the independent route probes
//! `Δ_q(T) = T² − 2Re(q)T + |q|²I` for singularity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{self, CMatrix};
use crate::par::Execution;
use crate::qop::{classify, delta_q, embed_in, QMatrix};
use crate::quat::{standard_rep, Quaternion, SliceFrame, SlicePoint, UnitImaginary};
use crate::slice::{restrict, SliceStructure};
use crate::tol;

/// The sphere `{α + sβ : s ∈ S}` with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenSphere {
    pub alpha: f64,
    pub beta: f64,
    pub mult: usize,
    /// Largest Schur residual among the eigenvalues merged into this sphere.
    pub residual: f64,
}

impl EigenSphere {
    pub fn rep(&self, axis: UnitImaginary) -> SlicePoint {
        SlicePoint::new(self.alpha, self.beta, axis)
    }

    /// True when `q` lies on the sphere, up to `tol` on the representative.
    pub fn contains(&self, q: Quaternion, tol: f64) -> bool {
        let (a, b) = (q.re(), q.im_modulus());
        (a - self.alpha).abs() <= tol && (b - self.beta).abs() <= tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub axis: UnitImaginary,
    pub spheres: Vec<EigenSphere>,
    /// Whether the input passed the normality test.
    pub normal: bool,
}

impl SpectrumReport {
    pub fn total_multiplicity(&self) -> usize {
        self.spheres.iter().map(|s| s.mult).sum()
    }

    pub fn representatives(&self) -> Vec<SlicePoint> {
        self.spheres.iter().map(|s| s.rep(self.axis)).collect()
    }

    /// True when `q` lies on one of the spheres.
    pub fn contains(&self, q: Quaternion, tol: f64) -> bool {
        self.spheres.iter().any(|s| s.contains(q, tol))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spectrum serialization cannot fail")
    }
}

/// [`spherical_spectrum_with`] over `C_i` with the default clustering tolerance.
pub fn spherical_spectrum(t: &QMatrix) -> Result<SpectrumReport> {
    spherical_spectrum_with(t, UnitImaginary::I, tol::CLUSTER)
}

pub fn spherical_spectrum_with(t: &QMatrix, axis: UnitImaginary, cluster_tol: f64) -> Result<SpectrumReport> {
    let normal = classify(t)?.normal;
    let frame = SliceFrame::new(axis);
    let schur = linalg::schur(embed_in(t, &frame).as_cmatrix())?;
    let residuals = schur.column_residuals();
    // every sphere of multiplicity k shows up as 2k eigenvalues of χ(T)
    let points: Vec<(f64, f64, f64)> = schur
        .eigenvalues()
        .iter()
        .zip(&residuals)
        .map(|(l, &r)| (l.re, l.im.abs(), r))
        .collect();
    let clusters = cluster(&points, cluster_tol);

    let mut spheres: Vec<(EigenSphere, usize)> = clusters
        .iter()
        .map(|members| {
            let k = members.len() as f64;
            let alpha = members.iter().map(|&i| points[i].0).sum::<f64>() / k;
            let beta = members.iter().map(|&i| points[i].1).sum::<f64>() / k;
            let residual = members.iter().map(|&i| points[i].2).fold(0.0, f64::max);
            let sphere = EigenSphere {
                alpha,
                beta,
                mult: members.len() / 2,
                residual,
            };
            (sphere, members.len())
        })
        .collect();
    spheres.sort_by(|a, b| (a.0.alpha, a.0.beta).partial_cmp(&(b.0.alpha, b.0.beta)).expect("finite spectrum"));
    // clusters split by the tolerance can leave odd counts; hand the spare
    // halves out in sorted order so the multiplicities still sum to n
    let mut spare = t.n() - spheres.iter().map(|s| s.0.mult).sum::<usize>();
    for (s, count) in spheres.iter_mut() {
        if spare > 0 && *count % 2 == 1 {
            s.mult += 1;
            spare -= 1;
        }
    }
    Ok(SpectrumReport {
        axis,
        spheres: spheres.into_iter().map(|s| s.0).filter(|s| s.mult > 0).collect(),
        normal,
    })
}

/// Single-linkage clustering in the max norm.
fn cluster(points: &[(f64, f64, f64)], tol: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[a].0.partial_cmp(&points[b].0).expect("finite eigenvalues"));
    for (pos, &a) in order.iter().enumerate() {
        for &b in &order[pos + 1..] {
            if points[b].0 - points[a].0 > tol {
                break;
            }
            if (points[b].1 - points[a].1).abs() <= tol {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Smallest singular value of `Δ_q(T)` relative to its largest.
pub fn delta_q_singularity(t: &QMatrix, q: Quaternion) -> Result<(f64, f64)> {
    let d = embed_in(&delta_q(t, q), &SliceFrame::default());
    let s = linalg::singular_values(d.as_cmatrix())?;
    Ok((*s.last().unwrap_or(&0.0), *s.first().unwrap_or(&0.0)))
}

/// Grid points where `Δ_q(T)` is singular: `σ_min < singular_tol · max(1, σ_max)`.
pub fn delta_q_oracle(t: &QMatrix, grid: &[SlicePoint], singular_tol: f64, exec: Execution) -> Result<Vec<SlicePoint>> {
    let flags = exec.map(grid, |p| {
        delta_q_singularity(t, p.to_quaternion()).map(|(lo, hi)| lo < singular_tol * 1f64.max(hi))
    });
    let mut out = Vec::new();
    for (p, f) in grid.iter().zip(flags) {
        if f? {
            out.push(*p);
        }
    }
    Ok(out)
}

/// Each representative plus the four neighbours at distance `offset`
/// (the one below is dropped when it would leave `C_m^+`).
pub fn default_probe_grid(report: &SpectrumReport, offset: f64) -> Vec<SlicePoint> {
    let mut grid = Vec::new();
    for s in &report.spheres {
        let p = |a, b| SlicePoint::new(a, b, report.axis);
        grid.push(p(s.alpha, s.beta));
        grid.push(p(s.alpha + offset, s.beta));
        grid.push(p(s.alpha - offset, s.beta));
        grid.push(p(s.alpha, s.beta + offset));
        if s.beta - offset >= 0.0 {
            grid.push(p(s.alpha, s.beta - offset));
        }
    }
    grid
}

/// Flag-by-flag comparison of the two spectrum computations on a grid.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeAgreement {
    pub grid: Vec<SlicePoint>,
    pub in_spectrum: Vec<bool>,
    pub oracle_singular: Vec<bool>,
}

impl ProbeAgreement {
    pub fn mismatches(&self) -> Vec<SlicePoint> {
        self.grid
            .iter()
            .zip(self.in_spectrum.iter().zip(&self.oracle_singular))
            .filter(|(_, (a, b))| a != b)
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn agrees(&self) -> bool {
        self.in_spectrum == self.oracle_singular
    }
}

pub fn probe_agreement(
    t: &QMatrix,
    report: &SpectrumReport,
    grid: &[SlicePoint],
    tols: &tol::Tolerances,
    exec: Execution,
) -> Result<ProbeAgreement> {
    let flagged = delta_q_oracle(t, grid, tols.singular, exec)?;
    let oracle_singular = grid.iter().map(|p| flagged.contains(p)).collect();
    let in_spectrum = grid.iter().map(|p| report.contains(p.to_quaternion(), tols.cluster)).collect();
    Ok(ProbeAgreement {
        grid: grid.to_vec(),
        in_spectrum,
        oracle_singular,
    })
}

/// `Ω_K`, stored through the representatives `(α, |β|)` of the points of `K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circularization {
    pub reps: Vec<(f64, f64)>,
}

pub fn circularize(k: &[SlicePoint]) -> Circularization {
    Circularization {
        reps: k.iter().map(|p| (p.alpha, p.beta.abs())).collect(),
    }
}

impl Circularization {
    pub fn contains(&self, q: Quaternion, tol: f64) -> bool {
        let r = standard_rep(q, UnitImaginary::I);
        self.reps
            .iter()
            .any(|&(a, b)| (r.alpha - a).abs() <= tol && (r.beta - b).abs() <= tol)
    }
}

pub fn sphere_membership(q: Quaternion, omega: &Circularization) -> bool {
    omega.contains(q, tol::CLUSTER)
}

/// Comparison of `σ(T₊)` against the spheres of `σ_S(T)`.
#[derive(Clone, Debug, Serialize)]
pub struct SliceSpectrumRelation {
    pub plus_eigenvalues: Vec<Complex64>,
    pub spectrum: SpectrumReport,
    /// All eigenvalues of `T₊` lie in `C_m^+`.
    pub upper_half: bool,
    /// Eigenvalues of `T₊` on no sphere.
    pub unmatched_plus: Vec<Complex64>,
    /// Spheres whose multiplicity is not met by eigenvalues of `T₊`.
    pub unmatched_spheres: Vec<EigenSphere>,
}

impl SliceSpectrumRelation {
    pub fn holds(&self) -> bool {
        self.unmatched_plus.is_empty() && self.unmatched_spheres.is_empty()
    }
}

/// Checks `σ_S(T) = Ω_{σ(T₊)}` with multiplicities.
pub fn slice_spectrum_relation(t: &QMatrix, s: &SliceStructure, match_tol: f64) -> Result<SliceSpectrumRelation> {
    let tp = restrict(t, s)?;
    let spectrum = spherical_spectrum_with(t, s.axis(), match_tol)?;
    let plus_eigenvalues = plus_spectrum(tp.as_cmatrix())?;
    let upper_half = plus_eigenvalues.iter().all(|l| l.im >= -match_tol);
    let mut hits = vec![0usize; spectrum.spheres.len()];
    let mut unmatched_plus = Vec::new();
    for l in &plus_eigenvalues {
        let found = spectrum
            .spheres
            .iter()
            .position(|sp| (l.re - sp.alpha).abs() <= match_tol && (l.im.abs() - sp.beta).abs() <= match_tol);
        match found {
            Some(i) => hits[i] += 1,
            None => unmatched_plus.push(*l),
        }
    }
    let unmatched_spheres = spectrum
        .spheres
        .iter()
        .zip(&hits)
        .filter(|(sp, &h)| sp.mult != h)
        .map(|(sp, _)| *sp)
        .collect();
    Ok(SliceSpectrumRelation {
        plus_eigenvalues,
        spectrum,
        upper_half,
        unmatched_plus,
        unmatched_spheres,
    })
}

fn plus_spectrum(a: &CMatrix) -> Result<Vec<Complex64>> {
    Ok(linalg::schur(a)?.eigenvalues())
}
