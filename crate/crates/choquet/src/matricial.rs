//! Sampling of the matricial range W_k(T) and a budgeted screen for matrix
//! extreme points.
//!
//! Samples arise as compressions `V*(T ⊗ 1_m)V` by random isometries, mixed
//! with support-directed draws (uniform isometries alone almost never land
//! near the boundary in higher dimensions) and closed under random C*-convex
//! combinations. The screen only ever falsifies extremality: a witness
//! decomposition proves a point is NOT matrix extreme, while absence of a
//! witness proves nothing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::convex::{self, convex_hull, point_location, Degeneracy, Location};
use crate::linalg::{self, c64, CMatrix, Cplx};
use crate::structure;

/// How a sample was produced; enough to re-evaluate it from scratch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Compression {
        multiplicity: usize,
        /// Columns of the isometry from C^k into C^(n·m).
        #[serde(with = "crate::report::cplx_mat")]
        isometry_columns: Vec<Vec<Cplx>>,
    },
    CstarCombination {
        /// Indices of earlier samples with their coefficient matrices.
        parts: Vec<(usize, CMatrix)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatricialRangeSample {
    pub k: usize,
    pub samples: Vec<CMatrix>,
    pub provenance: Vec<Provenance>,
}

/// Gram–Schmidt with one re-orthogonalization pass; columns of `cols` are
/// replaced by an orthonormal family.
fn orthonormalize_columns(cols: &mut Vec<Vec<Cplx>>, rng: &mut ChaCha8Rng) {
    let dim = cols[0].len();
    for j in 0..cols.len() {
        loop {
            for _pass in 0..2 {
                for i in 0..j {
                    let proj: Cplx = cols[i]
                        .iter()
                        .zip(&cols[j])
                        .map(|(u, v)| u.conj() * v)
                        .sum();
                    for r in 0..dim {
                        let d = proj * cols[i][r];
                        cols[j][r] -= d;
                    }
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for r in 0..dim {
                    cols[j][r] /= norm;
                }
                break;
            }
            // Redraw a degenerate column.
            for r in 0..dim {
                cols[j][r] = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
    }
}

fn compression(amplified: &CMatrix, cols: &[Vec<Cplx>]) -> CMatrix {
    let k = cols.len();
    let applied: Vec<Vec<Cplx>> = cols.iter().map(|c| amplified.apply(c)).collect();
    CMatrix::from_fn(k, |i, j| {
        cols[i]
            .iter()
            .zip(&applied[j])
            .map(|(u, v)| u.conj() * v)
            .sum()
    })
}

/// Inverse square root of a positive definite Hermitian matrix.
fn inv_sqrt_psd(s: &CMatrix, cfg: &ToleranceConfig) -> CMatrix {
    let eig = linalg::herm_eig(s, cfg).expect("Gram matrices are Hermitian");
    let floor = 1e-12 * eig.max().max(1.0);
    let inv: Vec<Cplx> = eig
        .eigenvalues
        .iter()
        .map(|&l| c64(1.0 / l.max(floor).sqrt(), 0.0))
        .collect();
    let d = CMatrix::diag(&inv);
    eig.vectors.mul(&d).mul(&eig.vectors.adjoint())
}

/// Draws `n_samples` elements of W_k(T). Deterministic for a fixed config.
pub fn ucp_sample(
    t: &CMatrix,
    k: usize,
    n_samples: usize,
    cfg: &ToleranceConfig,
) -> MatricialRangeSample {
    assert!(k >= 1, "level must be at least 1");
    assert!(n_samples >= 1, "need at least one sample");
    let n = t.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x3a3a ^ (k as u64) << 8);
    let mut samples: Vec<CMatrix> = Vec::with_capacity(n_samples);
    let mut provenance: Vec<Provenance> = Vec::with_capacity(n_samples);
    let directed_total = n_samples.div_ceil(2).max(1);
    let mut directed_idx = 0usize;

    // Amplifications T ⊗ 1_m for m = 1..k, built once.
    let amplified: Vec<CMatrix> = (1..=k)
        .map(|m| t.kron(&CMatrix::identity(m)))
        .collect();

    for i in 0..n_samples {
        if i % 4 == 3 && samples.len() >= 2 {
            // C*-convex combination of two earlier samples.
            let a_idx = rng.gen_range(0..samples.len());
            let b_idx = rng.gen_range(0..samples.len());
            let g1 = CMatrix::from_fn(k, |_, _| {
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let g2 = CMatrix::from_fn(k, |_, _| {
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let s = g1.adjoint().mul(&g1).add(&g2.adjoint().mul(&g2));
            let w = inv_sqrt_psd(&s, cfg);
            let a1 = g1.mul(&w);
            let a2 = g2.mul(&w);
            let combo = a1
                .adjoint()
                .mul(&samples[a_idx])
                .mul(&a1)
                .add(&a2.adjoint().mul(&samples[b_idx]).mul(&a2));
            samples.push(combo);
            provenance.push(Provenance::CstarCombination {
                parts: vec![(a_idx, a1), (b_idx, a2)],
            });
            continue;
        }

        let m = rng.gen_range(1..=k);
        let dim = n * m;
        let mut cols: Vec<Vec<Cplx>> = Vec::with_capacity(k);
        if i % 2 == 0 {
            // Support-directed draw: lead with the top eigenvector of H(θ)
            // so the boundary of the range is actually reached. Angles are
            // evenly spaced so coverage has no random gaps.
            let theta = std::f64::consts::TAU * directed_idx as f64 / directed_total as f64;
            directed_idx += 1;
            let w = c64(theta.cos(), -theta.sin());
            let h = CMatrix::from_fn(n, |r, c| {
                (w * t[(r, c)] + w.conj() * t[(c, r)].conj()) * 0.5
            });
            let eig = linalg::herm_eig(&h, cfg).expect("Hermitian by construction");
            let top = eig.vector(n - 1);
            let mut lead = vec![c64(0.0, 0.0); dim];
            lead[..n].copy_from_slice(&top);
            cols.push(lead);
        }
        while cols.len() < k.min(dim) {
            cols.push(
                (0..dim)
                    .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            );
        }
        // If k exceeds the amplified dimension, raise the multiplicity so an
        // isometry exists.
        let (dim, m) = if k > dim {
            let m2 = k.div_ceil(n);
            (n * m2, m2)
        } else {
            (dim, m)
        };
        for c in cols.iter_mut() {
            c.resize(dim, c64(0.0, 0.0));
        }
        while cols.len() < k {
            cols.push(
                (0..dim)
                    .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            );
        }
        orthonormalize_columns(&mut cols, &mut rng);
        let sample = compression(&amplified[m - 1], &cols);
        samples.push(sample);
        provenance.push(Provenance::Compression {
            multiplicity: m,
            isometry_columns: cols,
        });
    }

    MatricialRangeSample {
        k,
        samples,
        provenance,
    }
}

/// One summand of a witness decomposition `Λ = Σ A_j* Ω_j A_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessPart {
    /// Index into the sample list when Ω is a raw sample.
    pub sample_index: Option<usize>,
    /// Convex combination of sample indices that produced Ω, when it was
    /// synthesized from the sampled hull.
    pub synthesis: Vec<(usize, f64)>,
    pub omega: CMatrix,
    pub coefficient: CMatrix,
}

/// Proof that Λ admits a nontrivial C*-convex decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub parts: Vec<WitnessPart>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScreenOutcome {
    /// Λ is not a matrix extreme point; by the pure-map criterion the
    /// corresponding irreducible representation is not a boundary
    /// representation.
    NotExtreme(Witness),
    /// Inconclusive under the search budget.
    NoWitnessFound,
}

fn witness_residual(lambda: &CMatrix, parts: &[WitnessPart]) -> (f64, f64) {
    let k = lambda.dim();
    let mut sum = CMatrix::zeros(k);
    let mut gram = CMatrix::zeros(k);
    for p in parts {
        sum = sum.add(&p.coefficient.adjoint().mul(&p.omega).mul(&p.coefficient));
        gram = gram.add(&p.coefficient.adjoint().mul(&p.coefficient));
    }
    (
        sum.sub(lambda).frobenius_norm(),
        gram.sub(&CMatrix::identity(k)).frobenius_norm(),
    )
}

/// Checks a stored witness from scratch: it must reproduce Λ within 1e-8,
/// its coefficients must sum to the identity within 1e-10, every coefficient
/// must have full rank, and some summand must differ from Λ.
pub fn revalidate_witness(
    lambda: &CMatrix,
    witness: &Witness,
    cfg: &ToleranceConfig,
) -> bool {
    let (resid, gram_defect) = witness_residual(lambda, &witness.parts);
    if resid > 1e-8 || gram_defect > 1e-10 {
        return false;
    }
    for p in &witness.parts {
        let gram = p.coefficient.adjoint().mul(&p.coefficient);
        let Ok(eig) = linalg::herm_eig(&gram, cfg) else {
            return false;
        };
        if eig.min() <= 1e-12 {
            return false;
        }
    }
    witness
        .parts
        .iter()
        .any(|p| !structure::unitarily_equivalent_fingerprint(&p.omega, lambda, cfg))
}

/// Budgeted search for a decomposition showing Λ is not matrix extreme.
///
/// Level 1 walks a chord of the sampled hull through Λ, which is exact for
/// interior points; higher levels scan sampled segments and then run an
/// alternating coordinate descent over the coefficient blocks for sampled
/// pairs. The budget is `10 · n_samples` objective evaluations.
pub fn matrix_extreme_screen(
    lambda: &CMatrix,
    sample: &MatricialRangeSample,
    cfg: &ToleranceConfig,
) -> ScreenOutcome {
    let k = sample.k;
    assert_eq!(lambda.dim(), k, "Λ must live at the sampled level");
    let mut budget = (10 * sample.samples.len()) as i64;
    let accept = 1e-9 * lambda.frobenius_norm().max(1.0);

    if k == 1 {
        if let Some(w) = chord_witness(lambda, sample, cfg) {
            return ScreenOutcome::NotExtreme(w);
        }
    }

    if let Some(w) = segment_witness(lambda, sample, cfg, &mut budget, accept) {
        return ScreenOutcome::NotExtreme(w);
    }
    if let Some(w) = descent_witness(lambda, sample, cfg, &mut budget, accept) {
        return ScreenOutcome::NotExtreme(w);
    }
    ScreenOutcome::NoWitnessFound
}

/// Level-1 exact construction: run a chord through Λ, stop at the sampled
/// hull boundary, and express the two ends as edge combinations.
fn chord_witness(
    lambda: &CMatrix,
    sample: &MatricialRangeSample,
    cfg: &ToleranceConfig,
) -> Option<Witness> {
    let z = lambda[(0, 0)];
    let pts: Vec<Cplx> = sample.samples.iter().map(|s| s[(0, 0)]).collect();
    let hull = convex_hull(&pts, cfg).ok()?;
    if hull.degeneracy() == Degeneracy::Point {
        return None;
    }
    if hull.degeneracy() == Degeneracy::Segment {
        let (a, b) = (hull.vertices()[0], hull.vertices()[1]);
        let len = (b - a).norm();
        if convex::dist_to_segment(z, a, b) > 1e-12 * len.max(1.0) {
            return None;
        }
        let t = ((z - a).re * (b - a).re + (z - a).im * (b - a).im) / (len * len);
        if !(1e-6..=1.0 - 1e-6).contains(&t) {
            return None;
        }
        let ia = index_of_point(&pts, a)?;
        let ib = index_of_point(&pts, b)?;
        let parts = vec![
            scalar_part(Some(ia), vec![(ia, 1.0)], a, (1.0 - t).sqrt()),
            scalar_part(Some(ib), vec![(ib, 1.0)], b, t.sqrt()),
        ];
        return finalize_witness(lambda, parts, cfg);
    }
    if point_location(z, &hull, cfg) != Location::Inside {
        return None;
    }

    // Walk the horizontal chord through z to the hull boundary on both sides.
    let verts = hull.vertices();
    let m = verts.len();
    let mut t_pos: Option<(f64, usize, f64)> = None; // (t, edge index, edge parameter)
    let mut t_neg: Option<(f64, usize, f64)> = None;
    for e in 0..m {
        let a = verts[e];
        let b = verts[(e + 1) % m];
        // Solve z + t = a + s (b - a) over reals in (re, im).
        let d = b - a;
        // t * (1,0) - s * d = a - z
        let det = -d.im;
        if det.abs() < 1e-15 {
            continue;
        }
        let rhs = a - z;
        let s = -rhs.im / d.im;
        if !(0.0..=1.0).contains(&s) {
            continue;
        }
        let t = rhs.re + s * d.re;
        if t > 1e-12 {
            if t_pos.is_none() || t < t_pos.unwrap().0 {
                t_pos = Some((t, e, s));
            }
        } else if t < -1e-12 && (t_neg.is_none() || t > t_neg.unwrap().0) {
            t_neg = Some((t, e, s));
        }
    }
    let (tp, ep, sp) = t_pos?;
    let (tn, en, sn) = t_neg?;
    let bp = z + c64(tp, 0.0);
    let bn = z + c64(tn, 0.0);
    let w_p = -tn / (tp - tn);
    let w_n = tp / (tp - tn);

    let edge_combo = |e: usize, s: f64| -> Option<Vec<(usize, f64)>> {
        let a = verts[e];
        let b = verts[(e + 1) % m];
        let ia = index_of_point(&pts, a)?;
        let ib = index_of_point(&pts, b)?;
        Some(vec![(ia, 1.0 - s), (ib, s)])
    };
    let parts = vec![
        scalar_part(None, edge_combo(ep, sp)?, bp, w_p.sqrt()),
        scalar_part(None, edge_combo(en, sn)?, bn, w_n.sqrt()),
    ];
    finalize_witness(lambda, parts, cfg)
}

fn index_of_point(pts: &[Cplx], v: Cplx) -> Option<usize> {
    pts.iter().position(|p| p.re == v.re && p.im == v.im)
}

fn scalar_part(idx: Option<usize>, synthesis: Vec<(usize, f64)>, omega: Cplx, coef: f64) -> WitnessPart {
    WitnessPart {
        sample_index: idx,
        synthesis,
        omega: CMatrix::diag(&[omega]),
        coefficient: CMatrix::diag(&[c64(coef, 0.0)]),
    }
}

fn finalize_witness(
    lambda: &CMatrix,
    parts: Vec<WitnessPart>,
    cfg: &ToleranceConfig,
) -> Option<Witness> {
    let (residual, _) = witness_residual(lambda, &parts);
    let w = Witness { parts, residual };
    revalidate_witness(lambda, &w, cfg).then_some(w)
}

/// Scalar-coefficient scan over sampled pairs: Λ ≈ t Ω_i + (1-t) Ω_j.
fn segment_witness(
    lambda: &CMatrix,
    sample: &MatricialRangeSample,
    cfg: &ToleranceConfig,
    budget: &mut i64,
    accept: f64,
) -> Option<Witness> {
    let k = sample.k;
    let ns = sample.samples.len();
    'pairs: for i in 0..ns {
        for j in (i + 1)..ns {
            if *budget <= 0 {
                break 'pairs;
            }
            *budget -= 1;
            let oi = &sample.samples[i];
            let oj = &sample.samples[j];
            let dir = oi.sub(oj);
            let len2 = dir.frobenius_norm().powi(2);
            if len2 < 1e-24 {
                continue;
            }
            // Least-squares parameter for Λ - Ω_j against Ω_i - Ω_j.
            let target = lambda.sub(oj);
            let mut inner = 0.0;
            for r in 0..k {
                for c in 0..k {
                    inner += (dir[(r, c)].conj() * target[(r, c)]).re;
                }
            }
            let t = (inner / len2).clamp(1e-6, 1.0 - 1e-6);
            let combo = oi.scale(c64(t, 0.0)).add(&oj.scale(c64(1.0 - t, 0.0)));
            if combo.sub(lambda).frobenius_norm() > accept {
                continue;
            }
            let id = CMatrix::identity(k);
            let parts = vec![
                WitnessPart {
                    sample_index: Some(i),
                    synthesis: vec![(i, 1.0)],
                    omega: oi.clone(),
                    coefficient: id.scale(c64(t.sqrt(), 0.0)),
                },
                WitnessPart {
                    sample_index: Some(j),
                    synthesis: vec![(j, 1.0)],
                    omega: oj.clone(),
                    coefficient: id.scale(c64((1.0 - t).sqrt(), 0.0)),
                },
            ];
            if let Some(w) = finalize_witness(lambda, parts, cfg) {
                return Some(w);
            }
        }
    }
    None
}

/// Alternating coordinate descent over the coefficient blocks for sampled
/// pairs; derivative-free and budgeted, so it only catches easy targets.
fn descent_witness(
    lambda: &CMatrix,
    sample: &MatricialRangeSample,
    cfg: &ToleranceConfig,
    budget: &mut i64,
    accept: f64,
) -> Option<Witness> {
    let k = sample.k;
    let ns = sample.samples.len();
    if ns < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x11ce);
    let pair_count = 4.min(ns * (ns - 1) / 2);
    for _ in 0..pair_count {
        let i = rng.gen_range(0..ns);
        let mut j = rng.gen_range(0..ns);
        if i == j {
            j = (j + 1) % ns;
        }
        let omegas = [&sample.samples[i], &sample.samples[j]];
        let mut gs = [
            CMatrix::identity(k).scale(c64(0.7, 0.0)),
            CMatrix::identity(k).scale(c64(0.7, 0.0)),
        ];
        let eval = |gs: &[CMatrix; 2], budget: &mut i64| -> Option<f64> {
            if *budget <= 0 {
                return None;
            }
            *budget -= 1;
            let s = gs[0].adjoint().mul(&gs[0]).add(&gs[1].adjoint().mul(&gs[1]));
            let w = inv_sqrt_psd(&s, cfg);
            let a0 = gs[0].mul(&w);
            let a1 = gs[1].mul(&w);
            let sum = a0
                .adjoint()
                .mul(omegas[0])
                .mul(&a0)
                .add(&a1.adjoint().mul(omegas[1]).mul(&a1));
            Some(sum.sub(lambda).frobenius_norm())
        };
        let Some(mut best) = eval(&gs, budget) else {
            return None;
        };
        let mut step = 0.4f64;
        for _round in 0..8 {
            let mut improved = false;
            for blk in 0..2 {
                for r in 0..k {
                    for c in 0..k {
                        for delta in [c64(step, 0.0), c64(-step, 0.0), c64(0.0, step), c64(0.0, -step)]
                        {
                            let mut trial = gs.clone();
                            trial[blk][(r, c)] += delta;
                            let Some(v) = eval(&trial, budget) else {
                                return None;
                            };
                            if v < best {
                                best = v;
                                gs = trial;
                                improved = true;
                            }
                        }
                    }
                }
            }
            if best <= accept {
                break;
            }
            if !improved {
                step *= 0.5;
            }
        }
        if best <= accept {
            let s = gs[0].adjoint().mul(&gs[0]).add(&gs[1].adjoint().mul(&gs[1]));
            let w = inv_sqrt_psd(&s, cfg);
            let parts = vec![
                WitnessPart {
                    sample_index: Some(i),
                    synthesis: vec![(i, 1.0)],
                    omega: sample.samples[i].clone(),
                    coefficient: gs[0].mul(&w),
                },
                WitnessPart {
                    sample_index: Some(j),
                    synthesis: vec![(j, 1.0)],
                    omega: sample.samples[j].clone(),
                    coefficient: gs[1].mul(&w),
                },
            ];
            if let Some(wit) = finalize_witness(lambda, parts, cfg) {
                return Some(wit);
            }
        }
    }
    None
}
