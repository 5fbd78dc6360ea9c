//! Norm-drop certificates: witnesses that restricting an element
//! `α·1 + β·T + γ·T*` (or its 2×2 matrix-coefficient analogue) to a subset of
//! direct summands strictly drops its norm. A stored certificate re-checks
//! from scratch; absence of one proves nothing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::linalg::{self, c64, CMatrix, Cplx};
use crate::structure::BlockDecomposition;

/// Re-checkable witness of a norm drop on the kept blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormDropCertificate {
    /// Coefficient level: 1 for scalars, 2 for 2×2 matrix coefficients.
    pub level: u8,
    /// Coefficient of the identity (level×level matrix).
    pub alpha: CMatrix,
    /// Coefficient of `T`.
    pub beta: CMatrix,
    /// Coefficient of `T*`.
    pub gamma: CMatrix,
    /// Indices of the kept blocks.
    pub kept: Vec<usize>,
    pub norm_full: f64,
    pub norm_restricted: f64,
    /// The gap threshold the certificate was required to clear.
    pub margin: f64,
}

/// `coef ⊗ 1_d` terms assembled per block: `α⊗1 + β⊗B + γ⊗B*`.
fn element_on_block(alpha: &CMatrix, beta: &CMatrix, gamma: &CMatrix, block: &CMatrix) -> CMatrix {
    let d = block.dim();
    let id = CMatrix::identity(d);
    alpha
        .kron(&id)
        .add(&beta.kron(block))
        .add(&gamma.kron(&block.adjoint()))
}

/// Max operator norm of the element over the given blocks; empty set gives 0.
fn restricted_norm(
    alpha: &CMatrix,
    beta: &CMatrix,
    gamma: &CMatrix,
    blocks: &[CMatrix],
    indices: &[usize],
    cfg: &ToleranceConfig,
) -> f64 {
    let mut best = 0.0f64;
    for &i in indices {
        let m = element_on_block(alpha, beta, gamma, &blocks[i]);
        let n = linalg::op_norm(&m, cfg).expect("dense op norm");
        best = best.max(n);
    }
    best
}

fn gap_margin(norm_full: f64) -> f64 {
    1e-6 * norm_full.max(1.0)
}

struct Candidate {
    alpha: CMatrix,
    beta: CMatrix,
    gamma: CMatrix,
}

impl Candidate {
    fn level1(a: Cplx, b: Cplx, g: Cplx) -> Candidate {
        Candidate {
            alpha: CMatrix::diag(&[a]),
            beta: CMatrix::diag(&[b]),
            gamma: CMatrix::diag(&[g]),
        }
    }

    fn coords(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for m in [&self.alpha, &self.beta, &self.gamma] {
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    out.push(m[(i, j)].re);
                    out.push(m[(i, j)].im);
                }
            }
        }
        out
    }

    fn from_coords(level: usize, coords: &[f64]) -> Candidate {
        let per = level * level * 2;
        let build = |off: usize| {
            CMatrix::from_fn(level, |i, j| {
                let idx = off + (i * level + j) * 2;
                c64(coords[idx], coords[idx + 1])
            })
        };
        Candidate {
            alpha: build(0),
            beta: build(per),
            gamma: build(2 * per),
        }
    }
}

/// Searches for coefficients witnessing a norm drop when the element is
/// restricted to `kept`. Returns the first witness whose gap clears the
/// margin, or `None` when the budget is exhausted. Absence is NOT a proof of
/// complete isometry.
pub fn norm_drop_certificate(
    decomp: &BlockDecomposition,
    kept: &[usize],
    cfg: &ToleranceConfig,
) -> Option<NormDropCertificate> {
    let blocks = &decomp.blocks;
    let all: Vec<usize> = (0..blocks.len()).collect();
    let mut kept_sorted = kept.to_vec();
    kept_sorted.sort_unstable();
    kept_sorted.dedup();
    if kept_sorted.len() == all.len() {
        // Restriction is the identity; no drop is possible.
        return None;
    }

    let mut budget = cfg.cert_budget as i64;
    let mut evaluate = |cand: &Candidate, budget: &mut i64| -> Option<(f64, f64)> {
        if *budget <= 0 {
            return None;
        }
        *budget -= 1;
        let full = restricted_norm(&cand.alpha, &cand.beta, &cand.gamma, blocks, &all, cfg);
        let restricted =
            restricted_norm(&cand.alpha, &cand.beta, &cand.gamma, blocks, &kept_sorted, cfg);
        Some((full, restricted))
    };

    let finish = |cand: &Candidate, full: f64, restricted: f64| NormDropCertificate {
        level: cand.alpha.dim() as u8,
        alpha: cand.alpha.clone(),
        beta: cand.beta.clone(),
        gamma: cand.gamma.clone(),
        kept: kept_sorted.clone(),
        norm_full: full,
        norm_restricted: restricted,
        margin: gap_margin(full),
    };

    let one = c64(1.0, 0.0);
    let i_ = c64(0.0, 1.0);
    let mut starts: Vec<Candidate> = vec![
        Candidate::level1(c64(0.0, 0.0), one, c64(0.0, 0.0)),
        Candidate::level1(c64(0.0, 0.0), one, one),
        Candidate::level1(c64(0.0, 0.0), one, -one),
        Candidate::level1(c64(0.0, 0.0), one, i_),
        Candidate::level1(c64(0.0, 0.0), one, -i_),
        Candidate::level1(one, one, one),
        Candidate::level1(one, one, -one),
        Candidate::level1(one, c64(0.1, 0.0), c64(0.1, 0.0)),
        Candidate::level1(one, c64(0.1, 0.0), c64(-0.1, 0.0)),
    ];
    let mut seed = cfg.rng_seed ^ 0xce87;
    for &k in &kept_sorted {
        seed = seed.wrapping_mul(0x100_0000_01b3).wrapping_add(k as u64);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let level1_random = (cfg.cert_budget / 40).max(8) as usize;
    for _ in 0..level1_random {
        starts.push(Candidate::level1(
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ));
    }

    // Level 1, then level 2 on the remaining budget.
    let level1_budget = (budget * 3) / 5;
    let mut level2_start = budget - level1_budget;
    budget = level1_budget;
    for cand in &starts {
        if let Some(cert) = search_from(cand, &mut budget, &mut evaluate, &finish) {
            return Some(cert);
        }
        if budget <= 0 {
            break;
        }
    }

    let level2_random = (cfg.cert_budget / 60).max(6) as usize;
    let mut starts2: Vec<Candidate> = Vec::with_capacity(level2_random);
    for _ in 0..level2_random {
        let mut coords = vec![0.0f64; 24];
        for c in coords.iter_mut() {
            *c = rng.gen_range(-1.0..1.0);
        }
        starts2.push(Candidate::from_coords(2, &coords));
    }
    for cand in &starts2 {
        if let Some(cert) = search_from(cand, &mut level2_start, &mut evaluate, &finish) {
            return Some(cert);
        }
        if level2_start <= 0 {
            break;
        }
    }
    None
}

/// Greedy coordinate refinement of one start; stops on the first gap that
/// clears the margin.
fn search_from(
    start: &Candidate,
    budget: &mut i64,
    evaluate: &mut impl FnMut(&Candidate, &mut i64) -> Option<(f64, f64)>,
    finish: &impl Fn(&Candidate, f64, f64) -> NormDropCertificate,
) -> Option<NormDropCertificate> {
    let level = start.alpha.dim();
    let mut coords = start.coords();
    let (mut full, mut restricted) = evaluate(start, budget)?;
    if full - restricted > gap_margin(full) {
        return Some(finish(start, full, restricted));
    }
    let mut step = 0.5f64;
    for _round in 0..6 {
        let mut improved = false;
        for k in 0..coords.len() {
            for dir in [1.0f64, -1.0] {
                let mut trial = coords.clone();
                trial[k] += dir * step;
                let cand = Candidate::from_coords(level, &trial);
                let Some((f, r)) = evaluate(&cand, budget) else {
                    return None;
                };
                if f - r > gap_margin(f) {
                    return Some(finish(&cand, f, r));
                }
                if f - r > full - restricted {
                    coords = trial;
                    full = f;
                    restricted = r;
                    improved = true;
                    break;
                }
            }
            if *budget <= 0 {
                return None;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    None
}

/// Recomputes both norms of a stored certificate from scratch and checks the
/// gap still clears the stored margin.
pub fn revalidate_certificate(
    cert: &NormDropCertificate,
    decomp: &BlockDecomposition,
    cfg: &ToleranceConfig,
) -> bool {
    let all: Vec<usize> = (0..decomp.blocks.len()).collect();
    if cert.kept.iter().any(|&k| k >= decomp.blocks.len()) {
        return false;
    }
    let full = restricted_norm(
        &cert.alpha,
        &cert.beta,
        &cert.gamma,
        &decomp.blocks,
        &all,
        cfg,
    );
    let restricted = restricted_norm(
        &cert.alpha,
        &cert.beta,
        &cert.gamma,
        &decomp.blocks,
        &cert.kept,
        cfg,
    );
    full - restricted > 0.99 * cert.margin
        && (full - cert.norm_full).abs() <= 1e-8 * full.max(1.0)
        && (restricted - cert.norm_restricted).abs() <= 1e-8 * full.max(1.0)
}

/// The trivial certificate used when every block is dropped: the element `T`
/// itself has positive norm while the empty restriction vanishes.
pub(crate) fn trivial_full_drop(decomp: &BlockDecomposition, cfg: &ToleranceConfig) -> NormDropCertificate {
    let all: Vec<usize> = (0..decomp.blocks.len()).collect();
    let alpha = CMatrix::diag(&[c64(0.0, 0.0)]);
    let beta = CMatrix::diag(&[c64(1.0, 0.0)]);
    let gamma = CMatrix::diag(&[c64(0.0, 0.0)]);
    let full = restricted_norm(&alpha, &beta, &gamma, &decomp.blocks, &all, cfg);
    NormDropCertificate {
        level: 1,
        alpha,
        beta,
        gamma,
        kept: Vec::new(),
        norm_full: full,
        norm_restricted: 0.0,
        margin: gap_margin(full),
    }
}
