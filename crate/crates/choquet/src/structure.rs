//! Commutant computations and decomposition of a matrix into a direct sum of
//! irreducible blocks, the presentation the block classifier works on.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::ToleranceConfig;
use crate::linalg::{self, c64, CMatrix, Cplx, LinalgError};

/// Rank decisions on the Gram matrix of the commutator system cannot resolve
/// zeros below the square root of machine precision.
const GRAM_RANK_FLOOR: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("decomposition stalled: {reason}")]
    DecompositionFailure { reason: String },
    #[error("shift weights must be nonzero")]
    ZeroWeight,
}

/// Unitary change of basis splitting a matrix into irreducible direct
/// summands, blocks ordered by (dimension, Re trace, Im trace).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub change_of_basis: CMatrix,
    pub blocks: Vec<CMatrix>,
    pub block_dims: Vec<usize>,
    /// `‖U* T U − ⊕ blocks‖_F / ‖T‖_F`, the mass discarded off the diagonal.
    pub residual: f64,
}

/// Splits ascending values at gaps larger than `tol`.
pub(crate) fn cluster_ascending(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..values.len() {
        if values[i] - values[i - 1] > tol {
            out.push(start..i);
            start = i;
        }
    }
    out.push(start..values.len());
    out
}

/// Hermitian and skew parts `(H1, H2)` with `T = H1 + i H2`.
fn cartesian_parts(t: &CMatrix) -> (CMatrix, CMatrix) {
    let h1 = t.hermitize();
    let h2 = CMatrix::from_fn(t.dim(), |i, j| {
        let d = (t[(i, j)] - t[(j, i)].conj()) * 0.5;
        // (T - T*)/(2i) = -i/2 (T - T*)
        Complex64::new(d.im, -d.re)
    });
    (h1, h2)
}

struct ClusterBasis {
    /// Eigenvector columns of the splitting operator, cluster-grouped.
    q: CMatrix,
    /// Index ranges of the clusters.
    clusters: Vec<std::ops::Range<usize>>,
}

fn cluster_split(h: &CMatrix, cfg: &ToleranceConfig) -> Result<ClusterBasis, LinalgError> {
    let eig = linalg::herm_eig(h, cfg)?;
    let scale = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, &b| a.max(b.abs()));
    let tol = ToleranceConfig::tol(cfg.eps_eig, scale);
    let clusters = cluster_ascending(&eig.eigenvalues, tol);
    Ok(ClusterBasis {
        q: eig.vectors,
        clusters,
    })
}

/// Dimension of `{X : XT = TX, XT* = T*X}` together with an orthonormal basis
/// of that space (as matrices in the original basis).
///
/// Rather than a dense SVD of the `2n² × n²` commutator system, `X` is first
/// forced block-diagonal along the eigenvalue clusters of one Cartesian part
/// (which encodes commutation with it); the Gram matrix of the remaining
/// commutator constraints is then diagonalized and singular values below
/// `eps_eig` times the largest count as zero.
pub fn commutant_basis(
    t: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<(usize, Vec<CMatrix>), StructureError> {
    t.check_dim_limit()?;
    let n = t.dim();
    if n == 1 {
        return Ok((1, vec![CMatrix::identity(1)]));
    }
    let (h1, h2) = cartesian_parts(t);
    let split1 = cluster_split(&h1, cfg)?;
    let split2 = cluster_split(&h2, cfg)?;
    // Split along whichever part separates best; the other supplies the
    // remaining constraints.
    let (split, other) = if split2.clusters.len() > split1.clusters.len() {
        (split2, &h1)
    } else {
        (split1, &h2)
    };

    if split.clusters.len() == 1 {
        // Both parts are scalar within tolerance: T is scalar and everything
        // commutes with it.
        let mut basis = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut e = CMatrix::zeros(n);
                e[(r, c)] = c64(1.0, 0.0);
                basis.push(e);
            }
        }
        return Ok((n * n, basis));
    }

    let q = &split.q;
    let a2 = q.adjoint().mul(other).mul(q);
    let a2sq = a2.mul(&a2);

    // Coordinates: one unit matrix per in-cluster entry (g, h).
    let mut coords: Vec<(usize, usize)> = Vec::new();
    for cl in &split.clusters {
        for g in cl.clone() {
            for h in cl.clone() {
                coords.push((g, h));
            }
        }
    }
    let m = coords.len();

    // Gram matrix of the columns vec(E_{gh} A2 - A2 E_{gh}).
    let mut gram = CMatrix::zeros(m);
    for i in 0..m {
        let (rho, kap) = coords[i];
        for j in 0..m {
            let (g, h) = coords[j];
            let mut val = -2.0 * a2[(h, kap)] * a2[(rho, g)];
            if rho == g {
                val += a2sq[(h, kap)];
            }
            if kap == h {
                val += a2sq[(rho, g)];
            }
            gram[(i, j)] = val;
        }
    }

    let eig = linalg::herm_eig(&gram, cfg)?;
    let smax_sq = eig.max().max(0.0);
    // The Gram matrix squares the singular values, so zeros surface only at
    // the square root of machine precision relative to the top; the rank
    // threshold must not be tighter than that.
    let eps_rank = cfg.eps_eig.max(GRAM_RANK_FLOOR);
    let thresh = if smax_sq <= 1e-28 {
        f64::INFINITY // the constraint map vanishes; everything is null
    } else {
        eps_rank * eps_rank * smax_sq
    };

    let mut basis = Vec::new();
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam.max(0.0) <= thresh {
            // Assemble the block-diagonal matrix in the rotated basis.
            let mut xb = CMatrix::zeros(n);
            for (idx, &(g, h)) in coords.iter().enumerate() {
                xb[(g, h)] = eig.vectors[(idx, k)];
            }
            basis.push(q.mul(&xb).mul(&q.adjoint()));
        }
    }
    if basis.is_empty() {
        // The identity always commutes; an empty answer means the threshold
        // undershot the solver's noise floor.
        return Ok((1, vec![CMatrix::identity(n)]));
    }
    Ok((basis.len(), basis))
}

/// Dimension of the commutant of `{T, T*}`; `T` is irreducible iff 1.
pub fn commutant_dimension(t: &CMatrix, cfg: &ToleranceConfig) -> Result<usize, StructureError> {
    Ok(commutant_basis(t, cfg)?.0)
}

/// Splits `T` along the eigenspaces of non-scalar Hermitian commutant
/// elements until every block is irreducible, then orders the blocks
/// deterministically.
pub fn decompose_irreducible(
    t: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<BlockDecomposition, StructureError> {
    t.check_dim_limit()?;
    let tnorm = t.frobenius_norm();
    let (u, blocks) = split_recursive(t, cfg)?;

    // Deterministic block order: dimension ascending, then trace.
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    let key = |b: &CMatrix| {
        let tr: Cplx = (0..b.dim()).map(|i| b[(i, i)]).sum();
        (b.dim(), tr.re, tr.im)
    };
    order.sort_by(|&i, &j| {
        let (da, ra, ia) = key(&blocks[i]);
        let (db, rb, ib) = key(&blocks[j]);
        da.cmp(&db)
            .then(ra.partial_cmp(&rb).expect("finite trace"))
            .then(ia.partial_cmp(&ib).expect("finite trace"))
    });

    // Permute the columns of U to match the block order.
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut off = 0;
    for b in &blocks {
        offsets.push(off);
        off += b.dim();
    }
    let n = t.dim();
    let mut u_sorted = CMatrix::zeros(n);
    let mut col = 0;
    for &bi in &order {
        for c in 0..blocks[bi].dim() {
            for r in 0..n {
                u_sorted[(r, col)] = u[(r, offsets[bi] + c)];
            }
            col += 1;
        }
    }
    let blocks_sorted: Vec<CMatrix> = order.iter().map(|&i| blocks[i].clone()).collect();

    let block_dims: Vec<usize> = blocks_sorted.iter().map(|b| b.dim()).collect();
    let rebuilt = linalg::direct_sum(&blocks_sorted)?;
    let conj = u_sorted.adjoint().mul(t).mul(&u_sorted);
    let residual = conj.sub(&rebuilt).frobenius_norm() / tnorm.max(f64::MIN_POSITIVE);
    if residual > 1e-8 {
        return Err(StructureError::DecompositionFailure {
            reason: format!("residual {residual:.3e} exceeds 1e-8 of the input norm"),
        });
    }
    Ok(BlockDecomposition {
        change_of_basis: u_sorted,
        blocks: blocks_sorted,
        block_dims,
        residual,
    })
}

/// Recursive splitting; returns the accumulated unitary and the leaf blocks
/// in basis order (unsorted).
fn split_recursive(
    t: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<(CMatrix, Vec<CMatrix>), StructureError> {
    let n = t.dim();
    let (dim, basis) = commutant_basis(t, cfg)?;
    if dim == 1 || n == 1 {
        return Ok((CMatrix::identity(n), vec![t.clone()]));
    }

    let tnorm = t.frobenius_norm().max(1.0);
    let mut candidates: Vec<CMatrix> = Vec::new();
    for x in &basis {
        candidates.push(x.hermitize());
        candidates.push(CMatrix::from_fn(n, |i, j| {
            let d = (x[(i, j)] - x[(j, i)].conj()) * 0.5;
            Complex64::new(d.im, -d.re)
        }));
    }
    // Seeded random Hermitian combinations in case every single basis part is
    // degenerate (equal blocks produce such bases).
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x5117_7ed0 ^ n as u64);
    for _ in 0..8 {
        let mut k = CMatrix::zeros(n);
        for x in &basis {
            let (a, b) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            k = k.add(&x.hermitize().scale(c64(a, 0.0)));
            k = k.add(
                &CMatrix::from_fn(n, |i, j| {
                    let d = (x[(i, j)] - x[(j, i)].conj()) * 0.5;
                    Complex64::new(d.im, -d.re)
                })
                .scale(c64(b, 0.0)),
            );
        }
        candidates.push(k);
    }

    for k in &candidates {
        let knorm = k.frobenius_norm();
        if knorm <= 1e-12 {
            continue;
        }
        // Skip (near-)scalar candidates.
        let mean: Cplx = (0..n).map(|i| k[(i, i)]).sum::<Cplx>() / n as f64;
        let dev = k.sub(&CMatrix::identity(n).scale(mean)).frobenius_norm();
        if dev <= 1e-8 * knorm.max(1.0) {
            continue;
        }

        let eig = linalg::herm_eig(k, cfg)?;
        let spread = eig.max() - eig.min();
        let tol = (1e-8 * spread).max(1e-12);
        let clusters = cluster_ascending(&eig.eigenvalues, tol);
        if clusters.len() < 2 {
            continue;
        }

        let v = &eig.vectors;
        let rotated = v.adjoint().mul(t).mul(v);
        // Off-diagonal mass between clusters must vanish for a genuine
        // commutant element.
        let mut off = 0.0f64;
        for (ci, cl) in clusters.iter().enumerate() {
            for (cj, cm) in clusters.iter().enumerate() {
                if ci == cj {
                    continue;
                }
                for r in cl.clone() {
                    for c in cm.clone() {
                        off += rotated[(r, c)].norm_sqr();
                    }
                }
            }
        }
        if off.sqrt() > 1e-9 * tnorm {
            continue;
        }

        // Recurse on the diagonal blocks.
        let mut total_u = v.clone();
        let mut leaves: Vec<CMatrix> = Vec::new();
        let mut sub_us: Vec<CMatrix> = Vec::new();
        for cl in &clusters {
            let idx: Vec<usize> = cl.clone().collect();
            let sub = rotated.submatrix(&idx);
            let (su, mut sblocks) = split_recursive(&sub, cfg)?;
            sub_us.push(su);
            leaves.append(&mut sblocks);
        }
        let embedded = linalg::direct_sum(&sub_us)?;
        total_u = total_u.mul(&embedded);
        return Ok((total_u, leaves));
    }

    Err(StructureError::DecompositionFailure {
        reason: format!(
            "commutant has dimension {dim} but no candidate split the space; tolerances may be mis-set"
        ),
    })
}

/// Eigenvalues of a (numerically) normal matrix by joint diagonalization of
/// its Cartesian parts; more robust than general QR when normality is known.
pub(crate) fn normal_eigenvalues(
    t: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<Vec<Cplx>, StructureError> {
    let (h1, _h2) = cartesian_parts(t);
    let split = cluster_split(&h1, cfg)?;
    let mut out = Vec::with_capacity(t.dim());
    let q = &split.q;
    let rot = q.adjoint().mul(t).mul(q);
    for cl in &split.clusters {
        let idx: Vec<usize> = cl.clone().collect();
        let sub = rot.submatrix(&idx);
        if sub.dim() == 1 {
            out.push(sub[(0, 0)]);
            continue;
        }
        // Within a cluster H1 is scalar, so the block is normal with
        // Hermitian part ≈ μ I; diagonalize its skew part.
        let (_, s2) = cartesian_parts(&sub);
        let eig = linalg::herm_eig(&s2, cfg)?;
        for k in 0..sub.dim() {
            let v = eig.vector(k);
            out.push(sub.rayleigh(&v));
        }
    }
    Ok(out)
}

/// Unitary-equivalence fingerprint: equal dimension, matching spectra and
/// matching Gram spectra within 1e-8 of the common scale. Collisions are
/// possible; matches are treated as equivalence, never the other way round.
pub(crate) fn unitarily_equivalent_fingerprint(
    a: &CMatrix,
    b: &CMatrix,
    cfg: &ToleranceConfig,
) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let scale = a.frobenius_norm().max(b.frobenius_norm()).max(1.0);
    let tol = 1e-8 * scale;
    let (Ok(ea), Ok(eb)) = (linalg::eigenvalues(a, cfg), linalg::eigenvalues(b, cfg)) else {
        return false;
    };
    let mut used = vec![false; eb.len()];
    'outer: for x in &ea {
        for (i, y) in eb.iter().enumerate() {
            if !used[i] && (x - y).norm() <= tol {
                used[i] = true;
                continue 'outer;
            }
        }
        return false;
    }
    let ga = linalg::herm_eig(&a.adjoint().mul(a), cfg);
    let gb = linalg::herm_eig(&b.adjoint().mul(b), cfg);
    let (Ok(ga), Ok(gb)) = (ga, gb) else {
        return false;
    };
    ga.eigenvalues
        .iter()
        .zip(&gb.eigenvalues)
        .all(|(x, y)| (x - y).abs() <= tol * scale)
}

/// True iff the two weight vectors have the same length and entrywise equal
/// moduli within 1e-12 relative tolerance.
pub fn shift_moduli_equivalent(xi: &[Cplx], eta: &[Cplx]) -> Result<bool, StructureError> {
    if xi.is_empty() || eta.is_empty() {
        return Err(StructureError::ZeroWeight);
    }
    if xi.iter().chain(eta.iter()).any(|w| w.norm() == 0.0) {
        return Err(StructureError::ZeroWeight);
    }
    if xi.len() != eta.len() {
        return Ok(false);
    }
    Ok(xi.iter().zip(eta).all(|(a, b)| {
        let (ma, mb) = (a.norm(), b.norm());
        (ma - mb).abs() <= 1e-12 * ma.max(mb)
    }))
}
