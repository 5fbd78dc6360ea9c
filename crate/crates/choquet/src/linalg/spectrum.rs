//! General complex spectra via Householder Hessenberg reduction followed by
//! single-shift QR iteration with deflation.

use num_complex::Complex64;

use super::{CMatrix, Cplx, LinalgError};
use crate::config::ToleranceConfig;

/// Spectrum of a general square matrix, with multiplicity, sorted by
/// (re, im) for deterministic output.
///
/// Precondition: dimension at most the supported limit.
pub fn eigenvalues(a: &CMatrix, _cfg: &ToleranceConfig) -> Result<Vec<Cplx>, LinalgError> {
    a.check_dim_limit()?;
    let n = a.dim();
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let mut h = a.clone();
    to_hessenberg(&mut h);
    let mut eigs = qr_spectrum(&mut h)?;
    eigs.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .expect("finite eigenvalues")
            .then(x.im.partial_cmp(&y.im).expect("finite eigenvalues"))
    });
    Ok(eigs)
}

/// In-place reduction to upper Hessenberg form by unitary Householder
/// similarity transforms.
fn to_hessenberg(a: &mut CMatrix) {
    let n = a.dim();
    for j in 0..n.saturating_sub(2) {
        // Reflector annihilating entries below the first subdiagonal in col j.
        let m = n - j - 1;
        let mut x: Vec<Cplx> = (0..m).map(|k| a[(j + 1 + k, j)]).collect();
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        x[0] += phase * norm_x;
        let norm_v = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_v == 0.0 {
            continue;
        }
        let v: Vec<Cplx> = x.into_iter().map(|z| z / norm_v).collect();

        // A <- P A where P = I - 2 v v* acts on rows j+1..n.
        for c in j..n {
            let mut u = Complex64::new(0.0, 0.0);
            for k in 0..m {
                u += v[k].conj() * a[(j + 1 + k, c)];
            }
            let u2 = 2.0 * u;
            for k in 0..m {
                let delta = u2 * v[k];
                a[(j + 1 + k, c)] -= delta;
            }
        }
        // A <- A P on columns j+1..n.
        for r in 0..n {
            let mut u = Complex64::new(0.0, 0.0);
            for k in 0..m {
                u += a[(r, j + 1 + k)] * v[k];
            }
            let u2 = 2.0 * u;
            for k in 0..m {
                let delta = u2 * v[k].conj();
                a[(r, j + 1 + k)] -= delta;
            }
        }
        // Entries below the subdiagonal are now zero by construction.
        for k in 1..m {
            a[(j + 1 + k, j)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalues of the two-by-two block [[a, b], [c, d]].
fn eig2(a: Cplx, b: Cplx, c: Cplx, d: Cplx) -> (Cplx, Cplx) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    ((tr + disc) * 0.5, (tr - disc) * 0.5)
}

/// Shifted QR iteration on an upper Hessenberg matrix; consumes `h`.
fn qr_spectrum(h: &mut CMatrix) -> Result<Vec<Cplx>, LinalgError> {
    let n = h.dim();
    let norm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut eigs: Vec<Cplx> = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut stagnation = 0usize;
    let mut total_steps = 0usize;
    let budget = 60 * n * n + 200;

    loop {
        // Deflate negligible subdiagonal entries in the active window.
        for k in 1..=hi {
            let small = f64::EPSILON * (h[(k - 1, k - 1)].norm() + h[(k, k)].norm());
            let small = if small > 0.0 {
                small
            } else {
                f64::EPSILON * norm
            };
            if h[(k, k - 1)].norm() <= small {
                h[(k, k - 1)] = Complex64::new(0.0, 0.0);
            }
        }

        // Peel off converged eigenvalues from the bottom.
        while hi > 0 && h[(hi, hi - 1)].norm() == 0.0 {
            eigs.push(h[(hi, hi)]);
            hi -= 1;
            stagnation = 0;
        }
        if hi == 0 {
            eigs.push(h[(0, 0)]);
            break;
        }

        // Find the start of the active unreduced block ending at hi.
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }
        if hi - lo == 1 {
            // Closed form for a trailing 2x2 block.
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eigs.push(l1);
            eigs.push(l2);
            if lo == 0 {
                break;
            }
            h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
            hi = lo - 1;
            stagnation = 0;
            continue;
        }

        total_steps += 1;
        stagnation += 1;
        if total_steps > budget {
            return Err(LinalgError::NoConvergence {
                solver: "hessenberg-qr",
            });
        }

        // Wilkinson shift from the trailing 2x2, with a deterministic
        // exceptional shift when progress stalls.
        let shift = if stagnation % 13 == 0 {
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            let (l1, l2) = eig2(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            let d = h[(hi, hi)];
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };

        qr_step(h, lo, hi, shift);
    }

    Ok(eigs)
}

/// One explicit single-shift QR step on the window [lo, hi].
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, shift: Cplx) {
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    // QR factorization by Givens rotations chasing the subdiagonal.
    let mut rotations: Vec<(f64, Cplx)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let f = h[(k, k)];
        let g = h[(k + 1, k)];
        let (c, s) = givens(f, g);
        rotations.push((c, s));
        // Apply [[c, s], [-conj(s), c]] to rows k, k+1.
        for col in k..=hi {
            let a = h[(k, col)];
            let b = h[(k + 1, col)];
            h[(k, col)] = c * a + s * b;
            h[(k + 1, col)] = -s.conj() * a + c * b;
        }
        h[(k + 1, k)] = Complex64::new(0.0, 0.0);
    }
    // H <- R Q, right-multiplying by the adjoints in order.
    for (k, (c, s)) in rotations.iter().enumerate() {
        let k = lo + k;
        let top = hi.min(k + 1);
        for row in lo..=top {
            let a = h[(row, k)];
            let b = h[(row, k + 1)];
            h[(row, k)] = *c * a + s.conj() * b;
            h[(row, k + 1)] = -*s * a + *c * b;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}

/// Complex Givens pair (c real, s complex) with
/// [[c, s], [-conj(s), c]] · (f, g)^T = (r, 0)^T.
fn givens(f: Cplx, g: Cplx) -> (f64, Cplx) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let fn_ = f.norm();
    let d = (fn_ * fn_ + gn * gn).sqrt();
    if fn_ == 0.0 {
        (0.0, g.conj() / d)
    } else {
        let sign_f = f / fn_;
        (fn_ / d, sign_f * g.conj() / d)
    }
}
