//! Eigenvalues of small complex Hermitian matrices.
//!
//! A Hermitian `n x n` matrix `A = X + iY` embeds into the real symmetric
//! `2n x 2n` block matrix `[[X, -Y], [Y, X]]` whose spectrum is that of `A`
//! with every eigenvalue doubled. A cyclic Jacobi sweep handles the real
//! symmetric problem; 4x4 inputs converge in a handful of sweeps.

use num_complex::Complex64;

/// Eigenvalues (ascending) of a 4x4 complex Hermitian matrix.
pub fn hermitian_eigenvalues_4(m: &[[Complex64; 4]; 4]) -> [f64; 4] {
    let mut a = [[0.0f64; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = m[i][j].re;
            a[i][j + 4] = -m[i][j].im;
            a[i + 4][j] = m[i][j].im;
            a[i + 4][j + 4] = m[i][j].re;
        }
    }
    let mut eig = jacobi_symmetric(&mut a);
    eig.sort_by(f64::total_cmp);
    // Doubled spectrum: take every second entry.
    [eig[0], eig[2], eig[4], eig[6]]
}

/// Sum of the negative eigenvalues of a 4x4 complex Hermitian matrix,
/// computed from the embedded spectrum (robust to the pair degeneracy).
pub fn negative_eigenvalue_sum_4(m: &[[Complex64; 4]; 4]) -> f64 {
    let mut a = [[0.0f64; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = m[i][j].re;
            a[i][j + 4] = -m[i][j].im;
            a[i + 4][j] = m[i][j].im;
            a[i + 4][j + 4] = m[i][j].re;
        }
    }
    let eig = jacobi_symmetric(&mut a);
    0.5 * eig.iter().filter(|&&x| x < 0.0).sum::<f64>()
}

/// Cyclic Jacobi diagonalization of a real symmetric 8x8 matrix.
///
/// Rotations run on every nonzero off-diagonal entry regardless of the
/// global norm: blocks that are exactly decoupled from the large entries
/// (the situation of a perturbative partial transpose, where the physical
/// eigenvalues sit 20+ orders below the trace) are then resolved to full
/// relative precision instead of being flushed against `eps * norm`.
#[allow(clippy::needless_range_loop)]
fn jacobi_symmetric(a: &mut [[f64; 8]; 8]) -> [f64; 8] {
    let n = 8;

    for _sweep in 0..40 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                // Rotation annihilating a[p][q].
                let theta = 0.5 * (a[q][q] - a[p][p]) / apq;
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[p][k] = a[k][p];
                        a[k][q] = s * akp + c * akq;
                        a[q][k] = a[k][q];
                    }
                }
            }
        }
    }
    let mut out = [0.0; 8];
    for i in 0..n {
        out[i] = a[i][i];
    }
    out
}
