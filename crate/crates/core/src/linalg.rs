//! Small fixed-size dense linear algebra: Jacobi eigenvalues, a 3x3 SVD and
//! Gaussian elimination. Matrices are row-major `[[T; N]; N]`.

use crate::scalar::Scalar;

pub type Mat3<T> = [[T; 3]; 3];

const MAX_SWEEPS: usize = 64;

pub fn identity<T: Scalar, const N: usize>() -> [[T; N]; N] {
    let mut m = [[T::zero(); N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn transpose<T: Scalar, const N: usize>(a: &[[T; N]; N]) -> [[T; N]; N] {
    let mut t = [[T::zero(); N]; N];
    for i in 0..N {
        for j in 0..N {
            t[j][i] = a[i][j];
        }
    }
    t
}

pub fn matmul<T: Scalar, const N: usize>(a: &[[T; N]; N], b: &[[T; N]; N]) -> [[T; N]; N] {
    let mut c = [[T::zero(); N]; N];
    for i in 0..N {
        for j in 0..N {
            c[i][j] = (0..N).fold(T::zero(), |acc, k| acc + a[i][k] * b[k][j]);
        }
    }
    c
}

pub fn det3<T: Scalar>(m: &Mat3<T>) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Largest absolute entry.
pub fn max_abs<T: Scalar, const N: usize, const M: usize>(a: &[[T; M]; N]) -> T {
    a.iter().flat_map(|r| r.iter()).fold(T::zero(), |m, &x| m.max(x.abs()))
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues<T: Scalar, const N: usize>(a: &[[T; N]; N]) -> [T; N] {
    let mut a = *a;
    let scale = max_abs(&a);
    if scale == T::zero() {
        return [T::zero(); N];
    }
    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..N {
            for q in (p + 1)..N {
                off = off + a[p][q] * a[p][q];
            }
        }
        if off.sqrt() <= T::epsilon() * scale * T::lit(1e-3) {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::lit(2.0) * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..N {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
            }
        }
    }
    let mut ev = [T::zero(); N];
    for (i, e) in ev.iter_mut().enumerate() {
        *e = a[i][i];
    }
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Singular value decomposition `a = u * diag(sigma) * v^T` of a 3x3 matrix
/// by one-sided Jacobi rotations. Singular values are sorted descending and
/// `u` is always a full orthogonal matrix, completed arbitrarily on the null
/// space of `a`.
pub fn svd3<T: Scalar>(a: &Mat3<T>) -> (Mat3<T>, [T; 3], Mat3<T>) {
    let mut w = *a;
    let mut v: Mat3<T> = identity();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..3 {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for row in &w {
                    alpha = alpha + row[p] * row[p];
                    beta = beta + row[q] * row[q];
                    gamma = gamma + row[p] * row[q];
                }
                if gamma == T::zero() || gamma.abs() <= T::epsilon() * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for m in [&mut w, &mut v] {
                    for row in m.iter_mut() {
                        let (xp, xq) = (row[p], row[q]);
                        row[p] = c * xp - s * xq;
                        row[q] = s * xp + c * xq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: [T; 3] = std::array::from_fn(|j| (0..3).fold(T::zero(), |acc, i| acc + w[i][j] * w[i][j]).sqrt());
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));

    let sigma: [T; 3] = std::array::from_fn(|k| norms[order[k]]);
    let mut v_sorted = [[T::zero(); 3]; 3];
    let mut u_cols: [Option<[T; 3]>; 3] = [None; 3];
    let cutoff = sigma[0] * T::epsilon() * T::lit(16.0);
    for (k, &j) in order.iter().enumerate() {
        for i in 0..3 {
            v_sorted[i][k] = v[i][j];
        }
        if sigma[k] > cutoff && sigma[k] > T::zero() {
            u_cols[k] = Some(std::array::from_fn(|i| w[i][j] / sigma[k]));
        }
    }
    let u_cols = complete_orthonormal(u_cols);
    let mut u = [[T::zero(); 3]; 3];
    for (k, col) in u_cols.iter().enumerate() {
        for i in 0..3 {
            u[i][k] = col[i];
        }
    }
    (u, sigma, v_sorted)
}

fn cross<T: Scalar>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize<T: Scalar>(a: [T; 3]) -> [T; 3] {
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

// Leading columns are filled first; missing ones come from cross products.
fn complete_orthonormal<T: Scalar>(cols: [Option<[T; 3]>; 3]) -> [[T; 3]; 3] {
    let e = |i: usize| {
        let mut v = [T::zero(); 3];
        v[i] = T::one();
        v
    };
    match cols {
        [Some(a), Some(b), Some(c)] => [a, b, c],
        [Some(a), Some(b), None] => [a, b, normalize(cross(&a, &b))],
        [Some(a), None, _] => {
            let axis = (0..3)
                .min_by(|&i, &j| a[i].abs().partial_cmp(&a[j].abs()).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap_or(0);
            let b = normalize(cross(&a, &e(axis)));
            [a, b, cross(&a, &b)]
        }
        _ => [e(0), e(1), e(2)],
    }
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting. Returns
/// `None` when a pivot falls below `pivot_tol` times the largest entry of `a`.
pub fn solve<T: Scalar, const N: usize>(a: &[[T; N]; N], b: &[T; N], pivot_tol: T) -> Option<[T; N]> {
    let mut a = *a;
    let mut b = *b;
    let scale = max_abs(&a);
    if scale == T::zero() {
        return None;
    }
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
        if a[pivot][col].abs() <= pivot_tol * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..N {
            let f = a[row][col] / a[col][col];
            for k in col..N {
                a[row][k] = a[row][k] - f * a[col][k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = [T::zero(); N];
    for row in (0..N).rev() {
        let s = ((row + 1)..N).fold(b[row], |acc, k| acc - a[row][k] * x[k]);
        x[row] = s / a[row][row];
    }
    Some(x)
}
