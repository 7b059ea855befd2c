//! Small dense symmetric linear algebra: exact `LDLᵀ`, floating Cholesky and
//! a cyclic Jacobi eigensolver. Sizes here never exceed about 20.

use num_traits::{Signed, Zero};

use crate::ratpoly::Rational;

/// Exact `D = L Δ Lᵀ` with `L` unit lower triangular.
///
/// Fails with the index of the first non-positive pivot, so `Ok` is an exact
/// certificate that `D` is positive definite.
pub fn ldl_exact(d: &[Vec<Rational>]) -> Result<(Vec<Vec<Rational>>, Vec<Rational>), usize> {
    let n = d.len();
    let mut l = vec![vec![Rational::zero(); n]; n];
    let mut diag: Vec<Rational> = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = d[i][j].clone();
            for k in 0..j {
                s -= &l[i][k] * &l[j][k] * &diag[k];
            }
            if i == j {
                if !s.is_positive() {
                    return Err(i);
                }
                diag.push(s);
                l[i][i] = Rational::from_integer(1.into());
            } else {
                l[i][j] = s / &diag[j];
            }
        }
    }
    Ok((l, diag))
}

/// Inverse of a unit lower triangular matrix, exactly.
pub fn unit_lower_inverse(l: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = l.len();
    let mut inv = vec![vec![Rational::zero(); n]; n];
    for col in 0..n {
        inv[col][col] = Rational::from_integer(1.into());
        for i in col + 1..n {
            let mut s = Rational::zero();
            for k in col..i {
                s -= &l[i][k] * &inv[k][col];
            }
            inv[i][col] = s;
        }
    }
    inv
}

/// `A M Aᵀ` in exact arithmetic.
pub fn congruence_exact(a: &[Vec<Rational>], m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let am: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .filter(|&k| !a[i][k].is_zero())
                        .fold(Rational::zero(), |s, k| s + &a[i][k] * &m[k][j])
                })
                .collect()
        })
        .collect();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v = (0..n)
                .filter(|&k| !a[j][k].is_zero())
                .fold(Rational::zero(), |s, k| s + &am[i][k] * &a[j][k]);
            out[j][i] = v.clone();
            out[i][j] = v;
        }
    }
    out
}

/// Lower Cholesky factor of a symmetric matrix, or the index of the first
/// non-positive pivot.
pub fn cholesky(d: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, usize> {
    let n = d.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s = d[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if !(s > 0.0) {
                    return Err(i);
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Solve `L x = b` for lower triangular `L`.
pub fn forward_solve(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; b.len()];
    for i in 0..b.len() {
        let s = b[i] - (0..i).map(|k| l[i][k] * x[k]).sum::<f64>();
        x[i] = s / l[i][i];
    }
    x
}

/// Solve `Lᵀ x = b` for lower triangular `L`.
pub fn backward_solve_transpose(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s = b[i] - (i + 1..n).map(|k| l[k][i] * x[k]).sum::<f64>();
        x[i] = s / l[i][i];
    }
    x
}

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                s += x * x;
            }
        }
    }
    s.sqrt()
}

pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

/// Cyclic Jacobi diagonalization of a symmetric matrix.
///
/// Sweeps rows in order `(p, q)`, `p < q`, until the off-diagonal Frobenius
/// norm drops below `tol` times the Frobenius norm of the input.
pub fn jacobi_eigen(s: &[Vec<f64>], tol: f64, max_sweeps: usize) -> SymmetricEigen {
    let n = s.len();
    let mut a = s.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale = a
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let mut sweeps = 0;
    while sweeps < max_sweeps && off_diagonal_norm(&a) > tol * scale {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - sn * vq;
                    row[q] = sn * vp + c * vq;
                }
            }
        }
    }
    SymmetricEigen {
        values: (0..n).map(|i| a[i][i]).collect(),
        vectors: v,
        sweeps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{rat, rat_int};

    #[test]
    fn ldl_reconstructs_and_detects_indefinite() {
        let d = vec![
            vec![rat_int(4), rat_int(2), rat(2, 3)],
            vec![rat_int(2), rat_int(5), rat_int(1)],
            vec![rat(2, 3), rat_int(1), rat_int(3)],
        ];
        let (l, diag) = ldl_exact(&d).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s = (0..3).fold(Rational::zero(), |s, k| s + &l[i][k] * &diag[k] * &l[j][k]);
                assert_eq!(s, d[i][j]);
            }
        }
        let indefinite = vec![vec![rat_int(1), rat_int(2)], vec![rat_int(2), rat_int(1)]];
        assert_eq!(ldl_exact(&indefinite).err(), Some(1));
    }

    #[test]
    fn unit_lower_inverse_is_inverse() {
        let l = vec![
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat(1, 2), rat_int(1), rat_int(0)],
            vec![rat(-3, 4), rat(5, 7), rat_int(1)],
        ];
        let inv = unit_lower_inverse(&l);
        for i in 0..3 {
            for j in 0..3 {
                let s = (0..3).fold(Rational::zero(), |s, k| s + &l[i][k] * &inv[k][j]);
                assert_eq!(s, if i == j { rat_int(1) } else { rat_int(0) });
            }
        }
    }

    #[test]
    fn cholesky_solves() {
        let d = vec![vec![4.0, 2.0], vec![2.0, 3.0]];
        let l = cholesky(&d).unwrap();
        let y = forward_solve(&l, &[2.0, 1.0]);
        let x = backward_solve_transpose(&l, &y);
        assert!((4.0 * x[0] + 2.0 * x[1] - 2.0).abs() < 1e-14);
        assert!((2.0 * x[0] + 3.0 * x[1] - 1.0).abs() < 1e-14);
        assert_eq!(cholesky(&[vec![1.0, 2.0], vec![2.0, 1.0]]), Err(1));
    }

    #[test]
    fn jacobi_diagonalizes() {
        let s = vec![vec![2.0, -1.0, 0.0], vec![-1.0, 2.0, -1.0], vec![0.0, -1.0, 2.0]];
        let eig = jacobi_eigen(&s, 1e-14, 50);
        let mut vals = eig.values.clone();
        vals.sort_by(f64::total_cmp);
        let sq2 = 2f64.sqrt();
        for (got, want) in vals.iter().zip([2.0 - sq2, 2.0, 2.0 + sq2]) {
            assert!((got - want).abs() < 1e-12);
        }
        for k in 0..3 {
            for i in 0..3 {
                let sv: f64 = (0..3).map(|j| s[i][j] * eig.vectors[j][k]).sum();
                assert!((sv - eig.values[k] * eig.vectors[i][k]).abs() < 1e-12);
            }
        }
    }
}
