use crate::error::{Error, Result};

use super::Matrix;

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    factors: Vec<f64>,
    perm: Vec<usize>,
    parity: f64,
}

impl Lu {
    pub fn factor(a: &Matrix) -> Result<Self> {
        let n = a.ensure_square()?;
        let mut f = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut parity = 1.0;
        let scale = a.max_abs();
        let tiny = f64::EPSILON * n.max(1) as f64 * scale;

        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, f[i * n + k].abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot <= tiny || pivot == 0.0 {
                return Err(Error::Singular { column: k, pivot });
            }
            if p != k {
                for j in 0..n {
                    f.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                parity = -parity;
            }
            let (head, tail) = f.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..];
            let inv = 1.0 / pivot_row[k];
            for row in tail.chunks_exact_mut(n) {
                let l = row[k] * inv;
                row[k] = l;
                if l != 0.0 {
                    for (x, u) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                        *x -= l * u;
                    }
                }
            }
        }
        Ok(Self {
            n,
            factors: f,
            perm,
            parity,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.factors[i * n..i * n + i];
            let s: f64 = row.iter().zip(&x[..i]).map(|(l, y)| l * y).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.factors[i * n..(i + 1) * n];
            let s: f64 = row[i + 1..]
                .iter()
                .zip(&x[i + 1..])
                .map(|(u, y)| u * y)
                .sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    pub fn determinant(&self) -> f64 {
        (0..self.n).fold(self.parity, |d, i| d * self.factors[i * self.n + i])
    }
}

/// Solves `A x = b` with one step of iterative refinement.
pub fn solve_linear(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.ensure_square()?;
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries, matrix is {n}x{n}",
            b.len()
        )));
    }
    let lu = Lu::factor(a)?;
    let mut x = lu.solve(b);
    refine(a, &lu, b, &mut x);
    Ok(x)
}

pub(crate) fn refine(a: &Matrix, lu: &Lu, b: &[f64], x: &mut [f64]) {
    let ax = a.mul_vec(x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(b, ax)| b - ax).collect();
    let dx = lu.solve(&r);
    for (x, d) in x.iter_mut().zip(dx) {
        *x += d;
    }
}

pub fn determinant(a: &Matrix) -> Result<f64> {
    match Lu::factor(a) {
        Ok(lu) => Ok(lu.determinant()),
        Err(Error::Singular { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn norm(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn identity_returns_rhs() {
        let b = [3.0, -1.5, 7.25];
        assert_eq!(solve_linear(&Matrix::identity(3), &b).unwrap(), b.to_vec());
    }

    #[test]
    fn diagonal_system() {
        let a = Matrix::from_diagonal(&[2.0, 4.0]);
        let x = solve_linear(&a, &[2.0, 4.0]).unwrap();
        assert_eq!(x, vec![1.0, 1.0]);
    }

    #[test]
    fn singular_is_reported() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(
            solve_linear(&a, &[1.0, 1.0]),
            Err(Error::Singular { .. })
        ));
        assert_eq!(determinant(&a).unwrap(), 0.0);
    }

    #[test]
    fn random_residual_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = 16;
            let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut a = Matrix::from_row_major(n, n, data).unwrap();
            for i in 0..n {
                a[(i, i)] += 4.0;
            }
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = solve_linear(&a, &b).unwrap();
            let r: Vec<f64> = a.mul_vec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
            let bound = 1e-10 * (a.frobenius_norm() * norm(&x) + norm(&b));
            assert!(norm(&r) <= bound, "residual {} > {}", norm(&r), bound);
        }
    }

    #[test]
    fn ill_conditioned_residual_bound() {
        // Condition number ~1e8 via graded singular values.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 12;
        let q1 = random_orthogonal(n, &mut rng);
        let q2 = random_orthogonal(n, &mut rng);
        let sing: Vec<f64> = (0..n)
            .map(|i| 10f64.powf(-8.0 * i as f64 / (n - 1) as f64))
            .collect();
        let a = &(&q1 * &Matrix::from_diagonal(&sing)) * &q2;
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = solve_linear(&a, &b).unwrap();
        let r: Vec<f64> = a.mul_vec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
        let bound = 1e-10 * (a.frobenius_norm() * norm(&x) + norm(&b));
        assert!(norm(&r) <= bound);
    }

    fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        // Gram-Schmidt on a random matrix.
        let mut cols: Vec<Vec<f64>> = Vec::new();
        while cols.len() < n {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for c in &cols {
                let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= d * y;
                }
            }
            let nv = norm(&v);
            if nv > 1e-6 {
                cols.push(v.into_iter().map(|x| x / nv).collect());
            }
        }
        let mut q = Matrix::zeros(n, n);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                q[(i, j)] = c[i];
            }
        }
        q
    }

    #[test]
    fn determinant_matches_product_of_diagonal() {
        let a = Matrix::from_rows(&[[0.0, 2.0], [3.0, 1.0]]).unwrap();
        assert!((determinant(&a).unwrap() + 6.0).abs() < 1e-15);
    }
}
