//! Eigenvalues of small dense real matrices.
//!
//! Balancing, reduction to upper Hessenberg form by stabilized elementary
//! similarity transforms, then Francis double-shift QR iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::Matrix;

/// Largest dimension accepted by [`eigenvalues`].
pub const MAX_EIGEN_DIM: usize = 64;

/// All eigenvalues of a real square matrix, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    values: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_real(&self) -> f64 {
        self.values
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn product(&self) -> Complex64 {
        self.values.iter().product()
    }

    /// Sorted by descending real part, then descending imaginary part.
    pub fn sorted(mut self) -> Self {
        self.values
            .sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        self
    }
}

impl IntoIterator for ComplexSpectrum {
    type Item = Complex64;
    type IntoIter = std::vec::IntoIter<Complex64>;

    fn into_iter(self) -> Self::IntoIter {
        self.values.into_iter()
    }
}

/// Computes every eigenvalue of `m`. The iteration budget is `100 * n` QR
/// sweeps in total.
pub fn eigenvalues(m: &Matrix) -> Result<ComplexSpectrum> {
    let n = m.ensure_square()?;
    if n > MAX_EIGEN_DIM {
        return Err(Error::InvalidInput(format!(
            "eigenvalue solver supports dimension <= {MAX_EIGEN_DIM}, got {n}"
        )));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(ComplexSpectrum { values: Vec::new() });
    }

    let mut a = OneBased::from_matrix(m);
    balance(&mut a);
    to_hessenberg(&mut a);
    let values = hessenberg_qr(&mut a, 100 * n)?;
    Ok(ComplexSpectrum { values })
}

/// Square matrix with 1-based indexing, which keeps the QR sweep close to its
/// usual textbook statement.
struct OneBased {
    n: usize,
    data: Vec<f64>,
}

impl OneBased {
    fn from_matrix(m: &Matrix) -> Self {
        let n = m.rows();
        let mut data = vec![0.0; (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                data[(i + 1) * (n + 1) + j + 1] = m[(i, j)];
            }
        }
        Self { n, data }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.n + 1) + j]
    }

    #[inline]
    fn at(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * (self.n + 1) + j]
    }
}

fn balance(a: &mut OneBased) {
    const RADIX: f64 = 2.0;
    let n = a.n;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += a.get(j, i).abs();
                    r += a.get(i, j).abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        *a.at(i, j) *= g;
                    }
                    for j in 1..=n {
                        *a.at(j, i) *= f;
                    }
                }
            }
        }
    }
}

fn to_hessenberg(a: &mut OneBased) {
    let n = a.n;
    for m in 2..n {
        let mut x = 0.0f64;
        let mut i = m;
        for j in m..=n {
            if a.get(j, m - 1).abs() > x.abs() {
                x = a.get(j, m - 1);
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..=n {
                let t = a.get(i, j);
                *a.at(i, j) = a.get(m, j);
                *a.at(m, j) = t;
            }
            for j in 1..=n {
                let t = a.get(j, i);
                *a.at(j, i) = a.get(j, m);
                *a.at(j, m) = t;
            }
        }
        if x != 0.0 {
            for i in (m + 1)..=n {
                let mut y = a.get(i, m - 1);
                if y != 0.0 {
                    y /= x;
                    *a.at(i, m - 1) = y;
                    for j in m..=n {
                        let v = a.get(m, j);
                        *a.at(i, j) -= y * v;
                    }
                    for j in 1..=n {
                        let v = a.get(j, i);
                        *a.at(j, m) += y * v;
                    }
                }
            }
        }
    }
    // Drop the stored multipliers below the subdiagonal.
    for i in 3..=n {
        for j in 1..(i - 1) {
            *a.at(i, j) = 0.0;
        }
    }
}

fn hessenberg_qr(a: &mut OneBased, budget: usize) -> Result<Vec<Complex64>> {
    let n = a.n;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm += a.get(i, j).abs();
        }
    }

    let mut total = 0usize;
    let mut nn = n;
    let mut t = 0.0;
    while nn >= 1 {
        let mut its = 0;
        loop {
            // Look for a negligible subdiagonal element.
            let mut l = nn;
            while l >= 2 {
                let mut s = a.get(l - 1, l - 1).abs() + a.get(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a.get(l, l - 1).abs() + s == s {
                    *a.at(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            let l = l.max(1);

            let mut x = a.get(nn, nn);
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a.get(nn - 1, nn - 1);
            let mut w = a.get(nn, nn - 1) * a.get(nn - 1, nn);
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn = nn.saturating_sub(2);
                break;
            }

            total += 1;
            if total > budget || its >= 60 {
                return Err(Error::NoConvergence { budget });
            }
            if its == 10 || its == 20 || its == 40 {
                // Exceptional shift.
                t += x;
                for i in 1..=nn {
                    *a.at(i, i) -= x;
                }
                let s = a.get(nn, nn - 1).abs() + a.get(nn - 1, nn - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Find two consecutive small subdiagonal elements.
            let mut m = nn - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a.get(m, m);
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a.get(m + 1, m) + a.get(m, m + 1);
                q = a.get(m + 1, m + 1) - z - rr - ss;
                r = a.get(m + 2, m + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a.get(m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (a.get(m - 1, m - 1).abs() + z.abs() + a.get(m + 1, m + 1).abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                *a.at(i, i - 2) = 0.0;
                if i != m + 2 {
                    *a.at(i, i - 3) = 0.0;
                }
            }

            // Double QR step on rows l..nn and columns m..nn.
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a.get(k, k - 1);
                    q = a.get(k + 1, k - 1);
                    r = if k != nn - 1 {
                        a.get(k + 2, k - 1)
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            *a.at(k, k - 1) = -a.get(k, k - 1);
                        }
                    } else {
                        *a.at(k, k - 1) = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        let mut pp = a.get(k, j) + q * a.get(k + 1, j);
                        if k != nn - 1 {
                            pp += r * a.get(k + 2, j);
                            *a.at(k + 2, j) -= pp * z;
                        }
                        *a.at(k + 1, j) -= pp * y;
                        *a.at(k, j) -= pp * x;
                    }
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        let mut pp = x * a.get(i, k) + y * a.get(i, k + 1);
                        if k != nn - 1 {
                            pp += z * a.get(i, k + 2);
                            *a.at(i, k + 2) -= pp * r;
                        }
                        *a.at(i, k + 1) -= pp * q;
                        *a.at(i, k) -= pp;
                    }
                }
                k += 1;
            }
        }
    }

    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lu::determinant;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        let data = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Matrix::from_row_major(n, n, data).unwrap()
    }

    #[test]
    fn identity() {
        let s = eigenvalues(&Matrix::identity(2)).unwrap();
        for z in s.values() {
            assert_eq!(*z, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn rotation_generator() {
        let m = Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let s = eigenvalues(&m).unwrap().sorted();
        assert!((s.values()[0] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((s.values()[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn single_entry_and_empty() {
        let s = eigenvalues(&Matrix::from_rows(&[[-3.5]]).unwrap()).unwrap();
        assert_eq!(s.values(), &[Complex64::new(-3.5, 0.0)]);
        assert!(eigenvalues(&Matrix::zeros(0, 0)).unwrap().is_empty());
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(
            eigenvalues(&Matrix::zeros(2, 3)),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn triangular_matrix_has_diagonal_spectrum() {
        let m = Matrix::from_rows(&[[1.0, 5.0, -2.0], [0.0, -4.0, 3.0], [0.0, 0.0, 2.5]]).unwrap();
        let mut re: Vec<f64> = eigenvalues(&m)
            .unwrap()
            .values()
            .iter()
            .map(|z| z.re)
            .collect();
        re.sort_by(f64::total_cmp);
        for (got, want) in re.iter().zip([-4.0, 1.0, 2.5]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn trace_determinant_and_conjugate_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [3, 5, 8, 16, 32] {
            for _ in 0..10 {
                let m = random_matrix(n, &mut rng);
                let s = eigenvalues(&m).unwrap();
                assert_eq!(s.len(), n);
                let tr = m.trace();
                let scale = m.frobenius_norm();
                assert!((s.sum().re - tr).abs() <= 1e-9 * scale.max(tr.abs()));
                assert!(s.sum().im.abs() <= 1e-9 * scale);
                let det = determinant(&m).unwrap();
                let prod = s.product();
                assert!(
                    (prod.re - det).abs() <= 1e-8 * det.abs().max(1e-14),
                    "n={n} det={det} prod={prod}"
                );
                for z in s.values() {
                    if z.im != 0.0 {
                        let has_conj = s
                            .values()
                            .iter()
                            .any(|w| (w - z.conj()).norm() <= 1e-9 * z.norm().max(1.0));
                        assert!(has_conj, "no conjugate for {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn decay_rate_matches_ode_integration() {
        // Long-time growth rate of x' = A x equals max Re(lambda).
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..5 {
            let n = 16;
            let mut a = random_matrix(n, &mut rng).scaled(0.5);
            let shift = eigenvalues(&a).unwrap().max_real() + 0.3;
            for i in 0..n {
                a[(i, i)] -= shift;
            }
            let expected = eigenvalues(&a).unwrap().max_real();

            let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let h = 1e-3;
            let rk4 = |x: &[f64]| -> Vec<f64> {
                let f = |y: &[f64]| a.mul_vec(y);
                let axpy = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> {
                    y.iter().zip(k).map(|(a, b)| a + s * b).collect()
                };
                let k1 = f(x);
                let k2 = f(&axpy(x, &k1, h / 2.0));
                let k3 = f(&axpy(x, &k2, h / 2.0));
                let k4 = f(&axpy(x, &k3, h));
                (0..n)
                    .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                    .collect()
            };
            let norm = |v: &[f64]| v.iter().map(|t| t * t).sum::<f64>().sqrt();
            let (t1, t2) = (40.0, 80.0);
            let mut log_norms = Vec::new();
            let mut t = 0.0;
            for target in [t1, t2] {
                while t < target - 1e-12 {
                    x = rk4(&x);
                    t += h;
                }
                log_norms.push(norm(&x).ln());
            }
            let rate = (log_norms[1] - log_norms[0]) / (t2 - t1);
            assert!(
                (rate - expected).abs() < 0.05 * expected.abs() + 0.01,
                "rate {rate} vs max Re {expected}"
            );
        }
    }
}
