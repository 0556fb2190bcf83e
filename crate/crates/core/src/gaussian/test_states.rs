//! Gaussian states and symplectic maps for tests.

use rand::Rng;

use crate::linalg::Matrix;

pub fn vacuum(modes: usize) -> Matrix {
    Matrix::identity(2 * modes).scaled(0.5)
}

/// Two-mode squeezed vacuum with squeezing `r`.
pub fn tmsv(r: f64) -> Matrix {
    let (c, s) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
    Matrix::from_rows(&[
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, -s],
        [s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ])
    .unwrap()
}

/// Single-mode map embedded at `mode` of an `n`-mode system.
pub fn local(n: usize, mode: usize, m: [[f64; 2]; 2]) -> Matrix {
    let mut s = Matrix::identity(2 * n);
    for i in 0..2 {
        for j in 0..2 {
            s[(2 * mode + i, 2 * mode + j)] = m[i][j];
        }
    }
    s
}

pub fn rotation(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, s], [-s, c]]
}

pub fn squeezer(r: f64) -> [[f64; 2]; 2] {
    [[(-r).exp(), 0.0], [0.0, r.exp()]]
}

pub fn beam_splitter(n: usize, j: usize, k: usize, theta: f64) -> Matrix {
    let (s, c) = theta.sin_cos();
    let mut m = Matrix::identity(2 * n);
    for q in 0..2 {
        let (x, y) = (2 * j + q, 2 * k + q);
        m[(x, x)] = c;
        m[(x, y)] = s;
        m[(y, x)] = -s;
        m[(y, y)] = c;
    }
    m
}

pub fn two_mode_squeezer(n: usize, j: usize, k: usize, r: f64) -> Matrix {
    let (ch, sh) = (r.cosh(), r.sinh());
    let mut m = Matrix::identity(2 * n);
    for q in 0..2 {
        let sign = if q == 0 { 1.0 } else { -1.0 };
        let (x, y) = (2 * j + q, 2 * k + q);
        m[(x, x)] = ch;
        m[(y, y)] = ch;
        m[(x, y)] = sign * sh;
        m[(y, x)] = sign * sh;
    }
    m
}

pub fn congruence(s: &Matrix, v: &Matrix) -> Matrix {
    (&(s * v) * &s.transpose()).symmetrized()
}

/// Random symplectic matrix composed of local operations, beam splitters and
/// two-mode squeezers.
pub fn random_symplectic<R: Rng>(rng: &mut R, n: usize, max_squeeze: f64) -> Matrix {
    let mut s = Matrix::identity(2 * n);
    for _ in 0..3 * n {
        let j = rng.gen_range(0..n);
        let step = match rng.gen_range(0..4) {
            0 => local(n, j, rotation(rng.gen_range(0.0..std::f64::consts::TAU))),
            1 => local(n, j, squeezer(rng.gen_range(-max_squeeze..max_squeeze))),
            kind if n > 1 => {
                let mut k = rng.gen_range(0..n - 1);
                if k >= j {
                    k += 1;
                }
                if kind == 2 {
                    beam_splitter(n, j, k, rng.gen_range(0.0..std::f64::consts::TAU))
                } else {
                    two_mode_squeezer(n, j, k, rng.gen_range(-max_squeeze..max_squeeze))
                }
            }
            _ => continue,
        };
        s = &step * &s;
    }
    s
}

/// Random physical state `S diag(nu_k) S^T` with thermal symplectic
/// eigenvalues `nu_k >= 1/2`.
pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let nu: Vec<f64> = (0..n)
        .flat_map(|_| {
            let v = 0.5 + rng.gen_range(0.0..2.0);
            [v, v]
        })
        .collect();
    congruence(&random_symplectic(rng, n, 0.8), &Matrix::from_diagonal(&nu))
}
