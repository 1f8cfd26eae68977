//! Seeded generators for random states, unitaries and probability vectors.
//!
//! [`Rng`] is a counter-based stream addressed by `(seed, stream)`. Two
//! generators built from the same pair produce the same sequence on every
//! platform, so each campaign trial can own its generator outright and
//! results do not depend on scheduling.

use nalgebra::DMatrix;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix};

#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    stream: u64,
    inner: ChaCha20Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Independent child generator addressed by `index`.
    ///
    /// Depends only on this generator's `(seed, stream)` and `index`, never on
    /// how many values have been drawn.
    pub fn fork(&self, index: u64) -> Self {
        Self::new(splitmix64(self.seed ^ splitmix64(self.stream)), index)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        self.inner.random_range(lo..=hi)
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Standard complex Gaussian, `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.normal() * s, self.normal() * s)
    }

    /// Matrix of i.i.d. standard complex Gaussians.
    pub fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    /// Uniformly distributed unit vector in `C^d`.
    pub fn unit_vector(&mut self, d: usize) -> Vec<Complex64> {
        loop {
            let v: Vec<Complex64> = (0..d).map(|_| self.complex_normal()).collect();
            let n = crate::matrix::norm_sqr(&v).sqrt();
            if n > 1e-12 {
                return v.into_iter().map(|z| z / n).collect();
            }
        }
    }

    /// Uniform sample from the probability simplex with `k` entries.
    pub fn simplex(&mut self, k: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..k).map(|_| -(1.0 - self.uniform()).ln()).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    }
}

/// Haar-distributed `d × d` unitary: QR of a Ginibre matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(d: usize, rng: &mut Rng) -> ComplexMatrix {
    assert!(d >= 1, "dimension must be positive");
    let g: DMatrix<Complex64> = rng.ginibre(d, d).to_nalgebra();
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = ComplexMatrix::from_nalgebra(&q);
    for j in 0..d {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        let phase = if n > 0.0 { rjj / n } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Random density matrix `G·G†/Tr(G·G†)` with `G` a `d × rank` Ginibre matrix.
pub fn ginibre_density(d: usize, rank: usize, rng: &mut Rng) -> Result<ComplexMatrix> {
    if rank == 0 || rank > d {
        return Err(Error::InvalidArgument(format!("rank {rank} outside 1..={d}")));
    }
    let g = rng.ginibre(d, rank);
    let w = &g * &g.dagger();
    let tr = w.trace().re;
    Ok(w.scale_real(1.0 / tr).hermitian_part())
}

/// `d × d` diagonal unitary built from the given phases.
pub fn phase_diagonal(phases: &[f64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(phases.len(), phases.len());
    for (i, &t) in phases.iter().enumerate() {
        m[(i, i)] = Complex64::from_polar(1.0, t);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_stream_same_sequence() {
        let mut a = Rng::new(7, 3);
        let mut b = Rng::new(7, 3);
        let xs: Vec<f64> = (0..16).map(|_| a.normal()).collect();
        let ys: Vec<f64> = (0..16).map(|_| b.normal()).collect();
        assert_eq!(xs, ys);
        let mut c = Rng::new(7, 4);
        assert_ne!(xs[0], c.normal());
    }

    #[test]
    fn fork_ignores_draw_position() {
        let a = Rng::new(1, 2);
        let mut b = a.clone();
        b.uniform();
        assert_eq!(a.fork(5).clone().uniform(), b.fork(5).uniform());
    }

    #[test]
    fn haar_scalar_is_unit_modulus() {
        let mut rng = Rng::new(11, 0);
        let u = haar_unitary(1, &mut rng);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = Rng::new(12, 0);
        for d in 1..=6 {
            let u = haar_unitary(d, &mut rng);
            assert!(u.unitarity_deviation() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn haar_det_has_unit_modulus() {
        let mut rng = Rng::new(13, 0);
        for d in 2..=5 {
            let u = haar_unitary(d, &mut rng);
            let det = u.to_nalgebra().determinant();
            assert!((det.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn haar_second_moment() {
        // Haar moment E|U_00|^2 = 1/d
        let mut rng = Rng::new(2024, 0);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| haar_unitary(2, &mut rng)[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn ginibre_scalar_is_one() {
        let mut rng = Rng::new(1, 1);
        let m = ginibre_density(1, 1, &mut rng).unwrap();
        assert!((m[(0, 0)].re - 1.0).abs() < 1e-15 && m[(0, 0)].im == 0.0);
    }

    #[test]
    fn ginibre_unit_trace_and_psd() {
        let mut rng = Rng::new(5, 9);
        for k in 0..1000 {
            let rank = 1 + k % 4;
            let m = ginibre_density(4, rank, &mut rng).unwrap();
            assert!((m.trace().re - 1.0).abs() < 1e-12);
            let e = m.hermitian_eig().unwrap();
            assert!(e.eigenvalues[0] >= -1e-12);
        }
    }

    #[test]
    fn ginibre_rank_range() {
        let mut rng = Rng::new(0, 0);
        assert!(ginibre_density(3, 0, &mut rng).is_err());
        assert!(ginibre_density(3, 4, &mut rng).is_err());
    }

    #[test]
    fn simplex_sums_to_one() {
        let mut rng = Rng::new(3, 3);
        let p = rng.simplex(5);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(p.iter().all(|&x| x >= 0.0));
    }
}
