//! Random inputs shared by unit tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex(r: &mut impl Rng) -> Complex64 {
    Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

pub fn random_hermitian(n: usize, r: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, |_, _| gaussian_complex(r));
    (&g + &g.adjoint()).scale_real(0.5)
}

pub fn random_anti_hermitian(n: usize, r: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, |_, _| gaussian_complex(r));
    (&g - &g.adjoint()).scale_real(0.5)
}

/// Full-rank density matrix G G* / Tr(G G*).
pub fn random_density(n: usize, r: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, |_, _| gaussian_complex(r));
    let p = g.matmul(&g.adjoint());
    let t = p.trace().re;
    p.scale_real(1.0 / t).hermitian_part()
}
