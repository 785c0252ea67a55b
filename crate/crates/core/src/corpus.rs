//! Seeded generators for harmonic polynomials with small rational
//! coefficients.

use rand::Rng;

use crate::exact::{rat, Rational};
use crate::poly::{harmonic_basis, Polynomial};

/// Uniform rational `p/q` with `|p| <= max_num`, `1 <= q <= max_den`.
pub fn random_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    rat(rng.random_range(-max_num..=max_num), rng.random_range(1..=max_den))
}

pub fn random_nonzero_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    loop {
        let q = random_rational(rng, max_num, max_den);
        if q != Rational::from_integer(0.into()) {
            return q;
        }
    }
}

/// Random combination of the homogeneous harmonic bases of degrees
/// `min_degree..=max_degree` in `n` variables; the top degree always has a
/// nonzero component.
pub fn random_harmonic<R: Rng>(rng: &mut R, n: usize, min_degree: u32, max_degree: u32) -> Polynomial {
    assert!(min_degree <= max_degree);
    loop {
        let mut p = Polynomial::zero(n);
        for k in min_degree..=max_degree {
            for b in harmonic_basis(n, k as i64).expect("valid basis") {
                let c = random_rational(rng, 5, 4);
                p = &p + &b.scale(&c);
            }
        }
        if p.degree() == Some(max_degree) {
            return p;
        }
    }
}

/// Planar corpus cycling through four classes: homogeneous, vanishing at the
/// origin, singular at the origin, and shifted by a nonzero constant.
pub fn planar_corpus<R: Rng>(rng: &mut R, count: usize, max_degree: u32) -> Vec<Polynomial> {
    (0..count)
        .map(|i| {
            let deg = rng.random_range(1..=max_degree);
            match i % 4 {
                0 => random_harmonic(rng, 2, deg, deg),
                1 => random_harmonic(rng, 2, 1, deg),
                2 => random_harmonic(rng, 2, deg.min(2), deg),
                _ => {
                    let p = random_harmonic(rng, 2, 1, deg);
                    &p + &Polynomial::constant(2, random_nonzero_rational(rng, 5, 4))
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corpus_is_harmonic_and_reproducible() {
        let a = planar_corpus(&mut ChaCha8Rng::seed_from_u64(3), 12, 5);
        let b = planar_corpus(&mut ChaCha8Rng::seed_from_u64(3), 12, 5);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.is_harmonic() && !p.is_constant()));
        let q = random_harmonic(&mut ChaCha8Rng::seed_from_u64(1), 3, 0, 4);
        assert!(q.is_harmonic() && q.degree() == Some(4));
    }
}
