use rand::Rng;
use serde::Serialize;

use super::multi::MultiPoly;
use crate::field::{Field, PrimeField};

/// Outcome of a randomized polynomial identity test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityTest {
    pub vanished: bool,
    pub trials: usize,
    pub degree: u32,
    /// A point where the polynomial is nonzero, if one was found.
    pub witness: Option<Vec<u64>>,
    /// Upper bound on the probability that a nonzero polynomial vanished on
    /// every trial; zero when a witness was found.
    pub failure_bound: f64,
}

/// Schwartz-Zippel test on a black-box evaluator of a polynomial of degree
/// at most `degree` in `num_vars` variables over `F_p`.
pub fn schwartz_zippel<R: Rng + ?Sized>(
    f: &PrimeField,
    num_vars: usize,
    degree: u32,
    trials: usize,
    rng: &mut R,
    mut eval: impl FnMut(&[u64]) -> u64,
) -> IdentityTest {
    for _ in 0..trials {
        let x: Vec<u64> = (0..num_vars).map(|_| f.random(rng)).collect();
        if eval(&x) != 0 {
            return IdentityTest { vanished: false, trials, degree, witness: Some(x), failure_bound: 0.0 };
        }
    }
    let ratio = degree as f64 / f.modulus() as f64;
    IdentityTest { vanished: true, trials, degree, witness: None, failure_bound: ratio.powi(trials as i32) }
}

pub fn is_identically_zero<R: Rng + ?Sized>(
    f: &PrimeField,
    g: &MultiPoly<u64>,
    trials: usize,
    rng: &mut R,
) -> IdentityTest {
    let d = g.degree().unwrap_or(0);
    schwartz_zippel(f, g.num_vars(), d, trials, rng, |x| g.eval(f, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn detects_zero_and_nonzero() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = MultiPoly::variable(&f, 3, 0);
        let y = MultiPoly::variable(&f, 3, 1);
        let comm = x.mul(&f, &y).sub(&f, &y.mul(&f, &x));
        let t = is_identically_zero(&f, &comm, 8, &mut rng);
        assert!(t.vanished && t.failure_bound < 1e-100);
        let t = is_identically_zero(&f, &x.mul(&f, &y), 8, &mut rng);
        assert!(!t.vanished);
        let w = t.witness.unwrap();
        assert_ne!(f.mul(&w[0], &w[1]), 0);
    }

    #[test]
    fn bound_on_small_field() {
        let f = PrimeField::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = schwartz_zippel(&f, 2, 3, 2, &mut rng, |_| 0);
        assert!((t.failure_bound - 9.0 / 49.0).abs() < 1e-12);
    }
}
