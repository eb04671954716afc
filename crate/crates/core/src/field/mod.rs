//! Exact scalar arithmetic.
//!
//! Fields are runtime objects: a [`Field`] value carries its parameters (the
//! prime, the extension modulus) and performs arithmetic on plain element
//! values. Everything downstream (matrices, polynomials) is generic over the
//! field object, so the same elimination code runs over `F_p`, `F_{p^k}` and
//! `Q`.

mod ext;
mod prime;
mod rational;

use std::fmt;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use ext::ExtensionField;
pub use prime::{is_prime, PrimeField, DEFAULT_PRIME, SECONDARY_PRIME};
pub use rational::RationalField;

/// A field with runtime parameters.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn spec(&self) -> FieldSpec;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Uniform nonzero element.
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let v = self.random(rng);
            if !self.is_zero(&v) {
                return v;
            }
        }
    }
}

/// Serializable description of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Prime { p: u64 },
    /// `modulus` lists the coefficients of the monic modulus, constant term first.
    Extension { p: u64, k: usize, modulus: Vec<u64> },
    Rational,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
            FieldSpec::Extension { p, k, .. } => write!(f, "F_{p}^{k}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_axioms<F: Field>(f: &F, a: &F::Elem, b: &F::Elem, c: &F::Elem) {
        assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
        assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
        assert_eq!(f.add(a, b), f.add(b, a));
        assert_eq!(f.mul(a, b), f.mul(b, a));
        assert!(f.is_zero(&f.add(a, &f.neg(a))));
        assert_eq!(f.sub(a, b), f.add(a, &f.neg(b)));
        match f.inv(a) {
            Some(ai) => assert!(f.is_one(&f.mul(a, &ai))),
            None => assert!(f.is_zero(a)),
        }
    }

    #[test]
    fn axioms_exhaustive_tiny_primes() {
        for p in [5u64, 7, 11] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        check_axioms(&f, &a, &b, &c);
                    }
                }
            }
        }
    }

    #[test]
    fn axioms_random_large_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [DEFAULT_PRIME, SECONDARY_PRIME, 10007] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..2000 {
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                check_axioms(&f, &a, &b, &c);
            }
        }
    }

    #[test]
    fn axioms_extension_and_rational() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let base = PrimeField::new(7).unwrap();
        let ext = ExtensionField::find_irreducible(&base, 3, &mut rng).unwrap();
        for _ in 0..500 {
            let (a, b, c) = (ext.random(&mut rng), ext.random(&mut rng), ext.random(&mut rng));
            check_axioms(&ext, &a, &b, &c);
        }
        let q = RationalField;
        for _ in 0..200 {
            let (a, b, c) = (q.random(&mut rng), q.random(&mut rng), q.random(&mut rng));
            check_axioms(&q, &a, &b, &c);
        }
    }

    #[test]
    fn rejects_small_and_composite_characteristic() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(3).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1_000_000_007).is_ok());
    }
}
