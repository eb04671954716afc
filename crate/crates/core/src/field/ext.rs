use rand::Rng;

use super::{Field, FieldSpec, PrimeField};
use crate::error::{Error, Result};
use crate::poly::uni::{distinct_degree_factorization, UniPoly};

/// Largest supported extension degree.
pub const MAX_EXTENSION_DEGREE: usize = 6;

/// `F_p[x]/(g)` for a monic irreducible `g` of degree `k <= 6`.
///
/// Elements are coefficient vectors of length exactly `k`, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionField {
    base: PrimeField,
    /// Monic modulus, constant term first, length `k + 1`.
    modulus: Vec<u64>,
}

impl ExtensionField {
    /// Checked constructor: the modulus must be monic-normalizable and irreducible.
    pub fn new(base: PrimeField, modulus: Vec<u64>) -> Result<Self> {
        let g = UniPoly::new(&base, modulus).monic(&base);
        let k = g.degree().unwrap_or(0);
        if k == 0 || k > MAX_EXTENSION_DEGREE {
            return Err(Error::InvalidModulus(format!("degree {k} outside 1..={MAX_EXTENSION_DEGREE}")));
        }
        let ddf = distinct_degree_factorization(&base, &g);
        let squarefree = g.gcd(&base, &g.derivative(&base)).degree() == Some(0);
        if !squarefree || ddf.len() != 1 || ddf[0].1 != k {
            return Err(Error::InvalidModulus("modulus is reducible".into()));
        }
        Ok(Self { base, modulus: g.coeffs().to_vec() })
    }

    /// Unchecked constructor for factors already known to be irreducible.
    pub(crate) fn from_irreducible(base: PrimeField, modulus: Vec<u64>) -> Self {
        let g = UniPoly::new(&base, modulus).monic(&base);
        Self { base, modulus: g.coeffs().to_vec() }
    }

    /// Some irreducible modulus of degree `k`, found by random search.
    pub fn find_irreducible<R: Rng + ?Sized>(base: &PrimeField, k: usize, rng: &mut R) -> Result<Self> {
        for _ in 0..10_000 {
            let mut coeffs: Vec<u64> = (0..k).map(|_| base.random(rng)).collect();
            coeffs.push(1);
            if let Ok(ext) = Self::new(*base, coeffs) {
                return Ok(ext);
            }
        }
        Err(Error::InvalidModulus(format!("no irreducible of degree {k} found")))
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn from_base(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        v[0] = c;
        v
    }

    /// The class of `x`, a root of the modulus.
    pub fn generator(&self) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        if self.degree() == 1 {
            v[0] = self.base.neg(&self.modulus[0]);
        } else {
            v[1] = 1;
        }
        v
    }

    pub fn frobenius(&self, a: &[u64]) -> Vec<u64> {
        self.pow(&a.to_vec(), self.base.modulus())
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let f = &self.base;
        let k = self.degree();
        for i in (k..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                v[i - k + j] = f.sub(&v[i - k + j], &f.mul(&c, &self.modulus[j]));
            }
            v[i] = 0;
        }
        v.resize(k, 0);
        v
    }
}

impl Field for ExtensionField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    fn one(&self) -> Vec<u64> {
        self.from_base(1)
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }

    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = &self.base;
        let mut out = vec![0; 2 * self.degree()];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        self.reduce(out)
    }

    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        let f = &self.base;
        let pa = UniPoly::new(f, a.clone());
        if pa.is_zero() {
            return None;
        }
        let g = UniPoly::new(f, self.modulus.clone());
        let (d, s, _) = pa.xgcd(f, &g);
        debug_assert_eq!(d.degree(), Some(0));
        let mut v = s.coeffs().to_vec();
        v.resize(self.degree(), 0);
        Some(v)
    }

    fn from_i64(&self, v: i64) -> Vec<u64> {
        self.from_base(self.base.from_i64(v))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.degree()).map(|_| self.base.random(rng)).collect()
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Extension {
            p: self.base.modulus(),
            k: self.degree(),
            modulus: self.modulus.clone(),
        }
    }
}
