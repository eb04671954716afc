//! Dense univariate polynomials and root finding over prime fields.
//!
//! Roots of a polynomial over `F_p` are returned in the field generated by
//! their minimal polynomial: a root of an irreducible factor `g` of degree `k`
//! is the class of `x` (or one of its Frobenius conjugates) in `F_p[x]/(g)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{ExtensionField, Field, PrimeField};

/// Coefficients stored constant term first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> UniPoly<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| f.is_zero(c)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E) -> Self {
        Self::new(f, vec![c])
    }

    /// The monomial `x`.
    pub fn x<F: Field<Elem = E>>(f: &F) -> Self {
        Self { coeffs: vec![f.zero(), f.one()] }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, x: &E) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(&self.coeff(f, i), &other.coeff(f, i)))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.sub(&self.coeff(f, i), &other.coeff(f, i)))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem<F: Field<Elem = E>>(&self, f: &F, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.leading().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(&rem[i], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = f.sub(&rem[k], &f.mul(&c, d));
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(f, quot), Self::new(f, rem))
    }

    pub fn rem<F: Field<Elem = E>>(&self, f: &F, divisor: &Self) -> Self {
        self.divrem(f, divisor).1
    }

    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(f, &f.inv(l).unwrap()),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::constant(f, f.one()), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(f, f.one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(f, &r1);
            let s = s0.sub(f, &q.mul(f, &s1));
            let t = t0.sub(f, &q.mul(f, &t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = f.inv(&l).unwrap();
                (r0.scale(f, &li), s0.scale(f, &li), t0.scale(f, &li))
            }
        }
    }

    pub fn derivative<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        Self::new(f, coeffs)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod<F: Field<Elem = E>>(&self, f: &F, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(f, modulus);
        let mut acc = Self::constant(f, f.one()).rem(f, modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, modulus);
            }
            base = base.mul(f, &base).rem(f, modulus);
            e >>= 1;
        }
        acc
    }

    /// Composition `self(inner) mod modulus`.
    pub fn compose_mod<F: Field<Elem = E>>(&self, f: &F, inner: &Self, modulus: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(f, inner).add(f, &Self::constant(f, c.clone())).rem(f, modulus);
        }
        acc
    }
}

/// A root of a polynomial over `F_p`, living in `F_p` or in `F_p[x]/(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootValue {
    Base(u64),
    Extension { field: ExtensionField, value: Vec<u64> },
}

impl RootValue {
    /// Degree of the field the root generates over `F_p`.
    pub fn degree(&self) -> usize {
        match self {
            RootValue::Base(_) => 1,
            RootValue::Extension { field, .. } => field.degree(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub value: RootValue,
    pub multiplicity: usize,
}

/// Largest degree accepted by [`univariate_roots`].
pub const MAX_ROOT_DEGREE: usize = 6;

/// Squarefree decomposition by the derivative gcd chain (Yun). Valid because
/// `p` exceeds the degree. Returns `(factor, multiplicity)` pairs of monic
/// squarefree, pairwise coprime factors.
pub fn squarefree_decomposition(f: &PrimeField, poly: &UniPoly<u64>) -> Vec<(UniPoly<u64>, usize)> {
    let poly = poly.monic(f);
    let mut out = Vec::new();
    if poly.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = poly.derivative(f);
    let mut a = poly.gcd(f, &d);
    let mut b = poly.divrem(f, &a).0;
    let mut c = d.divrem(f, &a).0;
    let mut i = 1;
    loop {
        let bd = b.derivative(f);
        let c_minus = c.sub(f, &bd);
        if b.degree() == Some(0) {
            break;
        }
        a = b.gcd(f, &c_minus);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.divrem(f, &a).0;
        c = c_minus.divrem(f, &a).0;
        i += 1;
    }
    out
}

/// `x^(p^k) mod modulus`, via `k` successive `p`-th powers.
fn frobenius_power(f: &PrimeField, k: usize, modulus: &UniPoly<u64>) -> UniPoly<u64> {
    let mut h = UniPoly::x(f).rem(f, modulus);
    for _ in 0..k {
        h = h.pow_mod(f, f.modulus(), modulus);
    }
    h
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// `(product of all irreducible factors of degree d, d)`.
pub fn distinct_degree_factorization(
    f: &PrimeField,
    poly: &UniPoly<u64>,
) -> Vec<(UniPoly<u64>, usize)> {
    let mut rest = poly.monic(f);
    let mut out = Vec::new();
    let mut h = UniPoly::x(f);
    let mut d = 0;
    while let Some(deg) = rest.degree() {
        if deg == 0 {
            break;
        }
        d += 1;
        if 2 * d > deg {
            out.push((rest.clone(), deg));
            break;
        }
        h = h.pow_mod(f, f.modulus(), &rest);
        let g = h.sub(f, &UniPoly::x(f)).gcd(f, &rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.divrem(f, &g).0;
            h = h.rem(f, &rest);
            out.push((g, d));
        }
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct irreducibles of degree `d`.
pub fn equal_degree_split<R: Rng + ?Sized>(
    f: &PrimeField,
    poly: &UniPoly<u64>,
    d: usize,
    rng: &mut R,
) -> Vec<UniPoly<u64>> {
    let n = poly.degree().unwrap_or(0);
    if n <= d {
        return vec![poly.monic(f)];
    }
    let one = UniPoly::constant(f, 1);
    loop {
        let coeffs: Vec<u64> = (0..n).map(|_| f.random(rng)).collect();
        let a = UniPoly::new(f, coeffs);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
        let mut norm = a.clone();
        let mut conj = a.clone();
        for _ in 1..d {
            conj = conj.pow_mod(f, f.modulus(), poly);
            norm = norm.mul(f, &conj).rem(f, poly);
        }
        let b = norm.pow_mod(f, (f.modulus() - 1) / 2, poly).sub(f, &one);
        let g = b.gcd(f, poly);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let h = poly.divrem(f, &g).0;
            let mut out = equal_degree_split(f, &g, d, rng);
            out.extend(equal_degree_split(f, &h, d, rng));
            return out;
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted by degree then coefficients.
pub fn irreducible_factors<R: Rng + ?Sized>(
    f: &PrimeField,
    poly: &UniPoly<u64>,
    rng: &mut R,
) -> Result<Vec<(UniPoly<u64>, usize)>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (sqf, mult) in squarefree_decomposition(f, poly) {
        for (part, d) in distinct_degree_factorization(f, &sqf) {
            for g in equal_degree_split(f, &part, d, rng) {
                out.push((g, mult));
            }
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
    });
    Ok(out)
}

/// All roots of `poly` over the algebraic closure of `F_p`, each in the field
/// generated by its minimal polynomial, with multiplicities. Conjugate roots
/// share the same extension field object.
pub fn univariate_roots<R: Rng + ?Sized>(
    f: &PrimeField,
    poly: &UniPoly<u64>,
    rng: &mut R,
) -> Result<Vec<Root>> {
    let deg = poly.degree().ok_or(Error::ZeroPolynomial)?;
    if deg > MAX_ROOT_DEGREE {
        return Err(Error::DegreeTooLarge { degree: deg, max: MAX_ROOT_DEGREE });
    }
    let mut roots = Vec::new();
    for (g, multiplicity) in irreducible_factors(f, poly, rng)? {
        let k = g.degree().unwrap();
        if k == 1 {
            let r = f.neg(&g.coeff(f, 0));
            roots.push(Root { value: RootValue::Base(r), multiplicity });
            continue;
        }
        let field = ExtensionField::from_irreducible(*f, g.coeffs().to_vec());
        let mut value = field.generator();
        for _ in 0..k {
            roots.push(Root {
                value: RootValue::Extension { field: field.clone(), value: value.clone() },
                multiplicity,
            });
            value = field.frobenius(&value);
        }
    }
    roots.sort_by_key(|r| match r.value {
        RootValue::Base(v) => (0, v),
        RootValue::Extension { .. } => (1, 0),
    });
    Ok(roots)
}

/// Roots in `F_p` only, with multiplicities (cheaper: a single gcd with `x^p - x`).
pub fn base_field_roots<R: Rng + ?Sized>(
    f: &PrimeField,
    poly: &UniPoly<u64>,
    rng: &mut R,
) -> Result<Vec<(u64, usize)>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (sqf, mult) in squarefree_decomposition(f, poly) {
        let xp = frobenius_power(f, 1, &sqf);
        let linear = xp.sub(f, &UniPoly::x(f)).gcd(f, &sqf);
        if linear.degree().unwrap_or(0) == 0 {
            continue;
        }
        for g in equal_degree_split(f, &linear, 1, rng) {
            out.push((f.neg(&g.coeff(f, 0)), mult));
        }
    }
    out.sort_unstable();
    Ok(out)
}
