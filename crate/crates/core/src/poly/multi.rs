use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then the exponent of `x0`, then `x1`, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn eval<F: Field>(&self, f: &F, point: &[F::Elem]) -> F::Elem {
        let mut acc = f.one();
        for (x, &e) in point.iter().zip(&self.0) {
            if e > 0 {
                acc = f.mul(&acc, &f.pow(x, e as u64));
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{i}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All exponent vectors of total degree `degree` in `num_vars` variables,
/// in decreasing graded-lex order (so `x0^d` comes first).
pub fn monomials_of_degree(num_vars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if num_vars == 0 {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(0, degree, &mut vec![0; num_vars], &mut out);
    out
}

/// Sparse homogeneous polynomial. Stored coefficients are nonzero and every
/// exponent vector has the same total degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly<E> {
    num_vars: usize,
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone + PartialEq> MultiPoly<E> {
    pub fn zero(num_vars: usize) -> Self {
        Self { num_vars, terms: BTreeMap::new() }
    }

    /// Combines like terms, drops zeros and checks homogeneity.
    pub fn from_terms<F, I>(f: &F, num_vars: usize, terms: I) -> Result<Self>
    where
        F: Field<Elem = E>,
        I: IntoIterator<Item = (Vec<u32>, E)>,
    {
        let mut map: BTreeMap<Monomial, E> = BTreeMap::new();
        let mut degree = None;
        for (exps, c) in terms {
            if exps.len() != num_vars {
                return Err(Error::Dimension(format!(
                    "exponent vector of length {} in {} variables",
                    exps.len(),
                    num_vars
                )));
            }
            let m = Monomial(exps);
            let d = m.degree();
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Inhomogeneous {
                        term: m.to_string(),
                        position: 0,
                        found: d,
                        expected: e,
                    })
                }
                _ => {}
            }
            let entry = map.entry(m).or_insert_with(|| f.zero());
            *entry = f.add(entry, &c);
        }
        map.retain(|_, c| !f.is_zero(c));
        Ok(Self { num_vars, terms: map })
    }

    pub fn variable<F: Field<Elem = E>>(f: &F, num_vars: usize, i: usize) -> Self {
        let mut exps = vec![0; num_vars];
        exps[i] = 1;
        Self::from_terms(f, num_vars, [(exps, f.one())]).unwrap()
    }

    /// The linear form `sum c_i x_i`.
    pub fn linear<F: Field<Elem = E>>(f: &F, coeffs: &[E]) -> Self {
        let n = coeffs.len();
        let terms = coeffs.iter().enumerate().map(|(i, c)| {
            let mut e = vec![0; n];
            e[i] = 1;
            (e, c.clone())
        });
        Self::from_terms(f, n, terms).unwrap()
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, num_vars: usize, c: E) -> Self {
        Self::from_terms(f, num_vars, [(vec![0; num_vars], c)]).unwrap()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in decreasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &E)> {
        self.terms.iter().rev()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, exps: &[u32]) -> E {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| f.zero())
    }

    /// Variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.num_vars)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    pub fn map_coeffs<G, F2: Field<Elem = G>>(&self, f2: &F2, mut g: impl FnMut(&E) -> G) -> MultiPoly<G>
    where
        G: Clone + PartialEq,
    {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = g(c);
            if !f2.is_zero(&v) {
                terms.insert(m.clone(), v);
            }
        }
        MultiPoly { num_vars: self.num_vars, terms }
    }

    /// Same polynomial viewed in `num_vars >= self.num_vars` variables.
    pub fn extend_vars(&self, num_vars: usize) -> Self {
        assert!(num_vars >= self.num_vars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.resize(num_vars, 0);
                (Monomial(e), c.clone())
            })
            .collect();
        Self { num_vars, terms }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
    }

    /// Sum; panics if the operands have different nonzero degrees.
    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.check_compatible(other);
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            assert_eq!(a, b, "adding forms of different degree");
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(|| f.zero());
            *entry = f.add(entry, c);
        }
        terms.retain(|_, c| !f.is_zero(c));
        Self { num_vars: self.num_vars, terms }
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        self.map_coeffs(f, |c| f.neg(c))
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, s: &E) -> Self {
        self.map_coeffs(f, |c| f.mul(c, s))
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.check_compatible(other);
        let mut terms: BTreeMap<Monomial, E> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                let entry = terms.entry(Monomial(e)).or_insert_with(|| f.zero());
                *entry = f.add(entry, &f.mul(ca, cb));
            }
        }
        terms.retain(|_, c| !f.is_zero(c));
        Self { num_vars: self.num_vars, terms }
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial<F: Field<Elem = E>>(&self, f: &F, i: usize) -> Self {
        assert!(i < self.num_vars, "variable index out of range");
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let v = f.mul(c, &f.from_i64(e as i64));
            if f.is_zero(&v) {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            terms.insert(Monomial(exps), v);
        }
        Self { num_vars: self.num_vars, terms }
    }

    pub fn gradient<F: Field<Elem = E>>(&self, f: &F) -> Vec<Self> {
        (0..self.num_vars).map(|i| self.partial(f, i)).collect()
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, point: &[E]) -> E {
        assert_eq!(point.len(), self.num_vars, "point dimension");
        let max_deg = self.degree().unwrap_or(0) as usize;
        // powers[i][e] = x_i^e
        let powers: Vec<Vec<E>> = point
            .iter()
            .map(|x| {
                let mut p = Vec::with_capacity(max_deg + 1);
                p.push(f.one());
                for e in 1..=max_deg {
                    p.push(f.mul(&p[e - 1], x));
                }
                p
            })
            .collect();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = f.mul(&t, &powers[i][e as usize]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Substitutes the forms `maps[j]` (all in the same variables and of the
    /// same degree `e`) for `x_j`, giving a form of degree `e * deg`.
    pub fn compose<F: Field<Elem = E>>(&self, f: &F, maps: &[Self]) -> Self {
        assert_eq!(maps.len(), self.num_vars, "one map per variable");
        let m = maps.first().map_or(0, Self::num_vars);
        let max_deg = self.degree().unwrap_or(0) as usize;
        let one = Self::constant(f, m, f.one());
        // powers[j][e] = maps[j]^e, built lazily up to the largest exponent used
        let mut powers: Vec<Vec<Self>> = maps.iter().map(|_| vec![one.clone()]).collect();
        let mut out: Option<Self> = None;
        for (mono, c) in &self.terms {
            let mut prod = one.clone();
            for (j, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[j].len() <= (e as usize).min(max_deg) {
                    let next = powers[j].last().unwrap().mul(f, &maps[j]);
                    powers[j].push(next);
                }
                prod = prod.mul(f, &powers[j][e as usize]);
            }
            let prod = prod.scale(f, c);
            out = Some(match out {
                None => prod,
                Some(acc) => acc.add(f, &prod),
            });
        }
        out.unwrap_or_else(|| Self::zero(m))
    }

    /// Pullback along the linear substitution `x_j = sum_k subs[j][k] t_k`,
    /// giving a form of the same degree in `subs[j].len()` variables.
    pub fn compose_linear<F: Field<Elem = E>>(&self, f: &F, subs: &[Vec<E>]) -> Self {
        assert_eq!(subs.len(), self.num_vars, "one substitution per variable");
        let forms: Vec<Self> = subs.iter().map(|s| Self::linear(f, s)).collect();
        if forms.is_empty() {
            return self.clone();
        }
        self.compose(f, &forms)
    }

    /// Human-readable rendering with a caller-supplied coefficient formatter
    /// that returns the signed text of each coefficient (e.g. `-4`, `1/2`).
    pub fn render(&self, coeff: impl Fn(&E) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let text = coeff(c);
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let is_const = m.degree() == 0;
            if mag == "1" && !is_const {
                out.push_str(&m.to_string());
            } else if is_const {
                out.push_str(&mag);
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&m.to_string());
            }
        }
        out
    }
}

/// Symmetric matrix of second partials of `g` evaluated at `x`.
pub fn hessian<F: Field>(f: &F, g: &MultiPoly<F::Elem>, x: &[F::Elem]) -> crate::linalg::Matrix<F::Elem> {
    let n = g.num_vars();
    let mut h = crate::linalg::Matrix::zeros(f, n, n);
    for i in 0..n {
        let gi = g.partial(f, i);
        for j in i..n {
            let v = gi.partial(f, j).eval(f, x);
            h.set(i, j, v.clone());
            h.set(j, i, v);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, DEFAULT_PRIME};
    use crate::linalg::{rank, Matrix};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    fn perazzo(f: &PrimeField) -> MultiPoly<u64> {
        MultiPoly::from_terms(
            f,
            5,
            [
                (vec![1, 1, 1, 0, 0], 1),
                (vec![2, 0, 0, 0, 1], 1),
                (vec![0, 2, 0, 1, 0], 1),
            ],
        )
        .unwrap()
    }

    pub(crate) fn random_cubic<R: Rng>(f: &PrimeField, n: usize, terms: usize, rng: &mut R) -> MultiPoly<u64> {
        let all = monomials_of_degree(n, 3);
        let picked = (0..terms).map(|_| {
            let m = &all[rng.gen_range(0..all.len())];
            (m.exponents().to_vec(), f.random(rng))
        });
        MultiPoly::from_terms(f, n, picked).unwrap()
    }

    #[test]
    fn partial_of_perazzo() {
        let f = fp();
        let d0 = perazzo(&f).partial(&f, 0);
        let expected = MultiPoly::from_terms(
            &f,
            5,
            [(vec![0, 1, 1, 0, 0], 1), (vec![1, 0, 0, 0, 1], 2)],
        )
        .unwrap();
        assert_eq!(d0, expected);
        assert_eq!(d0.render(|c| f.to_signed(*c).to_string()), "2*x0*x4 + x1*x2");
    }

    #[test]
    fn partial_of_absent_variable_is_zero() {
        let f = fp();
        let cube = MultiPoly::from_terms(&f, 4, [(vec![3, 0, 0, 0], 1)]).unwrap();
        assert!(cube.partial(&f, 3).is_zero());
    }

    #[test]
    fn rejects_inhomogeneous() {
        let f = fp();
        let r = MultiPoly::from_terms(&f, 2, [(vec![3, 0], 1), (vec![1, 0], 1)]);
        assert!(matches!(r, Err(Error::Inhomogeneous { found: 1, expected: 3, .. })));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(5, 3).len(), 35);
        assert_eq!(monomials_of_degree(9, 2).len(), 45);
        assert_eq!(monomials_of_degree(3, 0).len(), 1);
        let m = monomials_of_degree(3, 2);
        assert_eq!(m[0].exponents(), &[2, 0, 0]);
        assert!(m.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn fermat_hessian_is_diagonal() {
        let f = fp();
        let n = 4;
        let fermat = MultiPoly::from_terms(
            &f,
            n,
            (0..n).map(|i| {
                let mut e = vec![0; n];
                e[i] = 3;
                (e, 1)
            }),
        )
        .unwrap();
        let x = vec![2, 3, 5, 7];
        let h = hessian(&f, &fermat, &x);
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { 6 * x[i] } else { 0 };
                assert_eq!(*h.get(i, j), expect);
            }
        }
    }

    #[test]
    fn perazzo_hessian_rank_at_most_four() {
        let f = fp();
        let g = perazzo(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x: Vec<u64> = (0..5).map(|_| f.random(&mut rng)).collect();
            assert!(rank(&f, &hessian(&f, &g, &x)) <= 4);
        }
    }

    #[test]
    fn restriction_to_singular_plane_vanishes() {
        let f = fp();
        // the plane x0 = x1 = 0 with basis e2, e3, e4
        let subs = vec![
            vec![0, 0, 0],
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ];
        assert!(perazzo(&f).compose_linear(&f, &subs).is_zero());
    }

    #[test]
    fn render_rational_style() {
        let f = PrimeField::new(11).unwrap();
        let g = MultiPoly::from_terms(&f, 3, [(vec![0, 0, 2], 7), (vec![1, 1, 0], 1)]).unwrap();
        assert_eq!(g.render(|c| f.to_signed(*c).to_string()), "x0*x1 - 4*x2^2");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn euler_identities(seed in any::<u64>(), n in 2usize..7, terms in 1usize..20) {
            let f = fp();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_cubic(&f, n, terms, &mut rng);
            let x: Vec<u64> = (0..n).map(|_| f.random(&mut rng)).collect();
            let grad: Vec<u64> = g.gradient(&f).iter().map(|p| p.eval(&f, &x)).collect();
            // sum x_i F_i = 3 F
            let lhs = crate::linalg::dot(&f, &x, &grad);
            prop_assert_eq!(lhs, f.mul(&3, &g.eval(&f, &x)));
            // Hess(x) x = 2 grad F(x)
            let hx = hessian(&f, &g, &x).mul_vec(&f, &x);
            let twice: Vec<u64> = grad.iter().map(|v| f.mul(&2, v)).collect();
            prop_assert_eq!(hx, twice);
        }

        #[test]
        fn partials_commute(seed in any::<u64>(), n in 2usize..6) {
            let f = fp();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_cubic(&f, n, 12, &mut rng);
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(g.partial(&f, i).partial(&f, j), g.partial(&f, j).partial(&f, i));
                }
            }
        }

        #[test]
        fn restriction_is_functorial(seed in any::<u64>(), n in 3usize..7, d in 1usize..4) {
            let f = fp();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_cubic(&f, n, 10, &mut rng);
            // L: n x (d+1) substitution, line inside L: (d+1) x 2
            let l: Vec<Vec<u64>> = (0..n).map(|_| (0..=d).map(|_| f.random(&mut rng)).collect()).collect();
            let line: Vec<Vec<u64>> = (0..=d).map(|_| (0..2).map(|_| f.random(&mut rng)).collect()).collect();
            let composed = Matrix::from_rows(l.clone(), d + 1)
                .mul(&f, &Matrix::from_rows(line.clone(), 2))
                .row_vecs();
            let two_step = g.compose_linear(&f, &l).compose_linear(&f, &line);
            prop_assert_eq!(two_step, g.compose_linear(&f, &composed));
        }
    }
}
