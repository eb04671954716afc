use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use super::point::{LinearSubspace, ProjectivePoint};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::linalg::{determinant, dot, kernel_basis, rank, rank_of_rows, Matrix};
use crate::poly::identity::{schwartz_zippel, IdentityTest};
use crate::poly::multi::{monomials_of_degree, MultiPoly};
use crate::poly::parse::reduce_mod_p;
use crate::poly::uni::{base_field_roots, UniPoly};

/// Attempts allowed when looking for a point by intersecting random lines with X.
pub const MAX_SAMPLE_ATTEMPTS: usize = 256;

/// The hypersurface `X = V(F)` for a cubic form `F` over `F_p`.
///
/// The Hessian of a cubic is linear in `x`, so it is stored as the constant
/// third-derivative tensor; the gradient and `F` itself follow from Euler's
/// relations `grad F(x) = Hess(x) x / 2` and `F(x) = x . grad F(x) / 3`.
#[derive(Clone, Debug)]
pub struct CubicHypersurface {
    field: PrimeField,
    poly: MultiPoly<u64>,
    source: Option<MultiPoly<BigRational>>,
    partials: Vec<MultiPoly<u64>>,
    // third[i][j][k] = d^3 F / dx_i dx_j dx_k
    third: Vec<Vec<Vec<u64>>>,
}

/// Vertex data for a cone: every tangent hyperplane contains `vertex_space`.
#[derive(Clone, Debug, Serialize)]
pub struct ConeCertificate {
    pub vertex: Vec<u64>,
    pub vertex_dim: usize,
    /// Random points at which `grad F(x) . v = 0` was confirmed for every basis vector `v`.
    pub verified_points: usize,
    #[serde(skip)]
    pub vertex_space: LinearSubspace,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectEvidence {
    pub delta: usize,
    /// Hessian rank at each sampled smooth point.
    pub ranks: Vec<usize>,
    /// Defect computed in an affine chart from the Jacobian of the affine Gauss map.
    pub chart_delta: Option<usize>,
}

impl DefectEvidence {
    pub fn chart_agrees(&self) -> bool {
        self.chart_delta.map_or(true, |d| d == self.delta)
    }
}

impl CubicHypersurface {
    pub fn new(field: PrimeField, poly: MultiPoly<u64>) -> Result<Self> {
        match poly.degree() {
            Some(3) => {}
            Some(d) => return Err(Error::NotCubic(format!("the form has degree {d}"))),
            None => return Err(Error::NotCubic("the form is zero".into())),
        }
        let n = poly.num_vars();
        if n < 2 {
            return Err(Error::NotCubic("at least two variables are required".into()));
        }
        let partials = poly.gradient(&field);
        let mut third = vec![vec![vec![0u64; n]; n]; n];
        for (i, fi) in partials.iter().enumerate() {
            for j in 0..n {
                let fij = fi.partial(&field, j);
                for (m, c) in fij.terms() {
                    let k = m.exponents().iter().position(|&e| e == 1).unwrap();
                    third[i][j][k] = *c;
                }
            }
        }
        Ok(Self { field, poly, source: None, partials, third })
    }

    /// Reduces a rational cubic modulo the field's prime, keeping the source
    /// so that the same input can be re-read at other primes.
    pub fn from_rational(field: PrimeField, source: &MultiPoly<BigRational>) -> Result<Self> {
        if source.degree() != Some(3) {
            return Err(Error::NotCubic(match source.degree() {
                Some(d) => format!("the form has degree {d}"),
                None => "the form is zero".into(),
            }));
        }
        let poly = reduce_mod_p(&field, source)?;
        if poly.is_zero() {
            return Err(Error::BadReduction(field.modulus()));
        }
        let mut x = Self::new(field, poly)?;
        x.source = Some(source.clone());
        Ok(x)
    }

    /// The same rational cubic over another prime field.
    pub fn at_prime(&self, field: PrimeField) -> Result<Self> {
        match &self.source {
            Some(s) => Self::from_rational(field, s),
            None => Err(Error::Precondition("no rational source to reduce at another prime".into())),
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn poly(&self) -> &MultiPoly<u64> {
        &self.poly
    }

    pub fn source(&self) -> Option<&MultiPoly<BigRational>> {
        self.source.as_ref()
    }

    pub fn partials(&self) -> &[MultiPoly<u64>] {
        &self.partials
    }

    /// `N`, the dimension of the ambient projective space.
    pub fn ambient_dim(&self) -> usize {
        self.poly.num_vars() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.poly.num_vars()
    }

    /// Hessian over any field containing `F_p`, given the embedding `lift`.
    pub fn hessian_in<G: Field>(&self, g: &G, lift: impl Fn(u64) -> G::Elem, x: &[G::Elem]) -> Matrix<G::Elem> {
        let n = self.num_vars();
        let mut h = Matrix::zeros(g, n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = g.zero();
                for (k, &c) in self.third[i][j].iter().enumerate() {
                    if c != 0 {
                        acc = g.add(&acc, &g.mul(&lift(c), &x[k]));
                    }
                }
                h.set(i, j, acc.clone());
                h.set(j, i, acc);
            }
        }
        h
    }

    pub fn gradient_in<G: Field>(&self, g: &G, lift: impl Fn(u64) -> G::Elem, x: &[G::Elem]) -> Vec<G::Elem> {
        let half = lift(self.field.inv(&2).unwrap());
        let h = self.hessian_in(g, &lift, x);
        h.mul_vec(g, x).iter().map(|v| g.mul(v, &half)).collect()
    }

    pub fn hessian(&self, x: &[u64]) -> Matrix<u64> {
        self.hessian_in(&self.field, |c| c, x)
    }

    pub fn gradient(&self, x: &[u64]) -> Vec<u64> {
        self.gradient_in(&self.field, |c| c, x)
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let f = &self.field;
        let third = f.inv(&3).unwrap();
        f.mul(&dot(f, x, &self.gradient(x)), &third)
    }

    pub fn is_singular_at(&self, x: &[u64]) -> bool {
        self.gradient(x).iter().all(|&v| v == 0)
    }

    pub fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        loop {
            let v: Vec<u64> = (0..self.num_vars()).map(|_| self.field.random(rng)).collect();
            if v.iter().any(|&c| c != 0) {
                return v;
            }
        }
    }

    /// A point of X found on a random line; with `require_smooth` the
    /// gradient must be nonzero there.
    pub fn sample_point<R: Rng + ?Sized>(&self, require_smooth: bool, rng: &mut R) -> Result<ProjectivePoint<u64>> {
        let f = &self.field;
        for _ in 0..MAX_SAMPLE_ATTEMPTS {
            let a = self.random_vector(rng);
            let b = self.random_vector(rng);
            // F(a + t b) = F(a) + t grad F(a).b + t^2 b^T Hess(a) b / 2 + t^3 F(b)
            let ga = self.gradient(&a);
            let hb = self.hessian(&a).mul_vec(f, &b);
            let c2 = f.mul(&dot(f, &b, &hb), &f.inv(&2).unwrap());
            let line = UniPoly::new(f, vec![self.eval(&a), dot(f, &ga, &b), c2, self.eval(&b)]);
            let mut candidates = Vec::new();
            if line.is_zero() {
                let t = f.random(rng);
                candidates.push(a.iter().zip(&b).map(|(ai, bi)| f.add(ai, &f.mul(&t, bi))).collect::<Vec<_>>());
            } else {
                if line.degree() < Some(3) {
                    candidates.push(b.clone());
                }
                for (t, _) in base_field_roots(f, &line, rng)? {
                    candidates.push(a.iter().zip(&b).map(|(ai, bi)| f.add(ai, &f.mul(&t, bi))).collect());
                }
            }
            for c in candidates {
                if c.iter().all(|&v| v == 0) {
                    continue;
                }
                debug_assert_eq!(self.eval(&c), 0);
                if !require_smooth || !self.is_singular_at(&c) {
                    return ProjectivePoint::new(f, c);
                }
            }
        }
        Err(Error::RetryExhausted(format!(
            "no {}point of X found on {MAX_SAMPLE_ATTEMPTS} random lines over F_{}; try a larger prime",
            if require_smooth { "smooth " } else { "" },
            f.modulus()
        )))
    }

    /// X is a cone iff the partial derivatives are linearly dependent; the
    /// dependencies are the vertex directions.
    pub fn is_cone<R: Rng + ?Sized>(&self, checks: usize, rng: &mut R) -> Option<ConeCertificate> {
        let f = &self.field;
        let n = self.num_vars();
        let monos = monomials_of_degree(n, 2);
        // columns = partials, rows = monomials, so the kernel holds the dependencies
        let rows: Vec<Vec<u64>> = monos
            .iter()
            .map(|m| self.partials.iter().map(|p| p.coeff(f, m.exponents())).collect())
            .collect();
        let kernel = kernel_basis(f, &Matrix::from_rows(rows, n));
        if kernel.is_empty() {
            return None;
        }
        let vertex_space = LinearSubspace::span(f, n, &kernel).unwrap();
        for _ in 0..checks {
            let x = self.random_vector(rng);
            let g = self.gradient(&x);
            for v in vertex_space.basis() {
                assert_eq!(dot(f, &g, v), 0, "vertex certificate failed");
            }
        }
        let vertex = ProjectivePoint::new(f, vertex_space.basis()[0].clone()).unwrap().into_coords();
        Some(ConeCertificate { vertex, vertex_dim: vertex_space.dim(), verified_points: checks, vertex_space })
    }

    /// Schwartz-Zippel test of `det Hess F = 0` (a form of degree `N + 1`).
    pub fn has_vanishing_hessian<R: Rng + ?Sized>(&self, trials: usize, rng: &mut R) -> IdentityTest {
        let f = self.field;
        let n = self.num_vars();
        schwartz_zippel(&f, n, n as u32, trials, rng, |x| determinant(&f, &self.hessian(x)))
    }

    /// `delta = N + 1 - max rank Hess(x)` over `samples` smooth points, with
    /// an affine-chart cross-check at the point of maximal rank.
    pub fn dual_defect<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> Result<DefectEvidence> {
        if samples < 3 {
            return Err(Error::Precondition("dual_defect needs at least 3 samples".into()));
        }
        let mut ranks = Vec::with_capacity(samples);
        let mut best: Option<(usize, ProjectivePoint<u64>)> = None;
        for _ in 0..samples {
            let x = self.sample_point(true, rng)?;
            let r = rank(&self.field, &self.hessian(x.coords()));
            if best.as_ref().map_or(true, |(b, _)| r > *b) {
                best = Some((r, x));
            }
            ranks.push(r);
        }
        let mut sorted = ranks.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == ranks.len() {
            return Err(Error::Unresolved(format!(
                "Hessian ranks {ranks:?} disagree pairwise; the prime may be unlucky or too small"
            )));
        }
        let (max_rank, x) = best.unwrap();
        let delta = self.num_vars() - max_rank;
        let chart_delta = super::chart::chart_defect(self, x.coords());
        Ok(DefectEvidence { delta, ranks, chart_delta })
    }

    pub fn tangent_hyperplane(&self, x: &[u64]) -> Result<LinearSubspace> {
        let g = self.gradient(x);
        if g.iter().all(|&v| v == 0) {
            return Err(Error::SingularPoint);
        }
        LinearSubspace::from_normals(&self.field, self.num_vars(), &[g])
    }

    /// `F` pulled back along the parameterization of `L`.
    pub fn restrict(&self, l: &LinearSubspace) -> MultiPoly<u64> {
        self.poly.compose_linear(&self.field, &l.substitution())
    }

    /// Exact test of `L` lying on X.
    pub fn subspace_in_x(&self, l: &LinearSubspace) -> bool {
        self.restrict(l).is_zero()
    }

    /// `X` intersected with a subspace, as a cubic in the subspace's coordinates.
    pub fn section(&self, l: &LinearSubspace) -> Result<Self> {
        let g = self.restrict(l);
        if g.is_zero() {
            return Err(Error::Precondition("the subspace lies on X".into()));
        }
        Self::new(self.field, g)
    }
}

/// Pullback of `g` along the span of `basis`, which must have full rank.
pub fn restrict_to_subspace(f: &PrimeField, g: &MultiPoly<u64>, basis: &[Vec<u64>]) -> Result<MultiPoly<u64>> {
    let n = g.num_vars();
    let r = rank_of_rows(f, basis, n);
    if r != basis.len() {
        return Err(Error::DegenerateSubspace { rank: r, expected: basis.len() });
    }
    let subs: Vec<Vec<u64>> = (0..n).map(|j| basis.iter().map(|b| b[j]).collect()).collect();
    Ok(g.compose_linear(f, &subs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::poly::parse::parse_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cubic(text: &str, p: u64) -> CubicHypersurface {
        CubicHypersurface::from_rational(PrimeField::new(p).unwrap(), &parse_polynomial(text).unwrap()).unwrap()
    }

    const PERAZZO: &str = "x0*x1*x2 + x0^2*x4 + x1^2*x3";

    #[test]
    fn rejects_non_cubics() {
        let f = PrimeField::new(7).unwrap();
        assert!(matches!(
            CubicHypersurface::from_rational(f, &parse_polynomial("x0^2 + x1^2").unwrap()),
            Err(Error::NotCubic(_))
        ));
        assert!(matches!(
            CubicHypersurface::from_rational(f, &parse_polynomial("7*x0^3").unwrap()),
            Err(Error::BadReduction(7))
        ));
    }

    #[test]
    fn evaluation_matches_polynomial() {
        let x = cubic(PERAZZO, DEFAULT_PRIME);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let v = x.random_vector(&mut rng);
            assert_eq!(x.eval(&v), x.poly().eval(x.field(), &v));
            let grad: Vec<u64> = x.partials().iter().map(|p| p.eval(x.field(), &v)).collect();
            assert_eq!(x.gradient(&v), grad);
        }
    }

    #[test]
    fn samples_on_fermat_over_f7() {
        let x = cubic("x0^3 + x1^3 + x2^3 + x3^3", 7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let p = x.sample_point(false, &mut rng).unwrap();
            let s: u64 = p.coords().iter().map(|c| c * c * c).sum();
            assert_eq!(s % 7, 0);
        }
    }

    #[test]
    fn perazzo_smooth_samples() {
        let x = cubic(PERAZZO, DEFAULT_PRIME);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let p = x.sample_point(true, &mut rng).unwrap();
            assert_eq!(x.poly().eval(x.field(), p.coords()), 0);
            assert!(!x.is_singular_at(p.coords()));
        }
    }

    #[test]
    fn triple_plane_has_no_smooth_points() {
        let x = cubic("vars: 3\nx0^3", 10007);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = x.sample_point(false, &mut rng).unwrap();
        assert_eq!(p.coords()[0], 0);
        assert!(x.is_singular_at(p.coords()));
        assert!(matches!(x.sample_point(true, &mut rng), Err(Error::RetryExhausted(_))));
    }

    #[test]
    fn cone_detection() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = cubic("vars: 5\nx0^3 + x1^3 + x2^3", DEFAULT_PRIME);
        let cert = x.is_cone(8, &mut rng).unwrap();
        assert_eq!(cert.vertex_dim, 1);
        assert!(cert.vertex_space.contains(x.field(), &[0, 0, 0, 1, 0]));
        assert!(cubic(PERAZZO, DEFAULT_PRIME).is_cone(8, &mut rng).is_none());
        assert!(cubic("-x0*x3*x4 + x3*x2^2 + x4*x1^2", DEFAULT_PRIME).is_cone(8, &mut rng).is_none());
    }

    #[test]
    fn hessian_tests() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(cubic(PERAZZO, DEFAULT_PRIME).has_vanishing_hessian(8, &mut rng).vanished);
        let join = cubic("-x0*x3*x4 + x3*x2^2 + x4*x1^2", DEFAULT_PRIME);
        let t = join.has_vanishing_hessian(8, &mut rng);
        assert!(!t.vanished && t.witness.is_some());
        assert!(!cubic("x0^3 + x1^3 + x2^3 + x3^3 + x4^3", DEFAULT_PRIME).has_vanishing_hessian(8, &mut rng).vanished);
    }

    #[test]
    fn defects() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let cases = [
            (PERAZZO, 1),
            ("x0^3 + x1^3 + x2^3 + x3^3 + x4^3", 0),
            ("-x0*x3*x4 + x3*x2^2 + x4*x1^2", 1),
            ("x0*x1*x2 + x0^2*x3 + x1^2*x0 + 2*x1^3 + 3*x1^2*x2", 0),
        ];
        for (text, delta) in cases {
            let e = cubic(text, DEFAULT_PRIME).dual_defect(5, &mut rng).unwrap();
            assert_eq!(e.delta, delta, "{text}");
            assert_eq!(e.chart_delta, Some(delta), "{text}");
        }
    }

    #[test]
    fn tangent_hyperplanes() {
        let x = cubic("x0^3 + x1^3 + x2^3 + x3^3", DEFAULT_PRIME);
        let f = *x.field();
        let p = vec![1, f.neg(&1), 0, 0];
        let t = x.tangent_hyperplane(&p).unwrap();
        assert!(t.contains(&f, &p));
        assert_eq!(t.normals(&f), vec![vec![1, 1, 0, 0]]);
        assert!(matches!(x.tangent_hyperplane(&[0, 0, 0, 0]), Err(Error::SingularPoint)));

        let perazzo = cubic(PERAZZO, DEFAULT_PRIME);
        let sing = LinearSubspace::from_normals(&f, 5, &[vec![1, 0, 0, 0, 0], vec![0, 1, 0, 0, 0]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let q = perazzo.sample_point(true, &mut rng).unwrap();
            let t = perazzo.tangent_hyperplane(q.coords()).unwrap();
            assert!(t.contains(&f, q.coords()));
            assert!(!t.contains_subspace(&f, &sing));
        }
    }

    #[test]
    fn subspaces_in_x() {
        let x = cubic(PERAZZO, DEFAULT_PRIME);
        let f = *x.field();
        let sing = LinearSubspace::from_normals(&f, 5, &[vec![1, 0, 0, 0, 0], vec![0, 1, 0, 0, 0]]).unwrap();
        assert!(x.subspace_in_x(&sing));
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let line = LinearSubspace::span(&f, 5, &[x.random_vector(&mut rng), x.random_vector(&mut rng)]).unwrap();
        assert!(!x.subspace_in_x(&line));
        assert!(restrict_to_subspace(&f, x.poly(), &[vec![1, 0, 0, 0, 0], vec![2, 0, 0, 0, 0]]).is_err());
    }

    #[test]
    fn line_through_singular_point_has_double_root() {
        let x = cubic(PERAZZO, DEFAULT_PRIME);
        let f = *x.field();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let s = vec![0, 0, f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)];
            let y = x.sample_point(true, &mut rng).unwrap();
            // F(s + t y) as a polynomial in t; t = 0 is the singular point
            let g = restrict_to_subspace(&f, x.poly(), &[s.clone(), y.coords().to_vec()]).unwrap();
            let uni = UniPoly::new(&f, (0..4).map(|k| g.coeff(&f, &[3 - k, k])).collect());
            assert_eq!(uni.coeff(&f, 0), 0);
            assert_eq!(uni.coeff(&f, 1), 0);
            let roots = base_field_roots(&f, &uni, &mut rng).unwrap();
            assert!(roots.contains(&(0, 2)) || roots.contains(&(0, 3)));
        }
    }
}
