use rand::Rng;
use serde::Serialize;

use super::cubic::CubicHypersurface;
use super::point::{FieldPoint, LinearSubspace, ProjectivePoint};
use crate::error::{Error, Result};
use crate::field::{ExtensionField, Field, PrimeField};
use crate::linalg::{kernel_basis, rank, Matrix};
use crate::poly::multi::{hessian, MultiPoly};
use crate::poly::uni::{univariate_roots, RootValue, UniPoly};

/// A Gauss fiber through a smooth point and its intersection with Sing(X).
#[derive(Clone, Debug)]
pub struct GaussFiberSample {
    pub base_point: ProjectivePoint<u64>,
    /// The closure of the fiber, a linear space of dimension delta.
    pub fiber: LinearSubspace,
    /// The quadric `lambda` in the coordinates of `fiber.basis()` with
    /// `grad F(y) = lambda(y) grad F(x)` on the fiber; its zero set is the
    /// fiber's intersection with Sing(X).
    pub lambda: MultiPoly<u64>,
    pub lambda_rank: usize,
    pub sing_points: Vec<FieldPoint>,
    /// Number of 2x2 minors of `(grad F(y), grad F(x))` verified to vanish
    /// identically on the fiber.
    pub minors_checked: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FiberShape {
    pub lambda_rank: usize,
    /// True when the singular part is a single (delta - 1)-plane.
    pub linear: bool,
    /// True when every sampled singular point is defined over `F_p`.
    pub split: bool,
    pub points: usize,
}

impl GaussFiberSample {
    pub fn shape(&self) -> FiberShape {
        FiberShape {
            lambda_rank: self.lambda_rank,
            linear: self.lambda_rank == 1,
            split: self.sing_points.iter().all(|p| p.degree() == 1),
            points: self.sing_points.len(),
        }
    }
}

/// Zeros of a nonzero binary form of degree at most 6 on `P^1`, with the
/// coordinates of each root as `(s0, s1)` over the field the root lives in.
pub(crate) enum BinaryRoot {
    Base([u64; 2]),
    Extension(ExtensionField, [Vec<u64>; 2]),
}

pub(crate) fn binary_roots<R: Rng + ?Sized>(f: &PrimeField, g: &MultiPoly<u64>, rng: &mut R) -> Result<Vec<BinaryRoot>> {
    let d = g.degree().ok_or(Error::ZeroPolynomial)? as usize;
    // g(t, 1) = sum_k c_k t^k where c_k is the coefficient of s0^k s1^(d-k)
    let coeffs: Vec<u64> = (0..=d).map(|k| g.coeff(f, &[k as u32, (d - k) as u32])).collect();
    let uni = UniPoly::new(f, coeffs);
    let mut out = Vec::new();
    if uni.degree() < Some(d) {
        out.push(BinaryRoot::Base([1, 0]));
    }
    if uni.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    for root in univariate_roots(f, &uni, rng)? {
        out.push(match root.value {
            RootValue::Base(t) => BinaryRoot::Base([t, 1]),
            RootValue::Extension { field, value } => {
                let one = field.one();
                BinaryRoot::Extension(field, [value, one])
            }
        });
    }
    Ok(out)
}

fn fiber_point(f: &PrimeField, basis: &[Vec<u64>], s: &[u64]) -> Vec<u64> {
    let n = basis[0].len();
    let mut out = vec![0; n];
    for (si, b) in s.iter().zip(basis) {
        for (o, bj) in out.iter_mut().zip(b) {
            *o = f.add(o, &f.mul(si, bj));
        }
    }
    out
}

/// `sum s_i basis_i` for extension-field scalars `s_i`.
fn fiber_point_ext(ext: &ExtensionField, basis: &[Vec<u64>], s: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = basis[0].len();
    let mut out = vec![ext.zero(); n];
    for (si, b) in s.iter().zip(basis) {
        for (o, &bj) in out.iter_mut().zip(b) {
            *o = ext.add(o, &ext.mul(si, &ext.from_base(bj)));
        }
    }
    out
}

impl CubicHypersurface {
    /// The Gauss fiber through the smooth point `x`, for a hypersurface of
    /// dual defect `delta >= 1`. `lines` random lines are used to sample the
    /// singular part when `delta >= 2`.
    pub fn gauss_fiber<R: Rng + ?Sized>(
        &self,
        x: &ProjectivePoint<u64>,
        delta: usize,
        lines: usize,
        rng: &mut R,
    ) -> Result<GaussFiberSample> {
        if delta == 0 {
            return Err(Error::Precondition("the Gauss fiber of a defect-zero hypersurface is a point".into()));
        }
        let f = *self.field();
        let n = self.num_vars();
        let g = self.gradient(x.coords());
        let Some(k) = g.iter().position(|&v| v != 0) else {
            return Err(Error::SingularPoint);
        };

        // W = { w : Hess(x) w is a multiple of grad F(x) }
        let h = self.hessian(x.coords());
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut r = h.row(i).to_vec();
                r.push(g[i]);
                r
            })
            .collect();
        let kernel = kernel_basis(&f, &Matrix::from_rows(rows, n + 1));
        let w: Vec<Vec<u64>> = kernel.into_iter().map(|mut v| {
            v.pop();
            v
        }).collect();
        if w.len() != delta + 1 {
            return Err(Error::DegenerateSubspace { rank: w.len(), expected: delta + 1 });
        }
        let fiber = LinearSubspace::from_basis(&f, n, &w)?;
        let basis = fiber.basis().to_vec();
        let subs = fiber.substitution();

        // grad F restricted to the fiber must be proportional to g
        let restricted: Vec<MultiPoly<u64>> = self.partials().iter().map(|p| p.compose_linear(&f, &subs)).collect();
        for (i, ri) in restricted.iter().enumerate() {
            let minor = ri.scale(&f, &g[k]).sub(&f, &restricted[k].scale(&f, &g[i]));
            if !minor.is_zero() {
                return Err(Error::Unresolved(format!(
                    "gradient is not proportional along the computed fiber (minor {i},{k}); the input may be reducible"
                )));
            }
        }
        let lambda = restricted[k].scale(&f, &f.inv(&g[k]).unwrap());
        if lambda.is_zero() {
            return Err(Error::Unresolved("the whole fiber is singular".into()));
        }
        let lambda_rank = rank(&f, &hessian(&f, &lambda, &vec![0; delta + 1]));

        let mut sing_points: Vec<FieldPoint> = Vec::new();
        let push = |p: FieldPoint, out: &mut Vec<FieldPoint>| {
            if !out.contains(&p) {
                out.push(p);
            }
        };
        let attempts = if delta == 1 { 1 } else { lines.max(1) };
        for _ in 0..attempts {
            // a line in the fiber's parameter space (the whole space when delta = 1)
            let (line_subs, on_line): (Vec<Vec<u64>>, Vec<Vec<u64>>) = if delta == 1 {
                (vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 1]])
            } else {
                let a: Vec<u64> = (0..=delta).map(|_| f.random(rng)).collect();
                let b: Vec<u64> = (0..=delta).map(|_| f.random(rng)).collect();
                ((0..=delta).map(|j| vec![a[j], b[j]]).collect(), vec![a, b])
            };
            let binary = lambda.compose_linear(&f, &line_subs);
            if binary.is_zero() {
                continue;
            }
            for root in binary_roots(&f, &binary, rng)? {
                match root {
                    BinaryRoot::Base(t) => {
                        let s = fiber_point(&f, &on_line, &t);
                        let y = fiber_point(&f, &basis, &s);
                        if let Ok(p) = ProjectivePoint::new(&f, y) {
                            push(FieldPoint::Base(p), &mut sing_points);
                        }
                    }
                    BinaryRoot::Extension(ext, t) => {
                        let s = fiber_point_ext(&ext, &on_line, &t);
                        let y = fiber_point_ext(&ext, &basis, &s);
                        if let Ok(p) = ProjectivePoint::new(&ext, y) {
                            push(FieldPoint::Extension { field: ext, point: p }, &mut sing_points);
                        }
                    }
                }
            }
        }
        if sing_points.is_empty() {
            return Err(Error::RetryExhausted("no singular point found on the fiber".into()));
        }
        for p in &sing_points {
            let zero = match p {
                FieldPoint::Base(q) => self.is_singular_at(q.coords()),
                FieldPoint::Extension { field, point } => self
                    .gradient_in(field, |c| field.from_base(c), point.coords())
                    .iter()
                    .all(|v| field.is_zero(v)),
            };
            assert!(zero, "fiber singular point with nonzero gradient");
        }
        Ok(GaussFiberSample {
            base_point: x.clone(),
            fiber,
            lambda,
            lambda_rank,
            sing_points,
            minors_checked: n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::poly::parse::parse_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cubic(text: &str) -> CubicHypersurface {
        CubicHypersurface::from_rational(PrimeField::new(DEFAULT_PRIME).unwrap(), &parse_polynomial(text).unwrap()).unwrap()
    }

    #[test]
    fn perazzo_fiber_matches_explicit_line() {
        let x = cubic("x0*x1*x2 + x0^2*x4 + x1^2*x3");
        let f = *x.field();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let a = f.random_nonzero(&mut rng);
            let b = f.random(&mut rng);
            // the point (t : at : -bt - 2au : u : abt + a^2 u) with t = 1, u = 0
            let p = vec![1, a, f.neg(&b), 0, f.mul(&a, &b)];
            assert_eq!(x.eval(&p), 0);
            let point = ProjectivePoint::new(&f, p.clone()).unwrap();
            let s = x.gauss_fiber(&point, 1, 0, &mut rng).unwrap();
            let z = vec![0, 0, f.neg(&f.mul(&2, &a)), 1, f.mul(&a, &a)];
            let expected = LinearSubspace::span(&f, 5, &[p, z.clone()]).unwrap();
            assert_eq!(s.fiber, expected);
            assert_eq!(s.lambda_rank, 1);
            assert_eq!(s.sing_points, vec![FieldPoint::Base(ProjectivePoint::new(&f, z).unwrap())]);
        }
    }

    #[test]
    fn join_fiber_meets_both_conics() {
        let x = cubic("-x0*x3*x4 + x3*x2^2 + x4*x1^2");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let p = x.sample_point(true, &mut rng).unwrap();
            let s = x.gauss_fiber(&p, 1, 0, &mut rng).unwrap();
            assert_eq!(s.lambda_rank, 2);
            assert_eq!(s.sing_points.len(), 2);
            assert!(s.shape().split);
            // one point on each conic: y2 = 0 on the first, y1 = 0 on the second
            let on_first = s.sing_points.iter().filter(|q| q.as_base().unwrap().coords()[4] == 0).count();
            let on_second = s.sing_points.iter().filter(|q| q.as_base().unwrap().coords()[3] == 0).count();
            assert_eq!((on_first, on_second), (1, 1));
        }
    }

    #[test]
    fn defect_zero_is_rejected() {
        let x = cubic("x0^3 + x1^3 + x2^3 + x3^3");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = x.sample_point(true, &mut rng).unwrap();
        assert!(matches!(x.gauss_fiber(&p, 0, 0, &mut rng), Err(Error::Precondition(_))));
    }
}
