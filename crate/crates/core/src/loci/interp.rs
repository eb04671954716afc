//! Forms vanishing on a finite set of points, by linear algebra on the
//! evaluation matrix.

use crate::field::{Field, PrimeField};
use crate::hypersurface::{FieldPoint, LinearSubspace};
use crate::linalg::{kernel_basis, rank, rref, Matrix};
use crate::poly::{monomials_of_degree, Monomial, MultiPoly};

/// Number of surplus conditions beyond the rank required before a form
/// space is considered stable under further sampling.
pub const SATURATION_MARGIN: usize = 8;

/// Forms of one degree vanishing on a set of points.
#[derive(Clone, Debug)]
pub struct FormSpace {
    pub degree: u32,
    /// A basis in reduced echelon form over the monomials.
    pub forms: Vec<MultiPoly<u64>>,
    /// Number of linear conditions imposed (rows of the evaluation matrix).
    pub conditions: usize,
    /// Rank of the evaluation matrix.
    pub rank: usize,
    pub monomials: usize,
    /// True when the conditions exceed the rank by at least
    /// [`SATURATION_MARGIN`], or when no form survives.
    pub saturated: bool,
}

fn evaluation_rows(f: &PrimeField, monos: &[Monomial], p: &FieldPoint) -> Vec<Vec<u64>> {
    match p {
        FieldPoint::Base(q) => vec![monos.iter().map(|m| m.eval(f, q.coords())).collect()],
        FieldPoint::Extension { field, point } => {
            let values: Vec<Vec<u64>> = monos.iter().map(|m| m.eval(field, point.coords())).collect();
            // each F_p-coordinate of the value gives one condition
            (0..field.degree()).map(|j| values.iter().map(|v| v[j]).collect()).collect()
        }
    }
}

fn forms_from_vectors(f: &PrimeField, n: usize, monos: &[Monomial], vecs: Vec<Vec<u64>>) -> Vec<MultiPoly<u64>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let e = rref(f, &Matrix::from_rows(vecs, monos.len()));
    let r = e.rank();
    e.matrix
        .row_vecs()
        .into_iter()
        .take(r)
        .map(|row| {
            let terms = monos.iter().zip(row).filter(|(_, c)| *c != 0).map(|(m, c)| (m.exponents().to_vec(), c));
            MultiPoly::from_terms(f, n, terms).unwrap()
        })
        .collect()
}

/// Forms of degree `degree` in `n` variables vanishing at every point.
pub fn vanishing_forms(f: &PrimeField, n: usize, points: &[FieldPoint], degree: u32) -> FormSpace {
    let monos = monomials_of_degree(n, degree);
    let rows: Vec<Vec<u64>> = points.iter().flat_map(|p| evaluation_rows(f, &monos, p)).collect();
    let conditions = rows.len();
    let m = Matrix::from_rows(rows, monos.len());
    let r = rank(f, &m);
    let kernel = if conditions == 0 {
        Matrix::identity(f, monos.len()).row_vecs()
    } else {
        kernel_basis(f, &m)
    };
    let forms = forms_from_vectors(f, n, &monos, kernel);
    let saturated = forms.is_empty() || conditions >= r + SATURATION_MARGIN;
    FormSpace { degree, forms, conditions, rank: r, monomials: monos.len(), saturated }
}

/// One [`FormSpace`] per degree `1..=cap`.
pub fn interpolate_vanishing_forms(f: &PrimeField, n: usize, points: &[FieldPoint], cap: u32) -> Vec<FormSpace> {
    (1..=cap).map(|d| vanishing_forms(f, n, points, d)).collect()
}

/// Forms modulo those vanishing on `span`: the pivot variables of the
/// span's reduced normals are eliminated and the results are put in
/// reduced echelon form. Forms vanishing on the whole span disappear.
pub fn reduce_modulo_span(f: &PrimeField, span: &LinearSubspace, forms: &[MultiPoly<u64>]) -> Vec<MultiPoly<u64>> {
    let Some(degree) = forms.iter().find_map(MultiPoly::degree) else {
        return Vec::new();
    };
    let n = span.ambient();
    let normals = span.normals(f);
    // x_j -> x_j for free j; x_c -> -sum_{j free} a_j x_j for the pivot c of each normal
    let mut subs: Vec<Vec<u64>> = (0..n).map(|j| (0..n).map(|k| u64::from(j == k)).collect()).collect();
    for row in &normals {
        let c = row.iter().position(|&v| v != 0).unwrap();
        subs[c] = (0..n).map(|k| if k == c { 0 } else { f.neg(&row[k]) }).collect();
    }
    let monos = monomials_of_degree(n, degree);
    let vecs: Vec<Vec<u64>> = forms
        .iter()
        .map(|g| {
            let h = g.compose_linear(f, &subs);
            monos.iter().map(|m| h.coeff(f, m.exponents())).collect()
        })
        .collect();
    forms_from_vectors(f, n, &monos, vecs)
}

/// Affine tangent space at `x` of the common zero set of `forms`: the
/// kernel of their Jacobian.
pub fn tangent_from_forms(f: &PrimeField, n: usize, forms: &[MultiPoly<u64>], x: &[u64]) -> Vec<Vec<u64>> {
    if forms.is_empty() {
        return Matrix::identity(f, n).row_vecs();
    }
    let rows: Vec<Vec<u64>> = forms
        .iter()
        .map(|g| (0..n).map(|i| g.partial(f, i).eval(f, x)).collect())
        .collect();
    kernel_basis(f, &Matrix::from_rows(rows, n))
}

/// Common zeros test: every form vanishes at `x`.
pub fn forms_vanish_at(f: &PrimeField, forms: &[MultiPoly<u64>], x: &[u64]) -> bool {
    forms.iter().all(|g| g.eval(f, x) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::hypersurface::ProjectivePoint;
    use crate::poly::parse::format_mod_p;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn base(f: &PrimeField, v: Vec<u64>) -> FieldPoint {
        FieldPoint::Base(ProjectivePoint::new(f, v).unwrap())
    }

    #[test]
    fn line_through_two_points() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let pts = [base(&f, vec![1, 2, 3]), base(&f, vec![0, 1, 5])];
        let s = vanishing_forms(&f, 3, &pts, 1);
        assert_eq!(s.forms.len(), 1);
        for p in &pts {
            assert_eq!(s.forms[0].eval(&f, p.as_base().unwrap().coords()), 0);
        }
    }

    #[test]
    fn closed_under_multiplication_by_linear_forms() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // random points on the plane x0 = x1 = 0 in P^4
        let pts: Vec<FieldPoint> =
            (0..20).map(|_| base(&f, vec![0, 0, f.random(&mut rng), f.random(&mut rng), 1])).collect();
        let spaces = interpolate_vanishing_forms(&f, 5, &pts, 2);
        assert_eq!(spaces[0].forms.len(), 2);
        let quad = &spaces[1];
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let monos = monomials_of_degree(5, 2);
        let to_vec = |g: &MultiPoly<u64>| monos.iter().map(|m| g.coeff(&f, m.exponents())).collect::<Vec<_>>();
        rows.extend(quad.forms.iter().map(to_vec));
        let r = rank(&f, &Matrix::from_rows(rows.clone(), monos.len()));
        for l in &spaces[0].forms {
            for i in 0..5 {
                rows.push(to_vec(&l.mul(&f, &MultiPoly::variable(&f, 5, i))));
            }
        }
        assert_eq!(rank(&f, &Matrix::from_rows(rows, monos.len())), r);
    }

    #[test]
    fn perazzo_conic() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // the singular points (0 : 0 : -2a : 1 : a^2) of the Perazzo fibers
        let pts: Vec<FieldPoint> = (0..30)
            .map(|_| {
                let a = f.random(&mut rng);
                base(&f, vec![0, 0, f.neg(&f.mul(&2, &a)), 1, f.mul(&a, &a)])
            })
            .collect();
        let spaces = interpolate_vanishing_forms(&f, 5, &pts, 3);
        assert!(spaces.iter().all(|s| s.saturated));
        let coords: Vec<Vec<u64>> = pts.iter().map(|p| p.as_base().unwrap().coords().to_vec()).collect();
        let span = LinearSubspace::span(&f, 5, &coords).unwrap();
        assert_eq!(span.dim(), 2);
        assert!(reduce_modulo_span(&f, &span, &spaces[0].forms).is_empty());
        let q = reduce_modulo_span(&f, &span, &spaces[1].forms);
        assert_eq!(q.len(), 1);
        assert_eq!(format_mod_p(&f, &q[0]), "x2^2 - 4*x3*x4");
    }

    #[test]
    fn extension_points_give_rational_forms() {
        let f = PrimeField::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let ext = crate::field::ExtensionField::find_irreducible(&f, 2, &mut rng).unwrap();
        // the conjugate pair (1 : i : 0) and (1 : -i : 0), i^2 = -1, lies on x0^2 + x1^2 and x2
        let i = (0..49u64)
            .map(|v| vec![v % 7, v / 7])
            .find(|c| ext.mul(c, c) == ext.from_base(6))
            .unwrap();
        let p = FieldPoint::Extension {
            field: ext.clone(),
            point: ProjectivePoint::new(&ext, vec![ext.one(), i, ext.zero()]).unwrap(),
        };
        let s = vanishing_forms(&f, 3, std::slice::from_ref(&p), 1);
        assert_eq!(s.conditions, 2);
        assert_eq!(s.forms.len(), 1);
        assert_eq!(format_mod_p(&f, &s.forms[0]), "x2");
        let s = vanishing_forms(&f, 3, &[p], 2);
        assert!(s.forms.iter().any(|g| format_mod_p(&f, g) == "x0^2 + x1^2"));
    }
}
