use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{ExtensionField, Field, PrimeField};
use crate::linalg::{kernel_basis, rank_of_rows, rref, Matrix};

/// A point of projective space, scaled so that its first nonzero
/// coordinate is one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint<E> {
    coords: Vec<E>,
}

impl<E: Clone + PartialEq> ProjectivePoint<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, mut coords: Vec<E>) -> Result<Self> {
        let lead = coords
            .iter()
            .find(|c| !f.is_zero(c))
            .cloned()
            .ok_or_else(|| Error::Dimension("the zero vector is not a projective point".into()))?;
        let inv = f.inv(&lead).unwrap();
        for c in &mut coords {
            *c = f.mul(c, &inv);
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[E] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<E> {
        self.coords
    }

    /// Number of homogeneous coordinates, `N + 1`.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// A point defined over `F_p` or over a finite extension of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldPoint {
    Base(ProjectivePoint<u64>),
    Extension { field: ExtensionField, point: ProjectivePoint<Vec<u64>> },
}

impl FieldPoint {
    /// Degree over `F_p` of the field the coordinates live in.
    pub fn degree(&self) -> usize {
        match self {
            FieldPoint::Base(_) => 1,
            FieldPoint::Extension { field, .. } => field.degree(),
        }
    }

    pub fn as_base(&self) -> Option<&ProjectivePoint<u64>> {
        match self {
            FieldPoint::Base(p) => Some(p),
            FieldPoint::Extension { .. } => None,
        }
    }

    /// Restriction of scalars: writing `z = sum_j z_j a^j` with `z_j` over
    /// `F_p`, returns the vectors `z_j`. Their span is the smallest
    /// `F_p`-rational subspace containing `z` and its conjugates.
    pub fn rational_components(&self) -> Vec<Vec<u64>> {
        match self {
            FieldPoint::Base(p) => vec![p.coords().to_vec()],
            FieldPoint::Extension { field, point } => (0..field.degree())
                .map(|j| point.coords().iter().map(|c| c[j]).collect())
                .collect(),
        }
    }
}

/// A projective linear subspace, stored as the reduced row echelon form of
/// a basis of its affine cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSubspace {
    ambient: usize,
    basis: Vec<Vec<u64>>,
}

impl LinearSubspace {
    /// The span of the given vectors; fails if they are all zero.
    pub fn span(f: &PrimeField, ambient: usize, vectors: &[Vec<u64>]) -> Result<Self> {
        let m = Matrix::from_rows(vectors.to_vec(), ambient);
        let e = rref(f, &m);
        let r = e.rank();
        if r == 0 {
            return Err(Error::DegenerateSubspace { rank: 0, expected: 1 });
        }
        let basis = e.matrix.row_vecs().into_iter().take(r).collect();
        Ok(Self { ambient, basis })
    }

    /// The span of a basis that must be linearly independent.
    pub fn from_basis(f: &PrimeField, ambient: usize, basis: &[Vec<u64>]) -> Result<Self> {
        let s = Self::span(f, ambient, basis)?;
        if s.basis.len() != basis.len() {
            return Err(Error::DegenerateSubspace { rank: s.basis.len(), expected: basis.len() });
        }
        Ok(s)
    }

    /// Common zero set of the given linear forms.
    pub fn from_normals(f: &PrimeField, ambient: usize, normals: &[Vec<u64>]) -> Result<Self> {
        let kernel = if normals.is_empty() {
            Matrix::identity(f, ambient).row_vecs()
        } else {
            kernel_basis(f, &Matrix::from_rows(normals.to_vec(), ambient))
        };
        Self::span(f, ambient, &kernel)
    }

    pub fn whole(f: &PrimeField, ambient: usize) -> Self {
        Self::from_normals(f, ambient, &[]).unwrap()
    }

    /// Projective dimension.
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    /// Number of homogeneous coordinates of the ambient space.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    /// Linear forms cutting out the subspace, in reduced echelon form.
    pub fn normals(&self, f: &PrimeField) -> Vec<Vec<u64>> {
        let k = kernel_basis(f, &Matrix::from_rows(self.basis.clone(), self.ambient));
        if k.is_empty() {
            return k;
        }
        let e = rref(f, &Matrix::from_rows(k, self.ambient));
        let r = e.rank();
        e.matrix.row_vecs().into_iter().take(r).collect()
    }

    pub fn contains(&self, f: &PrimeField, v: &[u64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank_of_rows(f, &rows, self.ambient) == self.basis.len()
    }

    pub fn contains_subspace(&self, f: &PrimeField, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(f, v))
    }

    pub fn join(&self, f: &PrimeField, other: &Self) -> Self {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::span(f, self.ambient, &rows).unwrap()
    }

    /// `None` when the intersection is empty.
    pub fn intersect(&self, f: &PrimeField, other: &Self) -> Option<Self> {
        let mut normals = self.normals(f);
        normals.extend(other.normals(f));
        Self::from_normals(f, self.ambient, &normals).ok()
    }

    /// Coordinates `c` with `v = sum c_i basis_i`, if `v` lies in the subspace.
    pub fn coordinates(&self, f: &PrimeField, v: &[u64]) -> Option<Vec<u64>> {
        let a = Matrix::from_rows(self.basis.clone(), self.ambient).transpose();
        crate::linalg::solve(f, &a, v)
    }

    /// `sum c_i basis_i`.
    pub fn point_at(&self, f: &PrimeField, c: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.ambient];
        for (ci, b) in c.iter().zip(&self.basis) {
            for (o, bj) in out.iter_mut().zip(b) {
                *o = f.add(o, &f.mul(ci, bj));
            }
        }
        out
    }

    pub fn random_point<R: Rng + ?Sized>(&self, f: &PrimeField, rng: &mut R) -> Vec<u64> {
        loop {
            let c: Vec<u64> = (0..self.basis.len()).map(|_| f.random(rng)).collect();
            let v = self.point_at(f, &c);
            if v.iter().any(|&x| x != 0) {
                return v;
            }
        }
    }

    /// The substitution matrix `x_j = sum_k basis[k][j] t_k`, as consumed by
    /// [`crate::poly::MultiPoly::compose_linear`].
    pub fn substitution(&self) -> Vec<Vec<u64>> {
        (0..self.ambient)
            .map(|j| self.basis.iter().map(|b| b[j]).collect())
            .collect()
    }
}
