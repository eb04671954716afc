//! Dense exact linear algebra over any [`Field`].

use crate::field::Field;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Self { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| dot(f, self.row(r), v))
            .collect()
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), &f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub matrix: Matrix<E>,
    pub pivots: Vec<usize>,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss-Jordan elimination. Deterministic: the pivot in each column is the
/// first nonzero entry at or below the current row.
pub fn rref<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Echelon<F::Elem> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !f.is_zero(a.get(r, col))) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = f.inv(a.get(row, col)).unwrap();
        for c in col..a.cols {
            let v = f.mul(a.get(row, c), &inv);
            a.set(row, c, v);
        }
        for r in 0..a.rows {
            if r == row {
                continue;
            }
            let factor = a.get(r, col).clone();
            if f.is_zero(&factor) {
                continue;
            }
            for c in col..a.cols {
                let v = f.sub(a.get(r, c), &f.mul(&factor, a.get(row, c)));
                a.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon { matrix: a, pivots }
}

/// Forward elimination only; enough for the rank.
pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.clone();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !f.is_zero(a.get(r, col))) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = f.inv(a.get(row, col)).unwrap();
        for r in row + 1..a.rows {
            let factor = f.mul(a.get(r, col), &inv);
            if f.is_zero(&factor) {
                continue;
            }
            for c in col..a.cols {
                let v = f.sub(a.get(r, c), &f.mul(&factor, a.get(row, c)));
                a.set(r, c, v);
            }
        }
        row += 1;
    }
    row
}

/// Rank of a list of vectors of common length.
pub fn rank_of_rows<F: Field>(f: &F, rows: &[Vec<F::Elem>], cols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rank(f, &Matrix::from_rows(rows.to_vec(), cols))
}

/// Basis of the right null space `{ v : A v = 0 }`, one vector per free column,
/// in increasing order of the free column.
pub fn kernel_basis<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let ech = rref(f, m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); m.cols];
        v[free] = f.one();
        for (r, &p) in ech.pivots.iter().enumerate() {
            v[p] = f.neg(ech.matrix.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// One solution of `A x = b`, or `None` when the system is inconsistent.
pub fn solve<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(a.rows, b.len(), "right-hand side length");
    let aug_rows: Vec<Vec<F::Elem>> = (0..a.rows)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let aug = Matrix::from_rows(aug_rows, a.cols + 1);
    let ech = rref(f, &aug);
    if ech.pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![f.zero(); a.cols];
    for (r, &p) in ech.pivots.iter().enumerate() {
        x[p] = ech.matrix.get(r, a.cols).clone();
    }
    Some(x)
}

/// Determinant by elimination; panics on non-square input.
pub fn determinant<F: Field>(f: &F, m: &Matrix<F::Elem>) -> F::Elem {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let mut a = m.clone();
    let mut det = f.one();
    for col in 0..a.cols {
        let Some(p) = (col..a.rows).find(|&r| !f.is_zero(a.get(r, col))) else {
            return f.zero();
        };
        if p != col {
            a.swap_rows(col, p);
            det = f.neg(&det);
        }
        let pivot = a.get(col, col).clone();
        det = f.mul(&det, &pivot);
        let inv = f.inv(&pivot).unwrap();
        for r in col + 1..a.rows {
            let factor = f.mul(a.get(r, col), &inv);
            if f.is_zero(&factor) {
                continue;
            }
            for c in col..a.cols {
                let v = f.sub(a.get(r, c), &f.mul(&factor, a.get(col, c)));
                a.set(r, c, v);
            }
        }
    }
    det
}
