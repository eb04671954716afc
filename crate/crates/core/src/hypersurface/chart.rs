//! The Gauss map in an affine chart.
//!
//! Near a smooth point with `x_c = 1` and `F_s != 0`, X is the graph
//! `x_s = phi(u)` over the remaining `N - 1` affine coordinates `u`, and the
//! Gauss map is `u -> (phi - sum u_i phi_i, phi_1, ..., phi_{N-1})`. The
//! second derivatives of `phi` come from implicit differentiation of
//! `F(u, phi(u)) = 0`:
//!
//! ```text
//! phi_i  = -F_i / F_s
//! phi_ij = -(F_ij + F_is phi_j + F_js phi_i + F_ss phi_i phi_j) / F_s
//! ```

use super::cubic::CubicHypersurface;
use crate::field::Field;
use crate::linalg::{rank, Matrix};

/// Jacobian of the affine Gauss map at a point of X.
#[derive(Clone, Debug)]
pub struct ChartJacobian {
    /// Index of the coordinate set to one.
    pub chart: usize,
    /// Index of the coordinate solved for.
    pub solved: usize,
    /// The affine coordinates `u`, in order.
    pub free: Vec<usize>,
    /// Row `j` holds the derivatives along `u_j` of
    /// `(phi - sum u_i phi_i, phi_1, ..., phi_{N-1})`.
    pub matrix: Matrix<u64>,
}

/// `None` if `x_chart = 0` or `F_solved(x) = 0`.
pub fn chart_jacobian(x: &CubicHypersurface, point: &[u64], chart: usize, solved: usize) -> Option<ChartJacobian> {
    let f = x.field();
    let n = x.num_vars();
    if chart == solved || point[chart] == 0 {
        return None;
    }
    let scale = f.inv(&point[chart]).unwrap();
    let p: Vec<u64> = point.iter().map(|c| f.mul(c, &scale)).collect();
    let g = x.gradient(&p);
    let h = x.hessian(&p);
    let fs_inv = f.inv(&g[solved])?;
    let free: Vec<usize> = (0..n).filter(|&i| i != chart && i != solved).collect();
    let m = free.len();

    let phi1: Vec<u64> = free.iter().map(|&i| f.neg(&f.mul(&g[i], &fs_inv))).collect();
    let mut phi2 = Matrix::zeros(f, m, m);
    for (a, &i) in free.iter().enumerate() {
        for (b, &j) in free.iter().enumerate() {
            let mut t = *h.get(i, j);
            t = f.add(&t, &f.mul(h.get(i, solved), &phi1[b]));
            t = f.add(&t, &f.mul(h.get(j, solved), &phi1[a]));
            t = f.add(&t, &f.mul(&f.mul(h.get(solved, solved), &phi1[a]), &phi1[b]));
            phi2.set(a, b, f.neg(&f.mul(&t, &fs_inv)));
        }
    }

    let mut jac = Matrix::zeros(f, m, m + 1);
    for b in 0..m {
        // d/du_b (phi - sum_a u_a phi_a) = -sum_a u_a phi_ab
        let mut acc = 0;
        for (a, &i) in free.iter().enumerate() {
            acc = f.sub(&acc, &f.mul(&p[i], phi2.get(a, b)));
        }
        jac.set(b, 0, acc);
        for a in 0..m {
            jac.set(b, a + 1, *phi2.get(a, b));
        }
    }
    Some(ChartJacobian { chart, solved, free, matrix: jac })
}

/// `N - 1 - rank` of the affine Gauss map Jacobian, in the chart of the
/// first nonzero coordinate and solving for the first other coordinate
/// with nonzero partial.
pub fn chart_defect(x: &CubicHypersurface, point: &[u64]) -> Option<usize> {
    let chart = point.iter().position(|&c| c != 0)?;
    let g = x.gradient(point);
    let solved = (0..x.num_vars()).find(|&i| i != chart && g[i] != 0)?;
    let j = chart_jacobian(x, point, chart, solved)?;
    Some(x.ambient_dim() - 1 - rank(x.field(), &j.matrix))
}
