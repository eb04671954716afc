//! Secant and join dimensions by Terracini's lemma.

use rand::Rng;

use super::interp::tangent_from_forms;
use super::sampler::SingularSampler;
use super::zlocus::ZCluster;
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::hypersurface::LinearSubspace;
use crate::linalg::rank_of_rows;

/// Where tangent spaces of a subvariety S come from.
#[derive(Clone, Copy, Debug)]
pub enum TangentSource<'a> {
    /// A parameterized component of Sing(X).
    Param { sampler: &'a SingularSampler, component: usize },
    /// A cluster of Z samples with interpolated equations.
    Cluster(&'a ZCluster),
}

/// A random point of S with its affine tangent space.
struct TangentPoint {
    point: Vec<u64>,
    tangent: Vec<Vec<u64>>,
}

fn tangent_point<R: Rng + ?Sized>(f: &PrimeField, n: usize, src: TangentSource<'_>, rng: &mut R) -> Result<TangentPoint> {
    match src {
        TangentSource::Param { sampler, component } => {
            let a = sampler.random_params(component, rng);
            Ok(TangentPoint { point: sampler.eval(component, &a), tangent: sampler.tangent(component, &a) })
        }
        TangentSource::Cluster(c) => {
            let forms = c.defining_forms();
            if forms.is_empty() && c.forms.iter().all(|s| !s.saturated) {
                return Err(Error::Unresolved("cluster equations are not saturated; no tangent spaces".into()));
            }
            let pts = c.base_points();
            if pts.is_empty() {
                return Err(Error::Unresolved("cluster has no rational points".into()));
            }
            let point = pts[rng.gen_range(0..pts.len())].clone();
            let tangent = tangent_from_forms(f, n, &forms, &point);
            Ok(TangentPoint { point, tangent })
        }
    }
}

/// `max dim <T_a S1, T_b S2>` over `trials` random pairs: the dimension of
/// Join(S1, S2), or of Sec(S1) when both sources are the same.
pub fn secant_or_join_dimension<R: Rng + ?Sized>(
    f: &PrimeField,
    n: usize,
    s1: TangentSource<'_>,
    s2: TangentSource<'_>,
    trials: usize,
    rng: &mut R,
) -> Result<usize> {
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let a = tangent_point(f, n, s1, rng)?;
        let b = tangent_point(f, n, s2, rng)?;
        if a.point == b.point {
            continue;
        }
        let mut rows = a.tangent;
        rows.extend(b.tangent);
        best = best.max(rank_of_rows(f, &rows, n).saturating_sub(1));
    }
    Ok(best)
}

/// Outcome of the linearity check for Sec(S).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SecantLinearity {
    pub secant_dim: usize,
    pub span_dim: usize,
    pub chords_checked: usize,
    pub holds: bool,
}

/// When `dim Sec(S) <= dim S + 1`, checks that `<S>` has dimension
/// `dim Sec(S)` and contains random chord points; `None` when the secant
/// is larger, so the check does not apply.
pub fn is_secant_linear_check<R: Rng + ?Sized>(
    f: &PrimeField,
    n: usize,
    src: TangentSource<'_>,
    dim_s: usize,
    chords: usize,
    rng: &mut R,
) -> Result<Option<SecantLinearity>> {
    let secant_dim = secant_or_join_dimension(f, n, src, src, chords.max(3), rng)?;
    if secant_dim > dim_s + 1 {
        return Ok(None);
    }
    let spanning: Vec<Vec<u64>> = (0..2 * n).map(|_| tangent_point(f, n, src, rng).map(|t| t.point)).collect::<Result<_>>()?;
    let span = LinearSubspace::span(f, n, &spanning)?;
    let mut holds = span.dim() == secant_dim;
    for _ in 0..chords {
        let a = tangent_point(f, n, src, rng)?.point;
        let b = tangent_point(f, n, src, rng)?.point;
        let (s, t) = (f.random(rng), f.random(rng));
        let chord: Vec<u64> = a.iter().zip(&b).map(|(u, v)| f.add(&f.mul(&s, u), &f.mul(&t, v))).collect();
        holds &= span.contains(f, &chord);
    }
    Ok(Some(SecantLinearity { secant_dim, span_dim: span.dim(), chords_checked: chords, holds }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::hypersurface::CubicHypersurface;
    use crate::loci::sampler::{integer_map, Parameterization};
    use crate::poly::parse::parse_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sampler_for(text: &str, maps: &[Parameterization]) -> (CubicHypersurface, SingularSampler) {
        let x = CubicHypersurface::from_rational(PrimeField::new(DEFAULT_PRIME).unwrap(), &parse_polynomial(text).unwrap())
            .unwrap();
        let s = SingularSampler::parameterized(&x, maps).unwrap();
        (x, s)
    }

    #[test]
    fn veronese_secant_is_a_hypersurface() {
        // det of [[a11,a12,a13],[a12,a22,a23],[a13,a23,a33]] in (a11, a12, a13, a22, a23, a33)
        let det = "x0*x3*x5 + 2*x1*x2*x4 - x0*x4^2 - x3*x2^2 - x5*x1^2";
        let e = |i: usize, j: usize| {
            let mut v = vec![0u32; 3];
            v[i] += 1;
            v[j] += 1;
            vec![(v, 1)]
        };
        let veronese = integer_map("veronese", 3, vec![e(0, 0), e(0, 1), e(0, 2), e(1, 1), e(1, 2), e(2, 2)]);
        let (x, s) = sampler_for(det, &[veronese]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let src = TangentSource::Param { sampler: &s, component: 0 };
        assert_eq!(secant_or_join_dimension(x.field(), 6, src, src, 5, &mut rng).unwrap(), 4);
        assert_eq!(is_secant_linear_check(x.field(), 6, src, 2, 5, &mut rng).unwrap(), None);
    }

    #[test]
    fn plane_conic_and_line() {
        // Sec of the conic (s^2 : st : t^2 : 0) fills its plane; Sec of a line is the line
        let x = "x3^3";
        let conic = integer_map("conic", 2, vec![vec![(vec![2, 0], 1)], vec![(vec![1, 1], 1)], vec![(vec![0, 2], 1)], vec![]]);
        let line = integer_map("line", 2, vec![vec![(vec![1, 0], 1)], vec![(vec![0, 1], 1)], vec![], vec![]]);
        let (x, s) = sampler_for(x, &[conic, line]);
        let f = x.field();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let conic = TangentSource::Param { sampler: &s, component: 0 };
        let line = TangentSource::Param { sampler: &s, component: 1 };
        assert_eq!(secant_or_join_dimension(f, 4, conic, conic, 5, &mut rng).unwrap(), 2);
        let c = is_secant_linear_check(f, 4, conic, 1, 10, &mut rng).unwrap().unwrap();
        assert!(c.holds);
        assert_eq!((c.secant_dim, c.span_dim), (2, 2));
        let l = is_secant_linear_check(f, 4, line, 1, 10, &mut rng).unwrap().unwrap();
        assert!(l.holds);
        assert_eq!(l.secant_dim, 1);
    }

    #[test]
    fn twisted_cubic_not_applicable() {
        // the twisted cubic inside the singular hyperplane x4 = 0 of V(x4^3)
        let twisted = integer_map(
            "twisted cubic",
            2,
            vec![vec![(vec![3, 0], 1)], vec![(vec![2, 1], 1)], vec![(vec![1, 2], 1)], vec![(vec![0, 3], 1)], vec![]],
        );
        let (y, s) = sampler_for("vars: 5\nx4^3", &[twisted]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let src = TangentSource::Param { sampler: &s, component: 0 };
        assert_eq!(secant_or_join_dimension(y.field(), 5, src, src, 5, &mut rng).unwrap(), 3);
        assert_eq!(is_secant_linear_check(y.field(), 5, src, 1, 5, &mut rng).unwrap(), None);
    }
}
