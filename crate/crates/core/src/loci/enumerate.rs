//! Exhaustive search for singular points over tiny prime fields.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::hypersurface::CubicHypersurface;
use crate::linalg::rank;
use crate::poly::MultiPoly;

/// Primes used for exhaustive enumeration.
pub const TINY_PRIMES: [u64; 3] = [5, 7, 11];

/// Largest `q^(N+1)` for which a scan is attempted.
pub const ENUMERATION_GUARD: u128 = 1_000_000_000;

struct QuadricEval {
    // (i, j, c): the term c x_i x_j
    terms: Vec<(usize, usize, u64)>,
}

/// All points of `P^N(F_q)` where the gradient of `x` vanishes, where `x`
/// is defined over `F_q`. Points are normalized and listed in increasing
/// order of the position of their leading one, then lexicographically.
pub fn enumerate_singular(x: &CubicHypersurface) -> Result<Vec<Vec<u64>>> {
    let q = x.field().modulus();
    let n = x.num_vars();
    let points = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if points > ENUMERATION_GUARD {
        return Err(Error::GuardExceeded { q, points });
    }
    let partials: Vec<QuadricEval> = x
        .partials()
        .iter()
        .map(|p| QuadricEval {
            terms: p
                .terms()
                .map(|(m, &c)| {
                    let e = m.exponents();
                    let i = e.iter().position(|&v| v > 0).unwrap();
                    let j = if e[i] == 2 { i } else { i + 1 + e[i + 1..].iter().position(|&v| v > 0).unwrap() };
                    (i, j, c)
                })
                .collect(),
        })
        .collect();

    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - 1 - lead;
        let total = q.pow(free as u32);
        let found: Vec<Vec<u64>> = (0..total)
            .into_par_iter()
            .filter_map(|mut idx| {
                let mut v = vec![0u64; n];
                v[lead] = 1;
                for slot in v.iter_mut().skip(lead + 1) {
                    *slot = idx % q;
                    idx /= q;
                }
                let singular = partials.iter().all(|p| {
                    p.terms.iter().map(|&(i, j, c)| c * v[i] * v[j]).sum::<u64>() % q == 0
                });
                singular.then_some(v)
            })
            .collect();
        out.extend(found);
    }
    Ok(out)
}

/// Dimension of Sing(X) estimated from point counts over tiny primes.
#[derive(Clone, Debug, Serialize)]
pub struct EnumeratedDimension {
    /// `(q, number of singular points over F_q)` for each prime scanned.
    pub counts: Vec<(u64, usize)>,
    /// Slope of `log(count)` against `log(q)` for the two largest primes scanned.
    pub slope: Option<f64>,
    pub estimate: Option<usize>,
    /// Most frequent value of `dim ker Hess(z) - 1` over the singular points
    /// found at the largest prime.
    pub tangent_estimate: Option<usize>,
    pub consistent: bool,
}

/// Scans Sing(X) over every tiny prime that the guard and the coefficients
/// allow, returning the point lists by prime.
pub fn enumerate_at_tiny_primes(source: &MultiPoly<BigRational>) -> BTreeMap<u64, Vec<Vec<u64>>> {
    let mut out = BTreeMap::new();
    for q in TINY_PRIMES {
        let f = PrimeField::new(q).unwrap();
        let Ok(x) = CubicHypersurface::from_rational(f, source) else { continue };
        if let Ok(points) = enumerate_singular(&x) {
            out.insert(q, points);
        }
    }
    out
}

pub fn enumerated_dimension(source: &MultiPoly<BigRational>) -> Result<EnumeratedDimension> {
    let scans = enumerate_at_tiny_primes(source);
    if scans.len() < 2 {
        return Err(Error::Unresolved("fewer than two tiny primes are usable for enumeration".into()));
    }
    let counts: Vec<(u64, usize)> = scans.iter().map(|(&q, pts)| (q, pts.len())).collect();
    let (q1, c1) = counts[counts.len() - 2];
    let (q2, c2) = counts[counts.len() - 1];
    let slope = (c1 > 0 && c2 > 0).then(|| ((c2 as f64) / (c1 as f64)).ln() / ((q2 as f64) / (q1 as f64)).ln());
    let estimate = slope.map(|s| s.round().max(0.0) as usize);

    let (&q, points) = scans.iter().next_back().unwrap();
    let x = CubicHypersurface::from_rational(PrimeField::new(q).unwrap(), source)?;
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for z in points {
        let t = x.num_vars() - rank(x.field(), &x.hessian(z)) - 1;
        *freq.entry(t).or_default() += 1;
    }
    let tangent_estimate = freq.iter().max_by_key(|(&t, &c)| (c, t)).map(|(&t, _)| t);
    let consistent = estimate == tangent_estimate;
    Ok(EnumeratedDimension { counts, slope, estimate, tangent_estimate, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_polynomial;

    fn over(text: &str, q: u64) -> CubicHypersurface {
        CubicHypersurface::from_rational(PrimeField::new(q).unwrap(), &parse_polynomial(text).unwrap()).unwrap()
    }

    #[test]
    fn perazzo_plane_over_f5() {
        let pts = enumerate_singular(&over("x0*x1*x2 + x0^2*x4 + x1^2*x3", 5)).unwrap();
        assert_eq!(pts.len(), 31);
        assert!(pts.iter().all(|p| p[0] == 0 && p[1] == 0));
    }

    #[test]
    fn fermat_is_smooth_over_f7() {
        assert!(enumerate_singular(&over("x0^3 + x1^3 + x2^3 + x3^3", 7)).unwrap().is_empty());
    }

    #[test]
    fn triple_line_over_f5() {
        let pts = enumerate_singular(&over("vars: 3\nx0^3", 5)).unwrap();
        assert_eq!(pts.len(), 6);
        assert!(pts.iter().all(|p| p[0] == 0));
    }

    #[test]
    fn guard() {
        let text = "vars: 14\nx0^3";
        assert!(matches!(enumerate_singular(&over(text, 5)), Err(Error::GuardExceeded { q: 5, .. })));
    }

    #[test]
    fn dimension_from_counts() {
        let d = enumerated_dimension(&parse_polynomial("x0*x1*x2 + x0^2*x4 + x1^2*x3").unwrap()).unwrap();
        assert_eq!(d.counts, vec![(5, 31), (7, 57), (11, 133)]);
        assert_eq!((d.estimate, d.tangent_estimate, d.consistent), (Some(2), Some(2), true));
        let d = enumerated_dimension(&parse_polynomial("-x0*x3*x4 + x3*x2^2 + x4*x1^2").unwrap()).unwrap();
        assert_eq!(d.counts, vec![(5, 11), (7, 15), (11, 23)]);
        assert_eq!(d.estimate, Some(1));
        assert!(d.consistent);
    }
}
