//! Generators for the named example cubics, with parameterizations of
//! their singular loci where one is known.

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{PrimeField, RationalField};
use crate::hypersurface::CubicHypersurface;
use crate::loci::sampler::{integer_map, Parameterization, SingularSampler};
use crate::poly::MultiPoly;

/// Largest ambient dimension a family may be generated in.
pub const MAX_AMBIENT: usize = 8;

/// The two normal forms for `N = 3` with `P^1 = (x0 = x1 = 0)` singular.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma22Variant {
    /// `x0*x1*x2 + x0^2*x3 + x1^2*l`
    A,
    /// `x0*x1*l + x0^2*x3 + x1^2*x2`
    B,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    PerazzoP4,
    JoinQuadrics { p: usize, q: usize },
    Det3Symmetric,
    Det3General,
    Fermat { n: usize },
    ConeOver { inner: Box<FamilySpec>, extra: usize },
    Lemma22N3 { variant: Lemma22Variant, l: [i64; 4] },
}

/// Default linear form `x0 + 2*x1 + 3*x2` for the `N = 3` variants.
pub const DEFAULT_L: [i64; 4] = [1, 2, 3, 0];

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::PerazzoP4 => write!(f, "perazzo_p4"),
            FamilySpec::JoinQuadrics { p, q } => write!(f, "join_quadrics(p={p}, q={q})"),
            FamilySpec::Det3Symmetric => write!(f, "det3_symmetric"),
            FamilySpec::Det3General => write!(f, "det3_general"),
            FamilySpec::Fermat { n } => write!(f, "fermat(n={n})"),
            FamilySpec::ConeOver { inner, extra } => write!(f, "cone_over({inner}, extra={extra})"),
            FamilySpec::Lemma22N3 { variant, l } => write!(f, "lemma22_n3({variant:?}, l={l:?})"),
        }
    }
}

/// A generated cubic over Q with optional parameterized singular components.
#[derive(Clone, Debug)]
pub struct Family {
    pub spec: FamilySpec,
    pub poly: MultiPoly<BigRational>,
    pub components: Vec<Parameterization>,
}

impl Family {
    pub fn num_vars(&self) -> usize {
        self.poly.num_vars()
    }

    /// The cubic over `F_p` and, when components are known, a validated sampler.
    pub fn at_prime(&self, field: PrimeField) -> Result<(CubicHypersurface, Option<SingularSampler>)> {
        let x = CubicHypersurface::from_rational(field, &self.poly)?;
        let sampler = if self.components.is_empty() {
            None
        } else {
            Some(SingularSampler::parameterized(&x, &self.components)?)
        };
        Ok((x, sampler))
    }
}

type Terms = Vec<(Vec<u32>, i64)>;

fn mono(n: usize, vars: &[usize]) -> Vec<u32> {
    let mut e = vec![0; n];
    for &v in vars {
        e[v] += 1;
    }
    e
}

fn poly(n: usize, terms: Terms) -> MultiPoly<BigRational> {
    let q = RationalField;
    MultiPoly::from_terms(&q, n, terms.into_iter().map(|(e, c)| (e, BigRational::from_integer(c.into())))).unwrap()
}

fn check_ambient(n_vars: usize) -> Result<()> {
    if n_vars < 3 || n_vars - 1 > MAX_AMBIENT {
        return Err(Error::InvalidParameters(format!(
            "ambient dimension {} is outside 2..={MAX_AMBIENT}",
            n_vars.saturating_sub(1)
        )));
    }
    Ok(())
}

pub fn generate(spec: &FamilySpec) -> Result<Family> {
    let (poly, components) = match spec {
        FamilySpec::PerazzoP4 => {
            let n = 5;
            let f = poly(n, vec![(mono(n, &[0, 1, 2]), 1), (mono(n, &[0, 0, 4]), 1), (mono(n, &[1, 1, 3]), 1)]);
            let plane = integer_map(
                "singular plane",
                3,
                vec![vec![], vec![], vec![(mono(3, &[0]), 1)], vec![(mono(3, &[1]), 1)], vec![(mono(3, &[2]), 1)]],
            );
            (f, vec![plane])
        }
        &FamilySpec::JoinQuadrics { p, q } => {
            if p == 0 || q == 0 || p + q > MAX_AMBIENT - 2 {
                return Err(Error::InvalidParameters(format!(
                    "join_quadrics needs p, q >= 1 and p + q <= {}, got p = {p}, q = {q}",
                    MAX_AMBIENT - 2
                )));
            }
            let n = p + q + 3;
            let (y1, y2) = (p + q + 1, p + q + 2);
            let mut terms: Terms = vec![(mono(n, &[0, y1, y2]), -1)];
            terms.extend((p + 1..=p + q).map(|j| (mono(n, &[y1, j, j]), 1)));
            terms.extend((1..=p).map(|i| (mono(n, &[y2, i, i]), 1)));
            let f = poly(n, terms);
            // (t, a_1..a_k) -> x0 = t^2, x_i = t a_i on the block, y = sum a_i^2
            let quadric = |name: &str, block: std::ops::RangeInclusive<usize>, y: usize| {
                let k = block.clone().count();
                let m = k + 1;
                let mut coords: Vec<Terms> = vec![Vec::new(); n];
                coords[0] = vec![(mono(m, &[0, 0]), 1)];
                for (a, i) in block.enumerate() {
                    coords[i] = vec![(mono(m, &[0, a + 1]), 1)];
                }
                coords[y] = (1..=k).map(|a| (mono(m, &[a, a]), 1)).collect();
                integer_map(name, m, coords)
            };
            (f, vec![quadric("Q1", 1..=p, y1), quadric("Q2", p + 1..=p + q, y2)])
        }
        FamilySpec::Det3Symmetric => {
            // coordinates (a11, a12, a13, a22, a23, a33)
            let n = 6;
            let f = poly(
                n,
                vec![
                    (mono(n, &[0, 3, 5]), 1),
                    (mono(n, &[1, 2, 4]), 2),
                    (mono(n, &[0, 4, 4]), -1),
                    (mono(n, &[3, 2, 2]), -1),
                    (mono(n, &[5, 1, 1]), -1),
                ],
            );
            let pairs = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
            let veronese = integer_map("Veronese surface", 3, pairs.iter().map(|&(i, j)| vec![(mono(3, &[i, j]), 1)]).collect());
            (f, vec![veronese])
        }
        FamilySpec::Det3General => {
            // coordinate 3i + j is the entry a_ij
            let n = 9;
            let perms: [([usize; 3], i64); 6] =
                [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)];
            let f = poly(
                n,
                perms.iter().map(|(s, sign)| (mono(n, &[s[0], 3 + s[1], 6 + s[2]]), *sign)).collect(),
            );
            // (u, v) -> u_i v_j
            let segre = integer_map(
                "Segre P2 x P2",
                6,
                (0..9).map(|c| vec![(mono(6, &[c / 3, 3 + c % 3]), 1)]).collect(),
            );
            (f, vec![segre])
        }
        &FamilySpec::Fermat { n } => {
            if !(2..=MAX_AMBIENT).contains(&n) {
                return Err(Error::InvalidParameters(format!("fermat needs 2 <= n <= {MAX_AMBIENT}, got {n}")));
            }
            let nv = n + 1;
            (poly(nv, (0..nv).map(|i| (mono(nv, &[i, i, i]), 1)).collect()), Vec::new())
        }
        FamilySpec::ConeOver { inner, extra } => {
            if *extra == 0 {
                return Err(Error::InvalidParameters("cone_over needs at least one extra variable".into()));
            }
            let base = generate(inner)?;
            let n = base.num_vars() + extra;
            check_ambient(n)?;
            (base.poly.extend_vars(n), Vec::new())
        }
        FamilySpec::Lemma22N3 { variant, l } => {
            let n = 4;
            let lin = |other: &[usize]| -> Terms {
                l.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(v, &c)| {
                        let mut vars = other.to_vec();
                        vars.push(v);
                        (mono(n, &vars), c)
                    })
                    .collect()
            };
            let mut terms: Terms = vec![(mono(n, &[0, 0, 3]), 1)];
            match variant {
                Lemma22Variant::A => {
                    terms.push((mono(n, &[0, 1, 2]), 1));
                    terms.extend(lin(&[1, 1]));
                }
                Lemma22Variant::B => {
                    terms.push((mono(n, &[1, 1, 2]), 1));
                    terms.extend(lin(&[0, 1]));
                }
            }
            let q = RationalField;
            let f = terms.into_iter().fold(MultiPoly::zero(n), |acc, (e, c)| {
                acc.add(&q, &MultiPoly::from_terms(&q, n, [(e, BigRational::from_integer(c.into()))]).unwrap())
            });
            if f.is_zero() {
                return Err(Error::InvalidParameters("the linear form cancels the cubic".into()));
            }
            (f, Vec::new())
        }
    };
    check_ambient(poly.num_vars())?;
    Ok(Family { spec: spec.clone(), poly, components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, DEFAULT_PRIME};
    use crate::linalg::rank;
    use crate::poly::{format_polynomial, parse_polynomial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn same(spec: FamilySpec, golden: &str) {
        let g = generate(&spec).unwrap().poly;
        assert_eq!(g, parse_polynomial(golden).unwrap(), "{spec}");
        assert_eq!(parse_polynomial(&format_polynomial(&g)).unwrap(), g);
    }

    #[test]
    fn golden_polynomials() {
        same(FamilySpec::PerazzoP4, "x0*x1*x2 + x0^2*x4 + x1^2*x3");
        // -x0*y1*y2 + y1*x2^2 + y2*x1^2 with y1 = x3, y2 = x4
        same(FamilySpec::JoinQuadrics { p: 1, q: 1 }, "-x0*x3*x4 + x3*x2^2 + x4*x1^2");
        same(FamilySpec::Fermat { n: 3 }, "x0^3 + x1^3 + x2^3 + x3^3");
        same(
            FamilySpec::Lemma22N3 { variant: Lemma22Variant::A, l: DEFAULT_L },
            "x0*x1*x2 + x0^2*x3 + x1^2*x0 + 2*x1^3 + 3*x1^2*x2",
        );
        same(
            FamilySpec::Lemma22N3 { variant: Lemma22Variant::B, l: DEFAULT_L },
            "x0^2*x1 + 2*x0*x1^2 + 3*x0*x1*x2 + x0^2*x3 + x1^2*x2",
        );
    }

    #[test]
    fn ranges() {
        for spec in [
            FamilySpec::JoinQuadrics { p: 0, q: 1 },
            FamilySpec::JoinQuadrics { p: 4, q: 3 },
            FamilySpec::Fermat { n: 9 },
            FamilySpec::ConeOver { inner: Box::new(FamilySpec::Det3General), extra: 1 },
        ] {
            assert!(matches!(generate(&spec), Err(Error::InvalidParameters(_))), "{spec}");
        }
        assert!(generate(&FamilySpec::JoinQuadrics { p: 3, q: 3 }).is_ok());
    }

    #[test]
    fn samplers_are_validated() {
        let field = PrimeField::new(DEFAULT_PRIME).unwrap();
        for spec in [
            FamilySpec::PerazzoP4,
            FamilySpec::JoinQuadrics { p: 2, q: 3 },
            FamilySpec::Det3Symmetric,
            FamilySpec::Det3General,
        ] {
            let (_, s) = generate(&spec).unwrap().at_prime(field).unwrap();
            assert!(s.is_some());
        }
    }

    #[test]
    fn join_quadrics_meet_in_one_point() {
        // Q1 lies in (x2 = y2 = 0) and Q2 in (x1 = y1 = 0); the spans meet in (1:0:0:0:0)
        let field = PrimeField::new(DEFAULT_PRIME).unwrap();
        let (x, s) = generate(&FamilySpec::JoinQuadrics { p: 1, q: 1 }).unwrap().at_prime(field).unwrap();
        let s = s.unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let span = |c: usize, rng: &mut ChaCha8Rng| {
            let pts: Vec<Vec<u64>> = (0..10).map(|_| s.sample(c, rng)).collect();
            crate::hypersurface::LinearSubspace::span(&field, 5, &pts).unwrap()
        };
        let (a, b) = (span(0, &mut rng), span(1, &mut rng));
        let meet = a.intersect(&field, &b).unwrap();
        assert_eq!(meet.basis(), &[vec![1, 0, 0, 0, 0]]);
        assert!(x.is_singular_at(&meet.basis()[0]));
    }

    #[test]
    fn det3_symmetric_rank_conditions() {
        let field = PrimeField::new(DEFAULT_PRIME).unwrap();
        let (x, s) = generate(&FamilySpec::Det3Symmetric).unwrap().at_prime(field).unwrap();
        let s = s.unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let (a, b) = (s.sample(0, &mut rng), s.sample(0, &mut rng));
            let (u, v) = (field.random(&mut rng), field.random(&mut rng));
            let chord: Vec<u64> = a.iter().zip(&b).map(|(p, q)| field.add(&field.mul(&u, p), &field.mul(&v, q))).collect();
            assert_eq!(x.eval(&chord), 0);
            assert!(x.is_singular_at(&a));
            assert!(rank(&field, &x.hessian(&a)) <= 3);
        }
    }
}
