use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, RationalField};
use crate::hypersurface::fiber::{binary_roots, BinaryRoot};
use crate::hypersurface::CubicHypersurface;
use crate::linalg::{dot, rank, Matrix};
use crate::poly::parse::{parse_polynomial, reduce_mod_p};
use crate::poly::MultiPoly;

/// A polynomial map `P^(m-1) -> P^N` whose image is a component of Sing(X).
#[derive(Clone, Debug, PartialEq)]
pub struct Parameterization {
    pub name: String,
    pub coords: Vec<MultiPoly<BigRational>>,
}

impl Parameterization {
    /// All coordinates must have the same number of parameters and the same degree.
    pub fn new(name: impl Into<String>, coords: Vec<MultiPoly<BigRational>>) -> Result<Self> {
        let name = name.into();
        let m = coords.iter().map(MultiPoly::num_vars).max().unwrap_or(0);
        let coords: Vec<_> = coords.into_iter().map(|c| c.extend_vars(m)).collect();
        let mut degree = None;
        for c in &coords {
            if let Some(d) = c.degree() {
                if degree.is_some_and(|e| e != d) {
                    return Err(Error::InvalidParameters(format!("component `{name}` mixes coordinate degrees")));
                }
                degree = Some(d);
            }
        }
        if degree.is_none() {
            return Err(Error::InvalidParameters(format!("component `{name}` is identically zero")));
        }
        Ok(Self { name, coords })
    }

    pub fn num_params(&self) -> usize {
        self.coords[0].num_vars()
    }
}

/// Reads a parameterization file: one component per line, coordinates
/// separated by `;`, parameters written `x0, x1, ...`. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_sidecar(text: &str, num_vars: usize) -> Result<Vec<Parameterization>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut coords = Vec::new();
        let mut col = start;
        for field in line.trim_end_matches(['\n', '\r']).split(';') {
            let c = parse_polynomial(field).map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse { position: col + position, message },
                Error::Inhomogeneous { term, position, found, expected } => {
                    Error::Inhomogeneous { term, position: col + position, found, expected }
                }
                other => other,
            })?;
            coords.push(c);
            col += field.len() + 1;
        }
        if coords.len() != num_vars {
            return Err(Error::Parse {
                position: start,
                message: format!("component has {} coordinates, expected {num_vars}", coords.len()),
            });
        }
        out.push(Parameterization::new(format!("component {}", out.len()), coords)?);
    }
    if out.is_empty() {
        return Err(Error::Parse { position: 0, message: "no components in sidecar".into() });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct ReducedComponent {
    name: String,
    coords: Vec<MultiPoly<u64>>,
    // jacobian[i][k] = d coords[i] / d a_k
    jacobian: Vec<Vec<MultiPoly<u64>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerMode {
    Parameterized,
    Enumerated,
    Hybrid,
}

/// Points on Sing(X): from parameterized components over the working
/// field and/or an exhaustive list over a tiny prime.
#[derive(Clone, Debug)]
pub struct SingularSampler {
    field: PrimeField,
    num_vars: usize,
    components: Vec<ReducedComponent>,
    enumerated: Option<(u64, Vec<Vec<u64>>)>,
}

impl SingularSampler {
    /// Reduces the maps to the field of `x` and checks `grad F o map = 0`
    /// symbolically for each.
    pub fn parameterized(x: &CubicHypersurface, maps: &[Parameterization]) -> Result<Self> {
        let f = *x.field();
        let mut components = Vec::new();
        for p in maps {
            if p.coords.len() != x.num_vars() {
                return Err(Error::InvalidParameters(format!(
                    "`{}` has {} coordinates, expected {}",
                    p.name,
                    p.coords.len(),
                    x.num_vars()
                )));
            }
            let coords: Vec<MultiPoly<u64>> =
                p.coords.iter().map(|c| reduce_mod_p(&f, c)).collect::<Result<_>>()?;
            for (i, partial) in x.partials().iter().enumerate() {
                if !partial.compose(&f, &coords).is_zero() {
                    return Err(Error::InvalidParameters(format!(
                        "`{}` does not lie in Sing(X): dF/dx{i} does not vanish on it",
                        p.name
                    )));
                }
            }
            let m = p.num_params();
            let jacobian = coords.iter().map(|c| (0..m).map(|k| c.partial(&f, k)).collect()).collect();
            components.push(ReducedComponent { name: p.name.clone(), coords, jacobian });
        }
        Ok(Self { field: f, num_vars: x.num_vars(), components, enumerated: None })
    }

    pub fn enumerated(x: &CubicHypersurface, q: u64, points: Vec<Vec<u64>>) -> Self {
        Self { field: *x.field(), num_vars: x.num_vars(), components: Vec::new(), enumerated: Some((q, points)) }
    }

    pub fn with_enumeration(mut self, q: u64, points: Vec<Vec<u64>>) -> Self {
        self.enumerated = Some((q, points));
        self
    }

    pub fn mode(&self) -> Option<SamplerMode> {
        match (self.components.is_empty(), self.enumerated.is_some()) {
            (false, false) => Some(SamplerMode::Parameterized),
            (true, true) => Some(SamplerMode::Enumerated),
            (false, true) => Some(SamplerMode::Hybrid),
            (true, false) => None,
        }
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn component_name(&self, c: usize) -> &str {
        &self.components[c].name
    }

    pub fn num_params(&self, c: usize) -> usize {
        self.components[c].jacobian[0].len()
    }

    pub fn enumerated_points(&self) -> Option<(u64, &[Vec<u64>])> {
        self.enumerated.as_ref().map(|(q, p)| (*q, p.as_slice()))
    }

    pub fn eval(&self, c: usize, params: &[u64]) -> Vec<u64> {
        self.components[c].coords.iter().map(|p| p.eval(&self.field, params)).collect()
    }

    /// Columns of the Jacobian at `params`: a spanning set for the affine
    /// tangent space of the component at the image point.
    pub fn tangent(&self, c: usize, params: &[u64]) -> Vec<Vec<u64>> {
        let comp = &self.components[c];
        let m = self.num_params(c);
        (0..m)
            .map(|k| comp.jacobian.iter().map(|row| row[k].eval(&self.field, params)).collect())
            .collect()
    }

    /// Random parameters with a nonzero image.
    pub fn random_params<R: Rng + ?Sized>(&self, c: usize, rng: &mut R) -> Vec<u64> {
        loop {
            let a: Vec<u64> = (0..self.num_params(c)).map(|_| self.field.random(rng)).collect();
            if self.eval(c, &a).iter().any(|&v| v != 0) {
                return a;
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, c: usize, rng: &mut R) -> Vec<u64> {
        let a = self.random_params(c, rng);
        self.eval(c, &a)
    }

    /// Dimension of each component: Jacobian rank at random parameters, minus one.
    pub fn component_dims<R: Rng + ?Sized>(&self, trials: usize, rng: &mut R) -> Vec<usize> {
        (0..self.components.len())
            .map(|c| {
                (0..trials.max(1))
                    .map(|_| {
                        let a = self.random_params(c, rng);
                        let t = self.tangent(c, &a);
                        rank(&self.field, &Matrix::from_rows(t, self.num_vars)).saturating_sub(1)
                    })
                    .max()
                    .unwrap()
            })
            .collect()
    }

    /// A point of component `c` in the hyperplane `normal . y = 0`, found on
    /// random lines of the parameter space; `None` after `attempts` misses.
    pub fn sample_in_hyperplane<R: Rng + ?Sized>(
        &self,
        c: usize,
        normal: &[u64],
        attempts: usize,
        rng: &mut R,
    ) -> Option<Vec<u64>> {
        let f = &self.field;
        let comp = &self.components[c];
        let m = self.num_params(c);
        let h = comp
            .coords
            .iter()
            .zip(normal)
            .fold(MultiPoly::zero(m), |acc, (p, &w)| acc.add(f, &p.scale(f, &w)));
        for _ in 0..attempts {
            let a: Vec<u64> = (0..m).map(|_| f.random(rng)).collect();
            let b: Vec<u64> = (0..m).map(|_| f.random(rng)).collect();
            if h.is_zero() {
                let y = self.eval(c, &a);
                if y.iter().any(|&v| v != 0) {
                    return Some(y);
                }
                continue;
            }
            let subs: Vec<Vec<u64>> = (0..m).map(|j| vec![a[j], b[j]]).collect();
            let line = h.compose_linear(f, &subs);
            if line.is_zero() || line.degree().unwrap_or(0) > 6 {
                continue;
            }
            let Ok(roots) = binary_roots(f, &line, rng) else { continue };
            for r in roots {
                if let BinaryRoot::Base([s, t]) = r {
                    let params: Vec<u64> = a.iter().zip(&b).map(|(ai, bi)| f.add(&f.mul(&s, ai), &f.mul(&t, bi))).collect();
                    let y = self.eval(c, &params);
                    if y.iter().any(|&v| v != 0) {
                        debug_assert_eq!(dot(f, &y, normal), 0);
                        return Some(y);
                    }
                }
            }
        }
        None
    }
}

/// Dimension of Sing(X) and how it was obtained.
#[derive(Clone, Debug, Serialize)]
pub struct SingDimEstimate {
    pub per_component: Vec<usize>,
    pub max: Option<usize>,
    pub method: String,
}

/// Parameterized components give their Jacobian ranks; an enumerated-only
/// sampler has no dimension of its own and yields `None`.
pub fn singular_dimension<R: Rng + ?Sized>(sampler: &SingularSampler, rng: &mut R) -> Option<SingDimEstimate> {
    if sampler.components.is_empty() {
        return None;
    }
    let per_component = sampler.component_dims(3, rng);
    let max = per_component.iter().copied().max();
    Some(SingDimEstimate { per_component, max, method: "parameterized".into() })
}

/// A parameterization with integer coefficients from `(exponents, coeff)` lists.
pub fn integer_map(name: &str, num_params: usize, coords: Vec<Vec<(Vec<u32>, i64)>>) -> Parameterization {
    let q = RationalField;
    let coords = coords
        .into_iter()
        .map(|terms| {
            MultiPoly::from_terms(&q, num_params, terms.into_iter().map(|(e, c)| (e, BigRational::from_integer(c.into()))))
                .unwrap()
        })
        .collect();
    Parameterization::new(name, coords).unwrap()
}
