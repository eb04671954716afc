//! The locus Z swept out by the singular points of general Gauss fibers.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::interp::{interpolate_vanishing_forms, reduce_modulo_span, tangent_from_forms, FormSpace};
use crate::error::{Error, Result};
use crate::hypersurface::{CubicHypersurface, FiberShape, FieldPoint, GaussFiberSample, LinearSubspace};
use crate::linalg::{kernel_basis, rank_of_rows};
use crate::poly::MultiPoly;

/// Share of fibers whose branch pairing must be decided before two
/// components are reported.
const DECIDED_FRACTION: f64 = 2.0 / 3.0;

#[derive(Clone, Debug)]
pub struct ZConfig {
    pub fibers: usize,
    /// Random lines per fiber used to sample its singular part when delta >= 2.
    pub lines: usize,
    pub seed: u64,
    pub form_cap: u32,
}

impl Default for ZConfig {
    fn default() -> Self {
        Self { fibers: 50, lines: 4, seed: 0, form_cap: 3 }
    }
}

/// One component estimate of Z.
#[derive(Clone, Debug)]
pub struct ZCluster {
    pub points: Vec<FieldPoint>,
    pub span: LinearSubspace,
    pub dim: Option<usize>,
    pub forms: Vec<FormSpace>,
    /// Degree-two forms of the cluster modulo those vanishing on its span.
    pub reduced_quadrics: Vec<MultiPoly<u64>>,
}

impl ZCluster {
    fn build(x: &CubicHypersurface, points: Vec<FieldPoint>, cap: u32) -> Result<Self> {
        let f = x.field();
        let n = x.num_vars();
        let comps: Vec<Vec<u64>> = points.iter().flat_map(FieldPoint::rational_components).collect();
        let span = LinearSubspace::span(f, n, &comps)?;
        let forms = interpolate_vanishing_forms(f, n, &points, cap);
        let reduced_quadrics =
            forms.iter().find(|s| s.degree == 2).map_or_else(Vec::new, |s| reduce_modulo_span(f, &span, &s.forms));
        let dim = dimension_from_forms(x, &points, &forms);
        Ok(Self { points, span, dim, forms, reduced_quadrics })
    }

    /// Base-field points of the cluster.
    pub fn base_points(&self) -> Vec<Vec<u64>> {
        self.points.iter().filter_map(|p| p.as_base().map(|q| q.coords().to_vec())).collect()
    }

    /// Forms of every saturated degree.
    pub fn defining_forms(&self) -> Vec<MultiPoly<u64>> {
        saturated_forms(&self.forms)
    }

    /// Affine tangent space at a base point, from the saturated forms.
    pub fn tangent(&self, x: &CubicHypersurface, z: &[u64]) -> Vec<Vec<u64>> {
        tangent_from_forms(x.field(), x.num_vars(), &self.defining_forms(), z)
    }
}

fn saturated_forms(spaces: &[FormSpace]) -> Vec<MultiPoly<u64>> {
    spaces.iter().filter(|s| s.saturated).flat_map(|s| s.forms.iter().cloned()).collect()
}

/// Most frequent tangent dimension over the base points, or `None` if no
/// degree is saturated.
fn dimension_from_forms(x: &CubicHypersurface, points: &[FieldPoint], spaces: &[FormSpace]) -> Option<usize> {
    if !spaces.iter().any(|s| s.saturated) {
        return None;
    }
    let forms = saturated_forms(spaces);
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for p in points.iter().filter_map(FieldPoint::as_base) {
        let t = tangent_from_forms(x.field(), x.num_vars(), &forms, p.coords()).len();
        *freq.entry(t.saturating_sub(1)).or_default() += 1;
    }
    freq.iter().max_by_key(|(&d, &c)| (c, std::cmp::Reverse(d))).map(|(&d, _)| d)
}

#[derive(Clone, Debug)]
pub struct LocusEstimate {
    pub delta: usize,
    pub fibers: Vec<GaussFiberSample>,
    pub failures: Vec<(usize, String)>,
    pub samples: Vec<FieldPoint>,
    pub span: LinearSubspace,
    pub est_dim: Option<usize>,
    pub forms: Vec<FormSpace>,
    /// Forms of each degree modulo those vanishing on the span.
    pub reduced_forms: Vec<Vec<MultiPoly<u64>>>,
    pub kappa: usize,
    pub kappa_method: String,
    pub clusters: Vec<ZCluster>,
    pub warnings: Vec<String>,
}

impl LocusEstimate {
    pub fn shapes(&self) -> Vec<FiberShape> {
        self.fibers.iter().map(GaussFiberSample::shape).collect()
    }

    pub fn span_dim(&self) -> usize {
        self.span.dim()
    }

    /// True when every sampled fiber meets Sing(X) in a single linear space.
    pub fn all_fibers_linear(&self) -> bool {
        self.fibers.iter().all(|s| s.lambda_rank == 1)
    }
}

/// Samples Z over `config.fibers` Gauss fibers through random smooth points.
/// Fiber `i` uses its own ChaCha stream `i` under `config.seed`, so the
/// result does not depend on scheduling.
pub fn sample_z_locus(x: &CubicHypersurface, delta: usize, config: &ZConfig) -> Result<LocusEstimate> {
    if delta == 0 {
        return Err(Error::Precondition("Z is defined only for positive dual defect".into()));
    }
    let results: Vec<Result<GaussFiberSample>> = (0..config.fibers)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let p = x.sample_point(true, &mut rng)?;
            x.gauss_fiber(&p, delta, config.lines, &mut rng)
        })
        .collect();
    let mut fibers = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => fibers.push(s),
            Err(e) => failures.push((i, e.to_string())),
        }
    }
    if fibers.len() < 3 {
        return Err(Error::RetryExhausted(format!(
            "only {} of {} Gauss fibers succeeded; first failure: {}",
            fibers.len(),
            config.fibers,
            failures.first().map_or("none", |(_, m)| m.as_str())
        )));
    }

    let f = x.field();
    let n = x.num_vars();
    let samples: Vec<FieldPoint> = fibers.iter().flat_map(|s| s.sing_points.iter().cloned()).collect();
    let comps: Vec<Vec<u64>> = samples.iter().flat_map(FieldPoint::rational_components).collect();
    let span = LinearSubspace::span(f, n, &comps)?;
    let forms = interpolate_vanishing_forms(f, n, &samples, config.form_cap);
    let reduced_forms = forms.iter().map(|s| reduce_modulo_span(f, &span, &s.forms)).collect();
    let est_dim = dimension_from_forms(x, &samples, &forms);
    let mut warnings = Vec::new();
    if est_dim.is_none() {
        warnings.push("no interpolation degree is saturated; dim Z is not estimated".to_string());
    }

    let (groups, kappa_method, mut kw) = cluster_branches(x, &fibers);
    warnings.append(&mut kw);
    let clusters: Vec<ZCluster> = match groups {
        Some((a, b)) => vec![ZCluster::build(x, a, config.form_cap)?, ZCluster::build(x, b, config.form_cap)?],
        None => vec![ZCluster::build(x, samples.clone(), config.form_cap)?],
    };
    Ok(LocusEstimate {
        delta,
        fibers,
        failures,
        samples,
        span,
        est_dim,
        forms,
        reduced_forms,
        kappa: clusters.len(),
        kappa_method,
        clusters,
        warnings,
    })
}

/// The two branches of a fiber whose singular part is a pair of
/// hyperplanes of the fiber, split into points of each. `None` unless
/// every singular point is rational and there are exactly two branches.
fn split_branches(x: &CubicHypersurface, s: &GaussFiberSample) -> Option<(Vec<Vec<u64>>, Vec<Vec<u64>>)> {
    let f = x.field();
    let pts: Vec<Vec<u64>> = s.sing_points.iter().map(|p| p.as_base().map(|q| q.coords().to_vec())).collect::<Option<_>>()?;
    let (first, rest) = pts.split_first()?;
    let c0 = s.fiber.coordinates(f, first)?;
    let same_branch = |q: &[u64]| -> Option<bool> {
        let c = s.fiber.coordinates(f, q)?;
        let subs: Vec<Vec<u64>> = c0.iter().zip(&c).map(|(&a, &b)| vec![a, b]).collect();
        Some(s.lambda.compose_linear(f, &subs).is_zero())
    };
    let mut a = vec![first.clone()];
    let mut b: Vec<Vec<u64>> = Vec::new();
    for q in rest {
        if same_branch(q)? {
            a.push(q.clone());
        } else {
            b.push(q.clone());
        }
    }
    let b0 = b.first()?.clone();
    let cb = s.fiber.coordinates(f, &b0)?;
    for q in &b[1..] {
        let c = s.fiber.coordinates(f, q)?;
        let subs: Vec<Vec<u64>> = cb.iter().zip(&c).map(|(&u, &v)| vec![u, v]).collect();
        if !s.lambda.compose_linear(f, &subs).is_zero() {
            return None;
        }
    }
    Some((a, b))
}

/// Decides whether the two branches of the fibers lie on one component of
/// Z or on two. Branch points are compared through the tangent spaces of
/// Sing(X) (kernels of the Hessian): for a reference pair `(a, b)` and
/// another pair `(c, d)`, the pairing with the smaller total span rank is
/// taken when it is strictly smaller.
#[allow(clippy::type_complexity)]
fn cluster_branches(
    x: &CubicHypersurface,
    fibers: &[GaussFiberSample],
) -> (Option<(Vec<FieldPoint>, Vec<FieldPoint>)>, String, Vec<String>) {
    let mut warnings = Vec::new();
    let max_rank = fibers.iter().map(|s| s.lambda_rank).max().unwrap_or(0);
    if max_rank <= 1 {
        return (None, "each fiber meets Sing(X) in one linear space".into(), warnings);
    }
    if max_rank >= 3 || fibers.iter().any(|s| s.lambda_rank != 2) {
        return (None, "fiber singular parts are irreducible quadrics".into(), warnings);
    }
    let split: Vec<Option<(Vec<Vec<u64>>, Vec<Vec<u64>>)>> = fibers.iter().map(|s| split_branches(x, s)).collect();
    if split.iter().any(Option::is_none) {
        warnings.push("some fiber has conjugate singular branches; they are counted as one component".into());
        return (None, "conjugate branches".into(), warnings);
    }
    let split: Vec<(Vec<Vec<u64>>, Vec<Vec<u64>>)> = split.into_iter().map(Option::unwrap).collect();

    let f = x.field();
    let n = x.num_vars();
    let tangent = |z: &[u64]| kernel_basis(f, &x.hessian(z));
    let span_rank = |u: &[Vec<u64>], v: &[Vec<u64>]| {
        let mut rows = u.to_vec();
        rows.extend(v.iter().cloned());
        rank_of_rows(f, &rows, n)
    };
    let ta = tangent(&split[0].0[0]);
    let tb = tangent(&split[0].1[0]);
    let mut side_a: Vec<Vec<u64>> = split[0].0.clone();
    let mut side_b: Vec<Vec<u64>> = split[0].1.clone();
    let mut decided = 0;
    let mut undecided = Vec::new();
    for (c, d) in &split[1..] {
        let tc = tangent(&c[0]);
        let td = tangent(&d[0]);
        let same = span_rank(&tc, &ta) + span_rank(&td, &tb);
        let swap = span_rank(&tc, &tb) + span_rank(&td, &ta);
        if same < swap {
            side_a.extend(c.iter().cloned());
            side_b.extend(d.iter().cloned());
            decided += 1;
        } else if swap < same {
            side_a.extend(d.iter().cloned());
            side_b.extend(c.iter().cloned());
            decided += 1;
        } else {
            undecided.push((c, d));
        }
    }
    let others = split.len() - 1;
    if others == 0 || (decided as f64) < DECIDED_FRACTION * others as f64 {
        if decided > 0 {
            warnings.push(format!("branch pairing decided for only {decided} of {others} fibers; reporting one component"));
        }
        return (None, "branch tangents do not separate".into(), warnings);
    }
    if !undecided.is_empty() {
        warnings.push(format!("{} fibers with undecided branch pairing were left out of the clusters", undecided.len()));
    }
    let wrap = |v: Vec<Vec<u64>>| -> Vec<FieldPoint> {
        v.into_iter()
            .map(|c| FieldPoint::Base(crate::hypersurface::ProjectivePoint::new(f, c).unwrap()))
            .collect()
    };
    (
        Some((wrap(side_a), wrap(side_b))),
        format!("branch tangents separate {decided} of {others} fibers"),
        warnings,
    )
}
