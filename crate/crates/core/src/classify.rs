//! The trichotomy for cubic hypersurfaces with positive dual defect.
//!
//! Steps run in a fixed order: cone test, dual defect, Z sampling, then the
//! secant (I), join (II) and linear-span (III) predicates. The first
//! predicate that holds decides the label; anything left over is
//! `Unresolved` with the failed assertion recorded.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{PrimeField, SECONDARY_PRIME};
use crate::hypersurface::{CubicHypersurface, DefectEvidence};
use crate::linalg::rank;
use crate::loci::enumerate::{enumerated_dimension, EnumeratedDimension};
use crate::loci::interp::forms_vanish_at;
use crate::loci::sampler::{singular_dimension, Parameterization, SamplerMode, SingularSampler};
use crate::loci::secant::{is_secant_linear_check, secant_or_join_dimension, SecantLinearity, TangentSource};
use crate::loci::zlocus::{sample_z_locus, LocusEstimate, ZCluster, ZConfig};
use crate::poly::multi::hessian;
use crate::poly::parse::format_mod_p;
use crate::poly::IdentityTest;

pub const SCHEMA_VERSION: &str = "cubic-dual-report/1";

#[derive(Clone, Debug)]
pub struct ClassifyConfig {
    pub seed: u64,
    pub fibers: usize,
    /// Trials for every randomized identity or membership test.
    pub trials: usize,
    /// Smooth points used to estimate the dual defect.
    pub defect_samples: usize,
    /// Random lines per fiber when the fiber has dimension at least two.
    pub lines: usize,
    pub form_cap: u32,
    /// Random pairs in each Terracini rank computation.
    pub terracini_trials: usize,
    /// Run the tiny-prime enumeration when the input has rational coefficients.
    pub enumerate: bool,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            fibers: 50,
            trials: 8,
            defect_samples: 10,
            lines: 4,
            form_cap: 3,
            terracini_trials: 6,
            enumerate: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    Cone,
    DefectZero,
    I,
    II,
    III,
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeEvidence {
    pub vertex: Vec<u64>,
    pub vertex_dim: usize,
    pub verified_points: usize,
    /// Every sampled Hessian has corank at least `vertex_dim + 1`.
    pub hessian_corank_consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingEvidence {
    pub sampler_mode: Option<SamplerMode>,
    pub components: Vec<String>,
    pub per_component: Vec<usize>,
    pub max: Option<usize>,
    pub method: String,
    pub enumerated: Option<EnumeratedDimension>,
    /// True when both a parameterization and an enumeration exist and agree.
    pub modes_agree: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormSummary {
    pub degree: u32,
    pub count: usize,
    pub conditions: usize,
    pub saturated: bool,
    /// Forms modulo those vanishing on the span, rendered over the working field.
    pub modulo_span: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterEvidence {
    pub points: usize,
    pub span_dim: usize,
    pub dim: Option<usize>,
    pub reduced_quadrics: Vec<String>,
    /// Rank of the single reduced quadric, when there is exactly one.
    pub quadric_rank: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZEvidence {
    pub fibers_used: usize,
    pub fiber_failures: usize,
    pub samples: usize,
    pub rational_samples: usize,
    pub span_dim: usize,
    pub est_dim: Option<usize>,
    pub kappa: usize,
    pub kappa_method: String,
    pub kappa_heuristic: bool,
    /// Counts of fibers by the rank of the quadric cutting out their singular part.
    pub lambda_ranks: Vec<(usize, usize)>,
    pub linear_fibers: usize,
    pub split_fibers: usize,
    pub minors_checked: usize,
    pub forms: Vec<FormSummary>,
    pub clusters: Vec<ClusterEvidence>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TerraciniEvidence {
    pub kind: String,
    pub sources: Vec<String>,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct JoinStructure {
    pub span_dims: Vec<usize>,
    pub cluster_dims: Vec<Option<usize>>,
    pub spans_are_hyperplane_hulls: bool,
    pub quadrics_nonsingular: Option<bool>,
    pub meet_point: Option<Vec<u64>>,
    pub meet_on_both: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearSpanEvidence {
    pub span_dim: usize,
    pub span_in_x: bool,
    pub all_fibers_linear: bool,
    pub z_codim_in_span: Option<usize>,
    /// Outcome of the random singularity check on the span, when it applies.
    pub span_singular: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Exclusivity {
    pub excludes: Label,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Evidence {
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    pub fibers_requested: usize,
    pub cone: Option<ConeEvidence>,
    pub hessian: IdentityTest,
    pub defect: Option<DefectEvidence>,
    pub sing: Option<SingEvidence>,
    pub z: Option<ZEvidence>,
    pub terracini: Vec<TerraciniEvidence>,
    pub secant_linearity: Vec<SecantLinearity>,
    pub join_structure: Option<JoinStructure>,
    pub linear_span: Option<LinearSpanEvidence>,
    pub exclusivity: Vec<Exclusivity>,
    pub normal_form_consistent: Option<bool>,
    pub unresolved_reason: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub schema: &'static str,
    pub label: Label,
    pub delta: Option<usize>,
    pub sing_dim: Option<usize>,
    pub hessian_vanishes: bool,
    pub kappa: Option<usize>,
    pub z_span_dim: Option<usize>,
    pub evidence: Evidence,
    pub warnings: Vec<String>,
}

/// Whether `(N, delta) = (4, 1)`, the only case a non-cone cubic with
/// `dim Sing(X) = N - 2` and positive defect can have.
pub fn verify_prop21_normal_form(ambient_dim: usize, delta: usize, sing_dim: usize) -> Result<bool> {
    if delta == 0 {
        return Err(Error::Precondition("the normal-form check needs positive dual defect".into()));
    }
    if sing_dim + 2 != ambient_dim {
        return Err(Error::Precondition(format!(
            "the normal-form check needs dim Sing(X) = N - 2, got {sing_dim} with N = {ambient_dim}"
        )));
    }
    Ok(ambient_dim == 4 && delta == 1)
}

fn quadric_rank(f: &PrimeField, q: &crate::poly::MultiPoly<u64>) -> usize {
    rank(f, &hessian(f, q, &vec![0; q.num_vars()]))
}

fn cluster_evidence(f: &PrimeField, c: &ZCluster) -> ClusterEvidence {
    ClusterEvidence {
        points: c.points.len(),
        span_dim: c.span.dim(),
        dim: c.dim,
        reduced_quadrics: c.reduced_quadrics.iter().map(|q| format_mod_p(f, q)).collect(),
        quadric_rank: (c.reduced_quadrics.len() == 1).then(|| quadric_rank(f, &c.reduced_quadrics[0])),
    }
}

fn z_evidence(f: &PrimeField, z: &LocusEstimate, requested: usize) -> ZEvidence {
    let mut lambda_ranks: Vec<(usize, usize)> = Vec::new();
    for s in &z.fibers {
        match lambda_ranks.iter_mut().find(|(r, _)| *r == s.lambda_rank) {
            Some(e) => e.1 += 1,
            None => lambda_ranks.push((s.lambda_rank, 1)),
        }
    }
    lambda_ranks.sort_unstable();
    let shapes = z.shapes();
    ZEvidence {
        fibers_used: z.fibers.len(),
        fiber_failures: requested - z.fibers.len(),
        samples: z.samples.len(),
        rational_samples: z.samples.iter().filter(|p| p.degree() == 1).count(),
        span_dim: z.span_dim(),
        est_dim: z.est_dim,
        kappa: z.kappa,
        kappa_method: z.kappa_method.clone(),
        kappa_heuristic: true,
        lambda_ranks,
        linear_fibers: shapes.iter().filter(|s| s.linear).count(),
        split_fibers: shapes.iter().filter(|s| s.split).count(),
        minors_checked: z.fibers.iter().map(|s| s.minors_checked).sum(),
        forms: z
            .forms
            .iter()
            .zip(&z.reduced_forms)
            .map(|(s, r)| FormSummary {
                degree: s.degree,
                count: s.forms.len(),
                conditions: s.conditions,
                saturated: s.saturated,
                modulo_span: r.iter().map(|g| format_mod_p(f, g)).collect(),
            })
            .collect(),
        clusters: z.clusters.iter().map(|c| cluster_evidence(f, c)).collect(),
    }
}

struct Run<'a> {
    x: &'a CubicHypersurface,
    sampler: Option<&'a SingularSampler>,
    config: &'a ClassifyConfig,
    rng: ChaCha8Rng,
    warnings: Vec<String>,
    evidence: Evidence,
    delta: Option<usize>,
    sing_dim: Option<usize>,
    kappa: Option<usize>,
    z_span_dim: Option<usize>,
}

impl Run<'_> {
    fn finish(self, label: Label) -> ClassificationReport {
        ClassificationReport {
            schema: SCHEMA_VERSION,
            label,
            delta: self.delta,
            sing_dim: self.sing_dim,
            hessian_vanishes: self.evidence.hessian.vanished,
            kappa: self.kappa,
            z_span_dim: self.z_span_dim,
            evidence: self.evidence,
            warnings: self.warnings,
        }
    }

    fn unresolved(mut self, reason: impl Into<String>) -> ClassificationReport {
        self.evidence.unresolved_reason = Some(reason.into());
        self.finish(Label::Unresolved)
    }

    fn singular_locus(&mut self) -> SingEvidence {
        let x = self.x;
        let param = self.sampler.and_then(|s| singular_dimension(s, &mut self.rng));
        let enumerated = match (self.config.enumerate, x.source()) {
            (true, Some(src)) => match enumerated_dimension(src) {
                Ok(e) => Some(e),
                Err(e) => {
                    self.warnings.push(format!("tiny-prime enumeration skipped: {e}"));
                    None
                }
            },
            (true, None) => {
                self.warnings.push("input has no rational form; tiny-prime enumeration skipped".into());
                None
            }
            (false, _) => None,
        };
        if let Some(e) = &enumerated {
            if !e.consistent {
                self.warnings.push(format!(
                    "enumerated dimension estimates disagree (count slope {:?}, tangent {:?})",
                    e.estimate, e.tangent_estimate
                ));
            }
        }
        let mode = match (self.sampler.and_then(SingularSampler::mode), &enumerated) {
            (Some(_), Some(_)) => Some(SamplerMode::Hybrid),
            (Some(m), None) => Some(m),
            (None, Some(_)) => Some(SamplerMode::Enumerated),
            (None, None) => None,
        };
        let components = self
            .sampler
            .map(|s| (0..s.num_components()).map(|c| s.component_name(c).to_string()).collect())
            .unwrap_or_default();
        match param {
            Some(p) => {
                let modes_agree = enumerated.as_ref().map(|e| e.consistent && e.estimate == p.max);
                if modes_agree == Some(false) {
                    self.warnings.push("parameterized and enumerated dimensions of Sing(X) differ".into());
                }
                SingEvidence {
                    sampler_mode: mode,
                    components,
                    per_component: p.per_component,
                    max: p.max,
                    method: p.method,
                    enumerated,
                    modes_agree,
                }
            }
            None => {
                let max = enumerated.as_ref().filter(|e| e.consistent).and_then(|e| e.estimate);
                SingEvidence {
                    sampler_mode: mode,
                    components,
                    per_component: max.into_iter().collect(),
                    max,
                    method: if max.is_some() { "enumerated".into() } else { "none".into() },
                    enumerated,
                    modes_agree: None,
                }
            }
        }
    }

    /// Sec dimension of every component and Join dimension of every pair:
    /// the parameterized components when available, else the Z clusters.
    fn terracini(&mut self, z: &LocusEstimate) -> Result<Vec<TerraciniEvidence>> {
        let f = *self.x.field();
        let n = self.x.num_vars();
        let t = self.config.terracini_trials;
        let sources: Vec<(String, TangentSource<'_>)> = match self.sampler {
            Some(s) if s.num_components() > 0 => (0..s.num_components())
                .map(|c| (s.component_name(c).to_string(), TangentSource::Param { sampler: s, component: c }))
                .collect(),
            _ => z
                .clusters
                .iter()
                .enumerate()
                .map(|(i, c)| (format!("Z cluster {i}"), TangentSource::Cluster(c)))
                .collect(),
        };
        let mut out = Vec::new();
        for (i, (name, src)) in sources.iter().enumerate() {
            let d = secant_or_join_dimension(&f, n, *src, *src, t, &mut self.rng)?;
            out.push(TerraciniEvidence { kind: "sec".into(), sources: vec![name.clone()], dimension: d });
            for (other, src2) in &sources[i + 1..] {
                let d = secant_or_join_dimension(&f, n, *src, *src2, t, &mut self.rng)?;
                out.push(TerraciniEvidence { kind: "join".into(), sources: vec![name.clone(), other.clone()], dimension: d });
            }
        }
        Ok(out)
    }

    fn cluster_join_dimension(&mut self, z: &LocusEstimate) -> Result<usize> {
        let f = *self.x.field();
        let (a, b) = (TangentSource::Cluster(&z.clusters[0]), TangentSource::Cluster(&z.clusters[1]));
        secant_or_join_dimension(&f, self.x.num_vars(), a, b, self.config.terracini_trials, &mut self.rng)
    }

    fn join_structure(&self, z: &LocusEstimate) -> JoinStructure {
        let f = self.x.field();
        let (c1, c2) = (&z.clusters[0], &z.clusters[1]);
        let hulls = z.clusters.iter().all(|c| c.dim.is_some_and(|d| c.span.dim() == d + 1));
        let quadrics_nonsingular = if z.clusters.iter().all(|c| c.reduced_quadrics.len() == 1) {
            Some(z.clusters.iter().all(|c| quadric_rank(f, &c.reduced_quadrics[0]) == c.span.dim() + 1))
        } else {
            None
        };
        let meet = c1.span.intersect(f, &c2.span).filter(|m| m.dim() == 0);
        let meet_point = meet.map(|m| m.basis()[0].clone());
        let meet_on_both = meet_point.as_ref().is_some_and(|p| {
            z.clusters.iter().all(|c| forms_vanish_at(f, &c.defining_forms(), p)) && self.x.is_singular_at(p)
        });
        JoinStructure {
            span_dims: vec![c1.span.dim(), c2.span.dim()],
            cluster_dims: vec![c1.dim, c2.dim],
            spans_are_hyperplane_hulls: hulls,
            quadrics_nonsingular,
            meet_point,
            meet_on_both,
        }
    }
}

/// Runs the decision procedure on `x`, using `sampler` for Sing(X) when given.
pub fn classify(x: &CubicHypersurface, sampler: Option<&SingularSampler>, config: &ClassifyConfig) -> ClassificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(u64::MAX);
    let hessian = x.has_vanishing_hessian(config.trials, &mut rng);
    let evidence = Evidence {
        prime: x.field().modulus(),
        seed: config.seed,
        trials: config.trials,
        fibers_requested: config.fibers,
        cone: None,
        hessian,
        defect: None,
        sing: None,
        z: None,
        terracini: Vec::new(),
        secant_linearity: Vec::new(),
        join_structure: None,
        linear_span: None,
        exclusivity: Vec::new(),
        normal_form_consistent: None,
        unresolved_reason: None,
    };
    let mut run = Run {
        x,
        sampler,
        config,
        rng,
        warnings: Vec::new(),
        evidence,
        delta: None,
        sing_dim: None,
        kappa: None,
        z_span_dim: None,
    };
    let n = x.num_vars();
    let ambient = x.ambient_dim();
    let f = *x.field();

    // (1) cone
    if let Some(cert) = x.is_cone(config.trials, &mut run.rng) {
        let consistent = (0..config.trials).all(|_| {
            let v = x.random_vector(&mut run.rng);
            n - rank(&f, &x.hessian(&v)) > cert.vertex_dim
        });
        run.evidence.cone = Some(ConeEvidence {
            vertex: cert.vertex,
            vertex_dim: cert.vertex_dim,
            verified_points: cert.verified_points,
            hessian_corank_consistent: consistent,
        });
        if !consistent {
            return run.unresolved("cone vertex is not in the kernel of every Hessian");
        }
        return run.finish(Label::Cone);
    }

    // (2) dual defect
    let defect = match x.dual_defect(config.defect_samples.max(3), &mut run.rng) {
        Ok(d) => d,
        Err(e) => return run.unresolved(format!("dual defect: {e}")),
    };
    if !defect.chart_agrees() {
        run.warnings.push(format!(
            "affine-chart defect {:?} differs from the Hessian-rank defect {}",
            defect.chart_delta, defect.delta
        ));
    }
    let delta = defect.delta;
    run.delta = Some(delta);
    run.evidence.defect = Some(defect);
    if delta == 0 {
        if run.evidence.hessian.vanished {
            return run.unresolved("Hessian vanishes identically but the sampled defect is zero");
        }
        return run.finish(Label::DefectZero);
    }

    // Sing(X)
    let sing = run.singular_locus();
    run.sing_dim = sing.max;
    run.evidence.sing = Some(sing);
    if let Some(sd) = run.sing_dim {
        if sd + 2 == ambient {
            let ok = verify_prop21_normal_form(ambient, delta, sd).unwrap_or(false);
            run.evidence.normal_form_consistent = Some(ok);
            if !ok {
                return run.unresolved(format!(
                    "dim Sing(X) = N - 2 with (N, delta) = ({ambient}, {delta}) contradicts the normal form"
                ));
            }
        }
    }

    // (3) Z
    let zconfig = ZConfig { fibers: config.fibers, lines: config.lines, seed: config.seed, form_cap: config.form_cap };
    let z = match sample_z_locus(x, delta, &zconfig) {
        Ok(z) => z,
        Err(e) => return run.unresolved(format!("Z sampling: {e}")),
    };
    run.warnings.extend(z.warnings.iter().cloned());
    run.kappa = Some(z.kappa);
    run.z_span_dim = Some(z.span_dim());
    run.evidence.z = Some(z_evidence(&f, &z, config.fibers));
    if run.sing_dim.is_none() {
        // tangent spaces of Sing(X) at the Z samples
        let dims: Vec<usize> = z
            .samples
            .iter()
            .filter_map(|p| p.as_base())
            .map(|p| n - rank(&f, &x.hessian(p.coords())) - 1)
            .collect();
        run.sing_dim = dims.iter().copied().max();
        if let Some(s) = run.evidence.sing.as_mut() {
            s.max = run.sing_dim;
            s.method = "Hessian kernel at Z samples (upper bound)".into();
        }
    }

    let terracini = match run.terracini(&z) {
        Ok(t) => t,
        Err(e) => return run.unresolved(format!("Terracini: {e}")),
    };
    let sec_max = terracini.iter().map(|t| t.dimension).max().unwrap_or(0);
    let sec_full = terracini.iter().find(|t| t.kind == "sec" && t.dimension == ambient - 1).cloned();
    run.evidence.terracini = terracini;
    if let Some(s) = run.sampler {
        for (c, dim_s) in run.evidence.sing.as_ref().map(|s| s.per_component.clone()).unwrap_or_default().into_iter().enumerate() {
            if c >= s.num_components() {
                break;
            }
            let src = TangentSource::Param { sampler: s, component: c };
            if let Ok(Some(l)) = is_secant_linear_check(&f, n, src, dim_s, config.trials, &mut run.rng) {
                if !l.holds {
                    run.warnings.push(format!("Sec({}) has dimension dim S + 1 but is not linear", s.component_name(c)));
                }
                run.evidence.secant_linearity.push(l);
            }
        }
    }

    let join_full = if z.kappa == 2 {
        match run.cluster_join_dimension(&z) {
            Ok(d) => {
                run.evidence.terracini.push(TerraciniEvidence {
                    kind: "join".into(),
                    sources: vec!["Z cluster 0".into(), "Z cluster 1".into()],
                    dimension: d,
                });
                d == ambient - 1
            }
            Err(e) => {
                run.warnings.push(format!("join of the Z clusters: {e}"));
                false
            }
        }
    } else {
        false
    };

    // (I)
    if let Some(sec) = sec_full {
        if let Some(s) = z.fibers.iter().find(|s| s.lambda_rank >= 2) {
            run.evidence.exclusivity.push(Exclusivity {
                excludes: Label::III,
                witness: format!(
                    "the fiber through {:?} meets Sing(X) in a quadric of rank {}",
                    s.base_point.coords(),
                    s.lambda_rank
                ),
            });
        } else {
            return run.unresolved(format!(
                "Sec({}) fills X but every sampled fiber meets Sing(X) linearly",
                sec.sources.join(", ")
            ));
        }
        if join_full {
            run.warnings.push("the Z clusters also join to X; the secant label takes precedence".into());
        }
        return run.finish(Label::I);
    }

    // (II)
    if join_full {
        if delta != 1 {
            return run.unresolved(format!("two Z components join to X but delta = {delta}, not 1"));
        }
        let js = run.join_structure(&z);
        if !js.spans_are_hyperplane_hulls {
            run.warnings.push("a Z cluster does not span a space of its dimension plus one".into());
        }
        match js.quadrics_nonsingular {
            Some(true) => {}
            Some(false) => run.warnings.push("a Z cluster quadric is singular on its span".into()),
            None => run.warnings.push("Z cluster quadrics could not be interpolated uniquely".into()),
        }
        if js.meet_point.is_none() || !js.meet_on_both {
            run.warnings.push("the Z cluster spans do not meet in a single common point".into());
        }
        run.evidence.join_structure = Some(js);
        return run.finish(Label::II);
    }

    // (III)
    let span_in_x = x.subspace_in_x(&z.span);
    let linear = z.all_fibers_linear();
    let codim = z.est_dim.map(|d| z.span_dim() - d.min(z.span_dim()));
    let mut evidence = LinearSpanEvidence {
        span_dim: z.span_dim(),
        span_in_x,
        all_fibers_linear: linear,
        z_codim_in_span: codim,
        span_singular: None,
    };
    let reason = if !span_in_x {
        Some("<Z> is not contained in X".to_string())
    } else if z.span_dim() <= delta {
        Some(format!("dim <Z> = {} does not exceed delta = {delta}", z.span_dim()))
    } else if !linear {
        Some("some fiber meets Sing(X) in a non-linear quadric".to_string())
    } else {
        None
    };
    if let Some(r) = reason {
        run.evidence.linear_span = Some(evidence);
        return run.unresolved(r);
    }
    if codim.is_some_and(|c| c <= 1) {
        let singular = (0..config.trials).all(|_| x.is_singular_at(&z.span.random_point(&f, &mut run.rng)));
        evidence.span_singular = Some(singular);
        if !singular {
            run.evidence.linear_span = Some(evidence);
            return run.unresolved("Z has codimension at most one in <Z> but <Z> is not singular");
        }
    }
    run.evidence.linear_span = Some(evidence);
    if z.kappa != 1 {
        return run.unresolved(format!("Sec(Sing(X)) is not X but kappa = {}", z.kappa));
    }
    run.evidence.exclusivity.push(Exclusivity {
        excludes: Label::I,
        witness: format!("largest secant or join dimension is {sec_max} < N - 1 = {}", ambient - 1),
    });
    run.finish(Label::III)
}

/// Classifies a cubic with rational coefficients at `primary`, retrying once
/// at a second prime when the first run is unresolved.
pub fn classify_rational(
    source: &crate::poly::MultiPoly<num_rational::BigRational>,
    components: &[Parameterization],
    primary: PrimeField,
    config: &ClassifyConfig,
) -> Result<ClassificationReport> {
    let run_at = |field: PrimeField| -> Result<ClassificationReport> {
        let x = CubicHypersurface::from_rational(field, source)?;
        let sampler = if components.is_empty() { None } else { Some(SingularSampler::parameterized(&x, components)?) };
        Ok(classify(&x, sampler.as_ref(), config))
    };
    let first = run_at(primary)?;
    if first.label != Label::Unresolved {
        return Ok(first);
    }
    let secondary = if primary.modulus() == SECONDARY_PRIME {
        PrimeField::new(crate::field::DEFAULT_PRIME)?
    } else {
        PrimeField::new(SECONDARY_PRIME)?
    };
    let Ok(mut second) = run_at(secondary) else { return Ok(first) };
    if second.label == Label::Unresolved {
        return Ok(first);
    }
    second.warnings.insert(
        0,
        format!(
            "unresolved at p = {} ({}); labeled at the second prime",
            primary.modulus(),
            first.evidence.unresolved_reason.unwrap_or_default()
        ),
    );
    Ok(second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, FamilySpec};
    use crate::field::DEFAULT_PRIME;

    fn run(spec: FamilySpec) -> ClassificationReport {
        let fam = generate(&spec).unwrap();
        let field = PrimeField::new(DEFAULT_PRIME).unwrap();
        let (x, s) = fam.at_prime(field).unwrap();
        classify(&x, s.as_ref(), &ClassifyConfig { seed: 1, ..ClassifyConfig::default() })
    }

    #[test]
    fn perazzo_is_iii() {
        let r = run(FamilySpec::PerazzoP4);
        assert_eq!(r.label, Label::III, "{:?}", r.evidence.unresolved_reason);
        assert_eq!((r.delta, r.sing_dim, r.z_span_dim, r.kappa), (Some(1), Some(2), Some(2), Some(1)));
        assert!(r.hessian_vanishes);
        let z = r.evidence.z.as_ref().unwrap();
        assert_eq!(z.forms[1].modulo_span, vec!["x2^2 - 4*x3*x4"]);
        assert_eq!(r.evidence.normal_form_consistent, Some(true));
    }

    #[test]
    fn join_is_ii() {
        let r = run(FamilySpec::JoinQuadrics { p: 1, q: 1 });
        assert_eq!(r.label, Label::II, "{:?}", r.evidence.unresolved_reason);
        assert_eq!((r.delta, r.kappa), (Some(1), Some(2)));
        assert!(!r.hessian_vanishes);
        let js = r.evidence.join_structure.as_ref().unwrap();
        assert_eq!(js.meet_point, Some(vec![1, 0, 0, 0, 0]));
        assert!(js.spans_are_hyperplane_hulls && js.meet_on_both);
        assert_eq!(js.quadrics_nonsingular, Some(true));
    }

    #[test]
    fn controls() {
        assert_eq!(run(FamilySpec::Fermat { n: 4 }).label, Label::DefectZero);
        let cone = run(FamilySpec::ConeOver { inner: Box::new(FamilySpec::Fermat { n: 2 }), extra: 2 });
        assert_eq!(cone.label, Label::Cone);
        assert_eq!(cone.evidence.cone.as_ref().unwrap().vertex_dim, 1);
    }

    #[test]
    fn normal_form_check() {
        assert_eq!(verify_prop21_normal_form(4, 1, 2), Ok(true));
        assert_eq!(verify_prop21_normal_form(5, 1, 3), Ok(false));
        assert!(matches!(verify_prop21_normal_form(4, 0, 2), Err(Error::Precondition(_))));
    }
}
