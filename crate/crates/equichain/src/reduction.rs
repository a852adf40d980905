//! Reductions (strong deformation retractions) between chain complexes.
//!
//! A reduction `(α, β, η): C ⇒ D` consists of chain maps `α: C → D`,
//! `β: D → C` and a degree `+1` homotopy `η` on `C` subject to
//!
//! * `αβ = id`,
//! * `[∂, η] = id − βα`,
//! * the side conditions `αη = 0`, `ηβ = 0`, `ηη = 0`.
//!
//! This module provides randomized validation of these identities, a
//! normalization that repairs the side conditions of a raw homotopy, and two
//! constructors that build reductions from cycle-filling algorithms: a
//! contraction of an acyclic free complex and the full reduction builder from
//! a chain map with a linear section and a filler for its kernel.

use crate::complex::{random_element, Complex, FreeModuleTerm};
use crate::dga::Dga;
use crate::element::{sign, Lin, Term};
use crate::error::{Error, Result};
use crate::hom::{graded_commutator, GradedMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Sampling parameters for randomized identity checks.
#[derive(Clone, Debug)]
pub struct SampleCfg {
    /// Highest degree sampled (inclusive).
    pub max_degree: i64,
    /// Number of random elements drawn per degree and identity.
    pub samples_per_degree: usize,
    /// RNG seed; equal seeds give byte-identical reports.
    pub seed: u64,
    /// Maximal number of basis terms per random element.
    pub max_terms: usize,
    /// Coefficients are drawn from `-max_coeff..=max_coeff` (zero excluded).
    pub max_coeff: i64,
}

impl SampleCfg {
    pub fn new(max_degree: i64, samples_per_degree: usize, seed: u64) -> Self {
        SampleCfg {
            max_degree,
            samples_per_degree,
            seed,
            max_terms: 3,
            max_coeff: 3,
        }
    }
}

impl Default for SampleCfg {
    fn default() -> Self {
        SampleCfg::new(4, 20, crate::default_seed())
    }
}

/// Outcome of one identity check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub identity: String,
    pub samples: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// A full validation report; serializable for the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Short description of the first failing check, if any.
    pub fn first_failure(&self) -> Option<String> {
        self.checks.iter().find(|c| !c.passed).map(|c| {
            let mut msg = format!("identity `{}` failed", c.identity);
            if let Some(w) = &c.witness {
                msg.push_str(&format!(" (witness: {w})"));
            }
            msg
        })
    }

    /// One line per check, `ok`/`FAIL` first.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!(
                "{status} {:<24} samples={}\n",
                c.identity, c.samples
            ));
            if let Some(w) = &c.witness {
                out.push_str(&format!("     witness: {w}\n"));
            }
        }
        out
    }
}

/// A reduction `(α, β, η): source ⇒ target`.
#[derive(Debug)]
pub struct Reduction<S: Term, T: Term> {
    pub source: Complex<S>,
    pub target: Complex<T>,
    pub alpha: GradedMap<S, T>,
    pub beta: GradedMap<T, S>,
    pub eta: GradedMap<S, S>,
}

impl<S: Term, T: Term> Clone for Reduction<S, T> {
    fn clone(&self) -> Self {
        Reduction {
            source: self.source.clone(),
            target: self.target.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            eta: self.eta.clone(),
        }
    }
}

impl<S: Term, T: Term> Reduction<S, T> {
    pub fn new(
        source: Complex<S>,
        target: Complex<T>,
        alpha: GradedMap<S, T>,
        beta: GradedMap<T, S>,
        eta: GradedMap<S, S>,
    ) -> Self {
        assert_eq!(alpha.degree(), 0, "α must have degree 0");
        assert_eq!(beta.degree(), 0, "β must have degree 0");
        assert_eq!(eta.degree(), 1, "η must have degree 1");
        Reduction {
            source,
            target,
            alpha,
            beta,
            eta,
        }
    }

    /// `id − βα`, the projection annihilated by the target.
    pub fn projection(&self) -> GradedMap<S, S> {
        GradedMap::identity().sub(&self.beta.compose(&self.alpha))
    }
}

/// The identity reduction of a complex (`α = β = id`, `η = 0`).
pub fn identity_reduction<T: Term>(complex: &Complex<T>) -> Reduction<T, T> {
    Reduction::new(
        complex.clone(),
        complex.clone(),
        GradedMap::identity(),
        GradedMap::identity(),
        GradedMap::zero(1),
    )
}

/// A span of reductions out of a common source.
pub struct StrongEquivalence<S: Term, L: Term, R: Term> {
    pub left: Reduction<S, L>,
    pub right: Reduction<S, R>,
}

impl<S: Term, L: Term, R: Term> Clone for StrongEquivalence<S, L, R> {
    fn clone(&self) -> Self {
        StrongEquivalence {
            left: self.left.clone(),
            right: self.right.clone(),
        }
    }
}

impl<S: Term, L: Term, R: Term> StrongEquivalence<S, L, R> {
    pub fn new(left: Reduction<S, L>, right: Reduction<S, R>) -> Self {
        assert_eq!(
            left.source.id(),
            right.source.id(),
            "both legs must share one source complex"
        );
        StrongEquivalence { left, right }
    }
}

fn sample_many<T: Term>(
    complex: &Complex<T>,
    degree: i64,
    cfg: &SampleCfg,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Lin<T>>> {
    let basis = complex.basis(degree)?;
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    Ok((0..cfg.samples_per_degree)
        .map(|_| random_element(&basis, rng, cfg.max_terms, cfg.max_coeff))
        .collect())
}

struct IdentityCheck<'a, S: Term, T: Term> {
    name: &'a str,
    /// Evaluates (lhs, rhs) on a source sample; `None` if the identity
    /// samples the target instead.
    on_source: Option<Box<dyn Fn(&Lin<S>) -> (String, String, bool) + 'a>>,
    on_target: Option<Box<dyn Fn(&Lin<T>) -> (String, String, bool) + 'a>>,
}

/// Randomized validation of all reduction identities.
///
/// Seven checks run: `α` and `β` are chain maps, `αβ = id`,
/// `[∂, η] = id − βα`, and the three side conditions `αη = 0`, `ηβ = 0`,
/// `ηη = 0`.  Each check draws `samples_per_degree` random elements in every
/// degree up to `max_degree` and records the first counterexample.
pub fn validate_reduction<S: Term, T: Term>(
    red: &Reduction<S, T>,
    cfg: &SampleCfg,
) -> Result<ValidationReport> {
    let sd = red.source.diff();
    let td = red.target.diff();
    let cmp = |l: &Lin<S>, r: &Lin<S>| (format!("{l}"), format!("{r}"), l == r);
    let cmp_t = |l: &Lin<T>, r: &Lin<T>| (format!("{l}"), format!("{r}"), l == r);

    let alpha_comm = graded_commutator(&red.alpha, sd, td);
    let beta_comm = graded_commutator(&red.beta, td, sd);
    let eta_comm = graded_commutator(&red.eta, sd, sd);
    let projection = red.projection();

    let checks: Vec<IdentityCheck<S, T>> = vec![
        IdentityCheck {
            name: "alpha_chain_map",
            on_source: Some(Box::new(|x| {
                let v = alpha_comm.apply(x);
                (format!("[∂,α]({x})"), format!("{v}"), v.is_zero())
            })),
            on_target: None,
        },
        IdentityCheck {
            name: "beta_chain_map",
            on_source: None,
            on_target: Some(Box::new(|y| {
                let v = beta_comm.apply(y);
                (format!("[∂,β]({y})"), format!("{v}"), v.is_zero())
            })),
        },
        IdentityCheck {
            name: "alpha_beta_identity",
            on_source: None,
            on_target: Some(Box::new(|y| {
                cmp_t(&red.alpha.apply(&red.beta.apply(y)), y)
            })),
        },
        IdentityCheck {
            name: "homotopy_identity",
            on_source: Some(Box::new(|x| {
                cmp(&eta_comm.apply(x), &projection.apply(x))
            })),
            on_target: None,
        },
        IdentityCheck {
            name: "alpha_eta_zero",
            on_source: Some(Box::new(|x| {
                let v = red.alpha.apply(&red.eta.apply(x));
                (format!("αη({x})"), format!("{v}"), v.is_zero())
            })),
            on_target: None,
        },
        IdentityCheck {
            name: "eta_beta_zero",
            on_source: None,
            on_target: Some(Box::new(|y| {
                let v = red.eta.apply(&red.beta.apply(y));
                (format!("ηβ({y})"), format!("{v}"), v.is_zero())
            })),
        },
        IdentityCheck {
            name: "eta_eta_zero",
            on_source: Some(Box::new(|x| {
                let v = red.eta.apply(&red.eta.apply(x));
                (format!("ηη({x})"), format!("{v}"), v.is_zero())
            })),
            on_target: None,
        },
    ];

    let mut results = Vec::new();
    for check in &checks {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut samples = 0usize;
        let mut witness = None;
        'deg: for n in 0..=cfg.max_degree {
            if let Some(f) = &check.on_source {
                for x in sample_many(&red.source, n, cfg, &mut rng)? {
                    samples += 1;
                    let (lhs, rhs, ok) = f(&x);
                    if !ok {
                        witness = Some(format!("degree {n}: {lhs} = {rhs}"));
                        break 'deg;
                    }
                }
            }
            if let Some(f) = &check.on_target {
                for y in sample_many(&red.target, n, cfg, &mut rng)? {
                    samples += 1;
                    let (lhs, rhs, ok) = f(&y);
                    if !ok {
                        witness = Some(format!("degree {n}: {lhs} = {rhs}"));
                        break 'deg;
                    }
                }
            }
        }
        results.push(CheckResult {
            identity: check.name.to_string(),
            samples,
            passed: witness.is_none(),
            witness,
        });
    }
    Ok(ValidationReport {
        subject: format!("{} ⇒ {}", red.source.name(), red.target.name()),
        checks: results,
    })
}

/// Repairs the side conditions of a raw homotopy.
///
/// Given chain maps `α, β` with `αβ = id` and any degree-one `η_raw` with
/// `[∂, η_raw] = id − βα`, the normalized homotopy is `η = h∂h` where
/// `h = (id − βα) η_raw (id − βα)`.  The result satisfies all three side
/// conditions while keeping `[∂, η] = id − βα`; if the input already
/// satisfied the side conditions, the output agrees with it pointwise.
///
/// The preconditions are verified on random samples; a violation is rejected
/// with a witness.
pub fn normalize_homotopy<S: Term, T: Term>(
    source: &Complex<S>,
    target: &Complex<T>,
    alpha: GradedMap<S, T>,
    beta: GradedMap<T, S>,
    eta_raw: GradedMap<S, S>,
    cfg: &SampleCfg,
) -> Result<Reduction<S, T>> {
    assert_eq!(eta_raw.degree(), 1, "η_raw must have degree 1");
    let sd = source.diff().clone();
    let td = target.diff();
    let pi = GradedMap::identity().sub(&beta.compose(&alpha));
    // Precondition samples.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let alpha_comm = graded_commutator(&alpha, &sd, td);
    let beta_comm = graded_commutator(&beta, td, &sd);
    let eta_comm = graded_commutator(&eta_raw, &sd, &sd);
    for n in 0..=cfg.max_degree {
        for x in sample_many(source, n, cfg, &mut rng)? {
            let c = alpha_comm.apply(&x);
            if !c.is_zero() {
                return Err(Error::Precondition {
                    op: "normalize_homotopy".into(),
                    reason: format!("α is not a chain map: [∂,α]({x}) = {c} at degree {n}"),
                });
            }
            let lhs = eta_comm.apply(&x);
            let rhs = pi.apply(&x);
            if lhs != rhs {
                return Err(Error::Precondition {
                    op: "normalize_homotopy".into(),
                    reason: format!(
                        "η_raw is not a homotopy for id − βα: [∂,η]({x}) = {lhs} but id−βα gives {rhs} at degree {n}"
                    ),
                });
            }
        }
        for y in sample_many(target, n, cfg, &mut rng)? {
            let c = beta_comm.apply(&y);
            if !c.is_zero() {
                return Err(Error::Precondition {
                    op: "normalize_homotopy".into(),
                    reason: format!("β is not a chain map: [∂,β]({y}) = {c} at degree {n}"),
                });
            }
            let ab = alpha.apply(&beta.apply(&y));
            if ab != y {
                return Err(Error::Precondition {
                    op: "normalize_homotopy".into(),
                    reason: format!("αβ is not the identity: αβ({y}) = {ab} at degree {n}"),
                });
            }
        }
    }
    let h = pi.compose(&eta_raw).compose(&pi).memoized();
    let eta = h.compose(&sd).compose(&h).memoized();
    Ok(Reduction::new(
        source.clone(),
        target.clone(),
        alpha,
        beta,
        eta,
    ))
}

/// An algorithm producing, for a cycle `z`, a chain `c` with `∂c = z`.
/// Fillers may refuse inputs outside their domain with a typed error.
pub type Filler<T> = Arc<dyn Fn(&Lin<T>) -> Result<Lin<T>> + Send + Sync>;

/// Shared recursion core: a degree `+1` map defined on the ring-basis by
/// `T(b) = filler(project(b) − T(∂ project(b)))` and extended linearly over
/// the ring.
struct FillRecursion<T: FreeModuleTerm> {
    complex: Complex<T>,
    ring: Arc<Dga>,
    project: GradedMap<T, T>,
    filler: Filler<T>,
    memo: Mutex<HashMap<T, Lin<T>>>,
}

impl<T: FreeModuleTerm> FillRecursion<T> {
    fn eval_basis(&self, b: &T) -> Result<Lin<T>> {
        if let Some(v) = self.memo.lock().unwrap().get(b) {
            return Ok(v.clone());
        }
        let pb = self.project.apply_term(b);
        let dpb = self.complex.apply_diff(&pb);
        let z = pb.sub(&self.eval(&dpb)?);
        let c = (self.filler)(&z)?;
        let dc = self.complex.apply_diff(&c);
        if dc != z {
            return Err(Error::FillerFailed {
                degree: b.degree(),
                witness: format!("for cycle {z} the filler returned {c} with boundary {dc}"),
            });
        }
        self.memo.lock().unwrap().insert(b.clone(), c.clone());
        Ok(c)
    }

    /// Ring-linear extension: `T(g·b) = (-1)^{|g|} g·T(b)`.
    fn eval(&self, e: &Lin<T>) -> Result<Lin<T>> {
        let mut acc = Lin::zero();
        for (t, coeff) in e.iter() {
            let (g, key) = t.split();
            let b = T::join(self.ring.unit(), &key);
            let v = self.eval_basis(&b)?;
            let moved = v.bind(|u| {
                let (h, ukey) = u.split();
                self.ring.prod_gen(&g, &h).bind(|p| Lin::term(T::join(*p, &ukey)))
            });
            acc = acc.add(&moved.scale(coeff).scale_i64(sign(g.deg as i64)));
        }
        Ok(acc)
    }

    /// Wraps the recursion as a graded map.  Contract violations surface as
    /// typed errors during the eager pre-validation phase; during later lazy
    /// evaluation they panic with the same message, which only happens when
    /// the filler breaks its contract on inputs deeper than the pre-checked
    /// range.
    fn into_map(self: Arc<Self>, op: &'static str) -> GradedMap<T, T> {
        GradedMap::new(1, move |t: &T| {
            self.eval(&Lin::term(t.clone()))
                .unwrap_or_else(|e| panic!("{op}: filler contract violated lazily: {e}"))
        })
    }
}

/// Builds a contraction `σ` (with `[∂, σ] = id`) of an acyclic complex that
/// is free as a graded module over its ring, from a cycle-filling algorithm.
///
/// The recursion `σ(b) = filler((id − σ∂)(b))` runs over the ring-basis and
/// extends linearly over the ring; it is eagerly driven (and the filler
/// contract `∂(filler(z)) = z` checked with a witness) on all ring-basis
/// terms of degree at most `precheck_degree`.
pub fn contraction_from_filler<T: FreeModuleTerm>(
    complex: &Complex<T>,
    ring: &Arc<Dga>,
    filler: Filler<T>,
    precheck_degree: i64,
) -> Result<GradedMap<T, T>> {
    let rec = Arc::new(FillRecursion {
        complex: complex.clone(),
        ring: Arc::clone(ring),
        project: GradedMap::identity(),
        filler,
        memo: Mutex::new(HashMap::new()),
    });
    for n in 0..=precheck_degree {
        for b in crate::complex::ring_basis(complex, ring, n)? {
            rec.eval_basis(&b)?;
        }
    }
    Ok(rec.into_map("contraction_from_filler"))
}

/// Builds a full reduction from a chain map `α` with linear section `β₀` and
/// a filler for cycles of `ker α`.
///
/// Requirements:
/// * the ring has zero differential (typed error otherwise);
/// * the source is free as a graded module over the ring, with basis;
/// * `α`, `β₀` are linear over the ring, `α` is a chain map and `αβ₀ = id`
///   (checked on random samples, rejected with a witness);
/// * the filler takes cycles of `ker α` to chains of `ker α` with the exact
///   boundary (checked term by term wherever the recursion runs).
///
/// Construction: a degree-one map `T` is defined on the ring-basis by
/// `T(b) = filler(p(b) − T(∂p(b)))` with `p = id − β₀α`; its restriction to
/// `ker α` is a contraction.  The chain section is `β = β₀ − T[∂, β₀]`, and
/// the homotopy is the side-condition normalization of `T(id − βα)`.
pub fn build_reduction<S: FreeModuleTerm, T: Term>(
    source: &Complex<S>,
    target: &Complex<T>,
    ring: &Arc<Dga>,
    alpha: GradedMap<S, T>,
    beta0: GradedMap<T, S>,
    filler: Filler<S>,
    cfg: &SampleCfg,
    precheck_degree: i64,
) -> Result<Reduction<S, T>> {
    if !ring.has_zero_diff() {
        return Err(Error::RingDifferentialNonzero {
            op: "build_reduction".into(),
            ring: ring.name().into(),
        });
    }
    let sd = source.diff().clone();
    let td = target.diff();
    // Sampled preconditions.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let alpha_comm = graded_commutator(&alpha, &sd, td);
    for n in 0..=cfg.max_degree.min(precheck_degree.max(2)) {
        for x in sample_many(source, n, cfg, &mut rng)? {
            let c = alpha_comm.apply(&x);
            if !c.is_zero() {
                return Err(Error::Precondition {
                    op: "build_reduction".into(),
                    reason: format!("α is not a chain map: [∂,α]({x}) = {c} at degree {n}"),
                });
            }
        }
        for y in sample_many(target, n, cfg, &mut rng)? {
            let ab = alpha.apply(&beta0.apply(&y));
            if ab != y {
                return Err(Error::Precondition {
                    op: "build_reduction".into(),
                    reason: format!("αβ₀ is not the identity: αβ₀({y}) = {ab} at degree {n}"),
                });
            }
        }
    }
    let p0 = GradedMap::identity().sub(&beta0.compose(&alpha));
    let rec = Arc::new(FillRecursion {
        complex: source.clone(),
        ring: Arc::clone(ring),
        project: p0,
        filler,
        memo: Mutex::new(HashMap::new()),
    });
    for n in 0..=precheck_degree {
        for b in crate::complex::ring_basis(source, ring, n)? {
            rec.eval_basis(&b)?;
        }
    }
    let t_map = rec.into_map("build_reduction");
    let beta = beta0.sub(&t_map.compose(&graded_commutator(&beta0, td, &sd)));
    let beta = beta.memoized();
    let eta_pre = t_map
        .compose(&GradedMap::identity().sub(&beta.compose(&alpha)))
        .memoized();
    // The construction gives [∂, η_pre] = id − βα with αη_pre = 0 and
    // η_pre β = 0 exactly, but not ηη = 0; composing η_pre ∂ η_pre repairs
    // it while preserving everything else.
    let eta = eta_pre.compose(&sd).compose(&eta_pre).memoized();
    Ok(Reduction::new(
        source.clone(),
        target.clone(),
        alpha,
        beta,
        eta,
    ))
}
