//! The end-to-end assembly: from a free `ZG`-complex `M` and a strong
//! equivalence `M ⇐ M̃ ⇒ N` of plain complexes, produce a span of ring-linear
//! reductions
//!
//! ```text
//! M ⇐ BM ⇐ BM̃ ⇒ BN
//! ```
//!
//! whose maps all commute with the group action on the nose.  `BM̃` is the
//! twisted tensor construction of `M̃` for the coherent action pulled back
//! along the left leg; with that choice the action pushed forward along the
//! left leg is exactly the strict action of `M`, so `BM` is the two-sided
//! tensor resolution of `M` and reduces onto `M` directly.

use crate::bar::{bar_reduction, perturbed_bar, BarTerm, RInftyAction};
use crate::complex::{Complex, FreeModuleTerm};
use crate::element::Term;
use crate::error::Result;
use crate::reduction::{build_reduction, Filler, Reduction, SampleCfg, StrongEquivalence};
use crate::rmap::{kernel_filler, strictify_reduction_maps};
use crate::transfer::{gate_on_validation, transfer_basic, transfer_easy};
use num_bigint::BigInt;
use std::sync::Arc;

/// The span of ring-linear reductions produced by
/// [`equivariant_strong_equivalence`], together with the final target.
pub struct PipelineResult<Mid: Term, S: Term, N: Term> {
    /// `BM ⇒ M`: the two-sided tensor resolution collapsing onto `M`.
    pub left: Reduction<BarTerm<S>, S>,
    /// `BM̃ ⇒ BM`: the strictified left leg.
    pub middle: Reduction<BarTerm<Mid>, BarTerm<S>>,
    /// `BM̃ ⇒ BN`: the strictified right leg.
    pub right: Reduction<BarTerm<Mid>, BarTerm<N>>,
    /// `BN`, locally finite whenever `N` is.
    pub target: Complex<BarTerm<N>>,
}

/// Builds the equivariant strong equivalence.
///
/// * `m_action` — the strict coherent action on the free `ZG`-complex `M`;
/// * `se` — a span of reductions `M ⇐ M̃ ⇒ N` whose maps need not commute
///   with the group action (both legs must satisfy all side conditions);
/// * `max_degree` — all constructed complexes answer basis queries up to
///   `max_degree + 2` and raise a typed truncation error beyond;
/// * `cfg` — sampling plan for the precondition gates.
///
/// Steps: pull the action back to `M̃` along the left leg, push it forward to
/// `N` along the right leg, form the three tensor constructions, strictify
/// both legs, rebuild their homotopy operators through the kernel filler, and
/// attach the resolution reduction `BM ⇒ M`.
pub fn equivariant_strong_equivalence<Mid, S, N>(
    m_action: &RInftyAction<S>,
    se: &StrongEquivalence<Mid, S, N>,
    max_degree: i64,
    cfg: &SampleCfg,
) -> Result<PipelineResult<Mid, S, N>>
where
    Mid: FreeModuleTerm,
    S: FreeModuleTerm,
    N: Term,
{
    let ring = Arc::clone(m_action.ring());
    let cap = max_degree + 2;
    gate_on_validation("equivariant_strong_equivalence", &se.left, cfg)?;
    gate_on_validation("equivariant_strong_equivalence", &se.right, cfg)?;

    // Coherent structure: pulled back to the span's source, pushed forward to
    // its far end.  The pullback makes the left leg's maps linear over the
    // coherent structure, which is what collapses its pushforward back onto
    // the strict action of `M`.
    let mid_action = transfer_easy(&se.left, m_action, cfg)?;
    let n_action = transfer_basic(&se.right, &mid_action, cfg)?;

    // The three tensor constructions, capped consistently.
    let bmt = perturbed_bar(&mid_action, format!("B({})", se.left.source.name())).truncated(cap);
    let bn = perturbed_bar(&n_action, format!("B({})", se.right.target.name())).truncated(cap);

    // Left: BM ⇒ M is the resolution reduction; its source complex is reused
    // as the target of the middle leg so the span shares one `BM`.
    let left_raw = bar_reduction(m_action.complex(), &ring, cfg, max_degree)?;
    let bm = left_raw.source.truncated(cap);
    let left = Reduction::new(
        bm.clone(),
        left_raw.target.clone(),
        left_raw.alpha.clone(),
        left_raw.beta.clone(),
        left_raw.eta.clone(),
    );

    // Middle: strictify the left leg against the strict action of `M` and
    // rebuild its homotopy from the kernel filler.
    let (am, bm_map) = strictify_reduction_maps(&se.left, &mid_action, m_action, cfg)?;
    let eta_left = se.left.eta.clone();
    let filler_left: Filler<Mid> = Arc::new(move |z| Ok(eta_left.apply(z)));
    let middle = build_reduction(
        &bmt,
        &bm,
        &ring,
        am.realize(),
        bm_map.realize(),
        kernel_filler(&am, &filler_left),
        cfg,
        max_degree,
    )?;

    // Right: same treatment for the right leg.
    let (an, bn_map) = strictify_reduction_maps(&se.right, &mid_action, &n_action, cfg)?;
    let eta_right = se.right.eta.clone();
    let filler_right: Filler<Mid> = Arc::new(move |z| Ok(eta_right.apply(z)));
    let right = build_reduction(
        &bmt,
        &bn,
        &ring,
        an.realize(),
        bn_map.realize(),
        kernel_filler(&an, &filler_right),
        cfg,
        max_degree,
    )?;

    Ok(PipelineResult {
        left,
        middle,
        right,
        target: bn,
    })
}

/// The rank of `(BN)_n` over the group ring:
///
/// ```text
/// Σ_{m=0}^n |G|^m · rk N_{n−m}.
/// ```
pub fn bn_rank(group_order: u64, n: i64, rank: impl Fn(i64) -> u64) -> BigInt {
    let order = BigInt::from(group_order);
    let mut power = BigInt::from(1);
    let mut total = BigInt::from(0);
    for m in 0..=n.max(-1) {
        total += &power * BigInt::from(rank(n - m));
        power *= &order;
    }
    total
}
