//! Transport of module structures across reductions.
//!
//! A reduction `(α, β, η): M ⇒ N` does not carry a strict ring action on `M`
//! to a strict action on `N`; it carries it to a homotopy coherent family of
//! operations.  The bridge is the shuffle operator `Sh(r₀,…,r_m)`, a sum over
//! all ways of splitting the tuple into blocks with the homotopy `η` spliced
//! between consecutive blocks.  [`transfer_basic`] conjugates that operator by
//! `(α, β)` to produce the coherent action on `N`; [`transfer_easy`] goes the
//! other way, pulling a coherent action on `N` back to `M` along an augmented
//! ring, where a closed form is available.

use crate::bar::RInftyAction;
use crate::element::{Lin, RingGen, Term};
use crate::error::{Error, Result};
use crate::hom::GradedMap;
use crate::reduction::{validate_reduction, Reduction, SampleCfg};
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// The shuffle operator of a coherent action and a degree-one homotopy.
///
/// For a tuple `(r₀,…,r_m)` the operator is
///
/// ```text
/// Sh(r₀,…,r_m) = Σ (r₀,…,r_{k₁−1}) η (r_{k₁},…,r_{k₂−1}) η ⋯ η (r_{k_n},…,r_m)
/// ```
///
/// summed over all splittings `0 < k₁ < ⋯ < k_n < m+1`, including the trivial
/// one (the whole tuple as a single block).  No signs appear.  It is computed
/// by recursion on the leading block,
///
/// ```text
/// Sh(r₀,…,r_m) = (r₀,…,r_m) + Σ_{k=1}^{m} (r₀,…,r_{k−1}) ∘ η ∘ Sh(r_k,…,r_m),
/// ```
///
/// with the resulting operators memoized per tuple.
pub struct ShuffleOp<X: Term> {
    action: RInftyAction<X>,
    eta: GradedMap<X, X>,
    memo: Mutex<HashMap<Vec<RingGen>, GradedMap<X, X>>>,
}

impl<X: Term> ShuffleOp<X> {
    pub fn new(action: &RInftyAction<X>, eta: &GradedMap<X, X>) -> Arc<Self> {
        assert_eq!(eta.degree(), 1, "the spliced homotopy must have degree 1");
        Arc::new(ShuffleOp {
            action: action.clone(),
            eta: eta.clone(),
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn action(&self) -> &RInftyAction<X> {
        &self.action
    }

    /// A single block `(r₀,…,r_m)` as a graded operator.
    fn block(&self, tuple: &[RingGen]) -> GradedMap<X, X> {
        self.action.as_operator(tuple)
    }

    /// The memoized operator `Sh(r₀,…,r_m)`; panics on the empty tuple.
    pub fn sh(self: &Arc<Self>, tuple: &[RingGen]) -> GradedMap<X, X> {
        assert!(!tuple.is_empty(), "shuffle operators need a nonempty tuple");
        if let Some(m) = self.memo.lock().unwrap().get(tuple) {
            return m.clone();
        }
        let mut total = self.block(tuple);
        for k in 1..tuple.len() {
            let lead = self.block(&tuple[..k]);
            let rest = self.sh(&tuple[k..]);
            total = total.add(&lead.compose(&self.eta.compose(&rest)));
        }
        let total = total.memoized();
        self.memo
            .lock()
            .unwrap()
            .insert(tuple.to_vec(), total.clone());
        total
    }

    /// Applies `Sh(tuple)` to an element.
    pub fn apply(self: &Arc<Self>, tuple: &[RingGen], e: &Lin<X>) -> Lin<X> {
        self.sh(tuple).apply(e)
    }
}

/// One-shot evaluation of the shuffle operator; heavy users should hold a
/// [`ShuffleOp`] so the per-tuple memoization is shared between calls.
pub fn shuffle_action<X: Term>(
    action: &RInftyAction<X>,
    eta: &GradedMap<X, X>,
    tuple: &[RingGen],
) -> GradedMap<X, X> {
    ShuffleOp::new(action, eta).sh(tuple)
}

pub(crate) fn gate_on_validation<S: Term, T: Term>(
    op: &'static str,
    red: &Reduction<S, T>,
    cfg: &SampleCfg,
) -> Result<()> {
    let report = validate_reduction(red, cfg)?;
    if let Some(reason) = report.first_failure() {
        return Err(Error::Precondition {
            op: op.to_string(),
            reason,
        });
    }
    Ok(())
}

/// Transports a coherent action on the source of a reduction to its target:
///
/// ```text
/// (r₀,…,r_m) · y  =  α Sh(r₀,…,r_m) β y.
/// ```
///
/// The side conditions `αη = 0`, `ηβ = 0`, `ηη = 0` are what make this family
/// coherent, so the reduction is validated (by sampling, per `cfg`) before any
/// operator is built; a failed identity is reported as a precondition error.
pub fn transfer_basic<S: Term, T: Term>(
    red: &Reduction<S, T>,
    action: &RInftyAction<S>,
    cfg: &SampleCfg,
) -> Result<RInftyAction<T>> {
    gate_on_validation("transfer_basic", red, cfg)?;
    let sh = ShuffleOp::new(action, &red.eta);
    let alpha = red.alpha.clone();
    let beta = red.beta.clone();
    Ok(RInftyAction::new(
        Arc::clone(action.ring()),
        red.target.clone(),
        move |tuple, y: &T| alpha.apply(&sh.apply(tuple, &beta.apply_term(y))),
    ))
}

/// Pulls a coherent action on the target of a reduction back to its source.
/// Over an augmented ring there is a closed form:
///
/// ```text
/// (r) · x        = β ((r)·αx) + ε(r) (x − βαx),
/// (r₀,…,r_m) · x = β ((r₀,…,r_m)·αx)            for m ≥ 1,
/// ```
///
/// with `ε` the augmentation.  The maps `α`, `β`, `η` are then linear over
/// the transported operations on the nose.
pub fn transfer_easy<S: Term, T: Term>(
    red: &Reduction<S, T>,
    action: &RInftyAction<T>,
    cfg: &SampleCfg,
) -> Result<RInftyAction<S>> {
    let ring = Arc::clone(action.ring());
    if !ring.has_augmentation() {
        return Err(Error::MissingAugmentation(ring.name().to_string()));
    }
    gate_on_validation("transfer_easy", red, cfg)?;
    let target_action = action.clone();
    let alpha = red.alpha.clone();
    let beta = red.beta.clone();
    let r = Arc::clone(&ring);
    Ok(RInftyAction::new(ring, red.source.clone(), move |tuple, x: &S| {
        let down = alpha.apply_term(x);
        let mut out = beta.apply(&target_action.act_tuple_lin(tuple, &down));
        if tuple.len() == 1 {
            let e = r
                .aug_gen(&tuple[0])
                .expect("augmentation presence is checked on construction");
            if !e.is_zero() {
                let proj = Lin::term(x.clone()).sub(&beta.apply(&down));
                out = out.add(&proj.scale(&e));
            }
        }
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bar::{bar_reduction, bm_retract_data, perturbed_bar, tuple_dimension, BarTerm};
    use crate::complex::{canonical_action, Complex, RingAction};
    use crate::dga::Dga;
    use crate::element::{sign, ModTerm};
    use crate::group::FiniteGroup;
    use crate::hom::graded_commutator;
    use crate::reduction::{identity_reduction, normalize_homotopy};
    use num_bigint::BigInt;

    fn zn_ring(n: usize) -> Arc<Dga> {
        Dga::group_ring(&FiniteGroup::cyclic(n).unwrap())
    }

    /// The free rank-one module `R·ē` in degree zero, zero differential.
    fn point_module(ring: &Arc<Dga>) -> Complex<ModTerm> {
        let diff = GradedMap::zero(-1);
        let r = Arc::clone(ring);
        let basis: Arc<dyn Fn(i64) -> Vec<ModTerm> + Send + Sync> = Arc::new(move |n| {
            if n == 0 {
                r.generators_of_degree(0)
                    .into_iter()
                    .map(|g| ModTerm::new(g, 0, 0))
                    .collect()
            } else {
                Vec::new()
            }
        });
        Complex::new("R·ē", diff, Some(basis), None)
    }

    /// A rank-one complex of abelian groups concentrated in degree zero.
    fn z_point(ring: &Arc<Dga>) -> Complex<ModTerm> {
        let diff = GradedMap::zero(-1);
        let unit = ring.unit();
        let basis: Arc<dyn Fn(i64) -> Vec<ModTerm> + Send + Sync> = Arc::new(move |n| {
            if n == 0 {
                vec![ModTerm::new(unit, 0, 0)]
            } else {
                Vec::new()
            }
        });
        Complex::new("Z", diff, Some(basis), None)
    }

    /// Strict coherent action built from the head multiplication on a free
    /// module whose terms record their ring coefficient.
    fn strict_action<X: crate::complex::FreeModuleTerm>(
        module: &Complex<X>,
        ring: &Arc<Dga>,
    ) -> RInftyAction<X> {
        RInftyAction::strict(module, &canonical_action::<X>(ring))
    }

    fn bar_point_setup(
        n: usize,
    ) -> (
        Arc<Dga>,
        Reduction<BarTerm<ModTerm>, ModTerm>,
        RInftyAction<BarTerm<ModTerm>>,
    ) {
        let ring = zn_ring(n);
        let module = point_module(&ring);
        let cfg = SampleCfg::new(3, 8, 11);
        let red = bar_reduction(&module, &ring, &cfg, 3).unwrap();
        let action = strict_action(&red.source, &ring);
        (ring, red, action)
    }

    #[test]
    fn sh_single_block_is_the_action() {
        let (ring, red, action) = bar_point_setup(3);
        let sh = ShuffleOp::new(&action, &red.eta);
        let g = ring.generator(1);
        for n in 0..=3 {
            for w in red.source.basis(n).unwrap().iter() {
                let lhs = sh.apply(&[g], &Lin::term(w.clone()));
                assert_eq!(lhs, action.act_tuple(&[g], w));
            }
        }
    }

    #[test]
    fn sh_two_blocks_expand_through_the_homotopy() {
        let (ring, red, action) = bar_point_setup(3);
        let sh = ShuffleOp::new(&action, &red.eta);
        let g = ring.generator(1);
        let h = ring.generator(2);
        // The head action is strict, so the double block vanishes and only
        // the spliced term survives: Sh(g,h) = (g) ∘ η ∘ (h).
        for n in 0..=3 {
            for w in red.source.basis(n).unwrap().iter() {
                let lhs = sh.apply(&[g, h], &Lin::term(w.clone()));
                let spliced =
                    action.act_tuple_lin(&[g], &red.eta.apply(&action.act_tuple(&[h], w)));
                assert_eq!(lhs, spliced);
                assert!(action.act_tuple(&[g, h], w).is_zero());
            }
        }
    }

    #[test]
    fn sh_with_zero_homotopy_collapses_to_the_action() {
        let ring = zn_ring(2);
        let module = point_module(&ring);
        let red = identity_reduction(&module);
        let action = strict_action(&module, &ring);
        let sh = ShuffleOp::new(&action, &red.eta);
        let g = ring.generator(1);
        let e = ModTerm::new(ring.unit(), 0, 0);
        for tuple in [vec![g], vec![g, g], vec![g, g, g]] {
            let got = sh.apply(&tuple, &Lin::term(e.clone()));
            assert_eq!(got, action.act_tuple(&tuple, &e));
        }
    }

    /// Independent right-hand side of the compatibility rule satisfied by the
    /// shuffle operator:
    ///
    /// ```text
    /// [∂, Sh(r₀,…,r_m)] = Σ_k (−1)^{k+|r₀…r_{k−1}|}   Sh(r₀,…,∂r_k,…,r_m)
    ///                   + Σ_k (−1)^{k−1+|r₀…r_{k−1}|} Sh(r₀,…,r_{k−1}r_k,…,r_m)
    ///                   + Σ_k (−1)^{k+|r₀…r_{k−1}|}   Sh(r₀,…,r_{k−1}) βα Sh(r_k,…,r_m).
    /// ```
    fn sh_rule_rhs<X: Term>(
        ring: &Arc<Dga>,
        sh: &Arc<ShuffleOp<X>>,
        beta_alpha: &GradedMap<X, X>,
        tuple: &[RingGen],
    ) -> GradedMap<X, X> {
        let m = tuple.len() - 1;
        let dim = tuple_dimension(tuple);
        let mut acc: GradedMap<X, X> = GradedMap::zero(dim - 1);
        let mut prefix = 0i64;
        for k in 0..=m {
            for (h, c) in ring.diff_gen(&tuple[k]).iter() {
                let mut slots = tuple.to_vec();
                slots[k] = *h;
                let s = BigInt::from(sign(k as i64 + prefix)) * c;
                acc = acc.add(&sh.sh(&slots).scale(&s));
            }
            if k >= 1 {
                for (h, c) in ring.prod_gen(&tuple[k - 1], &tuple[k]).iter() {
                    let mut slots = Vec::with_capacity(m);
                    slots.extend_from_slice(&tuple[..k - 1]);
                    slots.push(*h);
                    slots.extend_from_slice(&tuple[k + 1..]);
                    let s = BigInt::from(sign(k as i64 - 1 + prefix)) * c;
                    acc = acc.add(&sh.sh(&slots).scale(&s));
                }
                let split = sh
                    .sh(&tuple[..k])
                    .compose(&beta_alpha.compose(&sh.sh(&tuple[k..])));
                acc = acc.add(&split.scale_i64(sign(k as i64 + prefix)));
            }
            prefix += tuple[k].deg as i64;
        }
        acc
    }

    fn check_sh_rule<X: Term>(
        ring: &Arc<Dga>,
        red_source: &Complex<X>,
        sh: &Arc<ShuffleOp<X>>,
        beta_alpha: &GradedMap<X, X>,
        tuples: &[Vec<RingGen>],
        max_degree: i64,
    ) {
        for tuple in tuples {
            let lhs = graded_commutator(&sh.sh(tuple), red_source.diff(), red_source.diff());
            let rhs = sh_rule_rhs(ring, sh, beta_alpha, tuple);
            for n in 0..=max_degree {
                for w in red_source.basis(n).unwrap().iter() {
                    let e = Lin::term(w.clone());
                    assert_eq!(
                        lhs.apply(&e),
                        rhs.apply(&e),
                        "compatibility rule fails on {tuple:?} at {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn sh_satisfies_the_transfer_compatibility_rule() {
        let (ring, red, action) = bar_point_setup(2);
        let sh = ShuffleOp::new(&action, &red.eta);
        let ba = red.beta.compose(&red.alpha);
        let one = ring.unit();
        let g = ring.generator(1);
        let mut tuples: Vec<Vec<RingGen>> = Vec::new();
        for len in 1..=3usize {
            for bits in 0..(2u32.pow(len as u32)) {
                let t: Vec<RingGen> = (0..len)
                    .map(|i| if bits >> i & 1 == 1 { g } else { one })
                    .collect();
                tuples.push(t);
            }
        }
        check_sh_rule(&ring, &red.source, &sh, &ba, &tuples, 3);
    }

    #[test]
    fn sh_compatibility_holds_for_a_three_element_group() {
        let (ring, red, action) = bar_point_setup(3);
        let sh = ShuffleOp::new(&action, &red.eta);
        let ba = red.beta.compose(&red.alpha);
        let g = ring.generator(1);
        let h = ring.generator(2);
        let tuples = vec![vec![g], vec![g, h], vec![h, g], vec![g, g]];
        check_sh_rule(&ring, &red.source, &sh, &ba, &tuples, 2);
    }

    #[test]
    fn sh_compatibility_sees_the_ring_differential() {
        // Over a ring with a genuine differential the entry-derivative family
        // is nonzero; with the identity reduction the rule reduces to the
        // Leibniz rule for the strict action.
        let ring = Dga::test_ring();
        let r = Arc::clone(&ring);
        let diff = GradedMap::new(-1, move |t: &ModTerm| {
            r.diff_gen(&t.gen)
                .bind(|h| Lin::term(ModTerm::new(*h, 0, 0)))
        });
        let r2 = Arc::clone(&ring);
        let basis: Arc<dyn Fn(i64) -> Vec<ModTerm> + Send + Sync> = Arc::new(move |n| {
            r2.generators_of_degree(n)
                .into_iter()
                .map(|g| ModTerm::new(g, 0, 0))
                .collect()
        });
        let module = Complex::new("R as module", diff, Some(basis), None);
        let red = identity_reduction(&module);
        let action = strict_action(&module, &ring);
        let sh = ShuffleOp::new(&action, &red.eta);
        let ba = red.beta.compose(&red.alpha);
        let a = ring.generator(1);
        let one = ring.unit();
        let tuples = vec![vec![a], vec![a, a], vec![a, one], vec![one, a], vec![a, a, a]];
        check_sh_rule(&ring, &module, &sh, &ba, &tuples, 2);
    }

    #[test]
    fn transfer_along_the_identity_keeps_the_action() {
        let ring = zn_ring(3);
        let module = point_module(&ring);
        let red = identity_reduction(&module);
        let action = strict_action(&module, &ring);
        let cfg = SampleCfg::new(2, 6, 5);
        let moved = transfer_basic(&red, &action, &cfg).unwrap();
        let g = ring.generator(1);
        let h = ring.generator(2);
        for t in module.basis(0).unwrap().iter() {
            for tuple in [vec![g], vec![h], vec![g, h], vec![g, g, h]] {
                assert_eq!(moved.act_tuple(&tuple, t), action.act_tuple(&tuple, t));
            }
        }
    }

    #[test]
    fn transfer_to_a_free_module_is_strict() {
        let (ring, red, action) = bar_point_setup(3);
        let cfg = SampleCfg::new(3, 8, 11);
        let moved = transfer_basic(&red, &action, &cfg).unwrap();
        let g = ring.generator(1);
        let h = ring.generator(2);
        let canon = strict_action(&red.target, &ring);
        for t in red.target.basis(0).unwrap().iter() {
            assert_eq!(moved.act_tuple(&[g], t), canon.act_tuple(&[g], t));
            assert_eq!(moved.act_tuple(&[h], t), canon.act_tuple(&[h], t));
            // η∘β = 0 and ring linearity of β force every double block to die.
            assert!(moved.act_tuple(&[g, h], t).is_zero());
            assert!(moved.act_tuple(&[g, g], t).is_zero());
        }
    }

    /// The circle with the free action of the two-element group: a free
    /// module `R·ē₀ ⊕ R·ē₁` with `∂ē₁ = g·ē₀ − ē₀`, reduced onto its
    /// homology `Z ⊕ Z[1]`.
    fn circle_reduction(
        ring: &Arc<Dga>,
    ) -> (Complex<ModTerm>, Complex<ModTerm>, Reduction<ModTerm, ModTerm>) {
        let g = ring.generator(1);
        let unit = ring.unit();
        let r = Arc::clone(ring);
        let diff = GradedMap::new(-1, move |t: &ModTerm| {
            if t.bdeg == 1 {
                let moved = r
                    .prod_gen(&t.gen, &r.generator(1))
                    .bind(|h| Lin::term(ModTerm::new(*h, 0, 0)));
                moved.sub(&Lin::term(ModTerm::new(t.gen, 0, 0)))
            } else {
                Lin::zero()
            }
        });
        let r2 = Arc::clone(ring);
        let basis: Arc<dyn Fn(i64) -> Vec<ModTerm> + Send + Sync> = Arc::new(move |n| {
            if n == 0 || n == 1 {
                r2.generators_of_degree(0)
                    .into_iter()
                    .map(|gg| ModTerm::new(gg, n as u32, 0))
                    .collect()
            } else {
                Vec::new()
            }
        });
        let source = Complex::new("C(S¹)", diff, Some(basis), None);

        let nb: Arc<dyn Fn(i64) -> Vec<ModTerm> + Send + Sync> = {
            let unit = unit;
            Arc::new(move |n| {
                if n == 0 || n == 1 {
                    vec![ModTerm::new(unit, n as u32, 0)]
                } else {
                    Vec::new()
                }
            })
        };
        let target = Complex::new("H(S¹)", GradedMap::zero(-1), Some(nb), None);

        let alpha = GradedMap::new(0, move |t: &ModTerm| {
            if t.bdeg == 0 {
                Lin::term(ModTerm::new(unit, 0, 0))
            } else if t.gen == g {
                Lin::term(ModTerm::new(unit, 1, 0))
            } else {
                Lin::zero()
            }
        });
        let beta = GradedMap::new(0, move |t: &ModTerm| {
            if t.bdeg == 0 {
                Lin::term(ModTerm::new(unit, 0, 0))
            } else {
                Lin::term(ModTerm::new(unit, 1, 0)).add(&Lin::term(ModTerm::new(g, 1, 0)))
            }
        });
        let eta = GradedMap::new(1, move |t: &ModTerm| {
            if t.bdeg == 0 && t.gen == g {
                Lin::term(ModTerm::new(unit, 1, 0))
            } else {
                Lin::zero()
            }
        });
        let red = Reduction::new(source.clone(), target.clone(), alpha, beta, eta);
        (source, target, red)
    }

    #[test]
    fn transfer_produces_the_circle_coherent_structure() {
        let ring = zn_ring(2);
        let g = ring.generator(1);
        let (source, target, red) = circle_reduction(&ring);
        let cfg = SampleCfg::new(3, 12, 7);
        let report = validate_reduction(&red, &cfg).unwrap();
        assert!(report.passed(), "{}", report.render());

        let action = strict_action(&source, &ring);
        let moved = transfer_basic(&red, &action, &cfg).unwrap();
        let n0 = ModTerm::new(ring.unit(), 0, 0);
        let n1 = ModTerm::new(ring.unit(), 1, 0);

        // Strict part: the group acts trivially on the homology.
        assert_eq!(moved.act_tuple(&[g], &n0), Lin::term(n0.clone()));
        assert_eq!(moved.act_tuple(&[g], &n1), Lin::term(n1.clone()));

        // First coherent correction: (g,g)·n₀ walks once around the circle.
        assert_eq!(moved.act_tuple(&[g, g], &n0), Lin::term(n1.clone()));
        assert!(moved.act_tuple(&[g, g], &n1).is_zero());
        // Longer blocks die because η∘η = 0 leaves nothing to splice.
        assert!(moved.act_tuple(&[g, g, g], &n0).is_zero());

        // The transported family is coherent: the twisted boundary of its
        // tensor construction squares to zero.
        let bn = perturbed_bar(&moved, "B(H S¹)");
        bn.check_d_squared(4).unwrap();
        assert_eq!(target.basis(1).unwrap().len(), 1);
    }

    #[test]
    fn transfer_over_the_full_resolution_collapses_by_degree() {
        // Reducing the two-sided tensor resolution of the trivial module onto
        // that module transports the head action to a family concentrated in
        // degree zero; every higher operation raises degree and so must die.
        let ring = zn_ring(2);
        let zp = z_point(&ring);
        let trivial = RingAction::new(Arc::clone(&ring), |_g, t: &ModTerm| Lin::term(t.clone()));
        let strict = RInftyAction::strict(&zp, &trivial);
        let w = perturbed_bar(&strict, "W");
        let (eps0, zeta0, eta0) = bm_retract_data(&strict);
        let cfg = SampleCfg::new(3, 10, 13);
        let red = normalize_homotopy(&w, &zp, eps0, zeta0, eta0, &cfg).unwrap();

        let action = strict_action(&w, &ring);
        let moved = transfer_basic(&red, &action, &cfg).unwrap();
        let g = ring.generator(1);
        let pt = ModTerm::new(ring.unit(), 0, 0);
        assert_eq!(moved.act_tuple(&[g], &pt), Lin::term(pt.clone()));
        assert!(moved.act_tuple(&[g, g], &pt).is_zero());
        assert!(moved.act_tuple(&[g, g, g], &pt).is_zero());
    }

    #[test]
    fn transfer_rejects_a_broken_reduction() {
        let ring = zn_ring(2);
        let module = point_module(&ring);
        let mut red = identity_reduction(&module);
        // Destroy α∘β = id.
        red.beta = GradedMap::zero(0);
        let action = strict_action(&module, &ring);
        let cfg = SampleCfg::new(2, 6, 3);
        match transfer_basic(&red, &action, &cfg) {
            Err(Error::Precondition { op, reason }) => {
                assert_eq!(op, "transfer_basic");
                assert!(reason.contains("alpha_beta"), "unexpected reason: {reason}");
            }
            Err(other) => panic!("unexpected error: {other}"),
            Ok(_) => panic!("expected a precondition error"),
        }
    }

    #[test]
    fn easy_transfer_matches_the_closed_form() {
        let ring = zn_ring(3);
        let module = point_module(&ring);
        let cfg = SampleCfg::new(3, 8, 19);
        let red = bar_reduction(&module, &ring, &cfg, 3).unwrap();
        let target_action = strict_action(&module, &ring);
        let easy = transfer_easy(&red, &target_action, &cfg).unwrap();
        let g = ring.generator(1);

        let ba = red.beta.compose(&red.alpha);
        for n in 0..=3 {
            for w in red.source.basis(n).unwrap().iter() {
                let e = Lin::term(w.clone());
                let expected = red
                    .beta
                    .apply(&target_action.act_tuple_lin(&[g], &red.alpha.apply(&e)))
                    .add(&e.sub(&ba.apply(&e)));
                assert_eq!(easy.act_tuple(&[g], w), expected);
                // Double blocks see only the conjugated operation, which is
                // zero for a strict target action.
                assert!(easy.act_tuple(&[g, g], w).is_zero());
            }
        }
    }

    #[test]
    fn easy_transfer_is_linear_over_the_reduction_maps() {
        let ring = zn_ring(3);
        let module = point_module(&ring);
        let cfg = SampleCfg::new(3, 8, 19);
        let red = bar_reduction(&module, &ring, &cfg, 3).unwrap();
        let target_action = strict_action(&module, &ring);
        let easy = transfer_easy(&red, &target_action, &cfg).unwrap();
        let g = ring.generator(1);
        let act_src = {
            let e = easy.clone();
            GradedMap::new(0, move |w: &BarTerm<ModTerm>| e.act_tuple(&[g], w))
        };
        let act_tgt = {
            let t = target_action.clone();
            GradedMap::new(0, move |x: &ModTerm| t.act_tuple(&[g], x))
        };

        // α (r·x) = r·(αx), (r·x traversing β likewise), and η commutes with
        // the operation — all on the nose, not merely up to homotopy.
        for n in 0..=3 {
            for w in red.source.basis(n).unwrap().iter() {
                let e = Lin::term(w.clone());
                assert_eq!(red.alpha.apply(&act_src.apply(&e)), act_tgt.apply(&red.alpha.apply(&e)));
                assert_eq!(red.eta.apply(&act_src.apply(&e)), act_src.apply(&red.eta.apply(&e)));
                let comm = graded_commutator(&act_src, red.source.diff(), red.source.diff());
                assert!(comm.apply(&e).is_zero(), "operation is not a chain map at {w}");
            }
            for x in red.target.basis(n).unwrap().iter() {
                let e = Lin::term(x.clone());
                assert_eq!(red.beta.apply(&act_tgt.apply(&e)), act_src.apply(&red.beta.apply(&e)));
            }
        }
    }

    #[test]
    fn easy_transfer_of_a_trivial_action_is_trivial() {
        let ring = zn_ring(2);
        let (source, target, red) = circle_reduction(&ring);
        let trivial = RingAction::new(Arc::clone(&ring), |_g, t: &ModTerm| Lin::term(t.clone()));
        let target_action = RInftyAction::strict(&target, &trivial);
        let cfg = SampleCfg::new(3, 10, 23);
        let easy = transfer_easy(&red, &target_action, &cfg).unwrap();
        let g = ring.generator(1);
        // β (id) α + ε(g)(id − βα) = id, for every group element.
        for n in 0..=1 {
            for t in source.basis(n).unwrap().iter() {
                assert_eq!(easy.act_tuple(&[g], t), Lin::term(t.clone()));
            }
        }
    }

    #[test]
    fn easy_transfer_needs_an_augmentation() {
        let ring = Dga::test_ring();
        let r = Arc::clone(&ring);
        let basis: Arc<dyn Fn(i64) -> Vec<ModTerm> + Send + Sync> = Arc::new(move |n| {
            r.generators_of_degree(n)
                .into_iter()
                .map(|g| ModTerm::new(g, 0, 0))
                .collect()
        });
        let r2 = Arc::clone(&ring);
        let diff = GradedMap::new(-1, move |t: &ModTerm| {
            r2.diff_gen(&t.gen)
                .bind(|h| Lin::term(ModTerm::new(*h, 0, 0)))
        });
        let module = Complex::new("R as module", diff, Some(basis), None);
        let red = identity_reduction(&module);
        let action = strict_action(&module, &ring);
        let cfg = SampleCfg::new(2, 4, 3);
        match transfer_easy(&red, &action, &cfg) {
            Err(Error::MissingAugmentation(_)) => {}
            Err(other) => panic!("unexpected error: {other}"),
            Ok(_) => panic!("expected a missing-augmentation error"),
        }
    }
}
