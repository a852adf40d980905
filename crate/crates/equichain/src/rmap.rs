//! Homotopy coherent maps between modules with coherent ring actions.
//!
//! A coherent map `f: M → N` of degree `d` is stored through its component
//! family: for each tuple of ring generators `|r₁|⋯|r_ℓ)` a graded map
//! `f_ℓ|r₁|⋯|r_ℓ): M → N` of degree `d + ℓ + |r₁…r_ℓ|`.  The family induces a
//! ring-linear map on the twisted tensor constructions,
//!
//! ```text
//! f(r₀|⋯|r_m ⊗ x) = Σ_{k=0}^m (−1)^{d(k+|r₀…r_k|)} r₀|⋯|r_k ⊗ f_{m−k}|r_{k+1}|⋯|r_m) x,
//! ```
//!
//! and all structure maps of the theory — the retraction `ε*`, the inclusion
//! `ζ*`, the coherent homotopy `η*`, and the strictified legs `α*`, `β*` of a
//! reduction — are families of this shape.  The boundary `δf` of a family is
//! again a family, computed degreewise by a closed formula; `f` is a chain
//! map exactly when `δf = 0`.

use crate::bar::{perturbed_bar, tuple_dimension, BarTerm, RInftyAction};
use crate::complex::canonical_action;
use crate::element::{sign, Lin, RingGen, Term};
use crate::error::{Error, Result};
use crate::hom::{graded_commutator, GradedMap};
use crate::reduction::{Filler, Reduction, SampleCfg};
use crate::transfer::{gate_on_validation, ShuffleOp};
use num_bigint::BigInt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

struct MapInner<S: Term, T: Term> {
    source: RInftyAction<S>,
    target: RInftyAction<T>,
    degree: i64,
    comp: Arc<dyn Fn(&[RingGen]) -> GradedMap<S, T> + Send + Sync>,
    memo: Mutex<HashMap<Vec<RingGen>, GradedMap<S, T>>>,
    realized: Mutex<Option<GradedMap<BarTerm<S>, BarTerm<T>>>>,
}

/// A coherent map, stored as its component family together with the coherent
/// actions on both ends (needed to form boundaries and tensor realizations).
pub struct RInftyMap<S: Term, T: Term> {
    inner: Arc<MapInner<S, T>>,
}

impl<S: Term, T: Term> Clone for RInftyMap<S, T> {
    fn clone(&self) -> Self {
        RInftyMap {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<S: Term, T: Term> RInftyMap<S, T> {
    /// Builds a map from a component family.  The closure receives the bare
    /// tuple `(r₁,…,r_ℓ)` — possibly empty, possibly containing units — and
    /// must return a graded map of degree `d + ℓ + |r₁…r_ℓ|`.
    pub fn new(
        source: &RInftyAction<S>,
        target: &RInftyAction<T>,
        degree: i64,
        comp: impl Fn(&[RingGen]) -> GradedMap<S, T> + Send + Sync + 'static,
    ) -> Self {
        RInftyMap {
            inner: Arc::new(MapInner {
                source: source.clone(),
                target: target.clone(),
                degree,
                comp: Arc::new(comp),
                memo: Mutex::new(HashMap::new()),
                realized: Mutex::new(None),
            }),
        }
    }

    /// The family concentrated in its strict part: `f₀` given, `f_ℓ = 0` for
    /// `ℓ > 0`.  This is a chain map whenever `f₀` is a chain map commuting
    /// with every tuple operation.
    pub fn from_strict(
        source: &RInftyAction<S>,
        target: &RInftyAction<T>,
        f0: GradedMap<S, T>,
    ) -> Self {
        let degree = f0.degree();
        RInftyMap::new(source, target, degree, move |tuple| {
            if tuple.is_empty() {
                f0.clone()
            } else {
                let shift = tuple.len() as i64 + degree_sum(tuple);
                GradedMap::zero(degree + shift)
            }
        })
    }

    pub fn source(&self) -> &RInftyAction<S> {
        &self.inner.source
    }

    pub fn target(&self) -> &RInftyAction<T> {
        &self.inner.target
    }

    pub fn degree(&self) -> i64 {
        self.inner.degree
    }

    /// The component `f_ℓ|r₁|⋯|r_ℓ)`; the empty tuple yields `f₀`.
    pub fn component(&self, tuple: &[RingGen]) -> GradedMap<S, T> {
        if let Some(m) = self.inner.memo.lock().unwrap().get(tuple) {
            return m.clone();
        }
        let m = (self.inner.comp)(tuple).memoized();
        debug_assert_eq!(
            m.degree(),
            self.inner.degree + tuple.len() as i64 + degree_sum(tuple),
            "component degree mismatch on {tuple:?}"
        );
        self.inner
            .memo
            .lock()
            .unwrap()
            .insert(tuple.to_vec(), m.clone());
        m
    }

    /// The strict part `f₀` applied to an element.
    pub fn apply_strict(&self, e: &Lin<S>) -> Lin<T> {
        self.component(&[]).apply(e)
    }

    /// The induced ring-linear map between the tensor constructions; cached
    /// per map.
    pub fn realize(&self) -> GradedMap<BarTerm<S>, BarTerm<T>> {
        if let Some(m) = self.inner.realized.lock().unwrap().as_ref() {
            return m.clone();
        }
        let f = self.clone();
        let d = self.inner.degree;
        let m = GradedMap::new(d, move |w: &BarTerm<S>| {
            let mut acc: Lin<BarTerm<T>> = Lin::zero();
            let mut prefix = w.head.deg as i64;
            for k in 0..=w.bars.len() {
                let s = sign(d * (k as i64 + prefix));
                let comp = f.component(&w.bars[k..]);
                let head = w.head;
                let kept = w.bars[..k].to_vec();
                let piece = comp
                    .apply_term(&w.x)
                    .bind(|y| Lin::term(BarTerm::new(head, kept.clone(), y.clone())));
                acc = acc.add(&piece.scale_i64(s));
                if k < w.bars.len() {
                    prefix += w.bars[k].deg as i64;
                }
            }
            acc
        })
        .memoized();
        *self.inner.realized.lock().unwrap() = Some(m.clone());
        m
    }
}

fn degree_sum(tuple: &[RingGen]) -> i64 {
    tuple.iter().map(|r| r.deg as i64).sum()
}

/// Prefix degree sums: `pre[k] = |r₁…r_k|` (so `pre[0] = 0`).
fn prefix_degrees(tuple: &[RingGen]) -> Vec<i64> {
    let mut pre = Vec::with_capacity(tuple.len() + 1);
    pre.push(0);
    for r in tuple {
        pre.push(pre.last().unwrap() + r.deg as i64);
    }
    pre
}

/// Applies the realized map to an element of the tensor construction.
pub fn rinfty_map_apply<S: Term, T: Term>(
    f: &RInftyMap<S, T>,
    e: &Lin<BarTerm<S>>,
) -> Lin<BarTerm<T>> {
    f.realize().apply(e)
}

/// The identity family on a module: `id₀ = id`, `id_ℓ = 0`.
pub fn identity_map<X: Term>(action: &RInftyAction<X>) -> RInftyMap<X, X> {
    RInftyMap::from_strict(action, action, GradedMap::identity())
}

/// The boundary `δf` of a component family, itself a family of degree
/// `d − 1`.  Componentwise,
///
/// ```text
/// δf_ℓ|r⃗) = [∂, f_ℓ]|r⃗)
///          − Σ_{k=1}^{ℓ}   (−1)^{d(k+|r₁…r_k|)}   (r₁,…,r_k) ∘ f_{ℓ−k}|r_{k+1}|⋯|r_ℓ)
///          − Σ_{k=1}^{ℓ−1} (−1)^{k+d+|r₁…r_k|}   f_{ℓ−1}|r₁|⋯|r_k·r_{k+1}|⋯|r_ℓ)
///          − Σ_{k=0}^{ℓ−1} (−1)^{k+1+d+|r₁…r_k|} f_k|r₁|⋯|r_k) ∘ (r_{k+1},…,r_ℓ),
/// ```
///
/// where `[∂, f_ℓ]|r⃗)` commutes the family with the target differential, the
/// slotwise ring differential, and the source differential.  The family
/// vanishes identically exactly when `f` is a chain map, and its realization
/// is the graded commutator of the realization of `f` with the twisted
/// tensor differentials.
pub fn rinfty_map_delta<S: Term, T: Term>(f: &RInftyMap<S, T>) -> RInftyMap<S, T> {
    let f = f.clone();
    let d = f.degree();
    let source = f.source().clone();
    let target = f.target().clone();
    RInftyMap::new(&source.clone(), &target.clone(), d - 1, move |tuple| {
        let l = tuple.len();
        let ring = Arc::clone(f.source().ring());
        let pre = prefix_degrees(tuple);
        let total = pre[l];

        // [∂, f_ℓ]: target differential, slotwise ring differential with
        // headless prefix signs, and the source differential.
        let mut acc = f.target().complex().diff().compose(&f.component(tuple));
        for k in 0..l {
            for (h, c) in ring.diff_gen(&tuple[k]).iter() {
                let mut slots = tuple.to_vec();
                slots[k] = *h;
                let co = BigInt::from(-sign(d + k as i64 + pre[k])) * c;
                acc = acc.add(&f.component(&slots).scale(&co));
            }
        }
        let module_part = f
            .component(tuple)
            .compose(f.source().complex().diff())
            .scale_i64(-sign(d + l as i64 + total));
        acc = acc.add(&module_part);

        // Leading blocks acting on the target.
        for k in 1..=l {
            let block = f.target().as_operator(&tuple[..k]);
            let piece = block.compose(&f.component(&tuple[k..]));
            acc = acc.add(&piece.scale_i64(-sign(d * (k as i64 + pre[k]))));
        }
        // Merged neighbours.
        for k in 1..l {
            for (h, c) in ring.prod_gen(&tuple[k - 1], &tuple[k]).iter() {
                let mut slots = Vec::with_capacity(l - 1);
                slots.extend_from_slice(&tuple[..k - 1]);
                slots.push(*h);
                slots.extend_from_slice(&tuple[k + 1..]);
                let co = BigInt::from(-sign(k as i64 + d + pre[k])) * c;
                acc = acc.add(&f.component(&slots).scale(&co));
            }
        }
        // Trailing blocks acting on the source.
        for k in 0..l {
            let block = f.source().as_operator(&tuple[k..]);
            let piece = f.component(&tuple[..k]).compose(&block);
            acc = acc.add(&piece.scale_i64(-sign(k as i64 + 1 + d + pre[k])));
        }
        acc
    })
}

/// Checks that every boundary component vanishes on the full bases, for
/// tuples of length at most `max_len` over all ring generators and module
/// degrees up to `max_degree`.
pub fn is_chain_map<S: Term, T: Term>(
    f: &RInftyMap<S, T>,
    max_len: usize,
    max_degree: i64,
) -> Result<bool> {
    let delta = rinfty_map_delta(f);
    let ring = f.source().ring();
    let module = f.source().complex();
    let mut gens: Vec<RingGen> = Vec::new();
    for deg in 0..=ring.max_gen_degree() {
        gens.extend(ring.generators_of_degree(deg));
    }
    let mut tuples: Vec<Vec<RingGen>> = vec![Vec::new()];
    let mut last: Vec<Vec<RingGen>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for t in &last {
            for g in &gens {
                let mut u = t.clone();
                u.push(*g);
                next.push(u);
            }
        }
        tuples.extend(next.iter().cloned());
        last = next;
    }
    for tuple in &tuples {
        let comp = delta.component(tuple);
        for n in 0..=max_degree {
            for x in module.basis(n)?.iter() {
                if !comp.apply_term(x).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Composition of component families:
///
/// ```text
/// (g∘f)_ℓ|r₁|⋯|r_ℓ) = Σ_{k=0}^ℓ (−1)^{|f|(k+|r₁…r_k|)} g_k|r₁|⋯|r_k) ∘ f_{ℓ−k}|r_{k+1}|⋯|r_ℓ).
/// ```
///
/// The realization of the composite is the composite of the realizations.
pub fn rinfty_map_compose<S: Term, T: Term, U: Term>(
    g: &RInftyMap<T, U>,
    f: &RInftyMap<S, T>,
) -> RInftyMap<S, U> {
    let df = f.degree();
    let degree = df + g.degree();
    let f = f.clone();
    let g = g.clone();
    let source = f.source().clone();
    let target = g.target().clone();
    RInftyMap::new(&source.clone(), &target.clone(), degree, move |tuple| {
        let l = tuple.len();
        let pre = prefix_degrees(tuple);
        let mut acc: GradedMap<S, U> =
            GradedMap::zero(degree + l as i64 + pre[l]);
        for k in 0..=l {
            let piece = g.component(&tuple[..k]).compose(&f.component(&tuple[k..]));
            acc = acc.add(&piece.scale_i64(sign(df * (k as i64 + pre[k]))));
        }
        acc
    })
}

/// The canonical strict action on a twisted tensor construction: the ring
/// acts by head multiplication.
pub fn bar_head_action<X: Term>(action: &RInftyAction<X>) -> RInftyAction<BarTerm<X>> {
    let cx = perturbed_bar(action, format!("B({})", action.complex().name()));
    RInftyAction::strict(
        &cx,
        &canonical_action::<BarTerm<X>>(action.ring()),
    )
}

/// The coherent retraction `ε*: BM → M`, with components
///
/// ```text
/// ε_ℓ|r₁|⋯|r_ℓ)(r₀′|⋯|r_m′ ⊗ x) = (−1)^{ℓ+|r₁…r_ℓ|} (r₁,…,r_ℓ,r₀′,…,r_m′) x.
/// ```
pub fn eps_star<X: Term>(action: &RInftyAction<X>) -> RInftyMap<BarTerm<X>, X> {
    let bar = bar_head_action(action);
    let act = action.clone();
    RInftyMap::new(&bar, action, 0, move |tuple| {
        let l = tuple.len() as i64;
        let shift = l + degree_sum(tuple);
        let s = sign(shift);
        let act = act.clone();
        let tuple = tuple.to_vec();
        GradedMap::new(shift, move |w: &BarTerm<X>| {
            let mut whole = tuple.clone();
            whole.push(w.head);
            whole.extend_from_slice(&w.bars);
            act.act_tuple(&whole, &w.x).scale_i64(s)
        })
    })
}

/// The coherent inclusion `ζ*: M → BM`, with components
/// `ζ_ℓ|r₁|⋯|r_ℓ) x = 1|r₁|⋯|r_ℓ ⊗ x`.
pub fn zeta_star<X: Term>(action: &RInftyAction<X>) -> RInftyMap<X, BarTerm<X>> {
    let bar = bar_head_action(action);
    let unit = action.ring().unit();
    RInftyMap::new(action, &bar, 0, move |tuple| {
        let shift = tuple.len() as i64 + degree_sum(tuple);
        let tuple = tuple.to_vec();
        GradedMap::new(shift, move |x: &X| {
            Lin::term(BarTerm::new(unit, tuple.clone(), x.clone()))
        })
    })
}

/// The coherent homotopy `η*: BM → BM` between `ζε` and the identity, with
/// components
///
/// ```text
/// η_ℓ|r₁|⋯|r_ℓ)(r₀′|⋯|r_m′ ⊗ x) = (−1)^{ℓ+1+|r₁…r_ℓ|} 1|r₁|⋯|r_ℓ|r₀′|⋯|r_m′ ⊗ x.
/// ```
///
/// The orientation is fixed so that `δη* = ζε − id` componentwise.
pub fn eta_star<X: Term>(action: &RInftyAction<X>) -> RInftyMap<BarTerm<X>, BarTerm<X>> {
    let bar = bar_head_action(action);
    let unit = action.ring().unit();
    RInftyMap::new(&bar.clone(), &bar, 1, move |tuple| {
        let l = tuple.len() as i64;
        let shift = 1 + l + degree_sum(tuple);
        let s = sign(shift);
        let tuple = tuple.to_vec();
        GradedMap::new(shift, move |w: &BarTerm<X>| {
            let mut bars = tuple.clone();
            bars.push(w.head);
            bars.extend_from_slice(&w.bars);
            Lin::single(BarTerm::new(unit, bars, w.x.clone()), BigInt::from(s))
        })
    })
}

/// Extends the legs of a validated reduction `(α₀, β₀, η): M ⇒ N` to chain
/// map families
///
/// ```text
/// α_ℓ|r₁|⋯|r_ℓ) x = (−1)^{ℓ+|r₁…r_ℓ|} α₀ Sh(r₁,…,r_ℓ) η x,
/// β_ℓ|r₁|⋯|r_ℓ) y = η Sh(r₁,…,r_ℓ) β₀ y,
/// ```
///
/// whose composite `α* ∘ β*` is the identity family on the nose.  The caller
/// supplies the coherent action on the target (normally obtained from
/// [`crate::transfer::transfer_basic`] along the same reduction).
pub fn strictify_reduction_maps<S: Term, T: Term>(
    red: &Reduction<S, T>,
    source_action: &RInftyAction<S>,
    target_action: &RInftyAction<T>,
    cfg: &SampleCfg,
) -> Result<(RInftyMap<S, T>, RInftyMap<T, S>)> {
    gate_on_validation("strictify_reduction_maps", red, cfg)?;
    let sh = ShuffleOp::new(source_action, &red.eta);

    let alpha0 = red.alpha.clone();
    let eta = red.eta.clone();
    let sh_a = Arc::clone(&sh);
    let alpha = RInftyMap::new(source_action, target_action, 0, move |tuple| {
        if tuple.is_empty() {
            return alpha0.clone();
        }
        let shift = tuple.len() as i64 + degree_sum(tuple);
        alpha0
            .compose(&sh_a.sh(tuple).compose(&eta))
            .scale_i64(sign(shift))
    });

    let beta0 = red.beta.clone();
    let eta = red.eta.clone();
    let beta = RInftyMap::new(target_action, source_action, 0, move |tuple| {
        if tuple.is_empty() {
            return beta0.clone();
        }
        eta.compose(&sh.sh(tuple).compose(&beta0))
    });
    Ok((alpha, beta))
}

/// Extends a map of the form `f₀ = [∂, η]` to a chain map family,
///
/// ```text
/// f_ℓ|r₁|⋯|r_ℓ) = (−1)^{d+1} [η, (r₁,…,r_ℓ)],
/// ```
///
/// the graded commutator of the homotopy with the tuple operations (`d` is
/// the degree of `f₀`, one less than the degree of `η`).
pub fn extend_nullhomotopic<S: Term, T: Term>(
    eta: &GradedMap<S, T>,
    source: &RInftyAction<S>,
    target: &RInftyAction<T>,
) -> RInftyMap<S, T> {
    let d = eta.degree() - 1;
    let f0 = graded_commutator(eta, source.complex().diff(), target.complex().diff());
    let eta = eta.clone();
    let src = source.clone();
    let tgt = target.clone();
    RInftyMap::new(source, target, d, move |tuple| {
        if tuple.is_empty() {
            return f0.clone();
        }
        let dim = tuple_dimension(tuple);
        let left = eta.compose(&src.as_operator(tuple));
        let right = tgt.as_operator(tuple).compose(&eta);
        left.sub(&right.scale_i64(sign((d + 1) * dim)))
            .scale_i64(sign(d + 1))
    })
}

/// Builds a cycle filler on `ker α` from a filler for `ker α₀`, where `α` is
/// a coherent chain map out of a twisted tensor construction.
///
/// A cycle `z` of maximal bar length `m` has its length-`m` part in
/// `R⊗(sR)^{⊗m}⊗ker α₀`; contracting the module slot (with the Koszul sign
/// `(−1)^{m+|r₀…r_m|}` for moving the contraction past the word) and
/// subtracting the boundary strictly reduces the maximal length, and the
/// length-zero step terminates exactly.
pub fn kernel_filler<S: Term, T: Term>(
    alpha: &RInftyMap<S, T>,
    filler0: &Filler<S>,
) -> Filler<BarTerm<S>> {
    let bar = perturbed_bar(
        alpha.source(),
        format!("B({})", alpha.source().complex().name()),
    );
    let alpha0 = alpha.component(&[]);
    let filler0 = Arc::clone(filler0);
    Arc::new(move |z: &Lin<BarTerm<S>>| {
        if z.is_zero() {
            return Ok(Lin::zero());
        }
        if !bar.apply_diff(z).is_zero() {
            return Err(Error::NotACycle {
                witness: format!("{z}"),
            });
        }
        let mut rem = z.clone();
        let mut out: Lin<BarTerm<S>> = Lin::zero();
        while !rem.is_zero() {
            let m = rem
                .iter()
                .map(|(w, _)| w.bars.len())
                .max()
                .expect("nonzero element has terms");
            let top = rem.filter(|w| w.bars.len() == m);
            let escape = top.bind(|w| {
                alpha0
                    .apply_term(&w.x)
                    .bind(|y| Lin::term(BarTerm::new(w.head, w.bars.clone(), y.clone())))
            });
            if !escape.is_zero() {
                return Err(Error::KernelComponent {
                    witness: format!("{escape}"),
                });
            }
            // Group the top part by its word prefix and contract each group's
            // module slot.
            let mut groups: HashMap<(RingGen, Vec<RingGen>), Lin<S>> = HashMap::new();
            for (w, c) in top.iter() {
                let e = groups
                    .entry((w.head, w.bars.clone()))
                    .or_insert_with(Lin::zero);
                *e = e.add(&Lin::single(w.x.clone(), c.clone()));
            }
            let mut step: Lin<BarTerm<S>> = Lin::zero();
            for ((head, bars), xs) in groups {
                let filled = filler0(&xs)?;
                let s = sign(m as i64 + head.deg as i64 + degree_sum(&bars));
                let piece = filled.bind(|y| {
                    Lin::term(BarTerm::new(head, bars.clone(), y.clone()))
                });
                step = step.add(&piece.scale_i64(s));
            }
            rem = rem.sub(&bar.apply_diff(&step));
            out = out.add(&step);
            let new_max = rem.iter().map(|(w, _)| w.bars.len()).max();
            if let Some(nm) = new_max {
                if nm >= m {
                    return Err(Error::FillerFailed {
                        degree: z.degree().unwrap_or(0),
                        witness: format!(
                            "length {m} part did not cancel, remainder {rem}"
                        ),
                    });
                }
            }
        }
        Ok(out)
    })
}
