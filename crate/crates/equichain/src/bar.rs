//! Bar constructions.
//!
//! The two-sided bar construction `B(R,R,M)` of a strict module resolves `M`
//! by free `R`-modules, and the perturbed bar construction `BM` does the same
//! for a homotopy module, whose higher action tuples `(r₀,…,r_m)x` twist the
//! differential.  Both carry a strict left `R`-action on the leading slot,
//! which is what makes them useful for transporting equivariance.

use crate::complex::{canonical_action, Complex, FreeModuleTerm, RingAction};
use crate::dga::Dga;
use crate::element::{sign, Lin, RingGen, Term};
use crate::error::{Error, Result};
use crate::hom::GradedMap;
use crate::reduction::{build_reduction, Filler, Reduction, SampleCfg};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

/// A basis word `r₀|r₁|…|r_m ⊗ x` of a bar construction: a leading ring
/// generator, a (possibly empty) list of barred ring generators, and a basis
/// term of the underlying module.
///
/// The degree is `m + |r₀| + … + |r_m| + |x|`: every bar contributes a
/// suspension.  Unit entries between bars are kept — the construction is
/// unnormalized.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BarTerm<X: Term> {
    pub head: RingGen,
    pub bars: Vec<RingGen>,
    pub x: X,
}

impl<X: Term> BarTerm<X> {
    pub fn new(head: RingGen, bars: Vec<RingGen>, x: X) -> Self {
        BarTerm { head, bars, x }
    }

    /// Number of bars `m`.
    pub fn word_length(&self) -> usize {
        self.bars.len()
    }

    /// Total degree of the slots `r₀ … r_{k−1}` (the head counts as slot 0).
    fn prefix_deg(&self, k: usize) -> i64 {
        if k == 0 {
            return 0;
        }
        let mut s = self.head.deg as i64;
        for b in &self.bars[..k - 1] {
            s += b.deg as i64;
        }
        s
    }
}

impl<X: Term> PartialOrd for BarTerm<X> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<X: Term> Ord for BarTerm<X> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.bars.len().cmp(&other.bars.len()))
            .then_with(|| self.head.cmp(&other.head))
            .then_with(|| self.bars.cmp(&other.bars))
            .then_with(|| self.x.cmp(&other.x))
    }
}

impl<X: Term> fmt::Display for BarTerm<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for b in &self.bars {
            write!(f, "|{b}")?;
        }
        write!(f, "⊗{}", self.x)
    }
}

impl<X: Term> Term for BarTerm<X> {
    fn degree(&self) -> i64 {
        self.bars.len() as i64 + self.prefix_deg(self.bars.len() + 1) + self.x.degree()
    }
}

impl<X: Term> FreeModuleTerm for BarTerm<X> {
    type Key = (Vec<RingGen>, X);

    fn split(&self) -> (RingGen, Self::Key) {
        (self.head, (self.bars.clone(), self.x.clone()))
    }

    fn join(g: RingGen, key: &Self::Key) -> Self {
        BarTerm::new(g, key.0.clone(), key.1.clone())
    }
}

/// The dimension `(len − 1) + Σ|r_i|` of an action tuple: the degree by which
/// acting with it shifts the module.
pub fn tuple_dimension(tuple: &[RingGen]) -> i64 {
    tuple.len() as i64 - 1 + tuple.iter().map(|r| r.deg as i64).sum::<i64>()
}

struct ActionInner<X: Term> {
    ring: Arc<Dga>,
    complex: Complex<X>,
    act: Arc<dyn Fn(&[RingGen], &X) -> Lin<X> + Send + Sync>,
    memo: Mutex<HashMap<(Vec<RingGen>, X), Lin<X>>>,
}

/// A homotopy-module action on a complex: a computable assignment of a
/// degree-shifting operator to every tuple `(r₀,…,r_m)` of ring generators.
///
/// Normalization is applied before the raw assignment is consulted: the
/// single-unit tuple acts as the identity, and any longer tuple containing
/// the unit acts as zero.  Coherence of the assignment is not checked here —
/// it is witnessed operationally by `∂² = 0` on the perturbed bar complex.
pub struct RInftyAction<X: Term> {
    inner: Arc<ActionInner<X>>,
}

impl<X: Term> Clone for RInftyAction<X> {
    fn clone(&self) -> Self {
        RInftyAction {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<X: Term> RInftyAction<X> {
    pub fn new(
        ring: Arc<Dga>,
        complex: Complex<X>,
        act: impl Fn(&[RingGen], &X) -> Lin<X> + Send + Sync + 'static,
    ) -> Self {
        RInftyAction {
            inner: Arc::new(ActionInner {
                ring,
                complex,
                act: Arc::new(act),
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// The strict action induced by an ordinary module structure: singleton
    /// tuples act through the ring action and all longer tuples act as zero.
    pub fn strict(module: &Complex<X>, action: &RingAction<X>) -> Self {
        let a = action.clone();
        RInftyAction::new(
            Arc::clone(&a.ring),
            module.clone(),
            move |tuple: &[RingGen], x: &X| {
                if tuple.len() == 1 {
                    a.act_gen(&tuple[0], x)
                } else {
                    Lin::zero()
                }
            },
        )
    }

    pub fn ring(&self) -> &Arc<Dga> {
        &self.inner.ring
    }

    pub fn complex(&self) -> &Complex<X> {
        &self.inner.complex
    }

    /// Applies the tuple `(r₀,…,r_m)` to a basis term, after normalization.
    pub fn act_tuple(&self, tuple: &[RingGen], x: &X) -> Lin<X> {
        assert!(!tuple.is_empty(), "action tuples have at least one entry");
        let ring = &self.inner.ring;
        if tuple.len() == 1 && ring.is_unit(&tuple[0]) {
            return Lin::term(x.clone());
        }
        if tuple.len() >= 2 && tuple.iter().any(|r| ring.is_unit(r)) {
            return Lin::zero();
        }
        let key = (tuple.to_vec(), x.clone());
        if let Some(v) = self.inner.memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = (self.inner.act)(tuple, x);
        debug_assert!(
            v.degree().is_none_or(|d| d == x.degree() + tuple_dimension(tuple)),
            "action of {tuple:?} shifted {x} to the wrong degree"
        );
        self.inner.memo.lock().unwrap().insert(key, v.clone());
        v
    }

    /// Linear extension of `act_tuple` in the module argument.
    pub fn act_tuple_lin(&self, tuple: &[RingGen], e: &Lin<X>) -> Lin<X> {
        e.bind(|x| self.act_tuple(tuple, x))
    }

    /// The tuple operation packaged as a graded operator on the module.
    pub fn as_operator(&self, tuple: &[RingGen]) -> GradedMap<X, X> {
        let a = self.clone();
        let t = tuple.to_vec();
        GradedMap::new(tuple_dimension(tuple), move |x: &X| a.act_tuple(&t, x))
    }
}

fn bar_diff_term<X: Term>(action: &RInftyAction<X>, w: &BarTerm<X>) -> Lin<BarTerm<X>> {
    let ring = action.ring();
    let m = w.bars.len();
    let mut out: Lin<BarTerm<X>> = Lin::zero();

    // Ring slots: (−1)^{k+|r₀…r_{k−1}|} · r₀|…|∂r_k|…|r_m ⊗ x.
    for k in 0..=m {
        let g = if k == 0 { w.head } else { w.bars[k - 1] };
        let dg = ring.diff_gen(&g);
        if dg.is_zero() {
            continue;
        }
        let s = sign(k as i64 + w.prefix_deg(k));
        out = out.add(
            &dg.bind(|h| {
                let mut nw = w.clone();
                if k == 0 {
                    nw.head = *h;
                } else {
                    nw.bars[k - 1] = *h;
                }
                Lin::term(nw)
            })
            .scale_i64(s),
        );
    }

    // Module slot: (−1)^{m+|r₀…r_m|} · r₀|…|r_m ⊗ ∂x.
    let dx = action.complex().diff().apply_term(&w.x);
    if !dx.is_zero() {
        let s = sign(m as i64 + w.prefix_deg(m + 1));
        out = out.add(
            &dx.bind(|y| Lin::term(BarTerm::new(w.head, w.bars.clone(), y.clone())))
                .scale_i64(s),
        );
    }

    // Merges: (−1)^{k−1+|r₀…r_{k−1}|} · r₀|…|r_{k−1}·r_k|…|r_m ⊗ x.
    for k in 1..=m {
        let left = if k == 1 { w.head } else { w.bars[k - 2] };
        let prod = ring.prod_gen(&left, &w.bars[k - 1]);
        if prod.is_zero() {
            continue;
        }
        let s = sign(k as i64 - 1 + w.prefix_deg(k));
        out = out.add(
            &prod
                .bind(|h| {
                    if k == 1 {
                        Lin::term(BarTerm::new(*h, w.bars[1..].to_vec(), w.x.clone()))
                    } else {
                        let mut bars = w.bars.clone();
                        bars.remove(k - 1);
                        bars[k - 2] = *h;
                        Lin::term(BarTerm::new(w.head, bars, w.x.clone()))
                    }
                })
                .scale_i64(s),
        );
    }

    // Tail actions: (−1)^{k+|r₀…r_{k−1}|} · r₀|…|r_{k−1} ⊗ (r_k,…,r_m)x.
    for k in 1..=m {
        let ax = action.act_tuple(&w.bars[k - 1..], &w.x);
        if ax.is_zero() {
            continue;
        }
        let s = sign(k as i64 + w.prefix_deg(k));
        let kept = w.bars[..k - 1].to_vec();
        out = out.add(
            &ax.bind(|y| Lin::term(BarTerm::new(w.head, kept.clone(), y.clone())))
                .scale_i64(s),
        );
    }

    out
}

/// Per-degree basis of a bar construction: all words `r₀|…|r_m ⊗ x` of the
/// given total degree, unit entries included.
pub fn bar_basis<X: Term>(action: &RInftyAction<X>, n: i64) -> Vec<BarTerm<X>> {
    let mut out = Vec::new();
    if n < 0 {
        return out;
    }
    let ring = action.ring();
    let module = action.complex();
    let max_gen = ring.max_gen_degree();
    // Each bar contributes at least 1 to the degree, so m ≤ n.
    for m in 0..=(n as usize) {
        let mut slots: Vec<RingGen> = Vec::with_capacity(m + 1);
        fill_slots(&mut out, ring, module, m, n - m as i64, max_gen, &mut slots);
    }
    out.sort();
    out
}

fn fill_slots<X: Term>(
    out: &mut Vec<BarTerm<X>>,
    ring: &Arc<Dga>,
    module: &Complex<X>,
    m: usize,
    budget: i64,
    max_gen: i64,
    slots: &mut Vec<RingGen>,
) {
    if slots.len() == m + 1 {
        let xs = module
            .basis(budget)
            .expect("bar basis requested beyond the underlying module's enumeration");
        for x in xs.iter() {
            out.push(BarTerm::new(slots[0], slots[1..].to_vec(), x.clone()));
        }
        return;
    }
    for d in 0..=budget.min(max_gen) {
        for g in ring.generators_of_degree(d) {
            slots.push(g);
            fill_slots(out, ring, module, m, budget - d, max_gen, slots);
            slots.pop();
        }
    }
}

/// The perturbed bar construction `BM` of a homotopy module.
///
/// The differential on a word `r₀|r₁|…|r_m ⊗ x` is the sum of four families:
///
/// * `(−1)^{k+|r₀…r_{k−1}|} · r₀|…|∂r_k|…|r_m ⊗ x` for `0 ≤ k ≤ m`;
/// * `(−1)^{m+|r₀…r_m|} · r₀|…|r_m ⊗ ∂x`;
/// * `(−1)^{k−1+|r₀…r_{k−1}|} · r₀|…|r_{k−1}·r_k|…|r_m ⊗ x` for `1 ≤ k ≤ m`;
/// * `(−1)^{k+|r₀…r_{k−1}|} · r₀|…|r_{k−1} ⊗ (r_k,…,r_m)x` for `1 ≤ k ≤ m`.
///
/// For a strict action the last family collapses to its `k = m` term and the
/// result is the ordinary two-sided bar construction.  The complex inherits
/// the underlying module's basis enumeration and truncation cap, and carries
/// a strict left ring action on the leading slot.
pub fn perturbed_bar<X: Term>(action: &RInftyAction<X>, name: impl Into<String>) -> Complex<BarTerm<X>> {
    let a = action.clone();
    let diff = GradedMap::new(-1, move |w: &BarTerm<X>| bar_diff_term(&a, w)).memoized();
    let basis = if action.complex().has_basis() {
        let a2 = action.clone();
        let f: Arc<dyn Fn(i64) -> Vec<BarTerm<X>> + Send + Sync> =
            Arc::new(move |n| bar_basis(&a2, n));
        Some(f)
    } else {
        None
    };
    Complex::new(name.into(), diff, basis, action.complex().cap())
}

/// The two-sided bar construction `B(R,R,M)` of a strict module.
pub fn bar_complex<X: Term>(module: &Complex<X>, action: &RingAction<X>) -> Complex<BarTerm<X>> {
    perturbed_bar(
        &RInftyAction::strict(module, action),
        format!("B({})", module.name()),
    )
}

/// The deformation-retract data `(ε₀, ζ₀, η₀)` exhibiting the underlying
/// module inside its perturbed bar construction:
///
/// * `ε₀(r₀|…|r_m ⊗ x) = (r₀,…,r_m)x` (the whole word acts),
/// * `ζ₀(x) = 1 ⊗ x`,
/// * `η₀(r₀|…|r_m ⊗ x) = 1|r₀|…|r_m ⊗ x`,
///
/// satisfying `ε₀ζ₀ = id` and `[∂, η₀] = id − ζ₀ε₀`.  None of the three maps
/// is linear over the ring.
pub fn bm_retract_data<X: Term>(
    action: &RInftyAction<X>,
) -> (
    GradedMap<BarTerm<X>, X>,
    GradedMap<X, BarTerm<X>>,
    GradedMap<BarTerm<X>, BarTerm<X>>,
) {
    let a = action.clone();
    let eps0 = GradedMap::new(0, move |w: &BarTerm<X>| {
        let mut tuple = Vec::with_capacity(w.bars.len() + 1);
        tuple.push(w.head);
        tuple.extend(w.bars.iter().copied());
        a.act_tuple(&tuple, &w.x)
    });
    let unit = action.ring().unit();
    let zeta0 = GradedMap::new(0, move |x: &X| {
        Lin::term(BarTerm::new(unit, Vec::new(), x.clone()))
    });
    let eta0 = GradedMap::new(1, move |w: &BarTerm<X>| {
        let mut bars = Vec::with_capacity(w.bars.len() + 1);
        bars.push(w.head);
        bars.extend(w.bars.iter().copied());
        Lin::term(BarTerm::new(unit, bars, w.x.clone()))
    });
    (eps0, zeta0, eta0)
}

/// The ring-linear reduction `B(R,R,M) ⇒ M` of a strict module.
///
/// The projection is `ε(r₀ ⊗ x) = r₀·x` on length-zero words and zero on
/// longer ones; the section sends the term `g·x̄` to `g ⊗ x̄`; the homotopy is
/// rebuilt through the kernel contraction seeded by the filler
/// `z ↦ 1|z` (valid on cycles killed by `ε`), so the output carries exact
/// side conditions and is linear over the ring throughout.
pub fn bar_reduction<X: FreeModuleTerm>(
    module: &Complex<X>,
    ring: &Arc<Dga>,
    cfg: &SampleCfg,
    precheck_degree: i64,
) -> Result<Reduction<BarTerm<X>, X>> {
    if !module.has_basis() {
        return Err(Error::MissingBasis(format!(
            "bar_reduction needs a basis enumeration for {}",
            module.name()
        )));
    }
    let action = canonical_action::<X>(ring);
    let rinf = RInftyAction::strict(module, &action);
    let source = perturbed_bar(&rinf, format!("B({})", module.name()));

    let act = action.clone();
    let alpha = GradedMap::new(0, move |w: &BarTerm<X>| {
        if w.bars.is_empty() {
            act.act_gen(&w.head, &w.x)
        } else {
            Lin::zero()
        }
    });
    let unit = ring.unit();
    let beta0 = GradedMap::new(0, move |x: &X| {
        let (g, key) = x.split();
        Lin::term(BarTerm::new(g, Vec::new(), X::join(unit, &key)))
    });
    let (_, _, eta0) = bm_retract_data(&rinf);
    let filler: Filler<BarTerm<X>> = Arc::new(move |z| Ok(eta0.apply(z)));
    build_reduction(&source, module, ring, alpha, beta0, filler, cfg, precheck_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::ModTerm;
    use crate::group::FiniteGroup;
    use crate::reduction::validate_reduction;

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

    /// `R·ē₁ → R·ē₀` with `∂ē₁ = g₁·ē₀ − ē₀` over a group ring.
    fn two_step_module(ring: &Arc<Dga>) -> Complex<ModTerm> {
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
                    .map(|g| ModTerm::new(g, n as u32, 0))
                    .collect()
            } else {
                Vec::new()
            }
        });
        Complex::new("R⟨ē₀,ē₁⟩", diff, Some(basis), None)
    }

    /// The ring itself as a module over itself (heads are the ring elements).
    fn ring_module(ring: &Arc<Dga>) -> Complex<ModTerm> {
        let r = Arc::clone(ring);
        let diff = GradedMap::new(-1, move |t: &ModTerm| {
            r.diff_gen(&t.gen).bind(|h| Lin::term(ModTerm::new(*h, 0, 0)))
        });
        let r2 = Arc::clone(ring);
        let basis: Arc<dyn Fn(i64) -> Vec<ModTerm> + Send + Sync> = Arc::new(move |n| {
            r2.generators_of_degree(n)
                .into_iter()
                .map(|g| ModTerm::new(g, 0, 0))
                .collect()
        });
        Complex::new(format!("{} as module", ring.name()), diff, Some(basis), None)
    }

    fn strict_bar(module: &Complex<ModTerm>, ring: &Arc<Dga>) -> Complex<BarTerm<ModTerm>> {
        bar_complex(module, &canonical_action::<ModTerm>(ring))
    }

    #[test]
    fn degrees_count_bars_and_slots() {
        let r = zn_ring(2);
        let g = r.generator(1);
        let e = ModTerm::new(r.unit(), 0, 0);
        assert_eq!(BarTerm::new(g, vec![], e.clone()).degree(), 0);
        assert_eq!(BarTerm::new(g, vec![g, r.unit()], e.clone()).degree(), 2);
        let t = Dga::test_ring();
        let a = t.generator(1);
        assert_eq!(a.deg, 1);
        // a|a ⊗ ē: 1 bar + two degree-1 slots.
        assert_eq!(BarTerm::new(a, vec![a], e).degree(), 3);
        let w = BarTerm::new(g, vec![r.unit(), g], ModTerm::new(g, 1, 0));
        assert_eq!(format!("{w}"), "r1|r0|r1⊗r1*b(1,0)");
    }

    #[test]
    fn pinned_boundary_of_one_bar_word() {
        // ∂(1|g ⊗ ē) = g ⊗ ē − 1 ⊗ g·ē over a group ring with x in degree 0.
        let r = zn_ring(2);
        let g = r.generator(1);
        let m = point_module(&r);
        let b = strict_bar(&m, &r);
        let e = ModTerm::new(r.unit(), 0, 0);
        let w = BarTerm::new(r.unit(), vec![g], e.clone());
        let expect = Lin::term(BarTerm::new(g, vec![], e.clone()))
            .sub(&Lin::term(BarTerm::new(r.unit(), vec![], ModTerm::new(g, 0, 0))));
        assert_eq!(b.diff().apply_term(&w), expect);
    }

    #[test]
    fn pinned_boundary_of_bare_tensor_obeys_leibniz() {
        // ∂(r₀ ⊗ x) = ∂r₀ ⊗ x + (−1)^{|r₀|} r₀ ⊗ ∂x, no algebraic terms.
        let t = Dga::test_ring();
        let a = t.generator(1);
        let m = ring_module(&t);
        let b = strict_bar(&m, &t);
        // Word a ⊗ (a·ē): ∂a = 2·1, ∂(a·ē) = 2·ē.
        let w = BarTerm::new(a, vec![], ModTerm::new(a, 0, 0));
        let expect = Lin::single(BarTerm::new(t.unit(), vec![], ModTerm::new(a, 0, 0)), 2.into())
            .add(&Lin::single(
                BarTerm::new(a, vec![], ModTerm::new(t.unit(), 0, 0)),
                (-2).into(),
            ));
        assert_eq!(b.diff().apply_term(&w), expect);
    }

    #[test]
    fn boundary_squares_to_zero_on_full_basis() {
        for ring in [zn_ring(2), zn_ring(3)] {
            for module in [point_module(&ring), two_step_module(&ring)] {
                let b = strict_bar(&module, &ring);
                b.check_d_squared(4).unwrap();
            }
        }
        let t = Dga::test_ring();
        let b = strict_bar(&ring_module(&t), &t);
        b.check_d_squared(4).unwrap();
    }

    /// An independently written strict bar differential: tensor Leibniz terms
    /// plus the alternating merge/tail sum, assembled slot-wise.
    fn strict_reference(
        ring: &Arc<Dga>,
        module: &Complex<ModTerm>,
        w: &BarTerm<ModTerm>,
    ) -> Lin<BarTerm<ModTerm>> {
        let slots: Vec<RingGen> = std::iter::once(w.head).chain(w.bars.iter().copied()).collect();
        let m = slots.len() - 1;
        let rebuild = |slots: &[Lin<RingGen>], x: &Lin<ModTerm>| -> Lin<BarTerm<ModTerm>> {
            // Multilinear expansion of a word with linear-combination slots.
            let mut acc: Vec<(Vec<RingGen>, num_bigint::BigInt)> = vec![(Vec::new(), 1.into())];
            for s in slots {
                let mut next = Vec::new();
                for (prefix, c) in &acc {
                    for (g, d) in s.iter() {
                        let mut p = prefix.clone();
                        p.push(*g);
                        next.push((p, c * d));
                    }
                }
                acc = next;
            }
            let mut out = Lin::zero();
            for (gens, c) in acc {
                out = out.add(&x.bind(|t| {
                    Lin::single(
                        BarTerm::new(gens[0], gens[1..].to_vec(), t.clone()),
                        c.clone(),
                    )
                }));
            }
            out
        };
        let mut total = Lin::zero();
        let lift: Vec<Lin<RingGen>> = slots.iter().map(|g| Lin::term(*g)).collect();
        let xe = Lin::term(w.x.clone());
        // Tensor part.
        let mut exp = 0i64;
        for k in 0..=m {
            let mut ls = lift.clone();
            ls[k] = ring.diff_gen(&slots[k]);
            total = total.add(&rebuild(&ls, &xe).scale_i64(sign(exp + k as i64)));
            exp += slots[k].deg as i64;
        }
        total = total.add(
            &rebuild(&lift, &module.diff().apply_term(&w.x)).scale_i64(sign(exp + m as i64)),
        );
        // Algebraic part: merges, then the tail falling onto the module.
        let mut exp = slots[0].deg as i64;
        for k in 1..=m {
            let mut ls = lift.clone();
            let merged = ring.prod_gen(&slots[k - 1], &slots[k]);
            ls.remove(k);
            ls[k - 1] = merged;
            total = total.add(&rebuild(&ls, &xe).scale_i64(sign(exp + k as i64 - 1)));
            exp += slots[k].deg as i64;
        }
        if m >= 1 {
            let acted = canonical_action::<ModTerm>(ring).act_gen(&slots[m], &w.x);
            let exp_tail = sign(m as i64 + w.prefix_deg(m));
            total = total.add(&rebuild(&lift[..m], &acted).scale_i64(exp_tail));
        }
        total
    }

    #[test]
    fn strict_boundary_matches_independent_formula() {
        for ring in [zn_ring(2), zn_ring(3)] {
            let module = two_step_module(&ring);
            let b = strict_bar(&module, &ring);
            for n in 0..=4 {
                for w in b.basis(n).unwrap().iter() {
                    assert_eq!(
                        b.diff().apply_term(w),
                        strict_reference(&ring, &module, w),
                        "at {w}"
                    );
                }
            }
        }
        let t = Dga::test_ring();
        let module = ring_module(&t);
        let b = strict_bar(&module, &t);
        for n in 0..=4 {
            for w in b.basis(n).unwrap().iter() {
                assert_eq!(
                    b.diff().apply_term(w),
                    strict_reference(&t, &module, w),
                    "at {w}"
                );
            }
        }
    }

    #[test]
    fn basis_counts_match_rank_formula() {
        // |basis(n)| = Σ_m |G|^{m+1} · (Z-rank of M_{n−m}): |G| heads, |G|^m
        // bar entries, and the module's integral basis.  Dividing by |G|
        // recovers the rank of B_n over the group ring.
        let ring = zn_ring(2);
        let module = two_step_module(&ring); // Z-ranks 2, 2, 0, …
        let b = strict_bar(&module, &ring);
        let zrk = |j: i64| -> i64 {
            if j == 0 || j == 1 {
                2
            } else {
                0
            }
        };
        for n in 0..=5i64 {
            let mut expect = 0i64;
            for m in 0..=n {
                expect += 2i64.pow(m as u32 + 1) * zrk(n - m);
            }
            assert_eq!(b.basis(n).unwrap().len() as i64, expect, "degree {n}");
        }
    }

    #[test]
    fn action_normalization_rules() {
        let ring = zn_ring(3);
        let module = point_module(&ring);
        let act = RInftyAction::strict(&module, &canonical_action::<ModTerm>(&ring));
        let e = ModTerm::new(ring.unit(), 0, 0);
        let g = ring.generator(1);
        // (1) acts as the identity, (g,1) and (1,g) act as zero.
        assert_eq!(act.act_tuple(&[ring.unit()], &e), Lin::term(e.clone()));
        assert!(act.act_tuple(&[g, ring.unit()], &e).is_zero());
        assert!(act.act_tuple(&[ring.unit(), g], &e).is_zero());
        // (g) acts by multiplication; (g,g) is strictly zero.
        assert_eq!(act.act_tuple(&[g], &e), Lin::term(ModTerm::new(g, 0, 0)));
        assert!(act.act_tuple(&[g, g], &e).is_zero());
    }

    #[test]
    fn retract_data_identities_hold_exactly() {
        for ring in [zn_ring(2), zn_ring(3)] {
            for module in [point_module(&ring), two_step_module(&ring)] {
                let act = RInftyAction::strict(&module, &canonical_action::<ModTerm>(&ring));
                let b = perturbed_bar(&act, "BM");
                let (eps0, zeta0, eta0) = bm_retract_data(&act);
                // ε₀ζ₀ = id on the module.
                for n in 0..=2 {
                    for x in module.basis(n).unwrap().iter() {
                        assert_eq!(eps0.apply(&zeta0.apply_term(x)), Lin::term(x.clone()));
                    }
                }
                // [∂,η₀] = id − ζ₀ε₀ on every word of degree ≤ 4.
                for n in 0..=4 {
                    for w in b.basis(n).unwrap().iter() {
                        let lhs = b
                            .diff()
                            .apply(&eta0.apply_term(w))
                            .add(&eta0.apply(&b.diff().apply_term(w)));
                        let rhs =
                            Lin::term(w.clone()).sub(&zeta0.apply(&eps0.apply_term(w)));
                        assert_eq!(lhs, rhs, "at {w}");
                    }
                }
            }
        }
    }

    #[test]
    fn equivariance_of_strict_bar_boundary() {
        let ring = zn_ring(3);
        let module = two_step_module(&ring);
        let b = strict_bar(&module, &ring);
        let act = canonical_action::<BarTerm<ModTerm>>(&ring);
        for n in 0..=4 {
            for w in b.basis(n).unwrap().iter() {
                for g in ring.generators_of_degree(0) {
                    assert!(act.is_linear_at(b.diff(), &g, w), "at {g}·({w})");
                }
            }
        }
    }

    #[test]
    fn bar_reduction_validates_and_is_ring_linear() {
        let cfg = SampleCfg::new(5, 15, crate::default_seed());
        for ring in [zn_ring(2)] {
            for module in [point_module(&ring), two_step_module(&ring)] {
                let red = bar_reduction(&module, &ring, &cfg, 3).unwrap();
                let report = validate_reduction(&red, &cfg).unwrap();
                assert!(report.passed(), "{}", report.render());
                // Ring-linearity of the rebuilt homotopy.
                let act = canonical_action::<BarTerm<ModTerm>>(&ring);
                for n in 0..=3 {
                    for w in red.source.basis(n).unwrap().iter() {
                        for g in ring.generators_of_degree(0) {
                            assert!(act.is_linear_at(&red.eta, &g, w), "η at {g}·({w})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bar_reduction_projection_only_sees_length_zero() {
        let ring = zn_ring(2);
        let module = point_module(&ring);
        let red = bar_reduction(&module, &ring, &SampleCfg::new(4, 10, 7), 2).unwrap();
        let g = ring.generator(1);
        let e = ModTerm::new(ring.unit(), 0, 0);
        // ε(g ⊗ ē) = g·ē; ε(1|g ⊗ ē) = 0.
        assert_eq!(
            red.alpha.apply_term(&BarTerm::new(g, vec![], e.clone())),
            Lin::term(ModTerm::new(g, 0, 0))
        );
        assert!(red
            .alpha
            .apply_term(&BarTerm::new(ring.unit(), vec![g], e))
            .is_zero());
    }

    #[test]
    fn bar_reduction_requires_module_basis() {
        let ring = zn_ring(2);
        let diff: GradedMap<ModTerm, ModTerm> = GradedMap::zero(-1);
        let blind: Complex<ModTerm> = Complex::new("blind", diff, None, None);
        let err = bar_reduction(&blind, &ring, &SampleCfg::new(3, 5, 7), 2).unwrap_err();
        assert!(matches!(err, Error::MissingBasis(_)));
    }
}
