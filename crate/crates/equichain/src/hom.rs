//! Graded maps between term-based graded groups.
//!
//! A [`GradedMap`] is a lazily evaluated homogeneous map of a fixed degree,
//! stored as a shared closure on terms and extended linearly.  Maps compose,
//! add, scale, commute with differentials via [`graded_commutator`], and
//! tensor with the Koszul sign.  A [`GradedMap::memoized`] wrapper caches
//! term evaluations behind a mutex, which is the main performance lever for
//! the recursively defined homotopies elsewhere in the crate.

use crate::element::{sign, Lin, Term};
use num_bigint::BigInt;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

/// A degree-homogeneous linear map defined term-wise.
pub struct GradedMap<S: Term, T: Term> {
    degree: i64,
    f: Arc<dyn Fn(&S) -> Lin<T> + Send + Sync>,
}

impl<S: Term, T: Term> Clone for GradedMap<S, T> {
    fn clone(&self) -> Self {
        GradedMap {
            degree: self.degree,
            f: Arc::clone(&self.f),
        }
    }
}

impl<S: Term, T: Term> fmt::Debug for GradedMap<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedMap(degree {})", self.degree)
    }
}

impl<S: Term, T: Term> GradedMap<S, T> {
    pub fn new(degree: i64, f: impl Fn(&S) -> Lin<T> + Send + Sync + 'static) -> Self {
        GradedMap {
            degree,
            f: Arc::new(f),
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Value on a single term.
    pub fn apply_term(&self, t: &S) -> Lin<T> {
        (self.f)(t)
    }

    /// Linear extension to elements.
    pub fn apply(&self, e: &Lin<S>) -> Lin<T> {
        e.bind(|t| (self.f)(t))
    }

    /// The zero map of a given degree.
    pub fn zero(degree: i64) -> Self {
        GradedMap::new(degree, |_| Lin::zero())
    }

    /// Composition `self ∘ other`; degrees add.
    pub fn compose<R: Term>(&self, other: &GradedMap<R, S>) -> GradedMap<R, T> {
        let f = self.clone();
        let g = other.clone();
        GradedMap::new(f.degree + g.degree, move |t| f.apply(&g.apply_term(t)))
    }

    /// Pointwise sum; both maps must have the same degree.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            self.degree, other.degree,
            "cannot add graded maps of degrees {} and {}",
            self.degree, other.degree
        );
        let f = self.clone();
        let g = other.clone();
        GradedMap::new(f.degree, move |t| f.apply_term(t).add(&g.apply_term(t)))
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_i64(-1))
    }

    /// Scalar multiple.
    pub fn scale(&self, k: &BigInt) -> Self {
        let f = self.clone();
        let k = k.clone();
        GradedMap::new(f.degree, move |t| f.apply_term(t).scale(&k))
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&BigInt::from(k))
    }

    /// Caches term evaluations.  Use on maps that are expensive and hit
    /// repeatedly (recursive homotopies, realized strong-equivalence legs).
    pub fn memoized(&self) -> Self {
        let inner = self.clone();
        let cache: Mutex<HashMap<S, Lin<T>>> = Mutex::new(HashMap::new());
        GradedMap::new(inner.degree, move |t: &S| {
            if let Some(v) = cache.lock().unwrap().get(t) {
                return v.clone();
            }
            let v = inner.apply_term(t);
            cache.lock().unwrap().insert(t.clone(), v.clone());
            v
        })
    }
}

impl<S: Term> GradedMap<S, S> {
    /// The identity map.
    pub fn identity() -> Self {
        GradedMap::new(0, |t: &S| Lin::term(t.clone()))
    }
}

/// Graded commutator `[∂, f] = ∂_target ∘ f - (-1)^{|f|} f ∘ ∂_source`.
///
/// For a chain map this vanishes; for a homotopy `h` of degree one it is the
/// map `h` bounds.  The differentials are passed explicitly so the operation
/// stays independent of any complex bookkeeping.
pub fn graded_commutator<S: Term, T: Term>(
    f: &GradedMap<S, T>,
    source_diff: &GradedMap<S, S>,
    target_diff: &GradedMap<T, T>,
) -> GradedMap<S, T> {
    let left = target_diff.compose(f);
    let right = f.compose(source_diff).scale_i64(sign(f.degree()));
    left.sub(&right)
}

/// A basis term of a tensor product of two graded groups.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Pair<A: Term, B: Term>(pub A, pub B);

impl<A: Term, B: Term> Ord for Pair<A, B> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), &self.0, &self.1).cmp(&(other.degree(), &other.0, &other.1))
    }
}

impl<A: Term, B: Term> PartialOrd for Pair<A, B> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<A: Term, B: Term> Term for Pair<A, B> {
    fn degree(&self) -> i64 {
        self.0.degree() + self.1.degree()
    }
}

impl<A: Term, B: Term> fmt::Display for Pair<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊗{}", self.0, self.1)
    }
}

/// Bilinear pairing of elements into the tensor product.
pub fn tensor_elem<A: Term, B: Term>(a: &Lin<A>, b: &Lin<B>) -> Lin<Pair<A, B>> {
    a.bind(|x| b.bind(|y| Lin::term(Pair(x.clone(), y.clone()))))
}

/// Tensor product of maps with the Koszul sign:
/// `(f ⊗ g)(x ⊗ y) = (-1)^{|g|·|x|} f(x) ⊗ g(y)`.
pub fn tensor_map<A: Term, B: Term, C: Term, D: Term>(
    f: &GradedMap<A, C>,
    g: &GradedMap<B, D>,
) -> GradedMap<Pair<A, B>, Pair<C, D>> {
    let f = f.clone();
    let g = g.clone();
    let gdeg = g.degree();
    GradedMap::new(f.degree() + gdeg, move |p: &Pair<A, B>| {
        let s = sign(gdeg * p.0.degree());
        tensor_elem(&f.apply_term(&p.0), &g.apply_term(&p.1)).scale_i64(s)
    })
}

/// A basis term of a suspension: degree shifted up by one.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Susp<T: Term>(pub T);

impl<T: Term> Ord for Susp<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(&other.0)
    }
}

impl<T: Term> PartialOrd for Susp<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Term> Term for Susp<T> {
    fn degree(&self) -> i64 {
        self.0.degree() + 1
    }
}

impl<T: Term> fmt::Display for Susp<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// Wraps an element into the suspension.
pub fn suspend_elem<T: Term>(e: &Lin<T>) -> Lin<Susp<T>> {
    e.bind(|t| Lin::term(Susp(t.clone())))
}

/// Unwraps a suspended element.
pub fn desuspend_elem<T: Term>(e: &Lin<Susp<T>>) -> Lin<T> {
    e.bind(|t| Lin::term(t.0.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::RingGen;

    fn g(idx: u32, deg: u32) -> RingGen {
        RingGen { idx, deg }
    }

    #[test]
    fn compose_adds_degrees_and_feeds_right_to_left() {
        let f: GradedMap<RingGen, RingGen> =
            GradedMap::new(1, |t: &RingGen| Lin::term(g(t.idx, t.deg + 1)));
        let h: GradedMap<RingGen, RingGen> =
            GradedMap::new(0, |t: &RingGen| Lin::term(*t).scale_i64(2));
        let fh = f.compose(&h);
        assert_eq!(fh.degree(), 1);
        assert_eq!(fh.apply_term(&g(0, 0)), Lin::term(g(0, 1)).scale_i64(2));
    }

    #[test]
    fn commutator_of_chain_map_vanishes() {
        // Differential d(r_idx at degree 1) = r_idx at degree 0; identity is
        // a chain map.
        let d: GradedMap<RingGen, RingGen> = GradedMap::new(-1, |t: &RingGen| {
            if t.deg == 1 {
                Lin::term(g(t.idx, 0))
            } else {
                Lin::zero()
            }
        });
        let id = GradedMap::identity();
        let c = graded_commutator(&id, &d, &d);
        for t in [g(0, 0), g(0, 1), g(3, 1)] {
            assert!(c.apply_term(&t).is_zero());
        }
    }

    #[test]
    fn commutator_sign_for_degree_one_maps() {
        // With |f| = 1 the commutator is ∂f + f∂.
        let d: GradedMap<RingGen, RingGen> = GradedMap::new(-1, |t: &RingGen| {
            if t.deg == 1 {
                Lin::term(g(t.idx, 0))
            } else {
                Lin::zero()
            }
        });
        let h: GradedMap<RingGen, RingGen> = GradedMap::new(1, |t: &RingGen| {
            if t.deg == 0 {
                Lin::term(g(t.idx, 1))
            } else {
                Lin::zero()
            }
        });
        let c = graded_commutator(&h, &d, &d);
        // On degree 0: ∂h = id, h∂ = 0, so [∂,h] = id.
        assert_eq!(c.apply_term(&g(2, 0)), Lin::term(g(2, 0)));
        // On degree 1: ∂h = 0, h∂ = id, and the sign makes [∂,h] = +h∂ = id.
        assert_eq!(c.apply_term(&g(2, 1)), Lin::term(g(2, 1)));
    }

    #[test]
    fn tensor_map_applies_koszul_sign() {
        // f of degree 0, h of odd degree 1: (f⊗h)(x⊗y) picks up (-1)^{|x|}.
        let f: GradedMap<RingGen, RingGen> = GradedMap::identity();
        let h: GradedMap<RingGen, RingGen> =
            GradedMap::new(1, |t: &RingGen| Lin::term(g(t.idx, t.deg + 1)));
        let fh = tensor_map(&f, &h);
        let even = Pair(g(0, 0), g(1, 0));
        let odd = Pair(g(0, 1), g(1, 0));
        assert_eq!(
            fh.apply_term(&even),
            Lin::term(Pair(g(0, 0), g(1, 1)))
        );
        assert_eq!(
            fh.apply_term(&odd),
            Lin::term(Pair(g(0, 1), g(1, 1))).scale_i64(-1)
        );
    }

    #[test]
    fn memoized_map_is_pointwise_equal() {
        let f: GradedMap<RingGen, RingGen> =
            GradedMap::new(0, |t: &RingGen| Lin::term(*t).scale_i64(3));
        let m = f.memoized();
        for t in [g(0, 0), g(1, 2), g(0, 0)] {
            assert_eq!(m.apply_term(&t), f.apply_term(&t));
        }
    }
}
