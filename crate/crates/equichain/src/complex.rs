//! Chain complexes of term-based graded groups.
//!
//! A [`Complex`] bundles a degree `-1` differential with an optional lazy
//! per-degree basis enumeration and an optional truncation bound.  Complexes
//! are non-negatively graded: `basis(n)` is empty for `n < 0` and requests
//! beyond the truncation bound fail with a typed error instead of silently
//! returning partial data.
//!
//! Free modules over a presented ring are handled through
//! [`FreeModuleTerm`]: a term splits into a ring generator acting on an
//! underlying basis key, which gives a canonical left action and a uniform
//! way to extend maps defined on the ring-basis linearly over the ring.

use crate::dga::{fresh_id, Dga};
use crate::element::{sign, Lin, RingGen, Term};
use crate::error::{Error, Result};
use crate::hom::{suspend_elem, GradedMap, Susp};
use num_bigint::BigInt;
use rand::Rng;
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

struct ComplexInner<T: Term> {
    name: String,
    id: u64,
    diff: GradedMap<T, T>,
    basis: Option<Arc<dyn Fn(i64) -> Vec<T> + Send + Sync>>,
    basis_cache: Mutex<HashMap<i64, Arc<Vec<T>>>>,
    cap: Option<i64>,
}

/// A chain complex with differential of degree `-1`.
pub struct Complex<T: Term> {
    inner: Arc<ComplexInner<T>>,
}

impl<T: Term> Clone for Complex<T> {
    fn clone(&self) -> Self {
        Complex {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<T: Term> Debug for Complex<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Complex({})", self.inner.name)
    }
}

impl<T: Term> Complex<T> {
    /// Builds a complex from a differential and an optional basis
    /// enumeration.  The enumeration must return each degree's basis in the
    /// canonical term order.
    pub fn new(
        name: impl Into<String>,
        diff: GradedMap<T, T>,
        basis: Option<Arc<dyn Fn(i64) -> Vec<T> + Send + Sync>>,
        cap: Option<i64>,
    ) -> Self {
        assert_eq!(diff.degree(), -1, "differential must have degree -1");
        Complex {
            inner: Arc::new(ComplexInner {
                name: name.into(),
                id: fresh_id(),
                diff,
                basis,
                basis_cache: Mutex::new(HashMap::new()),
                cap,
            }),
        }
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn id(&self) -> u64 {
        self.inner.id
    }

    pub fn cap(&self) -> Option<i64> {
        self.inner.cap
    }

    pub fn diff(&self) -> &GradedMap<T, T> {
        &self.inner.diff
    }

    pub fn apply_diff(&self, e: &Lin<T>) -> Lin<T> {
        self.inner.diff.apply(e)
    }

    pub fn has_basis(&self) -> bool {
        self.inner.basis.is_some()
    }

    /// Basis of degree `n`, sorted canonically.  Fails when the complex has
    /// no enumeration or `n` exceeds the truncation bound.
    pub fn basis(&self, n: i64) -> Result<Arc<Vec<T>>> {
        if let Some(cap) = self.inner.cap {
            if n > cap {
                return Err(Error::TruncationExceeded {
                    requested: n,
                    cap,
                });
            }
        }
        if n < 0 {
            return Ok(Arc::new(Vec::new()));
        }
        let f = self
            .inner
            .basis
            .as_ref()
            .ok_or_else(|| Error::MissingBasis(self.inner.name.clone()))?;
        if let Some(v) = self.inner.basis_cache.lock().unwrap().get(&n) {
            return Ok(Arc::clone(v));
        }
        let mut v = f(n);
        v.sort();
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]), "basis has duplicates");
        debug_assert!(v.iter().all(|t| t.degree() == n), "basis term off-degree");
        let v = Arc::new(v);
        self.inner
            .basis_cache
            .lock()
            .unwrap()
            .insert(n, Arc::clone(&v));
        Ok(v)
    }

    /// Rank of the degree-`n` part as a free abelian group.
    pub fn rank(&self, n: i64) -> Result<usize> {
        Ok(self.basis(n)?.len())
    }

    /// Exhaustively checks `∂∂ = 0` on all basis terms of degrees
    /// `1..=max_degree`.
    pub fn check_d_squared(&self, max_degree: i64) -> Result<()> {
        for n in 1..=max_degree {
            for t in self.basis(n)?.iter() {
                let dd = self.apply_diff(&self.apply_diff(&Lin::term(t.clone())));
                if !dd.is_zero() {
                    return Err(Error::DifferentialSquare {
                        degree: n,
                        witness: format!("∂∂({t}) = {dd}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// A handle to the same underlying complex with a (tighter) truncation
    /// bound.
    pub fn truncated(&self, cap: i64) -> Complex<T> {
        let basis = self.inner.basis.clone();
        Complex::new(
            format!("{}|≤{}", self.inner.name, cap),
            self.inner.diff.clone(),
            basis,
            Some(cap),
        )
    }
}

/// Suspension: degrees shift up by one and the differential changes sign,
/// `∂(sx) = -s(∂x)`.
pub fn suspend<T: Term>(c: &Complex<T>) -> Complex<Susp<T>> {
    let d = c.diff().clone();
    let diff = GradedMap::new(-1, move |t: &Susp<T>| {
        suspend_elem(&d.apply_term(&t.0)).scale_i64(-1)
    });
    let basis = c.inner.basis.as_ref().map(|b| {
        let b = Arc::clone(b);
        let f: Arc<dyn Fn(i64) -> Vec<Susp<T>> + Send + Sync> =
            Arc::new(move |n| b(n - 1).into_iter().map(Susp).collect());
        f
    });
    Complex::new(
        format!("s{}", c.name()),
        diff,
        basis,
        c.cap().map(|k| k + 1),
    )
}

/// A left action of a presented ring on a term-based graded group,
/// generator by generator.
pub struct RingAction<T: Term> {
    pub ring: Arc<Dga>,
    act: Arc<dyn Fn(&RingGen, &T) -> Lin<T> + Send + Sync>,
}

impl<T: Term> Clone for RingAction<T> {
    fn clone(&self) -> Self {
        RingAction {
            ring: Arc::clone(&self.ring),
            act: Arc::clone(&self.act),
        }
    }
}

impl<T: Term> RingAction<T> {
    pub fn new(
        ring: Arc<Dga>,
        act: impl Fn(&RingGen, &T) -> Lin<T> + Send + Sync + 'static,
    ) -> Self {
        RingAction {
            ring,
            act: Arc::new(act),
        }
    }

    /// Action of a single ring generator on a term.
    pub fn act_gen(&self, r: &RingGen, t: &T) -> Lin<T> {
        (self.act)(r, t)
    }

    /// Bilinear extension to ring elements and module elements.
    pub fn act(&self, r: &Lin<RingGen>, x: &Lin<T>) -> Lin<T> {
        r.bind(|rg| x.bind(|t| (self.act)(rg, t)))
    }

    /// Checks `f(r·x) = (-1)^{|r||f|} r·f(x)` for one generator and term.
    pub fn is_linear_at(&self, f: &GradedMap<T, T>, r: &RingGen, t: &T) -> bool {
        let lhs = f.apply(&self.act_gen(r, t));
        let rhs = self
            .act(&Lin::term(*r), &f.apply_term(t))
            .scale_i64(sign(r.deg as i64 * f.degree()));
        lhs == rhs
    }
}

/// A term of a free module: a ring generator acting on an underlying basis
/// key.  The term with unit head represents the basis element itself.
pub trait FreeModuleTerm: Term {
    type Key: Clone + Ord + Eq + Hash + Debug + Send + Sync + 'static;

    fn split(&self) -> (RingGen, Self::Key);
    fn join(g: RingGen, key: &Self::Key) -> Self;

    fn head(&self) -> RingGen {
        self.split().0
    }

    /// The same term with its head replaced by the ring unit.
    fn with_unit_head(&self, ring: &Dga) -> Self {
        let (_, key) = self.split();
        Self::join(ring.unit(), &key)
    }
}

impl FreeModuleTerm for crate::element::ModTerm {
    type Key = (u32, u32);

    fn split(&self) -> (RingGen, Self::Key) {
        (self.gen, (self.bdeg, self.bidx))
    }

    fn join(g: RingGen, key: &Self::Key) -> Self {
        crate::element::ModTerm::new(g, key.0, key.1)
    }
}

/// The canonical left action on a free module: the ring multiplies the head.
pub fn canonical_action<T: FreeModuleTerm>(ring: &Arc<Dga>) -> RingAction<T> {
    let r = Arc::clone(ring);
    RingAction::new(Arc::clone(ring), move |g: &RingGen, t: &T| {
        let (h, key) = t.split();
        r.prod_gen(g, &h).bind(|p| Lin::term(T::join(*p, &key)))
    })
}

/// Extends a map defined on unit-headed terms linearly over the ring:
/// `f(g·b) = (-1)^{|g|·d} g·f(b)` where `d` is the degree of the map.
///
/// The callback only ever sees unit-headed terms.
pub fn extend_rlinearly<T: FreeModuleTerm>(
    action: &RingAction<T>,
    degree: i64,
    f: Arc<dyn Fn(&T) -> Lin<T> + Send + Sync>,
) -> GradedMap<T, T> {
    let action = action.clone();
    let ring = Arc::clone(&action.ring);
    GradedMap::new(degree, move |t: &T| {
        let (g, key) = t.split();
        let b = T::join(ring.unit(), &key);
        let v = f(&b);
        action
            .act(&Lin::term(g), &v)
            .scale_i64(sign(g.deg as i64 * degree))
    })
}

/// Filters a degree's basis down to the ring-basis (unit-headed terms).
pub fn ring_basis<T: FreeModuleTerm>(
    complex: &Complex<T>,
    ring: &Dga,
    n: i64,
) -> Result<Vec<T>> {
    Ok(complex
        .basis(n)?
        .iter()
        .filter(|t| ring.is_unit(&t.head()))
        .cloned()
        .collect())
}

/// A random element of the span of `basis` with small coefficients; may be
/// zero when the basis is empty.
pub fn random_element<T: Term>(
    basis: &[T],
    rng: &mut impl Rng,
    max_terms: usize,
    max_coeff: i64,
) -> Lin<T> {
    if basis.is_empty() {
        return Lin::zero();
    }
    let k = rng.random_range(1..=max_terms.min(basis.len()));
    let mut pairs = Vec::with_capacity(k);
    for _ in 0..k {
        let t = basis[rng.random_range(0..basis.len())].clone();
        let mut c = 0i64;
        while c == 0 {
            c = rng.random_range(-max_coeff..=max_coeff);
        }
        pairs.push((t, BigInt::from(c)));
    }
    Lin::from_pairs(pairs)
}
