//! The operadic resolution of a presented ring by formal tuples.
//!
//! For a dga `R`, the resolution ring is generated by formal tuples
//! `(r₀, …, r_m)` of ring generators; its additive basis consists of formal
//! products of such tuples.  A tuple of length `m + 1` has dimension
//! `m + |r₀| + ⋯ + |r_m|`, dimensions add over products, and the relations
//! `(1) = 1` and `(…, 1, …) = 0` (for longer tuples) are applied eagerly so
//! every element is kept in normal form.
//!
//! The differential deletes commas in all ways: it differentiates single
//! entries, merges neighbouring entries with the ring product, and splits a
//! tuple into a product of two shorter tuples.  Projecting `(r) ↦ r` (and all
//! longer tuples to zero) is a dga map onto `R`; the linear section `r ↦ (r)`
//! is not multiplicative, which is the point of the whole construction.
//!
//! The subcomplexes `R^d` spanned by products of total length at most `d`
//! filter the resolution; explicit homotopies collapse each filtration stage
//! onto the previous one, and their composite assembles into a reduction
//! `R^d ⇒ R` returned by [`filtration_reduction`].

use crate::complex::Complex;
use crate::dga::Dga;
use crate::element::{sign, Lin, RingGen, Term};
use crate::hom::{graded_commutator, GradedMap};
use crate::reduction::Reduction;
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;
use std::sync::Arc;

/// A formal tuple of ring generators.  Invariant: at least one entry and,
/// in normal form, no entry is the ring unit (the unit tuple is represented
/// by the empty product instead).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tuple {
    pub rs: Vec<RingGen>,
}

impl Tuple {
    pub fn len(&self) -> usize {
        self.rs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dimension `m + |r₀| + ⋯ + |r_m|` for a tuple of length `m + 1`.
    pub fn dimension(&self) -> i64 {
        (self.rs.len() as i64 - 1) + self.rs.iter().map(|r| r.deg as i64).sum::<i64>()
    }
}

impl Ord for Tuple {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dimension(), self.rs.len(), &self.rs).cmp(&(
            other.dimension(),
            other.rs.len(),
            &other.rs,
        ))
    }
}

impl PartialOrd for Tuple {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// A basis element of the resolution ring: a formal product of tuples.
/// The empty product is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RProd {
    pub fs: Vec<Tuple>,
}

impl RProd {
    pub fn unit() -> Self {
        RProd { fs: Vec::new() }
    }

    pub fn is_unit(&self) -> bool {
        self.fs.is_empty()
    }

    /// Total length: the sum of the factor lengths.
    pub fn total_length(&self) -> usize {
        self.fs.iter().map(|t| t.len()).sum()
    }
}

impl Ord for RProd {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.total_length(), &self.fs).cmp(&(
            other.degree(),
            other.total_length(),
            &other.fs,
        ))
    }
}

impl PartialOrd for RProd {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Term for RProd {
    fn degree(&self) -> i64 {
        self.fs.iter().map(|t| t.dimension()).sum()
    }
}

impl fmt::Display for RProd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.fs.is_empty() {
            return write!(f, "1");
        }
        for t in &self.fs {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A single tuple with ring-element entries, expanded multilinearly and
/// normalized: words containing the unit vanish when the tuple has length at
/// least two, and the length-one unit tuple is the ring unit.
pub fn tuple_elem(ring: &Dga, entries: &[Lin<RingGen>]) -> Lin<RProd> {
    assert!(!entries.is_empty(), "tuples have at least one entry");
    let mut words: Vec<(Vec<RingGen>, BigInt)> = vec![(Vec::new(), BigInt::one())];
    for e in entries {
        let mut next = Vec::with_capacity(words.len() * e.len().max(1));
        for (w, c) in &words {
            for (g, cg) in e.iter() {
                let mut w2 = w.clone();
                w2.push(*g);
                next.push((w2, c * cg));
            }
        }
        words = next;
    }
    let mut pairs = Vec::new();
    for (w, c) in words {
        if w.len() >= 2 && w.iter().any(|g| ring.is_unit(g)) {
            continue;
        }
        if w.len() == 1 && ring.is_unit(&w[0]) {
            pairs.push((RProd::unit(), c));
        } else {
            pairs.push((RProd { fs: vec![Tuple { rs: w }] }, c));
        }
    }
    Lin::from_pairs(pairs)
}

/// The tuple of a fixed list of generators (normalized).
pub fn word(ring: &Dga, gens: &[RingGen]) -> Lin<RProd> {
    let entries: Vec<Lin<RingGen>> = gens.iter().map(|g| Lin::term(*g)).collect();
    tuple_elem(ring, &entries)
}

/// Bilinear product: concatenation of formal products.
pub fn rinfty_mul(a: &Lin<RProd>, b: &Lin<RProd>) -> Lin<RProd> {
    a.bind(|x| {
        b.bind(|y| {
            let mut fs = x.fs.clone();
            fs.extend(y.fs.iter().cloned());
            Lin::term(RProd { fs })
        })
    })
}

/// Product of a list of elements; the empty product is the unit.
pub fn rinfty_mul_all(factors: &[Lin<RProd>]) -> Lin<RProd> {
    let mut acc = Lin::term(RProd::unit());
    for f in factors {
        acc = rinfty_mul(&acc, f);
    }
    acc
}

/// Differential of one tuple of generators.
fn tuple_diff(ring: &Dga, t: &Tuple) -> Lin<RProd> {
    let rs = &t.rs;
    let m = rs.len() - 1;
    let mut acc: Lin<RProd> = Lin::zero();
    let mut prefix_deg = 0i64;
    for k in 0..=m {
        // Entry derivative family.
        let s = sign(k as i64 + prefix_deg);
        let entries: Vec<Lin<RingGen>> = rs
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if i == k {
                    ring.diff_gen(g)
                } else {
                    Lin::term(*g)
                }
            })
            .collect();
        acc = acc.add(&tuple_elem(ring, &entries).scale_i64(s));
        if k >= 1 {
            // Merge family: multiply entries k-1 and k.
            let sm = sign(k as i64 - 1 + prefix_deg);
            let mut entries: Vec<Lin<RingGen>> = Vec::with_capacity(m);
            for (i, g) in rs.iter().enumerate() {
                if i == k - 1 {
                    entries.push(ring.prod_gen(&rs[k - 1], &rs[k]));
                } else if i == k {
                    continue;
                } else {
                    entries.push(Lin::term(*g));
                }
            }
            acc = acc.add(&tuple_elem(ring, &entries).scale_i64(sm));
            // Split family: (r₀,…,r_{k-1})·(r_k,…,r_m).
            let ss = sign(k as i64 + prefix_deg);
            let left = Tuple {
                rs: rs[..k].to_vec(),
            };
            let right = Tuple {
                rs: rs[k..].to_vec(),
            };
            acc = acc.add(&Lin::single(
                RProd {
                    fs: vec![left, right],
                },
                BigInt::from(ss),
            ));
        }
        prefix_deg += rs[k].deg as i64;
    }
    acc
}

/// Differential on the resolution ring: the graded Leibniz rule over the
/// factors, with the tuple differential on each factor.
pub fn rinfty_diff(ring: &Dga, e: &Lin<RProd>) -> Lin<RProd> {
    e.bind(|p| {
        let mut acc: Lin<RProd> = Lin::zero();
        let mut prefix_dim = 0i64;
        for (i, t) in p.fs.iter().enumerate() {
            let dt = tuple_diff(ring, t);
            let before = Lin::term(RProd {
                fs: p.fs[..i].to_vec(),
            });
            let after = Lin::term(RProd {
                fs: p.fs[i + 1..].to_vec(),
            });
            let piece = rinfty_mul(&rinfty_mul(&before, &dt), &after);
            acc = acc.add(&piece.scale_i64(sign(prefix_dim)));
            prefix_dim += t.dimension();
        }
        acc
    })
}

/// The dga projection onto the ring: `(r) ↦ r`, longer tuples to zero,
/// extended multiplicatively over products.
pub fn rinfty_to_r(ring: &Dga, e: &Lin<RProd>) -> Lin<RingGen> {
    e.bind(|p| {
        let mut acc = Lin::term(ring.unit());
        for t in &p.fs {
            if t.len() != 1 {
                return Lin::zero();
            }
            acc = ring.mul(&acc, &Lin::term(t.rs[0]));
        }
        acc
    })
}

/// The linear section `r ↦ (r)` of the projection.  It is not a ring map.
pub fn section(ring: &Dga, e: &Lin<RingGen>) -> Lin<RProd> {
    e.bind(|g| word(ring, &[*g]))
}

/// The stage-`d` homotopy: on products of total length exactly `d` whose
/// first factor is a single `(r)` followed by at least one more factor,
/// `(r)·(r₀,…,r_m)·ρ ↦ (-1)^{|r|+1} (r,r₀,…,r_m)·ρ`; zero on every other
/// basis element of length at most `d`.
pub fn eta_stage(ring: &Arc<Dga>, d: usize) -> GradedMap<RProd, RProd> {
    let _ = ring;
    GradedMap::new(1, move |p: &RProd| {
        if p.total_length() != d || p.fs.len() < 2 || p.fs[0].len() != 1 {
            return Lin::zero();
        }
        let r = p.fs[0].rs[0];
        let mut merged = vec![r];
        merged.extend(p.fs[1].rs.iter().copied());
        let mut fs = vec![Tuple { rs: merged }];
        fs.extend(p.fs[2..].iter().cloned());
        Lin::single(RProd { fs }, BigInt::from(sign(r.deg as i64 + 1)))
    })
}

/// The stage-`d` projection `p_d = id − [∂, η_d]: R^d → R^{d-1}`.
///
/// This is computed literally from the stage homotopy, which makes it a
/// chain map by construction and restricts to the identity on products of
/// length below `d`.  On a leading pair of single factors it merges them,
/// `(r)·(s)·ρ ↦ (r·s)·ρ` plus correction terms supported on products whose
/// first factor is longer.
pub fn projection_stage(ring: &Arc<Dga>, d: usize) -> GradedMap<RProd, RProd> {
    let eta = eta_stage(ring, d);
    let r1 = Arc::clone(ring);
    let diff: GradedMap<RProd, RProd> =
        GradedMap::new(-1, move |p: &RProd| rinfty_diff(&r1, &Lin::term(p.clone())));
    let comm = graded_commutator(&eta, &diff, &diff);
    GradedMap::identity().sub(&comm)
}

/// Enumerates the basis of `R^{max_len}` in a fixed degree: all formal
/// products of unit-free tuples with total length at most `max_len` and
/// total dimension `degree`.
pub fn enumerate_products(ring: &Dga, max_len: usize, degree: i64) -> Vec<RProd> {
    let gens: Vec<RingGen> = ring
        .generators()
        .into_iter()
        .filter(|g| !ring.is_unit(g))
        .collect();
    let mut out = Vec::new();
    let mut factors: Vec<Tuple> = Vec::new();
    fn tuples_of_len(gens: &[RingGen], len: usize, max_dim: i64) -> Vec<Tuple> {
        let mut acc = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &acc {
                let used: i64 = w.iter().map(|g: &RingGen| g.deg as i64).sum();
                for g in gens {
                    if (len as i64 - 1) + used + g.deg as i64 <= max_dim {
                        let mut w2: Vec<RingGen> = w.clone();
                        w2.push(*g);
                        next.push(w2);
                    }
                }
            }
            acc = next;
        }
        acc.into_iter().map(|rs| Tuple { rs }).collect()
    }
    fn rec(
        gens: &[RingGen],
        budget_len: usize,
        budget_dim: i64,
        factors: &mut Vec<Tuple>,
        out: &mut Vec<RProd>,
    ) {
        if budget_dim == 0 {
            out.push(RProd {
                fs: factors.clone(),
            });
        }
        for len in 1..=budget_len {
            for t in tuples_of_len(gens, len, budget_dim) {
                let dim = t.dimension();
                if dim > budget_dim {
                    continue;
                }
                // Avoid infinite recursion on dimension-zero factors by
                // requiring progress in length.
                factors.push(t);
                rec(gens, budget_len - len, budget_dim - dim, factors, out);
                factors.pop();
            }
        }
    }
    if degree >= 0 {
        rec(&gens, max_len, degree, &mut factors, &mut out);
    }
    out.sort();
    out
}

/// The filtration stage `R^d` as a chain complex with basis enumeration.
pub fn filtration_complex(ring: &Arc<Dga>, d: usize) -> Complex<RProd> {
    let r1 = Arc::clone(ring);
    let diff = GradedMap::new(-1, move |p: &RProd| {
        rinfty_diff(&r1, &Lin::term(p.clone()))
    });
    let r2 = Arc::clone(ring);
    let basis: Arc<dyn Fn(i64) -> Vec<RProd> + Send + Sync> =
        Arc::new(move |n| enumerate_products(&r2, d, n));
    Complex::new(format!("R^{d}({})", ring.name()), diff, Some(basis), None)
}

/// The ring itself as a chain complex (basis: generators per degree).
pub fn ring_complex(ring: &Arc<Dga>) -> Complex<RingGen> {
    let r1 = Arc::clone(ring);
    let diff = GradedMap::new(-1, move |g: &RingGen| r1.diff_gen(g));
    let r2 = Arc::clone(ring);
    let basis: Arc<dyn Fn(i64) -> Vec<RingGen> + Send + Sync> =
        Arc::new(move |n| r2.generators_of_degree(n));
    Complex::new(ring.name().to_string(), diff, Some(basis), None)
}

/// The reduction `R^d ⇒ R` assembled from the stage projections and
/// homotopies.
///
/// The projection part composes the stage projections down to `R¹ ≅ R`;
/// the section is `r ↦ (r)`; the homotopy telescopes the stage homotopies.
/// All three side conditions hold on the nose: the homotopy only ever
/// outputs products whose first factor has length at least two, the stage
/// projections preserve that property, and the stage homotopies vanish on
/// such products.
pub fn filtration_reduction(ring: &Arc<Dga>, d: usize) -> Reduction<RProd, RingGen> {
    assert!(d >= 1, "filtration stages start at d = 1");
    let source = filtration_complex(ring, d);
    let target = ring_complex(ring);
    // p₂ ∘ p₃ ∘ … ∘ p_d (apply the top stage first).
    let mut proj: GradedMap<RProd, RProd> = GradedMap::identity();
    for k in (2..=d).rev() {
        proj = projection_stage(ring, k).compose(&proj);
    }
    let r1 = Arc::clone(ring);
    let alpha_tail: GradedMap<RProd, RingGen> =
        GradedMap::new(0, move |p: &RProd| rinfty_to_r(&r1, &Lin::term(p.clone())));
    let alpha = alpha_tail.compose(&proj).memoized();
    let r2 = Arc::clone(ring);
    let beta: GradedMap<RingGen, RProd> =
        GradedMap::new(0, move |g: &RingGen| word(&r2, &[*g]));
    // η = Σ_{k=2}^{d} η_k ∘ (p_{k+1} ∘ … ∘ p_d).
    let mut eta: GradedMap<RProd, RProd> = GradedMap::zero(1);
    let mut tail: GradedMap<RProd, RProd> = GradedMap::identity();
    for k in (2..=d).rev() {
        eta = eta.add(&eta_stage(ring, k).compose(&tail));
        tail = projection_stage(ring, k).compose(&tail);
    }
    let eta = eta.memoized();
    Reduction::new(source, target, alpha, beta, eta)
}
