//! Finitely presented differential graded algebras.
//!
//! A [`Dga`] stores an explicit finite generator list with degrees, a unit,
//! full multiplication and differential tables on generators, and an optional
//! augmentation.  The two instances used throughout are integral group rings
//! `ZG` of finite groups (all generators in degree zero, zero differential)
//! and the trivial ring `Z`; a small graded test ring exercises the sign
//! conventions.

use crate::element::{Lin, RingGen};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

pub(crate) fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

/// A generator of a presented ring.
#[derive(Clone, Debug)]
pub struct GenInfo {
    pub label: String,
    pub degree: u32,
}

/// A validated dga presentation.  Always handled behind an `Arc`.
pub struct Dga {
    name: String,
    id: u64,
    gens: Vec<GenInfo>,
    unit: u32,
    /// Differential of each generator, a combination of generators one
    /// degree lower.
    diff: Vec<Lin<RingGen>>,
    /// Product table: `prod[i][j]` is the product of generators `i` and `j`.
    prod: Vec<Vec<Lin<RingGen>>>,
    /// Augmentation values per generator; generators of positive degree map
    /// to zero.  `None` when the ring carries no augmentation.
    aug: Option<Vec<BigInt>>,
    /// Group structure when the ring is an integral group ring.
    group: Option<FiniteGroup>,
}

impl std::fmt::Debug for Dga {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dga")
            .field("name", &self.name)
            .field("gens", &self.gens.len())
            .finish()
    }
}

impl Dga {
    /// Validates and constructs a presentation.
    ///
    /// Checks performed exhaustively on generators:
    /// * the unit has degree zero, `∂1 = 0`, and is a two-sided unit;
    /// * products are degree-additive and associative on all triples;
    /// * `∂` lowers degree by one and squares to zero;
    /// * `∂` is a derivation: for all pairs, the linear extension of `∂`
    ///   applied to `g·h` equals `(∂g)·h + (-1)^{|g|} g·(∂h)`;
    /// * an augmentation, when present, sends the unit to 1, vanishes in
    ///   positive degrees, is multiplicative on degree-zero pairs, and kills
    ///   boundaries of degree-one generators.
    pub fn new(
        name: impl Into<String>,
        gens: Vec<GenInfo>,
        unit: u32,
        diff: Vec<Lin<RingGen>>,
        prod: Vec<Vec<Lin<RingGen>>>,
        aug: Option<Vec<BigInt>>,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        let n = gens.len();
        if n == 0 {
            return Err(Error::InvalidDga("no generators".into()));
        }
        if unit as usize >= n {
            return Err(Error::InvalidDga(format!("unit index {unit} out of range")));
        }
        if diff.len() != n || prod.len() != n || prod.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDga(
                "differential/product tables must cover all generator pairs".into(),
            ));
        }
        let ring = Dga {
            name,
            id: fresh_id(),
            gens,
            unit,
            diff,
            prod,
            aug,
            group: None,
        };
        ring.validate()?;
        Ok(Arc::new(ring))
    }

    fn validate(&self) -> Result<()> {
        let n = self.gens.len();
        let gen = |i: usize| self.generator(i as u32);
        // Index sanity and degree bookkeeping of the stored tables.
        let check_indices = |e: &Lin<RingGen>, what: &str| -> Result<()> {
            for (t, _) in e.iter() {
                if t.idx as usize >= n {
                    return Err(Error::InvalidDga(format!(
                        "{what} references generator index {} out of range",
                        t.idx
                    )));
                }
                if self.gens[t.idx as usize].degree != t.deg {
                    return Err(Error::InvalidDga(format!(
                        "{what} caches degree {} for generator {} of degree {}",
                        t.deg, t.idx, self.gens[t.idx as usize].degree
                    )));
                }
            }
            Ok(())
        };
        if self.gens[self.unit as usize].degree != 0 {
            return Err(Error::InvalidDga("unit must have degree zero".into()));
        }
        if !self.diff[self.unit as usize].is_zero() {
            return Err(Error::InvalidDga("unit must be a cycle".into()));
        }
        for i in 0..n {
            check_indices(&self.diff[i], &format!("∂ of generator {i}"))?;
            let d = self.gens[i].degree as i64;
            if !self.diff[i].is_zero() && self.diff[i].degree() != Some(d - 1) {
                return Err(Error::InvalidDga(format!(
                    "∂ of generator {i} is not homogeneous of degree {}",
                    d - 1
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                check_indices(&self.prod[i][j], &format!("product of generators {i} and {j}"))?;
                let d = (self.gens[i].degree + self.gens[j].degree) as i64;
                let p = &self.prod[i][j];
                if !p.is_zero() && p.degree() != Some(d) {
                    return Err(Error::InvalidDga(format!(
                        "product of generators {i} and {j} is not homogeneous of degree {d}"
                    )));
                }
            }
        }
        // Unit laws.
        for i in 0..n {
            if self.prod[self.unit as usize][i] != Lin::term(gen(i))
                || self.prod[i][self.unit as usize] != Lin::term(gen(i))
            {
                return Err(Error::InvalidDga(format!(
                    "generator {i} violates the unit laws"
                )));
            }
        }
        // Associativity on all generator triples.
        for i in 0..n {
            for j in 0..n {
                let ij = self.prod[i][j].clone();
                for k in 0..n {
                    let left = self.mul(&ij, &Lin::term(gen(k)));
                    let right = self.mul(&Lin::term(gen(i)), &self.prod[j][k].clone());
                    if left != right {
                        return Err(Error::InvalidDga(format!(
                            "associativity fails on the generator triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        // ∂ squares to zero on generators.
        for i in 0..n {
            let dd = self.apply_diff(&self.diff[i]);
            if !dd.is_zero() {
                return Err(Error::InvalidDga(format!(
                    "∂∂ of generator {i} is {dd}, not zero"
                )));
            }
        }
        // Leibniz rule on all generator pairs.
        for i in 0..n {
            for j in 0..n {
                let lhs = self.apply_diff(&self.prod[i][j]);
                let sign = crate::element::sign(self.gens[i].degree as i64);
                let rhs = self
                    .mul(&self.diff[i], &Lin::term(gen(j)))
                    .add(&self.mul(&Lin::term(gen(i)), &self.diff[j]).scale_i64(sign));
                if lhs != rhs {
                    return Err(Error::InvalidDga(format!(
                        "Leibniz rule fails on the generator pair ({i}, {j})"
                    )));
                }
            }
        }
        // Augmentation laws.
        if let Some(aug) = &self.aug {
            if aug.len() != n {
                return Err(Error::InvalidDga(
                    "augmentation must assign a value to every generator".into(),
                ));
            }
            if !aug[self.unit as usize].is_one() {
                return Err(Error::InvalidDga("augmentation must send the unit to 1".into()));
            }
            for i in 0..n {
                if self.gens[i].degree > 0 && !aug[i].is_zero() {
                    return Err(Error::InvalidDga(format!(
                        "augmentation must vanish on positive-degree generator {i}"
                    )));
                }
            }
            for i in 0..n {
                for j in 0..n {
                    if self.gens[i].degree == 0 && self.gens[j].degree == 0 {
                        let lhs = self.augment(&self.prod[i][j])?;
                        if lhs != &aug[i] * &aug[j] {
                            return Err(Error::InvalidDga(format!(
                                "augmentation is not multiplicative on ({i}, {j})"
                            )));
                        }
                    }
                }
                if self.gens[i].degree == 1 {
                    let v = self.augment(&self.diff[i])?;
                    if !v.is_zero() {
                        return Err(Error::InvalidDga(format!(
                            "augmentation does not kill the boundary of generator {i}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The integral group ring `ZG`: one degree-zero generator per element,
    /// zero differential, products from the group table, augmentation all 1.
    pub fn group_ring(group: &FiniteGroup) -> Arc<Self> {
        let n = group.order();
        let gens = (0..n)
            .map(|i| GenInfo {
                label: format!("g{i}"),
                degree: 0,
            })
            .collect();
        let mk = |i: usize| RingGen {
            idx: i as u32,
            deg: 0,
        };
        let diff = vec![Lin::zero(); n];
        let prod = (0..n)
            .map(|i| (0..n).map(|j| Lin::term(mk(group.mul(i, j)))).collect())
            .collect();
        let aug = Some(vec![BigInt::one(); n]);
        let mut ring = Dga {
            name: format!("Z[G{}]", n),
            id: fresh_id(),
            gens,
            unit: group.identity() as u32,
            diff,
            prod,
            aug,
            group: Some(group.clone()),
        };
        ring.validate().expect("group ring is always a valid dga");
        ring.name = format!("ZG(order {n})");
        Arc::new(ring)
    }

    /// The trivial ring `Z` with a single degree-zero generator.
    pub fn trivial() -> Arc<Self> {
        let gens = vec![GenInfo {
            label: "1".into(),
            degree: 0,
        }];
        Dga::new(
            "Z",
            gens,
            0,
            vec![Lin::zero()],
            vec![vec![Lin::term(RingGen { idx: 0, deg: 0 })]],
            Some(vec![BigInt::one()]),
        )
        .expect("trivial ring is valid")
    }

    /// A small graded test ring `Z<1, a>` with `|a| = 1`, `a·a = 0` and
    /// `∂a = 2`.  It exercises every sign convention; it carries no
    /// augmentation because `∂a` has nonzero image in degree zero.
    pub fn test_ring() -> Arc<Self> {
        let one = RingGen { idx: 0, deg: 0 };
        let gens = vec![
            GenInfo {
                label: "1".into(),
                degree: 0,
            },
            GenInfo {
                label: "a".into(),
                degree: 1,
            },
        ];
        let diff = vec![Lin::zero(), Lin::single(one, BigInt::from(2))];
        let a = RingGen { idx: 1, deg: 1 };
        let prod = vec![
            vec![Lin::term(one), Lin::term(a)],
            vec![Lin::term(a), Lin::zero()],
        ];
        Dga::new("Z<1,a>", gens, 0, diff, prod, None).expect("test ring is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn gen_count(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_degree(&self, idx: u32) -> u32 {
        self.gens[idx as usize].degree
    }

    pub fn gen_label(&self, idx: u32) -> &str {
        &self.gens[idx as usize].label
    }

    /// The `idx`-th generator as a term with its cached degree.
    pub fn generator(&self, idx: u32) -> RingGen {
        RingGen {
            idx,
            deg: self.gens[idx as usize].degree,
        }
    }

    /// The unit as a term.
    pub fn unit(&self) -> RingGen {
        self.generator(self.unit_idx())
    }

    pub fn unit_idx(&self) -> u32 {
        self.unit
    }

    pub fn is_unit(&self, g: &RingGen) -> bool {
        g.idx == self.unit
    }

    /// Generators of a given degree, in index order.
    pub fn generators_of_degree(&self, d: i64) -> Vec<RingGen> {
        if d < 0 {
            return Vec::new();
        }
        (0..self.gens.len() as u32)
            .filter(|&i| self.gens[i as usize].degree as i64 == d)
            .map(|i| self.generator(i))
            .collect()
    }

    /// All generators, in index order.
    pub fn generators(&self) -> Vec<RingGen> {
        (0..self.gens.len() as u32).map(|i| self.generator(i)).collect()
    }

    /// Maximal generator degree.
    pub fn max_gen_degree(&self) -> i64 {
        self.gens.iter().map(|g| g.degree as i64).max().unwrap_or(0)
    }

    /// Differential of a generator.
    pub fn diff_gen(&self, g: &RingGen) -> Lin<RingGen> {
        self.diff[g.idx as usize].clone()
    }

    /// Linear extension of the differential to elements.
    pub fn apply_diff(&self, e: &Lin<RingGen>) -> Lin<RingGen> {
        e.bind(|t| self.diff[t.idx as usize].clone())
    }

    /// True when every generator is a cycle.
    pub fn has_zero_diff(&self) -> bool {
        self.diff.iter().all(|d| d.is_zero())
    }

    /// Product of two generators.
    pub fn prod_gen(&self, a: &RingGen, b: &RingGen) -> Lin<RingGen> {
        self.prod[a.idx as usize][b.idx as usize].clone()
    }

    /// Bilinear extension of the product to elements.  Ring elements carry no
    /// internal sign: Koszul signs arise only when maps move past elements.
    pub fn mul(&self, a: &Lin<RingGen>, b: &Lin<RingGen>) -> Lin<RingGen> {
        a.bind(|x| b.bind(|y| self.prod_gen(x, y)))
    }

    /// Product of a list of elements; the empty product is the unit.
    pub fn mul_all(&self, xs: &[Lin<RingGen>]) -> Lin<RingGen> {
        let mut acc = Lin::term(self.unit());
        for x in xs {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn has_augmentation(&self) -> bool {
        self.aug.is_some()
    }

    /// Augmentation of a generator.
    pub fn aug_gen(&self, g: &RingGen) -> Result<BigInt> {
        match &self.aug {
            Some(v) => Ok(v[g.idx as usize].clone()),
            None => Err(Error::MissingAugmentation(self.name.clone())),
        }
    }

    /// Linear extension of the augmentation.
    pub fn augment(&self, e: &Lin<RingGen>) -> Result<BigInt> {
        let aug = self
            .aug
            .as_ref()
            .ok_or_else(|| Error::MissingAugmentation(self.name.clone()))?;
        let mut acc = BigInt::zero();
        for (t, c) in e.iter() {
            acc += c * &aug[t.idx as usize];
        }
        Ok(acc)
    }

    /// The group underlying an integral group ring, when known.
    pub fn group(&self) -> Option<&FiniteGroup> {
        self.group.as_ref()
    }

    /// Renders an element with generator labels, for diagnostics.
    pub fn render(&self, e: &Lin<RingGen>) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = e
            .iter()
            .map(|(t, c)| format!("{}·{}", c, self.gens[t.idx as usize].label))
            .collect();
        parts.join(" + ")
    }
}
