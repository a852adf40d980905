//! Homogeneous basis terms and exact integer linear combinations.
//!
//! Every chain-level object in this crate is a finite `BigInt`-linear
//! combination of *terms*.  A term type implements [`Term`]: it is an
//! immutable, hashable, totally ordered token that knows its own degree.
//! Canonical ordering of terms makes every [`Lin`] a sorted, duplicate-free
//! list, so equality of elements is plain structural equality and all
//! serialized output is deterministic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::hash::Hash;

/// A homogeneous basis term of a graded abelian group.
///
/// The `Ord` implementation must order first by degree, then by structure,
/// so that sorted linear combinations list their homogeneous parts
/// contiguously in increasing degree.
pub trait Term:
    Clone + Ord + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Degree of the term.
    fn degree(&self) -> i64;
}

/// A generator of a presented dga, with its degree cached inline.
///
/// `idx` indexes into the owning [`crate::dga::Dga`] generator list; `deg`
/// duplicates the generator degree so degree computations never need the
/// presentation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RingGen {
    pub idx: u32,
    pub deg: u32,
}

impl Ord for RingGen {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.deg, self.idx).cmp(&(other.deg, other.idx))
    }
}

impl PartialOrd for RingGen {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Term for RingGen {
    fn degree(&self) -> i64 {
        self.deg as i64
    }
}

impl fmt::Display for RingGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.idx)
    }
}

/// A basis term `r · b` of a free module over a presented ring.
///
/// `gen` is the ring generator acting on the underlying basis element, which
/// is identified by its homological degree `bdeg` and its index `bidx` within
/// that degree.  The total degree is `gen.deg + bdeg`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ModTerm {
    pub gen: RingGen,
    pub bdeg: u32,
    pub bidx: u32,
}

impl ModTerm {
    pub fn new(gen: RingGen, bdeg: u32, bidx: u32) -> Self {
        ModTerm { gen, bdeg, bidx }
    }
}

impl Ord for ModTerm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.gen, self.bdeg, self.bidx).cmp(&(
            other.degree(),
            other.gen,
            other.bdeg,
            other.bidx,
        ))
    }
}

impl PartialOrd for ModTerm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Term for ModTerm {
    fn degree(&self) -> i64 {
        self.gen.deg as i64 + self.bdeg as i64
    }
}

impl fmt::Display for ModTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*b({},{})", self.gen, self.bdeg, self.bidx)
    }
}

/// An exact finite linear combination of terms with `BigInt` coefficients.
///
/// Invariant: the internal vector is sorted by term in the canonical order,
/// contains no duplicate terms, and contains no zero coefficients.  Hence
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lin<T: Term> {
    entries: Vec<(T, BigInt)>,
}

impl<T: Term> Lin<T> {
    /// The zero element.
    pub fn zero() -> Self {
        Lin { entries: Vec::new() }
    }

    /// The basis term `t` with coefficient one.
    pub fn term(t: T) -> Self {
        Lin {
            entries: vec![(t, BigInt::one())],
        }
    }

    /// The term `t` with an arbitrary coefficient.
    pub fn single(t: T, coeff: BigInt) -> Self {
        if coeff.is_zero() {
            Lin::zero()
        } else {
            Lin {
                entries: vec![(t, coeff)],
            }
        }
    }

    /// Builds a combination from arbitrary (term, coefficient) pairs,
    /// merging duplicates and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (T, BigInt)>>(pairs: I) -> Self {
        let mut v: Vec<(T, BigInt)> = pairs.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(T, BigInt)> = Vec::with_capacity(v.len());
        for (t, c) in v {
            match out.last_mut() {
                Some((lt, lc)) if *lt == t => *lc += c,
                _ => out.push((t, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Lin { entries: out }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(T, BigInt)> {
        self.entries.iter()
    }

    /// Coefficient of a given term (zero if absent).
    pub fn coeff(&self, t: &T) -> BigInt {
        match self.entries.binary_search_by(|(u, _)| u.cmp(t)) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Sum of two combinations.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut out: Vec<(T, BigInt)> = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, ca) = &self.entries[i];
            let (b, cb) = &other.entries[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    out.push((a.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b.clone(), cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((a.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.entries[i..].iter().cloned());
        out.extend(other.entries[j..].iter().cloned());
        Lin { entries: out }
    }

    /// Difference `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        Lin {
            entries: self
                .entries
                .iter()
                .map(|(t, c)| (t.clone(), -c))
                .collect(),
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Lin::zero();
        }
        Lin {
            entries: self
                .entries
                .iter()
                .map(|(t, c)| (t.clone(), c * k))
                .collect(),
        }
    }

    /// Scalar multiple by a machine integer.
    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&BigInt::from(k))
    }

    /// Linear extension: applies `f` to each term and sums with coefficients.
    ///
    /// This is the workhorse for extending term-wise defined maps to whole
    /// elements.
    pub fn bind<U: Term>(&self, mut f: impl FnMut(&T) -> Lin<U>) -> Lin<U> {
        let mut acc = Lin::zero();
        for (t, c) in &self.entries {
            let ft = f(t);
            if !ft.is_zero() {
                acc = acc.add(&ft.scale(c));
            }
        }
        acc
    }

    /// Degree of a homogeneous element; `None` if zero or inhomogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.entries.iter();
        let first = it.next()?.0.degree();
        if it.all(|(t, _)| t.degree() == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Splits into homogeneous parts, in increasing degree.
    pub fn homogeneous_parts(&self) -> Vec<(i64, Lin<T>)> {
        let mut parts: Vec<(i64, Lin<T>)> = Vec::new();
        for (t, c) in &self.entries {
            let d = t.degree();
            match parts.last_mut() {
                Some((pd, p)) if *pd == d => {
                    p.entries.push((t.clone(), c.clone()));
                }
                _ => parts.push((
                    d,
                    Lin {
                        entries: vec![(t.clone(), c.clone())],
                    },
                )),
            }
        }
        parts
    }

    /// Keeps only terms satisfying the predicate.
    pub fn filter(&self, mut keep: impl FnMut(&T) -> bool) -> Lin<T> {
        Lin {
            entries: self
                .entries
                .iter()
                .filter(|(t, _)| keep(t))
                .cloned()
                .collect(),
        }
    }

    /// Largest absolute value among the coefficients (zero for the zero
    /// element); useful for size diagnostics.
    pub fn coeff_height(&self) -> BigInt {
        self.entries
            .iter()
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl<T: Term> fmt::Display for Lin<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.entries.iter().enumerate() {
            if i == 0 {
                if *c == BigInt::one() {
                    write!(f, "{t}")?;
                } else if *c == -BigInt::one() {
                    write!(f, "-{t}")?;
                } else {
                    write!(f, "{c}*{t}")?;
                }
            } else if c.is_negative() {
                let a = -c;
                if a == BigInt::one() {
                    write!(f, " - {t}")?;
                } else {
                    write!(f, " - {a}*{t}")?;
                }
            } else if *c == BigInt::one() {
                write!(f, " + {t}")?;
            } else {
                write!(f, " + {c}*{t}")?;
            }
        }
        Ok(())
    }
}

/// Sum of degrees of a list of homogeneous elements over the index range
/// `i..=j` (inclusive); an empty range `i == j + 1` contributes zero.
///
/// Errors if an element in the range is zero or inhomogeneous.
pub fn degree_sum<T: Term>(elements: &[Lin<T>], i: usize, j: i64) -> crate::error::Result<i64> {
    if j < 0 && i == 0 {
        return Ok(0);
    }
    let hi = j as usize;
    if i == hi + 1 {
        return Ok(0);
    }
    if i > hi || hi >= elements.len() {
        return Err(crate::error::Error::Usage(format!(
            "degree_sum range {i}..={j} out of bounds for {} elements",
            elements.len()
        )));
    }
    let mut acc = 0i64;
    for (k, e) in elements[i..=hi].iter().enumerate() {
        acc += e.degree().ok_or_else(|| crate::error::Error::DegreeMismatch {
            expected: 0,
            found: 0,
            context: format!("degree_sum: element {} is zero or inhomogeneous", i + k),
        })?;
    }
    Ok(acc)
}

/// Sign `(-1)^n` as a machine integer.
pub fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
