//! Integer homology of the group quotient: matrix extraction, Smith normal
//! form, and abelian group descriptors.
//!
//! A locally finite free `ZG`-complex is collapsed to a complex of integer
//! matrices by tensoring with the trivial module — every group translate of a
//! basis element is identified with the element itself, so each differential
//! entry becomes the sum of the coefficients over the group.  Homology and
//! cohomology of the resulting matrices are read off the Smith normal form.

use crate::complex::{ring_basis, Complex, FreeModuleTerm};
use crate::dga::Dga;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// A dense matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    /// Builds a matrix from rows of machine integers (test and example
    /// convenience).
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntegerMatrix::new(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, e) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*e));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::new(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = IntegerMatrix::new(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = m.get(i, j) + a * b;
                        m.set(i, j, cur);
                    }
                }
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row_i ← row_i − q·row_t`.
    fn sub_scaled_row(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(i, j) - q * self.get(t, j);
            self.set(i, j, v);
        }
    }

    /// `col_j ← col_j − q·col_t`.
    fn sub_scaled_col(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, j) - q * self.get(i, t);
            self.set(i, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// `row_t ← row_t + row_i`.
    fn add_row(&mut self, t: usize, i: usize) {
        for j in 0..self.cols {
            let v = self.get(t, j) + self.get(i, j);
            self.set(t, j, v);
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}×{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// The result of a Smith normal form computation: `U·A·V = D` with `U`, `V`
/// products of elementary integer operations and `D` diagonal with a
/// divisibility chain.
pub struct SmithDecomposition {
    /// The nonzero diagonal entries `d₁ | d₂ | ⋯ | d_r`, all positive.
    pub factors: Vec<BigInt>,
    /// The rank of the input matrix.
    pub rank: usize,
    /// Accumulated row operations.
    pub row_ops: IntegerMatrix,
    /// Accumulated column operations.
    pub col_ops: IntegerMatrix,
    /// The diagonalized matrix.
    pub diagonal: IntegerMatrix,
}

impl SmithDecomposition {
    /// Re-multiplies the recorded operations against the original matrix and
    /// checks the diagonal shape and the divisibility chain.
    pub fn certify(&self, original: &IntegerMatrix) -> bool {
        let product = self.row_ops.mul(original).mul(&self.col_ops);
        if product != self.diagonal {
            return false;
        }
        for i in 0..self.diagonal.rows() {
            for j in 0..self.diagonal.cols() {
                if i != j && !self.diagonal.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        for (k, d) in self.factors.iter().enumerate() {
            if !d.is_positive() || self.diagonal.get(k, k) != d {
                return false;
            }
            if k + 1 < self.factors.len() && !(&self.factors[k + 1] % d).is_zero() {
                return false;
            }
        }
        self.factors.len() == self.rank
    }
}

/// Finds the position of a nonzero entry of minimal absolute value in the
/// submatrix starting at `(t, t)`.
fn min_abs_pivot(m: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            match &best {
                Some((_, b)) if *b <= a => {}
                _ => best = Some(((i, j), a)),
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Diagonalizes an integer matrix by elementary row and column operations,
/// pivoting on entries of minimal absolute value, and records the operations
/// for certification.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(a.rows());
    let mut v = IntegerMatrix::identity(a.cols());
    let limit = a.rows().min(a.cols());
    let mut t = 0;
    while t < limit {
        let Some((pi, pj)) = min_abs_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            // Clear the pivot column; truncated division leaves remainders
            // strictly smaller than the pivot, so re-pivoting terminates.
            let mut dirty = false;
            for i in t + 1..d.rows() {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t) / d.get(t, t);
                d.sub_scaled_row(i, t, &q);
                u.sub_scaled_row(i, t, &q);
                if !d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..d.cols() {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j) / d.get(t, t);
                d.sub_scaled_col(j, t, &q);
                v.sub_scaled_col(j, t, &q);
                if !d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = min_abs_pivot(&d, t).expect("dirty submatrix has a pivot");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Row and column are clear; enforce that the pivot divides the
            // rest of the submatrix.
            let mut fixed = true;
            'scan: for i in t + 1..d.rows() {
                for j in t + 1..d.cols() {
                    if !(d.get(i, j) % d.get(t, t)).is_zero() {
                        d.add_row(t, i);
                        u.add_row(t, i);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let mut factors = Vec::new();
    for k in 0..limit {
        let e = d.get(k, k);
        if e.is_zero() {
            break;
        }
        factors.push(e.clone());
    }
    let rank = factors.len();
    SmithDecomposition {
        factors,
        rank,
        row_ops: u,
        col_ops: v,
        diagonal: d,
    }
}

/// A finitely generated abelian group: free rank plus invariant factors
/// `d₁ | d₂ | ⋯`, each at least two.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianGroupDescriptor {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupDescriptor {
    pub fn free(rank: usize) -> Self {
        AbelianGroupDescriptor {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// A chain complex presented by integer matrices: `diffs[k]` is the matrix of
/// `∂_k` from degree `k` to degree `k−1` (columns indexed by the degree-`k`
/// basis), with `diffs[0]` the empty map out of degree zero.
pub struct MatrixComplex {
    pub dims: Vec<usize>,
    pub diffs: Vec<IntegerMatrix>,
}

impl MatrixComplex {
    /// The largest degree whose homology is fully determined by the stored
    /// matrices (one differential above is required).
    pub fn top_degree(&self) -> i64 {
        self.dims.len() as i64 - 2
    }

    /// Builds a complex from per-degree dimensions and the matrices of the
    /// differentials `∂_1, ∂_2, …` (test and example convenience).
    pub fn from_diffs(dims: Vec<usize>, higher: Vec<IntegerMatrix>) -> Result<Self> {
        assert_eq!(higher.len() + 1, dims.len(), "need one matrix per positive degree");
        let mut diffs = vec![IntegerMatrix::new(0, dims[0])];
        diffs.extend(higher);
        let mc = MatrixComplex { dims, diffs };
        mc.check()?;
        Ok(mc)
    }

    fn check(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            let m = &self.diffs[k];
            let expected_rows = if k == 1 { self.dims[0] } else { self.dims[k - 1] };
            assert_eq!(m.cols(), self.dims[k], "column dimension mismatch");
            assert_eq!(m.rows(), expected_rows, "dimension mismatch");
            if k >= 2 {
                let square = self.diffs[k - 1].mul(m);
                if !square.is_zero() {
                    return Err(Error::DifferentialSquare {
                        degree: k as i64,
                        witness: format!("∂∂ ≠ 0 between degrees {k} and {}", k - 2),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Collapses a free `ZG`-complex to the integer matrices of its quotient by
/// the group action, for degrees `0 ..= max_degree`.
///
/// Each basis element over the group ring becomes one integer basis element;
/// a differential entry is the sum of the coefficients of all group
/// translates landing on the same basis element.
pub fn quotient_by_g<T: FreeModuleTerm>(
    complex: &Complex<T>,
    ring: &Arc<Dga>,
    max_degree: i64,
) -> Result<MatrixComplex> {
    if !complex.has_basis() {
        return Err(Error::MissingBasis(complex.name().to_string()));
    }
    let unit = ring.unit();
    let mut bases: Vec<Vec<T>> = Vec::new();
    let mut index: Vec<HashMap<T, usize>> = Vec::new();
    for n in 0..=max_degree {
        let b = ring_basis(complex, ring, n)?;
        let mut map = HashMap::new();
        for (i, t) in b.iter().enumerate() {
            map.insert(t.clone(), i);
        }
        bases.push(b);
        index.push(map);
    }
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    let mut diffs = vec![IntegerMatrix::new(0, dims[0])];
    for k in 1..=max_degree as usize {
        let mut m = IntegerMatrix::new(dims[k - 1], dims[k]);
        for (j, b) in bases[k].iter().enumerate() {
            let image = complex.diff().apply_term(b);
            for (t, c) in image.iter() {
                let (_, key) = t.split();
                let rep = T::join(unit, &key);
                let Some(&i) = index[k - 1].get(&rep) else {
                    return Err(Error::MissingBasis(format!(
                        "differential image {rep} escapes the degree-{} basis of {}",
                        k - 1,
                        complex.name()
                    )));
                };
                let v = m.get(i, j) + c;
                m.set(i, j, v);
            }
        }
        diffs.push(m);
    }
    let mc = MatrixComplex { dims, diffs };
    mc.check()?;
    Ok(mc)
}

fn boundary_in(mc: &MatrixComplex, k: i64) -> Result<(usize, usize, usize, Vec<BigInt>)> {
    let kk = usize::try_from(k).map_err(|_| Error::Precondition {
        op: "homology_groups".into(),
        reason: format!("negative degree {k}"),
    })?;
    if kk + 1 >= mc.diffs.len() {
        return Err(Error::TruncationExceeded {
            requested: k + 1,
            cap: mc.diffs.len() as i64 - 1,
        });
    }
    let n_k = mc.dims[kk];
    let out_rank = smith_normal_form(&mc.diffs[kk]).rank;
    let into = smith_normal_form(&mc.diffs[kk + 1]);
    Ok((n_k, out_rank, into.rank, into.factors))
}

/// `H_k`: kernel of `∂_k` modulo image of `∂_{k+1}`, via Smith normal form.
pub fn homology_groups(mc: &MatrixComplex, k: i64) -> Result<AbelianGroupDescriptor> {
    let (n_k, out_rank, in_rank, factors) = boundary_in(mc, k)?;
    let rank = n_k - out_rank - in_rank;
    let torsion: Vec<BigInt> = factors
        .into_iter()
        .filter(|d| *d > BigInt::from(1))
        .collect();
    Ok(AbelianGroupDescriptor { rank, torsion })
}

/// `H^k`: cohomology of the dual complex, computed from the transposed
/// matrices with integer coefficients.
pub fn cohomology_groups(mc: &MatrixComplex, k: i64) -> Result<AbelianGroupDescriptor> {
    let kk = usize::try_from(k).map_err(|_| Error::Precondition {
        op: "cohomology_groups".into(),
        reason: format!("negative degree {k}"),
    })?;
    if kk + 1 >= mc.diffs.len() {
        return Err(Error::TruncationExceeded {
            requested: k + 1,
            cap: mc.diffs.len() as i64 - 1,
        });
    }
    // δ^k = (∂_{k+1})ᵀ: C^k → C^{k+1}; δ^{k−1} = (∂_k)ᵀ.
    let up = smith_normal_form(&mc.diffs[kk + 1].transpose());
    let down = smith_normal_form(&mc.diffs[kk].transpose());
    let rank = mc.dims[kk] - up.rank - down.rank;
    let torsion: Vec<BigInt> = down
        .factors
        .into_iter()
        .filter(|d| *d > BigInt::from(1))
        .collect();
    Ok(AbelianGroupDescriptor { rank, torsion })
}
