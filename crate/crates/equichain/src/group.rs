//! Finite groups presented by explicit multiplication tables.

use crate::error::{Error, Result};

/// A finite group given by its full multiplication table.
///
/// Elements are the indices `0..order`.  Construction validates the table
/// exhaustively: closure, two-sided identity, associativity on all triples,
/// and existence of two-sided inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table and builds the group.
    pub fn from_table(mul: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let order = mul.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        if identity >= order {
            return Err(Error::InvalidGroup(format!(
                "identity index {identity} out of range for order {order}"
            )));
        }
        for (i, row) in mul.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {} but the order is {order}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::InvalidGroup(format!(
                        "product of {i} and {j} is {v}, outside 0..{order}"
                    )));
                }
            }
        }
        for a in 0..order {
            if mul[identity][a] != a || mul[a][identity] != a {
                return Err(Error::InvalidGroup(format!(
                    "element {identity} is not a two-sided identity at {a}"
                )));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on the triple ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            let found = (0..order).find(|&b| mul[a][b] == identity && mul[b][a] == identity);
            match found {
                Some(b) => inv[a] = b,
                None => {
                    return Err(Error::InvalidGroup(format!(
                        "element {a} has no two-sided inverse"
                    )))
                }
            }
        }
        Ok(FiniteGroup {
            order,
            mul,
            identity,
            inv,
        })
    }

    /// The cyclic group of order `n`, with generator `1` and `a*b = a+b mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group order must be positive".into()));
        }
        let mul = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FiniteGroup::from_table(mul, 0)
    }

    /// The symmetric group on `n` letters (`n >= 1`), elements being the
    /// permutations of `0..n` in lexicographic order.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 6 {
            return Err(Error::InvalidGroup(
                "symmetric group supported for 1 <= n <= 6".into(),
            ));
        }
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("permutation enumerated");
        let mul = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    // Composition convention: (p*q)(i) = p(q(i)).
                    .map(|q| index(&(0..n).map(|i| p[q[i]]).collect()))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(mul, 0)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Borrow of the underlying table, row-major: `table()[a][b] = a*b`.
    pub fn table(&self) -> &Vec<Vec<usize>> {
        &self.mul
    }

    /// True when the group is abelian.
    pub fn is_abelian(&self) -> bool {
        (0..self.order)
            .all(|a| (0..self.order).all(|b| self.mul[a][b] == self.mul[b][a]))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}
