//! Sparse Gaussian elimination over the coefficient field.

use std::collections::HashMap;

use crate::scalar::Scalar;

/// Entries sorted by strictly increasing column, all nonzero.
pub type SparseRow = Vec<(usize, Scalar)>;

/// `a - c * b`.
pub fn sub_scaled(a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -&(c * &b[j].1)));
            j += 1;
        } else {
            let mut v = a[i].1.clone();
            v.sub_mul_assign(c, &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_row(a: &[(usize, Scalar)], c: &Scalar) -> SparseRow {
    a.iter().map(|(k, v)| (*k, v * c)).collect()
}

/// Incremental row echelon form with optional tracking of row combinations.
///
/// Each stored row has leading coefficient one at a column no other stored row leads at.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(SparseRow, SparseRow)>,
    pivot_of: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_of.keys().copied()
    }

    /// Reduces `main` against the stored rows, applying the same operations to `aux`.
    pub fn reduce(&self, mut main: SparseRow, mut aux: SparseRow) -> (SparseRow, SparseRow) {
        let mut pos = 0;
        while pos < main.len() {
            let (col, coeff) = (main[pos].0, main[pos].1.clone());
            match self.pivot_of.get(&col) {
                Some(&r) => {
                    let (pm, pa) = &self.rows[r];
                    main = sub_scaled(&main, &coeff, pm);
                    if !pa.is_empty() {
                        aux = sub_scaled(&aux, &coeff, pa);
                    }
                }
                None => pos += 1,
            }
        }
        (main, aux)
    }

    /// Inserts a row. Returns the reduced `aux` when `main` was dependent.
    pub fn insert(&mut self, main: SparseRow, aux: SparseRow) -> Option<SparseRow> {
        let (main, aux) = self.reduce(main, aux);
        if main.is_empty() {
            return Some(aux);
        }
        let inv = main[0].1.inv();
        let (main, aux) = (scale_row(&main, &inv), scale_row(&aux, &inv));
        self.pivot_of.insert(main[0].0, self.rows.len());
        self.rows.push((main, aux));
        None
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row, Vec::new()).0.is_empty()
    }
}

/// Rank of the span of the given rows.
pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut rows: Vec<SparseRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    rows.sort_by_key(|r| r.len());
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r, Vec::new());
    }
    e.rank()
}

/// Basis of `{c : sum_i c_i * images[i] = 0}`, as sparse vectors indexed by `i`.
pub fn kernel(images: &[SparseRow], field_one: &Scalar) -> Vec<SparseRow> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (i, r) in images.iter().enumerate() {
        if let Some(rel) = e.insert(r.clone(), vec![(i, field_one.clone())]) {
            out.push(rel);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;
    use proptest::prelude::*;

    fn row(f: Field, dense: &[i64]) -> SparseRow {
        dense
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (i, f.from_i64(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    /// Dense fraction-free determinant-style rank, an independent check.
    fn dense_rank(f: Field, m: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<Scalar>> = m.iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
        let cols = a.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
            a.swap(rank, p);
            let inv = a[rank][c].inv();
            for r in 0..a.len() {
                if r != rank && !a[r][c].is_zero() {
                    let factor = &a[r][c] * &inv;
                    for k in 0..cols {
                        let t = &a[rank][k] * &factor;
                        a[r][k] = &a[r][k] - &t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn rank_matches_dense(m in proptest::collection::vec(proptest::collection::vec(-2i64..3, 5), 0..6)) {
            for f in [Field::Rational, Field::Prime(3)] {
                let rows: Vec<SparseRow> = m.iter().map(|r| row(f, r)).collect();
                prop_assert_eq!(rank(rows), dense_rank(f, &m));
            }
        }

        #[test]
        fn kernel_vectors_annihilate(m in proptest::collection::vec(proptest::collection::vec(-2i64..3, 4), 0..7)) {
            let f = Field::Rational;
            let rows: Vec<SparseRow> = m.iter().map(|r| row(f, r)).collect();
            let k = kernel(&rows, &f.one());
            prop_assert_eq!(k.len() + rank(rows.clone()), rows.len());
            for v in &k {
                let mut acc: SparseRow = Vec::new();
                for (i, c) in v {
                    acc = sub_scaled(&acc, &-c, &rows[*i]);
                }
                prop_assert!(acc.is_empty());
            }
        }
    }
}
