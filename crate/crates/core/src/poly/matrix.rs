//! Rectangular matrices of polynomials: Jacobians, determinants, minors.

use super::{Polynomial, Ring};
use std::sync::Arc;

/// A dense rows x cols matrix whose entries share one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Arc<Ring>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zero(ring: &Arc<Ring>, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![Polynomial::zero(ring); rows * cols],
        }
    }

    pub fn from_rows(ring: &Arc<Ring>, rows: Vec<Vec<Polynomial>>) -> PolyMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged matrix rows");
            for e in row {
                assert!(
                    super::same_ring(e.ring(), ring),
                    "matrix entry from a different ring"
                );
                entries.push(e);
            }
        }
        PolyMatrix { ring: ring.clone(), rows: nrows, cols: ncols, entries }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Polynomial) {
        assert!(super::same_ring(p.ring(), &self.ring));
        self.entries[r * self.cols + c] = p;
    }

    /// Determinant of a square matrix via cofactor expansion, always
    /// expanding along the row with the most zero entries.
    pub fn determinant(&self) -> Polynomial {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let idx_rows: Vec<usize> = (0..self.rows).collect();
        let idx_cols: Vec<usize> = (0..self.cols).collect();
        self.det_rec(&idx_rows, &idx_cols)
    }

    fn det_rec(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        let n = rows.len();
        if n == 0 {
            return Polynomial::one(&self.ring);
        }
        if n == 1 {
            return self.get(rows[0], cols[0]).clone();
        }
        // Pick the sparsest remaining row to keep the expansion small.
        let (best_pos, _) = rows
            .iter()
            .enumerate()
            .map(|(pos, &r)| {
                let nz = cols.iter().filter(|&&c| !self.get(r, c).is_zero()).count();
                (pos, nz)
            })
            .min_by_key(|&(pos, nz)| (nz, pos))
            .unwrap();
        let r = rows[best_pos];
        let sub_rows: Vec<usize> = rows
            .iter()
            .copied()
            .filter(|&x| x != r)
            .collect();
        let mut acc = Polynomial::zero(&self.ring);
        for (j, &c) in cols.iter().enumerate() {
            let e = self.get(r, c);
            if e.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = self.det_rec(&sub_rows, &sub_cols);
            let signed = if (best_pos + j) % 2 == 0 { minor } else { -&minor };
            acc = &acc + &(e * &signed);
        }
        acc
    }

    /// All k x k minors (choices of k rows and k columns), in the
    /// lexicographic order of the chosen index sets.
    pub fn minors(&self, k: usize) -> Vec<Polynomial> {
        if k == 0 || k > self.rows || k > self.cols {
            return Vec::new();
        }
        let row_sets = combinations(self.rows, k);
        let col_sets = combinations(self.cols, k);
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            for cs in &col_sets {
                out.push(self.det_rec(rs, cs));
            }
        }
        out
    }

    /// The minors of maximal size `min(rows, cols)`.
    pub fn maximal_minors(&self) -> Vec<Polynomial> {
        self.minors(self.rows.min(self.cols))
    }
}

/// Jacobian matrix of `system` with respect to the listed variables.
pub fn jacobian(system: &[Polynomial], vars: &[usize]) -> PolyMatrix {
    let ring = system
        .first()
        .expect("jacobian of an empty system")
        .ring()
        .clone();
    let rows = system
        .iter()
        .map(|p| {
            assert!(super::same_ring(p.ring(), &ring));
            vars.iter().map(|&v| p.partial_derivative(v)).collect()
        })
        .collect();
    PolyMatrix::from_rows(&ring, rows)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
