//! Symmetric sparse matrices and an envelope (profile) Cholesky
//! factorization with reverse Cuthill-McKee ordering.

use std::collections::{BTreeMap, VecDeque};

use crate::{Error, Result};

/// Symmetric matrix storing the lower triangle row by row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseSym {
    rows: Vec<BTreeMap<usize, f64>>,
}

impl SparseSym {
    pub fn new(n: usize) -> Self {
        Self {
            rows: vec![BTreeMap::new(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds `value` at `(i, j)` and, implicitly, `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        *self.rows[r].entry(c).or_insert(0.0) += value;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.rows[r].get(&c).copied().unwrap_or(0.0)
    }

    pub fn nnz_lower(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, &v) in row {
                y[r] += v * x[c];
                if c != r {
                    y[c] += v * x[r];
                }
            }
        }
        y
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, &v) in row {
                m[(r, c)] = v;
                m[(c, r)] = v;
            }
        }
        m
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.dim()];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row.keys() {
                if c != r {
                    adj[r].push(c);
                    adj[c].push(r);
                }
            }
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }
}

/// Reverse Cuthill-McKee ordering; `order[new] = old`.
fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let bfs = |start: usize, visited: &mut [bool], order: &mut Vec<usize>| -> usize {
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        let mut last = start;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            last = v;
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&u| !visited[u]).collect();
            next.sort_by_key(|&u| (adj[u].len(), u));
            for u in next {
                visited[u] = true;
                queue.push_back(u);
            }
        }
        last
    };
    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        if adj[seed].is_empty() {
            visited[seed] = true;
            order.push(seed);
            continue;
        }
        // The last vertex reached by a sweep is a pseudo-peripheral start.
        let mut scratch_visited = visited.clone();
        let far = bfs(seed, &mut scratch_visited, &mut Vec::new());
        bfs(far, &mut visited, &mut order);
    }
    order.reverse();
    order
}

/// Lower Cholesky factor stored by row envelope.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    /// `perm[new] = old`.
    perm: Vec<usize>,
    first: Vec<usize>,
    offset: Vec<usize>,
    values: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factorizes `a`. Fails with the original index of the first
    /// non-positive pivot when `a` is not positive definite.
    pub fn factor(a: &SparseSym) -> Result<Self> {
        let n = a.dim();
        let perm = reverse_cuthill_mckee(&a.neighbours());
        let mut inverse = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }

        let mut first: Vec<usize> = (0..n).collect();
        for (r, row) in a.rows.iter().enumerate() {
            for &c in row.keys() {
                let (pr, pc) = (inverse[r], inverse[c]);
                let (hi, lo) = (pr.max(pc), pr.min(pc));
                first[hi] = first[hi].min(lo);
            }
        }
        let mut offset = Vec::with_capacity(n + 1);
        let mut total = 0;
        for (r, &f) in first.iter().enumerate() {
            offset.push(total);
            total += r - f + 1;
        }
        offset.push(total);
        let mut values = vec![0.0; total];
        for (r, row) in a.rows.iter().enumerate() {
            for (&c, &v) in row {
                let (pr, pc) = (inverse[r], inverse[c]);
                let (hi, lo) = (pr.max(pc), pr.min(pc));
                values[offset[hi] + lo - first[hi]] = v;
            }
        }

        for r in 0..n {
            let fr = first[r];
            for c in fr..r {
                let fc = first[c];
                let k0 = fr.max(fc);
                let row_r = &values[offset[r] + k0 - fr..offset[r] + c - fr];
                let row_c = &values[offset[c] + k0 - fc..offset[c] + c - fc];
                let dot: f64 = row_r.iter().zip(row_c).map(|(x, y)| x * y).sum();
                let diag_c = values[offset[c] + c - fc];
                let idx = offset[r] + c - fr;
                values[idx] = (values[idx] - dot) / diag_c;
            }
            let idx = offset[r] + r - fr;
            let sq: f64 = values[offset[r]..idx].iter().map(|x| x * x).sum();
            let d = values[idx] - sq;
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: perm[r] });
            }
            values[idx] = d.sqrt();
        }
        Ok(Self {
            perm,
            first,
            offset,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Number of stored factor entries.
    pub fn envelope_size(&self) -> usize {
        self.values.len()
    }

    /// Solves `a x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for r in 0..n {
            let fr = self.first[r];
            let row = &self.values[self.offset[r]..self.offset[r + 1]];
            let dot: f64 = row[..r - fr].iter().zip(&y[fr..r]).map(|(l, y)| l * y).sum();
            y[r] = (y[r] - dot) / row[r - fr];
        }
        for r in (0..n).rev() {
            let fr = self.first[r];
            let row = &self.values[self.offset[r]..self.offset[r + 1]];
            y[r] /= row[r - fr];
            let xr = y[r];
            for (k, l) in (fr..r).zip(row) {
                y[k] -= l * xr;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 1D Laplacian plus identity, with an extra long-range coupling.
    fn test_matrix(n: usize) -> SparseSym {
        let mut a = SparseSym::new(n);
        for i in 0..n {
            a.add(i, i, 3.0);
            if i + 1 < n {
                a.add(i, i + 1, -1.0);
            }
        }
        a.add(0, n - 1, -0.5);
        a
    }

    #[test]
    fn solves_against_dense() {
        let a = test_matrix(30);
        let chol = EnvelopeCholesky::factor(&a).unwrap();
        let b: Vec<f64> = (0..30).map(|i| (i as f64 * 0.37).sin()).collect();
        let x = chol.solve(&b);
        let dense = a
            .to_dense()
            .cholesky()
            .unwrap()
            .solve(&nalgebra::DVector::from_vec(b.clone()));
        for (xi, di) in x.iter().zip(dense.iter()) {
            assert!((xi - di).abs() < 1e-12);
        }
        let residual: f64 = a.mul(&x).iter().zip(&b).map(|(ax, b)| (ax - b).powi(2)).sum();
        assert!(residual.sqrt() < 1e-12);
    }

    #[test]
    fn reports_pivot_of_indefinite_matrix() {
        let mut a = SparseSym::new(3);
        a.add(0, 0, 1.0);
        a.add(1, 1, 1.0);
        a.add(2, 2, -1.0);
        assert!(matches!(
            EnvelopeCholesky::factor(&a),
            Err(Error::NotPositiveDefinite { pivot: 2 })
        ));
    }

    #[test]
    fn disconnected_blocks() {
        let mut a = SparseSym::new(4);
        for i in 0..4 {
            a.add(i, i, 2.0);
        }
        a.add(0, 1, 1.0);
        a.add(2, 3, 1.0);
        let chol = EnvelopeCholesky::factor(&a).unwrap();
        let x = chol.solve(&[3.0, 3.0, 3.0, 3.0]);
        for xi in x {
            assert!((xi - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn ordering_reduces_envelope() {
        // A path numbered in a scrambled order.
        let n = 200;
        let label = |i: usize| (i * 73) % n;
        let mut a = SparseSym::new(n);
        for i in 0..n {
            a.add(label(i), label(i), 4.0);
            if i + 1 < n {
                a.add(label(i), label(i + 1), -1.0);
            }
        }
        let chol = EnvelopeCholesky::factor(&a).unwrap();
        assert!(chol.envelope_size() <= 2 * n, "{}", chol.envelope_size());
    }
}
