//! Symmetric 0/1 adjacency matrices in compressed sparse row form.

use crate::error::{Error, Result};

/// Symmetric binary adjacency matrix. Every stored entry has value one; a
/// self-loop at `i` is stored once, in row `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseAdjacency {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<u32>,
}

impl SparseAdjacency {
    /// Builds the matrix from undirected edges `(i, j)`. Both orientations are
    /// stored, duplicates collapse to one entry, and `(i, i)` is a self-loop.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut entries: Vec<(u32, u32)> = Vec::new();
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::Input(format!("edge ({i}, {j}) outside 0..{n}")));
            }
            entries.push((i as u32, j as u32));
            if i != j {
                entries.push((j as u32, i as u32));
            }
        }
        entries.sort_unstable();
        entries.dedup();
        Ok(Self::from_sorted_entries(n, &entries))
    }

    /// `entries` must be sorted, deduplicated and already symmetric.
    pub(crate) fn from_sorted_entries(n: usize, entries: &[(u32, u32)]) -> Self {
        let mut row_offsets = vec![0usize; n + 1];
        for &(i, _) in entries {
            row_offsets[i as usize + 1] += 1;
        }
        for i in 0..n {
            row_offsets[i + 1] += row_offsets[i];
        }
        let col_indices = entries.iter().map(|&(_, j)| j).collect();
        SparseAdjacency {
            n,
            row_offsets,
            col_indices,
        }
    }

    pub fn empty(n: usize) -> Self {
        SparseAdjacency {
            n,
            row_offsets: vec![0; n + 1],
            col_indices: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored entries (each off-diagonal edge counts twice).
    pub fn nnz(&self) -> usize {
        self.col_indices.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[u32] {
        &self.col_indices
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.col_indices[self.row_offsets[i]..self.row_offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row_offsets[i + 1] - self.row_offsets[i]
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    pub fn self_loops(&self) -> usize {
        (0..self.n).filter(|&i| self.contains(i, i)).count()
    }

    /// Undirected edge count, self-loops counted once.
    pub fn edge_count(&self) -> usize {
        let loops = self.self_loops();
        (self.nnz() - loops) / 2 + loops
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            self.neighbors(i)
                .iter()
                .all(|&j| self.contains(j as usize, i))
        })
    }

    /// Copy with the diagonal removed.
    pub fn without_self_loops(&self) -> Self {
        let entries: Vec<(u32, u32)> = (0..self.n)
            .flat_map(|i| self.neighbors(i).iter().map(move |&j| (i as u32, j)))
            .filter(|&(i, j)| i != j)
            .collect();
        Self::from_sorted_entries(self.n, &entries)
    }

    /// Induced subgraph on `keep` (in the given order).
    pub fn induced(&self, keep: &[usize]) -> Self {
        let mut index = vec![u32::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new as u32;
        }
        let mut entries = Vec::new();
        for (new_i, &old_i) in keep.iter().enumerate() {
            for &j in self.neighbors(old_i) {
                let nj = index[j as usize];
                if nj != u32::MAX {
                    entries.push((new_i as u32, nj));
                }
            }
        }
        entries.sort_unstable();
        Self::from_sorted_entries(keep.len(), &entries)
    }

    /// Relabels vertices: vertex `i` of the result is vertex `order[i]` here.
    pub fn permute(&self, order: &[usize]) -> Self {
        self.induced(order)
    }

    /// Dense row-major copy, for small-instance checks.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for &j in self.neighbors(i) {
                d[i * self.n + j as usize] = 1.0;
            }
        }
        d
    }

    /// `y = A x` for a dense row-major `n x cols` block `x`.
    pub fn mul_dense(&self, x: &[f64], cols: usize, y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n * cols);
        debug_assert_eq!(y.len(), self.n * cols);
        for i in 0..self.n {
            let out = &mut y[i * cols..(i + 1) * cols];
            out.fill(0.0);
            for &j in self.neighbors(i) {
                let row = &x[j as usize * cols..(j as usize + 1) * cols];
                for (o, v) in out.iter_mut().zip(row) {
                    *o += v;
                }
            }
        }
    }
}
