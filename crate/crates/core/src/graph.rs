//! Interaction graphs of circuit architectures: distances, balls, growth.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Supported architecture graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GraphFamily {
    Chain,
    Ring,
    Grid2d,
    Complete,
}

impl GraphFamily {
    pub fn label(&self) -> &'static str {
        match self {
            GraphFamily::Chain => "chain",
            GraphFamily::Ring => "ring",
            GraphFamily::Grid2d => "grid2d",
            GraphFamily::Complete => "complete",
        }
    }

    /// Lattice dimension, where one applies (growth `V_G(m) = O(m^D)`).
    pub fn lattice_dimension(&self) -> Option<u32> {
        match self {
            GraphFamily::Chain | GraphFamily::Ring => Some(1),
            GraphFamily::Grid2d => Some(2),
            GraphFamily::Complete => None,
        }
    }
}

/// Undirected graph on qubit indices with per-vertex neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    family: GraphFamily,
    adjacency: Vec<Vec<usize>>,
}

impl InteractionGraph {
    pub fn chain(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedGraph {
                family: GraphFamily::Chain,
                n,
            });
        }
        let mut adjacency = vec![Vec::new(); n];
        for i in 0..n.saturating_sub(1) {
            adjacency[i].push(i + 1);
            adjacency[i + 1].push(i);
        }
        Ok(Self {
            family: GraphFamily::Chain,
            adjacency,
        })
    }

    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::UnsupportedGraph {
                family: GraphFamily::Ring,
                n,
            });
        }
        let mut adjacency = vec![Vec::new(); n];
        for i in 0..n {
            let j = (i + 1) % n;
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        Ok(Self {
            family: GraphFamily::Ring,
            adjacency,
        })
    }

    /// `rows x cols` grid; vertex `r * cols + c`.
    pub fn grid2d(rows: usize, cols: usize) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::UnsupportedGraph {
                family: GraphFamily::Grid2d,
                n: rows * cols,
            });
        }
        let n = rows * cols;
        let mut adjacency = vec![Vec::new(); n];
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    adjacency[v].push(v + 1);
                    adjacency[v + 1].push(v);
                }
                if r + 1 < rows {
                    adjacency[v].push(v + cols);
                    adjacency[v + cols].push(v);
                }
            }
        }
        Ok(Self {
            family: GraphFamily::Grid2d,
            adjacency,
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedGraph {
                family: GraphFamily::Complete,
                n,
            });
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, neighbors) in adjacency.iter_mut().enumerate() {
            neighbors.extend((0..n).filter(|&j| j != i));
        }
        Ok(Self {
            family: GraphFamily::Complete,
            adjacency,
        })
    }

    /// Build the family's canonical instance on `n` vertices.
    ///
    /// For `Grid2d` the squarest `rows x cols = n` factorization with both
    /// sides at least 2 is used; sizes without one are rejected.
    pub fn for_family(family: GraphFamily, n: usize) -> Result<Self> {
        match family {
            GraphFamily::Chain => Self::chain(n),
            GraphFamily::Ring => Self::ring(n),
            GraphFamily::Grid2d => {
                let rows = Self::grid_rows(n).ok_or(Error::UnsupportedGraph { family, n })?;
                Self::grid2d(rows, n / rows)
            }
            GraphFamily::Complete => Self::complete(n),
        }
    }

    /// Largest divisor of `n` that is at most `sqrt(n)` and at least 2.
    pub fn grid_rows(n: usize) -> Option<usize> {
        let mut best = None;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                best = Some(d);
            }
            d += 1;
        }
        best.filter(|&rows| n / rows >= 2)
    }

    pub fn family(&self) -> GraphFamily {
        self.family
    }

    pub fn n_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// BFS distances from a set of sources; `usize::MAX` marks unreachable.
    fn bfs_from(&self, sources: &[usize]) -> Result<Vec<usize>> {
        let n = self.n_vertices();
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if s >= n {
                return Err(Error::QubitIndex {
                    index: s,
                    n_qubits: n,
                });
            }
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let next = dist[v] + 1;
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Minimum BFS distance between two vertex sets; `None` if disconnected.
    pub fn distance(&self, a: &[usize], b: &[usize]) -> Result<Option<usize>> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySupport);
        }
        let dist = self.bfs_from(a)?;
        let mut best = usize::MAX;
        for &v in b {
            if v >= self.n_vertices() {
                return Err(Error::QubitIndex {
                    index: v,
                    n_qubits: self.n_vertices(),
                });
            }
            best = best.min(dist[v]);
        }
        Ok((best != usize::MAX).then_some(best))
    }

    /// Vertices within distance `m` of `v`.
    pub fn ball(&self, v: usize, m: usize) -> Result<Vec<usize>> {
        let dist = self.bfs_from(&[v])?;
        Ok((0..self.n_vertices()).filter(|&w| dist[w] <= m).collect())
    }

    /// Growth function `V_G(m)`: the largest ball of radius `m`.
    pub fn growth_function(&self, m: usize) -> usize {
        let mut best = 0;
        for v in 0..self.n_vertices() {
            let count = self
                .bfs_from(&[v])
                .expect("vertex index in range")
                .iter()
                .filter(|&&d| d <= m)
                .count();
            best = best.max(count);
        }
        best
    }
}
