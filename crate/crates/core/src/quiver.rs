//! Quivers, paths and the combinatorial invariants built from them.
//!
//! Conventions used throughout the crate:
//!
//! * vertices are indexed `0..n` in the order in which they were declared, and
//!   every matrix or vertex function uses that order;
//! * arrows are indexed in declaration order, parallel arrows are distinct;
//! * the Euler form is `<e, f> = sum_i e_i f_i - sum_a e_{s(a)} f_{t(a)}`;
//! * the slope of a nonzero `e` is `theta(e) / sum_i e_i`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::{Character, DimensionVector, StabilityParameter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
}

/// A finite quiver with named, totally ordered vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    names: Vec<String>,
    arrows: Vec<Arrow>,
    index: HashMap<String, usize>,
}

impl Quiver {
    /// Builds a quiver from vertex names and arrows given by vertex names.
    pub fn new<V, A, S, T>(vertices: V, arrows: A) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
        A: IntoIterator<Item = (T, T)>,
        T: AsRef<str>,
    {
        let names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let index = build_index(&names)?;
        let arrows = arrows
            .into_iter()
            .map(|(s, t)| {
                let lookup = |name: &str| {
                    index
                        .get(name)
                        .copied()
                        .ok_or_else(|| Error::UnknownVertex(name.to_owned()))
                };
                Ok(Arrow {
                    source: lookup(s.as_ref())?,
                    target: lookup(t.as_ref())?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            names,
            arrows,
            index,
        })
    }

    /// Builds a quiver from vertex names and arrows given by vertex index.
    pub fn from_indices<S: Into<String>>(
        vertices: impl IntoIterator<Item = S>,
        arrows: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let index = build_index(&names)?;
        let n = names.len();
        let arrows = arrows
            .into_iter()
            .map(|(source, target)| {
                if source >= n || target >= n {
                    Err(Error::InvalidQuiver(format!(
                        "arrow {source} -> {target} leaves the vertex range 0..{n}"
                    )))
                } else {
                    Ok(Arrow { source, target })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            names,
            arrows,
            index,
        })
    }

    /// Vertices named `1..=n`.
    pub fn with_numbered_vertices(
        n: usize,
        arrows: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        Self::from_indices((1..=n).map(|k| k.to_string()), arrows)
    }

    /// The `m`-Kronecker quiver: two vertices and `m` parallel arrows `1 -> 2`.
    pub fn kronecker(m: usize) -> Self {
        Self::with_numbered_vertices(2, std::iter::repeat_n((0, 1), m))
            .expect("kronecker quiver is well formed")
    }

    /// The linearly oriented `A_n` quiver `1 -> 2 -> ... -> n`.
    pub fn linear(n: usize) -> Self {
        Self::with_numbered_vertices(n, (1..n).map(|k| (k - 1, k)))
            .expect("linear quiver is well formed")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> Arrow {
        self.arrows[a]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_owned()))
    }

    pub fn contains_vertex(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Decides acyclicity, returning a topological order or an oriented cycle.
    pub fn acyclicity(&self) -> Acyclicity {
        let n = self.vertex_count();
        let mut indegree = vec![0usize; n];
        for a in &self.arrows {
            indegree[a.target] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indegree[a.target] -= 1;
                if indegree[a.target] == 0 {
                    queue.push_back(a.target);
                }
            }
        }
        if order.len() == n {
            Acyclicity::Acyclic {
                topological_order: order,
            }
        } else {
            Acyclicity::Cyclic {
                cycle: self.find_cycle(&indegree),
            }
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclicity().is_acyclic()
    }

    /// Topological order, or `CyclicQuiver`.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        match self.acyclicity() {
            Acyclicity::Acyclic { topological_order } => Ok(topological_order),
            Acyclicity::Cyclic { cycle } => Err(Error::CyclicQuiver { cycle }),
        }
    }

    // Every vertex left with positive indegree after Kahn's algorithm has a
    // predecessor in the same set, so walking backwards must revisit a vertex.
    fn find_cycle(&self, indegree: &[usize]) -> Vec<usize> {
        let start = indegree
            .iter()
            .position(|&d| d > 0)
            .expect("cyclic quiver has a vertex of positive residual indegree");
        let mut seen_at: HashMap<usize, usize> = HashMap::new();
        let mut walk = Vec::new();
        let mut v = start;
        loop {
            if let Some(&pos) = seen_at.get(&v) {
                let mut cycle: Vec<usize> = walk[pos..].to_vec();
                cycle.reverse();
                return cycle;
            }
            seen_at.insert(v, walk.len());
            let (a, arrow) = self
                .arrows
                .iter()
                .enumerate()
                .find(|(_, a)| a.target == v && indegree[a.source] > 0)
                .expect("residual vertex has a residual predecessor");
            walk.push(a);
            v = arrow.source;
        }
    }

    /// Number of connected components of the underlying undirected graph.
    pub fn connected_components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertex_count()).collect();
        fn find(parent: &mut [usize], v: usize) -> usize {
            let mut root = v;
            while parent[root] != root {
                root = parent[root];
            }
            let mut w = v;
            while parent[w] != root {
                let next = parent[w];
                parent[w] = root;
                w = next;
            }
            root
        }
        let mut components = self.vertex_count();
        for a in &self.arrows {
            let (x, y) = (find(&mut parent, a.source), find(&mut parent, a.target));
            if x != y {
                parent[x] = y;
                components -= 1;
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components() <= 1
    }

    /// The full subquiver on `vertices` (kept in the given order), together
    /// with the indices of the retained arrows in `self`.
    pub fn full_subquiver(&self, vertices: &[usize]) -> (Quiver, Vec<usize>) {
        let mut position = vec![None; self.vertex_count()];
        for (new, &old) in vertices.iter().enumerate() {
            position[old] = Some(new);
        }
        let mut arrows = Vec::new();
        let mut arrow_map = Vec::new();
        for (k, a) in self.arrows.iter().enumerate() {
            if let (Some(s), Some(t)) = (position[a.source], position[a.target]) {
                arrows.push((s, t));
                arrow_map.push(k);
            }
        }
        let names: Vec<String> = vertices.iter().map(|&v| self.names[v].clone()).collect();
        let sub = Quiver::from_indices(names, arrows).expect("full subquiver is well formed");
        (sub, arrow_map)
    }

    /// The Euler form `<e, f> = sum_i e_i f_i - sum_a e_{s(a)} f_{t(a)}`.
    pub fn euler_form(&self, e: &DimensionVector, f: &DimensionVector) -> Result<i64> {
        e.check_on(self)?;
        f.check_on(self)?;
        let diagonal: i64 = e.values().iter().zip(f.values()).map(|(x, y)| x * y).sum();
        let arrows: i64 = self.arrows.iter().map(|a| e[a.source] * f[a.target]).sum();
        Ok(diagonal - arrows)
    }

    /// Counts paths between all pairs of vertices.
    ///
    /// Computed by the recursion `p(i, j) = delta_ij + sum_{a: t(a) = j} p(i, s(a))`
    /// along a topological order.
    pub fn path_count_matrix(&self) -> Result<PathCountMatrix> {
        let order = self.topological_order()?;
        let n = self.vertex_count();
        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in &self.arrows {
            incoming[a.target].push(a.source);
        }
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for &j in &order {
                let mut count = u64::from(i == j);
                for &s in &incoming[j] {
                    count = count
                        .checked_add(entries[i * n + s])
                        .ok_or(Error::Overflow("path counts"))?;
                }
                entries[i * n + j] = count;
            }
        }
        Ok(PathCountMatrix { n, entries })
    }

    /// The canonical stability parameter `theta_can(e) = <d, e> - <e, d>`.
    pub fn canonical_stability(&self, d: &DimensionVector) -> Result<StabilityParameter> {
        d.check_on(self)?;
        let mut theta = vec![0i64; self.vertex_count()];
        for a in &self.arrows {
            theta[a.source] += d[a.target];
            theta[a.target] -= d[a.source];
        }
        Ok(StabilityParameter::new(theta))
    }

    /// All paths starting at `from`, grouped by nothing and ordered by DFS
    /// over arrows in declaration order (the trivial path comes first).
    pub fn paths_from(&self, from: usize) -> Result<Vec<Path>> {
        self.topological_order()?;
        let mut out = Vec::new();
        let mut stack = vec![Path::trivial(from)];
        while let Some(p) = stack.pop() {
            for (k, a) in self.arrows.iter().enumerate().rev() {
                if a.source == p.target {
                    stack.push(p.then(k, a.target));
                }
            }
            out.push(p);
        }
        Ok(out)
    }

    /// All paths from `from` to `to`.
    pub fn paths_between(&self, from: usize, to: usize) -> Result<Vec<Path>> {
        Ok(self
            .paths_from(from)?
            .into_iter()
            .filter(|p| p.target == to)
            .collect())
    }
}

fn build_index(names: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (k, name) in names.iter().enumerate() {
        if index.insert(name.clone(), k).is_some() {
            return Err(Error::InvalidQuiver(format!("duplicate vertex `{name}`")));
        }
    }
    Ok(index)
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices [{}]; arrows [", self.names.join(", "))?;
        for (k, a) in self.arrows.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", self.names[a.source], self.names[a.target])?;
        }
        write!(f, "]")
    }
}

/// Outcome of [`Quiver::acyclicity`] with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acyclicity {
    Acyclic { topological_order: Vec<usize> },
    /// Arrow indices of an oriented cycle, in composable order.
    Cyclic { cycle: Vec<usize> },
}

impl Acyclicity {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic { .. })
    }
}

/// A path in a quiver, written as arrow indices in traversal order
/// (the first arrow is applied first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(vertex: usize) -> Self {
        Self {
            source: vertex,
            target: vertex,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Result<Self> {
        Self::new(q, q_source(q, a)?, vec![a])
    }

    /// Validates that `arrows` are composable starting at `source`.
    pub fn new(q: &Quiver, source: usize, arrows: Vec<usize>) -> Result<Self> {
        if source >= q.vertex_count() {
            return Err(Error::InvalidPath(format!("vertex {source} out of range")));
        }
        let mut at = source;
        for &a in &arrows {
            let arrow = q
                .arrows
                .get(a)
                .ok_or_else(|| Error::InvalidPath(format!("arrow {a} out of range")))?;
            if arrow.source != at {
                return Err(Error::InvalidPath(format!(
                    "arrow {a} starts at vertex {} but the path is at vertex {at}",
                    arrow.source
                )));
            }
            at = arrow.target;
        }
        Ok(Self {
            source,
            target: at,
            arrows,
        })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    fn then(&self, arrow: usize, target: usize) -> Self {
        let mut arrows = self.arrows.clone();
        arrows.push(arrow);
        Self {
            source: self.source,
            target,
            arrows,
        }
    }

    /// `self` followed by `next` (requires `self.target == next.source`).
    pub fn concat(&self, next: &Path) -> Result<Path> {
        if self.target != next.source {
            return Err(Error::InvalidPath(format!(
                "cannot follow a path ending at {} by one starting at {}",
                self.target, next.source
            )));
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&next.arrows);
        Ok(Path {
            source: self.source,
            target: next.target,
            arrows,
        })
    }

    /// Relabels the path along a quiver embedding.
    pub fn map(&self, vertex_map: &[usize], arrow_map: &[usize]) -> Path {
        Path {
            source: vertex_map[self.source],
            target: vertex_map[self.target],
            arrows: self.arrows.iter().map(|&a| arrow_map[a]).collect(),
        }
    }
}

fn q_source(q: &Quiver, a: usize) -> Result<usize> {
    q.arrows
        .get(a)
        .map(|arrow| arrow.source)
        .ok_or_else(|| Error::InvalidPath(format!("arrow {a} out of range")))
}

/// `p(i, j)`: the number of paths from `i` to `j`, i.e. `dim e_j kQ e_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathCountMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl PathCountMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, from: usize, to: usize) -> u64 {
        self.entries[from * self.n + to]
    }

    pub fn row(&self, from: usize) -> &[u64] {
        &self.entries[from * self.n..(from + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Sum of all entries: the dimension of the path algebra.
    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }
}

/// A character `a` with `a(d) = 1`, built by iterated extended Euclid.
///
/// Zero entries of `d` get weight zero, and once the running gcd reaches 1
/// the remaining weights are zero, so `d = (1, 1, 1)` gives `(1, 0, 0)`.
pub fn weight_one_character(d: &DimensionVector) -> Result<Character> {
    let mut a = vec![0i64; d.len()];
    let mut g = 0i64;
    for (k, &dk) in d.values().iter().enumerate() {
        if dk == 0 || g == 1 {
            continue;
        }
        if g == 0 {
            g = dk;
            a[k] = 1;
            continue;
        }
        let (h, x, y) = extended_gcd(g, dk);
        for w in a.iter_mut().take(k) {
            *w *= x;
        }
        a[k] = y;
        g = h;
    }
    match g {
        0 => Err(Error::ZeroDimensionVector),
        1 => Ok(Character::new(a)),
        gcd => Err(Error::Divisible { gcd }),
    }
}

/// Returns `(g, x, y)` with `g = gcd(a, b) = x a + y b` for positive `a`, `b`.
fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}
