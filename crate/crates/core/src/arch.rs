//! Device model: coupling graph, hop distances and exact token-swap costs.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

/// Largest device for which the full permutation table is built (8! states).
pub const MAX_TABLE_QUBITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArchError {
    #[error("architecture needs at least one qubit")]
    NoQubits,
    #[error("self-loop edge on qubit {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) has an endpoint >= {2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("unknown builtin architecture `{0}`")]
    UnknownBuiltin(String),
    #[error("malformed size in `{0}`")]
    MalformedSize(String),
    #[error("line {line}: {message}")]
    File { line: usize, message: String },
    #[error("device too large for the exhaustive swap table ({0} > {MAX_TABLE_QUBITS} qubits)")]
    TooLarge(usize),
    #[error("placements move a token between disconnected components")]
    Disconnected,
    #[error("invalid placement: {0}")]
    InvalidPlacement(String),
}

/// Hop counts on the undirected view; [`DistanceTable::UNREACHABLE`] marks
/// pairs in different components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceTable {
    pub const UNREACHABLE: u32 = u32::MAX;

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.dist[a * self.n + b]
    }

    pub fn is_connected(&self) -> bool {
        self.dist.iter().all(|&d| d != Self::UNREACHABLE)
    }
}

#[derive(Debug, Clone)]
pub struct Architecture {
    num_physical: usize,
    edges: BTreeSet<(usize, usize)>,
    undirected: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    adjacent: Vec<bool>,
    distances: DistanceTable,
    swap_table: OnceLock<TokenSwapTable>,
}

impl PartialEq for Architecture {
    fn eq(&self, other: &Self) -> bool {
        self.num_physical == other.num_physical && self.edges == other.edges
    }
}

impl Eq for Architecture {}

const OSLO7: [(usize, usize); 7] = [(0, 1), (1, 2), (1, 3), (2, 3), (3, 5), (4, 5), (5, 6)];

impl Architecture {
    /// Builds a device from directed coupling pairs. Reversed duplicates
    /// collapse in the undirected view.
    pub fn from_coupling_map(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Architecture, ArchError> {
        if n == 0 {
            return Err(ArchError::NoQubits);
        }
        let mut directed = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(ArchError::EndpointOutOfRange(a, b, n));
            }
            if a == b {
                return Err(ArchError::SelfLoop(a));
            }
            directed.insert((a, b));
        }
        let undirected: Vec<(usize, usize)> = directed
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut neighbors = vec![Vec::new(); n];
        let mut adjacent = vec![false; n * n];
        for &(a, b) in &undirected {
            neighbors[a].push(b);
            neighbors[b].push(a);
            adjacent[a * n + b] = true;
            adjacent[b * n + a] = true;
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let distances = bfs_distances(n, &neighbors);
        Ok(Architecture {
            num_physical: n,
            edges: directed,
            undirected,
            neighbors,
            adjacent,
            distances,
            swap_table: OnceLock::new(),
        })
    }

    fn undirected_from(n: usize, edges: &[(usize, usize)]) -> Architecture {
        Architecture::from_coupling_map(n, edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]))
            .expect("generated edges are valid")
    }

    /// `oslo7`, `line_<N>`, `ring_<N>` (N >= 3) or `grid_<R>x<C>` (row-major).
    pub fn builtin(name: &str) -> Result<Architecture, ArchError> {
        let size = |s: &str| -> Result<usize, ArchError> {
            match s.parse::<usize>() {
                Ok(v) if v > 0 && !s.starts_with('+') => Ok(v),
                _ => Err(ArchError::MalformedSize(name.to_string())),
            }
        };
        if name == "oslo7" {
            return Ok(Architecture::undirected_from(7, &OSLO7));
        }
        if let Some(rest) = name.strip_prefix("line_") {
            let n = size(rest)?;
            let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            return Ok(Architecture::undirected_from(n, &edges));
        }
        if let Some(rest) = name.strip_prefix("ring_") {
            let n = size(rest)?;
            if n < 3 {
                return Err(ArchError::MalformedSize(name.to_string()));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            return Ok(Architecture::undirected_from(n, &edges));
        }
        if let Some(rest) = name.strip_prefix("grid_") {
            let (r, c) = rest
                .split_once('x')
                .ok_or_else(|| ArchError::MalformedSize(name.to_string()))?;
            let (rows, cols) = (size(r)?, size(c)?);
            let mut edges = Vec::new();
            for i in 0..rows {
                for j in 0..cols {
                    let q = i * cols + j;
                    if j + 1 < cols {
                        edges.push((q, q + 1));
                    }
                    if i + 1 < rows {
                        edges.push((q, q + cols));
                    }
                }
            }
            return Ok(Architecture::undirected_from(rows * cols, &edges));
        }
        Err(ArchError::UnknownBuiltin(name.to_string()))
    }

    /// Reads the text format: a qubit count on the first line, then one
    /// `a b` pair per line. Blank lines and `#` comments are skipped.
    /// With `undirected`, every pair also adds its reverse.
    pub fn parse(text: &str, undirected: bool) -> Result<Architecture, ArchError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let file_err = |line, message: String| ArchError::File { line, message };
        let (first, header) = lines
            .next()
            .ok_or_else(|| file_err(1, "missing qubit count".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| file_err(first, format!("expected qubit count, found `{header}`")))?;
        let mut edges = Vec::new();
        for (line, l) in lines {
            let fields: Vec<&str> = l.split_whitespace().collect();
            let parsed: Option<Vec<usize>> = fields.iter().map(|f| f.parse().ok()).collect();
            match parsed.as_deref() {
                Some(&[a, b]) => {
                    edges.push((a, b));
                    if undirected {
                        edges.push((b, a));
                    }
                }
                _ => return Err(file_err(line, format!("expected `a b`, found `{l}`"))),
            }
        }
        Architecture::from_coupling_map(n, edges)
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    /// Directed coupling pairs as given.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub fn undirected_edges(&self) -> &[(usize, usize)] {
        &self.undirected
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.neighbors[q]
    }

    #[inline]
    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacent[a * self.num_physical + b]
    }

    pub fn has_directed_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn distances(&self) -> &DistanceTable {
        &self.distances
    }

    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> u32 {
        self.distances.get(a, b)
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The exhaustive token-swap table, built on first use.
    pub fn swap_table(&self) -> Result<&TokenSwapTable, ArchError> {
        if self.num_physical > MAX_TABLE_QUBITS {
            return Err(ArchError::TooLarge(self.num_physical));
        }
        Ok(self.swap_table.get_or_init(|| TokenSwapTable::build(self)))
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} qubits, edges {:?}",
            self.num_physical, self.undirected
        )
    }
}

fn bfs_distances(n: usize, neighbors: &[Vec<usize>]) -> DistanceTable {
    let mut dist = vec![DistanceTable::UNREACHABLE; n * n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in &neighbors[u] {
                if row[v] == DistanceTable::UNREACHABLE {
                    row[v] = row[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    DistanceTable { n, dist }
}

/// Minimal hop counts between all physical pairs, one BFS per source.
pub fn all_pairs_distance(arch: &Architecture) -> DistanceTable {
    bfs_distances(arch.num_physical, &arch.neighbors)
}

/// Advances `v` to the next lexicographic permutation; false after the last.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Breadth-first distances over the Cayley graph of the symmetric group on
/// the physical qubits, generated by the coupling-edge transpositions.
///
/// A state is an arrangement `arr` where `arr[p]` is the starting position of
/// the token now sitting at `p`; swapping along edge `(a, b)` exchanges
/// `arr[a]` and `arr[b]`.
#[derive(Debug, Clone)]
pub struct TokenSwapTable {
    n: usize,
    edges: Vec<(usize, usize)>,
    dist: Vec<u8>,
    parent_edge: Vec<u8>,
}

const UNSEEN: u8 = u8::MAX;

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

impl TokenSwapTable {
    fn build(arch: &Architecture) -> TokenSwapTable {
        let n = arch.num_physical;
        assert!(n <= MAX_TABLE_QUBITS);
        let edges = arch.undirected.clone();
        let size = factorial(n);
        let mut dist = vec![UNSEEN; size];
        let mut parent_edge = vec![UNSEEN; size];
        let identity: Vec<u8> = (0..n as u8).collect();
        let mut queue = VecDeque::new();
        dist[rank(&identity)] = 0;
        queue.push_back(identity);
        while let Some(arr) = queue.pop_front() {
            let d = dist[rank(&arr)];
            for (e, &(a, b)) in edges.iter().enumerate() {
                let mut next = arr.clone();
                next.swap(a, b);
                let r = rank(&next);
                if dist[r] == UNSEEN {
                    dist[r] = d + 1;
                    parent_edge[r] = e as u8;
                    queue.push_back(next);
                }
            }
        }
        TokenSwapTable {
            n,
            edges,
            dist,
            parent_edge,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Number of arrangements covered (N!).
    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// Swap count of an arrangement, `None` if it is not reachable.
    pub fn arrangement_cost(&self, arr: &[usize]) -> Option<usize> {
        assert_eq!(arr.len(), self.n);
        let arr: Vec<u8> = arr.iter().map(|&p| p as u8).collect();
        match self.dist[rank(&arr)] {
            UNSEEN => None,
            d => Some(d as usize),
        }
    }

    /// Every arrangement with its cost, in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, Option<usize>)> + '_ {
        let mut arr: Vec<usize> = (0..self.n).collect();
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let item = (arr.clone(), self.arrangement_cost(&arr));
            done = !next_permutation(&mut arr);
            Some(item)
        })
    }

    /// Shortest edge-swap sequence turning the identity arrangement into
    /// `arr`, following the BFS parents.
    pub fn arrangement_swaps(&self, arr: &[usize]) -> Option<Vec<(usize, usize)>> {
        let mut cur: Vec<u8> = arr.iter().map(|&p| p as u8).collect();
        if self.dist[rank(&cur)] == UNSEEN {
            return None;
        }
        let mut swaps = Vec::new();
        while self.dist[rank(&cur)] != 0 {
            let (a, b) = self.edges[self.parent_edge[rank(&cur)] as usize];
            swaps.push((a, b));
            cur.swap(a, b);
        }
        swaps.reverse();
        Some(swaps)
    }

    fn completions(
        &self,
        source: &[usize],
        target: &[usize],
    ) -> Result<Vec<Vec<usize>>, ArchError> {
        check_placement(self.n, source)?;
        check_placement(self.n, target)?;
        if source.len() != target.len() {
            return Err(ArchError::InvalidPlacement(
                "source and target place different token counts".into(),
            ));
        }
        let mut arr = vec![usize::MAX; self.n];
        for (&s, &t) in source.iter().zip(target) {
            arr[t] = s;
        }
        let mut free_src: Vec<usize> = (0..self.n).filter(|p| !source.contains(p)).collect();
        let free_dst: Vec<usize> = (0..self.n).filter(|&p| arr[p] == usize::MAX).collect();
        let mut out = Vec::new();
        loop {
            for (&d, &s) in free_dst.iter().zip(&free_src) {
                arr[d] = s;
            }
            out.push(arr.clone());
            if !next_permutation(&mut free_src) {
                break;
            }
        }
        Ok(out)
    }

    /// Minimal swaps moving token `t` from `source[t]` to `target[t]` for all
    /// `t`. Unlisted positions hold interchangeable filler tokens.
    pub fn distance(&self, source: &[usize], target: &[usize]) -> Result<usize, ArchError> {
        self.completions(source, target)?
            .iter()
            .filter_map(|arr| self.arrangement_cost(arr))
            .min()
            .ok_or(ArchError::Disconnected)
    }

    /// A shortest swap sequence realising [`TokenSwapTable::distance`].
    pub fn swaps(
        &self,
        source: &[usize],
        target: &[usize],
    ) -> Result<Vec<(usize, usize)>, ArchError> {
        self.completions(source, target)?
            .iter()
            .filter_map(|arr| self.arrangement_cost(arr).map(|c| (c, arr)))
            .min_by_key(|&(c, _)| c)
            .and_then(|(_, arr)| self.arrangement_swaps(arr))
            .ok_or(ArchError::Disconnected)
    }
}

fn check_placement(n: usize, placement: &[usize]) -> Result<(), ArchError> {
    if placement.len() > n {
        return Err(ArchError::InvalidPlacement(format!(
            "{} tokens on {n} positions",
            placement.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in placement {
        if p >= n || seen[p] {
            return Err(ArchError::InvalidPlacement(format!(
                "position {p} out of range or repeated"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Lehmer-code rank of a permutation of `0..len`.
fn rank(perm: &[u8]) -> usize {
    let n = perm.len();
    let mut r = 0;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

/// Minimal coupling-edge swaps turning placement `source` into `target`
/// (`placement[t]` = position of token `t`). Devices above
/// [`MAX_TABLE_QUBITS`] are rejected.
pub fn token_swap_distance(
    arch: &Architecture,
    source: &[usize],
    target: &[usize],
) -> Result<usize, ArchError> {
    arch.swap_table()?.distance(source, target)
}
