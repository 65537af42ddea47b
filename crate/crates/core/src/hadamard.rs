//! Sign matrices, the block construction of Hadamard matrices from
//! quadruples, their colored-graph encoding, and canonical certificates for
//! Hadamard equivalence.
//!
//! Each ±1 matrix of order m maps to a graph on 4m vertices: two twin
//! vertices per row and per column, with an edge between row twin `r_i^s`
//! and column twin `c_j^u` exactly when `s·u·H_ij = 1`. Row and column
//! classes carry distinct colors, so transposition is not an equivalence.
//! Canonical labeling is done from scratch: equitable partition refinement
//! plus individualization, with path-invariant pruning and automorphism
//! orbit pruning.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::seq::Quadruple;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HadError {
    #[error("matrix rows are not orthogonal; input is not a Hadamard matrix")]
    NotHadamard,
    #[error("matrix data must be a square of ±1 entries")]
    BadShape,
}

/// A square ±1 matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct SignMatrix {
    n: usize,
    data: Vec<i8>,
}

impl SignMatrix {
    pub fn new(n: usize, data: Vec<i8>) -> Result<SignMatrix, HadError> {
        if data.len() != n * n || data.iter().any(|&v| v != 1 && v != -1) {
            return Err(HadError::BadShape);
        }
        Ok(SignMatrix { n, data })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.data[i * self.n + j]
    }

    /// Exact check of `H Hᵀ = n I`.
    pub fn is_hadamard(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for k in i..n {
                let dot: i64 = (0..n)
                    .map(|j| self.get(i, j) as i64 * self.get(k, j) as i64)
                    .sum();
                let want = if i == k { n as i64 } else { 0 };
                if dot != want {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "SignMatrix(order {})", self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                f.write_str(if self.get(i, j) == 1 { "+" } else { "-" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The 4n × 4n block array with circulant blocks from the quadruple.
///
/// Fails when the input is not a QT quadruple (the orthogonality
/// postcondition is verified exactly).
pub fn build_qt_hadamard(q: &Quadruple) -> Result<SignMatrix, HadError> {
    let n = q.len();
    let m = 4 * n;
    // block b at (r, c) with sign: row-block layout of the quaternion array
    let layout: [[(usize, i8); 4]; 4] = [
        [(0, 1), (1, 1), (2, 1), (3, 1)],
        [(1, -1), (0, 1), (3, -1), (2, 1)],
        [(2, -1), (3, 1), (0, 1), (1, -1)],
        [(3, -1), (2, -1), (1, 1), (0, 1)],
    ];
    let mut data = vec![0i8; m * m];
    for br in 0..4 {
        for bc in 0..4 {
            let (idx, sign) = layout[br][bc];
            let s = q.seq(idx);
            for i in 0..n {
                for j in 0..n {
                    // circulant: entry (i, j) is x_{j-i mod n}
                    let v = s.entries()[(j + n - i) % n];
                    data[(br * n + i) * m + (bc * n + j)] = sign * v;
                }
            }
        }
    }
    let h = SignMatrix::new(m, data).expect("block array is square ±1");
    if !h.is_hadamard() {
        return Err(HadError::NotHadamard);
    }
    Ok(h)
}

/// A vertex-colored undirected graph with bitset adjacency.
#[derive(Clone)]
pub struct ColoredGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    /// Number of vertices in the first color class; vertices `0..split` and
    /// `split..n` form the two classes.
    color_split: usize,
}

impl ColoredGraph {
    pub fn new(n: usize, color_split: usize) -> ColoredGraph {
        let words = n.div_ceil(64);
        ColoredGraph { n, words, adj: vec![0; n * words], color_split }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    fn deg_in(&self, v: usize, mask: &[u64]) -> u32 {
        self.row(v).iter().zip(mask).map(|(a, b)| (a & b).count_ones()).sum()
    }
}

/// Twin-vertex graph encoding of a ±1 matrix: vertices `2i`/`2i+1` are the
/// positive/negative twins of row i, then the same for columns.
pub fn mckay_graph(h: &SignMatrix) -> ColoredGraph {
    let m = h.order();
    let mut g = ColoredGraph::new(4 * m, 2 * m);
    let col_base = 2 * m;
    for i in 0..m {
        for j in 0..m {
            let hij = h.get(i, j);
            for (s_idx, s) in [(0usize, 1i8), (1, -1)] {
                for (u_idx, u) in [(0usize, 1i8), (1, -1)] {
                    if s * u * hij == 1 {
                        g.add_edge(2 * i + s_idx, col_base + 2 * j + u_idx);
                    }
                }
            }
        }
    }
    g
}

/// An ordered partition of the vertex set into cells.
#[derive(Clone)]
struct Partition {
    lab: Vec<u32>,
    pos: Vec<u32>,
    /// Ascending cell start positions; an implicit sentinel at n.
    starts: Vec<u32>,
}

impl Partition {
    fn unit(n: usize, color_split: usize) -> Partition {
        let lab: Vec<u32> = (0..n as u32).collect();
        let pos = lab.clone();
        let starts = if color_split == 0 || color_split == n {
            vec![0]
        } else {
            vec![0, color_split as u32]
        };
        Partition { lab, pos, starts }
    }

    fn is_discrete(&self) -> bool {
        self.starts.len() == self.lab.len()
    }

    fn cell_bounds(&self, idx: usize) -> (usize, usize) {
        let s = self.starts[idx] as usize;
        let e = if idx + 1 < self.starts.len() {
            self.starts[idx + 1] as usize
        } else {
            self.lab.len()
        };
        (s, e)
    }

    /// First smallest non-singleton cell, as (start, end).
    fn target_cell(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for idx in 0..self.starts.len() {
            let (s, e) = self.cell_bounds(idx);
            if e - s > 1 && best.is_none_or(|(bs, be)| e - s < be - bs) {
                best = Some((s, e));
            }
        }
        best
    }

    fn mask_of_range(&self, s: usize, e: usize, words: usize) -> Vec<u64> {
        let mut mask = vec![0u64; words];
        for p in s..e {
            let v = self.lab[p] as usize;
            mask[v / 64] |= 1 << (v % 64);
        }
        mask
    }
}

/// Refines to the coarsest equitable partition reachable from the given
/// splitter queue, recording an isomorphism-invariant trace.
///
/// Every subcell created by a split is enqueued as a splitter, so at the
/// fixpoint every final cell has been processed against every final cell.
fn refine(g: &ColoredGraph, part: &mut Partition, queue: &mut Vec<Vec<u64>>) -> Vec<u32> {
    let mut trace = Vec::new();
    let mut qi = 0;
    while qi < queue.len() {
        let mask = std::mem::take(&mut queue[qi]);
        qi += 1;
        // one forward pass over the cells; subcells created here already
        // have constant counts against this mask
        let mut s = 0usize;
        while s < part.lab.len() {
            let cell_idx = part.starts.binary_search(&(s as u32)).unwrap();
            let (_, e) = part.cell_bounds(cell_idx);
            if e - s <= 1 {
                s = e;
                continue;
            }
            let mut counted: Vec<(u32, u32)> = part.lab[s..e]
                .iter()
                .map(|&v| (g.deg_in(v as usize, &mask), v))
                .collect();
            if counted.iter().all(|&(c, _)| c == counted[0].0) {
                s = e;
                continue;
            }
            counted.sort_unstable();
            // rewrite the cell grouped by count and split it
            trace.push(s as u32);
            let mut new_starts = Vec::new();
            let mut run_start = s;
            for (k, &(c, v)) in counted.iter().enumerate() {
                part.lab[s + k] = v;
                part.pos[v as usize] = (s + k) as u32;
                if k > 0 && c != counted[k - 1].0 {
                    new_starts.push((s + k) as u32);
                    trace.push(c);
                    trace.push((s + k - run_start) as u32);
                    run_start = s + k;
                }
            }
            trace.push((e - run_start) as u32);
            // enqueue every new subcell (including the first fragment)
            let mut bounds = vec![s as u32];
            bounds.extend(new_starts.iter().copied());
            bounds.push(e as u32);
            for w in bounds.windows(2) {
                queue.push(part.mask_of_range(w[0] as usize, w[1] as usize, g.words));
            }
            for (off, ns) in new_starts.into_iter().enumerate() {
                part.starts.insert(cell_idx + 1 + off, ns);
            }
            s = e;
        }
    }
    queue.clear();
    trace
}

/// Serializes the adjacency bitmap of the relabeled graph, row-major, with
/// a small header identifying order and coloring.
fn leaf_certificate(g: &ColoredGraph, part: &Partition) -> Vec<u8> {
    let n = g.n;
    let mut out = Vec::with_capacity(8 + n * n / 8 + 1);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(g.color_split as u32).to_le_bytes());
    let mut bit = 0usize;
    let mut acc = 0u8;
    for p1 in 0..n {
        for p2 in 0..n {
            if g.adjacent(part.lab[p1] as usize, part.lab[p2] as usize) {
                acc |= 1 << (bit % 8);
            }
            bit += 1;
            if bit % 8 == 0 {
                out.push(acc);
                acc = 0;
            }
        }
    }
    if bit % 8 != 0 {
        out.push(acc);
    }
    out
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, v: u32) -> u32 {
        if self.parent[v as usize] != v {
            let r = self.find(self.parent[v as usize]);
            self.parent[v as usize] = r;
            r
        } else {
            v
        }
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
        }
    }
}

struct CanonSearch<'g> {
    g: &'g ColoredGraph,
    best_traces: Vec<Vec<u32>>,
    best_cert: Option<Vec<u8>>,
    best_lab: Vec<u32>,
    /// The first leaf ever reached: a fixed reference against which most
    /// leaves of a symmetric graph compare equal, yielding automorphisms.
    rho_cert: Option<Vec<u8>>,
    rho_lab: Vec<u32>,
    gens: Vec<Vec<u32>>,
    prefix: Vec<u32>,
    /// Candidates already tried at each node on the current path.
    explored_stack: Vec<Vec<u32>>,
}

impl<'g> CanonSearch<'g> {
    /// Orbit representatives under the generators that fix the current
    /// individualized prefix pointwise.
    fn stabilizer_orbits(&self) -> UnionFind {
        let mut uf = UnionFind::new(self.g.n);
        for gen in &self.gens {
            if self.prefix.iter().all(|&x| gen[x as usize] == x) {
                for v in 0..self.g.n as u32 {
                    uf.union(v, gen[v as usize]);
                }
            }
        }
        uf
    }

    /// Records an automorphism relating the current leaf labeling to a
    /// reference labeling; returns the depth to back up to when the
    /// automorphism proves the current subtree conjugate to an explored one.
    fn record_automorphism(&mut self, leaf_lab: &[u32], ref_lab: &[u32]) -> Option<usize> {
        let mut gen = vec![0u32; self.g.n];
        for p in 0..self.g.n {
            gen[leaf_lab[p] as usize] = ref_lab[p];
        }
        if gen.iter().enumerate().all(|(v, &w)| v as u32 == w) {
            return None;
        }
        let jump = self.prefix.iter().position(|&v| gen[v as usize] != v).filter(|&d| {
            let image = gen[self.prefix[d] as usize];
            self.explored_stack[d].iter().any(|&u| u == image)
        });
        self.gens.push(gen);
        jump
    }

    /// Returns the prefix depth to back up to when a discovered automorphism
    /// proves the current subtree conjugate to an explored one.
    fn descend(&mut self, part: Partition, depth: usize) -> Option<usize> {
        if part.is_discrete() {
            let cert = leaf_certificate(self.g, &part);
            let mut jump: Option<usize> = None;
            match &self.best_cert {
                None => {
                    self.best_cert = Some(cert.clone());
                    self.best_lab = part.lab.clone();
                    self.best_traces.truncate(depth);
                }
                Some(best) => match cert.cmp(best) {
                    std::cmp::Ordering::Less => {
                        self.best_cert = Some(cert.clone());
                        self.best_lab = part.lab.clone();
                        self.best_traces.truncate(depth);
                    }
                    std::cmp::Ordering::Equal => {
                        let best_lab = std::mem::take(&mut self.best_lab);
                        jump = self.record_automorphism(&part.lab, &best_lab);
                        self.best_lab = best_lab;
                    }
                    std::cmp::Ordering::Greater => {}
                },
            }
            match &self.rho_cert {
                None => {
                    self.rho_cert = Some(cert);
                    self.rho_lab = part.lab;
                }
                Some(rho) if *rho == cert => {
                    let rho_lab = std::mem::take(&mut self.rho_lab);
                    let j = self.record_automorphism(&part.lab, &rho_lab);
                    self.rho_lab = rho_lab;
                    jump = match (jump, j) {
                        (Some(a), Some(b)) => Some(a.min(b)),
                        (a, b) => a.or(b),
                    };
                }
                _ => {}
            }
            return jump;
        }

        let (s, e) = part.target_cell().expect("non-discrete partition has a target");
        let candidates: Vec<u32> = part.lab[s..e].to_vec();
        self.explored_stack.push(Vec::new());
        let my_level = self.prefix.len();
        for v in candidates {
            if !self.explored_stack[my_level].is_empty() {
                let mut uf = self.stabilizer_orbits();
                let rv = uf.find(v);
                if self.explored_stack[my_level].iter().any(|&u| uf.find(u) == rv) {
                    continue;
                }
            }
            self.explored_stack[my_level].push(v);
            self.prefix.push(v);

            // individualize v at the front of its cell, then refine
            let mut child = part.clone();
            let vp = child.pos[v as usize] as usize;
            let first = child.lab[s];
            child.lab[s] = v;
            child.lab[vp] = first;
            child.pos[v as usize] = s as u32;
            child.pos[first as usize] = vp as u32;
            let insert_at = child.starts.binary_search(&(s as u32)).unwrap() + 1;
            child.starts.insert(insert_at, s as u32 + 1);
            let mut queue = vec![child.mask_of_range(s, s + 1, self.g.words)];
            let trace = refine(self.g, &mut child, &mut queue);

            // path-invariant pruning against the best leaf's trace prefix
            let keep = if self.best_cert.is_none() || depth >= self.best_traces.len() {
                self.best_traces.truncate(depth);
                self.best_traces.push(trace);
                true
            } else {
                match trace.cmp(&self.best_traces[depth]) {
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => true,
                    std::cmp::Ordering::Less => {
                        self.best_cert = None;
                        self.best_traces.truncate(depth);
                        self.best_traces.push(trace);
                        true
                    }
                }
            };
            let jump = if keep { self.descend(child, depth + 1) } else { None };
            self.prefix.pop();
            if let Some(d) = jump {
                if d < my_level {
                    self.explored_stack.pop();
                    return Some(d);
                }
                // d == my_level: the candidate just finished is conjugate to
                // an explored sibling; move on to the next one
            }
        }
        self.explored_stack.pop();
        None
    }
}

/// Canonical certificate of a colored graph: equal certificates exactly when
/// the graphs are isomorphic by a color-preserving map.
pub fn canonical_certificate(g: &ColoredGraph) -> Vec<u8> {
    let mut part = Partition::unit(g.n, g.color_split);
    let mut queue: Vec<Vec<u64>> = (0..part.starts.len())
        .map(|idx| {
            let (s, e) = part.cell_bounds(idx);
            part.mask_of_range(s, e, g.words)
        })
        .collect();
    let root_trace = refine(g, &mut part, &mut queue);
    let mut search = CanonSearch {
        g,
        best_traces: vec![root_trace],
        best_cert: None,
        best_lab: Vec::new(),
        rho_cert: None,
        rho_lab: Vec::new(),
        gens: Vec::new(),
        prefix: Vec::new(),
        explored_stack: Vec::new(),
    };
    if part.is_discrete() {
        return leaf_certificate(g, &part);
    }
    search.descend(part, 1);
    search.best_cert.expect("search visits at least one leaf")
}

/// Certificate of the Hadamard matrix generated by a quadruple.
pub fn quadruple_certificate(q: &Quadruple) -> Result<Vec<u8>, HadError> {
    let h = build_qt_hadamard(q)?;
    Ok(canonical_certificate(&mckay_graph(&h)))
}

pub fn certificate_hex(cert: &[u8]) -> String {
    cert.iter().map(|b| format!("{b:02x}")).collect()
}

/// One representative per Hadamard equivalence class, preserving the order
/// of first appearance in the (sorted) input.
pub fn hadamard_dedup(list: &[Quadruple]) -> Result<Vec<Quadruple>, HadError> {
    let mut sorted: Vec<&Quadruple> = list.iter().collect();
    sorted.sort();
    let certs: Vec<Vec<u8>> = sorted
        .par_iter()
        .map(|q| quadruple_certificate(q))
        .collect::<Result<_, _>>()?;
    let mut seen: HashMap<Vec<u8>, ()> = HashMap::new();
    let mut out = Vec::new();
    for (q, cert) in sorted.into_iter().zip(certs) {
        if seen.insert(cert, ()).is_none() {
            out.push(q.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::{self, Op};
    use crate::seq::BinarySeq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn quad(s: &str) -> Quadruple {
        s.parse().unwrap()
    }

    #[test]
    fn order_one_blocks() {
        let q = quad("- - - -");
        let h = build_qt_hadamard(&q).unwrap();
        assert_eq!(h.order(), 4);
        assert!(h.is_hadamard());
        let g = mckay_graph(&h);
        assert_eq!(g.order(), 16);
        // each matrix entry contributes two edges
        assert_eq!(g.edge_count(), 2 * 4 * 4);
    }

    #[test]
    fn single_entry_matrix_graph() {
        let h = SignMatrix::new(1, vec![1]).unwrap();
        let g = mckay_graph(&h);
        assert_eq!(g.order(), 4);
        assert_eq!(g.edge_count(), 2);
        assert!(g.adjacent(0, 2)); // r+ to c+
        assert!(g.adjacent(1, 3)); // r- to c-
        assert!(!g.adjacent(0, 3));
        assert!(!g.adjacent(0, 1)); // twins never adjacent
    }

    #[test]
    fn non_qt_input_rejected() {
        let q = quad("++ ++ ++ ++");
        assert_eq!(build_qt_hadamard(&q), Err(HadError::NotHadamard));
    }

    #[test]
    fn block_conditions_hold() {
        // AAᵀ + BBᵀ + CCᵀ + DDᵀ = 4n I and the three antisymmetric block
        // conditions, computed directly on the circulant blocks.
        let q = quad("--- +-- +-- +--");
        let n = q.len();
        let circ = |s: &BinarySeq| -> Vec<Vec<i64>> {
            (0..n)
                .map(|i| (0..n).map(|j| s.entries()[(j + n - i) % n] as i64).collect())
                .collect()
        };
        let mats: Vec<Vec<Vec<i64>>> = q.seqs().iter().map(circ).collect();
        let mul_t = |x: &Vec<Vec<i64>>, y: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            (0..n)
                .map(|i| (0..n).map(|k| (0..n).map(|j| x[i][j] * y[k][j]).sum()).collect())
                .collect()
        };
        let (a, b, c, d) = (&mats[0], &mats[1], &mats[2], &mats[3]);
        for i in 0..n {
            for j in 0..n {
                let sq = mul_t(a, a)[i][j] + mul_t(b, b)[i][j] + mul_t(c, c)[i][j]
                    + mul_t(d, d)[i][j];
                assert_eq!(sq, if i == j { 4 * n as i64 } else { 0 });
                let c1 = mul_t(b, a)[i][j] - mul_t(a, b)[i][j] + mul_t(d, c)[i][j]
                    - mul_t(c, d)[i][j];
                let c2 = mul_t(c, a)[i][j] - mul_t(a, c)[i][j] + mul_t(b, d)[i][j]
                    - mul_t(d, b)[i][j];
                let c3 = mul_t(d, a)[i][j] - mul_t(a, d)[i][j] + mul_t(c, b)[i][j]
                    - mul_t(b, c)[i][j];
                assert_eq!((c1, c2, c3), (0, 0, 0));
            }
        }
    }

    #[test]
    fn row_negation_and_column_permutation_preserve_certificate() {
        let q = quad("--- +-- +-- +--");
        let h = build_qt_hadamard(&q).unwrap();
        let m = h.order();
        let base = canonical_certificate(&mckay_graph(&h));

        let mut negated = vec![0i8; m * m];
        for i in 0..m {
            for j in 0..m {
                let sign = if i == 3 { -1 } else { 1 };
                negated[i * m + j] = sign * h.get(i, j);
            }
        }
        let hn = SignMatrix::new(m, negated).unwrap();
        assert!(hn.is_hadamard());
        assert_eq!(canonical_certificate(&mckay_graph(&hn)), base);

        let mut permuted = vec![0i8; m * m];
        for i in 0..m {
            for j in 0..m {
                permuted[i * m + j] = h.get(i, (j + 5) % m);
            }
        }
        let hp = SignMatrix::new(m, permuted).unwrap();
        assert_eq!(canonical_certificate(&mckay_graph(&hp)), base);
    }

    #[test]
    fn cycle_relabelings_share_certificate() {
        // two labelings of an 8-cycle, one color class
        let mut g1 = ColoredGraph::new(8, 0);
        for v in 0..8 {
            g1.add_edge(v, (v + 1) % 8);
        }
        let mut g2 = ColoredGraph::new(8, 0);
        let relabel = [3usize, 6, 1, 4, 7, 2, 5, 0];
        for v in 0..8 {
            g2.add_edge(relabel[v], relabel[(v + 1) % 8]);
        }
        assert_eq!(canonical_certificate(&g1), canonical_certificate(&g2));

        // a different graph (8-path) must differ
        let mut g3 = ColoredGraph::new(8, 0);
        for v in 0..7 {
            g3.add_edge(v, v + 1);
        }
        assert_ne!(canonical_certificate(&g1), canonical_certificate(&g3));
    }

    /// Brute-force color-preserving isomorphism for tiny graphs.
    fn brute_isomorphic(a: &ColoredGraph, b: &ColoredGraph) -> bool {
        if a.order() != b.order() || a.color_split != b.color_split {
            return false;
        }
        let n = a.order();
        let split = a.color_split;
        let mut perm: Vec<usize> = (0..n).collect();
        // permute within each color class
        fn perms(items: Vec<usize>) -> Vec<Vec<usize>> {
            if items.len() <= 1 {
                return vec![items];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut rest = items.clone();
                let x = rest.remove(i);
                for mut p in perms(rest) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        let first: Vec<usize> = (0..split).collect();
        let second: Vec<usize> = (split..n).collect();
        for p1 in perms(first) {
            'second: for p2 in perms(second.clone()) {
                for (i, &v) in p1.iter().enumerate() {
                    perm[i] = v;
                }
                for (i, &v) in p2.iter().enumerate() {
                    perm[split + i] = v;
                }
                for u in 0..n {
                    for v in 0..n {
                        if a.adjacent(u, v) != b.adjacent(perm[u], perm[v]) {
                            continue 'second;
                        }
                    }
                }
                return true;
            }
        }
        false
    }

    #[test]
    fn certificate_equality_matches_brute_force_isomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut graphs = Vec::new();
        for _ in 0..24 {
            let n = rng.gen_range(2..=8);
            let split = rng.gen_range(0..=n);
            let mut g = ColoredGraph::new(n, split);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.4) {
                        g.add_edge(u, v);
                    }
                }
            }
            graphs.push(g);
        }
        let certs: Vec<Vec<u8>> = graphs.iter().map(canonical_certificate).collect();
        for i in 0..graphs.len() {
            for j in (i + 1)..graphs.len() {
                let iso = brute_isomorphic(&graphs[i], &graphs[j]);
                assert_eq!(iso, certs[i] == certs[j], "graphs {i} and {j}");
            }
        }
    }

    #[test]
    fn certificate_invariant_under_random_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..20 {
            let n = rng.gen_range(2..=10);
            let split = rng.gen_range(0..=n);
            let mut g = ColoredGraph::new(n, split);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            // random color-preserving relabeling
            let mut map: Vec<usize> = (0..n).collect();
            map[..split].shuffle(&mut rng);
            map[split..].shuffle(&mut rng);
            let mut h = ColoredGraph::new(n, split);
            for u in 0..n {
                for v in (u + 1)..n {
                    if g.adjacent(u, v) {
                        h.add_edge(map[u], map[v]);
                    }
                }
            }
            assert_eq!(canonical_certificate(&g), canonical_certificate(&h));
        }
    }

    #[test]
    fn qt_ops_preserve_hadamard_certificate() {
        let q = quad("--- +-- +-- +--");
        let base = quadruple_certificate(&q).unwrap();
        for op in [
            Op::NegateSwap { negate: 1, swap: (2, 3) },
            Op::CyclicShift(1),
            Op::Decimate(2),
        ] {
            let moved = equiv::apply(op, &q).unwrap();
            assert_eq!(quadruple_certificate(&moved).unwrap(), base, "{op:?}");
        }
    }

    #[test]
    fn hadamard_dedup_collapses_equivalent_quadruples() {
        let q = quad("--- +-- +-- +--");
        let moved = equiv::apply(Op::CyclicShift(1), &q).unwrap();
        let reps = hadamard_dedup(&[q, moved]).unwrap();
        assert_eq!(reps.len(), 1);
    }
}
