//! Join complexes, graphs, and their distinguished substructures.
//!
//! A join complex `[n_1]*...*[n_{k+1}]` has vertex set split into k+1 lines;
//! a top face picks one symbol per line. Faces, octahedra (one 2-element
//! subset per line) and triple subcomplexes (one 3-element subset per line)
//! are all indexed lexicographically so certificate column order is stable
//! across runs.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Join of finite sets; `k = sizes.len() - 1` is the dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JoinComplex {
    sizes: Vec<usize>,
}

impl JoinComplex {
    /// Every factor must have at least 3 symbols.
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::Invalid(
                "a join complex needs at least two factors".into(),
            ));
        }
        if let Some(&n) = sizes.iter().find(|&&n| n < 3) {
            return Err(Error::Invalid(format!(
                "join factor size {n} < 3 is not supported"
            )));
        }
        Ok(JoinComplex { sizes })
    }

    /// The joinpower `[n]^{*k+1}`.
    pub fn power(n: usize, k: usize) -> Result<Self> {
        Self::new(vec![n; k + 1])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn k(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn num_coords(&self) -> usize {
        self.sizes.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Global vertex id of symbol `value` on line `coord`.
    pub fn vertex_id(&self, coord: usize, value: usize) -> usize {
        self.sizes[..coord].iter().sum::<usize>() + value
    }

    pub fn top_face_count(&self) -> usize {
        self.sizes.iter().product()
    }

    /// Lexicographic index of a top face, first coordinate most significant.
    pub fn face_index(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.sizes.len());
        let mut idx = 0;
        for (a, n) in tuple.iter().zip(&self.sizes) {
            debug_assert!(a < n);
            idx = idx * n + a;
        }
        idx
    }

    pub fn face_tuple(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for (slot, &n) in out.iter_mut().zip(&self.sizes).rev() {
            let _ = slot;
            let _ = n;
        }
        for i in (0..self.sizes.len()).rev() {
            out[i] = idx % self.sizes[i];
            idx /= self.sizes[i];
        }
        out
    }

    pub fn face_vertices(&self, idx: usize) -> Vec<usize> {
        self.face_tuple(idx)
            .iter()
            .enumerate()
            .map(|(c, &a)| self.vertex_id(c, a))
            .collect()
    }

    pub fn octahedron_count(&self) -> usize {
        self.sizes.iter().map(|&n| n * (n - 1) / 2).product()
    }

    /// All octahedra in lexicographic order over their pair tuples.
    pub fn octahedra(&self) -> Vec<Octahedron> {
        self.sizes
            .iter()
            .map(|&n| (0..n).tuple_combinations::<(usize, usize)>().collect::<Vec<_>>())
            .multi_cartesian_product_owned()
            .map(|pairs| Octahedron { pairs })
            .collect()
    }

    pub fn octahedron_index(&self, oct: &Octahedron) -> usize {
        let mut idx = 0;
        for (c, &(a, b)) in oct.pairs.iter().enumerate() {
            let n = self.sizes[c];
            idx = idx * (n * (n - 1) / 2) + pair_rank(n, a, b);
        }
        idx
    }

    pub fn triple_count(&self) -> usize {
        self.sizes
            .iter()
            .map(|&n| n * (n - 1) * (n - 2) / 6)
            .product()
    }

    /// All subcomplexes isomorphic to `[3]^{*k+1}`, lexicographic.
    pub fn triple_subcomplexes(&self) -> Vec<TripleSubcomplex> {
        self.sizes
            .iter()
            .map(|&n| (0..n).tuple_combinations::<(usize, usize, usize)>().map(|(a, b, c)| [a, b, c]).collect::<Vec<_>>())
            .multi_cartesian_product_owned()
            .map(|triples| TripleSubcomplex { triples })
            .collect()
    }

    pub fn triple_index(&self, x: &TripleSubcomplex) -> usize {
        let mut idx = 0;
        for (c, t) in x.triples.iter().enumerate() {
            let n = self.sizes[c];
            idx = idx * (n * (n - 1) * (n - 2) / 6) + triple_rank(n, t);
        }
        idx
    }

    pub fn descriptor(&self) -> String {
        format!("join:{}", self.sizes.iter().map(|n| n.to_string()).join(","))
    }
}

/// Cartesian product of owned per-coordinate choice lists.
trait MultiProductOwned: Iterator + Sized {
    fn multi_cartesian_product_owned(self) -> std::vec::IntoIter<Vec<<Self::Item as IntoIterator>::Item>>
    where
        Self::Item: IntoIterator,
        <Self::Item as IntoIterator>::Item: Clone;
}

impl<I: Iterator> MultiProductOwned for I {
    fn multi_cartesian_product_owned(self) -> std::vec::IntoIter<Vec<<Self::Item as IntoIterator>::Item>>
    where
        Self::Item: IntoIterator,
        <Self::Item as IntoIterator>::Item: Clone,
    {
        let lists: Vec<Vec<_>> = self.map(|l| l.into_iter().collect()).collect();
        let mut out = vec![Vec::new()];
        for list in &lists {
            let mut next = Vec::with_capacity(out.len() * list.len());
            for prefix in &out {
                for item in list {
                    let mut p = prefix.clone();
                    p.push(item.clone());
                    next.push(p);
                }
            }
            out = next;
        }
        if lists.is_empty() {
            out.clear();
        }
        out.into_iter()
    }
}

fn pair_rank(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    // Pairs (0,1),(0,2),...,(0,n-1),(1,2),... in lex order.
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

fn triple_rank(n: usize, t: &[usize; 3]) -> usize {
    let mut rank = 0;
    let mut prev = 0;
    let mut remaining = 3;
    for (pos, &v) in t.iter().enumerate() {
        for x in prev..v {
            rank += binom(n - 1 - x, remaining - 1);
        }
        prev = v + 1;
        remaining -= 1;
        let _ = pos;
    }
    rank
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// One 2-element subset per join coordinate; its top faces form a k-cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Octahedron {
    pub pairs: Vec<(usize, usize)>,
}

impl Octahedron {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        let pairs = pairs
            .into_iter()
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        Octahedron { pairs }
    }

    /// Face indices of the `2^{k+1}` top faces, ascending.
    pub fn top_faces(&self, complex: &JoinComplex) -> Vec<usize> {
        let mut faces: Vec<usize> = self
            .pairs
            .iter()
            .map(|&(a, b)| vec![a, b])
            .multi_cartesian_product_owned()
            .map(|tuple| complex.face_index(&tuple))
            .collect();
        faces.sort_unstable();
        faces
    }

    pub fn vertex_disjoint(&self, other: &Octahedron) -> bool {
        self.pairs.iter().zip(&other.pairs).all(|(p, q)| {
            p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1
        })
    }
}

/// One 3-element subset per join coordinate, isomorphic to `[3]^{*k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleSubcomplex {
    pub triples: Vec<[usize; 3]>,
}

impl TripleSubcomplex {
    /// Face indices of the `3^{k+1}` top faces, ascending.
    pub fn top_faces(&self, complex: &JoinComplex) -> Vec<usize> {
        let mut faces: Vec<usize> = self
            .triples
            .iter()
            .map(|t| t.to_vec())
            .multi_cartesian_product_owned()
            .map(|tuple| complex.face_index(&tuple))
            .collect();
        faces.sort_unstable();
        faces
    }

    pub fn face_tuples(&self) -> Vec<Vec<usize>> {
        self.triples
            .iter()
            .map(|t| t.to_vec())
            .multi_cartesian_product_owned()
            .collect()
    }

    pub fn contains_tuple(&self, tuple: &[usize]) -> bool {
        tuple
            .iter()
            .zip(&self.triples)
            .all(|(a, t)| t.contains(a))
    }

    /// The `2^k` unordered pairs `{P,Q}` of octahedra inside this
    /// subcomplex whose only common top face is `e`.
    pub fn complementary_pairs(&self, e: &[usize]) -> Result<Vec<(Octahedron, Octahedron)>> {
        if !self.contains_tuple(e) {
            return Err(Error::Invalid(format!(
                "face {e:?} does not lie in the triple subcomplex"
            )));
        }
        // Per coordinate: P takes {e_i, x}, Q takes {e_i, y} with {x, y} the
        // other two symbols. Two ordered choices per coordinate; fixing the
        // first coordinate kills the swap symmetry.
        let mut splits = Vec::new();
        for (i, t) in self.triples.iter().enumerate() {
            let others: Vec<usize> = t.iter().copied().filter(|&v| v != e[i]).collect();
            debug_assert_eq!(others.len(), 2);
            splits.push(((e[i], others[0]), (e[i], others[1])));
        }
        let k1 = self.triples.len();
        let mut out = Vec::with_capacity(1 << (k1 - 1));
        for choice in 0..(1usize << (k1 - 1)) {
            let mut p = Vec::with_capacity(k1);
            let mut q = Vec::with_capacity(k1);
            for (i, &(first, second)) in splits.iter().enumerate() {
                let flip = i > 0 && (choice >> (i - 1)) & 1 == 1;
                if flip {
                    p.push(second);
                    q.push(first);
                } else {
                    p.push(first);
                    q.push(second);
                }
            }
            let (p, q) = (Octahedron::new(p), Octahedron::new(q));
            if p <= q {
                out.push((p, q));
            } else {
                out.push((q, p));
            }
        }
        out.sort();
        Ok(out)
    }
}

/// 3-, 4- and 5-element subsets of `[n]`, lexicographic.
pub struct KnStructures {
    pub triples: Vec<[usize; 3]>,
    pub quads: Vec<[usize; 4]>,
    pub quints: Vec<[usize; 5]>,
}

pub fn kn_structures(n: usize) -> KnStructures {
    let triples = (0..n)
        .tuple_combinations()
        .map(|(a, b, c)| [a, b, c])
        .collect();
    let quads = (0..n)
        .tuple_combinations()
        .map(|(a, b, c, d)| [a, b, c, d])
        .collect();
    let quints = (0..n)
        .tuple_combinations()
        .map(|(a, b, c, d, e)| [a, b, c, d, e])
        .collect();
    KnStructures { triples, quads, quints }
}

/// The 3 unordered pairs `{P,Q}` of 3-subsets of the 5-set `F` with
/// `P ∩ Q = {v}`.
pub fn kn_complementary_pairs(f: &[usize; 5], v: usize) -> Result<Vec<([usize; 3], [usize; 3])>> {
    if !f.contains(&v) {
        return Err(Error::Invalid(format!("{v} is not an element of {f:?}")));
    }
    let rest: Vec<usize> = f.iter().copied().filter(|&x| x != v).collect();
    let mut out = Vec::with_capacity(3);
    // Splits of the remaining 4 symbols into two 2-sets; fix rest[0] on the
    // P side to enumerate unordered pairs once.
    for partner in 1..4 {
        let mut p = vec![v, rest[0], rest[partner]];
        let mut q = vec![v];
        for (i, &x) in rest.iter().enumerate().skip(1) {
            if i != partner {
                q.push(x);
            }
        }
        p.sort_unstable();
        q.sort_unstable();
        let (mut pa, mut qa) = ([0; 3], [0; 3]);
        pa.copy_from_slice(&p);
        qa.copy_from_slice(&q);
        if pa <= qa {
            out.push((pa, qa));
        } else {
            out.push((qa, pa));
        }
    }
    out.sort();
    Ok(out)
}

/// Simple undirected graph with a fixed lexicographic edge order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::Invalid(format!("loop at vertex {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph {
            n,
            edges: set.into_iter().collect(),
        })
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).tuple_combinations()).expect("complete graph")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Graph::new(a + b, (0..a).cartesian_product(a..a + b)).expect("complete bipartite graph")
    }

    /// Hub 0 joined to the cycle 1..n-1.
    pub fn wheel(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Invalid("a wheel needs at least 4 vertices".into()));
        }
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
        for v in 1..n {
            let w = if v == n - 1 { 1 } else { v + 1 };
            edges.push((v, w));
        }
        Graph::new(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Connected components among non-isolated vertices, as vertex sets.
    pub fn components(&self) -> Vec<BTreeSet<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] || self.degree(start) == 0 {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Subgraph induced by an edge subset (keeps this graph's vertex ids).
    pub fn edge_subgraph(&self, edge_indices: impl IntoIterator<Item = usize>) -> Graph {
        let edges: Vec<(usize, usize)> = edge_indices.into_iter().map(|i| self.edges[i]).collect();
        Graph::new(self.n, edges).expect("edge subgraph")
    }

    pub fn descriptor(&self) -> String {
        format!("graph:{}v{}e", self.n, self.edges.len())
    }
}

/// Fixed-point-free involution on vertices and edges of a graph.
#[derive(Clone, Debug)]
pub struct Involution {
    pub vertex: Vec<usize>,
    pub edge: Vec<usize>,
}

/// `K_{n,n}` minus the diagonal: vertices `0..n` unprimed, `n..2n` primed,
/// edges `(i, n+j)` for `i != j`. The involution swaps the parts.
pub fn deleted_graph(n: usize) -> Result<(Graph, Involution)> {
    if n < 3 {
        return Err(Error::Invalid(format!(
            "deleted bipartite graph needs n >= 3, got {n}"
        )));
    }
    let mut edges = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                edges.push((i, n + j));
            }
        }
    }
    let g = Graph::new(2 * n, edges)?;
    let vertex: Vec<usize> = (0..2 * n).map(|v| (v + n) % (2 * n)).collect();
    let edge = (0..g.edge_count())
        .map(|e| {
            let (u, v) = g.edges[e];
            g.edge_index(vertex[u], vertex[v]).expect("involution edge")
        })
        .collect();
    Ok((g, Involution { vertex, edge }))
}

/// Classification of a graph up to homeomorphism, as far as the
/// decomposition of symmetric 2-cycles needs it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomeoType {
    K5,
    K33,
    DisjointCyclePair,
    Wheel,
    Other,
}

fn is_cycle_component(g: &Graph, comp: &BTreeSet<usize>) -> bool {
    comp.iter().all(|&v| g.degree(v) == 2)
}

/// Suppress degree-2 vertices; `None` if a loop or multi-edge would form.
fn suppressed_simple(g: &Graph) -> Option<Graph> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v) in g.edges() {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    // Multi-adjacency during suppression is tracked with counts.
    let mut multi: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(u, v) in g.edges() {
        *multi.entry((u, v)).or_default() += 1;
    }
    loop {
        let deg = |m: &BTreeMap<(usize, usize), usize>, v: usize| -> usize {
            m.iter()
                .filter(|&(&(a, b), _)| a == v || b == v)
                .map(|(_, &c)| c)
                .sum()
        };
        let vertices: BTreeSet<usize> = multi.keys().flat_map(|&(a, b)| [a, b]).collect();
        let Some(&v) = vertices.iter().find(|&&v| deg(&multi, v) == 2) else {
            break;
        };
        let incident: Vec<(usize, usize)> = multi
            .keys()
            .copied()
            .filter(|&(a, b)| a == v || b == v)
            .collect();
        let mut ends = Vec::new();
        for &(a, b) in &incident {
            let other = if a == v { b } else { a };
            let count = multi[&(a, b)];
            for _ in 0..count {
                ends.push(other);
            }
            multi.remove(&(a, b));
        }
        if ends.len() != 2 {
            return None;
        }
        let (x, y) = (ends[0].min(ends[1]), ends[0].max(ends[1]));
        if x == y {
            return None; // loop
        }
        *multi.entry((x, y)).or_default() += 1;
    }
    if multi.values().any(|&c| c > 1) {
        return None;
    }
    // Renumber to a compact simple graph.
    let vertices: Vec<usize> = multi.keys().flat_map(|&(a, b)| [a, b]).unique().sorted().collect();
    let idx: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    Graph::new(
        vertices.len(),
        multi.keys().map(|&(a, b)| (idx[&a], idx[&b])),
    )
    .ok()
}

fn is_complete(g: &Graph, n: usize) -> bool {
    g.vertex_count() == n && g.edge_count() == n * (n - 1) / 2
}

fn is_k33(g: &Graph) -> bool {
    if g.vertex_count() != 6 || g.edge_count() != 9 {
        return false;
    }
    if (0..6).any(|v| g.degree(v) != 3) {
        return false;
    }
    // Bipartition by non-adjacency to vertex 0.
    let part0: Vec<usize> = (0..6).filter(|&v| v == 0 || !g.has_edge(0, v)).collect();
    let part1: Vec<usize> = (0..6).filter(|&v| v != 0 && g.has_edge(0, v)).collect();
    part0.len() == 3
        && part1.len() == 3
        && part0
            .iter()
            .all(|&u| part1.iter().all(|&w| g.has_edge(u, w)))
        && part0.iter().tuple_combinations().all(|(&u, &w)| !g.has_edge(u, w))
        && part1.iter().tuple_combinations().all(|(&u, &w)| !g.has_edge(u, w))
}

fn is_wheel(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n < 4 {
        return false;
    }
    'hub: for hub in 0..n {
        if g.degree(hub) != n - 1 {
            continue;
        }
        // The rest must form a single cycle.
        for v in 0..n {
            if v != hub && g.degree(v) != 3 {
                continue 'hub;
            }
        }
        let rim: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| a != hub && b != hub)
            .collect();
        if rim.len() != n - 1 {
            continue;
        }
        let rim_graph = Graph::new(n, rim).expect("rim");
        let comps = rim_graph.components();
        if comps.len() == 1 && is_cycle_component(&rim_graph, &comps[0]) && comps[0].len() == n - 1
        {
            return true;
        }
    }
    false
}

/// Classifies a graph after suppressing degree-2 vertices.
pub fn homeomorphism_type(g: &Graph) -> HomeoType {
    if (0..g.vertex_count()).any(|v| g.degree(v) == 1) {
        return HomeoType::Other;
    }
    let comps = g.components();
    match comps.len() {
        0 | 1 => {}
        2 => {
            if comps.iter().all(|c| is_cycle_component(g, c)) {
                return HomeoType::DisjointCyclePair;
            }
            return HomeoType::Other;
        }
        _ => return HomeoType::Other,
    }
    if comps.len() == 1 && is_cycle_component(g, &comps[0]) {
        return HomeoType::Other; // a single cycle
    }
    let Some(h) = suppressed_simple(g) else {
        return HomeoType::Other;
    };
    if (0..h.vertex_count()).any(|v| h.degree(v) == 1) {
        return HomeoType::Other;
    }
    if is_complete(&h, 5) {
        HomeoType::K5
    } else if is_k33(&h) {
        HomeoType::K33
    } else if is_wheel(&h) {
        HomeoType::Wheel
    } else {
        HomeoType::Other
    }
}

/// A subgraph homeomorphic to `K_5` or `K_{3,3}`, as a set of edges of the
/// host graph together with its branch structure.
#[derive(Clone, Debug)]
pub struct KuratowskiSubgraph {
    pub kind: HomeoType,
    pub branch_vertices: Vec<usize>,
    /// One path per branch: (endpoint pair, full vertex sequence).
    pub branch_paths: Vec<((usize, usize), Vec<usize>)>,
    pub edge_indices: BTreeSet<usize>,
}

struct KuratowskiSearch<'a> {
    g: &'a Graph,
    budget: usize,
    work: usize,
    truncated: bool,
    found: Vec<KuratowskiSubgraph>,
    seen: HashSet<BTreeSet<usize>>,
}

impl<'a> KuratowskiSearch<'a> {
    fn spend(&mut self) -> bool {
        self.work += 1;
        if self.work > self.budget {
            self.truncated = true;
            return false;
        }
        true
    }

    /// Assign internally disjoint paths for the demanded branch pairs.
    fn assign_paths(
        &mut self,
        branch: &[usize],
        demands: &[(usize, usize)],
        at: usize,
        used_interior: &mut Vec<bool>,
        paths: &mut Vec<((usize, usize), Vec<usize>)>,
        kind: HomeoType,
    ) {
        if self.truncated || self.found.len() >= 4096 {
            return;
        }
        if at == demands.len() {
            let mut edge_indices = BTreeSet::new();
            for (_, path) in paths.iter() {
                for w in path.windows(2) {
                    edge_indices.insert(self.g.edge_index(w[0], w[1]).expect("path edge"));
                }
            }
            if self.seen.insert(edge_indices.clone()) {
                let sub = KuratowskiSubgraph {
                    kind,
                    branch_vertices: branch.to_vec(),
                    branch_paths: paths.clone(),
                    edge_indices,
                };
                debug_assert!(matches!(
                    homeomorphism_type(&self.g.edge_subgraph(sub.edge_indices.iter().copied())),
                    HomeoType::K5 | HomeoType::K33
                ));
                self.found.push(sub);
            }
            return;
        }
        let (s, t) = demands[at];
        let (bs, bt) = (branch[s], branch[t]);
        // DFS over simple paths from bs to bt with unused non-branch interiors.
        let mut stack: Vec<usize> = vec![bs];
        self.extend_path(branch, demands, at, used_interior, paths, kind, &mut stack, bt);
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_path(
        &mut self,
        branch: &[usize],
        demands: &[(usize, usize)],
        at: usize,
        used_interior: &mut Vec<bool>,
        paths: &mut Vec<((usize, usize), Vec<usize>)>,
        kind: HomeoType,
        stack: &mut Vec<usize>,
        target: usize,
    ) {
        if self.truncated {
            return;
        }
        let v = *stack.last().expect("non-empty path stack");
        for w in self.g.neighbors(v) {
            if !self.spend() {
                return;
            }
            if w == target {
                paths.push(((stack[0], target), {
                    let mut p = stack.clone();
                    p.push(target);
                    p
                }));
                let interiors: Vec<usize> = stack[1..].to_vec();
                for &u in &interiors {
                    used_interior[u] = true;
                }
                self.assign_paths(branch, demands, at + 1, used_interior, paths, kind);
                for &u in &interiors {
                    used_interior[u] = false;
                }
                paths.pop();
                continue;
            }
            if branch.contains(&w) || used_interior[w] || stack.contains(&w) {
                continue;
            }
            stack.push(w);
            self.extend_path(branch, demands, at, used_interior, paths, kind, stack, target);
            stack.pop();
        }
    }
}

/// Enumerates subgraphs homeomorphic to `K_5` or `K_{3,3}` by brute-force
/// choice of branch vertices and internally disjoint connecting paths.
/// `budget` bounds the number of search steps; exceeding it sets the
/// truncation flag on the result.
pub fn kuratowski_subgraphs(g: &Graph, budget: usize) -> (Vec<KuratowskiSubgraph>, bool) {
    let n = g.vertex_count();
    let mut search = KuratowskiSearch {
        g,
        budget,
        work: 0,
        truncated: false,
        found: Vec::new(),
        seen: HashSet::new(),
    };
    // K5 subdivisions: 5 branch vertices, all 10 pairs.
    let k5_demands: Vec<(usize, usize)> = (0..5).tuple_combinations().collect();
    for branch in (0..n).combinations(5) {
        if search.truncated {
            break;
        }
        if branch.iter().any(|&v| g.degree(v) < 4) {
            continue;
        }
        let mut used = vec![false; n];
        let mut paths = Vec::new();
        search.assign_paths(&branch, &k5_demands, 0, &mut used, &mut paths, HomeoType::K5);
    }
    // K33 subdivisions: parts {x0,x1,x2} and {y0,y1,y2}, all 9 cross pairs.
    let k33_demands: Vec<(usize, usize)> = (0..3).cartesian_product(3..6).collect();
    for six in (0..n).combinations(6) {
        if search.truncated {
            break;
        }
        if six.iter().any(|&v| g.degree(v) < 3) {
            continue;
        }
        for part_x in six.iter().copied().combinations(3) {
            if search.truncated {
                break;
            }
            // Dedup {X,Y} vs {Y,X}: require the six-set minimum in X.
            if !part_x.contains(&six[0]) {
                continue;
            }
            let part_y: Vec<usize> = six.iter().copied().filter(|v| !part_x.contains(v)).collect();
            let branch: Vec<usize> = part_x.iter().chain(&part_y).copied().collect();
            let mut used = vec![false; n];
            let mut paths = Vec::new();
            search.assign_paths(&branch, &k33_demands, 0, &mut used, &mut paths, HomeoType::K33);
        }
    }
    (search.found, search.truncated)
}
