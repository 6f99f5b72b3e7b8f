//! Cycle spaces over GF(2) and constructive decompositions.
//!
//! Top-dimensional chains of a join complex are dual to subsets of the grid
//! `[n_1] x ... x [n_{k+1}]`: a chain is a cycle exactly when the dual set
//! meets every coordinate line an even number of times (a rook cycle). Every
//! rook cycle decomposes uniquely over the parallelepipeds `P(a)` anchored at
//! the last symbol of each factor, which yields a canonical octahedron basis
//! of the cycle space.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::complexes::{deleted_graph, Graph, Involution, JoinComplex, Octahedron};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::{Error, Result};

/// A formal sum of faces of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub complex: JoinComplex,
    pub dim: usize,
    pub bits: Gf2Vector,
}

impl Chain {
    pub fn zero(complex: &JoinComplex, dim: usize) -> Self {
        let len = FaceTable::new(complex, dim).count;
        Chain {
            complex: complex.clone(),
            dim,
            bits: Gf2Vector::zeros(len),
        }
    }

    pub fn top_from_faces(complex: &JoinComplex, faces: &[usize]) -> Self {
        let mut bits = Gf2Vector::zeros(complex.top_face_count());
        for &f in faces {
            bits.flip(f);
        }
        Chain {
            complex: complex.clone(),
            dim: complex.k(),
            bits,
        }
    }

    /// Validating constructor for external input.
    pub fn top_from_checked_faces(complex: &JoinComplex, faces: &[usize]) -> crate::Result<Self> {
        let n = complex.top_face_count();
        if let Some(&bad) = faces.iter().find(|&&f| f >= n) {
            return Err(Error::Invalid(format!(
                "face index {bad} out of range for {n} top faces"
            )));
        }
        Ok(Self::top_from_faces(complex, faces))
    }

    /// The JSON wire form: sorted face indices.
    pub fn face_indices(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }
}

/// Indexing of the j-dimensional faces of a join complex. A j-face is a
/// choice of j+1 coordinates (the support) plus one symbol for each.
pub struct FaceTable {
    pub dim: usize,
    pub supports: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    pub count: usize,
}

impl FaceTable {
    pub fn new(complex: &JoinComplex, dim: usize) -> Self {
        let sizes = complex.sizes().to_vec();
        let supports: Vec<Vec<usize>> = (0..sizes.len()).combinations(dim + 1).collect();
        let mut offsets = Vec::with_capacity(supports.len());
        let mut count = 0;
        for s in &supports {
            offsets.push(count);
            count += s.iter().map(|&c| sizes[c]).product::<usize>();
        }
        FaceTable {
            dim,
            supports,
            offsets,
            sizes,
            count,
        }
    }

    /// Index of the face with the given support and symbols.
    pub fn index(&self, support: &[usize], values: &[usize]) -> usize {
        let si = self
            .supports
            .binary_search_by(|s| s.as_slice().cmp(support))
            .expect("support in range");
        let mut idx = 0;
        for (&c, &v) in support.iter().zip(values) {
            idx = idx * self.sizes[c] + v;
        }
        self.offsets[si] + idx
    }

    pub fn decode(&self, idx: usize) -> (Vec<usize>, Vec<usize>) {
        let si = match self.offsets.binary_search(&idx) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let support = self.supports[si].clone();
        let mut rem = idx - self.offsets[si];
        let mut values = vec![0; support.len()];
        for pos in (0..support.len()).rev() {
            let n = self.sizes[support[pos]];
            values[pos] = rem % n;
            rem /= n;
        }
        (support, values)
    }
}

/// Boundary operator from dimension `j` to `j-1`: rows are (j-1)-faces,
/// columns are j-faces.
pub fn boundary_matrix(complex: &JoinComplex, j: usize) -> Result<Gf2Matrix> {
    if j == 0 || j > complex.k() {
        return Err(Error::Invalid(format!(
            "boundary dimension {j} out of range 1..={}",
            complex.k()
        )));
    }
    let cols_table = FaceTable::new(complex, j);
    let rows_table = FaceTable::new(complex, j - 1);
    let mut m = Gf2Matrix::zeros(rows_table.count, cols_table.count);
    for col in 0..cols_table.count {
        let (support, values) = cols_table.decode(col);
        for drop in 0..support.len() {
            let mut s = support.clone();
            let mut v = values.clone();
            s.remove(drop);
            v.remove(drop);
            m.set(rows_table.index(&s, &v), col, true);
        }
    }
    Ok(m)
}

pub fn is_cycle(chain: &Chain) -> Result<bool> {
    if chain.dim == 0 {
        return Ok(chain.bits.count_ones().is_multiple_of(2));
    }
    let b = boundary_matrix(&chain.complex, chain.dim)?;
    Ok(b.mul_vec(&chain.bits).is_zero())
}

/// Subset of the product grid, dual to a top-dimensional chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RookSet {
    pub sizes: Vec<usize>,
    pub bits: Gf2Vector,
}

impl RookSet {
    pub fn from_points(sizes: &[usize], points: &[Vec<usize>]) -> Self {
        let complex = JoinComplex::new(sizes.to_vec()).expect("sizes");
        let mut bits = Gf2Vector::zeros(complex.top_face_count());
        for p in points {
            bits.flip(complex.face_index(p));
        }
        RookSet {
            sizes: sizes.to_vec(),
            bits,
        }
    }
}

/// The duality is the identity on indices: face `(a_1..a_{k+1})` is the grid
/// point with the same coordinates.
pub fn chain_to_rook(chain: &Chain) -> Result<RookSet> {
    if chain.dim != chain.complex.k() {
        return Err(Error::Invalid(
            "rook duality applies to top-dimensional chains".into(),
        ));
    }
    Ok(RookSet {
        sizes: chain.complex.sizes().to_vec(),
        bits: chain.bits.clone(),
    })
}

pub fn rook_to_chain(rook: &RookSet) -> Result<Chain> {
    let complex = JoinComplex::new(rook.sizes.clone())?;
    Ok(Chain {
        dim: complex.k(),
        bits: rook.bits.clone(),
        complex,
    })
}

/// Even intersection with every coordinate line.
pub fn is_rook_cycle(rook: &RookSet) -> bool {
    let complex = JoinComplex::new(rook.sizes.clone()).expect("sizes");
    for coord in 0..rook.sizes.len() {
        // Enumerate lines: all tuples of the other coordinates.
        let others: Vec<usize> = (0..rook.sizes.len()).filter(|&c| c != coord).collect();
        let mut line_tuples = vec![vec![]];
        for &c in &others {
            let mut next = Vec::new();
            for t in &line_tuples {
                for v in 0..rook.sizes[c] {
                    let mut t2 = t.clone();
                    t2.push(v);
                    next.push(t2);
                }
            }
            line_tuples = next;
        }
        for t in &line_tuples {
            let mut parity = false;
            for v in 0..rook.sizes[coord] {
                let mut tuple = vec![0; rook.sizes.len()];
                for (pos, &c) in others.iter().enumerate() {
                    tuple[c] = t[pos];
                }
                tuple[coord] = v;
                if rook.bits.get(complex.face_index(&tuple)) {
                    parity = !parity;
                }
            }
            if parity {
                return false;
            }
        }
    }
    true
}

/// The parallelepiped `P(a)` through `a` and the all-last corner, as an
/// octahedron: pair `{a_i, n_i - 1}` in every coordinate.
pub fn anchored_octahedron(sizes: &[usize], a: &[usize]) -> Octahedron {
    Octahedron::new(
        a.iter()
            .zip(sizes)
            .map(|(&ai, &n)| (ai, n - 1))
            .collect(),
    )
}

/// Decomposes a rook cycle into the anchored parallelepipeds `P(a)` over
/// interior points `a` of the cycle. Their GF(2) sum reproduces the input.
pub fn rook_decomposition(rook: &RookSet) -> Result<Vec<Octahedron>> {
    if !is_rook_cycle(rook) {
        return Err(Error::NotRookCycle);
    }
    let complex = JoinComplex::new(rook.sizes.clone())?;
    let mut out = Vec::new();
    for idx in rook.bits.iter_ones() {
        let tuple = complex.face_tuple(idx);
        if tuple.iter().zip(&rook.sizes).all(|(&a, &n)| a < n - 1) {
            out.push(anchored_octahedron(&rook.sizes, &tuple));
        }
    }
    Ok(out)
}

/// Canonical octahedron basis of the top cycle space: `P(a)` over all
/// interior grid points, lexicographic. Size is the product of `n_i - 1`.
pub fn cycle_space_basis(complex: &JoinComplex) -> Vec<Octahedron> {
    let reduced: Vec<usize> = complex.sizes().iter().map(|&n| n - 1).collect();
    enumerate_tuples(&reduced)
        .map(|a| anchored_octahedron(complex.sizes(), &a))
        .collect()
}

pub fn basis_size(complex: &JoinComplex) -> usize {
    complex.sizes().iter().map(|&n| n - 1).product()
}

/// Coordinates of a top-dimensional cycle over the `P(a)` basis: the bit at
/// basis position `a` is simply membership of the interior point `a`.
pub fn top_cycle_coords(complex: &JoinComplex, chain: &Chain) -> Result<Gf2Vector> {
    let rook = chain_to_rook(chain)?;
    if !is_rook_cycle(&rook) {
        return Err(Error::NotCycle);
    }
    Ok(read_interior_coords(complex, &chain.bits))
}

/// Membership bits at interior grid points, in basis order. Only valid on
/// cycles; `top_cycle_coords` checks, callers on hot paths use this directly.
pub fn read_interior_coords(complex: &JoinComplex, bits: &Gf2Vector) -> Gf2Vector {
    let h = basis_size(complex);
    let mut coords = Gf2Vector::zeros(h);
    let reduced: Vec<usize> = complex.sizes().iter().map(|&n| n - 1).collect();
    for (pos, a) in enumerate_tuples(&reduced).enumerate() {
        if bits.get(complex.face_index(&a)) {
            coords.set(pos, true);
        }
    }
    coords
}

/// Coordinate matrix of all octahedra over the basis: column `j` holds the
/// basis expansion of octahedron `j`.
pub fn octahedron_coords_matrix(complex: &JoinComplex) -> Gf2Matrix {
    let octs = complex.octahedra();
    let mut m = Gf2Matrix::zeros(basis_size(complex), octs.len());
    for (j, oct) in octs.iter().enumerate() {
        let chain = Chain::top_from_faces(complex, &oct.top_faces(complex));
        let coords = read_interior_coords(complex, &chain.bits);
        for i in coords.iter_ones() {
            m.set(i, j, true);
        }
    }
    m
}

fn enumerate_tuples(sizes: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = sizes.iter().product();
    (0..total).map(move |mut idx| {
        let mut t = vec![0; sizes.len()];
        for i in (0..sizes.len()).rev() {
            t[i] = idx % sizes[i];
            idx /= sizes[i];
        }
        t
    })
}

/// Homology data of the deleted bipartite graph: a fundamental-cycle basis
/// whose coordinates can be read off edge membership, plus the action of the
/// part-switching involution and its eigenstructure.
pub struct TildeBasis {
    pub n: usize,
    pub graph: Graph,
    pub involution: Involution,
    pub dim: usize,
    /// Basis cycles as edge sets.
    pub basis: Vec<Gf2Vector>,
    /// One probe edge per basis element; membership bits give coordinates.
    pub probes: Vec<usize>,
    /// Coordinate index of the full 6-cycle on symbols {0,1,2}.
    pub fixed_index: usize,
    /// Index pairs swapped by the involution (coordinate positions).
    pub swap_pairs: Vec<(usize, usize)>,
}

impl TildeBasis {
    /// Coordinates of a 1-cycle in the basis (probe reads; valid on cycles).
    pub fn coords(&self, edge_set: &Gf2Vector) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.dim);
        for (i, &p) in self.probes.iter().enumerate() {
            if edge_set.get(p) {
                v.set(i, true);
            }
        }
        v
    }

    /// Edge set of the cycle with the given coordinates.
    pub fn edge_set(&self, coords: &Gf2Vector) -> Gf2Vector {
        let mut out = Gf2Vector::zeros(self.graph.edge_count());
        for i in coords.iter_ones() {
            out.xor_assign(&self.basis[i]);
        }
        out
    }

    pub fn apply_t_edges(&self, edge_set: &Gf2Vector) -> Gf2Vector {
        let mut out = Gf2Vector::zeros(edge_set.len());
        for e in edge_set.iter_ones() {
            out.flip(self.involution.edge[e]);
        }
        out
    }

    /// Matrix of the involution on homology coordinates.
    pub fn t_matrix(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let img = self.coords(&self.apply_t_edges(&self.basis[j]));
            for i in img.iter_ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    /// The full 6-cycle on symbols {0,1,2} as an edge set.
    pub fn k3_cycle(&self) -> Gf2Vector {
        six_cycle_edges(&self.graph, self.n, [0, 1, 2])
    }

    /// The 6-cycle on three arbitrary symbols, as an edge set.
    pub fn six_cycle(&self, symbols: [usize; 3]) -> Gf2Vector {
        six_cycle_edges(&self.graph, self.n, symbols)
    }
}

/// Edge set of the 6-cycle `t0 t1' t2 t0' t1 t2'` in the deleted graph.
fn six_cycle_edges(g: &Graph, n: usize, t: [usize; 3]) -> Gf2Vector {
    let verts = [t[0], n + t[1], t[2], n + t[0], t[1], n + t[2]];
    let mut bits = Gf2Vector::zeros(g.edge_count());
    for i in 0..6 {
        let (u, v) = (verts[i], verts[(i + 1) % 6]);
        bits.flip(g.edge_index(u, v).expect("six-cycle edge"));
    }
    bits
}

/// Closed-walk cycle `0 1' 2 0' i j' 0` reduced mod 2 (1-based in the
/// customary notation: `1 2' 3 1' i j'`). This is the fundamental cycle of
/// edge `ij'` for the spanning tree `{2 1'} ∪ {0 i'} ∪ {i 0'}`.
fn walk_cycle(g: &Graph, n: usize, i: usize, j: usize) -> Gf2Vector {
    let verts = [0, n + 1, 2, n, i, n + j];
    let mut bits = Gf2Vector::zeros(g.edge_count());
    for p in 0..6 {
        let (u, v) = (verts[p], verts[(p + 1) % 6]);
        if u == v {
            continue;
        }
        if let Some(e) = g.edge_index(u, v) {
            bits.flip(e);
        }
    }
    bits
}

/// Fundamental-cycle basis of the deleted bipartite graph on `n >= 3`
/// symbols. For `n = 3` the basis is the single 6-cycle. For `n >= 4` the
/// basis cycles are `C_{ij'} = 0 1' 2 0' i j'` over the non-tree edges
/// `S = {ij' : i,j >= 1, i != j, (i,j) != (2,1)}`; the complement of `S`
/// is the spanning tree `{2 1'} ∪ {0 i'} ∪ {i 0'}`.
pub fn h1_basis_tilde(n: usize) -> Result<TildeBasis> {
    let (graph, involution) = deleted_graph(n)?;
    if n == 3 {
        let k3 = six_cycle_edges(&graph, 3, [0, 1, 2]);
        let probe = graph.edge_index(0, 3 + 1).expect("probe edge");
        return Ok(TildeBasis {
            n,
            graph,
            involution,
            dim: 1,
            basis: vec![k3],
            probes: vec![probe],
            fixed_index: 0,
            swap_pairs: vec![],
        });
    }
    let mut s_edges: Vec<(usize, usize)> = Vec::new();
    for i in 1..n {
        for j in 1..n {
            if i != j && (i, j) != (2, 1) {
                s_edges.push((i, j));
            }
        }
    }
    s_edges.sort_unstable();
    let dim = s_edges.len();
    debug_assert_eq!(dim, n * n - 3 * n + 1);

    let mut basis = Vec::with_capacity(dim);
    let mut probes = Vec::with_capacity(dim);
    for &(i, j) in &s_edges {
        basis.push(walk_cycle(&graph, n, i, j));
        probes.push(graph.edge_index(i, n + j).expect("S edge"));
    }
    let pos = |i: usize, j: usize| -> usize {
        s_edges.binary_search(&(i, j)).expect("S coordinate")
    };
    let fixed_index = pos(1, 2);
    let mut swap_pairs = Vec::new();
    for &(i, j) in &s_edges {
        if i > j && (i, j) != (2, 1) {
            swap_pairs.push((pos(i, j), pos(j, i)));
        }
    }
    Ok(TildeBasis {
        n,
        graph,
        involution,
        dim,
        basis,
        probes,
        fixed_index,
        swap_pairs,
    })
}

/// A simple cycle, as a closed vertex sequence plus its edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleCycle {
    pub vertices: Vec<usize>,
    pub edges: Gf2Vector,
}

impl SimpleCycle {
    pub fn from_vertices(g: &Graph, vertices: Vec<usize>) -> Self {
        let mut edges = Gf2Vector::zeros(g.edge_count());
        for i in 0..vertices.len() {
            let (u, v) = (vertices[i], vertices[(i + 1) % vertices.len()]);
            edges.flip(g.edge_index(u, v).expect("cycle edge"));
        }
        SimpleCycle { vertices, edges }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

pub fn is_graph_cycle(g: &Graph, edge_set: &Gf2Vector) -> bool {
    let mut deg = vec![0usize; g.vertex_count()];
    for e in edge_set.iter_ones() {
        let (u, v) = g.edges()[e];
        deg[u] += 1;
        deg[v] += 1;
    }
    deg.iter().all(|d| d % 2 == 0)
}

/// Extracts one simple cycle from a nonzero even-degree edge set,
/// deterministically (lowest vertex, lowest-index next edge).
fn extract_simple_cycle(g: &Graph, edge_set: &Gf2Vector) -> SimpleCycle {
    let start = edge_set
        .iter_ones()
        .map(|e| {
            let (u, v) = g.edges()[e];
            u.min(v)
        })
        .min()
        .expect("nonzero edge set");
    let mut path = vec![start];
    let mut used: BTreeSet<usize> = BTreeSet::new();
    loop {
        let v = *path.last().expect("path");
        let e = edge_set
            .iter_ones()
            .find(|&e| {
                let (a, b) = g.edges()[e];
                (a == v || b == v) && !used.contains(&e)
            })
            .expect("even degree guarantees continuation");
        used.insert(e);
        let (a, b) = g.edges()[e];
        let w = if a == v { b } else { a };
        if let Some(pos) = path.iter().position(|&x| x == w) {
            let cycle_vertices = path[pos..].to_vec();
            return SimpleCycle::from_vertices(g, cycle_vertices);
        }
        path.push(w);
    }
}

/// Lowest-index chord of a simple cycle, as cycle positions.
fn find_chord(g: &Graph, cycle: &SimpleCycle) -> Option<(usize, usize)> {
    let l = cycle.vertices.len();
    let mut best: Option<(usize, (usize, usize))> = None;
    for i in 0..l {
        for j in i + 1..l {
            if j == i + 1 || (i == 0 && j == l - 1) {
                continue;
            }
            if let Some(e) = g.edge_index(cycle.vertices[i], cycle.vertices[j]) {
                if best.is_none_or(|(be, _)| e < be) {
                    best = Some((e, (i, j)));
                }
            }
        }
    }
    best.map(|(_, ij)| ij)
}

/// Decomposes a 1-cycle into simple cycles without chords, splitting along
/// the lowest-index chord first.
pub fn chordless_decomposition(g: &Graph, cycle: &Gf2Vector) -> Result<Vec<SimpleCycle>> {
    if !is_graph_cycle(g, cycle) {
        return Err(Error::NotCycle);
    }
    let mut out = Vec::new();
    let mut queue = Vec::new();
    let mut rem = cycle.clone();
    while !rem.is_zero() {
        let c = extract_simple_cycle(g, &rem);
        rem.xor_assign(&c.edges);
        queue.push(c);
    }
    while let Some(c) = queue.pop() {
        match find_chord(g, &c) {
            None => out.push(c),
            Some((i, j)) => {
                let first = c.vertices[i..=j].to_vec();
                let mut second = c.vertices[j..].to_vec();
                second.extend_from_slice(&c.vertices[..=i]);
                queue.push(SimpleCycle::from_vertices(g, first));
                queue.push(SimpleCycle::from_vertices(g, second));
            }
        }
    }
    // Deterministic output order.
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(out)
}

/// A 4-cycle of the deleted bipartite graph: unprimed pair `a`, primed pair
/// `d`, necessarily disjoint as symbol sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FourCycle {
    pub a: (usize, usize),
    pub d: (usize, usize),
}

impl FourCycle {
    pub fn new(a: (usize, usize), d: (usize, usize)) -> Self {
        let norm = |(x, y): (usize, usize)| if x < y { (x, y) } else { (y, x) };
        FourCycle {
            a: norm(a),
            d: norm(d),
        }
    }

    pub fn edge_set(&self, g: &Graph, n: usize) -> Gf2Vector {
        let mut bits = Gf2Vector::zeros(g.edge_count());
        for &x in &[self.a.0, self.a.1] {
            for &y in &[self.d.0, self.d.1] {
                bits.flip(g.edge_index(x, n + y).expect("four-cycle edge"));
            }
        }
        bits
    }
}

/// Decomposes a 1-cycle of the deleted bipartite graph (`n >= 4`) into
/// 4-cycles: chordless pieces have length 4 or 6, and every chordless
/// 6-cycle `m1 m2' m3 m1' m2 m3'` splits into three 4-cycles through an
/// auxiliary symbol outside `{m1,m2,m3}`.
pub fn four_cycle_decomposition(tb: &TildeBasis, cycle: &Gf2Vector) -> Result<Vec<FourCycle>> {
    if tb.n < 4 {
        return Err(Error::Invalid(
            "4-cycle decomposition needs n >= 4; the 6-cycle on 3 symbols is not a sum of 4-cycles"
                .into(),
        ));
    }
    let g = &tb.graph;
    let n = tb.n;
    let pieces = chordless_decomposition(g, cycle)?;
    let mut out = Vec::new();
    for piece in pieces {
        match piece.len() {
            4 => {
                let mut a = Vec::new();
                let mut d = Vec::new();
                for &v in &piece.vertices {
                    if v < n {
                        a.push(v);
                    } else {
                        d.push(v - n);
                    }
                }
                out.push(FourCycle::new((a[0], a[1]), (d[0], d[1])));
            }
            6 => {
                // Rotate so the sequence starts unprimed.
                let verts = &piece.vertices;
                let s = if verts[0] < n { 0 } else { 1 };
                let v = |i: usize| verts[(s + i) % 6];
                let (m1, m2, m3) = (v(0), v(1) - n, v(2));
                debug_assert_eq!(v(3), n + m1);
                debug_assert_eq!(v(4), m2);
                debug_assert_eq!(v(5), n + m3);
                let aux = (0..n)
                    .find(|&x| x != m1 && x != m2 && x != m3)
                    .expect("n >= 4 provides an auxiliary symbol");
                out.push(FourCycle::new((m1, m3), (m2, aux)));
                out.push(FourCycle::new((m2, m1), (m3, aux)));
                out.push(FourCycle::new((m3, m2), (m1, aux)));
            }
            l => {
                return Err(Error::Internal(format!(
                    "chordless cycle of length {l} in a deleted bipartite graph"
                )))
            }
        }
    }
    Ok(out)
}

/// One generating relation on octahedra of a join complex: in coordinate
/// `coord`, the three octahedra obtained by inserting `{u,v}`, `{v,w}`,
/// `{u,w}` into the fixed pairs sum to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinRelation {
    pub coord: usize,
    /// Pairs in the remaining coordinates, in coordinate order.
    pub others: Vec<(usize, usize)>,
    pub triple: (usize, usize, usize),
}

impl JoinRelation {
    pub fn octahedra(&self) -> [Octahedron; 3] {
        let (u, v, w) = self.triple;
        let build = |pair: (usize, usize)| {
            let mut pairs = Vec::with_capacity(self.others.len() + 1);
            let mut oi = 0;
            for c in 0..=self.others.len() {
                if c == self.coord {
                    pairs.push(pair);
                } else {
                    pairs.push(self.others[oi]);
                    oi += 1;
                }
            }
            Octahedron::new(pairs)
        };
        [build((u, v)), build((v, w)), build((u, w))]
    }
}

/// Rewrites a vanishing GF(2) combination of 4-cycles of `K_{n,n}` as a sum
/// of coordinate-triangle relations. Terms are pushed towards the anchored
/// form `{0,b} x {0,v}` whose members are linearly independent, so the
/// residual must cancel completely.
pub fn relation_reduction_k1(n: usize, combination: &[Octahedron]) -> Result<Vec<JoinRelation>> {
    let complex = JoinComplex::new(vec![n, n])?;
    // The input must sum to the zero chain.
    let mut chain_bits = Gf2Vector::zeros(complex.top_face_count());
    for oct in combination {
        for f in oct.top_faces(&complex) {
            chain_bits.flip(f);
        }
    }
    if !chain_bits.is_zero() {
        return Err(Error::Invalid(
            "combination of 4-cycles does not sum to zero".into(),
        ));
    }

    let mut terms: BTreeSet<Octahedron> = BTreeSet::new();
    let toggle = |terms: &mut BTreeSet<Octahedron>, oct: Octahedron| {
        if !terms.remove(&oct) {
            terms.insert(oct);
        }
    };
    for oct in combination {
        toggle(&mut terms, oct.clone());
    }
    let mut relations = Vec::new();
    loop {
        // Rule 1: second pair without 0 splits through 0.
        if let Some(t) = terms.iter().find(|o| o.pairs[1].0 != 0).cloned() {
            let (a, b) = t.pairs[0];
            let (u, v) = t.pairs[1];
            relations.push(JoinRelation {
                coord: 1,
                others: vec![(a, b)],
                triple: (0, u, v),
            });
            toggle(&mut terms, t);
            toggle(&mut terms, Octahedron::new(vec![(a, b), (0, u)]));
            toggle(&mut terms, Octahedron::new(vec![(a, b), (0, v)]));
            continue;
        }
        // Rule 2: first pair without 0 splits through 0.
        if let Some(t) = terms.iter().find(|o| o.pairs[0].0 != 0).cloned() {
            let (a, b) = t.pairs[0];
            let d = t.pairs[1];
            relations.push(JoinRelation {
                coord: 0,
                others: vec![d],
                triple: (0, a, b),
            });
            toggle(&mut terms, t);
            toggle(&mut terms, Octahedron::new(vec![(0, a), d]));
            toggle(&mut terms, Octahedron::new(vec![(0, b), d]));
            continue;
        }
        break;
    }
    if !terms.is_empty() {
        return Err(Error::Internal(
            "anchored terms did not cancel in a vanishing combination".into(),
        ));
    }
    Ok(relations)
}
