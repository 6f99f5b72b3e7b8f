//! Checkers for the three matrix properties: independent, additive,
//! non-trivial.
//!
//! A symmetric GF(2) matrix indexed by the generating cycles of a complex
//! (octahedra of a join, or 3-subsets for the complete graph) must vanish on
//! vertex-disjoint index pairs, respect the generating relations of the
//! cycle space, and have odd complementary-pair sums on every subobject of
//! the Kuratowski kind. Additive matrices factor through the cycle-space
//! basis; the compressed form drives the search and the full matrix is only
//! materialized for verification and export.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::chains::{octahedron_coords_matrix, SimpleCycle};
use crate::complexes::{
    kn_complementary_pairs, kn_structures, Graph, HomeoType, JoinComplex, KuratowskiSubgraph,
};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::{Error, Result};

/// Which index family a matrix lives on.
#[derive(Clone, Debug)]
pub enum Flavor {
    /// Rows and columns indexed by the octahedra of a join complex.
    Join(JoinComplex),
    /// Rows and columns indexed by the 3-element subsets of `[n]`.
    Kn(usize),
}

impl Flavor {
    pub fn index_count(&self) -> usize {
        match self {
            Flavor::Join(j) => j.octahedron_count(),
            Flavor::Kn(n) => n * (n - 1) * (n - 2) / 6,
        }
    }

    pub fn basis_size(&self) -> usize {
        match self {
            Flavor::Join(j) => crate::chains::basis_size(j),
            // Triangles through vertex 0 form a fundamental-cycle basis.
            Flavor::Kn(n) => (n - 1) * (n - 2) / 2,
        }
    }

    /// Column `j` holds the basis expansion of index object `j`.
    pub fn coords_matrix(&self) -> Gf2Matrix {
        match self {
            Flavor::Join(j) => octahedron_coords_matrix(j),
            Flavor::Kn(n) => {
                let n = *n;
                let triples: Vec<[usize; 3]> = kn_structures(n).triples;
                let pairs: Vec<(usize, usize)> =
                    (1..n).tuple_combinations::<(usize, usize)>().collect();
                let rank_of = |a: usize, b: usize| -> usize {
                    pairs
                        .binary_search(&(a.min(b), a.max(b)))
                        .expect("basis pair")
                };
                let mut m = Gf2Matrix::zeros(pairs.len(), triples.len());
                for (col, t) in triples.iter().enumerate() {
                    if t[0] == 0 {
                        m.set(rank_of(t[1], t[2]), col, true);
                    } else {
                        // abc = 0ab + 0bc + 0ac as edge sets.
                        m.flip(rank_of(t[0], t[1]), col);
                        m.flip(rank_of(t[1], t[2]), col);
                        m.flip(rank_of(t[0], t[2]), col);
                    }
                }
                m
            }
        }
    }

    /// Index positions of the basis objects themselves.
    pub fn basis_indices(&self) -> Vec<usize> {
        match self {
            Flavor::Join(j) => crate::chains::cycle_space_basis(j)
                .iter()
                .map(|o| j.octahedron_index(o))
                .collect(),
            Flavor::Kn(n) => {
                let triples = kn_structures(*n).triples;
                triples
                    .iter()
                    .enumerate()
                    .filter_map(|(i, t)| (t[0] == 0).then_some(i))
                    .collect()
            }
        }
    }

    /// Unordered vertex-disjoint index pairs.
    pub fn disjoint_pairs(&self) -> Vec<(usize, usize)> {
        match self {
            Flavor::Join(j) => {
                let octs = j.octahedra();
                let mut out = Vec::new();
                for (i, p) in octs.iter().enumerate() {
                    for (jdx, q) in octs.iter().enumerate().skip(i + 1) {
                        if p.vertex_disjoint(q) {
                            out.push((i, jdx));
                        }
                    }
                }
                out
            }
            Flavor::Kn(n) => {
                let triples = kn_structures(*n).triples;
                let mut out = Vec::new();
                for (i, p) in triples.iter().enumerate() {
                    for (jdx, q) in triples.iter().enumerate().skip(i + 1) {
                        if p.iter().all(|x| !q.contains(x)) {
                            out.push((i, jdx));
                        }
                    }
                }
                out
            }
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            Flavor::Join(j) => j.descriptor(),
            Flavor::Kn(n) => format!("Kn:{n}"),
        }
    }
}

/// A subobject carrying non-triviality constraints: a triple subcomplex of
/// a join, or a 5-element subset of `[n]`.
#[derive(Clone, Debug)]
pub enum Witness {
    Triple(crate::complexes::TripleSubcomplex),
    Quint([usize; 5]),
}

impl Witness {
    /// The elements at which complementary pairs can be anchored: top faces
    /// of the triple subcomplex, or the five vertices.
    pub fn element_count(&self) -> usize {
        match self {
            Witness::Triple(x) => x.triples.iter().map(|_| 3usize).product(),
            Witness::Quint(_) => 5,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Witness::Triple(x) => format!("{:?}", x.triples),
            Witness::Quint(f) => format!("{f:?}"),
        }
    }
}

/// All witnesses of a flavor, in lexicographic order.
pub fn witnesses(flavor: &Flavor) -> Vec<Witness> {
    match flavor {
        Flavor::Join(j) => j.triple_subcomplexes().into_iter().map(Witness::Triple).collect(),
        Flavor::Kn(n) => kn_structures(*n).quints.into_iter().map(Witness::Quint).collect(),
    }
}

/// Index pairs of the complementary pairs of a witness at one element.
pub fn witness_pairs(
    flavor: &Flavor,
    witness: &Witness,
    element: usize,
) -> Result<Vec<(usize, usize)>> {
    match (flavor, witness) {
        (Flavor::Join(j), Witness::Triple(x)) => {
            let tuples = x.face_tuples();
            let e = tuples
                .get(element)
                .ok_or_else(|| Error::Invalid(format!("face {element} out of range")))?;
            Ok(x.complementary_pairs(e)?
                .into_iter()
                .map(|(p, q)| (j.octahedron_index(&p), j.octahedron_index(&q)))
                .collect())
        }
        (Flavor::Kn(n), Witness::Quint(f)) => {
            let v = *f
                .get(element)
                .ok_or_else(|| Error::Invalid(format!("vertex {element} out of range")))?;
            let triples = kn_structures(*n).triples;
            let rank = |t: &[usize; 3]| triples.binary_search(t).expect("triple rank");
            Ok(kn_complementary_pairs(f, v)?
                .into_iter()
                .map(|(p, q)| (rank(&p), rank(&q)))
                .collect())
        }
        _ => Err(Error::Invalid("witness does not match flavor".into())),
    }
}

/// Symmetric matrix indexed by the flavor's generating cycles.
#[derive(Clone, Debug)]
pub struct OctMatrix {
    pub flavor: Flavor,
    pub mat: Gf2Matrix,
}

impl OctMatrix {
    pub fn new(flavor: Flavor, mat: Gf2Matrix) -> Result<Self> {
        let n = flavor.index_count();
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::Shape(format!(
                "matrix is {}x{}, flavor needs {n}x{n}",
                mat.rows(),
                mat.cols()
            )));
        }
        if !mat.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(OctMatrix { flavor, mat })
    }
}

/// Compressed form on the cycle-space basis.
#[derive(Clone, Debug)]
pub struct BForm {
    pub flavor: Flavor,
    pub mat: Gf2Matrix,
}

impl BForm {
    pub fn new(flavor: Flavor, mat: Gf2Matrix) -> Result<Self> {
        let h = flavor.basis_size();
        if mat.rows() != h || mat.cols() != h {
            return Err(Error::Shape(format!(
                "form is {}x{}, basis needs {h}x{h}",
                mat.rows(),
                mat.cols()
            )));
        }
        if !mat.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(BForm { flavor, mat })
    }
}

/// `A_{P,Q} = 0` for every vertex-disjoint pair; returns the violations.
pub fn is_independent(a: &OctMatrix) -> (bool, Vec<(usize, usize)>) {
    let mut violations = Vec::new();
    for (p, q) in a.flavor.disjoint_pairs() {
        if a.mat.get(p, q) {
            violations.push((p, q));
        }
    }
    (violations.is_empty(), violations)
}

/// A failed generating relation: the octahedra `x + y = p` (as cycles) with
/// `A_{x,q} + A_{y,q} + A_{p,q} = 1`, or a 4-subset relation for the
/// complete-graph flavor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdditivityViolation {
    Triangle { x: usize, y: usize, p: usize, q: usize },
    Quad { f: [usize; 4], q: usize },
}

const VIOLATION_CAP: usize = 100;

/// Checks the generating relations of the cycle space: triangle relations
/// per coordinate for joins, 4-subset relations for the complete graph.
pub fn is_additive(a: &OctMatrix) -> (bool, Vec<AdditivityViolation>) {
    let mut violations = Vec::new();
    match &a.flavor {
        Flavor::Join(j) => {
            let sizes = j.sizes();
            let octs = j.octahedra();
            let n_idx = octs.len();
            for coord in 0..sizes.len() {
                // All pair choices in the other coordinates.
                let mut rests: Vec<Vec<(usize, usize)>> = vec![vec![]];
                for (c, &n) in sizes.iter().enumerate() {
                    if c == coord {
                        continue;
                    }
                    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
                    let mut next = Vec::with_capacity(rests.len() * pairs.len());
                    for r in &rests {
                        for &p in &pairs {
                            let mut r2 = r.clone();
                            r2.push(p);
                            next.push(r2);
                        }
                    }
                    rests = next;
                }
                let build = |rest: &[(usize, usize)], pair: (usize, usize)| -> usize {
                    let mut pairs = Vec::with_capacity(sizes.len());
                    let mut ri = 0;
                    for c in 0..sizes.len() {
                        if c == coord {
                            pairs.push(pair);
                        } else {
                            pairs.push(rest[ri]);
                            ri += 1;
                        }
                    }
                    j.octahedron_index(&crate::complexes::Octahedron::new(pairs))
                };
                for rest in &rests {
                    for (u, v, w) in (0..sizes[coord]).tuple_combinations() {
                        let x = build(rest, (u, v));
                        let y = build(rest, (v, w));
                        let p = build(rest, (u, w));
                        for q in 0..n_idx {
                            let sum = a.mat.get(x, q) ^ a.mat.get(y, q) ^ a.mat.get(p, q);
                            if sum {
                                if violations.len() < VIOLATION_CAP {
                                    violations.push(AdditivityViolation::Triangle { x, y, p, q });
                                } else {
                                    return (false, violations);
                                }
                            }
                        }
                    }
                }
            }
        }
        Flavor::Kn(n) => {
            let st = kn_structures(*n);
            let rank = |t: &[usize; 3]| st.triples.binary_search(t).expect("triple");
            for f in &st.quads {
                for q in 0..st.triples.len() {
                    let mut sum = false;
                    for drop in 0..4 {
                        let mut t = [0usize; 3];
                        let mut ti = 0;
                        for (i, &x) in f.iter().enumerate() {
                            if i != drop {
                                t[ti] = x;
                                ti += 1;
                            }
                        }
                        sum ^= a.mat.get(rank(&t), q);
                    }
                    if sum {
                        if violations.len() < VIOLATION_CAP {
                            violations.push(AdditivityViolation::Quad { f: *f, q });
                        } else {
                            return (false, violations);
                        }
                    }
                }
            }
        }
    }
    (violations.is_empty(), violations)
}

/// Sum of `A_{P,Q}` over the complementary pairs of a witness at one of its
/// elements.
pub fn s_sum(a: &OctMatrix, witness: &Witness, element: usize) -> Result<bool> {
    let pairs = witness_pairs(&a.flavor, witness, element)?;
    let mut sum = false;
    for (p, q) in pairs {
        sum ^= a.mat.get(p, q);
    }
    Ok(sum)
}

/// Anchoring policy for non-triviality: one element per witness (valid for
/// independent additive matrices) or every element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessMode {
    OneWitness,
    All,
}

/// `S_{X,e} A = 1` for the chosen anchors; returns the first failure as
/// (witness index, element index).
pub fn is_nontrivial(a: &OctMatrix, mode: WitnessMode) -> Result<(bool, Option<(usize, usize)>)> {
    for (wi, w) in witnesses(&a.flavor).iter().enumerate() {
        let elems: Vec<usize> = match mode {
            WitnessMode::OneWitness => vec![0],
            WitnessMode::All => (0..w.element_count()).collect(),
        };
        for e in elems {
            if !s_sum(a, w, e)? {
                return Ok((false, Some((wi, e))));
            }
        }
    }
    Ok((true, None))
}

/// Expands a compressed form to the full index set: `A = X^T B X` with `X`
/// the basis-coordinate matrix. The result is additive by construction.
pub fn bform_expand(b: &BForm) -> OctMatrix {
    let x = b.flavor.coords_matrix();
    let a = x.transpose().mul(&b.mat).mul(&x);
    OctMatrix {
        flavor: b.flavor.clone(),
        mat: a,
    }
}

/// Restricts an additive matrix to the basis objects; mutually inverse with
/// `bform_expand` on additive matrices.
pub fn oct_compress(a: &OctMatrix) -> Result<BForm> {
    let (additive, _) = is_additive(a);
    if !additive {
        return Err(Error::Invalid("compression needs an additive matrix".into()));
    }
    let idx = a.flavor.basis_indices();
    let mut m = Gf2Matrix::zeros(idx.len(), idx.len());
    for (r, &p) in idx.iter().enumerate() {
        for (c, &q) in idx.iter().enumerate() {
            if a.mat.get(p, q) {
                m.set(r, c, true);
            }
        }
    }
    Ok(BForm {
        flavor: a.flavor.clone(),
        mat: m,
    })
}

/// Fundamental-cycle basis of a graph from a lowest-index spanning forest.
pub struct GraphCycleBasis {
    pub graph: Graph,
    pub tree_edges: Vec<usize>,
    pub basis_edges: Vec<usize>,
    pub cycles: Vec<Gf2Vector>,
}

impl GraphCycleBasis {
    /// Coordinates of a cycle: membership of the non-tree edges.
    pub fn coords(&self, edge_set: &Gf2Vector) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.basis_edges.len());
        for (i, &e) in self.basis_edges.iter().enumerate() {
            if edge_set.get(e) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.basis_edges.len()
    }
}

pub fn graph_cycle_basis(g: &Graph) -> GraphCycleBasis {
    let n = g.vertex_count();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n]; // (vertex, edge)
    let mut seen = vec![false; n];
    let mut tree_edges = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    let e = g.edge_index(v, w).expect("tree edge");
                    parent[w] = Some((v, e));
                    tree_edges.push(e);
                    queue.push_back(w);
                }
            }
        }
    }
    let tree_set: BTreeSet<usize> = tree_edges.iter().copied().collect();
    let mut basis_edges = Vec::new();
    let mut cycles = Vec::new();
    let path_to_root = |mut v: usize| -> Vec<usize> {
        let mut edges = Vec::new();
        while let Some((p, e)) = parent[v] {
            edges.push(e);
            v = p;
        }
        edges
    };
    for e in 0..g.edge_count() {
        if tree_set.contains(&e) {
            continue;
        }
        let (u, v) = g.edges()[e];
        let mut bits = Gf2Vector::zeros(g.edge_count());
        bits.flip(e);
        for pe in path_to_root(u) {
            bits.flip(pe);
        }
        for pe in path_to_root(v) {
            bits.flip(pe);
        }
        basis_edges.push(e);
        cycles.push(bits);
    }
    GraphCycleBasis {
        graph: g.clone(),
        tree_edges,
        basis_edges,
        cycles,
    }
}

/// Enumerates simple cycles with a canonical direction (lowest vertex
/// first, lower neighbor second); truncates at `limit` cycles or search
/// steps.
pub fn enumerate_simple_cycles(g: &Graph, limit: usize) -> (Vec<SimpleCycle>, bool) {
    let mut out = Vec::new();
    let mut truncated = false;
    let mut steps = 0usize;
    let n = g.vertex_count();
    let mut path: Vec<usize> = Vec::new();
    let mut on_path = vec![false; n];

    fn dfs(
        g: &Graph,
        root: usize,
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<SimpleCycle>,
        steps: &mut usize,
        truncated: &mut bool,
        limit: usize,
    ) {
        if *truncated {
            return;
        }
        let v = *path.last().expect("path");
        for w in g.neighbors(v) {
            *steps += 1;
            if *steps > limit || out.len() >= limit {
                *truncated = true;
                return;
            }
            if w == root {
                if path.len() >= 3 && path[1] < v {
                    out.push(SimpleCycle::from_vertices(g, path.clone()));
                }
                continue;
            }
            if w < root || on_path[w] {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            dfs(g, root, path, on_path, out, steps, truncated, limit);
            on_path[w] = false;
            path.pop();
        }
    }

    for root in 0..n {
        if truncated {
            break;
        }
        path.clear();
        path.push(root);
        on_path[root] = true;
        dfs(
            g,
            root,
            &mut path,
            &mut on_path,
            &mut out,
            &mut steps,
            &mut truncated,
            limit,
        );
        on_path[root] = false;
    }
    (out, truncated)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckOutcome {
    pub status: CheckStatus,
    pub violations: Vec<String>,
    pub truncated: bool,
}

/// Report of the graph-flavor criterion on a homomorphism given by a value
/// matrix on the fundamental cycle basis.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GraphReport {
    pub independence: CheckOutcome,
    pub k5_nontriviality: CheckOutcome,
    pub k33_nontriviality: CheckOutcome,
}

impl GraphReport {
    pub fn all_pass(&self) -> bool {
        [
            &self.independence,
            &self.k5_nontriviality,
            &self.k33_nontriviality,
        ]
        .iter()
        .all(|c| c.status == CheckStatus::Pass)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GraphLimits {
    pub cycle_limit: usize,
    pub kuratowski_budget: usize,
}

impl Default for GraphLimits {
    fn default() -> Self {
        GraphLimits {
            cycle_limit: 1_000_000,
            kuratowski_budget: 1_000_000,
        }
    }
}

fn outcome(violations: Vec<String>, truncated: bool) -> CheckOutcome {
    let status = if !violations.is_empty() {
        CheckStatus::Fail
    } else if truncated {
        CheckStatus::Inconclusive
    } else {
        CheckStatus::Pass
    };
    CheckOutcome {
        status,
        violations,
        truncated,
    }
}

/// Edge set of the cycle through a sequence of branch vertices of a
/// Kuratowski subgraph.
fn branch_cycle(
    g: &Graph,
    sub: &KuratowskiSubgraph,
    branch_seq: &[usize],
) -> Result<Gf2Vector> {
    let mut bits = Gf2Vector::zeros(g.edge_count());
    for i in 0..branch_seq.len() {
        let (s, t) = (branch_seq[i], branch_seq[(i + 1) % branch_seq.len()]);
        let path = sub
            .branch_paths
            .iter()
            .find(|((a, b), _)| (*a == s && *b == t) || (*a == t && *b == s))
            .map(|(_, p)| p)
            .ok_or_else(|| Error::Internal("missing branch path".into()))?;
        for w in path.windows(2) {
            bits.flip(g.edge_index(w[0], w[1]).expect("branch edge"));
        }
    }
    Ok(bits)
}

/// Checks independence and the two Kuratowski non-triviality conditions for
/// a homomorphism `y` (a beta x dim matrix over the fundamental cycle
/// basis) against the pairing `omega`.
pub fn graph_criterion_check(
    g: &Graph,
    y: &Gf2Matrix,
    omega: &Gf2Matrix,
    limits: &GraphLimits,
) -> Result<GraphReport> {
    let basis = graph_cycle_basis(g);
    if y.cols() != basis.dim() {
        return Err(Error::Shape(format!(
            "value matrix has {} columns, cycle basis has dimension {}",
            y.cols(),
            basis.dim()
        )));
    }
    let pair = |p: &Gf2Vector, q: &Gf2Vector| -> bool {
        let yp = y.mul_vec(&basis.coords(p));
        let yq = y.mul_vec(&basis.coords(q));
        omega.mul_vec(&yq).dot(&yp)
    };

    // Independence over vertex-disjoint simple cycle pairs.
    let (cycles, cyc_truncated) = enumerate_simple_cycles(g, limits.cycle_limit);
    let mut ind_violations = Vec::new();
    'outer: for (i, p) in cycles.iter().enumerate() {
        for q in cycles.iter().skip(i + 1) {
            let pv: BTreeSet<usize> = p.vertices.iter().copied().collect();
            if q.vertices.iter().any(|v| pv.contains(v)) {
                continue;
            }
            if pair(&p.edges, &q.edges) {
                ind_violations.push(format!("cycles {:?} and {:?}", p.vertices, q.vertices));
                if ind_violations.len() >= 20 {
                    break 'outer;
                }
            }
        }
    }

    let (subs, kur_truncated) = crate::complexes::kuratowski_subgraphs(g, limits.kuratowski_budget);
    let mut k5_violations = Vec::new();
    let mut k33_violations = Vec::new();
    for sub in &subs {
        match sub.kind {
            HomeoType::K5 => {
                let b = &sub.branch_vertices;
                for (vi, &v) in b.iter().enumerate() {
                    let others: Vec<usize> =
                        (0..5).filter(|&i| i != vi).map(|i| b[i]).collect();
                    // Three pairs of branch triangles meeting only at v.
                    let mut sum = false;
                    for partner in 1..4 {
                        let p = branch_cycle(g, sub, &[v, others[0], others[partner]])?;
                        let rest: Vec<usize> = (1..4)
                            .filter(|&i| i != partner)
                            .map(|i| others[i])
                            .collect();
                        let q = branch_cycle(g, sub, &[v, rest[0], rest[1]])?;
                        sum ^= pair(&p, &q);
                    }
                    if !sum {
                        k5_violations
                            .push(format!("K5 branches {:?} at vertex {v}", b));
                        break;
                    }
                }
            }
            HomeoType::K33 => {
                let b = &sub.branch_vertices; // first 3 one part, last 3 other
                for xi in 0..3 {
                    for yi in 3..6 {
                        let xs: Vec<usize> = (0..3).filter(|&i| i != xi).collect();
                        let ys: Vec<usize> = (3..6).filter(|&i| i != yi).collect();
                        // Two pairs of branch 4-cycles whose only common
                        // branch is (xi, yi).
                        let mut sum = false;
                        for m in 0..2 {
                            let p = branch_cycle(
                                g,
                                sub,
                                &[b[xi], b[yi], b[xs[0]], b[ys[m]]],
                            )?;
                            let q = branch_cycle(
                                g,
                                sub,
                                &[b[xi], b[yi], b[xs[1]], b[ys[1 - m]]],
                            )?;
                            sum ^= pair(&p, &q);
                        }
                        if !sum {
                            k33_violations.push(format!(
                                "K33 branches {:?} at branch ({}, {})",
                                b, b[xi], b[yi]
                            ));
                        }
                    }
                }
            }
            _ => {}
        }
    }

    Ok(GraphReport {
        independence: outcome(ind_violations, cyc_truncated),
        k5_nontriviality: outcome(k5_violations, kur_truncated),
        k33_nontriviality: outcome(k33_violations, kur_truncated),
    })
}
