//! The homological embeddability check: build homomorphisms from generator
//! data, lift them to face-wise maps, and compare the pairing sum against
//! the van Kampen number on a spanning set of symmetric cycles.
//!
//! Both sides of the comparison are additive in the cycle, so checking a
//! spanning set of the symmetric cycle space settles the full quantifier.

use serde::Serialize;

use crate::complexes::Octahedron;
use crate::conditions::{enumerate_simple_cycles, GraphLimits};
use crate::delprod::{
    economic_deleted_product, graph_torus, symmetrized_torus, tensor_iso, tensor_space,
    triple_deleted_product, Complex1, DeletedProduct, SymCycle,
};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::vankampen::{random_generic_drawing, van_kampen_number, DrawingConfig};
use crate::{Error, Result};

/// A map from top faces to a coefficient space, one column per face.
#[derive(Clone, Debug)]
pub struct FaceMap {
    pub values: Gf2Matrix,
}

impl FaceMap {
    /// The induced homomorphism on a set of faces: sum of the columns.
    pub fn eval(&self, faces: &Gf2Vector) -> Gf2Vector {
        let mut out = Gf2Vector::zeros(self.values.rows());
        for f in faces.iter_ones() {
            out.xor_assign(&self.values.column(f));
        }
        out
    }
}

/// Builds a homomorphism with prescribed pairings from generators. The
/// hypothesis (vanishing combinations of generators pair trivially with
/// every value) is checked over a kernel basis of the generator relation
/// space; the resulting matrix maps cycle-space coordinates to the value
/// space and reproduces all pairwise pairings even where it cannot
/// reproduce the values themselves.
pub fn hom_from_generators(
    gen_coords: &[Gf2Vector],
    values: &[Gf2Vector],
    omega: &Gf2Matrix,
) -> Result<Gf2Matrix> {
    if gen_coords.len() != values.len() {
        return Err(Error::Shape(format!(
            "{} generators but {} values",
            gen_coords.len(),
            values.len()
        )));
    }
    if gen_coords.is_empty() {
        return Err(Error::Invalid("no generators given".into()));
    }
    let h = gen_coords[0].len();
    let beta = omega.rows();
    if values.iter().any(|v| v.len() != beta) {
        return Err(Error::Shape("value length does not match the pairing".into()));
    }
    let p = gen_coords.len();
    let mut g = Gf2Matrix::zeros(h, p);
    for (c, col) in gen_coords.iter().enumerate() {
        if col.len() != h {
            return Err(Error::Shape("generator coordinate lengths differ".into()));
        }
        for r in col.iter_ones() {
            g.set(r, c, true);
        }
    }
    // Hypothesis check over a kernel basis of the relation space.
    for rel in g.kernel_basis() {
        let mut s = Gf2Vector::zeros(beta);
        for j in rel.iter_ones() {
            s.xor_assign(&values[j]);
        }
        let os = omega.mul_vec(&s);
        for (i, v) in values.iter().enumerate() {
            if os.dot(v) {
                return Err(Error::Hypothesis(format!(
                    "vanishing combination {:?} pairs non-trivially with value {i}",
                    rel.iter_ones().collect::<Vec<_>>()
                )));
            }
        }
    }
    // psi on each coordinate vector of the cycle space: expand over the
    // generators when possible, zero on a complement otherwise.
    let mut psi = Gf2Matrix::zeros(beta, h);
    for i in 0..h {
        let mut e = Gf2Vector::zeros(h);
        e.set(i, true);
        if let Some((x, _)) = g.solve_affine(&e)? {
            let mut val = Gf2Vector::zeros(beta);
            for j in x.iter_ones() {
                val.xor_assign(&values[j]);
            }
            for r in val.iter_ones() {
                psi.set(r, i, true);
            }
        }
    }
    // Pairing guarantee over all given generators.
    for (a, ca) in gen_coords.iter().enumerate() {
        let pa = psi.mul_vec(ca);
        for (b, cb) in gen_coords.iter().enumerate() {
            let pb = psi.mul_vec(cb);
            let got = omega.mul_vec(&pb).dot(&pa);
            let want = omega.mul_vec(&values[b]).dot(&values[a]);
            if got != want {
                return Err(Error::Internal(format!(
                    "pairing of generators {a},{b} not reproduced"
                )));
            }
        }
    }
    Ok(psi)
}

/// Solves for a face map inducing the given homomorphism: one linear system
/// per value coordinate, rows indexed by the basis cycles. The system is
/// always solvable because the basis cycles are linearly independent as
/// face sets.
pub fn face_map_from_hom(
    psi: &Gf2Matrix,
    basis_cycles: &[Gf2Vector],
    num_faces: usize,
) -> Result<FaceMap> {
    let h = basis_cycles.len();
    if psi.cols() != h {
        return Err(Error::Shape(format!(
            "homomorphism has {} columns, basis has {h} cycles",
            psi.cols()
        )));
    }
    let beta = psi.rows();
    let mut m = Gf2Matrix::zeros(h, num_faces);
    for (r, cyc) in basis_cycles.iter().enumerate() {
        for f in cyc.iter_ones() {
            m.set(r, f, true);
        }
    }
    let mut values = Gf2Matrix::zeros(beta, num_faces);
    for r in 0..beta {
        let rhs = {
            let mut v = Gf2Vector::zeros(h);
            for i in 0..h {
                if psi.get(r, i) {
                    v.set(i, true);
                }
            }
            v
        };
        let Some((x, _)) = m.solve_affine(&rhs)? else {
            return Err(Error::Internal(
                "face map system unsolvable; basis cycles must be independent".into(),
            ));
        };
        values.set_row(r, &x);
    }
    Ok(FaceMap { values })
}

/// `y^2(C, omega)`: the pairing sum over the unordered pairs of a symmetric
/// cycle.
pub fn y_squared(
    dp: &DeletedProduct,
    c: &SymCycle,
    y: &FaceMap,
    omega: &Gf2Matrix,
) -> Result<bool> {
    if !dp.is_swap_invariant(c) {
        return Err(Error::Invalid("pairing sums need a swap-invariant set".into()));
    }
    let mut total = false;
    for cell in c.bits.iter_ones() {
        let (a, b) = dp.cells[cell];
        if a < b {
            let ya = y.values.column(a as usize);
            let yb = y.values.column(b as usize);
            if omega.mul_vec(&yb).dot(&ya) {
                total = !total;
            }
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorVerdict {
    pub id: String,
    pub v: u8,
    pub y2: u8,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RPrimeReport {
    pub verdicts: Vec<GeneratorVerdict>,
    pub pass: bool,
    /// Set when generator enumeration was truncated (graphs only); a pass
    /// is then not conclusive.
    pub truncated: bool,
}

/// Spanning set of the symmetric cycle space of a join deleted product:
/// symmetrized tori, triple deleted products, and (for mixed sizes with a
/// size-3 factor, where those may span a proper subspace) completing
/// symmetric cycles taken from the image of `I + T`.
pub fn join_generators(dp: &DeletedProduct) -> Result<Vec<(String, SymCycle)>> {
    let Complex1::Join(complex) = &dp.complex else {
        return Err(Error::Invalid("join generators need a join complex".into()));
    };
    let mut out: Vec<(String, SymCycle)> = Vec::new();
    let octs = complex.octahedra();
    for (i, p) in octs.iter().enumerate() {
        for (j, q) in octs.iter().enumerate().skip(i + 1) {
            if p.vertex_disjoint(q) {
                out.push((format!("torus:{i},{j}"), symmetrized_torus(dp, p, q)?));
            }
        }
    }
    for (i, x) in complex.triple_subcomplexes().iter().enumerate() {
        out.push((format!("triple:{i}"), triple_deleted_product(dp, x)?));
    }

    // Span completion: the symmetric cycle space has dimension (full+1)/2;
    // extend with images of I + T if the classical generators fall short.
    let ts = tensor_space(complex)?;
    let target = ts.total.div_ceil(2);
    fn insert(echelon: &mut Vec<Gf2Vector>, mut v: Gf2Vector) -> bool {
        for e in echelon.iter() {
            let lead = e.iter_ones().next().expect("nonzero echelon row");
            if v.get(lead) {
                v.xor_assign(e);
            }
        }
        if v.is_zero() {
            false
        } else {
            echelon.push(v);
            echelon.sort_by_key(|e| e.iter_ones().next());
            true
        }
    }
    let mut echelon: Vec<Gf2Vector> = Vec::new();
    for (_, c) in &out {
        insert(&mut echelon, tensor_iso(dp, &ts, c)?);
    }
    if echelon.len() < target {
        let t = ts.t_matrix();
        let mut candidates: Vec<Gf2Vector> = vec![ts.ktilde_vector()];
        for flat in 0..ts.total {
            let mut e = Gf2Vector::zeros(ts.total);
            e.set(flat, true);
            let mut img = t.mul_vec(&e);
            img.xor_assign(&e);
            candidates.push(img);
        }
        let mut extra = 0;
        for cand in candidates {
            if echelon.len() >= target {
                break;
            }
            if cand.is_zero() {
                continue;
            }
            if insert(&mut echelon, cand.clone()) {
                let cycle = crate::delprod::tensor_iso_inverse(dp, &ts, &cand)?;
                out.push((format!("span-completion:{extra}"), cycle));
                extra += 1;
            }
        }
    }
    if echelon.len() != target {
        return Err(Error::Internal(
            "could not span the symmetric cycle space".into(),
        ));
    }
    Ok(out)
}

/// Spanning set for a graph deleted product: tori of vertex-disjoint simple
/// cycle pairs plus economic deleted products of Kuratowski subgraphs.
/// Returns the truncation flag of the underlying enumerations.
pub fn graph_generators(
    dp: &DeletedProduct,
    limits: &GraphLimits,
) -> Result<(Vec<(String, SymCycle)>, bool)> {
    let Complex1::Graph(g) = &dp.complex else {
        return Err(Error::Invalid("graph generators need a graph".into()));
    };
    let mut out = Vec::new();
    let (cycles, trunc_cycles) = enumerate_simple_cycles(g, limits.cycle_limit);
    for (i, p) in cycles.iter().enumerate() {
        for q in cycles.iter().skip(i + 1) {
            let disjoint = p
                .vertices
                .iter()
                .all(|v| !q.vertices.contains(v));
            if disjoint {
                out.push((
                    format!("torus:{:?}x{:?}", p.vertices, q.vertices),
                    graph_torus(dp, &p.edges, &q.edges)?,
                ));
            }
        }
    }
    let (subs, trunc_kur) = crate::complexes::kuratowski_subgraphs(g, limits.kuratowski_budget);
    for (i, sub) in subs.iter().enumerate() {
        let sub_graph = g.edge_subgraph(sub.edge_indices.iter().copied());
        let (sub_dp, econ) = economic_deleted_product(&sub_graph)?;
        // Transport the cells into the ambient deleted product; edge
        // indices agree because the subgraph keeps ambient vertex ids.
        let mut bits = Gf2Vector::zeros(dp.cells.len());
        for cell in econ.bits.iter_ones() {
            let (a, b) = sub_dp.cells[cell];
            let (ea, eb) = (sub_graph.edges()[a as usize], sub_graph.edges()[b as usize]);
            let ai = g.edge_index(ea.0, ea.1).expect("ambient edge") as u32;
            let bi = g.edge_index(eb.0, eb.1).expect("ambient edge") as u32;
            let c = dp
                .cell_index((ai, bi))
                .ok_or_else(|| Error::Internal("economic cell missing in ambient".into()))?;
            bits.set(c as usize, true);
        }
        out.push((format!("kuratowski:{i}:{:?}", sub.kind), SymCycle { bits }));
    }
    Ok((out, trunc_cycles || trunc_kur))
}

/// Checks `v(C) = y^2(C, omega)` on a spanning set of symmetric cycles,
/// recomputing `v` from a fresh drawing for every seed. Drawing
/// independence is asserted, not assumed.
pub fn check_r_prime(
    dp: &DeletedProduct,
    y: &FaceMap,
    omega: &Gf2Matrix,
    seeds: &[u64],
    limits: &GraphLimits,
) -> Result<RPrimeReport> {
    let (generators, truncated) = match &dp.complex {
        Complex1::Join(_) => (join_generators(dp)?, false),
        Complex1::Graph(_) => graph_generators(dp, limits)?,
    };
    if seeds.is_empty() {
        return Err(Error::Invalid("at least one drawing seed is required".into()));
    }
    let config = DrawingConfig::default();
    let mut v_values: Vec<Option<bool>> = vec![None; generators.len()];
    for &seed in seeds {
        let drawing = random_generic_drawing(dp, seed, &config)?;
        for (gi, (id, c)) in generators.iter().enumerate() {
            let v = van_kampen_number(dp, c, &drawing)?;
            match v_values[gi] {
                None => v_values[gi] = Some(v),
                Some(prev) => {
                    if prev != v {
                        return Err(Error::Internal(format!(
                            "van Kampen number of {id} changed with the drawing"
                        )));
                    }
                }
            }
        }
    }
    let mut verdicts = Vec::with_capacity(generators.len());
    let mut pass = true;
    for (gi, (id, c)) in generators.iter().enumerate() {
        let v = v_values[gi].expect("computed above");
        let y2 = y_squared(dp, c, y, omega)?;
        let ok = v == y2;
        pass &= ok;
        verdicts.push(GeneratorVerdict {
            id: id.clone(),
            v: v as u8,
            y2: y2 as u8,
            ok,
        });
    }
    Ok(RPrimeReport {
        verdicts,
        pass,
        truncated,
    })
}

/// Convenience: the octahedron coordinate vectors of a join complex in the
/// anchored basis, used as generator coordinates for `hom_from_generators`.
pub fn octahedron_generator_coords(complex: &crate::complexes::JoinComplex) -> Vec<Gf2Vector> {
    let m = crate::chains::octahedron_coords_matrix(complex);
    (0..m.cols()).map(|c| m.column(c)).collect()
}

/// Face map for a join whose induced homomorphism matches prescribed values
/// on the anchored basis octahedra.
pub fn join_face_map(
    complex: &crate::complexes::JoinComplex,
    psi: &Gf2Matrix,
) -> Result<FaceMap> {
    let basis = crate::chains::cycle_space_basis(complex);
    let cycles: Vec<Gf2Vector> = basis
        .iter()
        .map(|oct| {
            let mut bits = Gf2Vector::zeros(complex.top_face_count());
            for f in oct.top_faces(complex) {
                bits.flip(f);
            }
            bits
        })
        .collect();
    face_map_from_hom(psi, &cycles, complex.top_face_count())
}

/// Face map for a graph whose induced homomorphism matches prescribed
/// values on the fundamental cycle basis.
pub fn graph_face_map(g: &crate::complexes::Graph, psi: &Gf2Matrix) -> Result<FaceMap> {
    let basis = crate::conditions::graph_cycle_basis(g);
    face_map_from_hom(psi, &basis.cycles, g.edge_count())
}

/// Evaluation helper used by tests: the induced map applied to an
/// octahedron of a join complex.
pub fn eval_octahedron(
    complex: &crate::complexes::JoinComplex,
    y: &FaceMap,
    oct: &Octahedron,
) -> Gf2Vector {
    let mut bits = Gf2Vector::zeros(complex.top_face_count());
    for f in oct.top_faces(complex) {
        bits.flip(f);
    }
    y.eval(&bits)
}
