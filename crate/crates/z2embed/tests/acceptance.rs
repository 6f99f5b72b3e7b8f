//! Acceptance suite: one test per criterion, each printing a pass line with
//! its elapsed time and asserting the stated budget. All GF(2) results are
//! exact; the geometric computations run in exact rational arithmetic.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use z2embed::chains::{cycle_space_basis, rook_decomposition, RookSet};
use z2embed::complexes::{Graph, HomeoType, JoinComplex};
use z2embed::conditions::{
    bform_expand, is_independent, is_nontrivial, s_sum, witnesses, BForm, Flavor, WitnessMode,
};
use z2embed::criterion::{check_r_prime, join_face_map, FaceMap};
use z2embed::delprod::{
    cycle_space_dims, deleted_product, economic_deleted_product, generator_decomposition,
    graph_symmetric_decomposition, graph_torus, ker_im_check, symmetrized_torus, tensor_iso_inverse,
    tensor_space, triple_deleted_product, Complex1, GraphPiece, SymCycle,
};
use z2embed::gf2::{Gf2Matrix, Gf2Vector};
use z2embed::gram::{construct_y, realizable, OmegaKind, OmegaSpec};
use z2embed::search::{decide, parse_flavor, verify_certificate, SearchBudget, Verdict};
use z2embed::vankampen::{random_generic_drawing, van_kampen_number, DrawingConfig};

fn finish(name: &str, start: Instant, budget_secs: u64) {
    let elapsed = start.elapsed();
    println!("[{name}] PASS ({elapsed:.2?})");
    assert!(
        elapsed.as_secs() < budget_secs,
        "{name} exceeded its {budget_secs}s budget: {elapsed:?}"
    );
}

/// Criterion 1: the full cycle-space dimension of the deleted product is
/// (n^2-3n+1)^(k+1) for n in {3,4,5}, k in {1,2}.
#[test]
fn criterion_1_dimension_formula() {
    let start = Instant::now();
    let cases = [
        (vec![3, 3], 1usize),
        (vec![4, 4], 25),
        (vec![5, 5], 121),
        (vec![3, 3, 3], 1),
        (vec![4, 4, 4], 125),
        (vec![5, 5, 5], 1331),
    ];
    for (sizes, expected) in cases {
        let j = JoinComplex::new(sizes.clone()).unwrap();
        let (full, _symmetric) = cycle_space_dims(&j);
        assert_eq!(full, expected, "full dimension for {sizes:?}");
    }
    finish("criterion 1: dimension formula", start, 60);
}

/// Criterion 2: dim Ker(I+T) = dim Im(I+T) + 1 and the tensor power of the
/// 6-cycle avoids the image, for all sizes <= 5 and tensor length <= 3.
#[test]
fn criterion_2_ker_im_decomposition() {
    let start = Instant::now();
    let mut cases = 0;
    for len in 1..=3usize {
        let mut tuple = vec![3usize; len];
        loop {
            let r = ker_im_check(&tuple).unwrap();
            assert_eq!(
                r.ker_dim,
                r.im_dim + 1,
                "kernel/image dimensions for {tuple:?}"
            );
            assert!(!r.ktilde_in_image, "fixed tensor in image for {tuple:?}");
            cases += 1;
            // Next tuple in {3,4,5}^len.
            let mut i = 0;
            loop {
                if i == len {
                    break;
                }
                if tuple[i] < 5 {
                    tuple[i] += 1;
                    break;
                }
                tuple[i] = 3;
                i += 1;
            }
            if i == len {
                break;
            }
        }
    }
    assert_eq!(cases, 3 + 9 + 27);
    finish("criterion 2: Ker/Im decomposition", start, 60);
}

/// Criterion 3: 200 random rook cycles per size decompose exactly into
/// anchored parallelepipeds.
#[test]
fn criterion_3_rook_decomposition() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    for sizes in [
        vec![3, 3],
        vec![4, 4],
        vec![5, 5],
        vec![3, 3, 3],
        vec![4, 3],
    ] {
        let j = JoinComplex::new(sizes.clone()).unwrap();
        let basis = cycle_space_basis(&j);
        for _ in 0..200 {
            let mut bits = Gf2Vector::zeros(j.top_face_count());
            for oct in &basis {
                if rng.gen_bool(0.5) {
                    for f in oct.top_faces(&j) {
                        bits.flip(f);
                    }
                }
            }
            let rook = RookSet {
                sizes: sizes.clone(),
                bits: bits.clone(),
            };
            let parts = rook_decomposition(&rook).unwrap();
            let mut sum = Gf2Vector::zeros(j.top_face_count());
            for p in &parts {
                for f in p.top_faces(&j) {
                    sum.flip(f);
                }
            }
            assert_eq!(sum, bits, "rook reconstruction for {sizes:?}");
        }
    }
    finish("criterion 3: rook decomposition", start, 10);
}

/// Criterion 4: the van Kampen number is 1 on triple deleted products and
/// economic deleted products of K5/K33 (k=1) and on the triple product for
/// k=2; it vanishes on 50 random symmetrized tori per setting; and it is
/// constant across 20 seeds.
#[test]
fn criterion_4_anchor_values_and_parity() {
    let start = Instant::now();
    let config = DrawingConfig::default();

    // Full deleted product of K_{3,3} across 20 seeds.
    let j33 = JoinComplex::new(vec![3, 3]).unwrap();
    let dp33 = deleted_product(Complex1::Join(j33.clone()));
    let tdp33 = triple_deleted_product(&dp33, &j33.triple_subcomplexes()[0]).unwrap();
    for seed in 0..20 {
        let d = random_generic_drawing(&dp33, seed, &config).unwrap();
        assert!(van_kampen_number(&dp33, &tdp33, &d).unwrap());
    }

    // Economic deleted products of K5 and K33, plus a subdivided K5.
    let (dp5, econ5) = economic_deleted_product(&Graph::complete(5)).unwrap();
    for seed in 0..20 {
        let d = random_generic_drawing(&dp5, seed, &config).unwrap();
        assert!(van_kampen_number(&dp5, &econ5, &d).unwrap());
    }
    let (dpb, econb) = economic_deleted_product(&Graph::complete_bipartite(3, 3)).unwrap();
    for seed in 0..20 {
        let d = random_generic_drawing(&dpb, seed, &config).unwrap();
        assert!(van_kampen_number(&dpb, &econb, &d).unwrap());
    }
    let mut edges: Vec<(usize, usize)> = Graph::complete(5).edges().to_vec();
    edges.retain(|&e| e != (0, 1));
    edges.push((0, 5));
    edges.push((5, 1));
    let subdivided = Graph::new(6, edges).unwrap();
    let (dps, econs) = economic_deleted_product(&subdivided).unwrap();
    for seed in 0..20 {
        let d = random_generic_drawing(&dps, seed, &config).unwrap();
        assert!(van_kampen_number(&dps, &econs, &d).unwrap());
    }

    // k = 2 anchor across 20 seeds.
    let j333 = JoinComplex::new(vec![3, 3, 3]).unwrap();
    let dp333 = deleted_product(Complex1::Join(j333.clone()));
    let tdp333 = triple_deleted_product(&dp333, &j333.triple_subcomplexes()[0]).unwrap();
    for seed in 0..20 {
        let d = random_generic_drawing(&dp333, seed, &config).unwrap();
        assert!(van_kampen_number(&dp333, &tdp333, &d).unwrap());
    }

    // Parity on 50 random tori per setting, k = 1 in (5,5) and k = 2 in
    // (4,4,4), each constant (zero) across the 20 seeded drawings.
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    for sizes in [vec![5usize, 5], vec![4, 4, 4]] {
        let j = JoinComplex::new(sizes).unwrap();
        let dp = deleted_product(Complex1::Join(j.clone()));
        let octs = j.octahedra();
        let mut tori = Vec::new();
        while tori.len() < 50 {
            let p = &octs[rng.gen_range(0..octs.len())];
            let q = &octs[rng.gen_range(0..octs.len())];
            if p.vertex_disjoint(q) {
                tori.push(symmetrized_torus(&dp, p, q).unwrap());
            }
        }
        for seed in 0..20 {
            let d = random_generic_drawing(&dp, seed, &config).unwrap();
            for torus in &tori {
                assert!(!van_kampen_number(&dp, torus, &d).unwrap());
            }
        }
    }
    finish("criterion 4: van Kampen anchors / parity", start, 120);
}

/// Criterion 5: classical reproductions through the decision engine, each
/// from an exhaustive search.
#[test]
fn criterion_5_classical_decisions() {
    let overall = Instant::now();
    let budget = SearchBudget::default();
    let cases: [(&str, OmegaKind, usize, bool); 5] = [
        ("K33", OmegaKind::I, 0, false),
        ("K33", OmegaKind::H, 2, true),
        ("K5", OmegaKind::I, 0, false),
        ("K5", OmegaKind::I, 1, true),
        ("K5", OmegaKind::H, 2, true),
    ];
    for (desc, kind, beta, expect_yes) in cases {
        let start = Instant::now();
        let flavor = parse_flavor(desc).unwrap();
        let spec = OmegaSpec::new(kind, beta).unwrap();
        let out = decide(&flavor, &spec, &budget).unwrap();
        assert!(out.exact, "{desc} {kind:?} beta={beta} must be exhaustive");
        match (expect_yes, &out.verdict) {
            (true, Verdict::Yes(cert)) => {
                assert!(verify_certificate(cert).unwrap().ok);
            }
            (false, Verdict::No) => {}
            (want, got) => panic!("{desc} {kind:?} beta={beta}: wanted yes={want}, got {got:?}"),
        }
        assert!(
            start.elapsed().as_secs() < 30,
            "{desc} {kind:?} beta={beta} exceeded 30s"
        );
    }
    finish("criterion 5: classical reproductions", overall, 150);
}

/// Criterion 6: the realizability rule agrees with exhaustive enumeration
/// of every Y for all symmetric A with <= 4 rows and beta <= 4.
#[test]
fn criterion_6_gram_oracle() {
    let start = Instant::now();
    for m in 1..=4usize {
        let vars = m * (m + 1) / 2;
        let mut all_a = Vec::new();
        for bits in 0..(1u32 << vars) {
            let mut a = Gf2Matrix::zeros(m, m);
            let mut idx = 0;
            for i in 0..m {
                for j in i..m {
                    if bits >> idx & 1 == 1 {
                        a.set(i, j, true);
                        a.set(j, i, true);
                    }
                    idx += 1;
                }
            }
            all_a.push(a);
        }
        for beta in 0..=4usize {
            for kind in [OmegaKind::I, OmegaKind::H] {
                if kind == OmegaKind::H && beta % 2 != 0 {
                    continue;
                }
                let spec = OmegaSpec::new(kind, beta).unwrap();
                let omega = spec.matrix();
                let mut realized = std::collections::HashSet::new();
                for code in 0..(1u64 << (beta * m)) {
                    let y = Gf2Matrix::from_fn(beta, m, |r, c| code >> (r * m + c) & 1 == 1);
                    realized.insert(y.transpose().mul(&omega).mul(&y).lex_key());
                }
                for a in &all_a {
                    assert_eq!(
                        realizable(a, &spec).unwrap(),
                        realized.contains(&a.lex_key()),
                        "oracle mismatch at m={m} beta={beta} kind={kind:?}"
                    );
                }
            }
        }
    }
    finish("criterion 6: Gram oracle", start, 120);
}

/// Criterion 7: 100 random symmetric cycles per size reconstruct exactly
/// from the returned tori and triple subcomplexes.
#[test]
fn criterion_7_generator_decomposition() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    for sizes in [vec![3, 3], vec![4, 4], vec![3, 3, 3]] {
        let j = JoinComplex::new(sizes.clone()).unwrap();
        let dp = deleted_product(Complex1::Join(j.clone()));
        let ts = tensor_space(&j).unwrap();
        let t = ts.t_matrix();
        for _ in 0..100 {
            let mut w = Gf2Vector::zeros(ts.total);
            for i in 0..ts.total {
                if rng.gen_bool(0.5) {
                    w.set(i, true);
                }
            }
            let mut z = t.mul_vec(&w);
            z.xor_assign(&w);
            if rng.gen_bool(0.5) {
                z.xor_assign(&ts.ktilde_vector());
            }
            let c = tensor_iso_inverse(&dp, &ts, &z).unwrap();
            // Exact reconstruction is verified inside; a returned value is
            // itself the proof.
            let d = generator_decomposition(&dp, &c).unwrap();
            let mut sum = Gf2Vector::zeros(dp.cell_count());
            for (p, q) in &d.tori {
                sum.xor_assign(&symmetrized_torus(&dp, p, q).unwrap().bits);
            }
            for x in &d.triples {
                sum.xor_assign(&triple_deleted_product(&dp, x).unwrap().bits);
            }
            assert_eq!(sum, c.bits, "reconstruction for {sizes:?}");
        }
    }
    finish("criterion 7: generator decomposition", start, 60);
}

/// Criterion 8: graph decompositions match the classification on K5, K33,
/// disjoint triangles, a subdivided K5, and a wheel; the disjoint union of
/// two K5's decomposes.
#[test]
fn criterion_8_graph_decomposition() {
    let start = Instant::now();

    let (dp5, econ5) = economic_deleted_product(&Graph::complete(5)).unwrap();
    let pieces = graph_symmetric_decomposition(&dp5, &econ5).unwrap();
    assert_eq!(pieces.len(), 1);
    assert!(matches!(
        pieces[0],
        GraphPiece::EconomicDp {
            kind: HomeoType::K5,
            ..
        }
    ));

    let (dp33, econ33) = economic_deleted_product(&Graph::complete_bipartite(3, 3)).unwrap();
    let pieces = graph_symmetric_decomposition(&dp33, &econ33).unwrap();
    assert_eq!(pieces.len(), 1);
    assert!(matches!(
        pieces[0],
        GraphPiece::EconomicDp {
            kind: HomeoType::K33,
            ..
        }
    ));

    // Disjoint triangles: a single torus.
    let tri2 = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
    let dpt = deleted_product(Complex1::Graph(tri2.clone()));
    let mut p = Gf2Vector::zeros(tri2.edge_count());
    let mut q = Gf2Vector::zeros(tri2.edge_count());
    for (u, v) in [(0, 1), (1, 2), (0, 2)] {
        p.set(tri2.edge_index(u, v).unwrap(), true);
    }
    for (u, v) in [(3, 4), (4, 5), (3, 5)] {
        q.set(tri2.edge_index(u, v).unwrap(), true);
    }
    let torus = graph_torus(&dpt, &p, &q).unwrap();
    let pieces = graph_symmetric_decomposition(&dpt, &torus).unwrap();
    assert_eq!(pieces.len(), 1);
    assert!(matches!(pieces[0], GraphPiece::SymTorus { .. }));

    // Subdivided K5.
    let mut edges: Vec<(usize, usize)> = Graph::complete(5).edges().to_vec();
    edges.retain(|&e| e != (0, 1));
    edges.push((0, 5));
    edges.push((5, 1));
    let sub5 = Graph::new(6, edges).unwrap();
    let (dps, econs) = economic_deleted_product(&sub5).unwrap();
    let pieces = graph_symmetric_decomposition(&dps, &econs).unwrap();
    assert_eq!(pieces.len(), 1);
    assert!(matches!(
        pieces[0],
        GraphPiece::EconomicDp {
            kind: HomeoType::K5,
            ..
        }
    ));

    // Wheel: the symmetric cycle space is zero.
    let wheel = Graph::wheel(6).unwrap();
    let dpw = deleted_product(Complex1::Graph(wheel));
    let (folded, _) = dpw.folded_boundary_matrix(None);
    assert_eq!(folded.nullity(), 0);
    let zero = SymCycle::zero(&dpw);
    assert!(graph_symmetric_decomposition(&dpw, &zero)
        .unwrap()
        .is_empty());

    // Two disjoint copies of K5: decompositions exist; sums of the two
    // economic products and arbitrary symmetric cycles all decompose.
    let mut edges: Vec<(usize, usize)> = Graph::complete(5).edges().to_vec();
    for (u, v) in Graph::complete(5).edges() {
        edges.push((u + 5, v + 5));
    }
    let double = Graph::new(10, edges).unwrap();
    let dpd = deleted_product(Complex1::Graph(double.clone()));
    let (folded, reps) = dpd.folded_boundary_matrix(None);
    let kernel = folded.kernel_basis();
    assert!(!kernel.is_empty());
    // Decompose every kernel basis element and one full mix.
    let mut mix = Gf2Vector::zeros(dpd.cell_count());
    for k in &kernel {
        let mut bits = Gf2Vector::zeros(dpd.cell_count());
        for i in k.iter_ones() {
            let rep = reps[i] as usize;
            bits.flip(rep);
            bits.flip(dpd.swap[rep] as usize);
        }
        mix.xor_assign(&bits);
        let c = SymCycle { bits };
        let pieces = graph_symmetric_decomposition(&dpd, &c).unwrap();
        let mut sum = Gf2Vector::zeros(dpd.cell_count());
        for piece in &pieces {
            sum.xor_assign(&piece.cells().bits);
        }
        assert_eq!(sum, c.bits);
    }
    let c = SymCycle { bits: mix };
    let pieces = graph_symmetric_decomposition(&dpd, &c).unwrap();
    let mut sum = Gf2Vector::zeros(dpd.cell_count());
    for piece in &pieces {
        sum.xor_assign(&piece.cells().bits);
    }
    assert_eq!(sum, c.bits);

    finish("criterion 8: graph decomposition", start, 30);
}

/// Criterion 9: for every compressed form of the (3,3) enumeration, the
/// homological check coincides with independence + non-triviality of the
/// expanded matrix.
#[test]
fn criterion_9_cross_route_consistency() {
    let start = Instant::now();
    let j = JoinComplex::new(vec![3, 3]).unwrap();
    let flavor = Flavor::Join(j.clone());
    let dp = deleted_product(Complex1::Join(j.clone()));
    let limits = z2embed::conditions::GraphLimits::default();
    let seeds = [901u64, 902, 903];
    for bits in 0..(1u32 << 10) {
        let mut b = Gf2Matrix::zeros(4, 4);
        let mut idx = 0;
        for i in 0..4 {
            for jj in i..4 {
                if bits >> idx & 1 == 1 {
                    b.set(i, jj, true);
                    b.set(jj, i, true);
                }
                idx += 1;
            }
        }
        let a = bform_expand(&BForm::new(flavor.clone(), b.clone()).unwrap());
        let matrix_route =
            is_independent(&a).0 && is_nontrivial(&a, WitnessMode::All).unwrap().0;

        // Homological route: realize B over a sufficient identity form,
        // lift to a face map, and check R'.
        let beta = b.rank() + 1;
        let spec = OmegaSpec::new(OmegaKind::I, beta).unwrap();
        let omega = spec.matrix();
        let yb = construct_y(&b, &spec).unwrap();
        let y: FaceMap = join_face_map(&j, &yb).unwrap();
        let report = check_r_prime(&dp, &y, &omega, &seeds, &limits).unwrap();
        assert_eq!(
            report.pass, matrix_route,
            "route mismatch at enumeration index {bits}"
        );
    }
    finish("criterion 9: cross-route consistency", start, 120);
}

/// Criterion 10: for all independent additive matrices of the exhaustive
/// (3,3) and K5 enumerations, the witness sum is constant over the anchor
/// elements within each witness.
#[test]
fn criterion_10_witness_sum_constancy() {
    let start = Instant::now();

    let flavor = Flavor::Join(JoinComplex::new(vec![3, 3]).unwrap());
    let ws = witnesses(&flavor);
    for bits in 0..(1u32 << 10) {
        let mut b = Gf2Matrix::zeros(4, 4);
        let mut idx = 0;
        for i in 0..4 {
            for jj in i..4 {
                if bits >> idx & 1 == 1 {
                    b.set(i, jj, true);
                    b.set(jj, i, true);
                }
                idx += 1;
            }
        }
        let a = bform_expand(&BForm::new(flavor.clone(), b).unwrap());
        if !is_independent(&a).0 {
            continue;
        }
        for w in &ws {
            let first = s_sum(&a, w, 0).unwrap();
            for e in 1..w.element_count() {
                assert_eq!(s_sum(&a, w, e).unwrap(), first);
            }
        }
    }

    // K5: 2^21 compressed forms; the witness sums live on 15 entries of the
    // expansion, precomputed as variable rows.
    let kn = Flavor::Kn(5);
    let ws = witnesses(&kn);
    assert_eq!(ws.len(), 1);
    let coords = kn.coords_matrix();
    let h = 6usize;
    let var_count = h * (h + 1) / 2;
    let var_index = |i: usize, j: usize| i * h - (i * i - i) / 2 + (j - i);
    let pair_var_row = |p: usize, q: usize| -> u32 {
        let (cp, cq) = (coords.column(p), coords.column(q));
        let mut row = 0u32;
        for i in cp.iter_ones() {
            for j in cq.iter_ones() {
                let (a, b) = (i.min(j), i.max(j));
                row ^= 1 << var_index(a, b);
            }
        }
        row
    };
    // Rows of the five anchored sums.
    let mut sum_rows = Vec::new();
    for e in 0..5 {
        let mut row = 0u32;
        for (p, q) in z2embed::conditions::witness_pairs(&kn, &ws[0], e).unwrap() {
            row ^= pair_var_row(p, q);
        }
        sum_rows.push(row);
    }
    assert_eq!(var_count, 21);
    for bits in 0..(1u32 << var_count) {
        let first = (bits & sum_rows[0]).count_ones() % 2;
        for row in &sum_rows[1..] {
            assert_eq!(
                (bits & row).count_ones() % 2,
                first,
                "witness sums differ at form {bits:#x}"
            );
        }
    }
    finish("criterion 10: witness sum constancy", start, 120);
}
