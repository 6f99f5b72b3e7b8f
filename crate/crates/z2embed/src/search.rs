//! The decision engine: encode the independent-additive-non-trivial
//! conditions as an affine system over the compressed form, minimize GF(2)
//! rank over the solution coset subject to the form type, and emit
//! independently verifiable certificates.
//!
//! Additivity is structural: the search runs on the basis-compressed form,
//! whose expansion satisfies the generating relations by construction.
//! Non-triviality enters with one witness element per subobject, which is
//! equivalent for independent additive matrices; certificates are always
//! re-verified with every witness element and the homological check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::{Graph, JoinComplex};
use crate::conditions::{
    bform_expand, graph_criterion_check, is_additive, is_independent, is_nontrivial,
    witness_pairs, witnesses, BForm, CheckStatus, Flavor, GraphLimits, OctMatrix, WitnessMode,
};
use crate::criterion::{check_r_prime, graph_face_map, join_face_map, FaceMap};
use crate::delprod::{deleted_product, Complex1};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::gram::{construct_y, realizable, OmegaKind, OmegaSpec};
use crate::{Error, Result};

/// What the search runs on: a join complex, the complete graph on `[n]`
/// with 3-subset columns, or an arbitrary graph on its fundamental cycle
/// basis.
#[derive(Clone, Debug)]
pub enum SearchFlavor {
    Join(JoinComplex),
    Kn(usize),
    Graph(Graph),
}

impl SearchFlavor {
    pub fn descriptor(&self) -> String {
        match self {
            SearchFlavor::Join(j) => j.descriptor(),
            SearchFlavor::Kn(n) => format!("Kn:{n}"),
            SearchFlavor::Graph(g) => g.descriptor(),
        }
    }

    fn basis_size(&self) -> usize {
        match self {
            SearchFlavor::Join(j) => crate::chains::basis_size(j),
            SearchFlavor::Kn(n) => (n - 1) * (n - 2) / 2,
            SearchFlavor::Graph(g) => crate::conditions::graph_cycle_basis(g).dim(),
        }
    }
}

/// Parses a complex descriptor: `join:n1,...`, `Kn:n`, `K5`, `K33`,
/// `tildeK:n`.
pub fn parse_flavor(s: &str) -> Result<SearchFlavor> {
    if let Some(rest) = s.strip_prefix("join:") {
        let sizes: Result<Vec<usize>> = rest
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad join size {t:?}")))
            })
            .collect();
        return Ok(SearchFlavor::Join(JoinComplex::new(sizes?)?));
    }
    if let Some(rest) = s.strip_prefix("Kn:") {
        let n: usize = rest
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad Kn size {rest:?}")))?;
        if n < 3 {
            return Err(Error::Invalid("the complete-graph flavor needs n >= 3".into()));
        }
        // For n < 5 there are no 5-element witnesses and no disjoint
        // 3-subset pairs; the empty constraint system correctly reports
        // these planar graphs embeddable at beta 0.
        return Ok(SearchFlavor::Kn(n));
    }
    if let Some(rest) = s.strip_prefix("tildeK:") {
        let n: usize = rest
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad tildeK size {rest:?}")))?;
        let (g, _) = crate::complexes::deleted_graph(n)?;
        return Ok(SearchFlavor::Graph(g));
    }
    match s {
        "K5" => Ok(SearchFlavor::Kn(5)),
        "K33" => Ok(SearchFlavor::Join(JoinComplex::new(vec![3, 3])?)),
        _ => Err(Error::Parse(format!("unknown complex descriptor {s:?}"))),
    }
}

/// Affine constraint system over the upper-triangle entries of the
/// compressed form.
pub struct ConstraintSystem {
    pub h: usize,
    pub var_count: usize,
    pub eqs: Gf2Matrix,
    pub rhs: Gf2Vector,
}

#[inline]
fn var_index(h: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < h);
    i * h - (i * i - i) / 2 + (j - i)
}

/// Equation row of the bilinear entry `x_P^T B x_Q` in the variables.
fn pair_row(h: usize, xp: &Gf2Vector, xq: &Gf2Vector) -> Gf2Vector {
    let vars = h * (h + 1) / 2;
    let mut row = Gf2Vector::zeros(vars);
    for i in xp.iter_ones() {
        for j in xq.iter_ones() {
            let (a, b) = (i.min(j), i.max(j));
            row.flip(var_index(h, a, b));
        }
    }
    row
}

pub struct BuiltSystem {
    pub flavor: SearchFlavor,
    pub sys: ConstraintSystem,
    /// Particular solution and kernel basis, or None when inconsistent.
    pub coset: Option<(Gf2Vector, Vec<Gf2Vector>)>,
    pub truncated: bool,
}

/// Builds independence (rhs 0) and one-witness non-triviality (rhs 1)
/// equations, then solves. An inconsistent system means non-triviality is
/// unachievable for every beta.
pub fn build_system(flavor: &SearchFlavor) -> Result<BuiltSystem> {
    build_system_with(flavor, &GraphLimits::default())
}

pub fn build_system_with(flavor: &SearchFlavor, limits: &GraphLimits) -> Result<BuiltSystem> {
    let h = flavor.basis_size();
    let var_count = h * (h + 1) / 2;
    let mut rows: Vec<Gf2Vector> = Vec::new();
    let mut rhs_bits: Vec<bool> = Vec::new();
    let mut truncated = false;
    match flavor {
        SearchFlavor::Join(_) | SearchFlavor::Kn(_) => {
            let cf = match flavor {
                SearchFlavor::Join(j) => Flavor::Join(j.clone()),
                SearchFlavor::Kn(n) => Flavor::Kn(*n),
                SearchFlavor::Graph(_) => unreachable!(),
            };
            let coords = cf.coords_matrix();
            for (p, q) in cf.disjoint_pairs() {
                rows.push(pair_row(h, &coords.column(p), &coords.column(q)));
                rhs_bits.push(false);
            }
            for w in witnesses(&cf) {
                let mut row = Gf2Vector::zeros(var_count);
                for (p, q) in witness_pairs(&cf, &w, 0)? {
                    row.xor_assign(&pair_row(h, &coords.column(p), &coords.column(q)));
                }
                rows.push(row);
                rhs_bits.push(true);
            }
        }
        SearchFlavor::Graph(g) => {
            let basis = crate::conditions::graph_cycle_basis(g);
            let (cycles, trunc_cycles) =
                crate::conditions::enumerate_simple_cycles(g, limits.cycle_limit);
            truncated |= trunc_cycles;
            for (i, p) in cycles.iter().enumerate() {
                for q in cycles.iter().skip(i + 1) {
                    if p.vertices.iter().all(|v| !q.vertices.contains(v)) {
                        rows.push(pair_row(h, &basis.coords(&p.edges), &basis.coords(&q.edges)));
                        rhs_bits.push(false);
                    }
                }
            }
            let (subs, trunc_kur) =
                crate::complexes::kuratowski_subgraphs(g, limits.kuratowski_budget);
            truncated |= trunc_kur;
            for sub in &subs {
                let row = kuratowski_witness_row(g, &basis, sub, h)?;
                rows.push(row);
                rhs_bits.push(true);
            }
        }
    }
    let eqs = if rows.is_empty() {
        Gf2Matrix::zeros(0, var_count)
    } else {
        Gf2Matrix::from_rows(&rows)
    };
    let rhs = Gf2Vector::from_bools(&rhs_bits);
    let coset = eqs.solve_affine(&rhs)?;
    Ok(BuiltSystem {
        flavor: flavor.clone(),
        sys: ConstraintSystem {
            h,
            var_count,
            eqs,
            rhs,
        },
        coset,
        truncated,
    })
}

/// One-witness non-triviality row of a Kuratowski subgraph: anchored at the
/// first branch vertex (K5) or the first branch pair (K33).
fn kuratowski_witness_row(
    g: &Graph,
    basis: &crate::conditions::GraphCycleBasis,
    sub: &crate::complexes::KuratowskiSubgraph,
    h: usize,
) -> Result<Gf2Vector> {
    let branch_cycle = |seq: &[usize]| -> Result<Gf2Vector> {
        let mut bits = Gf2Vector::zeros(g.edge_count());
        for i in 0..seq.len() {
            let (s, t) = (seq[i], seq[(i + 1) % seq.len()]);
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
        Ok(basis.coords(&bits))
    };
    let b = &sub.branch_vertices;
    let var_count = h * (h + 1) / 2;
    let mut row = Gf2Vector::zeros(var_count);
    match sub.kind {
        crate::complexes::HomeoType::K5 => {
            let v = b[0];
            let others = &b[1..5];
            for partner in 1..4 {
                let p = branch_cycle(&[v, others[0], others[partner]])?;
                let rest: Vec<usize> = (1..4)
                    .filter(|&i| i != partner)
                    .map(|i| others[i])
                    .collect();
                let q = branch_cycle(&[v, rest[0], rest[1]])?;
                row.xor_assign(&pair_row(h, &p, &q));
            }
        }
        crate::complexes::HomeoType::K33 => {
            // Anchored at the branch (b[0], b[3]).
            for m in 0..2 {
                let p = branch_cycle(&[b[0], b[3], b[1], b[4 + m]])?;
                let q = branch_cycle(&[b[0], b[3], b[2], b[5 - m]])?;
                row.xor_assign(&pair_row(h, &p, &q));
            }
        }
        _ => return Err(Error::Internal("not a Kuratowski subgraph".into())),
    }
    Ok(row)
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    /// Coset dimensions up to this bound are enumerated exhaustively.
    pub exhaustive_threshold: usize,
    /// Restarts of the greedy descent beyond the threshold.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            exhaustive_threshold: 24,
            restarts: 256,
            seed: 0,
        }
    }
}

/// Best achievable effective beta per target kind, with witnesses.
#[derive(Clone, Debug, Default)]
pub struct ScanResult {
    /// (effective beta, variable vector) minimizing the identity target.
    pub best_i: Option<(usize, Gf2Vector)>,
    /// Same for the hyperbolic target (alternating forms only).
    pub best_h: Option<(usize, Gf2Vector)>,
    pub exact: bool,
}

fn form_rows(h: usize, vars: &Gf2Vector) -> Vec<u64> {
    debug_assert!(h <= 64);
    let mut rows = vec![0u64; h];
    for i in 0..h {
        for j in 0..h {
            let (a, b) = (i.min(j), i.max(j));
            if vars.get(var_index(h, a, b)) {
                rows[i] |= 1 << j;
            }
        }
    }
    rows
}

fn rank_rows(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for c in 0..64 {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r] >> c & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r] >> c & 1 == 1 {
                rows[r] ^= rows[rank];
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Effective beta of a form for each kind: the smallest beta whose target
/// realizes it. The identity target pays one extra dimension for a nonzero
/// alternating form; the hyperbolic target rejects non-alternating forms.
fn effective_betas(h: usize, vars: &Gf2Vector) -> (usize, Option<usize>) {
    let rows = form_rows(h, vars);
    let alternating = (0..h).all(|i| rows[i] >> i & 1 == 0);
    let rank = rank_rows(rows);
    let eff_i = if alternating && rank > 0 { rank + 1 } else { rank };
    let eff_h = alternating.then_some(rank);
    (eff_i, eff_h)
}

fn bform_lex_key(h: usize, vars: &Gf2Vector) -> Vec<u64> {
    // Bit-reverse each row so numeric comparison orders column 0 first.
    form_rows(h, vars)
        .into_iter()
        .map(u64::reverse_bits)
        .collect()
}

fn better(
    cur: &Option<(usize, Gf2Vector)>,
    eff: usize,
    vars: &Gf2Vector,
    h: usize,
) -> bool {
    match cur {
        None => true,
        Some((ce, cv)) => {
            eff < *ce || (eff == *ce && bform_lex_key(h, vars) < bform_lex_key(h, cv))
        }
    }
}

/// Exhaustive scan of the whole coset in Gray-code order; chunks run in
/// parallel and merge by (effective beta, lexicographic form).
fn scan_exhaustive(h: usize, particular: &Gf2Vector, kernel: &[Gf2Vector]) -> ScanResult {
    let dim = kernel.len();
    let total: u64 = 1u64 << dim;
    let chunks: u64 = if dim >= 16 {
        (rayon::current_num_threads() as u64 * 8).min(total)
    } else {
        1
    };
    let chunk_size = total.div_ceil(chunks);
    let partials: Vec<ScanResult> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * chunk_size;
            let end = (start + chunk_size).min(total);
            let mut cur = particular.clone();
            let gray = start ^ (start >> 1);
            for (j, k) in kernel.iter().enumerate() {
                if gray >> j & 1 == 1 {
                    cur.xor_assign(k);
                }
            }
            let mut res = ScanResult {
                exact: true,
                ..Default::default()
            };
            let mut n = start;
            loop {
                let (eff_i, eff_h) = effective_betas(h, &cur);
                if better(&res.best_i, eff_i, &cur, h) {
                    res.best_i = Some((eff_i, cur.clone()));
                }
                if let Some(eh) = eff_h {
                    if better(&res.best_h, eh, &cur, h) {
                        res.best_h = Some((eh, cur.clone()));
                    }
                }
                n += 1;
                if n >= end {
                    break;
                }
                // Gray step: flip the bit that changes between n-1 and n.
                let flip = (n ^ (n >> 1)) ^ ((n - 1) ^ ((n - 1) >> 1));
                cur.xor_assign(&kernel[flip.trailing_zeros() as usize]);
            }
            res
        })
        .collect();
    let mut out = ScanResult {
        exact: true,
        ..Default::default()
    };
    for p in partials {
        if let Some((e, v)) = p.best_i {
            if better(&out.best_i, e, &v, h) {
                out.best_i = Some((e, v));
            }
        }
        if let Some((e, v)) = p.best_h {
            if better(&out.best_h, e, &v, h) {
                out.best_h = Some((e, v));
            }
        }
    }
    out
}

/// Strictly descending local search: single kernel flips first, pairs of
/// flips to escape shallow plateaus. The scalar objective guarantees
/// termination.
fn greedy_descent(
    start: &Gf2Vector,
    kernel: &[Gf2Vector],
    objective: &dyn Fn(&Gf2Vector) -> usize,
) -> Gf2Vector {
    let mut cur = start.clone();
    let mut cur_val = objective(&cur);
    loop {
        let mut improved = false;
        for k in kernel {
            let mut cand = cur.clone();
            cand.xor_assign(k);
            let val = objective(&cand);
            if val < cur_val {
                cur = cand;
                cur_val = val;
                improved = true;
                break;
            }
        }
        if improved {
            continue;
        }
        'pairs: for (i, ki) in kernel.iter().enumerate() {
            for kj in kernel.iter().skip(i + 1) {
                let mut cand = cur.clone();
                cand.xor_assign(ki);
                cand.xor_assign(kj);
                let val = objective(&cand);
                if val < cur_val {
                    cur = cand;
                    cur_val = val;
                    improved = true;
                    break 'pairs;
                }
            }
        }
        if !improved {
            return cur;
        }
    }
}

/// Randomized greedy with restarts: per restart, one descent per target
/// kind. The hyperbolic objective penalizes diagonal entries so the search
/// has a gradient towards alternating forms.
fn scan_greedy(
    h: usize,
    particular: &Gf2Vector,
    kernel: &[Gf2Vector],
    budget: &SearchBudget,
) -> ScanResult {
    use rand::{Rng, SeedableRng};
    let diag_ones = |v: &Gf2Vector| -> usize {
        (0..h).filter(|&i| v.get(var_index(h, i, i))).count()
    };
    let obj_i = |v: &Gf2Vector| effective_betas(h, v).0;
    let obj_h = move |v: &Gf2Vector| {
        let rows = form_rows(h, v);
        let rank = rank_rows(rows);
        diag_ones(v) * (h + 1) + rank
    };
    let mut res = ScanResult {
        exact: false,
        ..Default::default()
    };
    for restart in 0..budget.restarts as u64 {
        let mut rng =
            rand_chacha::ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(restart));
        let mut start = particular.clone();
        for k in kernel {
            if rng.gen_bool(0.5) {
                start.xor_assign(k);
            }
        }
        for cur in [
            greedy_descent(&start, kernel, &obj_i),
            greedy_descent(&start, kernel, &obj_h),
        ] {
            let (eff_i, eff_h) = effective_betas(h, &cur);
            if better(&res.best_i, eff_i, &cur, h) {
                res.best_i = Some((eff_i, cur.clone()));
            }
            if let Some(eh) = eff_h {
                if better(&res.best_h, eh, &cur, h) {
                    res.best_h = Some((eh, cur.clone()));
                }
            }
        }
    }
    res
}

pub fn scan_coset(
    h: usize,
    particular: &Gf2Vector,
    kernel: &[Gf2Vector],
    budget: &SearchBudget,
) -> ScanResult {
    if kernel.len() <= budget.exhaustive_threshold {
        scan_exhaustive(h, particular, kernel)
    } else {
        scan_greedy(h, particular, kernel, budget)
    }
}

/// Search result for a plain rank minimization over the coset.
#[derive(Clone, Debug)]
pub struct MinRankResult {
    pub rank: usize,
    pub form: Gf2Matrix,
    pub exact: bool,
}

/// Minimum rank over the solution coset, optionally restricted to one form
/// type. Exhaustive below the budget threshold (exact), randomized greedy
/// with restarts beyond it (upper bound). Ties break to the
/// lexicographically least form.
pub fn min_rank_over_coset(
    h: usize,
    particular: &Gf2Vector,
    kernel: &[Gf2Vector],
    constraint: Option<crate::gf2::FormType>,
    budget: &SearchBudget,
) -> Option<MinRankResult> {
    use crate::gf2::FormType;
    let admissible = |vars: &Gf2Vector| -> Option<usize> {
        let rows = form_rows(h, vars);
        let alternating = (0..h).all(|i| rows[i] >> i & 1 == 0);
        match constraint {
            Some(FormType::Alternating) if !alternating => None,
            Some(FormType::NonAlternating) if alternating => None,
            _ => Some(rank_rows(rows)),
        }
    };
    let exact = kernel.len() <= budget.exhaustive_threshold;
    let mut best: Option<(usize, Gf2Vector)> = None;
    let consider = |vars: &Gf2Vector, best: &mut Option<(usize, Gf2Vector)>| {
        if let Some(rank) = admissible(vars) {
            if better(best, rank, vars, h) {
                *best = Some((rank, vars.clone()));
            }
        }
    };
    if exact {
        let mut cur = particular.clone();
        let total: u64 = 1u64 << kernel.len();
        let mut n: u64 = 0;
        loop {
            consider(&cur, &mut best);
            n += 1;
            if n >= total {
                break;
            }
            let flip = (n ^ (n >> 1)) ^ ((n - 1) ^ ((n - 1) >> 1));
            cur.xor_assign(&kernel[flip.trailing_zeros() as usize]);
        }
    } else {
        use rand::{Rng, SeedableRng};
        for restart in 0..budget.restarts as u64 {
            let mut rng =
                rand_chacha::ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(restart));
            let mut cur = particular.clone();
            for k in kernel {
                if rng.gen_bool(0.5) {
                    cur.xor_assign(k);
                }
            }
            loop {
                let cur_rank = admissible(&cur).unwrap_or(usize::MAX);
                let mut improved = false;
                for k in kernel {
                    let mut cand = cur.clone();
                    cand.xor_assign(k);
                    if admissible(&cand).unwrap_or(usize::MAX) < cur_rank {
                        cur = cand;
                        improved = true;
                        break;
                    }
                }
                if !improved {
                    break;
                }
            }
            consider(&cur, &mut best);
        }
    }
    best.map(|(rank, vars)| MinRankResult {
        rank,
        form: vars_to_bform(h, &vars),
        exact,
    })
}

fn vars_to_bform(h: usize, vars: &Gf2Vector) -> Gf2Matrix {
    let mut m = Gf2Matrix::zeros(h, h);
    for i in 0..h {
        for j in i..h {
            if vars.get(var_index(h, i, j)) {
                m.set(i, j, true);
                m.set(j, i, true);
            }
        }
    }
    m
}

/// A claim of mod-2 embeddability: the realization matrix with enough
/// context to re-verify it from scratch.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub complex: String,
    pub omega: OmegaSpec,
    #[serde(rename = "Y")]
    pub y: Vec<String>,
    pub columns: String,
    pub seed: u64,
    /// Present only for plain-graph certificates, which are otherwise not
    /// reconstructible from the descriptor alone.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub graph: Option<GraphData>,
}

/// Self-contained graph payload of a certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphData {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub enum Verdict {
    Yes(Box<Certificate>),
    No,
    Unknown { best_upper_bound: Option<usize> },
}

#[derive(Clone, Debug, Serialize)]
pub struct DecideOutcome {
    pub verdict: Verdict,
    /// Whether the search was exhaustive (a No is only mathematical when
    /// it was).
    pub exact: bool,
}

fn columns_tag(flavor: &SearchFlavor) -> &'static str {
    match flavor {
        SearchFlavor::Join(_) => "lexicographic-octahedra",
        SearchFlavor::Kn(_) => "lexicographic-3-subsets",
        SearchFlavor::Graph(_) => "fundamental-cycle-basis",
    }
}

/// Complete enumeration of the satisfying forms of small effective beta,
/// independent of the coset dimension. Rank-1 symmetric forms are exactly
/// the products `u u^T`; alternating forms of rank at most 2 are exactly
/// `u v^T + v u^T`, and with `u` fixed the constraints become affine in
/// `v`. Returns `None` when the stratum is not covered, `Some(None)` for a
/// definitive absence, `Some(Some(form))` for a witness.
fn structured_small_beta(
    sys: &ConstraintSystem,
    spec: &OmegaSpec,
) -> Option<Option<Gf2Matrix>> {
    let h = sys.h;
    // Row-reduce once to an equivalent minimal system; the per-candidate
    // work below is linear in the row count.
    let (eqs, rhs) = {
        let mut aug = Gf2Matrix::zeros(sys.eqs.rows(), sys.var_count + 1);
        for r in 0..sys.eqs.rows() {
            for w in sys.eqs.row(r).iter_ones() {
                aug.set(r, w, true);
            }
            if sys.rhs.get(r) {
                aug.set(r, sys.var_count, true);
            }
        }
        aug.reduce();
        let mut rows = Vec::new();
        let mut rhs_bits = Vec::new();
        for r in 0..aug.rows() {
            let row = aug.row(r);
            let mut vars_part = Gf2Vector::zeros(sys.var_count);
            let mut nonzero = false;
            for i in row.iter_ones() {
                if i < sys.var_count {
                    vars_part.set(i, true);
                    nonzero = true;
                }
            }
            if nonzero {
                rows.push(vars_part);
                rhs_bits.push(row.get(sys.var_count));
            }
        }
        (Gf2Matrix::from_rows(&rows), Gf2Vector::from_bools(&rhs_bits))
    };
    let sys = &ConstraintSystem {
        h,
        var_count: sys.var_count,
        eqs,
        rhs,
    };
    let satisfied = |vars: &Gf2Vector| sys.eqs.mul_vec(vars) == sys.rhs;
    let uu_vars = |u: u64| -> Gf2Vector {
        let mut vars = Gf2Vector::zeros(sys.var_count);
        for i in 0..h {
            if u >> i & 1 == 0 {
                continue;
            }
            for j in i..h {
                if u >> j & 1 == 1 {
                    vars.set(var_index(h, i, j), true);
                }
            }
        }
        vars
    };
    match (spec.kind, spec.beta) {
        (_, 0) => {
            // Only the zero form qualifies.
            let zero = Gf2Vector::zeros(sys.var_count);
            Some(satisfied(&zero).then(|| vars_to_bform(h, &zero)))
        }
        (OmegaKind::I, 1) if h <= 26 => {
            for u in 0..(1u64 << h) {
                let vars = uu_vars(u);
                if satisfied(&vars) {
                    return Some(Some(vars_to_bform(h, &vars)));
                }
            }
            Some(None)
        }
        (OmegaKind::H, 2) if h <= 26 => {
            // Fix u; the entries of u v^T + v u^T are linear in v, so each
            // equation row folds to an affine condition on v through the
            // symmetric coefficient matrix of the row.
            let mut coeff: Vec<Gf2Matrix> = Vec::with_capacity(sys.eqs.rows());
            for e in 0..sys.eqs.rows() {
                let mut c = Gf2Matrix::zeros(h, h);
                for i in 0..h {
                    for j in i..h {
                        if sys.eqs.get(e, var_index(h, i, j)) {
                            c.set(i, j, true);
                            c.set(j, i, true);
                        }
                    }
                }
                coeff.push(c);
            }
            for u in 0..(1u64 << h) {
                let uvec = Gf2Vector::from_bools(
                    &(0..h).map(|i| u >> i & 1 == 1).collect::<Vec<bool>>(),
                );
                let mut m = Gf2Matrix::zeros(sys.eqs.rows(), h);
                for (e, c) in coeff.iter().enumerate() {
                    // Diagonal entries u_i v_i never arise: u v^T + v u^T
                    // is alternating, and the diagonal coefficients of the
                    // row act on it as zero, so only off-diagonal
                    // coefficients survive in C u.
                    let row = c.mul_vec(&uvec);
                    for l in row.iter_ones() {
                        m.set(e, l, true);
                    }
                }
                if let Ok(Some((v, _))) = m.solve_affine(&sys.rhs) {
                    let mut vars = Gf2Vector::zeros(sys.var_count);
                    for i in 0..h {
                        for j in i + 1..h {
                            let bit = (u >> i & 1 == 1 && v.get(j))
                                ^ (u >> j & 1 == 1 && v.get(i));
                            if bit {
                                vars.set(var_index(h, i, j), true);
                            }
                        }
                    }
                    debug_assert!(satisfied(&vars));
                    return Some(Some(vars_to_bform(h, &vars)));
                }
            }
            Some(None)
        }
        (OmegaKind::I, 2) if 2 * h <= 24 => {
            // Non-alternating rank <= 2 forms are u u^T + v v^T; the zero
            // form is u = v. Alternating candidates at this beta reduce to
            // rank 0, which u = v = 0 covers.
            for u in 0..(1u64 << h) {
                let base = uu_vars(u);
                for v in u..(1u64 << h) {
                    let mut vars = base.clone();
                    vars.xor_assign(&uu_vars(v));
                    if satisfied(&vars) {
                        return Some(Some(vars_to_bform(h, &vars)));
                    }
                }
            }
            Some(None)
        }
        _ => None,
    }
}

/// Decides mod-2 embeddability for the given target form. `No` is only
/// returned from a complete enumeration (the whole coset, or the full
/// stratum of forms realizable at the requested beta); heuristic failure
/// yields `Unknown`. Every `Yes` carries a certificate that has been
/// re-verified with all witness elements and the homological check on
/// three drawings.
pub fn decide(
    flavor: &SearchFlavor,
    spec: &OmegaSpec,
    budget: &SearchBudget,
) -> Result<DecideOutcome> {
    let built = build_system(flavor)?;
    let Some((particular, kernel)) = &built.coset else {
        // Non-triviality cannot be satisfied at any beta.
        return Ok(DecideOutcome {
            verdict: Verdict::No,
            exact: true,
        });
    };
    let h = built.sys.h;
    // Small-beta strata admit complete enumeration regardless of the coset
    // dimension; prefer it whenever the coset scan would be heuristic.
    if kernel.len() > budget.exhaustive_threshold {
        if let Some(outcome) = structured_small_beta(&built.sys, spec) {
            return match outcome {
                Some(b) => {
                    let cert = certify(flavor, spec, &b, budget.seed)?;
                    if built.truncated {
                        return Ok(DecideOutcome {
                            verdict: Verdict::Unknown {
                                best_upper_bound: Some(spec.beta),
                            },
                            exact: false,
                        });
                    }
                    Ok(DecideOutcome {
                        verdict: Verdict::Yes(Box::new(cert)),
                        exact: true,
                    })
                }
                None => Ok(DecideOutcome {
                    verdict: if built.truncated {
                        Verdict::Unknown {
                            best_upper_bound: None,
                        }
                    } else {
                        Verdict::No
                    },
                    exact: !built.truncated,
                }),
            };
        }
    }
    let scan = scan_coset(h, particular, kernel, budget);
    let best = match spec.kind {
        OmegaKind::I => scan.best_i.clone(),
        OmegaKind::H => scan.best_h.clone(),
    };
    match best {
        Some((eff, vars)) if eff <= spec.beta => {
            let b = vars_to_bform(h, &vars);
            let cert = certify(flavor, spec, &b, budget.seed)?;
            if built.truncated {
                // Missing constraints could hide violations; report honestly.
                return Ok(DecideOutcome {
                    verdict: Verdict::Unknown {
                        best_upper_bound: Some(eff),
                    },
                    exact: false,
                });
            }
            Ok(DecideOutcome {
                verdict: Verdict::Yes(Box::new(cert)),
                exact: scan.exact,
            })
        }
        best => {
            if scan.exact && !built.truncated {
                Ok(DecideOutcome {
                    verdict: Verdict::No,
                    exact: true,
                })
            } else {
                Ok(DecideOutcome {
                    verdict: Verdict::Unknown {
                        best_upper_bound: best.map(|(e, _)| e),
                    },
                    exact: false,
                })
            }
        }
    }
}

/// Builds and fully verifies a certificate from a satisfying compressed
/// form: Gram realization, all three matrix conditions with every witness
/// element, and the homological check on three seeds.
fn certify(
    flavor: &SearchFlavor,
    spec: &OmegaSpec,
    b: &Gf2Matrix,
    seed: u64,
) -> Result<Certificate> {
    let omega = spec.matrix();
    let (y_matrix, face_map, dp): (Gf2Matrix, FaceMap, _) = match flavor {
        SearchFlavor::Join(j) => {
            let cf = Flavor::Join(j.clone());
            let bform = BForm::new(cf.clone(), b.clone())?;
            let a = bform_expand(&bform);
            if !realizable(&a.mat, spec)? {
                return Err(Error::Internal("search produced an unrealizable form".into()));
            }
            let y = construct_y(&a.mat, spec)?;
            verify_conditions(&a)?;
            // Induced homomorphism on the anchored basis = columns of Y at
            // the basis octahedra.
            let mut psi = Gf2Matrix::zeros(spec.beta, b.rows());
            for (c, idx) in cf.basis_indices().iter().enumerate() {
                let col = y.column(*idx);
                for r in col.iter_ones() {
                    psi.set(r, c, true);
                }
            }
            let fm = join_face_map(j, &psi)?;
            let dp = deleted_product(Complex1::Join(j.clone()));
            (y, fm, dp)
        }
        SearchFlavor::Kn(n) => {
            let cf = Flavor::Kn(*n);
            let bform = BForm::new(cf.clone(), b.clone())?;
            let a = bform_expand(&bform);
            if !realizable(&a.mat, spec)? {
                return Err(Error::Internal("search produced an unrealizable form".into()));
            }
            let y = construct_y(&a.mat, spec)?;
            verify_conditions(&a)?;
            let g = Graph::complete(*n);
            // Fundamental cycles of K_n are the triangles through vertex 0,
            // which are exactly the flavor's basis objects.
            let mut psi = Gf2Matrix::zeros(spec.beta, b.rows());
            for (c, idx) in cf.basis_indices().iter().enumerate() {
                let col = y.column(*idx);
                for r in col.iter_ones() {
                    psi.set(r, c, true);
                }
            }
            let fm = graph_face_map(&g, &psi)?;
            let dp = deleted_product(Complex1::Graph(g));
            (y, fm, dp)
        }
        SearchFlavor::Graph(g) => {
            if !realizable(b, spec)? {
                return Err(Error::Internal("search produced an unrealizable form".into()));
            }
            let y = construct_y(b, spec)?;
            let report = graph_criterion_check(g, &y, &omega, &GraphLimits::default())?;
            if !report.all_pass() {
                return Err(Error::Internal(
                    "graph criterion verification failed on a search result".into(),
                ));
            }
            let fm = graph_face_map(g, &y)?;
            let dp = deleted_product(Complex1::Graph(g.clone()));
            (y, fm, dp)
        }
    };
    let seeds = [seed, seed.wrapping_add(1), seed.wrapping_add(2)];
    let report = check_r_prime(&dp, &face_map, &omega, &seeds, &GraphLimits::default())?;
    if !report.pass {
        return Err(Error::Internal(
            "homological verification failed on a search result".into(),
        ));
    }
    Ok(Certificate {
        complex: flavor.descriptor(),
        omega: *spec,
        y: (0..y_matrix.rows())
            .map(|r| y_matrix.row(r).to_bit_string())
            .collect(),
        columns: columns_tag(flavor).to_string(),
        seed,
        graph: match flavor {
            SearchFlavor::Graph(g) => Some(GraphData {
                vertices: g.vertex_count(),
                edges: g.edges().to_vec(),
            }),
            _ => None,
        },
    })
}

fn verify_conditions(a: &OctMatrix) -> Result<()> {
    if !is_independent(a).0 {
        return Err(Error::Internal("independence verification failed".into()));
    }
    if !is_additive(a).0 {
        return Err(Error::Internal("additivity verification failed".into()));
    }
    if !is_nontrivial(a, WitnessMode::All)?.0 {
        return Err(Error::Internal("non-triviality verification failed".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub first_violation: Option<String>,
}

/// Re-verifies a certificate from scratch: recompute `A = Y^T Ω Y` and run
/// all three conditions with every witness element (or the full graph
/// criterion for graph certificates).
pub fn verify_certificate(cert: &Certificate) -> Result<VerifyReport> {
    let flavor = match &cert.graph {
        Some(data) => SearchFlavor::Graph(Graph::new(data.vertices, data.edges.clone())?),
        None => parse_flavor(&cert.complex)?,
    };
    verify_certificate_for(&flavor, cert)
}

pub fn verify_certificate_for(flavor: &SearchFlavor, cert: &Certificate) -> Result<VerifyReport> {
    let omega = cert.omega.matrix();
    if cert.y.len() != cert.omega.beta {
        return Ok(VerifyReport {
            ok: false,
            first_violation: Some(format!(
                "Y has {} rows, omega has beta {}",
                cert.y.len(),
                cert.omega.beta
            )),
        });
    }
    let rows: Result<Vec<Gf2Vector>> = cert.y.iter().map(|s| Gf2Vector::parse_bits(s)).collect();
    let rows = rows?;
    let violation = |msg: String| {
        Ok(VerifyReport {
            ok: false,
            first_violation: Some(msg),
        })
    };
    match flavor {
        SearchFlavor::Join(_) | SearchFlavor::Kn(_) => {
            let cf = match flavor {
                SearchFlavor::Join(j) => Flavor::Join(j.clone()),
                SearchFlavor::Kn(n) => Flavor::Kn(*n),
                SearchFlavor::Graph(_) => unreachable!(),
            };
            let n_cols = cf.index_count();
            if rows.iter().any(|r| r.len() != n_cols) {
                return violation(format!("Y rows must have {n_cols} columns"));
            }
            let y = Gf2Matrix::from_rows(&rows);
            let a_mat = y.transpose().mul(&omega).mul(&y);
            let a = OctMatrix::new(cf, a_mat)?;
            let (ind, viols) = is_independent(&a);
            if !ind {
                return violation(format!("independence fails at index pair {:?}", viols[0]));
            }
            let (add, viols) = is_additive(&a);
            if !add {
                return violation(format!("additivity fails: {:?}", viols[0]));
            }
            let (nt, witness) = is_nontrivial(&a, WitnessMode::All)?;
            if !nt {
                return violation(format!(
                    "non-triviality fails at witness {:?}",
                    witness.expect("failing witness")
                ));
            }
        }
        SearchFlavor::Graph(g) => {
            let basis = crate::conditions::graph_cycle_basis(g);
            if rows.iter().any(|r| r.len() != basis.dim()) {
                return violation(format!("Y rows must have {} columns", basis.dim()));
            }
            let y = Gf2Matrix::from_rows(&rows);
            let report = graph_criterion_check(g, &y, &omega, &GraphLimits::default())?;
            if !report.all_pass() {
                let first = [
                    ("independence", &report.independence),
                    ("K5-non-triviality", &report.k5_nontriviality),
                    ("K33-non-triviality", &report.k33_nontriviality),
                ]
                .iter()
                .find(|(_, o)| o.status != CheckStatus::Pass)
                .map(|(name, o)| format!("{name}: {:?} {:?}", o.status, o.violations))
                .unwrap_or_else(|| "unknown".into());
                return violation(first);
            }
        }
    }
    Ok(VerifyReport {
        ok: true,
        first_violation: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TabRow {
    pub complex: String,
    pub kind: OmegaKind,
    pub min_beta: Option<usize>,
    pub exact: bool,
}

/// Minimal beta admitting a realization per flavor and kind, with honest
/// exactness flags: inexact entries are upper bounds from the greedy
/// search.
pub fn tabulate_min_beta(
    flavors: &[SearchFlavor],
    kinds: &[OmegaKind],
    budget: &SearchBudget,
) -> Result<Vec<TabRow>> {
    let mut out = Vec::new();
    for flavor in flavors {
        let built = build_system(flavor)?;
        let scan = match &built.coset {
            None => ScanResult {
                exact: true,
                ..Default::default()
            },
            Some((particular, kernel)) => scan_coset(built.sys.h, particular, kernel, budget),
        };
        for &kind in kinds {
            let best = match kind {
                OmegaKind::I => &scan.best_i,
                OmegaKind::H => &scan.best_h,
            };
            let mut min_beta = best.as_ref().map(|(e, _)| *e);
            let mut exact = scan.exact && !built.truncated;
            if !exact && built.coset.is_some() {
                // Complete small-beta strata can settle an entry the
                // heuristic scan only bounded.
                let step = match kind {
                    OmegaKind::I => 1,
                    OmegaKind::H => 2,
                };
                let mut beta = 0;
                while beta <= 2 {
                    let spec = OmegaSpec::new(kind, beta)?;
                    match structured_small_beta(&built.sys, &spec) {
                        Some(Some(_)) => {
                            min_beta = Some(beta);
                            exact = !built.truncated;
                            break;
                        }
                        Some(None) => {
                            beta += step;
                        }
                        None => break,
                    }
                }
            }
            out.push(TabRow {
                complex: flavor.descriptor(),
                kind,
                min_beta,
                exact,
            });
        }
    }
    Ok(out)
}
