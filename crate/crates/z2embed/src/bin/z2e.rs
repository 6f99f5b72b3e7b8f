use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use z2embed::complexes::{Graph, JoinComplex};
use z2embed::conditions::{
    is_additive, is_independent, is_nontrivial, Flavor, OctMatrix, WitnessMode,
};
use z2embed::delprod::{
    cycle_space_dims, deleted_product, generator_decomposition, graph_symmetric_decomposition,
    tensor_iso_inverse, tensor_space, Complex1, GraphPiece, SymCycle,
};
use z2embed::gf2::{Gf2Matrix, Gf2Vector};
use z2embed::gram::{OmegaKind, OmegaSpec};
use z2embed::search::{
    decide, parse_flavor, tabulate_min_beta, verify_certificate, Certificate, SearchBudget,
    SearchFlavor, Verdict,
};
use z2embed::vankampen::{random_generic_drawing, van_kampen_number, DrawingConfig};
use z2embed::{Error, Result};

/// Mod-2 embeddability of join complexes and graphs: decision, certificates,
/// decompositions and van Kampen numbers.
#[derive(Parser)]
#[command(name = "z2e", version, disable_help_subcommand = true)]
struct Cli {
    /// Worker threads for the search and geometry evaluations.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ComplexArg {
    /// Complex descriptor: join:n1,...,nk+1 | Kn:n | K5 | K33 | tildeK:n |
    /// graph:FILE (JSON {"vertices":N,"edges":[[u,v],...]} or edge list).
    #[arg(long)]
    complex: String,
}

#[derive(Subcommand)]
enum Command {
    /// Basic counts of a complex.
    Info {
        #[command(flatten)]
        complex: ComplexArg,
        #[arg(long)]
        json: bool,
    },
    /// Dimensions of the full and symmetric cycle spaces of the deleted
    /// product (join complexes).
    Dims {
        #[command(flatten)]
        complex: ComplexArg,
        #[arg(long)]
        json: bool,
    },
    /// Cells of the deleted product as ordered face-index pairs.
    Delprod {
        #[command(flatten)]
        complex: ComplexArg,
        #[arg(long)]
        json: bool,
    },
    /// Decompose a symmetric deleted-product cycle into generators, or a
    /// top-dimensional cycle into basis parallelepipeds.
    Decompose {
        #[command(flatten)]
        complex: ComplexArg,
        /// JSON file holding the cycle as a list of [sigma, tau] pairs.
        #[arg(long, conflicts_with_all = ["random", "chain"])]
        cycle: Option<PathBuf>,
        /// JSON file holding a top-dimensional chain as sorted face
        /// indices; runs the rook decomposition instead.
        #[arg(long, conflicts_with = "random")]
        chain: Option<PathBuf>,
        /// Sample a random symmetric cycle instead.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Van Kampen data from a random generic drawing: per-pair parities and
    /// the numbers of the generator cycles.
    Vankampen {
        #[command(flatten)]
        complex: ComplexArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check the three matrix conditions on a full matrix (text format:
    /// "rows cols" then 0/1 rows).
    Check {
        #[command(flatten)]
        complex: ComplexArg,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide mod-2 embeddability into a manifold with the given
    /// intersection form; exits 0 on yes, 1 on no, 2 on unknown.
    Search {
        #[command(flatten)]
        complex: ComplexArg,
        /// Intersection form kind: I (identity) or H (hyperbolic).
        #[arg(long)]
        omega: String,
        #[arg(long)]
        beta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exhaustive-search threshold on the coset dimension.
        #[arg(long, default_value_t = 24)]
        budget: usize,
        /// Restarts for the greedy search beyond the threshold.
        #[arg(long, default_value_t = 256)]
        restarts: usize,
        /// Write the certificate to this file as well.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Verify a certificate file; exits 0 when valid, 1 otherwise.
    Verify { cert: PathBuf },
    /// Minimal beta per complex and form kind.
    Tabulate {
        /// Complex descriptors (repeatable).
        #[arg(long = "complex", required = true)]
        complexes: Vec<String>,
        /// Comma-separated form kinds, e.g. I,H.
        #[arg(long, default_value = "I,H")]
        kinds: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 24)]
        budget: usize,
        #[arg(long, default_value_t = 256)]
        restarts: usize,
        #[arg(long)]
        json: bool,
    },
}

fn load_graph(path: &str) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        #[derive(serde::Deserialize)]
        struct GraphJson {
            vertices: usize,
            edges: Vec<(usize, usize)>,
        }
        let gj: GraphJson = serde_json::from_str(&text)?;
        return Graph::new(gj.vertices, gj.edges);
    }
    // Text edge list: one "u v" pair per line.
    let mut edges = Vec::new();
    let mut max_v = 0;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge line {line:?}")))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge line {line:?}")))?;
        max_v = max_v.max(u).max(v);
        edges.push((u, v));
    }
    Graph::new(max_v + 1, edges)
}

fn resolve_flavor(desc: &str) -> Result<SearchFlavor> {
    if let Some(path) = desc.strip_prefix("graph:") {
        return Ok(SearchFlavor::Graph(load_graph(path)?));
    }
    parse_flavor(desc)
}

fn join_of(flavor: &SearchFlavor) -> Result<&JoinComplex> {
    match flavor {
        SearchFlavor::Join(j) => Ok(j),
        _ => Err(Error::Invalid(
            "this command needs a join complex (join:... or K33)".into(),
        )),
    }
}

fn complex1_of(flavor: &SearchFlavor) -> Complex1 {
    match flavor {
        SearchFlavor::Join(j) => Complex1::Join(j.clone()),
        SearchFlavor::Kn(n) => Complex1::Graph(Graph::complete(*n)),
        SearchFlavor::Graph(g) => Complex1::Graph(g.clone()),
    }
}

fn parse_omega(s: &str, beta: usize) -> Result<OmegaSpec> {
    match s {
        "I" | "i" => OmegaSpec::new(OmegaKind::I, beta),
        "H" | "h" => OmegaSpec::new(OmegaKind::H, beta),
        _ => Err(Error::Parse(format!("omega must be I or H, got {s:?}"))),
    }
}

fn emit(payload: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(payload).expect("json"));
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(threads) = cli.threads {
        // Ignore failure when a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match cli.command {
        Command::Info { complex, json } => {
            let flavor = resolve_flavor(&complex.complex)?;
            let payload = match &flavor {
                SearchFlavor::Join(j) => json!({
                    "complex": j.descriptor(),
                    "k": j.k(),
                    "vertices": j.vertex_count(),
                    "top_faces": j.top_face_count(),
                    "octahedra": j.octahedron_count(),
                    "triple_subcomplexes": j.triple_count(),
                    "cycle_basis_size": z2embed::chains::basis_size(j),
                }),
                SearchFlavor::Kn(n) => json!({
                    "complex": format!("Kn:{n}"),
                    "vertices": n,
                    "edges": n * (n - 1) / 2,
                    "triples": n * (n - 1) * (n - 2) / 6,
                    "cycle_basis_size": (n - 1) * (n - 2) / 2,
                }),
                SearchFlavor::Graph(g) => json!({
                    "complex": g.descriptor(),
                    "vertices": g.vertex_count(),
                    "edges": g.edge_count(),
                    "cycle_basis_size": z2embed::conditions::graph_cycle_basis(g).dim(),
                }),
            };
            if json {
                emit(&payload);
            } else {
                let obj = payload.as_object().expect("info object");
                for (key, value) in obj {
                    println!("{key}: {value}");
                }
            }
            Ok(0)
        }
        Command::Dims { complex, json } => {
            let flavor = resolve_flavor(&complex.complex)?;
            let j = join_of(&flavor)?;
            let (full, symmetric) = cycle_space_dims(j);
            if json {
                emit(&json!({"full": full, "symmetric": symmetric}));
            } else {
                println!("full={full} symmetric={symmetric}");
            }
            Ok(0)
        }
        Command::Delprod { complex, json: _ } => {
            let flavor = resolve_flavor(&complex.complex)?;
            let dp = deleted_product(complex1_of(&flavor));
            emit(&json!({
                "complex": dp.complex.descriptor(),
                "cells": dp.cells,
            }));
            Ok(0)
        }
        Command::Decompose {
            complex,
            cycle,
            chain,
            random,
            seed,
            json: _,
        } => {
            let flavor = resolve_flavor(&complex.complex)?;
            if let Some(path) = chain {
                // Rook decomposition of a top-dimensional cycle.
                let j = join_of(&flavor)?;
                let faces: Vec<usize> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                let chain = z2embed::chains::Chain::top_from_checked_faces(j, &faces)?;
                let rook = z2embed::chains::chain_to_rook(&chain)?;
                let parts = z2embed::chains::rook_decomposition(&rook)?;
                emit(&json!({
                    "parallelepipeds": parts.iter().map(|o| json!({
                        "pairs": o.pairs,
                        "index": j.octahedron_index(o),
                    })).collect::<Vec<_>>(),
                }));
                return Ok(0);
            }
            let dp = deleted_product(complex1_of(&flavor));
            let c = match (cycle, random) {
                (Some(path), _) => {
                    let pairs: Vec<(u32, u32)> =
                        serde_json::from_str(&std::fs::read_to_string(path)?)?;
                    SymCycle::from_pairs(&dp, &pairs)?
                }
                (None, true) => random_symmetric_cycle(&dp, seed)?,
                (None, false) => {
                    return Err(Error::Invalid(
                        "decompose needs --cycle FILE, --chain FILE or --random".into(),
                    ))
                }
            };
            let payload = match &dp.complex {
                Complex1::Join(j) => {
                    let d = generator_decomposition(&dp, &c)?;
                    json!({
                        "tori": d.tori.iter().map(|(p, q)| json!({
                            "p": p.pairs, "q": q.pairs,
                            "p_index": j.octahedron_index(p),
                            "q_index": j.octahedron_index(q),
                        })).collect::<Vec<_>>(),
                        "triples": d.triples.iter().map(|x| json!({
                            "triples": x.triples,
                            "index": j.triple_index(x),
                        })).collect::<Vec<_>>(),
                    })
                }
                Complex1::Graph(g) => {
                    let pieces = graph_symmetric_decomposition(&dp, &c)?;
                    json!({
                        "pieces": pieces.iter().map(|p| match p {
                            GraphPiece::SymTorus { p, q, .. } => json!({
                                "kind": "torus",
                                "p_vertices": p.vertices,
                                "q_vertices": q.vertices,
                            }),
                            GraphPiece::EconomicDp { kind, edge_indices, .. } => json!({
                                "kind": format!("economic:{kind:?}"),
                                "edges": edge_indices.iter()
                                    .map(|&e| g.edges()[e]).collect::<Vec<_>>(),
                            }),
                        }).collect::<Vec<_>>(),
                    })
                }
            };
            emit(&payload);
            Ok(0)
        }
        Command::Vankampen {
            complex,
            seed,
            json: _,
        } => {
            let flavor = resolve_flavor(&complex.complex)?;
            let dp = deleted_product(complex1_of(&flavor));
            let drawing = random_generic_drawing(&dp, seed, &DrawingConfig::default())?;
            let mut pairs: Vec<_> = drawing
                .cocycle()
                .iter()
                .map(|(&(a, b), &p)| (a, b, p as u8))
                .collect();
            pairs.sort_unstable();
            let generators = match &dp.complex {
                Complex1::Join(_) => z2embed::criterion::join_generators(&dp)?,
                Complex1::Graph(_) => {
                    z2embed::criterion::graph_generators(
                        &dp,
                        &z2embed::conditions::GraphLimits::default(),
                    )?
                    .0
                }
            };
            let gens: Result<Vec<_>> = generators
                .iter()
                .map(|(id, c)| {
                    let v = van_kampen_number(&dp, c, &drawing)?;
                    Ok(json!({"id": id, "v": v as u8}))
                })
                .collect();
            emit(&json!({
                "seed": seed,
                "pairs": pairs.iter().map(|(a, b, p)| json!({
                    "sigma": a, "tau": b, "parity": p
                })).collect::<Vec<_>>(),
                "generators": gens?,
            }));
            Ok(0)
        }
        Command::Check {
            complex,
            matrix,
            json: _,
        } => {
            let flavor = resolve_flavor(&complex.complex)?;
            let cf = match &flavor {
                SearchFlavor::Join(j) => Flavor::Join(j.clone()),
                SearchFlavor::Kn(n) => Flavor::Kn(*n),
                SearchFlavor::Graph(_) => {
                    return Err(Error::Invalid(
                        "check needs a join or complete-graph flavor".into(),
                    ))
                }
            };
            let mat = Gf2Matrix::parse_text(&std::fs::read_to_string(matrix)?)?;
            let a = OctMatrix::new(cf, mat)?;
            let (ind, ind_viol) = is_independent(&a);
            let (add, add_viol) = is_additive(&a);
            let (nt, nt_witness) = is_nontrivial(&a, WitnessMode::All)?;
            emit(&json!({
                "independent": ind,
                "independence_violations": ind_viol,
                "additive": add,
                "additivity_violations": add_viol.iter()
                    .map(|v| format!("{v:?}")).collect::<Vec<_>>(),
                "nontrivial": nt,
                "nontriviality_failure": nt_witness,
            }));
            Ok(if ind && add && nt { 0 } else { 1 })
        }
        Command::Search {
            complex,
            omega,
            beta,
            seed,
            budget,
            restarts,
            out,
            json,
        } => {
            let flavor = resolve_flavor(&complex.complex)?;
            let spec = parse_omega(&omega, beta)?;
            let budget = SearchBudget {
                exhaustive_threshold: budget,
                restarts,
                seed,
            };
            let outcome = decide(&flavor, &spec, &budget)?;
            match &outcome.verdict {
                Verdict::Yes(cert) => {
                    let text = serde_json::to_string_pretty(cert.as_ref())?;
                    if let Some(path) = out {
                        std::fs::write(path, &text)?;
                    }
                    if !json {
                        println!("yes (exact={})", outcome.exact);
                    }
                    println!("{text}");
                    Ok(0)
                }
                Verdict::No => {
                    emit(&json!({"verdict": "no", "exact": outcome.exact}));
                    Ok(1)
                }
                Verdict::Unknown { best_upper_bound } => {
                    emit(&json!({
                        "verdict": "unknown",
                        "best_upper_bound": best_upper_bound,
                    }));
                    Ok(2)
                }
            }
        }
        Command::Verify { cert } => {
            let cert: Certificate = serde_json::from_str(&std::fs::read_to_string(cert)?)?;
            let report = verify_certificate(&cert)?;
            if report.ok {
                println!("valid");
                Ok(0)
            } else {
                println!(
                    "INVALID: {}",
                    report.first_violation.unwrap_or_else(|| "unknown".into())
                );
                Ok(1)
            }
        }
        Command::Tabulate {
            complexes,
            kinds,
            seed,
            budget,
            restarts,
            json,
        } => {
            let flavors: Result<Vec<SearchFlavor>> =
                complexes.iter().map(|s| resolve_flavor(s)).collect();
            let kinds: Result<Vec<OmegaKind>> = kinds
                .split(',')
                .map(|k| match k.trim() {
                    "I" | "i" => Ok(OmegaKind::I),
                    "H" | "h" => Ok(OmegaKind::H),
                    other => Err(Error::Parse(format!("unknown form kind {other:?}"))),
                })
                .collect();
            let budget = SearchBudget {
                exhaustive_threshold: budget,
                restarts,
                seed,
            };
            let rows = tabulate_min_beta(&flavors?, &kinds?, &budget)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                println!("{:<16} {:<5} {:<9} exact", "complex", "kind", "min_beta");
                for r in &rows {
                    let beta = r
                        .min_beta
                        .map(|b| b.to_string())
                        .unwrap_or_else(|| "-".into());
                    let kind = r.kind.to_string();
                    println!("{:<16} {kind:<5} {beta:<9} {}", r.complex, r.exact);
                }
            }
            Ok(0)
        }
    }
}

/// Random symmetric cycle of a deleted product, for demonstration input.
fn random_symmetric_cycle(
    dp: &z2embed::delprod::DeletedProduct,
    seed: u64,
) -> Result<SymCycle> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    match &dp.complex {
        Complex1::Join(j) => {
            let ts = tensor_space(j)?;
            let t = ts.t_matrix();
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
            tensor_iso_inverse(dp, &ts, &z)
        }
        Complex1::Graph(_) => {
            let (folded, reps) = dp.folded_boundary_matrix(None);
            let kernel = folded.kernel_basis();
            let mut bits = Gf2Vector::zeros(dp.cell_count());
            for k in &kernel {
                if rng.gen_bool(0.5) {
                    for i in k.iter_ones() {
                        let rep = reps[i] as usize;
                        bits.flip(rep);
                        bits.flip(dp.swap[rep] as usize);
                    }
                }
            }
            Ok(SymCycle { bits })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            // Help and version requests are not usage errors.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(64)
        }
    }
}
