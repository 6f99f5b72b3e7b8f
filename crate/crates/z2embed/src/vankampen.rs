//! Van Kampen numbers from explicit straight-simplex drawings.
//!
//! Vertices are placed at random integer points of a box in `R^{2k}`; every
//! pair of vertex-disjoint top faces must then meet transversally in at most
//! one interior point, which is decided exactly by solving the barycentric
//! linear system in rational arithmetic. Degenerate configurations are
//! detected and the drawing is resampled, never perturbed.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::delprod::{DeletedProduct, SymCycle};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct DrawingConfig {
    pub box_radius: i64,
    pub max_retries: u32,
}

impl Default for DrawingConfig {
    fn default() -> Self {
        DrawingConfig {
            box_radius: 1_000_000,
            max_retries: 100,
        }
    }
}

/// A straight-simplex map into `R^{2k}`, with the intersection parities of
/// all disjoint face pairs precomputed during genericity validation.
pub struct Drawing {
    pub k: usize,
    pub points: Vec<Vec<i64>>,
    pub seed: u64,
    cocycle: HashMap<(u32, u32), bool>,
}

impl Drawing {
    /// Parities over unordered disjoint face pairs, keyed by `(a, b)` with
    /// `a < b`.
    pub fn cocycle(&self) -> &HashMap<(u32, u32), bool> {
        &self.cocycle
    }
}

enum SolveOutcome {
    Unique(Vec<BigRational>),
    Inconsistent,
    Underdetermined,
}

fn solve_rational(mut m: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> SolveOutcome {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        b.swap(r, p);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= &inv;
        }
        b[r] /= &inv;
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for cc in 0..cols {
                    let sub = &m[r][cc] * &f;
                    m[i][cc] -= sub;
                }
                let sub = &b[r] * &f;
                b[i] -= sub;
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    for i in r..rows {
        if !b[i].is_zero() {
            return SolveOutcome::Inconsistent;
        }
    }
    if pivots.len() < cols {
        return SolveOutcome::Underdetermined;
    }
    let mut x = vec![BigRational::zero(); cols];
    for &(row, col) in &pivots {
        x[col] = b[row].clone();
    }
    SolveOutcome::Unique(x)
}

/// Intersection parity of two k-simplices in `R^{2k}` given by their vertex
/// coordinates. Returns the parity, or a degeneracy error when the affine
/// hulls meet in more than a point or the meeting point touches a boundary.
pub fn intersection_parity(sigma: &[&[i64]], tau: &[&[i64]]) -> Result<bool> {
    let k = sigma.len() - 1;
    let dim = 2 * k;
    debug_assert_eq!(tau.len(), k + 1);
    debug_assert!(sigma.iter().chain(tau).all(|p| p.len() == dim));
    let unknowns = 2 * (k + 1);
    let mut m = vec![vec![BigRational::zero(); unknowns]; dim + 2];
    let mut b = vec![BigRational::zero(); dim + 2];
    for d in 0..dim {
        for (i, p) in sigma.iter().enumerate() {
            m[d][i] = BigRational::from(BigInt::from(p[d]));
        }
        for (j, q) in tau.iter().enumerate() {
            m[d][k + 1 + j] = -BigRational::from(BigInt::from(q[d]));
        }
    }
    for i in 0..=k {
        m[dim][i] = BigRational::one();
        m[dim + 1][k + 1 + i] = BigRational::one();
    }
    b[dim] = BigRational::one();
    b[dim + 1] = BigRational::one();
    match solve_rational(m, b) {
        SolveOutcome::Inconsistent => Ok(false),
        SolveOutcome::Underdetermined => Err(Error::Degenerate(
            "affine hulls meet in a positive-dimensional set".into(),
        )),
        SolveOutcome::Unique(x) => {
            if x.iter().any(|c| c.is_zero()) {
                return Err(Error::Degenerate(
                    "intersection point touches a simplex boundary".into(),
                ));
            }
            Ok(x.iter().all(|c| c.is_positive()))
        }
    }
}

fn face_points<'a>(dp: &DeletedProduct, points: &'a [Vec<i64>], face: u32) -> Vec<&'a [i64]> {
    dp.complex
        .face_vertices(face as usize)
        .into_iter()
        .map(|v| points[v].as_slice())
        .collect()
}

fn build_cocycle(dp: &DeletedProduct, points: &[Vec<i64>]) -> Result<HashMap<(u32, u32), bool>> {
    // Pair evaluations are independent; the keyed collect is
    // order-insensitive, so parallel and serial runs agree.
    let entries: Result<Vec<((u32, u32), bool)>> = dp
        .cells
        .par_iter()
        .filter(|&&(a, b)| a < b)
        .map(|&(a, b)| {
            let parity =
                intersection_parity(&face_points(dp, points, a), &face_points(dp, points, b))?;
            Ok(((a, b), parity))
        })
        .collect();
    Ok(entries?.into_iter().collect())
}

/// Samples integer vertex coordinates until every disjoint face pair is
/// transversal; the verified parities are kept on the drawing.
pub fn random_generic_drawing(
    dp: &DeletedProduct,
    seed: u64,
    config: &DrawingConfig,
) -> Result<Drawing> {
    let k = dp.complex.k();
    let dim = 2 * k;
    let nv = dp.complex.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..config.max_retries {
        let points: Vec<Vec<i64>> = (0..nv)
            .map(|_| {
                (0..dim)
                    .map(|_| rng.gen_range(-config.box_radius..=config.box_radius))
                    .collect()
            })
            .collect();
        match build_cocycle(dp, &points) {
            Ok(cocycle) => {
                return Ok(Drawing {
                    k,
                    points,
                    seed,
                    cocycle,
                })
            }
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted(config.max_retries))
}

/// Wraps hand-made coordinates, running the same genericity validation.
pub fn drawing_from_points(dp: &DeletedProduct, points: Vec<Vec<i64>>, seed: u64) -> Result<Drawing> {
    let k = dp.complex.k();
    if points.len() != dp.complex.vertex_count() {
        return Err(Error::Shape(format!(
            "{} points for {} vertices",
            points.len(),
            dp.complex.vertex_count()
        )));
    }
    if points.iter().any(|p| p.len() != 2 * k) {
        return Err(Error::Shape(format!("points must have dimension {}", 2 * k)));
    }
    let cocycle = build_cocycle(dp, &points)?;
    Ok(Drawing {
        k,
        points,
        seed,
        cocycle,
    })
}

/// Parity sum of the intersection cocycle over the unordered pairs of a
/// symmetric cycle.
pub fn van_kampen_number(dp: &DeletedProduct, c: &SymCycle, d: &Drawing) -> Result<bool> {
    if !dp.is_symmetric_cycle(c) {
        return Err(Error::Invalid(
            "van Kampen numbers are defined for symmetric cycles".into(),
        ));
    }
    let mut total = false;
    for cell in c.bits.iter_ones() {
        let (a, b) = dp.cells[cell];
        if a < b {
            let parity = d
                .cocycle
                .get(&(a, b))
                .ok_or_else(|| Error::Internal("missing cocycle entry".into()))?;
            total ^= parity;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{Graph, JoinComplex, Octahedron};
    use crate::delprod::{
        deleted_product, economic_deleted_product, symmetrized_torus, triple_deleted_product,
        Complex1,
    };

    #[test]
    fn segment_parities() {
        // Crossing diagonals.
        let s1 = [[0i64, 0], [2, 2]];
        let s2 = [[0i64, 2], [2, 0]];
        let p = intersection_parity(
            &s1.iter().map(|p| p.as_slice()).collect::<Vec<_>>(),
            &s2.iter().map(|p| p.as_slice()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(p);

        // Parallel disjoint segments: empty intersection of hulls is fine.
        let s1 = [[0i64, 0], [1, 0]];
        let s2 = [[0i64, 1], [1, 1]];
        let p = intersection_parity(
            &s1.iter().map(|p| p.as_slice()).collect::<Vec<_>>(),
            &s2.iter().map(|p| p.as_slice()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(!p);

        // Endpoint on the other segment: degenerate.
        let s1 = [[0i64, 0], [2, 0]];
        let s2 = [[1i64, 0], [1, 5]];
        assert!(intersection_parity(
            &s1.iter().map(|p| p.as_slice()).collect::<Vec<_>>(),
            &s2.iter().map(|p| p.as_slice()).collect::<Vec<_>>(),
        )
        .is_err());
    }

    #[test]
    fn triangle_pair_in_r4() {
        // First triangle spans the first two coordinates, the second is
        // pinned at (1,1) there and spans the last two; they meet once,
        // interior to both.
        let sigma = [[0i64, 0, 0, 0], [4, 0, 0, 0], [0, 4, 0, 0]];
        let tau = [[1i64, 1, 3, 0], [1, 1, -3, 3], [1, 1, -3, -3]];
        let p = intersection_parity(
            &sigma.iter().map(|p| p.as_slice()).collect::<Vec<_>>(),
            &tau.iter().map(|p| p.as_slice()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(p);
        // Moving the second triangle far away kills the intersection.
        let tau_far = [[9i64, 9, 3, 0], [9, 9, -3, 3], [9, 9, -3, -3]];
        let p = intersection_parity(
            &sigma.iter().map(|p| p.as_slice()).collect::<Vec<_>>(),
            &tau_far.iter().map(|p| p.as_slice()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(!p);
    }

    #[test]
    fn drawing_reproducible_and_degenerates_rejected() {
        let j = JoinComplex::new(vec![3, 3]).unwrap();
        let dp = deleted_product(Complex1::Join(j));
        let d1 = random_generic_drawing(&dp, 42, &DrawingConfig::default()).unwrap();
        let d2 = random_generic_drawing(&dp, 42, &DrawingConfig::default()).unwrap();
        assert_eq!(d1.points, d2.points);
        assert_eq!(d1.cocycle, d2.cocycle);

        // All six vertices collinear: rejected.
        let bad: Vec<Vec<i64>> = (0..6).map(|i| vec![i as i64, 0]).collect();
        assert!(drawing_from_points(&dp, bad, 0).is_err());
    }

    #[test]
    fn planar_k4_has_zero_cocycle() {
        let g = Graph::complete(4);
        let dp = deleted_product(Complex1::Graph(g));
        // A straight-line planar embedding of K4.
        let points = vec![vec![0, 0], vec![10, 0], vec![5, 8], vec![5, 3]];
        let d = drawing_from_points(&dp, points, 0).unwrap();
        assert!(d.cocycle().values().all(|&p| !p));
    }

    #[test]
    fn kuratowski_anchor_values_k1() {
        // v = 1 on the full deleted product of K_{3,3}.
        let j = JoinComplex::new(vec![3, 3]).unwrap();
        let dp = deleted_product(Complex1::Join(j.clone()));
        let x = &j.triple_subcomplexes()[0];
        let c = triple_deleted_product(&dp, x).unwrap();
        for seed in 0..5 {
            let d = random_generic_drawing(&dp, seed, &DrawingConfig::default()).unwrap();
            assert!(van_kampen_number(&dp, &c, &d).unwrap());
        }

        // v = 1 on the economic deleted product of K5.
        let (dp5, econ) = economic_deleted_product(&Graph::complete(5)).unwrap();
        for seed in 0..5 {
            let d = random_generic_drawing(&dp5, seed, &DrawingConfig::default()).unwrap();
            assert!(van_kampen_number(&dp5, &econ, &d).unwrap());
        }
    }

    #[test]
    fn anchor_value_k2() {
        let j = JoinComplex::new(vec![3, 3, 3]).unwrap();
        let dp = deleted_product(Complex1::Join(j.clone()));
        let x = &j.triple_subcomplexes()[0];
        let c = triple_deleted_product(&dp, x).unwrap();
        for seed in 0..3 {
            let d = random_generic_drawing(&dp, seed, &DrawingConfig::default()).unwrap();
            assert!(van_kampen_number(&dp, &c, &d).unwrap());
        }
    }

    #[test]
    fn parity_lemma_tori_vanish() {
        let j = JoinComplex::new(vec![4, 4]).unwrap();
        let dp = deleted_product(Complex1::Join(j));
        let p = Octahedron::new(vec![(0, 1), (0, 1)]);
        let q = Octahedron::new(vec![(2, 3), (2, 3)]);
        let torus = symmetrized_torus(&dp, &p, &q).unwrap();
        for seed in 0..5 {
            let d = random_generic_drawing(&dp, seed, &DrawingConfig::default()).unwrap();
            assert!(!van_kampen_number(&dp, &torus, &d).unwrap());
        }
    }
}
