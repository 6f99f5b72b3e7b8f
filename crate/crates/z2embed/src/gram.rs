//! Gram realizability over GF(2): decide and construct `Y` with
//! `Y^T Ω Y = A` for `Ω` the identity or the hyperbolic form.
//!
//! The decision rule is classical symmetric form theory, guarded by an
//! exhaustive small-size oracle in the tests: the hyperbolic target realizes
//! exactly the alternating matrices of rank at most beta, and the identity
//! target realizes non-alternating matrices up to rank beta plus alternating
//! ones needing one spare dimension.

use serde::{Deserialize, Serialize};

use crate::gf2::{FormType, Gf2Matrix, Gf2Vector};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OmegaKind {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "H")]
    H,
}

impl std::fmt::Display for OmegaKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OmegaKind::I => write!(f, "I"),
            OmegaKind::H => write!(f, "H"),
        }
    }
}

/// Target intersection form: `I_beta` or `H_{beta/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaSpec {
    pub kind: OmegaKind,
    pub beta: usize,
}

impl OmegaSpec {
    pub fn new(kind: OmegaKind, beta: usize) -> Result<Self> {
        if kind == OmegaKind::H && !beta.is_multiple_of(2) {
            return Err(Error::Invalid(format!(
                "hyperbolic form needs even beta, got {beta}"
            )));
        }
        Ok(OmegaSpec { kind, beta })
    }

    pub fn matrix(&self) -> Gf2Matrix {
        match self.kind {
            OmegaKind::I => Gf2Matrix::identity(self.beta),
            OmegaKind::H => Gf2Matrix::hyperbolic(self.beta / 2),
        }
    }
}

/// Whether some `Y` with `Y^T Ω Y = A` exists.
pub fn realizable(a: &Gf2Matrix, spec: &OmegaSpec) -> Result<bool> {
    let ft = a.form_type()?;
    let rank = a.rank();
    Ok(match spec.kind {
        OmegaKind::H => ft == FormType::Alternating && rank <= spec.beta,
        OmegaKind::I => match ft {
            FormType::NonAlternating => rank <= spec.beta,
            FormType::Alternating => a.is_zero() || rank < spec.beta,
        },
    })
}

/// Constructs `Y` with `Y^T Ω Y = A`, deterministically. The congruence
/// normal form of `A` is realized block by block inside the target: in the
/// identity target a hyperbolic block consumes two basis vectors and leaves
/// the merged third as the new orthonormal head, so alternating blocks fit
/// exactly when one spare dimension remains.
pub fn construct_y(a: &Gf2Matrix, spec: &OmegaSpec) -> Result<Gf2Matrix> {
    if !realizable(a, spec)? {
        return Err(Error::NotRealizable);
    }
    let m = a.rows();
    let (s, form) = a.congruence_normal_form()?;
    let beta = spec.beta;
    // Column vectors of W realize I_ones ⊕ H_pairs ⊕ 0 inside (beta, Ω).
    let mut w = Gf2Matrix::zeros(beta, m);
    match spec.kind {
        OmegaKind::H => {
            debug_assert_eq!(form.ones, 0);
            for b in 0..form.hyperbolic_pairs {
                w.set(2 * b, form.ones + 2 * b, true);
                w.set(2 * b + 1, form.ones + 2 * b + 1, true);
            }
        }
        OmegaKind::I => {
            // Running orthonormal basis of the unused part of the target.
            let mut basis: Vec<Gf2Vector> = (0..beta)
                .map(|i| Gf2Vector::from_indices(beta, &[i]))
                .collect();
            let mut cols: Vec<(usize, Gf2Vector)> = Vec::new();
            for b in 0..form.hyperbolic_pairs {
                if basis.len() < 3 {
                    return Err(Error::Internal(
                        "insufficient room for a hyperbolic block".into(),
                    ));
                }
                let mut u = basis[0].clone();
                u.xor_assign(&basis[1]);
                let mut v = basis[0].clone();
                v.xor_assign(&basis[2]);
                let mut merged = basis[0].clone();
                merged.xor_assign(&basis[1]);
                merged.xor_assign(&basis[2]);
                cols.push((form.ones + 2 * b, u));
                cols.push((form.ones + 2 * b + 1, v));
                basis.splice(0..3, [merged]);
            }
            for i in 0..form.ones {
                let head = basis.remove(0);
                cols.push((i, head));
            }
            for (c, v) in cols {
                for r in v.iter_ones() {
                    w.set(r, c, true);
                }
            }
        }
    }
    let s_inv = s
        .inverse()
        .ok_or_else(|| Error::Internal("congruence transform not invertible".into()))?;
    let y = w.mul(&s_inv);
    // Postcondition, always enforced.
    let omega = spec.matrix();
    let check = y.transpose().mul(&omega).mul(&y);
    if check != *a {
        return Err(Error::Internal("Gram construction failed verification".into()));
    }
    Ok(y)
}

/// Smallest beta admitting a realization, by direct search upward.
pub fn min_beta(a: &Gf2Matrix, kind: OmegaKind) -> Result<usize> {
    let ft = a.form_type()?;
    if kind == OmegaKind::H && ft == FormType::NonAlternating {
        return Err(Error::Invalid(
            "non-alternating matrices are never hyperbolic Gram matrices".into(),
        ));
    }
    let step = match kind {
        OmegaKind::I => 1,
        OmegaKind::H => 2,
    };
    let mut beta = 0;
    loop {
        let spec = OmegaSpec::new(kind, beta)?;
        if realizable(a, &spec)? {
            return Ok(beta);
        }
        beta += step;
        if beta > 2 * a.rows() + 2 {
            return Err(Error::Internal("minimal beta search ran away".into()));
        }
    }
}
