//! Dense bit-packed linear algebra over GF(2).
//!
//! Vectors and matrices store 64 entries per machine word; addition is XOR
//! and there is no floating point anywhere. Elimination always pivots on the
//! lowest-index nonzero column, so ranks, kernels, particular solutions and
//! congruence transforms are bit-for-bit reproducible.

use std::fmt;

use crate::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Gf2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `'0'`/`'1'` characters.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(Error::Parse(format!("unexpected character {c:?} in bit row"))),
            }
        }
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the AND with `other` (the standard GF(2) dot product).
    pub fn dot(&self, other: &Gf2Vector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({})", self.to_bit_string())
    }
}

/// Row-major bit-packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

/// Congruence class of a symmetric matrix: `ones` unit blocks, then
/// `hyperbolic_pairs` copies of the 2x2 off-diagonal block, then zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CongruenceForm {
    pub ones: usize,
    pub hyperbolic_pairs: usize,
    pub zeros: usize,
}

impl CongruenceForm {
    pub fn matrix(&self) -> Gf2Matrix {
        let n = self.ones + 2 * self.hyperbolic_pairs + self.zeros;
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..self.ones {
            m.set(i, i, true);
        }
        for p in 0..self.hyperbolic_pairs {
            let i = self.ones + 2 * p;
            m.set(i, i + 1, true);
            m.set(i + 1, i, true);
        }
        m
    }
}

/// Whether a symmetric bilinear form vanishes on the diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FormType {
    Alternating,
    NonAlternating,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = words_for(cols).max(1);
        Gf2Matrix {
            rows,
            cols,
            wpr,
            data: vec![0; rows * wpr],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// The standard hyperbolic matrix of size `2n`: off-diagonal unit
    /// blocks on the diagonal, zero elsewhere.
    pub fn hyperbolic(n: usize) -> Self {
        CongruenceForm {
            ones: 0,
            hyperbolic_pairs: n,
            zeros: 0,
        }
        .matrix()
    }

    pub fn from_rows(rows: &[Gf2Vector]) -> Self {
        let cols = rows.first().map_or(0, Gf2Vector::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols, "ragged rows");
            m.set_row(r, v);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.wpr + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let mask = 1u64 << (c % WORD_BITS);
        let w = &mut self.data[r * self.wpr + c / WORD_BITS];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.wpr + c / WORD_BITS] ^= 1u64 << (c % WORD_BITS);
    }

    pub fn row(&self, r: usize) -> Gf2Vector {
        Gf2Vector {
            len: self.cols,
            words: self.data[r * self.wpr..(r + 1) * self.wpr].to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, v: &Gf2Vector) {
        assert_eq!(v.len(), self.cols);
        self.data[r * self.wpr..(r + 1) * self.wpr].copy_from_slice(v.words());
    }

    pub fn column(&self, c: usize) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.wpr {
            self.data.swap(a * self.wpr + w, b * self.wpr + w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            let base = r * self.wpr;
            for w in 0..self.wpr {
                let mut word = self.data[base + w];
                while word != 0 {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    t.set(w * WORD_BITS + b, r, true);
                }
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let base = r * self.wpr;
            let obase = r * out.wpr;
            for w in 0..self.wpr {
                let mut word = self.data[base + w];
                while word != 0 {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    let k = w * WORD_BITS + b;
                    let kbase = k * other.wpr;
                    for ow in 0..other.wpr {
                        out.data[obase + ow] ^= other.data[kbase + ow];
                    }
                }
            }
        }
        out
    }

    /// `M x` for a column vector `x` of length `cols`.
    pub fn mul_vec(&self, x: &Gf2Vector) -> Gf2Vector {
        assert_eq!(self.cols, x.len(), "dimension mismatch in mul_vec");
        let mut out = Gf2Vector::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            let base = r * self.wpr;
            for (w, xw) in x.words().iter().enumerate() {
                acc ^= self.data[base + w] & xw;
            }
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// `x^T M` for a vector `x` of length `rows`.
    pub fn vec_mul(&self, x: &Gf2Vector) -> Gf2Vector {
        assert_eq!(self.rows, x.len(), "dimension mismatch in vec_mul");
        let mut out = Gf2Vector::zeros(self.cols);
        for r in x.iter_ones() {
            let base = r * self.wpr;
            for w in 0..self.wpr {
                out.words[w] ^= self.data[base + w];
            }
        }
        out
    }

    /// Rank via row echelon form on a working copy.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for c in 0..work.cols {
            let Some(pivot) = (rank..work.rows).find(|&r| work.get(r, c)) else {
                continue;
            };
            work.swap_rows(rank, pivot);
            let (done, rest) = work.data.split_at_mut((rank + 1) * work.wpr);
            let prow = &done[rank * work.wpr..];
            let (wi, mask) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
            for chunk in rest.chunks_exact_mut(work.wpr) {
                if chunk[wi] & mask != 0 {
                    for (x, y) in chunk.iter_mut().zip(prow) {
                        *x ^= *y;
                    }
                }
            }
            rank += 1;
            if rank == work.rows {
                break;
            }
        }
        rank
    }

    /// Nullity of the column space (`cols - rank`).
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    let (ti, si) = (i * self.wpr, r * self.wpr);
                    for w in 0..self.wpr {
                        let v = self.data[si + w];
                        self.data[ti + w] ^= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    /// Basis of the kernel `{x : Mx = 0}`, ordered by free column index.
    pub fn kernel_basis(&self) -> Vec<Gf2Vector> {
        let mut work = self.clone();
        let pivots = work.reduce();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = Gf2Vector::zeros(self.cols);
            v.set(f, true);
            for (r, &c) in pivots.iter().enumerate() {
                if work.get(r, f) {
                    v.set(c, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `M x = b`. Returns `None` if inconsistent; otherwise a
    /// particular solution (free variables zero) and a kernel basis.
    pub fn solve_affine(&self, b: &Gf2Vector) -> Result<Option<(Gf2Vector, Vec<Gf2Vector>)>> {
        if b.len() != self.rows {
            return Err(Error::Shape(format!(
                "solve_affine: rhs length {} != matrix rows {}",
                b.len(),
                self.rows
            )));
        }
        // Augment with b as an extra column.
        let mut work = Gf2Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for w in 0..self.wpr {
                work.data[r * work.wpr + w] = self.data[r * self.wpr + w];
            }
            if b.get(r) {
                work.set(r, self.cols, true);
            }
        }
        let mut pivots = Vec::new();
        let mut rr = 0;
        for c in 0..self.cols {
            let Some(p) = (rr..self.rows).find(|&i| work.get(i, c)) else {
                continue;
            };
            work.swap_rows(rr, p);
            for i in 0..self.rows {
                if i != rr && work.get(i, c) {
                    let (ti, si) = (i * work.wpr, rr * work.wpr);
                    for w in 0..work.wpr {
                        let v = work.data[si + w];
                        work.data[ti + w] ^= v;
                    }
                }
            }
            pivots.push(c);
            rr += 1;
            if rr == self.rows {
                break;
            }
        }
        for r in pivots.len()..self.rows {
            if work.get(r, self.cols) {
                return Ok(None);
            }
        }
        let mut particular = Gf2Vector::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            if work.get(r, self.cols) {
                particular.set(c, true);
            }
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut kernel = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = Gf2Vector::zeros(self.cols);
            v.set(f, true);
            for (r, &c) in pivots.iter().enumerate() {
                if work.get(r, f) {
                    v.set(c, true);
                }
            }
            kernel.push(v);
        }
        Ok(Some((particular, kernel)))
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Gf2Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = Gf2Matrix::identity(n);
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..n).find(|&i| work.get(i, c)) else {
                return None;
            };
            work.swap_rows(r, p);
            inv.swap_rows(r, p);
            for i in 0..n {
                if i != r && work.get(i, c) {
                    for w in 0..work.wpr {
                        let v = work.data[r * work.wpr + w];
                        work.data[i * work.wpr + w] ^= v;
                    }
                    for w in 0..inv.wpr {
                        let v = inv.data[r * inv.wpr + w];
                        inv.data[i * inv.wpr + w] ^= v;
                    }
                }
            }
            r += 1;
        }
        (r == n).then_some(inv)
    }

    /// Alternating iff the diagonal vanishes (equivalently `x^T A x = 0`
    /// for all `x`). Rejects non-symmetric input.
    pub fn form_type(&self) -> Result<FormType> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let nonalt = (0..self.rows).any(|i| self.get(i, i));
        Ok(if nonalt {
            FormType::NonAlternating
        } else {
            FormType::Alternating
        })
    }

    /// Symmetric congruence sweep: returns an invertible `S` and the block
    /// descriptor of `S^T A S`. Unit blocks are split off while any diagonal
    /// entry is 1; once the residual is alternating it stays alternating and
    /// the remaining rank is consumed by hyperbolic pairs.
    pub fn congruence_normal_form(&self) -> Result<(Gf2Matrix, CongruenceForm)> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        let mut w = self.clone();
        let mut s = Gf2Matrix::identity(n);

        // Column op col_to += col_from on W (paired with the row op) and on S.
        fn sym_add(w: &mut Gf2Matrix, s: &mut Gf2Matrix, from: usize, to: usize) {
            let n = w.rows();
            for r in 0..n {
                if w.get(r, from) {
                    w.flip(r, to);
                }
            }
            for c in 0..n {
                if w.get(from, c) {
                    w.flip(to, c);
                }
            }
            for r in 0..n {
                if s.get(r, from) {
                    s.flip(r, to);
                }
            }
        }
        fn sym_swap(w: &mut Gf2Matrix, s: &mut Gf2Matrix, a: usize, b: usize) {
            if a == b {
                return;
            }
            let n = w.rows();
            for r in 0..n {
                let (x, y) = (w.get(r, a), w.get(r, b));
                w.set(r, a, y);
                w.set(r, b, x);
            }
            w.swap_rows(a, b);
            for r in 0..n {
                let (x, y) = (s.get(r, a), s.get(r, b));
                s.set(r, a, y);
                s.set(r, b, x);
            }
        }

        let mut p = 0;
        let mut ones = 0;
        let mut pairs = 0;
        while p < n {
            if let Some(i) = (p..n).find(|&i| w.get(i, i)) {
                sym_swap(&mut w, &mut s, p, i);
                for j in p + 1..n {
                    if w.get(p, j) {
                        sym_add(&mut w, &mut s, p, j);
                    }
                }
                ones += 1;
                p += 1;
                continue;
            }
            let mut pivot = None;
            'scan: for i in p..n {
                for j in i + 1..n {
                    if w.get(i, j) {
                        pivot = Some((i, j));
                        break 'scan;
                    }
                }
            }
            let Some((i, j)) = pivot else { break };
            sym_swap(&mut w, &mut s, p, i);
            let j = if j == p { i } else { j };
            sym_swap(&mut w, &mut s, p + 1, j);
            for c in p + 2..n {
                if w.get(p, c) {
                    sym_add(&mut w, &mut s, p + 1, c);
                }
                if w.get(p + 1, c) {
                    sym_add(&mut w, &mut s, p, c);
                }
            }
            pairs += 1;
            p += 2;
        }
        Ok((
            s,
            CongruenceForm {
                ones,
                hyperbolic_pairs: pairs,
                zeros: n - p,
            },
        ))
    }

    /// Text format: first line `rows cols`, then one '0'/'1' string per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            out.push_str(&self.row(r).to_bit_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_text(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let mut it = header.split_whitespace();
        let rows: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad matrix header".into()))?;
        let cols: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad matrix header".into()))?;
        let mut m = Gf2Matrix::zeros(rows, cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("matrix text ends after {r} rows")))?;
            let line = line.trim();
            if line.len() != cols {
                return Err(Error::Parse(format!(
                    "row {r} has {} entries, expected {cols}",
                    line.len()
                )));
            }
            m.set_row(r, &Gf2Vector::parse_bits(line)?);
        }
        Ok(m)
    }

    /// Row-major bit string comparison; used for deterministic tie-breaking.
    pub fn lex_key(&self) -> Vec<u64> {
        self.data.clone()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r).to_bit_string())?;
        }
        Ok(())
    }
}
