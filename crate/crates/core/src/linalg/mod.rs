//! Matrices over a ring backend and the linear algebra built on them.
//!
//! A matrix acts on column vectors from the left. On the graded backend a
//! matrix may carry a [`Grading`]: shift vectors for its target (rows) and
//! source (columns) such that every nonzero entry `(i, j)` is homogeneous of
//! degree `cols[j] - rows[i]`. All per-degree computations read their shifts
//! from there.

mod slice;
mod solve;

pub(crate) use slice::{Key, Space};
pub use solve::{
    check_exact_at, check_exact_relative, kernel_gens, relative_homology_lengths, solve_right,
    ExactnessCertificate, Scope, SliceCount,
};
pub(crate) use solve::{
    a_span_howell, choose_scope, flatten, grade_chain, kernel_basis, minimal_extension,
};

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Element, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    pub rows: Vec<i32>,
    pub cols: Vec<i32>,
}

impl Grading {
    pub fn transpose(&self) -> Grading {
        Grading {
            rows: self.cols.iter().map(|c| -c).collect(),
            cols: self.rows.iter().map(|r| -r).collect(),
        }
    }

    pub fn shifted(&self, by: i32) -> Grading {
        Grading {
            rows: self.rows.iter().map(|r| r + by).collect(),
            cols: self.cols.iter().map(|c| c + by).collect(),
        }
    }
}

#[derive(Clone)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Element>,
    grading: Option<Grading>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for Matrix {}

/// Degree of a nonzero vector of `A^n` with generator shifts `shifts`, if it
/// is homogeneous.
pub fn vector_degree(v: &[Element], shifts: &[i32]) -> Option<i32> {
    let mut deg = None;
    for (e, s) in v.iter().zip(shifts) {
        if e.is_zero() {
            continue;
        }
        let d = e.homogeneous_degree()? as i32 + s;
        if deg.is_some_and(|prev| prev != d) {
            return None;
        }
        deg = Some(d);
    }
    deg
}

impl Matrix {
    pub fn new(ring: &Ring, rows: usize, cols: usize, entries: Vec<Element>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Ok(Matrix { ring: ring.clone(), rows, cols, entries, grading: None })
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Element>>) -> Result<Matrix> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let nrows = rows.len();
        Matrix::new(ring, nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn parse<S: AsRef<str>>(ring: &Ring, rows: &[Vec<S>]) -> Result<Matrix> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| ring.parse(s.as_ref())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(ring, parsed)
    }

    /// Parse a matrix literal such as `[[x, z], [0, y]]`.
    pub fn parse_literal(ring: &Ring, text: &str) -> Result<Matrix> {
        let rows: Vec<Vec<String>> = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or(Error::Parse { offset: 0, message: "expected `[[...], ...]`".into() })?
            .split(']')
            .map(|chunk| chunk.trim_start_matches([',', ' ']).trim())
            .filter(|chunk| !chunk.is_empty())
            .map(|chunk| {
                chunk
                    .strip_prefix('[')
                    .unwrap_or(chunk)
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .collect()
            })
            .collect();
        Matrix::parse(ring, &rows)
    }

    pub fn from_fn(ring: &Ring, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Element) -> Matrix {
        let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Matrix { ring: ring.clone(), rows, cols, entries, grading: None }
    }

    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(ring, rows, cols, |_, _| ring.zero())
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::from_fn(ring, n, n, |i, j| if i == j { ring.one() } else { ring.zero() });
        m.grading = Some(Grading { rows: vec![0; n], cols: vec![0; n] });
        m
    }

    pub fn diag(ring: &Ring, d: &[Element]) -> Matrix {
        Matrix::from_fn(ring, d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { ring.zero() })
    }

    /// A single column.
    pub fn column(ring: &Ring, v: &[Element]) -> Matrix {
        Matrix::from_fn(ring, v.len(), 1, |i, _| v[i].clone())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Element) {
        self.entries[i * self.cols + j] = e;
        self.grading = None;
    }

    pub fn col(&self, j: usize) -> Vec<Element> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn cols_vec(&self) -> Vec<Vec<Element>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(ring: &Ring, rows: usize, cols: &[Vec<Element>]) -> Matrix {
        Matrix::from_fn(ring, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Element::is_zero)
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    /// Attach a grading after checking every entry against it.
    pub fn with_grading(mut self, g: Grading) -> Result<Matrix> {
        if g.rows.len() != self.rows || g.cols.len() != self.cols {
            return Err(Error::DimensionMismatch("shift vector length".into()));
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let want = g.cols[j] - g.rows[i];
                if e.homogeneous_degree().map(|d| d as i32) != Some(want) {
                    return Err(Error::NonHomogeneous(format!(
                        "entry ({i},{j}) = {e} against shift {want}"
                    )));
                }
            }
        }
        self.grading = Some(g);
        Ok(self)
    }

    pub fn without_grading(mut self) -> Matrix {
        self.grading = None;
        self
    }

    /// Keep the row shifts and derive the column shifts, when possible.
    pub fn graded_from_rows(self, rows: &[i32]) -> Result<Matrix> {
        let mut cols = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let deg = vector_degree(&self.col(j), rows);
            let col_zero = (0..self.rows).all(|i| self.get(i, j).is_zero());
            match deg {
                Some(d) => cols.push(d),
                None if col_zero => cols.push(rows.iter().copied().max().unwrap_or(0)),
                None => return Err(Error::NonHomogeneous(format!("column {j}"))),
            }
        }
        self.with_grading(Grading { rows: rows.to_vec(), cols })
    }

    /// Find shifts making the matrix homogeneous; each connected block of
    /// nonzero entries is anchored so that its first row has shift 0.
    pub fn infer_grading(&self) -> Option<Grading> {
        if !self.ring.is_graded() {
            return None;
        }
        infer_chain(&[self]).map(|mut s| {
            let cols = s.pop().unwrap();
            let rows = s.pop().unwrap();
            Grading { rows, cols }
        })
    }

    /// Attach the inferred grading if there is one.
    pub fn graded(mut self) -> Matrix {
        if self.grading.is_none() {
            self.grading = self.infer_grading();
        }
        self
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone());
        t.grading = self.grading.as_ref().map(Grading::transpose);
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.ring != rhs.ring {
            return Err(Error::RingMismatch);
        }
        let mut out = Matrix::zero(&self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        if let (Some(g), Some(h)) = (&self.grading, &rhs.grading) {
            // composable up to a constant offset
            let offs: Vec<i32> = g.cols.iter().zip(&h.rows).map(|(c, r)| c - r).collect();
            if offs.windows(2).all(|w| w[0] == w[1]) {
                let off = offs.first().copied().unwrap_or(0);
                let cols = h.cols.iter().map(|c| c + off).collect();
                out.grading = Some(Grading { rows: g.rows.clone(), cols });
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(&Element, &Element) -> Element) -> Result<Matrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.ring != rhs.ring {
            return Err(Error::RingMismatch);
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(a, b)).collect();
        let grading = match (&self.grading, &rhs.grading) {
            (Some(g), Some(h)) if g == h => Some(g.clone()),
            _ => None,
        };
        Ok(Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries, grading })
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn neg(&self) -> Matrix {
        let mut m = Matrix::from_fn(&self.ring, self.rows, self.cols, |i, j| -self.get(i, j));
        m.grading = self.grading.clone();
        m
    }

    pub fn scale(&self, c: &Element) -> Matrix {
        Matrix::from_fn(&self.ring, self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn apply(&self, v: &[Element]) -> Result<Vec<Element>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .fold(self.ring.zero(), |acc, (j, x)| &acc + &(self.get(i, j) * x))
            })
            .collect())
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch("hstack row counts".into()));
        }
        let cols = self.cols + rhs.cols;
        let mut m = Matrix::from_fn(&self.ring, self.rows, cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        });
        if let (Some(g), Some(h)) = (&self.grading, &rhs.grading) {
            if g.rows == h.rows {
                m.grading = Some(Grading {
                    rows: g.rows.clone(),
                    cols: g.cols.iter().chain(&h.cols).copied().collect(),
                });
            }
        }
        Ok(m)
    }

    pub fn block_diag(&self, rhs: &Matrix) -> Matrix {
        let (r, c) = (self.rows + rhs.rows, self.cols + rhs.cols);
        let mut m = Matrix::from_fn(&self.ring, r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                rhs.get(i - self.rows, j - self.cols).clone()
            } else {
                self.ring.zero()
            }
        });
        if let (Some(g), Some(h)) = (&self.grading, &rhs.grading) {
            m.grading = Some(Grading {
                rows: g.rows.iter().chain(&h.rows).copied().collect(),
                cols: g.cols.iter().chain(&h.cols).copied().collect(),
            });
        }
        m
    }

    /// Entries reduced to the residue field (constant coefficients mod `p`).
    pub fn residue(&self) -> Vec<Vec<u64>> {
        let p = self.ring.residue_char();
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).constant_coeff() % p).collect())
            .collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Breadth-first search for shifts on a chain of composable matrices
/// `mats[0]: F_1 -> F_0`, `mats[1]: F_2 -> F_1`, ... Returns one shift vector
/// per free module `F_0, F_1, ...`, or `None` if some entry is inhomogeneous
/// or the degree constraints conflict.
pub(crate) fn infer_chain(mats: &[&Matrix]) -> Option<Vec<Vec<i32>>> {
    let sizes: Vec<usize> = std::iter::once(mats.first().map_or(0, |m| m.rows))
        .chain(mats.iter().map(|m| m.cols))
        .collect();
    for (k, m) in mats.iter().enumerate() {
        if m.rows != sizes[k] {
            return None;
        }
    }
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let total: usize = sizes.iter().sum();
    // edges: (node_a, node_b, deg) meaning shift(b) - shift(a) = deg
    let mut adj: Vec<Vec<(usize, i32)>> = vec![Vec::new(); total];
    for (k, m) in mats.iter().enumerate() {
        for i in 0..m.rows {
            for j in 0..m.cols {
                let e = m.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let d = e.homogeneous_degree()? as i32;
                let (a, b) = (offsets[k] + i, offsets[k + 1] + j);
                adj[a].push((b, d));
                adj[b].push((a, -d));
            }
        }
    }
    let mut shift: Vec<Option<i32>> = vec![None; total];
    for start in 0..total {
        if shift[start].is_some() {
            continue;
        }
        shift[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            let sa = shift[a].unwrap();
            for &(b, d) in &adj[a] {
                match shift[b] {
                    None => {
                        shift[b] = Some(sa + d);
                        queue.push_back(b);
                    }
                    Some(sb) if sb != sa + d => return None,
                    _ => {}
                }
            }
        }
    }
    Some(
        sizes
            .iter()
            .zip(&offsets)
            .map(|(&s, &o)| (o..o + s).map(|n| shift[n].unwrap()).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Ring {
        Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap()
    }

    #[test]
    fn gamma_eta_compose_to_zero() {
        let r = a();
        let g = Matrix::parse_literal(&r, "[[x, z], [0, y]]").unwrap();
        let e = Matrix::parse_literal(&r, "[[y, -z], [0, x]]").unwrap();
        assert!(g.mul(&e).unwrap().is_zero());
        assert!(e.mul(&g).unwrap().is_zero());
        let sq = g.mul(&g).unwrap();
        assert_eq!(sq, Matrix::parse_literal(&r, "[[x^2, x*z + y*z], [0, y^2]]").unwrap());
    }

    #[test]
    fn transpose_and_identity() {
        let r = a();
        let g = Matrix::parse_literal(&r, "[[x, z^2], [0, y]]").unwrap();
        assert_eq!(g.transpose(), Matrix::parse_literal(&r, "[[x, 0], [z^2, y]]").unwrap());
        assert_eq!(Matrix::identity(&r, 2).mul(&g).unwrap(), g);
    }

    #[test]
    fn inferred_grading_respects_heterogeneous_shifts() {
        let r = a();
        let g = Matrix::parse_literal(&r, "[[x, z^3], [0, y]]").unwrap();
        let gr = g.infer_grading().unwrap();
        assert_eq!(gr, Grading { rows: vec![0, 2], cols: vec![1, 3] });
        let t = g.graded().transpose();
        assert!(t.clone().with_grading(t.grading().unwrap().clone()).is_ok());
        let bad = Matrix::parse_literal(&r, "[[x, z + z^2]]").unwrap();
        assert!(bad.infer_grading().is_none());
    }

    #[test]
    fn dimension_errors() {
        let r = a();
        let m = Matrix::zero(&r, 2, 3);
        assert!(matches!(m.mul(&m), Err(Error::DimensionMismatch(_))));
    }
}
