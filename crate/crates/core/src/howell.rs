//! Howell normal form over `Z/p^k`.
//!
//! Every linear question the crate asks (kernels, solvability, lengths of
//! images) is eventually flattened into a dense system over `Z/p^k` and
//! answered here. For `k = 1` this is ordinary Gaussian elimination over
//! `F_p`; for `k > 1` the extra saturation rows `p^(k-v) * pivot_row` give
//! the Howell property, so that membership can be decided by a single
//! top-down reduction pass.

/// The coefficient ring `Z/p^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zn {
    pub p: u64,
    pub k: u32,
    pub n: u64,
}

impl Zn {
    pub fn new(p: u64, k: u32) -> Self {
        let n = p.checked_pow(k).expect("modulus overflows u64");
        assert!(n < (1 << 31), "modulus too large");
        Zn { p, k, n }
    }

    #[inline]
    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.n as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.n
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.n - b) % self.n
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.n
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.n - a) % self.n
    }

    /// p-adic valuation of a nonzero residue; `k` for zero.
    pub fn val(&self, mut a: u64) -> u32 {
        a %= self.n;
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.n as i64, (a % self.n) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        (r0 == 1).then(|| self.reduce_i64(t0))
    }

    pub fn pow_p(&self, e: u32) -> u64 {
        self.p.pow(e) % self.n
    }
}

/// Row-reduced generating set of a `Z/p^k`-submodule of `(Z/p^k)^width`
/// with the Howell property.
#[derive(Clone, Debug)]
pub struct Howell {
    pub zn: Zn,
    pub width: usize,
    /// Pivot rows in strictly increasing pivot column order.
    pub rows: Vec<Vec<u64>>,
    /// `(column, valuation)` of each row's pivot; the pivot entry equals `p^valuation`.
    pub pivots: Vec<(usize, u32)>,
}

fn axpy(zn: &Zn, dst: &mut [u64], coef: u64, src: &[u64], from: usize) {
    if coef == 0 {
        return;
    }
    for (d, s) in dst[from..].iter_mut().zip(&src[from..]) {
        if *s != 0 {
            *d = (*d + zn.n - (coef * s) % zn.n) % zn.n;
        }
    }
}

impl Howell {
    /// Howell form of the row span of `rows`.
    pub fn new(zn: Zn, width: usize, rows: Vec<Vec<u64>>) -> Self {
        let mut pending: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|mut r| {
                debug_assert_eq!(r.len(), width);
                r.iter_mut().for_each(|e| *e %= zn.n);
                r
            })
            .filter(|r| r.iter().any(|&e| e != 0))
            .collect();
        let mut out_rows: Vec<Vec<u64>> = Vec::new();
        let mut pivots = Vec::new();

        for c in 0..width {
            if pending.is_empty() {
                break;
            }
            // first row with minimal valuation in column c
            let mut best: Option<(usize, u32)> = None;
            for (i, r) in pending.iter().enumerate() {
                if r[c] != 0 {
                    let v = zn.val(r[c]);
                    if best.is_none_or(|(_, bv)| v < bv) {
                        best = Some((i, v));
                        if v == 0 {
                            break;
                        }
                    }
                }
            }
            let Some((bi, v)) = best else { continue };
            let mut piv = pending.swap_remove(bi);
            let unit = piv[c] / zn.pow_p(v);
            let uinv = zn.inv(unit).expect("unit part must be invertible");
            if uinv != 1 {
                for e in piv[c..].iter_mut() {
                    *e = zn.mul(*e, uinv);
                }
            }
            let pv = zn.pow_p(v);
            for r in pending.iter_mut() {
                if r[c] != 0 {
                    let t = r[c] / pv;
                    axpy(&zn, r, t, &piv, c);
                }
            }
            for r in out_rows.iter_mut() {
                if r[c] >= pv {
                    let t = r[c] / pv;
                    axpy(&zn, r, t, &piv, c);
                }
            }
            if v > 0 {
                let mult = zn.pow_p(zn.k - v);
                let sat: Vec<u64> = piv.iter().map(|&e| zn.mul(e, mult)).collect();
                if sat.iter().any(|&e| e != 0) {
                    pending.push(sat);
                }
            }
            pending.retain(|r| r.iter().any(|&e| e != 0));
            out_rows.push(piv);
            pivots.push((c, v));
        }
        debug_assert!(pending.iter().all(|r| r.iter().all(|&e| e == 0)));
        Howell { zn, width, rows: out_rows, pivots }
    }

    /// Length of the span as a `Z/p^k`-module, i.e. `log_p` of its cardinality.
    pub fn length(&self) -> u32 {
        self.pivots.iter().map(|&(_, v)| self.zn.k - v).sum()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the rows. Returns the coefficients used, or `None`
    /// if `v` is not in the span.
    pub fn decompose(&self, v: &[u64]) -> Option<Vec<u64>> {
        let zn = self.zn;
        let mut cur: Vec<u64> = v.iter().map(|&e| e % zn.n).collect();
        let mut coefs = vec![0u64; self.rows.len()];
        let mut next_pivot = 0;
        for c in 0..self.width {
            if next_pivot < self.pivots.len() && self.pivots[next_pivot].0 == c {
                let (_, val) = self.pivots[next_pivot];
                if cur[c] != 0 {
                    let pv = zn.pow_p(val);
                    if cur[c] % pv != 0 {
                        return None;
                    }
                    let t = cur[c] / pv;
                    axpy(&zn, &mut cur, t, &self.rows[next_pivot], c);
                    coefs[next_pivot] = t;
                }
                next_pivot += 1;
            } else if cur[c] != 0 {
                return None;
            }
        }
        Some(coefs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.decompose(v).is_some()
    }

    /// Number of elements of the span, if it fits in `u128`.
    pub fn cardinality(&self) -> Option<u128> {
        (self.zn.p as u128).checked_pow(self.length())
    }

    /// Every element of the span, each exactly once. `None` when there are
    /// more than `budget`.
    pub fn elements(&self, budget: usize) -> Option<Vec<Vec<u64>>> {
        let card = self.cardinality()?;
        if card > budget as u128 {
            return None;
        }
        let zn = self.zn;
        let orders: Vec<u64> = self.pivots.iter().map(|&(_, v)| zn.p.pow(zn.k - v)).collect();
        let mut out = Vec::with_capacity(card as usize);
        let mut digits = vec![0u64; orders.len()];
        loop {
            let mut v = vec![0u64; self.width];
            for (d, row) in digits.iter().zip(&self.rows) {
                if *d != 0 {
                    for (x, r) in v.iter_mut().zip(row) {
                        *x = zn.add(*x, zn.mul(*d, *r));
                    }
                }
            }
            out.push(v);
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return Some(out);
                }
                digits[i] += 1;
                if digits[i] < orders[i] {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}

/// A linear map `(Z/p^k)^unknowns -> (Z/p^k)^equations`, preprocessed for
/// kernel and preimage queries by Howell-reducing `[M^t | I]`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub equations: usize,
    pub unknowns: usize,
    form: Howell,
    split: usize,
}

impl LinearSystem {
    /// `columns[j]` is the image of the j-th unknown basis vector.
    pub fn from_columns(zn: Zn, equations: usize, columns: &[Vec<u64>]) -> Self {
        let unknowns = columns.len();
        let width = equations + unknowns;
        let rows = columns
            .iter()
            .enumerate()
            .map(|(j, col)| {
                let mut r = vec![0u64; width];
                r[..equations].copy_from_slice(col);
                r[equations + j] = 1;
                r
            })
            .collect();
        let form = Howell::new(zn, width, rows);
        let split = form.pivots.iter().take_while(|(c, _)| *c < equations).count();
        LinearSystem { equations, unknowns, form, split }
    }

    pub fn zn(&self) -> Zn {
        self.form.zn
    }

    /// Howell basis of the kernel.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        self.form.rows[self.split..]
            .iter()
            .map(|r| r[self.equations..].to_vec())
            .collect()
    }

    pub fn kernel_length(&self) -> u32 {
        let k = self.form.zn.k;
        self.form.pivots[self.split..].iter().map(|&(_, v)| k - v).sum()
    }

    pub fn image_length(&self) -> u32 {
        let k = self.form.zn.k;
        self.form.pivots[..self.split].iter().map(|&(_, v)| k - v).sum()
    }

    /// Some `u` with `M u = b`, taking the first solution in elimination order.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let zn = self.form.zn;
        let mut cur = vec![0u64; self.form.width];
        for (d, s) in cur.iter_mut().zip(b) {
            *d = s % zn.n;
        }
        for (row, &(c, val)) in self.form.rows[..self.split]
            .iter()
            .zip(&self.form.pivots[..self.split])
        {
            // columns before c are already cleared
            if cur[..c].iter().any(|&e| e != 0) {
                return None;
            }
            if cur[c] != 0 {
                let pv = zn.pow_p(val);
                if cur[c] % pv != 0 {
                    return None;
                }
                let t = cur[c] / pv;
                axpy(&zn, &mut cur, t, row, c);
            }
        }
        if cur[..self.equations].iter().any(|&e| e != 0) {
            return None;
        }
        Some(cur[self.equations..].iter().map(|&e| zn.neg(e)).collect())
    }

    /// Howell form of the image, as rows of length `equations`.
    pub fn image(&self) -> Howell {
        Howell {
            zn: self.form.zn,
            width: self.equations,
            rows: self.form.rows[..self.split]
                .iter()
                .map(|r| r[..self.equations].to_vec())
                .collect(),
            pivots: self.form.pivots[..self.split].to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(zn: &Zn, cols: &[Vec<u64>], u: &[u64], eqs: usize) -> Vec<u64> {
        let mut out = vec![0; eqs];
        for (col, &uj) in cols.iter().zip(u) {
            for (o, &c) in out.iter_mut().zip(col) {
                *o = zn.add(*o, zn.mul(c, uj));
            }
        }
        out
    }

    #[test]
    fn elements_of_free_and_torsion_spans() {
        let zn = Zn::new(3, 2);
        let free = Howell::new(zn, 2, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(free.elements(100).unwrap().len(), 81);
        let torsion = Howell::new(zn, 2, vec![vec![3, 6]]);
        let els = torsion.elements(100).unwrap();
        assert_eq!(els.len(), 3);
        assert!(els.iter().all(|v| torsion.contains(v)));
    }

    #[test]
    fn diag_three_three_over_z9() {
        let zn = Zn::new(3, 2);
        let sys = LinearSystem::from_columns(zn, 2, &[vec![3, 0], vec![0, 3]]);
        assert_eq!(sys.kernel(), vec![vec![3, 0], vec![0, 3]]);
        assert_eq!(sys.kernel_length(), 2);
        assert_eq!(sys.image_length(), 2);
    }

    #[test]
    fn one_not_in_three() {
        let zn = Zn::new(3, 2);
        let sys = LinearSystem::from_columns(zn, 1, &[vec![3]]);
        assert_eq!(sys.solve(&[1]), None);
        assert_eq!(sys.solve(&[6]), Some(vec![2]));
    }

    #[test]
    fn inverses() {
        let zn = Zn::new(2, 3);
        for a in [1u64, 3, 5, 7] {
            assert_eq!(zn.mul(a, zn.inv(a).unwrap()), 1);
        }
        assert_eq!(zn.inv(2), None);
    }

    /// Exhaustive oracle: every system over Z/9 and Z/8 with two unknowns and
    /// two equations agrees with brute-force solvability and kernel size.
    #[test]
    fn agrees_with_brute_force_on_small_systems() {
        for zn in [Zn::new(3, 2), Zn::new(2, 3)] {
            let n = zn.n;
            let mut seed = 0x2545f491u64;
            for _ in 0..400 {
                let mut next = || {
                    seed ^= seed << 13;
                    seed ^= seed >> 7;
                    seed ^= seed << 17;
                    seed % n
                };
                let cols = vec![vec![next(), next()], vec![next(), next()]];
                let sys = LinearSystem::from_columns(zn, 2, &cols);
                let mut images = std::collections::HashSet::new();
                let mut kernel_size = 0u32;
                for u0 in 0..n {
                    for u1 in 0..n {
                        let img = apply(&zn, &cols, &[u0, u1], 2);
                        if img.iter().all(|&e| e == 0) {
                            kernel_size += 1;
                        }
                        images.insert(img);
                    }
                }
                assert_eq!(zn.p.pow(sys.kernel_length()), kernel_size as u64);
                assert_eq!(zn.p.pow(sys.image_length()), images.len() as u64);
                for b0 in 0..n {
                    for b1 in 0..n {
                        let b = vec![b0, b1];
                        match sys.solve(&b) {
                            Some(u) => assert_eq!(apply(&zn, &cols, &u, 2), b),
                            None => assert!(!images.contains(&b)),
                        }
                    }
                }
                for kv in sys.kernel() {
                    assert!(apply(&zn, &cols, &kv, 2).iter().all(|&e| e == 0));
                }
            }
        }
    }

    #[test]
    fn span_elements_are_the_span() {
        let zn = Zn::new(2, 3);
        let rows = vec![vec![2, 4, 6], vec![0, 4, 2]];
        let h = Howell::new(zn, 3, rows.clone());
        let els = h.elements(1000).unwrap();
        let mut brute = std::collections::BTreeSet::new();
        for c0 in 0..8 {
            for c1 in 0..8 {
                brute.insert(apply(&zn, &rows, &[c0, c1], 3));
            }
        }
        let got: std::collections::BTreeSet<_> = els.iter().cloned().collect();
        assert_eq!(got.len(), els.len());
        assert_eq!(got, brute);
        assert!(h.elements(got.len() - 1).is_none());
    }
}
