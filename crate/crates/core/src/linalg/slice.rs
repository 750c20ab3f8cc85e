//! Flattening free modules to coordinate spaces over `Z/p^k`.

use std::collections::HashMap;

use super::Matrix;
use crate::ring::{Element, Monomial, Ring};

/// Which part of a free module a coordinate space covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Key {
    /// The whole finite carrier.
    Whole,
    /// The homogeneous slice of the given degree.
    Degree(i32),
    /// Everything modulo the `(D+1)`-st power of the maximal ideal.
    Trunc(u32),
}

/// Basis of a slice of `A^rank`: pairs (component, standard monomial).
pub(crate) struct Space {
    pub rank: usize,
    pub basis: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl Space {
    pub fn new(ring: &Ring, shifts: &[i32], key: Key) -> Space {
        let mut basis = Vec::new();
        for (i, &s) in shifts.iter().enumerate() {
            match key {
                Key::Whole => {
                    let carrier = ring.carrier_basis().expect("finite backend");
                    basis.extend(carrier.iter().map(|m| (i, m.clone())));
                }
                Key::Degree(d) => {
                    if d - s >= 0 {
                        let mons = ring.standard_monomials((d - s) as u32);
                        basis.extend(mons.iter().map(|m| (i, m.clone())));
                    }
                }
                Key::Trunc(top) => {
                    for e in 0..=top {
                        basis.extend(ring.standard_monomials(e).iter().map(|m| (i, m.clone())));
                    }
                }
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(n, b)| (b, n)).collect();
        Space { rank: shifts.len(), basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the projection of `v` onto this slice.
    pub fn coords(&self, v: &[Element]) -> Vec<u64> {
        let mut out = vec![0u64; self.basis.len()];
        for (i, e) in v.iter().enumerate() {
            for (m, c) in e.terms() {
                if let Some(&n) = self.index.get(&(i, m.clone())) {
                    out[n] = *c;
                }
            }
        }
        out
    }

    pub fn vector(&self, ring: &Ring, c: &[u64]) -> Vec<Element> {
        let mut parts: Vec<Vec<(Monomial, u64)>> = vec![Vec::new(); self.rank];
        for ((i, m), &x) in self.basis.iter().zip(c) {
            if x != 0 {
                parts[*i].push((m.clone(), x));
            }
        }
        parts.into_iter().map(|t| ring.from_terms(t)).collect()
    }
}

/// Images of the basis of `src` under `m`, in the coordinates of `dst`.
pub(crate) fn columns(m: &Matrix, src: &Space, dst: &Space) -> Vec<Vec<u64>> {
    src.basis
        .iter()
        .map(|(j, mono)| {
            let img: Vec<Element> = (0..m.nrows()).map(|i| m.get(i, *j).mul_monomial(mono)).collect();
            dst.coords(&img)
        })
        .collect()
}
