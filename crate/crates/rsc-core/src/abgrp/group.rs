//! Finitely presented abelian groups: a generator count plus an integer
//! relation matrix, with a cached Smith form providing canonical element
//! normal forms.

use super::dense::DenseMat;
use super::snf::{smith, Smith, SmithOpts};
use super::Int;
use num_traits::{Signed, Zero};
use std::sync::Arc;

#[derive(Clone)]
pub struct FpAbelianGroup {
    inner: Arc<Inner>,
}

struct Inner {
    gens: usize,
    rels: DenseMat,
    smith: Smith,
    torsion: Vec<Int>,
    free_rank: usize,
}

impl FpAbelianGroup {
    /// `rels` columns are relations among `gens` generators.
    pub fn new(gens: usize, rels: DenseMat) -> Self {
        assert_eq!(rels.rows(), gens, "relation rows must match generators");
        let s = smith(
            &rels,
            SmithOpts {
                u: true,
                uinv: true,
                ..Default::default()
            },
        );
        let torsion = s.torsion();
        let free_rank = gens - s.rank;
        FpAbelianGroup {
            inner: Arc::new(Inner {
                gens,
                rels,
                smith: s,
                torsion,
                free_rank,
            }),
        }
    }

    pub fn free(rank: usize) -> Self {
        FpAbelianGroup::new(rank, DenseMat::zero(rank, 0))
    }

    pub fn trivial() -> Self {
        FpAbelianGroup::free(0)
    }

    /// Cyclic group of order `n` (n = 0 gives Z).
    pub fn cyclic(n: u64) -> Self {
        let mut rels = DenseMat::zero(1, 1);
        rels.set(0, 0, Int::from(n));
        FpAbelianGroup::new(1, rels)
    }

    pub fn gens(&self) -> usize {
        self.inner.gens
    }

    pub fn rels(&self) -> &DenseMat {
        &self.inner.rels
    }

    pub fn free_rank(&self) -> usize {
        self.inner.free_rank
    }

    /// Invariant factors greater than one, in divisibility order.
    pub fn torsion(&self) -> &[Int] {
        &self.inner.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.inner.free_rank == 0 && self.inner.torsion.is_empty()
    }

    /// Group order; None when infinite.
    pub fn order(&self) -> Option<Int> {
        if self.inner.free_rank > 0 {
            None
        } else {
            Some(self.inner.torsion.iter().product())
        }
    }

    /// Same isomorphism type (free rank and invariant factors agree).
    pub fn isomorphic(&self, other: &FpAbelianGroup) -> bool {
        self.inner.free_rank == other.inner.free_rank && self.inner.torsion == other.inner.torsion
    }

    /// Canonical normal form of an element given in generator coordinates:
    /// Smith coordinates, torsion coordinates reduced to [0, d).
    pub fn canonical(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.inner.gens);
        let u = self.inner.smith.u.as_ref().unwrap();
        let mut y = u.mul_vec(x);
        for (i, yi) in y.iter_mut().enumerate() {
            if i < self.inner.smith.rank {
                let d = &self.inner.smith.diag[i];
                // d == 1 coordinates vanish entirely
                let r = yi.mod_floor_ref(d);
                *yi = r;
            }
        }
        y
    }

    pub fn is_zero_elt(&self, x: &[Int]) -> bool {
        self.canonical(x).iter().all(|v| v.is_zero())
    }

    pub fn elts_equal(&self, x: &[Int], y: &[Int]) -> bool {
        self.canonical(x) == self.canonical(y)
    }

    /// Order of the element class of `x`; None when infinite.
    pub fn elt_order(&self, x: &[Int]) -> Option<Int> {
        let y = self.canonical(x);
        let mut ord = Int::from(1);
        for (i, yi) in y.iter().enumerate() {
            if i < self.inner.smith.rank {
                if yi.is_zero() {
                    continue;
                }
                let d = &self.inner.smith.diag[i];
                let g = num_integer::Integer::gcd(yi, d);
                let o = d / g;
                ord = num_integer::Integer::lcm(&ord, &o);
            } else if !yi.is_zero() {
                return None;
            }
        }
        Some(ord)
    }

    /// Minimal presentation: torsion generators then free generators.
    /// Returns (reduced group, to_reduced, from_reduced) with
    /// to_reduced: reduced_gens x gens, from_reduced: gens x reduced_gens,
    /// inverse to each other modulo relations.
    pub fn reduced(&self) -> (FpAbelianGroup, DenseMat, DenseMat) {
        let s = &self.inner.smith;
        let mut keep: Vec<usize> = Vec::new();
        for i in 0..s.rank {
            if s.diag[i] != Int::from(1) {
                keep.push(i);
            }
        }
        let ntors = keep.len();
        for i in s.rank..self.inner.gens {
            keep.push(i);
        }
        let u = s.u.as_ref().unwrap();
        let uinv = s.uinv.as_ref().unwrap();
        let to_red = u.submatrix_rows(&keep);
        let from_red = uinv.submatrix_cols(&keep);
        let mut rels = DenseMat::zero(keep.len(), ntors);
        for (j, &i) in keep.iter().take(ntors).enumerate() {
            rels.set(j, j, s.diag[i].clone());
        }
        (FpAbelianGroup::new(keep.len(), rels), to_red, from_red)
    }

    /// All elements in generator coordinates; None when infinite or larger
    /// than `cap`.
    pub fn elements(&self, cap: usize) -> Option<Vec<Vec<Int>>> {
        let order = self.order()?;
        if order > Int::from(cap as u64) {
            return None;
        }
        let (red, _, from_red) = self.reduced();
        let dims: Vec<u64> = red
            .torsion()
            .iter()
            .map(|d| u64::try_from(d).unwrap())
            .collect();
        let mut out = Vec::new();
        let total: u64 = dims.iter().product();
        for mut idx in 0..total {
            let mut y = vec![Int::zero(); dims.len()];
            for (k, d) in dims.iter().enumerate() {
                y[k] = Int::from(idx % d);
                idx /= d;
            }
            out.push(from_red.mul_vec(&y));
        }
        Some(out)
    }

    /// Direct sum presentation, with coordinates of `self` first.
    pub fn direct_sum(&self, other: &FpAbelianGroup) -> FpAbelianGroup {
        let g = self.gens() + other.gens();
        let mut rels = DenseMat::zero(g, self.rels().cols() + other.rels().cols());
        for j in 0..self.rels().cols() {
            for i in 0..self.gens() {
                rels.set(i, j, self.rels().get(i, j).clone());
            }
        }
        for j in 0..other.rels().cols() {
            for i in 0..other.gens() {
                rels.set(
                    self.gens() + i,
                    self.rels().cols() + j,
                    other.rels().get(i, j).clone(),
                );
            }
        }
        FpAbelianGroup::new(g, rels)
    }

    /// "Z^r (+) Z/d1 (+) ..." rendering.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if self.free_rank() > 0 {
            parts.push(if self.free_rank() == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank())
            });
        }
        for d in self.torsion() {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl std::fmt::Debug for FpAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FpAbelianGroup({})", self.describe())
    }
}

trait ModFloorRef {
    fn mod_floor_ref(&self, m: &Int) -> Int;
}

impl ModFloorRef for Int {
    fn mod_floor_ref(&self, m: &Int) -> Int {
        debug_assert!(m.is_positive());
        num_integer::Integer::mod_floor(self, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::int;

    #[test]
    fn cyclic_structure() {
        let g = FpAbelianGroup::cyclic(6);
        assert_eq!(g.free_rank(), 0);
        assert_eq!(g.torsion(), &[int(6)]);
        assert_eq!(g.order(), Some(int(6)));
        assert_eq!(g.describe(), "Z/6");
    }

    #[test]
    fn diag_presentation_collapses_units() {
        // Z^3 / <(2,0,0), (0,1,0)> = Z/2 + Z
        let rels = DenseMat::from_i64_rows(&[&[2, 0], &[0, 1], &[0, 0]]);
        let g = FpAbelianGroup::new(3, rels);
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion(), &[int(2)]);
    }

    #[test]
    fn canonical_form_detects_equality() {
        // Z/4 with generator e0: 5*e0 == e0
        let g = FpAbelianGroup::cyclic(4);
        assert!(g.elts_equal(&[int(5)], &[int(1)]));
        assert!(!g.elts_equal(&[int(2)], &[int(1)]));
        assert!(g.is_zero_elt(&[int(8)]));
        assert_eq!(g.elt_order(&[int(2)]), Some(int(2)));
        assert_eq!(g.elt_order(&[int(1)]), Some(int(4)));
    }

    #[test]
    fn reduced_roundtrip() {
        // Z^2/<(2,4)> = Z + Z/2
        let rels = DenseMat::from_i64_rows(&[&[2], &[4]]);
        let g = FpAbelianGroup::new(2, rels);
        let (red, to_red, from_red) = g.reduced();
        assert_eq!(red.gens(), 2);
        assert!(red.isomorphic(&g));
        // from_red . to_red must be identity modulo relations
        let rt = from_red.mul(&to_red);
        for j in 0..g.gens() {
            let mut e = vec![Int::zero(); g.gens()];
            e[j] = int(1);
            assert!(g.elts_equal(&rt.mul_vec(&e), &e));
        }
    }

    #[test]
    fn element_enumeration_matches_order() {
        let g = FpAbelianGroup::new(2, DenseMat::from_i64_rows(&[&[2, 0], &[0, 3]]));
        let elems = g.elements(100).unwrap();
        assert_eq!(elems.len(), 6);
        // all distinct canonical forms
        let mut canon: Vec<Vec<Int>> = elems.iter().map(|e| g.canonical(e)).collect();
        canon.sort();
        canon.dedup();
        assert_eq!(canon.len(), 6);
    }

    #[test]
    fn infinite_order_element() {
        let g = FpAbelianGroup::free(1);
        assert_eq!(g.elt_order(&[int(3)]), None);
        assert_eq!(g.order(), None);
        assert!(g.elements(10).is_none());
    }
}
