//! Tensor, exterior and antisymmetrized symmetric squares of finitely
//! presented abelian groups, with helpers to evaluate the induced bilinear
//! maps in generator coordinates.
//!
//! The symmetric square used here is (G (x) G) / <a(x)b + b(x)a>, so the
//! diagonal classes are 2-torsion; for G = Z/4 this gives Z/2.

use super::dense::DenseMat;
use super::group::FpAbelianGroup;
use super::Int;
use num_traits::Zero;

/// Index scheme for ordered generator pairs of a square construction.
/// `strict` pairs (i < j) model the exterior square, non-strict (i <= j)
/// the symmetric one; in both, swapping a pair flips the sign.
#[derive(Clone, Copy, Debug)]
pub struct PairIndexed {
    n: usize,
    strict: bool,
}

impl PairIndexed {
    pub fn wedge(n: usize) -> Self {
        PairIndexed { n, strict: true }
    }

    pub fn sym(n: usize) -> Self {
        PairIndexed { n, strict: false }
    }

    pub fn len(&self) -> usize {
        if self.strict {
            self.n.saturating_sub(1) * self.n / 2
        } else {
            self.n * (self.n + 1) / 2
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Slot and sign of the (i, j) pair; None when the pair vanishes
    /// (diagonal in the strict scheme).
    pub fn index(&self, i: usize, j: usize) -> Option<(usize, i64)> {
        assert!(i < self.n && j < self.n);
        if i == j && self.strict {
            return None;
        }
        let (a, b, sign) = if i <= j { (i, j, 1) } else { (j, i, -1) };
        let tri = (a * a - a) / 2;
        let slot = if self.strict {
            a * (self.n - 1) - tri + (b - a - 1)
        } else {
            a * self.n - tri + (b - a)
        };
        Some((slot, sign))
    }

    /// The (i, j) pair stored at a slot, inverse to `index` on canonical pairs.
    pub fn pair(&self, slot: usize) -> (usize, usize) {
        let mut s = slot;
        for a in 0..self.n {
            let row = if self.strict { self.n - 1 - a } else { self.n - a };
            if s < row {
                return if self.strict { (a, a + 1 + s) } else { (a, a + s) };
            }
            s -= row;
        }
        panic!("slot {} out of range", slot);
    }

    /// Coordinates of the image of (x, y) under the folded bilinear map.
    pub fn eval(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        let mut out = vec![Int::zero(); self.len()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                if let Some((slot, sign)) = self.index(i, j) {
                    let term = xi * yj;
                    if sign > 0 {
                        out[slot] += term;
                    } else {
                        out[slot] -= term;
                    }
                }
            }
        }
        out
    }
}

/// Coordinates of x (x) y in the gn*hn tensor basis, slot (i, j) = i*hn + j.
pub fn tensor_eval(gn: usize, hn: usize, x: &[Int], y: &[Int]) -> Vec<Int> {
    assert_eq!(x.len(), gn);
    assert_eq!(y.len(), hn);
    let mut out = vec![Int::zero(); gn * hn];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            out[i * hn + j] = xi * yj;
        }
    }
    out
}

/// G (x) H presented on generator pairs, slot (i, j) = i*hn + j.
pub fn tensor_product(g: &FpAbelianGroup, h: &FpAbelianGroup) -> FpAbelianGroup {
    let (gn, hn) = (g.gens(), h.gens());
    let n = gn * hn;
    let mut rel_cols: Vec<Vec<Int>> = Vec::new();
    for c in 0..g.rels().cols() {
        let r = g.rels().col(c);
        for k in 0..hn {
            let mut v = vec![Int::zero(); n];
            for (i, ri) in r.iter().enumerate() {
                v[i * hn + k] = ri.clone();
            }
            rel_cols.push(v);
        }
    }
    for c in 0..h.rels().cols() {
        let r = h.rels().col(c);
        for k in 0..gn {
            let mut v = vec![Int::zero(); n];
            for (j, rj) in r.iter().enumerate() {
                v[k * hn + j] = rj.clone();
            }
            rel_cols.push(v);
        }
    }
    FpAbelianGroup::new(n, DenseMat::from_cols(n, &rel_cols))
}

pub fn tensor_square(g: &FpAbelianGroup) -> FpAbelianGroup {
    tensor_product(g, g)
}

/// Exterior square on pairs i < j; relations are the folded products of the
/// relations of G with each generator.
pub fn wedge_square(g: &FpAbelianGroup) -> (FpAbelianGroup, PairIndexed) {
    let n = g.gens();
    let pi = PairIndexed::wedge(n);
    let mut rel_cols: Vec<Vec<Int>> = Vec::new();
    for c in 0..g.rels().cols() {
        let r = g.rels().col(c);
        for k in 0..n {
            let ek = unit_vec(n, k);
            rel_cols.push(pi.eval(&r, &ek));
        }
    }
    (
        FpAbelianGroup::new(pi.len(), DenseMat::from_cols(pi.len(), &rel_cols)),
        pi,
    )
}

/// Antisymmetrized symmetric square on pairs i <= j: diagonal classes are
/// 2-torsion and relations of G fold in with signs.
pub fn sym2_square(g: &FpAbelianGroup) -> (FpAbelianGroup, PairIndexed) {
    let n = g.gens();
    let pi = PairIndexed::sym(n);
    let mut rel_cols: Vec<Vec<Int>> = Vec::new();
    for i in 0..n {
        let mut v = vec![Int::zero(); pi.len()];
        let (slot, _) = pi.index(i, i).expect("diagonal slot");
        v[slot] = Int::from(2);
        rel_cols.push(v);
    }
    for c in 0..g.rels().cols() {
        let r = g.rels().col(c);
        for k in 0..n {
            let ek = unit_vec(n, k);
            rel_cols.push(pi.eval(&r, &ek));
        }
    }
    (
        FpAbelianGroup::new(pi.len(), DenseMat::from_cols(pi.len(), &rel_cols)),
        pi,
    )
}

fn unit_vec(n: usize, k: usize) -> Vec<Int> {
    let mut v = vec![Int::zero(); n];
    v[k] = Int::from(1);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::int;

    fn grp(torsion: &[u64], free: usize) -> FpAbelianGroup {
        let n = torsion.len() + free;
        let cols: Vec<Vec<Int>> = torsion
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let mut v = vec![Int::zero(); n];
                v[i] = Int::from(t);
                v
            })
            .collect();
        FpAbelianGroup::new(n, DenseMat::from_cols(n, &cols))
    }

    #[test]
    fn pair_index_roundtrip() {
        for n in 1..6 {
            for pi in [PairIndexed::wedge(n), PairIndexed::sym(n)] {
                for slot in 0..pi.len() {
                    let (i, j) = pi.pair(slot);
                    assert_eq!(pi.index(i, j), Some((slot, 1)));
                    if i != j {
                        assert_eq!(pi.index(j, i), Some((slot, -1)));
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_of_cyclics_is_gcd() {
        let g = grp(&[6], 0);
        let h = grp(&[4], 0);
        let t = tensor_product(&g, &h);
        assert_eq!(t.torsion(), &[int(2)]);
        assert_eq!(t.free_rank(), 0);
    }

    #[test]
    fn tensor_square_of_mixed_group() {
        // (Z/2 + Z/4)^(x)2 = Z/2^3 + Z/4
        let g = grp(&[2, 4], 0);
        let t = tensor_square(&g);
        assert_eq!(t.free_rank(), 0);
        assert_eq!(t.torsion(), &[int(2), int(2), int(2), int(4)]);
        // free part multiplies
        let f = grp(&[], 2);
        assert_eq!(tensor_square(&f).free_rank(), 4);
    }

    #[test]
    fn wedge_square_values() {
        let (w, _) = wedge_square(&grp(&[], 3));
        assert_eq!(w.free_rank(), 3);
        let (w, _) = wedge_square(&grp(&[5], 0));
        assert!(w.is_trivial());
        let (w, _) = wedge_square(&grp(&[2, 4], 0));
        assert_eq!(w.torsion(), &[int(2)]);
        assert_eq!(w.free_rank(), 0);
        let (w, _) = wedge_square(&grp(&[6, 4], 0));
        assert_eq!(w.torsion(), &[int(2)]);
    }

    #[test]
    fn sym_square_values() {
        // diagonal 2-torsion: S^2(Z/4) = Z/2
        let (s, _) = sym2_square(&grp(&[4], 0));
        assert_eq!(s.torsion(), &[int(2)]);
        assert_eq!(s.free_rank(), 0);
        // S^2(Z/2 + Z/2) = (Z/2)^3
        let (s, _) = sym2_square(&grp(&[2, 2], 0));
        assert_eq!(s.torsion(), &[int(2), int(2), int(2)]);
        // S^2(Z) = Z/2 in this convention
        let (s, _) = sym2_square(&grp(&[], 1));
        assert_eq!(s.free_rank(), 0);
        assert_eq!(s.torsion(), &[int(2)]);
    }

    #[test]
    fn eval_respects_relations() {
        // in S^2(Z/4), eval(x, y) of 4x with anything dies
        let g = grp(&[4], 0);
        let (s, pi) = sym2_square(&g);
        let v = pi.eval(&[int(4)], &[int(3)]);
        assert!(s.is_zero_elt(&v));
        // antisymmetry of the fold: eval(x,y) + eval(y,x) = 0 off-diagonal
        let pi2 = PairIndexed::wedge(3);
        let x = vec![int(1), int(2), int(0)];
        let y = vec![int(0), int(1), int(5)];
        let a = pi2.eval(&x, &y);
        let b = pi2.eval(&y, &x);
        for (u, v) in a.iter().zip(&b) {
            assert_eq!(u.clone() + v, int(0));
        }
    }
}
