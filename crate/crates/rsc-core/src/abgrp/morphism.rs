//! Homomorphisms between finitely presented abelian groups, given by integer
//! matrices on generators. Construction verifies well-definedness; kernels,
//! images, cokernels and exactness are computed by integer lattice algebra.

use super::dense::DenseMat;
use super::group::FpAbelianGroup;
use super::snf::{kernel_basis, lattice_solve, smith, SmithOpts};
use super::Int;
use crate::{CoreError, Result};
use num_traits::Zero;

#[derive(Clone)]
pub struct AbMorphism {
    src: FpAbelianGroup,
    dst: FpAbelianGroup,
    /// dst.gens x src.gens
    mat: DenseMat,
}

impl AbMorphism {
    /// Checks that every source relation maps into the target relation
    /// lattice; rejects ill-defined generator assignments.
    pub fn new(src: FpAbelianGroup, dst: FpAbelianGroup, mat: DenseMat) -> Result<Self> {
        assert_eq!(mat.rows(), dst.gens());
        assert_eq!(mat.cols(), src.gens());
        for j in 0..src.rels().cols() {
            let img = mat.mul_vec(&src.rels().col(j));
            if !dst.is_zero_elt(&img) {
                return Err(CoreError::IllDefinedMap(j));
            }
        }
        Ok(AbMorphism { src, dst, mat })
    }

    pub fn identity(g: &FpAbelianGroup) -> Self {
        AbMorphism {
            src: g.clone(),
            dst: g.clone(),
            mat: DenseMat::identity(g.gens()),
        }
    }

    pub fn zero(src: &FpAbelianGroup, dst: &FpAbelianGroup) -> Self {
        AbMorphism {
            src: src.clone(),
            dst: dst.clone(),
            mat: DenseMat::zero(dst.gens(), src.gens()),
        }
    }

    pub fn src(&self) -> &FpAbelianGroup {
        &self.src
    }

    pub fn dst(&self) -> &FpAbelianGroup {
        &self.dst
    }

    pub fn mat(&self) -> &DenseMat {
        &self.mat
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.mat.mul_vec(x)
    }

    /// self after `first` (self . first).
    pub fn compose(&self, first: &AbMorphism) -> Result<AbMorphism> {
        AbMorphism::new(
            first.src.clone(),
            self.dst.clone(),
            self.mat.mul(&first.mat),
        )
    }

    pub fn is_zero_map(&self) -> bool {
        (0..self.src.gens()).all(|j| self.dst.is_zero_elt(&self.mat.col(j)))
    }

    /// Lattice of x in Z^{src.gens} with f(x) = 0 in dst, as columns.
    /// Contains the source relation lattice.
    fn kernel_lattice(&self) -> DenseMat {
        let block = self.mat.hstack(self.dst.rels());
        let k = kernel_basis(&block);
        // keep the first src.gens coordinates of each kernel column
        let keep: Vec<usize> = (0..self.src.gens()).collect();
        k.submatrix_rows(&keep)
    }

    /// Kernel subgroup with its inclusion into the source.
    pub fn kernel(&self) -> Result<(FpAbelianGroup, AbMorphism)> {
        let lat = self.kernel_lattice();
        let grp = presented_sublattice(&lat, self.src.rels())?;
        let incl = AbMorphism::new(grp.clone(), self.src.clone(), lat)?;
        Ok((grp, incl))
    }

    /// Image subgroup with its inclusion into the target.
    pub fn image(&self) -> Result<(FpAbelianGroup, AbMorphism)> {
        // Z^{src.gens} modulo the preimage of the target relation lattice.
        let lat = self.kernel_lattice();
        let grp = FpAbelianGroup::new(self.src.gens(), lat);
        let incl = AbMorphism::new(grp.clone(), self.dst.clone(), self.mat.clone())?;
        Ok((grp, incl))
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> Result<(FpAbelianGroup, AbMorphism)> {
        let rels = self.dst.rels().hstack(&self.mat);
        let grp = FpAbelianGroup::new(self.dst.gens(), rels);
        let proj = AbMorphism::new(
            self.dst.clone(),
            grp.clone(),
            DenseMat::identity(self.dst.gens()),
        )?;
        Ok((grp, proj))
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.0.is_trivial())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.0.is_trivial())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }

    /// A preimage of the class of `y`, in source generator coordinates.
    pub fn solve(&self, y: &[Int]) -> Option<Vec<Int>> {
        let block = self.mat.hstack(self.dst.rels());
        let s = smith(&block, SmithOpts::with_uv());
        let x = lattice_solve(&s, y)?;
        Some(x[..self.src.gens()].to_vec())
    }
}

impl std::fmt::Debug for AbMorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "AbMorphism({:?} -> {:?})",
            self.src.describe(),
            self.dst.describe()
        )
    }
}

/// Present `lat / rels` where both are column lattices in the same ambient
/// Z^n and rels is contained in lat. Generators are the columns of `lat`;
/// relations are the rels columns expressed over them plus the column
/// dependencies of `lat` itself.
fn presented_sublattice(lat: &DenseMat, rels: &DenseMat) -> Result<FpAbelianGroup> {
    let k = lat.cols();
    let s = smith(lat, SmithOpts::with_uv());
    let mut rel_cols: Vec<Vec<Int>> = Vec::new();
    for j in 0..rels.cols() {
        let r = rels.col(j);
        let x = lattice_solve(&s, &r).ok_or_else(|| {
            CoreError::Internal("relation lattice not contained in subgroup lattice".into())
        })?;
        rel_cols.push(x);
    }
    let deps = kernel_basis(lat);
    for j in 0..deps.cols() {
        rel_cols.push(deps.col(j));
    }
    Ok(FpAbelianGroup::new(k, DenseMat::from_cols(k, &rel_cols)))
}

/// Exactness of `a -f-> b -g-> c` at `b`: image(f) = kernel(g) as subgroups.
pub fn is_exact_at(f: &AbMorphism, g: &AbMorphism) -> Result<bool> {
    assert_eq!(f.dst.gens(), g.src.gens());
    // image lattice of f inside Z^{b.gens}: f columns + b relations
    let im = f.mat.hstack(f.dst.rels());
    // kernel lattice of g (already contains b relations)
    let ker = g.kernel_lattice();
    let im_s = smith(&im, SmithOpts::with_u());
    let ker_s = smith(&ker, SmithOpts::with_u());
    for j in 0..f.mat.cols() {
        if !super::snf::lattice_contains(&ker_s, &f.mat.col(j)) {
            return Ok(false);
        }
    }
    for j in 0..ker.cols() {
        if !super::snf::lattice_contains(&im_s, &ker.col(j)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pullback of `f: G -> K` and `h: H -> K`: the subgroup of G (+) H of pairs
/// with equal images, with its two projections.
pub fn fiber_product(
    f: &AbMorphism,
    h: &AbMorphism,
) -> Result<(FpAbelianGroup, AbMorphism, AbMorphism)> {
    assert_eq!(f.dst.gens(), h.dst.gens(), "targets must coincide");
    let (gg, hg) = (f.src.gens(), h.src.gens());
    // x in G, y in H with f x - h y = 0 modulo target relations
    let mut neg_h = h.mat.clone();
    for i in 0..neg_h.rows() {
        for j in 0..neg_h.cols() {
            let v = -neg_h.get(i, j).clone();
            neg_h.set(i, j, v);
        }
    }
    let block = f.mat.hstack(&neg_h).hstack(f.dst.rels());
    let k = kernel_basis(&block);
    let keep: Vec<usize> = (0..gg + hg).collect();
    let lat = k.submatrix_rows(&keep);

    // relations: relG (+) 0 and 0 (+) relH, plus dependencies
    let n = gg + hg;
    let mut rel_cols: Vec<Vec<Int>> = Vec::new();
    for j in 0..f.src.rels().cols() {
        let mut v = vec![Int::zero(); n];
        v[..gg].clone_from_slice(&f.src.rels().col(j));
        rel_cols.push(v);
    }
    for j in 0..h.src.rels().cols() {
        let mut v = vec![Int::zero(); n];
        v[gg..].clone_from_slice(&h.src.rels().col(j));
        rel_cols.push(v);
    }
    let ambient_rels = DenseMat::from_cols(n, &rel_cols);
    let grp = presented_sublattice(&lat, &ambient_rels)?;

    let keep_g: Vec<usize> = (0..gg).collect();
    let keep_h: Vec<usize> = (gg..gg + hg).collect();
    let proj_g = AbMorphism::new(grp.clone(), f.src.clone(), lat.submatrix_rows(&keep_g))?;
    let proj_h = AbMorphism::new(grp.clone(), h.src.clone(), lat.submatrix_rows(&keep_h))?;
    Ok((grp, proj_g, proj_h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::int;

    fn z_mod(n: u64) -> FpAbelianGroup {
        FpAbelianGroup::cyclic(n)
    }

    #[test]
    fn rejects_ill_defined() {
        // Z/2 -> Z by 1 is not well defined
        let bad = AbMorphism::new(z_mod(2), FpAbelianGroup::free(1), DenseMat::identity(1));
        assert!(bad.is_err());
        // Z/2 -> Z/4 by 2 is fine
        let ok = AbMorphism::new(
            z_mod(2),
            z_mod(4),
            DenseMat::from_i64_rows(&[&[2]]),
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn kernel_image_cokernel_of_doubling() {
        // x -> 2x on Z/4: kernel Z/2, image Z/2, cokernel Z/2
        let f = AbMorphism::new(z_mod(4), z_mod(4), DenseMat::from_i64_rows(&[&[2]])).unwrap();
        let (ker, incl) = f.kernel().unwrap();
        assert_eq!(ker.torsion(), &[int(2)]);
        assert!(!incl.is_zero_map());
        let (im, _) = f.image().unwrap();
        assert_eq!(im.torsion(), &[int(2)]);
        let (coker, _) = f.cokernel().unwrap();
        assert_eq!(coker.torsion(), &[int(2)]);
    }

    #[test]
    fn exactness_of_mod4_sequence() {
        // 0 -> Z/2 -2-> Z/4 -proj-> Z/2 -> 0
        let i = AbMorphism::new(z_mod(2), z_mod(4), DenseMat::from_i64_rows(&[&[2]])).unwrap();
        let p = AbMorphism::new(z_mod(4), z_mod(2), DenseMat::identity(1)).unwrap();
        assert!(is_exact_at(&i, &p).unwrap());
        assert!(i.is_injective().unwrap());
        assert!(p.is_surjective().unwrap());
        // but Z/2 -0-> Z/4 -proj-> Z/2 is not exact at Z/4
        let z = AbMorphism::zero(&z_mod(2), &z_mod(4));
        assert!(!is_exact_at(&z, &p).unwrap());
    }

    #[test]
    fn fiber_product_z4_over_z2() {
        // Z/4 -mod2-> Z/2 <-id- Z/2 pulls back to Z/4
        let f = AbMorphism::new(z_mod(4), z_mod(2), DenseMat::identity(1)).unwrap();
        let h = AbMorphism::identity(&z_mod(2));
        let (fp, pg, ph) = fiber_product(&f, &h).unwrap();
        assert_eq!(fp.free_rank(), 0);
        assert_eq!(fp.torsion(), &[int(4)]);
        // projections commute with the structure maps on every element
        let elems = fp.elements(64).unwrap();
        for e in elems {
            let via_g = f.apply(&pg.apply(&e));
            let via_h = h.apply(&ph.apply(&e));
            assert!(f.dst().elts_equal(&via_g, &via_h));
        }
    }

    #[test]
    fn fiber_product_order_via_enumeration() {
        // G = Z/6 -> Z/3 (mod 3), H = Z/3 -> Z/3 (identity)
        let f = AbMorphism::new(z_mod(6), z_mod(3), DenseMat::identity(1)).unwrap();
        let h = AbMorphism::identity(&z_mod(3));
        let (fp, _, _) = fiber_product(&f, &h).unwrap();
        // brute force count of pairs with equal images
        let gs = f.src().elements(100).unwrap();
        let hs = h.src().elements(100).unwrap();
        let mut count = 0u64;
        for a in &gs {
            for b in &hs {
                if f.dst().elts_equal(&f.apply(a), &h.apply(b)) {
                    count += 1;
                }
            }
        }
        assert_eq!(fp.order(), Some(Int::from(count)));
    }

    #[test]
    fn solve_preimage() {
        let f = AbMorphism::new(z_mod(4), z_mod(2), DenseMat::identity(1)).unwrap();
        let x = f.solve(&[int(1)]).unwrap();
        assert!(f.dst().elts_equal(&f.apply(&x), &[int(1)]));
        // surjective, so everything solvable; kernel direction:
        let g = AbMorphism::new(z_mod(2), z_mod(4), DenseMat::from_i64_rows(&[&[2]])).unwrap();
        assert!(g.solve(&[int(1)]).is_none());
        assert!(g.solve(&[int(2)]).is_some());
    }

    #[test]
    fn exactness_matches_enumeration_small() {
        // f: Z/8 -x2-> Z/8, g: Z/8 -x4-> Z/8. im(f) has order 4, ker(g) order 4: exact.
        let f = AbMorphism::new(z_mod(8), z_mod(8), DenseMat::from_i64_rows(&[&[2]])).unwrap();
        let g = AbMorphism::new(z_mod(8), z_mod(8), DenseMat::from_i64_rows(&[&[4]])).unwrap();
        assert_eq!(brute_exact(&f, &g), is_exact_at(&f, &g).unwrap());
        // f2: x4, g2: x4 -- im has order 2, ker order 4: not exact
        let f2 = AbMorphism::new(z_mod(8), z_mod(8), DenseMat::from_i64_rows(&[&[4]])).unwrap();
        assert_eq!(brute_exact(&f2, &g), is_exact_at(&f2, &g).unwrap());
        assert!(!is_exact_at(&f2, &g).unwrap());
    }

    fn brute_exact(f: &AbMorphism, g: &AbMorphism) -> bool {
        let mid = f.dst();
        let elems = f.src().elements(512).unwrap();
        let mut image: Vec<Vec<Int>> = elems.iter().map(|e| mid.canonical(&f.apply(e))).collect();
        image.sort();
        image.dedup();
        let mut kernel: Vec<Vec<Int>> = mid
            .elements(512)
            .unwrap()
            .iter()
            .filter(|e| g.dst().is_zero_elt(&g.apply(e)))
            .map(|e| mid.canonical(e))
            .collect();
        kernel.sort();
        kernel.dedup();
        image == kernel
    }
}
