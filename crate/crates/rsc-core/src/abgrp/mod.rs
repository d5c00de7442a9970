//! Finitely presented abelian groups and the exact integer linear algebra
//! behind them: Smith normal form, sparse echelon reduction, morphisms with
//! kernels/images/cokernels, exactness tests, and chain-complex homology.

mod complex;
mod dense;
mod group;
mod morphism;
mod scalar;
mod snf;
mod sparse;
mod squares;

pub use complex::{induced_map, Homology, ZComplex};
pub use dense::DenseMat;
pub use group::FpAbelianGroup;
pub use morphism::{fiber_product, is_exact_at, AbMorphism};
pub use scalar::ExactInt;
pub use snf::{kernel_basis, lattice_contains, lattice_solve, smith, Smith, SmithOpts};
pub use sparse::{
    axpy, combine, dense_to_sparse, image_and_kernel, image_basis, scale, sparse_to_dense,
    to_bigint_vec, Echelon, Inserted, Outcome, SparseMat, SparseVec,
};
pub use squares::{
    sym2_square, tensor_eval, tensor_product, tensor_square, wedge_square, PairIndexed,
};

pub type Int = num_bigint::BigInt;

/// Convenience constructor for small integers.
pub fn int(v: i64) -> Int {
    Int::from(v)
}
