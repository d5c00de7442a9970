//! Randomized structural properties: the Smith reduction really is a
//! normal form, morphism kernels and images account for the whole group,
//! pullbacks match brute-force pair counts, and the group-ring bracket obeys
//! its product rule. Case counts are kept small; these guard invariants, not
//! performance.

use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;
use rsc_core::abgrp::{
    fiber_product, is_exact_at, kernel_basis, lattice_contains, smith, wedge_square, AbMorphism,
    DenseMat, FpAbelianGroup, Int, SmithOpts,
};
use rsc_core::grpring::SquareClassGroup;
use rsc_core::ring::{FiniteRing, UnitGroup};

fn dense(rows: usize, cols: usize, entries: &[i64]) -> DenseMat {
    DenseMat::from_fn(rows, cols, |i, j| Int::from(entries[i * cols + j]))
}

fn diag_mat(rows: usize, cols: usize, diag: &[Int]) -> DenseMat {
    DenseMat::from_fn(rows, cols, |i, j| {
        if i == j && i < diag.len() {
            diag[i].clone()
        } else {
            Int::zero()
        }
    })
}

fn cyclic_sum(orders: &[u64]) -> FpAbelianGroup {
    let mut g = FpAbelianGroup::cyclic(orders[0]);
    for &d in &orders[1..] {
        g = g.direct_sum(&FpAbelianGroup::cyclic(d));
    }
    g
}

/// Multiplication by k, well-defined on any group.
fn mult_by(g: &FpAbelianGroup, k: i64) -> AbMorphism {
    let m = DenseMat::from_fn(g.gens(), g.gens(), |i, j| {
        if i == j {
            Int::from(k)
        } else {
            Int::zero()
        }
    });
    AbMorphism::new(g.clone(), g.clone(), m).unwrap()
}

const RING_SPECS: &[&str] = &[
    "gf:3", "gf:4", "gf:5", "gf:7", "gf:9", "zmod:4", "zmod:6", "zmod:8", "zmod:9",
    "prod:gf:5,gf:4,gf:4",
];

fn mat_strategy() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1..6usize, 1..6usize)
        .prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(-9i64..10, r * c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn smith_is_a_normal_form((rows, cols, entries) in mat_strategy()) {
        let m = dense(rows, cols, &entries);
        let s = smith(&m, SmithOpts::all());
        let u = s.u.as_ref().unwrap();
        let v = s.v.as_ref().unwrap();

        // U M V is the stored diagonal
        prop_assert_eq!(u.mul(&m).mul(v), diag_mat(rows, cols, &s.diag));
        // the tracked inverses really invert
        prop_assert_eq!(u.mul(s.uinv.as_ref().unwrap()), DenseMat::identity(rows));
        prop_assert_eq!(v.mul(s.vinv.as_ref().unwrap()), DenseMat::identity(cols));
        // positive invariant factors in a divisibility chain, then zeros
        prop_assert_eq!(s.rank, s.diag.iter().filter(|d| !d.is_zero()).count());
        for w in s.diag[..s.rank].windows(2) {
            prop_assert!(&w[1] % &w[0] == Int::zero(), "chain broken: {} then {}", w[0], w[1]);
            prop_assert!(w[0] > Int::zero());
        }
        for d in &s.diag[s.rank..] {
            prop_assert!(d.is_zero());
        }
        // the form is already reduced
        let again = smith(&diag_mat(rows, cols, &s.diag), SmithOpts::default());
        prop_assert_eq!(again.diag, s.diag.clone());
        // every column lies in the column lattice
        let su = smith(&m, SmithOpts::with_u());
        for j in 0..cols {
            prop_assert!(lattice_contains(&su, &m.col(j)));
        }
    }

    #[test]
    fn kernel_basis_spans_honest_kernel_vectors((rows, cols, entries) in mat_strategy()) {
        let m = dense(rows, cols, &entries);
        let k = kernel_basis(&m);
        let s = smith(&m, SmithOpts::default());
        prop_assert_eq!(k.cols(), cols - s.rank);
        for j in 0..k.cols() {
            let img = m.mul_vec(&k.col(j));
            prop_assert!(img.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kernel_and_image_account_for_the_group(
        orders in proptest::collection::vec(2u64..10, 1..4),
        k in -5i64..6,
    ) {
        let g = cyclic_sum(&orders);
        let f = mult_by(&g, k);
        let total = g.order().unwrap();
        let (ker, ker_incl) = f.kernel().unwrap();
        let (im, _) = f.image().unwrap();
        let (_, coker_proj) = f.cokernel().unwrap();

        prop_assert_eq!(ker.order().unwrap() * im.order().unwrap(), total);
        prop_assert_eq!(f.is_injective().unwrap(), ker.order().unwrap() == Int::from(1));
        prop_assert_eq!(f.is_surjective().unwrap(), im.order().unwrap() == g.order().unwrap());
        prop_assert!(is_exact_at(&ker_incl, &f).unwrap());
        prop_assert!(is_exact_at(&f, &coker_proj).unwrap());
    }

    #[test]
    fn pullback_order_matches_pair_count(
        orders in proptest::collection::vec(2u64..9, 1..3),
        a in -4i64..5,
        b in -4i64..5,
    ) {
        let g = cyclic_sum(&orders);
        let f = mult_by(&g, a);
        let h = mult_by(&g, b);
        let elems = g.elements(4096).unwrap();
        let mut count: u64 = 0;
        for x in &elems {
            let fx = g.canonical(&f.apply(x));
            for y in &elems {
                if fx == g.canonical(&h.apply(y)) {
                    count += 1;
                }
            }
        }
        let (fp, _, _) = fiber_product(&f, &h).unwrap();
        prop_assert_eq!(fp.order().unwrap(), Int::from(count));
    }

    #[test]
    fn wedge_square_of_two_cyclics_has_gcd_order(aord in 1u64..13, bord in 1u64..13) {
        let g = FpAbelianGroup::cyclic(aord).direct_sum(&FpAbelianGroup::cyclic(bord));
        let (w, _) = wedge_square(&g);
        prop_assert_eq!(w.order().unwrap(), Int::from(aord.gcd(&bord)));
        let (w1, _) = wedge_square(&FpAbelianGroup::cyclic(aord));
        prop_assert!(w1.is_trivial());
    }

    #[test]
    fn bracket_obeys_the_product_rule(spec_i in 0usize..RING_SPECS.len(), ai in 0usize..64, bi in 0usize..64) {
        let r = FiniteRing::parse(RING_SPECS[spec_i]).unwrap();
        let units = UnitGroup::new(&r);
        let sq = SquareClassGroup::new(&r, &units);
        let a = r.units()[ai % r.units().len()];
        let b = r.units()[bi % r.units().len()];
        let lhs = sq.bracket(r.mul(a, b)).unwrap();
        let bra = sq.bracket(a).unwrap();
        let brb = sq.bracket(b).unwrap();
        let rhs = bra.add(&brb).add(&bra.mul(&brb));
        prop_assert_eq!(lhs, rhs);
    }
}
