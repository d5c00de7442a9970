//! Cross-checks against pipelines that share no code with the construction
//! under test: commutator enumeration against bar homology, the classical
//! Witt groups of small fields, the product formula for |SL2|, and frozen
//! comparison-map outcomes on small fields.

use rsc_core::abgrp::FpAbelianGroup;
use rsc_core::homology::{abelianization_invariants, group_homology};
use rsc_core::ring::FiniteRing;
use rsc_core::scissors::witt_data;
use rsc_core::sl2::{enumerate_group, sl2_expected_order, Which};
use rsc_core::unimod::{compare_presented_direct, gw_direct, rp_direct};
use rsc_core::{Caps, CoreError};

fn ring(spec: &str) -> FiniteRing {
    FiniteRing::parse(spec).unwrap()
}

fn torsion_u64(g: &FpAbelianGroup) -> Vec<u64> {
    g.torsion().iter().map(|t| u64::try_from(t).unwrap()).collect()
}

#[test]
fn bar_h1_matches_commutator_enumeration() {
    // wider basis budget so SL2 over gf:7 and zmod:8 participate
    let caps = Caps {
        complex_basis: 200_000,
        ..Caps::default()
    };
    for spec in [
        "gf:2", "gf:3", "gf:4", "gf:5", "gf:7", "zmod:4", "zmod:6", "zmod:8", "zmod:9",
    ] {
        let r = ring(spec);
        for which in [Which::Sl2, Which::Sm2, Which::T, Which::B] {
            let g = enumerate_group(&r, which, &caps).unwrap();
            if g.n() > 400 {
                continue;
            }
            let h1 = match group_homology(&r, &g, 1, &caps) {
                Ok(h) => h,
                Err(CoreError::CapExceeded { .. }) => continue,
                Err(e) => panic!("H1 of {} over {spec}: {e}", which.name()),
            };
            assert_eq!(
                h1.group().free_rank(),
                0,
                "H1 of a finite group is finite: {} over {spec}",
                which.name()
            );
            assert_eq!(
                torsion_u64(h1.group()),
                abelianization_invariants(&r, &g),
                "H1 vs abelianization for {} over {spec}",
                which.name()
            );
        }
    }
}

#[test]
fn witt_groups_of_small_fields_are_classical() {
    let klein = FpAbelianGroup::cyclic(2).direct_sum(&FpAbelianGroup::cyclic(2));
    let z4 = FpAbelianGroup::cyclic(4);
    let z2 = FpAbelianGroup::cyclic(2);
    for q in [3u32, 5, 7, 9, 11, 13] {
        let wd = witt_data(&ring(&format!("gf:{q}"))).unwrap();
        let want = if q % 4 == 1 { &klein } else { &z4 };
        assert!(
            wd.witt.isomorphic(want),
            "W(gf:{q}) should be {}",
            want.describe()
        );
    }
    // characteristic two: squaring is bijective, one square class
    for q in [2u32, 4, 8] {
        let wd = witt_data(&ring(&format!("gf:{q}"))).unwrap();
        assert!(wd.witt.isomorphic(&z2), "W(gf:{q}) should be Z/2");
    }
}

#[test]
fn sl2_order_formula_matches_enumeration() {
    let caps = Caps::default();
    for spec in [
        "gf:2", "gf:3", "gf:4", "gf:5", "gf:7", "gf:8", "gf:9", "zmod:4", "zmod:5", "zmod:6",
        "zmod:7", "zmod:8", "zmod:9", "prod:gf:2,gf:3", "prod:gf:3,zmod:4",
    ] {
        let r = ring(spec);
        let g = enumerate_group(&r, Which::Sl2, &caps).unwrap();
        assert_eq!(
            g.n() as u128,
            sl2_expected_order(&r),
            "order formula vs enumeration over {spec}"
        );
    }
}

/// Outcomes of the presented-vs-coinvariant comparison on the three smallest
/// interesting fields, frozen as regressions. On gf:4 and gf:5 every map is
/// an isomorphism; on gf:3 the degree-two map collapses Z^2 onto Z + Z/2.
#[test]
fn comparison_outcomes_on_small_fields_are_stable() {
    let caps = Caps::default();

    for spec in ["gf:4", "gf:5"] {
        let rep = compare_presented_direct(&ring(spec), &caps).unwrap();
        for (name, mr) in [
            ("rp", &rep.rp),
            ("gw", &rep.gw),
            ("ideal", &rep.ideal),
            ("pieri", &rep.pieri),
        ] {
            assert_eq!(
                mr.isomorphism,
                Some(true),
                "{name} map over {spec} regressed: {}",
                mr.line(name)
            );
        }
    }

    let rep3 = compare_presented_direct(&ring("gf:3"), &caps).unwrap();
    assert_eq!(rep3.rp.surjective, Some(true));
    assert_eq!(rep3.rp.injective, Some(false));
    assert_eq!(rep3.gw.isomorphism, Some(true));
    assert_eq!(rep3.ideal.isomorphism, Some(true));
    assert_eq!(rep3.pieri.surjective, Some(true));
    assert_eq!(rep3.pieri.injective, Some(false));

    // coinvariant-model values backing the comparisons
    let rp5 = rp_direct(&ring("gf:5"), &caps).unwrap();
    assert_eq!(rp5.free_rank(), 1);
    assert_eq!(torsion_u64(&rp5), vec![3]);
    let gw5 = gw_direct(&ring("gf:5"), &caps).unwrap();
    assert_eq!(gw5.free_rank(), 1);
    assert_eq!(torsion_u64(&gw5), vec![2]);
    let rp4 = rp_direct(&ring("gf:4"), &caps).unwrap();
    assert_eq!(rp4.free_rank(), 0);
    assert_eq!(torsion_u64(&rp4), vec![5]);
    let gw4 = gw_direct(&ring("gf:4"), &caps).unwrap();
    assert_eq!(gw4.free_rank(), 1);
    assert!(gw4.torsion().is_empty());
}
