//! Exact-arithmetic models of scissors congruence groups, Grothendieck-Witt and
//! Witt groups, Milnor-Witt K1, and low-degree group homology of SL2 over finite
//! commutative rings.
//!
//! Everything is computed over the integers with no floating point and no
//! modular shortcuts: group structures are extracted via Smith normal form,
//! and every identity the library claims is checked by exact evaluation.

pub mod abgrp;
pub mod grpring;
pub mod homology;
pub mod ring;
pub mod scissors;
pub mod sl2;
pub mod unimod;

use thiserror::Error;

/// Errors surfaced by the core library.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{what} size {actual} exceeds cap {cap}")]
    CapExceeded {
        what: String,
        cap: usize,
        actual: usize,
    },
    #[error("element {0} is not a unit")]
    NotAUnit(u32),
    #[error("element {0} is not in the domain W (a and 1-a must both be units)")]
    NotInW(u32),
    #[error("map is not well defined: generator image violates relation {0}")]
    IllDefinedMap(usize),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

/// Size caps guarding the exponentially sized constructions.
///
/// Exceeding a cap is a hard error on direct requests; batch verification
/// skips the offending check and records the reason instead.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Largest group order accepted when building degree-2 bar homology.
    pub h2_group_order: usize,
    /// Largest group order accepted when building degree-3 bar homology.
    pub h3_group_order: usize,
    /// Largest basis size per degree of the unimodular-tuple complex.
    pub complex_basis: usize,
    /// Largest SL2 order the enumerator will produce.
    pub sl2_order: usize,
    /// Largest degree of the unimodular-tuple complex.
    pub max_degree: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            h2_group_order: 120,
            h3_group_order: 48,
            complex_basis: 100_000,
            sl2_order: 1_000_000,
            max_degree: 4,
        }
    }
}

impl Caps {
    /// Largest group order accepted for bar homology in degree `n`.
    pub fn bar_cap(&self, n: usize) -> usize {
        match n {
            0 | 1 => self.h2_group_order.max(self.h3_group_order) * 8,
            2 => self.h2_group_order,
            _ => self.h3_group_order,
        }
    }
}
