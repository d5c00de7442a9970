//! Output rendering shared by every subcommand. The JSON schema for a group
//! is {"free_rank": r, "torsion": [d1, ...]} with the invariant factors
//! sorted by divisibility; every machine-readable surface uses it.

use rsc_core::abgrp::{FpAbelianGroup, Int};
use serde_json::Value;

fn int_value(v: &Int) -> Value {
    match u64::try_from(v.clone()) {
        Ok(n) => Value::from(n),
        Err(_) => Value::from(v.to_string()),
    }
}

pub fn group_json(g: &FpAbelianGroup) -> Value {
    serde_json::json!({
        "free_rank": g.free_rank(),
        "torsion": g.torsion().iter().map(int_value).collect::<Vec<_>>(),
    })
}

/// Rebuilds a group, up to isomorphism, from the JSON schema above. Returns
/// None when the payload does not match the schema.
pub fn group_from_json(v: &Value) -> Option<FpAbelianGroup> {
    let free = v.get("free_rank")?.as_u64()? as usize;
    let torsion = v.get("torsion")?.as_array()?;
    let mut g = FpAbelianGroup::free(free);
    for d in torsion {
        g = g.direct_sum(&FpAbelianGroup::cyclic(d.as_u64()?));
    }
    Some(g)
}

pub fn print_value(json: bool, v: &Value, human: &str) {
    if json {
        println!("{v}");
    } else {
        println!("{human}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rsc_core::abgrp::FpAbelianGroup;

    #[test]
    fn group_json_round_trips() {
        let g = FpAbelianGroup::free(2)
            .direct_sum(&FpAbelianGroup::cyclic(2))
            .direct_sum(&FpAbelianGroup::cyclic(6));
        let v = group_json(&g);
        assert_eq!(v.to_string(), "{\"free_rank\":2,\"torsion\":[2,6]}");
        let back = group_from_json(&v).unwrap();
        assert!(back.isomorphic(&g));
    }

    #[test]
    fn trivial_group_serializes_with_empty_torsion() {
        assert_eq!(
            group_json(&FpAbelianGroup::trivial()).to_string(),
            "{\"free_rank\":0,\"torsion\":[]}"
        );
    }
}
