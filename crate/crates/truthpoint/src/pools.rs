//! The bundled demonstration pools, compiled into the binary. Each anchors
//! one cluster of results: `core` and `quartet` for jump separations and
//! fixed-point structure, the `sweep*` family for exhaustive categoricity,
//! `pk` for the disquotational theories, `omega` for the quantifier gap,
//! and `vb-sep`/`mc-sep` for the fixed-point separation constructions.

use crate::syntax::{load_pool, PoolError, SentencePool};

/// Bundled pool names, in presentation order.
pub const POOL_NAMES: [&str; 9] = [
    "core", "quartet", "sweep", "sweepc", "sweepmc", "pk", "omega", "vb-sep", "mc-sep",
];

/// The declaration source of a bundled pool.
pub fn bundled_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "core" => include_str!("../pools/core.pool"),
        "quartet" => include_str!("../pools/quartet.pool"),
        "sweep" => include_str!("../pools/sweep.pool"),
        "sweepc" => include_str!("../pools/sweepc.pool"),
        "sweepmc" => include_str!("../pools/sweepmc.pool"),
        "pk" => include_str!("../pools/pk.pool"),
        "omega" => include_str!("../pools/omega.pool"),
        "vb-sep" => include_str!("../pools/vb-sep.pool"),
        "mc-sep" => include_str!("../pools/mc-sep.pool"),
        _ => return None,
    })
}

/// Load a bundled pool by name.
pub fn load_bundled(name: &str) -> Result<SentencePool, PoolError> {
    let src = bundled_source(name)
        .ok_or_else(|| PoolError::UnknownName(format!("bundled pool `{name}`")))?;
    load_pool(src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_pool_loads_with_its_frozen_shape() {
        let expected: [(&str, usize, u32); 9] = [
            ("core", 18, 24),
            ("quartet", 22, 24),
            ("sweep", 14, 16),
            ("sweepc", 12, 16),
            ("sweepmc", 12, 16),
            ("pk", 10, 16),
            ("omega", 16, 17),
            ("vb-sep", 6, 8),
            ("mc-sep", 6, 8),
        ];
        for (name, statements, domain) in expected {
            let p = load_bundled(name).unwrap();
            assert_eq!(p.n_statements(), statements, "{name}");
            assert_eq!(p.domain_size, domain, "{name}");
            assert!(p.partner_is_involution(), "{name}");
            // Loading twice gives an identical pool.
            assert_eq!(p.pool_hash(), load_bundled(name).unwrap().pool_hash());
        }
    }

    #[test]
    fn unknown_names_error() {
        assert!(load_bundled("no-such-pool").is_err());
    }

    #[test]
    fn the_disquotational_base_extends_to_its_frozen_size() {
        use crate::axioms::{ensure_theory_closure, TheoryKind};
        let mut p = load_bundled("pk").unwrap();
        let pi = ensure_theory_closure(&mut p, TheoryKind::PK).unwrap().unwrap();
        assert_eq!(p.n_statements(), 14);
        assert_eq!(pi.base_codes.len(), 10);
    }

    #[test]
    fn sweep_pools_code_their_instance_layers() {
        use crate::schemes::{com_instance, con_instance};
        let pc = load_bundled("sweepc").unwrap();
        for x in 1..=4u32 {
            let inst = con_instance(&pc, x).unwrap();
            assert!(pc.lookup(&inst).is_some(), "consistency instance of {x}");
        }
        let pm = load_bundled("sweepmc").unwrap();
        for x in 1..=4u32 {
            let inst = com_instance(&pm, x).unwrap();
            assert!(pm.lookup(&inst).is_some(), "completeness instance of {x}");
        }
    }
}
