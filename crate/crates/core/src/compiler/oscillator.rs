use std::collections::BTreeMap;

use super::{CompileConfig, CompileError};
use crate::ir::{Multiset, Provenance, Reaction, SpeciesName};

/// Cyclic oscillator over `n` clock species:
/// `X_i + X_{i+1} → 2X_{i+1}` for `i < n`, closed by `X_n + X_1 → 2X_1`.
///
/// `X_1` starts at `clock_total` and every other species at `clock_eps`,
/// so the first pulse travels X1 → X2 → X3 and phase 0 (gate X3) is the
/// first to open.
pub fn synthesize_oscillator(
    n: usize,
    config: &CompileConfig,
) -> Result<(Vec<Reaction>, BTreeMap<SpeciesName, f64>), CompileError> {
    if n == 0 || !n.is_multiple_of(3) {
        return Err(CompileError::OscillatorSize(n));
    }
    let reactions = (1..=n)
        .map(|i| {
            let here = SpeciesName::clock(i);
            let next = SpeciesName::clock(i % n + 1);
            Reaction::new(
                Multiset::new().with(here, 1).with(next.clone(), 1),
                Multiset::new().with(next, 2),
                1.0,
            )
            .expect("oscillator reactions are well-formed")
            .with_provenance(Provenance::new("oscillator"))
        })
        .collect();
    let initials = (1..=n)
        .map(|i| (SpeciesName::clock(i), if i == 1 { config.clock_total } else { config.clock_eps }))
        .collect();
    Ok((reactions, initials))
}
