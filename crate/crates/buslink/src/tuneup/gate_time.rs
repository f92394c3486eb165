//! Effective gate-time optimization over pulsed swap trains.

pub fn optimize_effective_gate_time() {}
