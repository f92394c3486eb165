//! Dual-rail pi-pulse calibration.

pub fn calibrate_dual_rail_pi() {}
