//! Unit conventions and conversions.
//!
//! Everything inside the dynamics code runs in angular frequency (rad/s) and
//! seconds. Configuration and all public model parameters are cyclic (Hz, or
//! MHz/kHz in config files) and ns/us. The conversion happens here and only
//! here; passing a cyclic number deeper into the stack is a bug.

use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// Cyclic frequency (Hz) to angular frequency (rad/s).
#[inline]
pub fn cyclic_to_angular(f_hz: f64) -> f64 {
    TWO_PI * f_hz
}

/// Angular frequency (rad/s) to cyclic frequency (Hz).
#[inline]
pub fn angular_to_cyclic(w: f64) -> f64 {
    w / TWO_PI
}

#[inline]
pub fn mhz_to_hz(f_mhz: f64) -> f64 {
    f_mhz * 1e6
}

#[inline]
pub fn khz_to_hz(f_khz: f64) -> f64 {
    f_khz * 1e3
}

#[inline]
pub fn ns_to_s(t_ns: f64) -> f64 {
    t_ns * 1e-9
}

#[inline]
pub fn us_to_s(t_us: f64) -> f64 {
    t_us * 1e-6
}

#[inline]
pub fn s_to_ns(t_s: f64) -> f64 {
    t_s * 1e9
}

#[inline]
pub fn s_to_us(t_s: f64) -> f64 {
    t_s * 1e6
}
