//! Float functions routed through `libm` so results are identical with and
//! without `std`.

pub(crate) use core::f64::consts::{PI, TAU};

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Reduces an angle into `[0, 2π)`.
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let r = theta - TAU * floor(theta / TAU);
    if !(0.0..TAU).contains(&r) {
        0.0
    } else {
        r
    }
}

/// `|1 − e^{iα}| = 2|sin(α/2)|`.
#[inline]
pub(crate) fn chord(alpha: f64) -> f64 {
    2.0 * sin(alpha / 2.0).abs()
}
