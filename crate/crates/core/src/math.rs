//! Float helpers over `libm`; `core` has no transcendental functions.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub(crate) fn powf(x: f64, p: f64) -> f64 {
    libm::pow(x, p)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// `sign(t)|t|^a`, the odd power used by the sigma-psi family.
#[inline]
pub(crate) fn odd_pow(t: f64, a: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else if t > 0.0 {
        powf(t, a)
    } else {
        -powf(-t, a)
    }
}
