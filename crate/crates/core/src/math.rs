//! Float functions routed through `libm` so the crate builds without `std`.

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `|z|` for a complex number.
#[inline]
pub(crate) fn abs(z: crate::C64) -> f64 {
    libm::hypot(z.re, z.im)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

/// `x log x` with the `0 log 0 = 0` convention.
#[inline]
pub(crate) fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * ln(x)
    }
}

/// `log(1 + e^{-x})`, stable for both signs of `x`.
#[inline]
pub(crate) fn softplus_neg(x: f64) -> f64 {
    if x > 0.0 {
        ln_1p(exp(-x))
    } else {
        -x + ln_1p(exp(x))
    }
}

/// Fermi function `1 / (e^x + 1)`.
#[inline]
pub(crate) fn fermi(x: f64) -> f64 {
    if x > 0.0 {
        let e = exp(-x);
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + exp(x))
    }
}
