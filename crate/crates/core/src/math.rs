//! Float helpers backed by `libm` so the crate stays `no_std`.

pub(crate) use libm::{cos, erfc, exp, fabs as abs, floor, lgamma, log, log10, round, sqrt};

/// Exact for |exponent| <= 22; larger exponents fall back to repeated scaling.
pub(crate) fn pow10(exponent: i32) -> f64 {
    const TABLE: [f64; 23] = [
        1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10, 1e11, 1e12, 1e13, 1e14, 1e15, 1e16,
        1e17, 1e18, 1e19, 1e20, 1e21, 1e22,
    ];
    let n = exponent.unsigned_abs() as usize;
    let magnitude = if n < TABLE.len() {
        TABLE[n]
    } else {
        libm::pow(10.0, n as f64)
    };
    if exponent >= 0 {
        magnitude
    } else {
        1.0 / magnitude
    }
}

/// `value * 10^exponent`, dividing for negative exponents to keep exact results exact.
pub(crate) fn scale10(value: f64, exponent: i32) -> f64 {
    if exponent >= 0 {
        value * pow10(exponent)
    } else {
        value / pow10(-exponent)
    }
}

/// Euclidean remainder, always in `[0, m)` for positive `m`.
pub(crate) fn rem_euclid(x: f64, m: f64) -> f64 {
    let r = libm::fmod(x, m);
    if r < 0.0 {
        r + m
    } else {
        r
    }
}
