//! Float helpers that work without `std` (routed through `libm`).

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

/// Log-gamma via the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula for x < 0.5. Accurate to better than 1e-13 relative
/// over the argument range the count tables can produce.
pub fn ln_gamma(x: f64) -> f64 {
    // Lanczos coefficients for g = 7.
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    const LN_SQRT_TWO_PI: f64 = 0.918_938_533_204_672_74;

    if x < 0.5 {
        // Reflection: ln Γ(x) = ln(π / sin(πx)) − ln Γ(1 − x)
        let pi = core::f64::consts::PI;
        return ln(pi / libm::sin(pi * x)) - ln_gamma(1.0 - x);
    }

    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    LN_SQRT_TWO_PI + (x + 0.5) * ln(t) - t + ln(acc)
}
