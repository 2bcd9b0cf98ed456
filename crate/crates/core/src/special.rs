//! Gamma function via the Lanczos approximation.
//!
//! The coverage formulas only ever need gamma at arguments in (0, 3]
//! (1 ± 2/beta with beta > 2, and the 2/beta fading moments), where the
//! g = 7, n = 9 Lanczos fit is accurate to well under 1e-13 relative error.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;

// GSL / numerical-recipes coefficient set for g = 7, n = 9.
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for real arguments.
///
/// Uses the reflection formula for x < 0.5 so the approximation is always
/// evaluated on its well-conditioned branch. Non-positive integers return
/// infinity.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let s = (PI * x).sin();
        if s == 0.0 {
            return f64::INFINITY;
        }
        PI / (s * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen reference values keep their full digits
mod tests {
    use super::*;

    fn rel_err(got: f64, want: f64) -> f64 {
        ((got - want) / want).abs()
    }

    #[test]
    fn known_identities() {
        assert!(rel_err(gamma(0.5), PI.sqrt()) < 1e-14);
        assert!(rel_err(gamma(1.5), PI.sqrt() / 2.0) < 1e-14);
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(2.0) - 1.0).abs() < 1e-14);
        assert!(rel_err(gamma(3.0), 2.0) < 1e-14);
    }

    /// Reference values computed with mpmath at 30 significant digits.
    #[test]
    fn twelve_digit_accuracy_on_unit_interval_through_three() {
        let table = [
            (0.01, 99.432585119150603714),
            (0.1, 9.5135076986687318363),
            (0.2, 4.5908437119988030532),
            (0.25, 3.6256099082219083119),
            (0.333_333_333_333_333_3, 2.6789385347077479133),
            (0.4, 2.2181595437576882231),
            (0.5, 1.7724538509055160273),
            (0.666_666_666_666_666_6, 1.3541179394264005359),
            (0.75, 1.2254167024651776451),
            (0.9, 1.0686287021193193549),
            (1.1, 0.95135076986687318363),
            (1.25, 0.90640247705547707798),
            (1.5, 0.88622692545275801365),
            (1.75, 0.91906252684888323385),
            (2.25, 1.1330030963193463475),
            (2.5, 1.3293403881791370205),
            (2.75, 1.6083594219855456592),
        ];
        for (x, want) in table {
            let got = gamma(x);
            assert!(
                rel_err(got, want) < 1e-12,
                "gamma({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn recurrence_holds_across_used_domain() {
        // Gamma(x+1) = x Gamma(x) on the arguments the formulas use.
        let mut x = 0.05;
        while x < 2.0 {
            let lhs = gamma(x + 1.0);
            let rhs = x * gamma(x);
            assert!(rel_err(lhs, rhs) < 1e-12, "recurrence failed at {x}");
            x += 0.05;
        }
    }
}
