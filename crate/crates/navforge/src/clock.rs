//! Quadratic satellite-clock error model and re-referencing of the
//! polynomial coefficients from a system start epoch to a chosen `toc`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ClockError {
    #[error("reference time precedes the system start epoch by {0} s")]
    NegativeInterval(f64),
}

/// Clock correction `a0 + a1 (t - toc) + a2 (t - toc)^2` in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockPolynomial {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    /// Reference epoch, seconds of week.
    pub toc: f64,
}

impl ClockPolynomial {
    pub fn offset_at(&self, t: f64) -> f64 {
        let dt = t - self.toc;
        self.a0 + self.a1 * dt + self.a2 * dt * dt
    }
}

/// Clock state at the system start epoch `t_gps0`, where the constant term
/// is identically zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockInit {
    pub a1: f64,
    pub a2: f64,
    pub t_gps0: f64,
}

/// How the drift coefficient is moved to the new reference epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RereferenceMode {
    /// `a1' = a1 + 2 a2 delta`: the derivative of the quadratic at the new
    /// epoch, so the re-centered polynomial equals the original everywhere.
    #[default]
    Exact,
    /// `a1' = a1 + a2 delta`: drops the factor 2, leaving a residual error
    /// of `a2 delta^2` that grows away from the new epoch.
    Simplified,
}

/// Re-center the clock model at `toc`.
///
/// With `delta = toc - t_gps0`: `a0' = a1 delta + a2 delta^2`, `a2' = a2`,
/// and `a1'` per the selected [`RereferenceMode`].
pub fn rereference(
    init: &ClockInit,
    toc: f64,
    mode: RereferenceMode,
) -> Result<ClockPolynomial, ClockError> {
    let delta = toc - init.t_gps0;
    if delta < 0.0 {
        return Err(ClockError::NegativeInterval(-delta));
    }
    let a1 = match mode {
        RereferenceMode::Exact => init.a1 + 2.0 * init.a2 * delta,
        RereferenceMode::Simplified => init.a1 + init.a2 * delta,
    };
    Ok(ClockPolynomial {
        a0: init.a1 * delta + init.a2 * delta * delta,
        a1,
        a2: init.a2,
        toc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offset_cases() {
        let p = ClockPolynomial {
            a0: 1e-6,
            a1: 1e-9,
            a2: 0.0,
            toc: 7200.0,
        };
        assert_eq!(p.offset_at(7200.0), 1e-6);
        assert!((p.offset_at(7300.0) - 1.1e-6).abs() < 1e-18);

        let q = ClockPolynomial {
            a0: 0.0,
            a1: 0.0,
            a2: 1e-12,
            toc: 0.0,
        };
        assert!((q.offset_at(1000.0) - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn rereference_identity_at_start() {
        let init = ClockInit {
            a1: 2.5e-10,
            a2: -3e-16,
            t_gps0: 3600.0,
        };
        for mode in [RereferenceMode::Exact, RereferenceMode::Simplified] {
            let p = rereference(&init, 3600.0, mode).unwrap();
            assert_eq!(p.a0, 0.0);
            assert_eq!(p.a1, init.a1);
            assert_eq!(p.a2, init.a2);
        }
    }

    #[test]
    fn linear_clock_same_in_both_modes() {
        let init = ClockInit {
            a1: 4e-10,
            a2: 0.0,
            t_gps0: 0.0,
        };
        let e = rereference(&init, 9000.0, RereferenceMode::Exact).unwrap();
        let s = rereference(&init, 9000.0, RereferenceMode::Simplified).unwrap();
        assert_eq!(e.a0, 4e-10 * 9000.0);
        assert_eq!(e.a1, 4e-10);
        assert_eq!((e.a0, e.a1, e.a2), (s.a0, s.a1, s.a2));
    }

    #[test]
    fn hand_evaluated_coefficients() {
        let init = ClockInit {
            a1: 1e-9,
            a2: 1e-15,
            t_gps0: 0.0,
        };
        let e = rereference(&init, 3600.0, RereferenceMode::Exact).unwrap();
        assert!((e.a0 - 3.61296e-6).abs() <= 1e-15 * 3.61296e-6);
        assert!((e.a1 - 1.0072e-9).abs() <= 1e-15 * 1.0072e-9);
        let s = rereference(&init, 3600.0, RereferenceMode::Simplified).unwrap();
        assert!((s.a1 - 1.0036e-9).abs() <= 1e-15 * 1.0036e-9);
        assert_eq!(s.a0, e.a0);
        assert_eq!(s.a2, e.a2);
    }

    #[test]
    fn exact_mode_is_continuous() {
        let init = ClockInit {
            a1: -7.3e-10,
            a2: 2.9e-15,
            t_gps0: 18_000.0,
        };
        let original = ClockPolynomial {
            a0: 0.0,
            a1: init.a1,
            a2: init.a2,
            toc: init.t_gps0,
        };
        let moved = rereference(&init, init.t_gps0 + 5400.0, RereferenceMode::Exact).unwrap();
        let mut t = init.t_gps0;
        while t <= init.t_gps0 + 14_400.0 {
            let a = original.offset_at(t);
            let b = moved.offset_at(t);
            assert!((a - b).abs() <= 1e-12 * a.abs() + 1e-16);
            t += 60.0;
        }
    }

    #[test]
    fn negative_interval_rejected() {
        let init = ClockInit {
            a1: 0.0,
            a2: 0.0,
            t_gps0: 100.0,
        };
        assert_eq!(
            rereference(&init, 99.0, RereferenceMode::Exact),
            Err(ClockError::NegativeInterval(1.0))
        );
    }
}
