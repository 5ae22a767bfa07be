use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::uncertainty::UncertaintyState;

/// Largest step accepted by [`integrate_moment_odes`].
pub const MAX_ODE_STEP: f64 = 1e-3;

/// `d(Δx²)/dt = 2Δ_xp/m`, `d(Δp²)/dt = −4AΔ_xp`, `dΔ_xp/dt = Δp²/m − 2AΔx²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOde<T> {
    pub a: T,
    pub mass: T,
}

impl<T: Scalar> MomentOde<T> {
    fn rhs(&self, y: [T; 3]) -> [T; 3] {
        let two = T::lit(2.0);
        [two * y[2] / self.mass, -T::lit(4.0) * self.a * y[2], y[1] / self.mass - two * self.a * y[0]]
    }

    /// One classical RK4 step of size `h`.
    pub fn step(&self, y: [T; 3], h: T) -> [T; 3] {
        let d = self.increment(y, h);
        std::array::from_fn(|i| y[i] + d[i])
    }

    fn increment(&self, y: [T; 3], h: T) -> [T; 3] {
        let half = h / T::lit(2.0);
        let axpy = |y: [T; 3], s: T, k: [T; 3]| [y[0] + s * k[0], y[1] + s * k[1], y[2] + s * k[2]];
        let k1 = self.rhs(y);
        let k2 = self.rhs(axpy(y, half, k1));
        let k3 = self.rhs(axpy(y, half, k2));
        let k4 = self.rhs(axpy(y, h, k3));
        let sixth = h / T::lit(6.0);
        let two = T::lit(2.0);
        std::array::from_fn(|i| sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
    }

    /// Integrates over `t` (either sign) with `ceil(|t|/dt)` equal steps.
    /// Increments are accumulated with Kahan compensation, so rounding does
    /// not grow with the step count.
    pub fn integrate(&self, s0: &UncertaintyState<T>, t: T, dt: T) -> Result<UncertaintyState<T>> {
        if !(dt > T::zero() && dt <= T::lit(MAX_ODE_STEP)) {
            return Err(Error::StepSize(format!("RK4 step must lie in (0, {MAX_ODE_STEP}], got {dt}")));
        }
        if !t.is_finite() {
            return Err(Error::Range(format!("non-finite time {t}")));
        }
        let steps = (t.abs() / dt).ceil().to_usize().unwrap_or(0);
        let mut y = [s0.dx2(), s0.dp2(), s0.dxp()];
        if steps > 0 {
            let h = t / T::lit(steps as f64);
            let mut carry = [T::zero(); 3];
            for _ in 0..steps {
                let d = self.increment(y, h);
                for i in 0..3 {
                    let v = d[i] - carry[i];
                    let sum = y[i] + v;
                    carry[i] = (sum - y[i]) - v;
                    y[i] = sum;
                }
            }
        }
        Ok(UncertaintyState::unchecked(y[0], y[1], y[2]))
    }
}

pub fn integrate_moment_odes<T: Scalar>(
    s0: &UncertaintyState<T>,
    a: T,
    mass: T,
    t: T,
    dt: T,
) -> Result<UncertaintyState<T>> {
    MomentOde { a, mass }.integrate(s0, t, dt)
}
