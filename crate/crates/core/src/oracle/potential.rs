use std::fmt;
use std::sync::Arc;

use crate::scalar::Scalar;
use crate::uncertainty::PotentialSpec;

type RealFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Arbitrary potential `V(x)` for the grid oracle. Quadratic potentials keep
/// their coefficients so callers can compare against the closed forms.
#[derive(Clone)]
pub struct PotentialFn<T> {
    value: RealFn<T>,
    quadratic: Option<PotentialSpec<T>>,
}

impl<T: Scalar> PotentialFn<T> {
    pub fn quadratic(spec: PotentialSpec<T>) -> Self {
        Self { value: Arc::new(move |x| spec.value(x)), quadratic: Some(spec) }
    }

    pub fn from_fn(f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self { value: Arc::new(f), quadratic: None }
    }

    /// `V(x) = c·x⁴`.
    pub fn quartic(c: T) -> Self {
        Self::from_fn(move |x| c * x.powi(4))
    }

    pub fn value(&self, x: T) -> T {
        (self.value)(x)
    }

    pub fn quadratic_spec(&self) -> Option<&PotentialSpec<T>> {
        self.quadratic.as_ref()
    }

    /// `F = −V′`; exact for quadratic potentials, central differences otherwise.
    pub fn force(&self, x: T) -> T {
        if let Some(q) = &self.quadratic {
            return -(T::lit(2.0) * q.a * x + q.b);
        }
        let h = Self::fd_step(x);
        -(self.value(x + h) - self.value(x - h)) / (T::lit(2.0) * h)
    }

    /// `F′ = −V″`.
    pub fn force_derivative(&self, x: T) -> T {
        if let Some(q) = &self.quadratic {
            return -T::lit(2.0) * q.a;
        }
        let h = T::epsilon().sqrt().sqrt() * x.abs().max(T::one());
        -(self.value(x + h) - T::lit(2.0) * self.value(x) + self.value(x - h)) / (h * h)
    }

    fn fd_step(x: T) -> T {
        T::epsilon().cbrt() * x.abs().max(T::one())
    }
}

impl<T: fmt::Debug> fmt::Debug for PotentialFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialFn").field("quadratic", &self.quadratic).finish_non_exhaustive()
    }
}
