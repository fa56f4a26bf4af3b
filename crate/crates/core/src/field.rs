//! Common interface over the spatial representations of a scalar field.

/// A scalar function on the periodic interval `[0, L)`.
///
/// Implemented by [`crate::dg::DGField`] and [`crate::fourier::SpectralField`];
/// the Hermite layer and the time stepper are written against this trait only.
pub trait Field: Clone + Send + Sync + std::fmt::Debug {
    /// Field of the same shape with every coefficient zero.
    fn zeros_like(&self) -> Self;

    fn scale(&mut self, factor: f64);

    /// `self += a * other`.
    fn add_scaled(&mut self, a: f64, other: &Self);

    /// `∫ u dx` over the whole period.
    fn integral(&self) -> f64;

    /// `∫ u w dx` over the whole period.
    fn inner(&self, other: &Self) -> f64;

    fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    /// Point value at `x`, taken modulo the period. At a DG cell edge the
    /// right-hand trace is returned.
    fn eval(&self, x: f64) -> f64;

    fn is_finite(&self) -> bool;

    /// Length of the periodic domain.
    fn length(&self) -> f64;

    /// Linear combination `a*self + b*other` as a new field.
    fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let mut out = self.clone();
        out.scale(a);
        out.add_scaled(b, other);
        out
    }
}
