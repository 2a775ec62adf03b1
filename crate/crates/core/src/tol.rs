//! Fixed numeric tolerances shared across the crate.

/// Relative slack for a point to count as attaining a support value.
pub const FACE: f64 = 1e-9;
/// Singular-value cutoff (relative to `max(1, s_max)`) for affine rank.
pub const RANK: f64 = 1e-8;
/// Distance under which two vertices are the same point.
pub const POINT: f64 = 1e-10;
/// Off-diagonal residual at which the Jacobi sweep stops.
pub const EIG: f64 = 1e-10;

/// Scale used to turn a relative tolerance into an absolute one.
pub fn scale_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}
