use crate::error::{Error, Result};
use crate::raster::ScalarField;

/// `(h^2 sum |v|^p)^(1/p)` for `p >= 1`.
pub fn lp_norm(field: &ScalarField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Argument(format!("norm exponent {p} must be at least 1")));
    }
    if p.is_infinite() {
        return Ok(field.max_abs());
    }
    let s: f64 = field.values().iter().map(|v| v.abs().powf(p)).sum();
    Ok((field.grid().cell_area() * s).powf(1.0 / p))
}
