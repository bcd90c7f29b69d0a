//! Named boundary-data and source catalogs. Every scan and CLI experiment
//! refers to inputs by name + parameters so runs are reproducible.

use crate::geometry::{BallPoint, SpherePoint};
use crate::solver::{BoundaryData, DiscreteMeasure, SourceDensity};
use crate::{Error, Result};

/// Names of the shipped boundary data.
pub const BOUNDARY_NAMES: &[&str] = &["const", "linear", "spike", "zonal-bump"];

/// Names of the shipped source densities.
pub const SOURCE_NAMES: &[&str] = &["h3-linear", "h4-cubic", "const-one", "zero"];

/// Look up boundary data by name.
///
/// - `const [c]`: the constant c (default 1).
/// - `linear [k, scale]`: scale * xi_k (defaults 0, 1); Lipschitz.
/// - `spike [alpha]`: |xi - e_n|^alpha (default alpha 1); Holder-alpha with
///   constant 1 (Lipschitz when alpha = 1).
/// - `zonal-bump [lambda]`: exp(-lambda (1 - <xi, e_n>)) (default 4); smooth.
pub fn boundary(name: &str, params: &[f64]) -> Result<BoundaryData> {
    match name {
        "const" => {
            let c = params.first().copied().unwrap_or(1.0);
            Ok(BoundaryData::new(move |_| c).with_lipschitz(0.0))
        }
        "linear" => {
            let k = params.first().copied().unwrap_or(0.0) as usize;
            let scale = params.get(1).copied().unwrap_or(1.0);
            Ok(
                BoundaryData::new(move |t: &SpherePoint| scale * t.as_vector().get(k))
                    .with_lipschitz(scale.abs()),
            )
        }
        "spike" => {
            let alpha = params.first().copied().unwrap_or(1.0);
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(Error::Domain(format!(
                    "spike exponent must lie in (0,1], got {alpha}"
                )));
            }
            let data = BoundaryData::new(move |t: &SpherePoint| {
                let n = t.dim();
                let mut d2 = 0.0;
                for i in 0..n {
                    let e = if i == n - 1 { 1.0 } else { 0.0 };
                    d2 += (t.as_vector().get(i) - e).powi(2);
                }
                d2.sqrt().powf(alpha)
            })
            .with_holder(alpha, 1.0);
            Ok(if alpha == 1.0 {
                data.with_lipschitz(1.0)
            } else {
                data
            })
        }
        "zonal-bump" => {
            let lambda = params.first().copied().unwrap_or(4.0);
            Ok(BoundaryData::new(move |t: &SpherePoint| {
                let c = t.as_vector().get(t.dim() - 1);
                (-lambda * (1.0 - c)).exp()
            })
            .with_lipschitz(lambda))
        }
        other => Err(Error::Domain(format!(
            "unknown boundary data '{other}' (catalog: {BOUNDARY_NAMES:?})"
        ))),
    }
}

/// Look up a source density by name.
///
/// - `h3-linear [M]`: M (1-|x|^2); satisfies (h3) with constant M exactly.
/// - `h4-cubic`: (1-|x|^2)^3; passes (h4) at every alpha in (0,1].
/// - `const-one`: 1; the negative control that fails (h3).
/// - `zero`: the zero density.
pub fn source(name: &str, params: &[f64]) -> Result<SourceDensity> {
    match name {
        "h3-linear" => {
            let m = params.first().copied().unwrap_or(1.0);
            Ok(SourceDensity::new(
                move |y: &BallPoint| m * (1.0 - y.as_vector().norm_sq()),
                m.abs(),
            ))
        }
        "h4-cubic" => Ok(SourceDensity::new(
            |y: &BallPoint| (1.0 - y.as_vector().norm_sq()).powi(3),
            1.0,
        )),
        "const-one" => Ok(SourceDensity::new(|_| 1.0, f64::INFINITY)),
        "zero" => Ok(SourceDensity::new(|_| 0.0, 0.0)),
        other => Err(Error::Domain(format!(
            "unknown source density '{other}' (catalog: {SOURCE_NAMES:?})"
        ))),
    }
}

/// Parse a flat list of `n`-dimensional atom coordinates plus weights:
/// [y1_1..y1_n, w1, y2_1..y2_n, w2, ...].
pub fn measure_from_flat(n: usize, flat: &[f64]) -> Result<DiscreteMeasure> {
    if flat.len() % (n + 1) != 0 {
        return Err(Error::Domain(format!(
            "measure spec length {} is not a multiple of n+1 = {}",
            flat.len(),
            n + 1
        )));
    }
    let mut atoms = Vec::new();
    for chunk in flat.chunks(n + 1) {
        let p = BallPoint::from_coords(chunk[..n].to_vec())?;
        atoms.push((p, chunk[n]));
    }
    DiscreteMeasure::new(atoms)
}
