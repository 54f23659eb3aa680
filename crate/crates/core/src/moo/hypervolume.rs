use crate::error::{Error, Result};

/// Area dominated by `front` and bounded by `reference` (minimization).
/// Dominated and duplicate points contribute nothing.
pub fn hypervolume_2d(front: &[[f64; 2]], reference: [f64; 2]) -> Result<f64> {
    for (index, p) in front.iter().enumerate() {
        if !(p[0].is_finite() && p[1].is_finite()) {
            return Err(Error::NonFinite);
        }
        if p[0] > reference[0] || p[1] > reference[1] {
            return Err(Error::PointBeyondReference { index });
        }
    }
    let mut pts = front.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut ceiling = reference[1];
    for p in pts {
        if p[1] < ceiling {
            area += (reference[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    Ok(area)
}
