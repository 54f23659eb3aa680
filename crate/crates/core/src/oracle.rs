//! Brute-force reference fields.
//!
//! Tensor-product Gauss–Legendre over the raw volume integrals (no analytic
//! reduction), refined by doubling every node count until two successive
//! estimates agree. Slow on purpose; used to check [`crate::field`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{constant_c, EvalPoint, TurnGeometry, MU0};
use crate::quadrature::GaussLegendre;

pub const DEFAULT_TARGET_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub nodes_r: usize,
    pub nodes_z: usize,
    pub nodes_phi: usize,
    /// Maximum number of doublings.
    pub refinement_limit: usize,
}

impl Default for OracleSpec {
    fn default() -> Self {
        Self {
            nodes_r: 16,
            nodes_z: 16,
            nodes_phi: 64,
            refinement_limit: 4,
        }
    }
}

impl OracleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_r < 2 || self.nodes_z < 2 || self.nodes_phi < 2 || self.refinement_limit < 1 {
            return Err(Error::InvalidQuadrature(format!(
                "bad oracle spec {self:?}"
            )));
        }
        Ok(())
    }

    fn level(&self, k: usize) -> (usize, usize, usize) {
        (self.nodes_r << k, self.nodes_z << k, self.nodes_phi << k)
    }
}

/// A converged oracle value with its refinement trail.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    /// `|estimate_k+1 - estimate_k|` for each refinement performed.
    pub deltas: Vec<f64>,
}

/// Runs `eval(level)` -> (estimate, L1 scale) until two successive
/// estimates agree to `target_rel`. The L1 scale keeps values that
/// legitimately vanish (cos-weighted integrals on the axis) from never
/// converging.
fn refine<F>(spec: &OracleSpec, target_rel: f64, mut eval: F) -> Result<OracleEstimate>
where
    F: FnMut(usize, usize, usize) -> (f64, f64),
{
    spec.validate()?;
    let (nr, nz, np) = spec.level(0);
    let (mut prev, _) = eval(nr, nz, np);
    let mut deltas = Vec::new();
    let mut last_rel = f64::INFINITY;
    for k in 1..=spec.refinement_limit {
        let (nr, nz, np) = spec.level(k);
        let (cur, l1) = eval(nr, nz, np);
        let delta = (cur - prev).abs();
        deltas.push(delta);
        let scale = cur.abs().max(1e-3 * l1);
        last_rel = delta / scale.max(f64::MIN_POSITIVE);
        if delta <= target_rel * scale {
            return Ok(OracleEstimate { value: cur, deltas });
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        levels: spec.refinement_limit,
        last_rel,
    })
}

fn check_exterior(turn: &TurnGeometry, p: EvalPoint) -> Result<()> {
    turn.validate()?;
    if turn.distance_to(p) <= 10.0 * crate::field::EPS_LOG {
        return Err(Error::InvalidPoint(format!(
            "({}, {}) is not outside the conductor",
            p.r, p.z
        )));
    }
    Ok(())
}

/// `int int int kernel(r, z, cos(phi)) dz dr dphi` over the turn volume,
/// plus the matching L1 norm. The `r` of `dV` cancels the `1/r` density,
/// so kernels carry no extra `r` factor.
fn integrate_volume<F>(
    turn: &TurnGeometry,
    nr: usize,
    nz: usize,
    np: usize,
    kernel: F,
) -> (f64, f64)
where
    F: Fn(f64, f64, f64) -> f64,
{
    let gr = GaussLegendre::new(nr);
    let gz = GaussLegendre::new(nz);
    let gp = GaussLegendre::new(np);
    let phis: Vec<(f64, f64)> = gp
        .mapped(0.0, 2.0 * PI)
        .map(|(phi, w)| (phi.cos(), w))
        .collect();
    let mut acc = 0.0;
    let mut l1 = 0.0;
    for (r, wr) in gr.mapped(turn.r_inner, turn.r_outer) {
        for (z, wz) in gz.mapped(turn.z_lower, turn.z_upper) {
            let w_rz = wr * wz;
            for &(cos, wp) in &phis {
                let v = w_rz * wp * kernel(r, z, cos);
                acc += v;
                l1 += v.abs();
            }
        }
    }
    (acc, l1)
}

pub fn oracle_br_turn_detailed(
    turn: &TurnGeometry,
    p: EvalPoint,
    spec: &OracleSpec,
    target_rel: f64,
) -> Result<OracleEstimate> {
    check_exterior(turn, p)?;
    let c = constant_c(turn)?;
    let (big_r, big_z) = (p.r, p.z);
    let est = refine(spec, target_rel, |nr, nz, np| {
        integrate_volume(turn, nr, nz, np, |r, z, cos| {
            let dz = big_z - z;
            let l2 = r * r + big_r * big_r - 2.0 * r * big_r * cos + dz * dz;
            dz * cos / (l2 * l2.sqrt())
        })
    })?;
    Ok(OracleEstimate {
        value: c * est.value,
        deltas: est.deltas.iter().map(|d| d * c.abs()).collect(),
    })
}

/// Radial flux density by direct triple integration.
pub fn oracle_br_turn(
    turn: &TurnGeometry,
    p: EvalPoint,
    spec: &OracleSpec,
    target_rel: f64,
) -> Result<f64> {
    Ok(oracle_br_turn_detailed(turn, p, spec, target_rel)?.value)
}

pub fn oracle_bz_turn_detailed(
    turn: &TurnGeometry,
    p: EvalPoint,
    spec: &OracleSpec,
    target_rel: f64,
) -> Result<OracleEstimate> {
    if p.r == 0.0 {
        return Err(Error::AxisPoint);
    }
    check_exterior(turn, p)?;
    let c = constant_c(turn)?;
    let (big_r, big_z) = (p.r, p.z);
    let est = refine(spec, target_rel, |nr, nz, np| {
        integrate_volume(turn, nr, nz, np, |r, z, cos| {
            let dz = big_z - z;
            let l2 = r * r + big_r * big_r - 2.0 * r * big_r * cos + dz * dz;
            (r * (r - big_r * cos) + dz * dz) * cos / (l2 * l2.sqrt())
        })
    })?;
    let k = c / big_r;
    Ok(OracleEstimate {
        value: k * est.value,
        deltas: est.deltas.iter().map(|d| d * k.abs()).collect(),
    })
}

/// Axial flux density by direct triple integration. Off-axis only; the
/// `1/R` prefactor is singular at `R = 0`, see [`oracle_bz_axis`].
pub fn oracle_bz_turn(
    turn: &TurnGeometry,
    p: EvalPoint,
    spec: &OracleSpec,
    target_rel: f64,
) -> Result<f64> {
    Ok(oracle_bz_turn_detailed(turn, p, spec, target_rel)?.value)
}

/// On-axis axial flux density: each filament `(r, z)` of the cross section
/// is an ideal loop carrying `J(r) dr dz`, so
/// `Bz = 2 pi C int int r / (r^2 + (Z - z)^2)^(3/2) dr dz`.
pub fn oracle_bz_axis(
    turn: &TurnGeometry,
    z: f64,
    spec: &OracleSpec,
    target_rel: f64,
) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::InvalidPoint(format!("z = {z}")));
    }
    let c = constant_c(turn)?;
    let est = refine(spec, target_rel, |nr, nz, _| {
        let gr = GaussLegendre::new(nr);
        let gz = GaussLegendre::new(nz);
        let mut acc = 0.0;
        for (r, wr) in gr.mapped(turn.r_inner, turn.r_outer) {
            for (zz, wz) in gz.mapped(turn.z_lower, turn.z_upper) {
                let dz = z - zz;
                let l2 = r * r + dz * dz;
                acc += wr * wz * r / (l2 * l2.sqrt());
            }
        }
        (acc, acc.abs())
    })?;
    Ok(2.0 * PI * c * est.value)
}

/// `mu0 I a^2 / (2 (a^2 + z^2)^(3/2))` for an ideal filament loop.
pub fn loop_field_onaxis(a: f64, current: f64, z: f64) -> f64 {
    let s = a * a + z * z;
    MU0 * current * a * a / (2.0 * s * s.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_turn() -> TurnGeometry {
        TurnGeometry::new(0.00808, 0.00908, 0.0, 0.0015, 3.0).unwrap()
    }

    #[test]
    fn ideal_loop_values() {
        assert!((loop_field_onaxis(1.0, 1.0, 0.0) - 2.0 * PI * 1e-7).abs() < 1e-20);
        let a = 0.02;
        assert!((loop_field_onaxis(a, 2.0, 0.0) - MU0 * 2.0 / (2.0 * a)).abs() < 1e-18);
        let ratio = loop_field_onaxis(a, 1.0, 10.0 * a) / loop_field_onaxis(a, 1.0, 20.0 * a);
        // (401/101)^(3/2) = 7.911..., tending to 8 as z/a grows
        assert!(
            (ratio - (401.0f64 / 101.0).powf(1.5)).abs() < 1e-12,
            "{ratio}"
        );
        assert!((ratio - 8.0).abs() < 0.12);
        let far = loop_field_onaxis(a, 1.0, 1000.0 * a) / loop_field_onaxis(a, 1.0, 2000.0 * a);
        assert!((far - 8.0).abs() < 8e-5);
    }

    #[test]
    fn br_vanishes_on_axis() {
        let t = reference_turn();
        let spec = OracleSpec::default();
        let br = oracle_br_turn(&t, EvalPoint::new(0.0, 0.004).unwrap(), &spec, 1e-9).unwrap();
        let bz = oracle_bz_axis(&t, 0.004, &spec, 1e-9).unwrap();
        assert!(br.abs() <= 1e-9 * bz.abs(), "{br} {bz}");
    }

    #[test]
    fn br_odd_about_midplane_and_current() {
        let t = reference_turn();
        let spec = OracleSpec::default();
        let zm = t.mid_z();
        let up =
            oracle_br_turn(&t, EvalPoint::new(0.003, zm + 0.002).unwrap(), &spec, 1e-9).unwrap();
        let dn =
            oracle_br_turn(&t, EvalPoint::new(0.003, zm - 0.002).unwrap(), &spec, 1e-9).unwrap();
        assert!((up + dn).abs() <= 1e-9 * up.abs());
        let rev = t.with_current(-3.0);
        let p = EvalPoint::new(0.003, 0.004).unwrap();
        let a = oracle_bz_turn(&t, p, &spec, 1e-9).unwrap();
        let b = oracle_bz_turn(&rev, p, &spec, 1e-9).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn axis_point_is_rejected_for_off_axis_formula() {
        let t = reference_turn();
        let err = oracle_bz_turn(
            &t,
            EvalPoint::new(0.0, 0.0).unwrap(),
            &OracleSpec::default(),
            1e-9,
        );
        assert!(matches!(err, Err(Error::AxisPoint)));
    }

    #[test]
    fn interior_point_is_rejected() {
        let t = reference_turn();
        let p = EvalPoint::new(0.0085, 0.0007).unwrap();
        assert!(oracle_br_turn(&t, p, &OracleSpec::default(), 1e-9).is_err());
    }

    #[test]
    fn no_convergence_is_reported() {
        let t = reference_turn();
        let spec = OracleSpec {
            nodes_r: 2,
            nodes_z: 2,
            nodes_phi: 2,
            refinement_limit: 1,
        };
        let err = oracle_br_turn(&t, EvalPoint::new(0.003, 0.004).unwrap(), &spec, 1e-12);
        assert!(matches!(err, Err(Error::NoConvergence { levels: 1, .. })));
    }

    #[test]
    fn axis_oracle_thin_limit_and_maximum() {
        let a = 0.01;
        let e = a / 1000.0;
        let thin = TurnGeometry::new(a - e / 2.0, a + e / 2.0, -e / 2.0, e / 2.0, 1.0).unwrap();
        let bz = oracle_bz_axis(&thin, 0.0, &OracleSpec::default(), 1e-9).unwrap();
        assert!((bz / loop_field_onaxis(a, 1.0, 0.0) - 1.0).abs() < 1e-3);

        let t = reference_turn();
        let spec = OracleSpec::default();
        let center = oracle_bz_axis(&t, t.mid_z(), &spec, 1e-9).unwrap();
        for dz in [0.0005, 0.002, 0.01] {
            assert!(oracle_bz_axis(&t, t.mid_z() + dz, &spec, 1e-9).unwrap() < center);
            assert!(oracle_bz_axis(&t, t.mid_z() - dz, &spec, 1e-9).unwrap() < center);
        }
    }

    #[test]
    fn refinement_deltas_shrink() {
        let t = reference_turn();
        let p = EvalPoint::new(0.003, 0.004).unwrap();
        let spec = OracleSpec::default();
        for est in [
            oracle_br_turn_detailed(&t, p, &spec, 1e-12).unwrap(),
            oracle_bz_turn_detailed(&t, p, &spec, 1e-12).unwrap(),
        ] {
            for w in est.deltas.windows(2) {
                assert!(w[1] < w[0], "{:?}", est.deltas);
            }
        }
    }
}
