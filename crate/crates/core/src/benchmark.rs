//! The TEAM uniform-field coil problem.
//!
//! Twenty turns are stacked along the axis, ten above the midplane and their
//! mirror images below. The design vector holds the ten inner radii of the
//! upper half. Objectives:
//!
//! * `f1`: worst deviation `|B - B0|` over the sampled region of interest,
//!   with `B0 = (0, b0_target)`;
//! * `f2`: sum of the ten radii, a mass surrogate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{CoilLayout, EvalPoint, FieldSample, FieldSolver, QuadratureSpec, TurnGeometry};

/// Number of design radii (upper half of the symmetric coil).
pub const N_RADII: usize = 10;

/// Layout used to compare field solvers, radii in m.
pub const REFERENCE_RADII: [f64; N_RADII] = [
    0.00808, 0.0149, 0.00674, 0.0167, 0.00545, 0.0106, 0.0117, 0.0111, 0.01369, 0.00619,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignVector(Vec<f64>);

impl DesignVector {
    /// Checks length and bounds against `cfg`.
    pub fn new(radii: Vec<f64>, cfg: &BenchmarkConfig) -> Result<Self> {
        if radii.len() != N_RADII {
            return Err(Error::InvalidConfig(format!(
                "expected {N_RADII} radii, got {}",
                radii.len()
            )));
        }
        for (index, &value) in radii.iter().enumerate() {
            if !(value >= cfg.radius_min && value <= cfg.radius_max) {
                return Err(Error::OutOfBounds {
                    index,
                    value,
                    lo: cfg.radius_min,
                    hi: cfg.radius_max,
                });
            }
        }
        Ok(Self(radii))
    }

    pub fn reference() -> Self {
        Self(REFERENCE_RADII.to_vec())
    }

    pub fn radii(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub turn_width: f64,
    pub turn_height: f64,
    /// A/m²; total turn current is `current_density * width * height`.
    pub current_density: f64,
    /// Target axial flux density, T.
    pub b0_target: f64,
    /// Region of interest spans `r in [0, roi_half_width]`.
    pub roi_half_width: f64,
    /// Region of interest spans `z in [-roi_half_height, roi_half_height]`.
    pub roi_half_height: f64,
    pub roi_n_r: usize,
    pub roi_n_z: usize,
    pub quad: QuadratureSpec,
    pub radius_min: f64,
    pub radius_max: f64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            turn_width: 0.001,
            turn_height: 0.0015,
            current_density: 2.0e6,
            b0_target: 0.002,
            roi_half_width: 0.005,
            roi_half_height: 0.0025,
            roi_n_r: 5,
            roi_n_z: 5,
            quad: QuadratureSpec::default(),
            radius_min: 0.005,
            radius_max: 0.050,
        }
    }
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("turn_width", self.turn_width),
            ("turn_height", self.turn_height),
            ("roi_half_width", self.roi_half_width),
            ("roi_half_height", self.roi_half_height),
            ("radius_min", self.radius_min),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !self.current_density.is_finite() || !self.b0_target.is_finite() {
            return Err(Error::InvalidConfig(
                "current_density and b0_target must be finite".into(),
            ));
        }
        if !(self.radius_max.is_finite() && self.radius_max > self.radius_min) {
            return Err(Error::InvalidConfig(format!(
                "radius bounds [{}, {}] are empty",
                self.radius_min, self.radius_max
            )));
        }
        if self.roi_n_r < 2 || self.roi_n_z < 2 {
            return Err(Error::InvalidConfig(
                "roi grid needs at least 2x2 points".into(),
            ));
        }
        self.quad.validate()
    }

    pub fn turn_current(&self) -> f64 {
        self.current_density * self.turn_width * self.turn_height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectivePair {
    pub f1: f64,
    pub f2: f64,
}

/// Symmetric 20-turn layout: upper turn `k` occupies
/// `z in [(k-1) h, k h]`, followed by the ten mirrored turns.
pub fn decode_design(x: &DesignVector, cfg: &BenchmarkConfig) -> Result<CoilLayout> {
    let x = DesignVector::new(x.0.clone(), cfg)?;
    let h = cfg.turn_height;
    let current = cfg.turn_current();
    let mut turns = Vec::with_capacity(2 * N_RADII);
    for (k, &r) in x.radii().iter().enumerate() {
        turns.push(TurnGeometry::new(
            r,
            r + cfg.turn_width,
            k as f64 * h,
            (k + 1) as f64 * h,
            current,
        )?);
    }
    for (k, &r) in x.radii().iter().enumerate() {
        turns.push(TurnGeometry::new(
            r,
            r + cfg.turn_width,
            -((k + 1) as f64) * h,
            -(k as f64) * h,
            current,
        )?);
    }
    CoilLayout::new(turns)
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |i| if i == n - 1 { hi } else { lo + step * i as f64 })
}

/// Uniform `roi_n_r x roi_n_z` grid over the region of interest, boundary
/// included. Ordered by `r`, then `z`.
pub fn sample_roi(cfg: &BenchmarkConfig) -> Vec<EvalPoint> {
    linspace(0.0, cfg.roi_half_width, cfg.roi_n_r)
        .flat_map(|r| {
            linspace(-cfg.roi_half_height, cfg.roi_half_height, cfg.roi_n_z)
                .map(move |z| EvalPoint { r, z })
        })
        .collect()
}

fn deviation(s: &FieldSample, b0: f64) -> f64 {
    s.b_r.hypot(s.b_z - b0)
}

/// `max_q |B(q) - (0, b0_target)|`.
pub fn objective_f1(
    layout: &CoilLayout,
    points: &[EvalPoint],
    cfg: &BenchmarkConfig,
) -> Result<f64> {
    let solver = FieldSolver::new(cfg.quad)?;
    f1_with(&solver, layout, points, cfg.b0_target)
}

fn f1_with(
    solver: &FieldSolver,
    layout: &CoilLayout,
    points: &[EvalPoint],
    b0: f64,
) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidConfig("no sample points".into()));
    }
    let mut worst: f64 = 0.0;
    for &p in points {
        worst = worst.max(deviation(&solver.field(layout, p)?, b0));
    }
    Ok(worst)
}

/// Sum of radii.
pub fn objective_f2(x: &DesignVector) -> f64 {
    x.radii().iter().sum()
}

pub fn evaluate(x: &DesignVector, cfg: &BenchmarkConfig) -> Result<ObjectivePair> {
    Benchmark::new(*cfg)?.evaluate(x)
}

/// `n` equally spaced samples on the segment `(r, z_min) -> (r, z_max)`.
pub fn line_profile(
    layout: &CoilLayout,
    r_fixed: f64,
    z_min: f64,
    z_max: f64,
    n: usize,
    quad: &QuadratureSpec,
) -> Result<Vec<FieldSample>> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "profile needs n >= 2, got {n}"
        )));
    }
    let solver = FieldSolver::new(*quad)?;
    linspace(z_min, z_max, n)
        .map(|z| solver.field(layout, EvalPoint::new(r_fixed, z)?))
        .collect()
}

/// Configured problem instance; reuses the azimuthal rule and ROI grid
/// across evaluations.
#[derive(Debug, Clone)]
pub struct Benchmark {
    cfg: BenchmarkConfig,
    solver: FieldSolver,
    points: Vec<EvalPoint>,
}

impl Benchmark {
    pub fn new(cfg: BenchmarkConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            solver: FieldSolver::new(cfg.quad)?,
            points: sample_roi(&cfg),
            cfg,
        })
    }

    pub fn config(&self) -> &BenchmarkConfig {
        &self.cfg
    }

    pub fn points(&self) -> &[EvalPoint] {
        &self.points
    }

    pub fn solver(&self) -> &FieldSolver {
        &self.solver
    }

    pub fn evaluate(&self, x: &DesignVector) -> Result<ObjectivePair> {
        let layout = decode_design(x, &self.cfg)?;
        Ok(ObjectivePair {
            f1: f1_with(&self.solver, &layout, &self.points, self.cfg.b0_target)?,
            f2: objective_f2(x),
        })
    }

    /// Evaluates raw genes; used as the optimizer callback.
    pub fn evaluate_genes(&self, genes: &[f64]) -> Result<Vec<f64>> {
        let x = DesignVector::new(genes.to_vec(), &self.cfg)?;
        let o = self.evaluate(&x)?;
        Ok(vec![o.f1, o.f2])
    }

    /// Per-gene search bounds.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        vec![(self.cfg.radius_min, self.cfg.radius_max); N_RADII]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> BenchmarkConfig {
        BenchmarkConfig::default()
    }

    #[test]
    fn decode_lower_bound_design() {
        let x = DesignVector::new(vec![0.005; N_RADII], &cfg()).unwrap();
        let layout = decode_design(&x, &cfg()).unwrap();
        assert_eq!(layout.len(), 20);
        for t in layout.turns() {
            assert!((t.current - 3.0).abs() < 1e-12);
            assert_eq!(t.r_inner, 0.005);
        }
    }

    #[test]
    fn decode_reference_design() {
        let layout = decode_design(&DesignVector::reference(), &cfg()).unwrap();
        let t = layout.turns()[0];
        assert_eq!(t.r_inner, 0.00808);
        assert!((t.r_outer - 0.00908).abs() < 1e-15);
        assert_eq!((t.z_lower, t.z_upper), (0.0, 0.0015));
        let m = layout.turns()[10];
        assert_eq!(m.r_inner, 0.00808);
        assert_eq!((m.z_lower, m.z_upper), (-0.0015, 0.0));
        let top = layout.turns()[9];
        assert!((top.z_upper - 0.015).abs() < 1e-15);
    }

    #[test]
    fn decode_rejects_out_of_bounds() {
        let mut r = vec![0.01; N_RADII];
        r[3] = 0.06;
        let err = DesignVector::new(r, &cfg()).unwrap_err();
        assert!(matches!(err, Error::OutOfBounds { index: 3, .. }));
        assert!(DesignVector::new(vec![0.01; 9], &cfg()).is_err());
    }

    #[test]
    fn roi_grids() {
        let mut c = cfg();
        c.roi_n_r = 2;
        c.roi_n_z = 2;
        let pts = sample_roi(&c);
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0], EvalPoint { r: 0.0, z: -0.0025 });
        assert_eq!(
            pts[3],
            EvalPoint {
                r: 0.005,
                z: 0.0025
            }
        );

        let pts = sample_roi(&cfg());
        assert_eq!(pts.len(), 25);
        assert!((pts[5].r - 0.00125).abs() < 1e-18);
        assert!((pts[1].z - pts[0].z - 0.00125).abs() < 1e-18);
        let lo = decode_design(
            &DesignVector::new(vec![0.005; N_RADII], &cfg()).unwrap(),
            &cfg(),
        )
        .unwrap();
        for p in &pts {
            // at worst touching the innermost conductor surface
            assert!(p.r <= lo.turns()[0].r_inner);
        }
    }

    #[test]
    fn f1_of_zero_current_is_target() {
        let mut c = cfg();
        c.current_density = 0.0;
        let x = DesignVector::reference();
        let layout = decode_design(&x, &c).unwrap();
        assert_eq!(objective_f1(&layout, &sample_roi(&c), &c).unwrap(), 0.002);
    }

    #[test]
    fn f1_of_perfect_field_is_zero() {
        let s = FieldSample {
            point: EvalPoint { r: 0.0, z: 0.0 },
            b_r: 0.0,
            b_z: 0.002,
        };
        assert_eq!(deviation(&s, 0.002), 0.0);
    }

    #[test]
    fn f2_examples() {
        let lo = DesignVector::new(vec![0.005; N_RADII], &cfg()).unwrap();
        let hi = DesignVector::new(vec![0.05; N_RADII], &cfg()).unwrap();
        assert!((objective_f2(&lo) - 0.05).abs() < 1e-15);
        assert!((objective_f2(&hi) - 0.5).abs() < 1e-15);
        assert!((objective_f2(&DesignVector::reference()) - 0.10515).abs() < 1e-15);
    }

    #[test]
    fn evaluate_is_deterministic_and_monotone_in_f2() {
        let b = Benchmark::new(cfg()).unwrap();
        let x = DesignVector::reference();
        let a = b.evaluate(&x).unwrap();
        let c = b.evaluate(&x).unwrap();
        assert_eq!(a.f1.to_bits(), c.f1.to_bits());
        assert_eq!(a.f2.to_bits(), c.f2.to_bits());
        let lo = b
            .evaluate(&DesignVector::new(vec![0.005; N_RADII], &cfg()).unwrap())
            .unwrap();
        let hi = b
            .evaluate(&DesignVector::new(vec![0.05; N_RADII], &cfg()).unwrap())
            .unwrap();
        assert!(hi.f2 > lo.f2);
        assert_eq!(evaluate(&x, &cfg()).unwrap(), a);
    }

    #[test]
    fn mirrored_layout_has_no_radial_field_on_midplane() {
        let layout = decode_design(&DesignVector::reference(), &cfg()).unwrap();
        let solver = FieldSolver::new(QuadratureSpec::default()).unwrap();
        for r in [0.0, 0.001, 0.003, 0.0049] {
            let s = solver.field(&layout, EvalPoint { r, z: 0.0 }).unwrap();
            assert!(s.b_r.abs() <= 1e-14 * s.b_z.abs(), "r={r}: {s:?}");
        }
    }

    #[test]
    fn profile_endpoints_and_symmetry() {
        let layout = decode_design(&DesignVector::reference(), &cfg()).unwrap();
        let q = QuadratureSpec::default();
        let two = line_profile(&layout, 0.003, -0.0025, 0.0025, 2, &q).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].point.z, -0.0025);
        assert_eq!(two[1].point.z, 0.0025);
        let prof = line_profile(&layout, 0.003, -0.005, 0.005, 20, &q).unwrap();
        for (a, b) in prof.iter().zip(prof.iter().rev()) {
            assert!((a.b_z - b.b_z).abs() <= 1e-10 * a.b_z.abs());
            assert!((a.b_r + b.b_r).abs() <= 1e-10 * a.b_r.abs().max(1e-12));
        }
        assert!(line_profile(&layout, 0.003, 0.0, 1.0, 1, &q).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.roi_n_r = 1;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.radius_max = c.radius_min;
        assert!(c.validate().is_err());
        assert!(cfg().validate().is_ok());
    }
}
