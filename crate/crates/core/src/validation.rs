//! Randomized semi-analytical vs. brute-force comparison.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::{EvalPoint, FieldSolver, QuadratureSpec, TurnGeometry};
use crate::oracle::{oracle_br_turn, oracle_bz_turn, OracleSpec, DEFAULT_TARGET_REL};

/// Minimum distance between a random evaluation point and the conductor.
pub const MIN_CLEARANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationCase {
    pub turn: TurnGeometry,
    pub point: EvalPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub cases: usize,
    /// Worst of `|semi - oracle| / max(|oracle|, 1e-12 T)` over both
    /// components of every case.
    pub max_rel_dev: f64,
    pub worst_case: Option<ValidationCase>,
}

/// `|semi - oracle| / max(|oracle|, 1e-12 T)`.
pub fn relative_deviation(semi: f64, oracle: f64) -> f64 {
    (semi - oracle).abs() / oracle.abs().max(1e-12)
}

/// Draws a turn with radii in the benchmark range and an off-axis point at
/// least [`MIN_CLEARANCE`] away from it.
pub fn random_case<R: Rng>(rng: &mut R) -> ValidationCase {
    loop {
        let r1 = rng.random_range(0.005..0.05);
        let w = rng.random_range(0.0005..0.003);
        let z1 = rng.random_range(-0.01..0.01);
        let h = rng.random_range(0.0005..0.003);
        let current = rng.random_range(-10.0..10.0);
        let turn = TurnGeometry {
            r_inner: r1,
            r_outer: r1 + w,
            z_lower: z1,
            z_upper: z1 + h,
            current,
        };
        let point = EvalPoint {
            r: rng.random_range(1e-4..0.06),
            z: rng.random_range(-0.02..0.02),
        };
        if turn.distance_to(point) >= MIN_CLEARANCE {
            return ValidationCase { turn, point };
        }
    }
}

pub fn validate_random(
    samples: usize,
    seed: u64,
    quad: QuadratureSpec,
) -> Result<ValidationReport> {
    let solver = FieldSolver::new(quad)?;
    let spec = OracleSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ValidationReport {
        cases: 0,
        max_rel_dev: 0.0,
        worst_case: None,
    };
    for _ in 0..samples {
        let case = random_case(&mut rng);
        let (br, bz) = solver.turn_field(&case.turn, case.point)?;
        let obr = oracle_br_turn(&case.turn, case.point, &spec, DEFAULT_TARGET_REL)?;
        let obz = oracle_bz_turn(&case.turn, case.point, &spec, DEFAULT_TARGET_REL)?;
        let dev = relative_deviation(br, obr).max(relative_deviation(bz, obz));
        if dev >= report.max_rel_dev {
            report.max_rel_dev = dev;
            report.worst_case = Some(case);
        }
        report.cases += 1;
    }
    Ok(report)
}
