//! Flux density of massive circular turns of rectangular cross section.
//!
//! Each turn carries a circumferential current density proportional to
//! `1/r`. Integrating the Biot–Savart volume integral analytically over `r`
//! and `z` leaves one smooth integral over the azimuth `phi`:
//!
//! ```text
//! Br = C * [g(R2, Z2-Z) - g(R2, Z1-Z) - g(R1, Z2-Z) + g(R1, Z1-Z)]
//! Bz = C * [h(R2, Z2-Z) - h(R2, Z1-Z) - h(R1, Z2-Z) + h(R1, Z1-Z)]
//!
//! g(Ra, u) =  int_0^2pi ln(Ra - R cos(phi) + d) cos(phi) dphi
//! h(Ra, u) = -int_0^2pi ln(u + d) dphi
//! d        =  sqrt(Ra^2 + R^2 - 2 Ra R cos(phi) + u^2)
//! C        =  mu0 I / (4 pi (Z2 - Z1) ln(R2 / R1))
//! ```
//!
//! The `phi` integral is done with composite Gauss–Legendre. Both log
//! arguments have the shape `x + sqrt(x^2 + y^2)`; for `x < 0` they are
//! rewritten as `y^2 / (sqrt(x^2 + y^2) - x)` so that nothing cancels, and
//! the `ln(y^2)` part, which is shared between the two corners along a
//! turn edge, is dropped from the four-corner sums whenever it cancels.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::CompositeRule;

/// Vacuum permeability, T·m/A.
pub const MU0: f64 = 4.0e-7 * PI;

/// Log arguments at or below this value (m) are reported as singular.
pub const EPS_LOG: f64 = 1e-14;

/// One massive circular turn with rectangular cross section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnGeometry {
    pub r_inner: f64,
    pub r_outer: f64,
    pub z_lower: f64,
    pub z_upper: f64,
    /// Total current through the cross section, A.
    pub current: f64,
}

impl TurnGeometry {
    pub fn new(
        r_inner: f64,
        r_outer: f64,
        z_lower: f64,
        z_upper: f64,
        current: f64,
    ) -> Result<Self> {
        let turn = Self {
            r_inner,
            r_outer,
            z_lower,
            z_upper,
            current,
        };
        turn.validate()?;
        Ok(turn)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.r_inner,
            self.r_outer,
            self.z_lower,
            self.z_upper,
            self.current,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "non-finite field in {self:?}"
            )));
        }
        if !(self.r_inner > 0.0 && self.r_inner < self.r_outer) {
            return Err(Error::InvalidGeometry(format!(
                "need 0 < r_inner < r_outer, got [{}, {}]",
                self.r_inner, self.r_outer
            )));
        }
        if self.z_lower.partial_cmp(&self.z_upper) != Some(std::cmp::Ordering::Less) {
            return Err(Error::InvalidGeometry(format!(
                "need z_lower < z_upper, got [{}, {}]",
                self.z_lower, self.z_upper
            )));
        }
        Ok(())
    }

    pub fn mid_z(&self) -> f64 {
        0.5 * (self.z_lower + self.z_upper)
    }

    pub fn with_current(mut self, current: f64) -> Self {
        self.current = current;
        self
    }

    /// Euclidean distance in the (r, z) half-plane from `p` to the cross
    /// section; zero inside or on the boundary.
    pub fn distance_to(&self, p: EvalPoint) -> f64 {
        let dr = (self.r_inner - p.r).max(0.0).max(p.r - self.r_outer);
        let dz = (self.z_lower - p.z).max(0.0).max(p.z - self.z_upper);
        dr.hypot(dz)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub r: f64,
    pub z: f64,
}

impl EvalPoint {
    pub fn new(r: f64, z: f64) -> Result<Self> {
        if !r.is_finite() || !z.is_finite() || r < 0.0 {
            return Err(Error::InvalidPoint(format!(
                "need finite r >= 0, got ({r}, {z})"
            )));
        }
        Ok(Self { r, z })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub point: EvalPoint,
    pub b_r: f64,
    pub b_z: f64,
}

/// Composite Gauss–Legendre rule over `[0, 2pi]` for the azimuthal integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes_per_subinterval: usize,
    pub subintervals: usize,
}

impl QuadratureSpec {
    pub fn new(nodes_per_subinterval: usize, subintervals: usize) -> Result<Self> {
        let q = Self {
            nodes_per_subinterval,
            subintervals,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_subinterval < 2 || self.subintervals < 1 {
            return Err(Error::InvalidQuadrature(format!(
                "need nodes >= 2 and subintervals >= 1, got {}x{}",
                self.nodes_per_subinterval, self.subintervals
            )));
        }
        Ok(())
    }

    /// Same panels, twice the nodes per panel.
    pub fn doubled(&self) -> Self {
        Self {
            nodes_per_subinterval: 2 * self.nodes_per_subinterval,
            subintervals: self.subintervals,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes_per_subinterval: 32,
            subintervals: 4,
        }
    }
}

/// Coaxial turns whose fields superpose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoilLayout {
    turns: Vec<TurnGeometry>,
}

impl CoilLayout {
    pub fn new(turns: Vec<TurnGeometry>) -> Result<Self> {
        if turns.is_empty() {
            return Err(Error::InvalidGeometry("layout has no turns".into()));
        }
        for (index, t) in turns.iter().enumerate() {
            t.validate().map_err(|e| Error::Turn {
                index,
                source: Box::new(e),
            })?;
        }
        Ok(Self { turns })
    }

    pub fn turns(&self) -> &[TurnGeometry] {
        &self.turns
    }

    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }

    /// Every current multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            turns: self
                .turns
                .iter()
                .map(|t| t.with_current(t.current * k))
                .collect(),
        }
    }

    /// Smallest distance from `p` to any conductor cross section.
    pub fn distance_to(&self, p: EvalPoint) -> f64 {
        self.turns
            .iter()
            .map(|t| t.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `mu0 I / (4 pi (Z2 - Z1) ln(R2 / R1))`.
pub fn constant_c(turn: &TurnGeometry) -> Result<f64> {
    turn.validate()?;
    let ln_ratio = (turn.r_outer / turn.r_inner).ln();
    let height = turn.z_upper - turn.z_lower;
    if ln_ratio == 0.0 || height == 0.0 {
        return Err(Error::InvalidGeometry("degenerate cross section".into()));
    }
    Ok(MU0 * turn.current / (4.0 * PI * height * ln_ratio))
}

/// `sqrt(r_a^2 + r_eval^2 - 2 r_a r_eval cos(phi) + dz^2)`.
pub fn distance_kernel(r_a: f64, r_eval: f64, dz: f64, phi: f64) -> f64 {
    (r_a * r_a + r_eval * r_eval - 2.0 * r_a * r_eval * phi.cos() + dz * dz)
        .max(0.0)
        .sqrt()
}

#[derive(Debug, Clone, Copy)]
struct PhiNode {
    phi: f64,
    weight: f64,
    cos: f64,
    sin2: f64,
    /// `1 - cos(phi)`, computed as `2 sin^2(phi/2)`.
    one_minus_cos: f64,
}

/// `ln(x + sqrt(x^2 + y2))` split as `regular + [singular] * ln(y2)`.
#[derive(Debug, Clone, Copy)]
struct LogTerm {
    regular: f64,
    singular: bool,
    /// The log argument itself.
    arg: f64,
}

impl LogTerm {
    fn new(x: f64, y2: f64) -> Self {
        let d = (x * x + y2).sqrt();
        if x >= 0.0 {
            let arg = x + d;
            Self {
                regular: arg.ln(),
                singular: false,
                arg,
            }
        } else {
            let t = d - x;
            Self {
                regular: -t.ln(),
                singular: true,
                arg: y2 / t,
            }
        }
    }

    fn full(&self, y2: f64) -> f64 {
        if self.singular {
            self.regular + y2.ln()
        } else {
            self.regular
        }
    }
}

/// Field evaluator with the azimuthal rule precomputed.
#[derive(Debug, Clone)]
pub struct FieldSolver {
    spec: QuadratureSpec,
    nodes: Vec<PhiNode>,
}

impl FieldSolver {
    pub fn new(spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let rule = CompositeRule::new(spec.nodes_per_subinterval, spec.subintervals);
        // Integrands depend on phi only through cos(phi) and sin^2(phi), so
        // with an even panel count the [pi, 2pi] half mirrors [0, pi].
        let pts = if spec.subintervals.is_multiple_of(2) {
            let half = CompositeRule::new(spec.nodes_per_subinterval, spec.subintervals / 2);
            half.points(0.0, PI)
                .into_iter()
                .map(|(x, w)| (x, 2.0 * w))
                .collect()
        } else {
            rule.points(0.0, 2.0 * PI)
        };
        let nodes = pts
            .into_iter()
            .map(|(phi, weight)| {
                let s = phi.sin();
                let sh = (0.5 * phi).sin();
                PhiNode {
                    phi,
                    weight,
                    cos: phi.cos(),
                    sin2: s * s,
                    one_minus_cos: 2.0 * sh * sh,
                }
            })
            .collect();
        Ok(Self { spec, nodes })
    }

    pub fn spec(&self) -> QuadratureSpec {
        self.spec
    }

    /// `r_a - r cos(phi)` without cancellation when `r_a ~ r`.
    #[inline]
    fn radial_offset(r_a: f64, r: f64, node: &PhiNode) -> f64 {
        (r_a - r) + r * node.one_minus_cos
    }

    pub fn g(&self, r_a: f64, r_eval: f64, dz: f64) -> Result<f64> {
        if r_eval == 0.0 {
            return Ok(0.0);
        }
        let mut acc = 0.0;
        for n in &self.nodes {
            let y2 = r_eval * r_eval * n.sin2 + dz * dz;
            let t = LogTerm::new(Self::radial_offset(r_a, r_eval, n), y2);
            if t.arg <= EPS_LOG {
                return Err(corner(r_a, r_eval, dz, n.phi));
            }
            acc += n.weight * t.full(y2) * n.cos;
        }
        Ok(acc)
    }

    pub fn h(&self, r_a: f64, r_eval: f64, dz: f64) -> Result<f64> {
        if r_eval == 0.0 {
            let t = LogTerm::new(dz, r_a * r_a);
            if t.arg <= EPS_LOG {
                return Err(corner(r_a, r_eval, dz, 0.0));
            }
            return Ok(-2.0 * PI * t.full(r_a * r_a));
        }
        let mut acc = 0.0;
        for n in &self.nodes {
            let x = Self::radial_offset(r_a, r_eval, n);
            let rho2 = x * x + r_eval * r_eval * n.sin2;
            let t = LogTerm::new(dz, rho2);
            if t.arg <= EPS_LOG {
                return Err(corner(r_a, r_eval, dz, n.phi));
            }
            acc -= n.weight * t.full(rho2);
        }
        Ok(acc)
    }

    /// `(Br, Bz)` of one turn at `p`.
    pub fn turn_field(&self, turn: &TurnGeometry, p: EvalPoint) -> Result<(f64, f64)> {
        let c = constant_c(turn)?;
        if c == 0.0 {
            return Ok((0.0, 0.0));
        }
        let (br, bz) = self.turn_sums(turn, p)?;
        Ok((c * br, c * bz))
    }

    /// Four-corner g and h combinations without the constant C.
    fn turn_sums(&self, turn: &TurnGeometry, p: EvalPoint) -> Result<(f64, f64)> {
        let r = p.r;
        let u_hi = turn.z_upper - p.z;
        let u_lo = turn.z_lower - p.z;
        let (ro, ri) = (turn.r_outer, turn.r_inner);

        if r == 0.0 {
            // d does not depend on phi on the axis.
            let h = |ra: f64, u: f64| -> Result<f64> {
                let t = LogTerm::new(u, ra * ra);
                if t.arg <= EPS_LOG {
                    return Err(corner(ra, r, u, 0.0));
                }
                Ok(-2.0 * PI * t.full(ra * ra))
            };
            let bz = (h(ro, u_hi)? - h(ro, u_lo)?) - (h(ri, u_hi)? - h(ri, u_lo)?);
            return Ok((0.0, bz));
        }

        let r2 = r * r;
        let mut br = 0.0;
        let mut bz = 0.0;
        for n in &self.nodes {
            let xo = Self::radial_offset(ro, r, n);
            let xi = Self::radial_offset(ri, r, n);
            let rs2 = r2 * n.sin2;

            // g: ln(x_a + sqrt(x_a^2 + y2_u)), y2_u = r^2 sin^2 + u^2
            let mut g_sum = 0.0;
            for (u, sign) in [(u_hi, 1.0), (u_lo, -1.0)] {
                let y2 = rs2 + u * u;
                let to = LogTerm::new(xo, y2);
                let ti = LogTerm::new(xi, y2);
                let mut diff = to.regular - ti.regular;
                if to.singular != ti.singular {
                    let (s, ra) = if to.singular { (1.0, ro) } else { (-1.0, ri) };
                    let t = if to.singular { to } else { ti };
                    if t.arg <= EPS_LOG {
                        return Err(corner(ra, r, u, n.phi));
                    }
                    diff += s * y2.ln();
                }
                for (t, ra) in [(to, ro), (ti, ri)] {
                    if !t.singular && t.arg <= EPS_LOG {
                        return Err(corner(ra, r, u, n.phi));
                    }
                }
                g_sum += sign * diff;
            }
            br += n.weight * g_sum * n.cos;

            // h: ln(u + sqrt(u^2 + rho2_a)), rho2_a = x_a^2 + r^2 sin^2
            let mut h_sum = 0.0;
            for (x, ra, sign) in [(xo, ro, 1.0), (xi, ri, -1.0)] {
                let rho2 = x * x + rs2;
                let th = LogTerm::new(u_hi, rho2);
                let tl = LogTerm::new(u_lo, rho2);
                let mut diff = th.regular - tl.regular;
                if th.singular != tl.singular {
                    let (s, t, u) = if th.singular {
                        (1.0, th, u_hi)
                    } else {
                        (-1.0, tl, u_lo)
                    };
                    if t.arg <= EPS_LOG {
                        return Err(corner(ra, r, u, n.phi));
                    }
                    diff += s * rho2.ln();
                }
                for (t, u) in [(th, u_hi), (tl, u_lo)] {
                    if !t.singular && t.arg <= EPS_LOG {
                        return Err(corner(ra, r, u, n.phi));
                    }
                }
                h_sum -= sign * diff;
            }
            bz += n.weight * h_sum;
        }
        Ok((br, bz))
    }

    pub fn br_turn(&self, turn: &TurnGeometry, p: EvalPoint) -> Result<f64> {
        Ok(self.turn_field(turn, p)?.0)
    }

    pub fn bz_turn(&self, turn: &TurnGeometry, p: EvalPoint) -> Result<f64> {
        Ok(self.turn_field(turn, p)?.1)
    }

    /// Superposition over all turns of `layout`.
    pub fn field(&self, layout: &CoilLayout, p: EvalPoint) -> Result<FieldSample> {
        let mut b_r = 0.0;
        let mut b_z = 0.0;
        for (index, turn) in layout.turns().iter().enumerate() {
            let (br, bz) = self.turn_field(turn, p).map_err(|e| Error::Turn {
                index,
                source: Box::new(e),
            })?;
            b_r += br;
            b_z += bz;
        }
        Ok(FieldSample { point: p, b_r, b_z })
    }
}

fn corner(r_a: f64, r_eval: f64, dz: f64, phi: f64) -> Error {
    Error::CornerSingularity {
        r_a,
        r_eval,
        dz,
        phi,
    }
}

/// `int_0^2pi ln(r_a - r_eval cos(phi) + d) cos(phi) dphi`, with `dz` the
/// signed axial offset of the corner from the evaluation point.
pub fn g_function(r_a: f64, r_eval: f64, dz_signed: f64, quad: &QuadratureSpec) -> Result<f64> {
    FieldSolver::new(*quad)?.g(r_a, r_eval, dz_signed)
}

/// `-int_0^2pi ln(z_corner - z + d) dphi`.
pub fn h_function(
    r_a: f64,
    r_eval: f64,
    z_corner_minus_z: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    FieldSolver::new(*quad)?.h(r_a, r_eval, z_corner_minus_z)
}

pub fn br_turn(turn: &TurnGeometry, p: EvalPoint, quad: &QuadratureSpec) -> Result<f64> {
    FieldSolver::new(*quad)?.br_turn(turn, p)
}

pub fn bz_turn(turn: &TurnGeometry, p: EvalPoint, quad: &QuadratureSpec) -> Result<f64> {
    FieldSolver::new(*quad)?.bz_turn(turn, p)
}

pub fn field_coil(layout: &CoilLayout, p: EvalPoint, quad: &QuadratureSpec) -> Result<FieldSample> {
    FieldSolver::new(*quad)?.field(layout, p)
}
