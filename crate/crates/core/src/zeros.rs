//! Argument-principle zero counting and localization in the disk,
//! multiplicity determination, and the deep-zero pipeline: locate the zeros
//! of the Wronskian, then certify each with a coefficient-vector witness
//! whose combination vanishes to order n+1 there.

use crate::eval::{DiskFunction, DiskFunctionDerivs};
use crate::poly::{exact_roots, ExactPoly, FloatPoly, RootConfig};
use crate::structured::{DerivativeTower, StructuredFunction};
use crate::wronskian::{
    independence_exact, independence_structured, nullspace_coefficients, wronskian_exact,
    wronskian_matrix_at, wronskian_structured, CoefficientVector,
};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ZeroError {
    #[error("contour stays too close to a zero after {0} radius adjustments")]
    ContourTooClose(usize),
    #[error("phase unwrapping did not converge within {nodes} nodes (worst step {worst_step:.3})")]
    UnwrapBudget { nodes: usize, worst_step: f64 },
    #[error("winding total {total:.4} turns is not within {slack} of an integer")]
    NonIntegerWinding { total: f64, slack: f64 },
    #[error("zero budget exceeded: counted {count} zeros, caller allows {max}")]
    MaxZerosExceeded { count: usize, max: usize },
    #[error("inputs are linearly dependent; the deep-zero dichotomy requires independence")]
    DependentInputs,
    #[error("circle (center {center}, radius {radius}) leaves the closed unit disk")]
    CircleOutsideDisk { center: Complex64, radius: f64 },
    #[error("sector subdivision stalled: {0}")]
    SubdivisionStalled(String),
    #[error(transparent)]
    Wronskian(#[from] crate::wronskian::WronskianError),
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
}

#[derive(Clone, Debug)]
pub struct ZeroConfig {
    /// Initial node count per contour edge.
    pub start_nodes: usize,
    /// Hard cap on nodes per edge during phase unwrapping.
    pub max_nodes: usize,
    /// Newton-step distance below which a zero counts as "on the contour".
    pub proximity: f64,
    /// Acceptable distance (in turns) from the unwound total to an integer.
    pub integer_slack: f64,
    /// Sectors smaller than this diameter stop subdividing.
    pub min_sector: f64,
    /// Sector diameter below which Newton polish is attempted.
    pub polish_threshold: f64,
    /// Relative derivative-magnitude threshold for multiplicity decisions.
    pub tol_deriv: f64,
    /// Rank tolerance for Wronskian-matrix nullspaces.
    pub tol_rank: f64,
    /// Root-finder settings for the exact pipeline.
    pub roots: RootConfig,
}

impl Default for ZeroConfig {
    fn default() -> Self {
        Self {
            start_nodes: 256,
            max_nodes: 1 << 20,
            proximity: 1e-9,
            integer_slack: 0.25,
            min_sector: 1e-9,
            polish_threshold: 1e-3,
            tol_deriv: 1e-7,
            tol_rank: 1e-8,
            roots: RootConfig::default(),
        }
    }
}

/// How a zero location was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroMethod {
    /// Exact square-free factorization of an exact polynomial.
    ExactRoot,
    /// Sector center after subdivision, no polish available or convergent.
    ArgumentPrinciple,
    /// Newton iteration from a localized starting point.
    NewtonPolish,
}

#[derive(Clone, Debug)]
pub struct ZeroRecord {
    pub location: Complex64,
    pub multiplicity: usize,
    pub residual: f64,
    pub method: ZeroMethod,
}

// ---------------------------------------------------------------------------
// Phase unwrapping along contour edges
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum Edge {
    /// Straight segment from a to b.
    Line { a: Complex64, b: Complex64 },
    /// Origin-centered arc at the given radius from angle t0 to t1
    /// (either orientation).
    Arc { radius: f64, t0: f64, t1: f64 },
    /// Arc around an arbitrary center.
    OffArc {
        center: Complex64,
        radius: f64,
        t0: f64,
        t1: f64,
    },
}

impl Edge {
    fn point(&self, s: f64) -> Complex64 {
        match *self {
            Edge::Line { a, b } => a + (b - a) * s,
            Edge::Arc { radius, t0, t1 } => Complex64::from_polar(radius, t0 + (t1 - t0) * s),
            Edge::OffArc {
                center,
                radius,
                t0,
                t1,
            } => center + Complex64::from_polar(radius, t0 + (t1 - t0) * s),
        }
    }
}

struct EdgeSweep {
    /// Total phase increment along the edge, radians.
    increment: f64,
    /// Smallest Newton-step distance estimate |f|/|f'| seen on the edge.
    min_zero_distance: f64,
}

/// Phase increment of f along one edge by adaptive node doubling. Steps must
/// all turn by less than pi/2; a persistent localized near-pi flip is the
/// signature of a zero essentially on the edge and is reported as such.
fn sweep_edge<F: DiskFunction>(f: &F, edge: &Edge, cfg: &ZeroConfig) -> Result<EdgeSweep, ZeroError> {
    let mut n = cfg.start_nodes;
    loop {
        let mut values = Vec::with_capacity(n + 1);
        for k in 0..=n {
            values.push(f.eval(edge.point(k as f64 / n as f64)));
        }
        if values.iter().any(|w| w.norm() == 0.0 || !w.is_finite()) {
            return Err(ZeroError::ContourTooClose(0));
        }
        let mut increment = 0.0;
        let mut worst = 0.0f64;
        let mut bad_steps = 0usize;
        for k in 0..n {
            let step = (values[k + 1] / values[k]).arg();
            increment += step;
            let a = step.abs();
            if a >= PI / 2.0 {
                bad_steps += 1;
            }
            worst = worst.max(a);
        }
        if worst < PI / 2.0 {
            // Converged; scan for zeros hugging the edge.
            let mut min_zero_distance = f64::INFINITY;
            for k in 1..n {
                let dz = edge.point((k + 1) as f64 / n as f64)
                    - edge.point((k - 1) as f64 / n as f64);
                let df = values[k + 1] - values[k - 1];
                if df.norm() > 0.0 {
                    let d = values[k].norm() * dz.norm() / df.norm();
                    min_zero_distance = min_zero_distance.min(d);
                }
            }
            if min_zero_distance < cfg.proximity {
                return Err(ZeroError::ContourTooClose(0));
            }
            return Ok(EdgeSweep {
                increment,
                min_zero_distance,
            });
        }
        if n >= cfg.max_nodes {
            // A handful of stubborn near-pi flips means a zero is pinned to
            // the edge; wide-band oscillation means the budget is simply
            // too small.
            if bad_steps <= 8 {
                return Err(ZeroError::ContourTooClose(0));
            }
            return Err(ZeroError::UnwrapBudget {
                nodes: n,
                worst_step: worst,
            });
        }
        n *= 2;
    }
}

fn winding_of_edges<F: DiskFunction>(
    f: &F,
    edges: &[Edge],
    cfg: &ZeroConfig,
) -> Result<i64, ZeroError> {
    let mut total = 0.0;
    for e in edges {
        total += sweep_edge(f, e, cfg)?.increment;
    }
    let turns = total / TAU;
    let nearest = turns.round();
    if (turns - nearest).abs() > cfg.integer_slack {
        return Err(ZeroError::NonIntegerWinding {
            total: turns,
            slack: cfg.integer_slack,
        });
    }
    Ok(nearest as i64)
}

/// Multiplicity-weighted zero count of f inside the circle |z - center| = radius
/// by phase unwrapping of the boundary values.
///
/// When the contour hugs a zero, the radius is nudged (shrink, then grow, in
/// growing steps) up to five times before giving up.
pub fn count_zeros<F: DiskFunction>(
    f: &F,
    center: Complex64,
    radius: f64,
    cfg: &ZeroConfig,
) -> Result<i64, ZeroError> {
    if center.norm() + radius > 1.0 + 1e-9 {
        return Err(ZeroError::CircleOutsideDisk { center, radius });
    }
    let factors = [1.0, 1.0 - 3e-4, 1.0 + 3e-4, 1.0 - 1e-3, 1.0 + 1e-3];
    let mut attempts = 0usize;
    for &factor in &factors {
        let r = radius * factor;
        if center.norm() + r > 1.0 {
            continue;
        }
        attempts += 1;
        let circle = if center.norm() == 0.0 {
            vec![Edge::Arc {
                radius: r,
                t0: 0.0,
                t1: TAU,
            }]
        } else {
            vec![Edge::OffArc {
                center,
                radius: r,
                t0: 0.0,
                t1: TAU,
            }]
        };
        match winding_of_edges(f, &circle, cfg) {
            Ok(w) => return Ok(w),
            Err(ZeroError::ContourTooClose(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(ZeroError::ContourTooClose(attempts))
}

// ---------------------------------------------------------------------------
// Localization by polar-sector subdivision
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
struct Sector {
    r0: f64,
    r1: f64,
    t0: f64,
    t1: f64,
}

impl Sector {
    fn edges(&self) -> Vec<Edge> {
        vec![
            Edge::Arc {
                radius: self.r1,
                t0: self.t0,
                t1: self.t1,
            },
            Edge::Line {
                a: Complex64::from_polar(self.r1, self.t1),
                b: Complex64::from_polar(self.r0, self.t1),
            },
            Edge::Arc {
                radius: self.r0,
                t0: self.t1,
                t1: self.t0,
            },
            Edge::Line {
                a: Complex64::from_polar(self.r0, self.t0),
                b: Complex64::from_polar(self.r1, self.t0),
            },
        ]
    }

    fn center(&self) -> Complex64 {
        Complex64::from_polar(0.5 * (self.r0 + self.r1), 0.5 * (self.t0 + self.t1))
    }

    fn diameter(&self) -> f64 {
        let radial = self.r1 - self.r0;
        let angular = self.r1 * (self.t1 - self.t0).abs();
        radial.hypot(angular)
    }

    fn contains(&self, z: Complex64, slack: f64) -> bool {
        let r = z.norm();
        if r < self.r0 - slack || r > self.r1 + slack {
            return false;
        }
        let t = z.arg();
        let width = self.t1 - self.t0;
        let rel = (t - self.t0).rem_euclid(TAU);
        rel <= width + slack / self.r1.max(1e-6) || rel >= TAU - slack / self.r1.max(1e-6)
    }
}

fn winding_of_sector<F: DiskFunction>(
    f: &F,
    s: &Sector,
    cfg: &ZeroConfig,
) -> Result<i64, ZeroError> {
    winding_of_edges(f, &s.edges(), cfg)
}

/// Newton iteration on f^{(which)} starting from z0.
fn newton_on_derivative<F: DiskFunctionDerivs>(
    f: &F,
    which: usize,
    z0: Complex64,
    max_radius: f64,
) -> Option<Complex64> {
    let mut z = z0;
    for _ in 0..60 {
        let v = f.eval_deriv(z, which);
        let d = f.eval_deriv(z, which + 1);
        if d.norm() == 0.0 {
            return None;
        }
        let step = v / d;
        z -= step;
        if z.norm() > max_radius {
            return None;
        }
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    Some(z)
}

/// Multiplicity report: the decisive derivative magnitudes travel with the
/// verdict.
#[derive(Clone, Debug)]
pub struct MultiplicityReport {
    /// Smallest k with |f^{(k)}(z0)| above threshold; equals max_order + 1
    /// when saturated.
    pub order: usize,
    /// True when every derivative up to max_order was below threshold.
    pub saturated: bool,
    pub magnitudes: Vec<f64>,
}

/// Order of vanishing of f at z0: the smallest k <= max_order with
/// |f^{(k)}(z0)| > tol_deriv · max_k |f^{(k)}(z0)|; saturates at
/// max_order + 1 when none qualifies.
pub fn multiplicity_at<F: DiskFunctionDerivs>(
    f: &F,
    z0: Complex64,
    max_order: usize,
    cfg: &ZeroConfig,
) -> MultiplicityReport {
    let magnitudes: Vec<f64> = (0..=max_order).map(|k| f.eval_deriv(z0, k).norm()).collect();
    let scale = magnitudes.iter().cloned().fold(0.0f64, f64::max);
    if scale == 0.0 {
        return MultiplicityReport {
            order: max_order + 1,
            saturated: true,
            magnitudes,
        };
    }
    for (k, &m) in magnitudes.iter().enumerate() {
        if m > cfg.tol_deriv * scale {
            return MultiplicityReport {
                order: k,
                saturated: false,
                magnitudes,
            };
        }
    }
    MultiplicityReport {
        order: max_order + 1,
        saturated: true,
        magnitudes,
    }
}

/// Locates all zeros of f with |z| < radius by recursive subdivision of
/// polar sectors, Newton polish at the leaves. The returned multiplicities
/// sum to the circle count, and records are sorted by (|z|, arg z).
pub fn locate_zeros<F: DiskFunctionDerivs>(
    f: &F,
    radius: f64,
    max_zeros: usize,
    cfg: &ZeroConfig,
) -> Result<Vec<ZeroRecord>, ZeroError> {
    let total = count_zeros(f, Complex64::ZERO, radius, cfg)?;
    if total < 0 {
        return Err(ZeroError::SubdivisionStalled(format!(
            "negative winding {total} on the bounding circle"
        )));
    }
    let total = total as usize;
    if total == 0 {
        return Ok(Vec::new());
    }
    if total > max_zeros {
        return Err(ZeroError::MaxZerosExceeded {
            count: total,
            max: max_zeros,
        });
    }

    let mut records: Vec<ZeroRecord> = Vec::new();

    // The origin sits on every initial sector seam, so a small disk around it
    // is counted separately first.
    let r_eps = (radius * 1e-3).min(1e-4);
    let origin_count = count_zeros(f, Complex64::ZERO, r_eps, cfg)? as usize;
    if origin_count > 0 {
        let rec = polish_cluster(f, Complex64::ZERO, origin_count, r_eps, radius, cfg);
        records.push(rec);
    }

    let remaining = total - origin_count;
    if remaining > 0 {
        let seam = 0.137; // keep sector seams off the real axis fixtures
        let mut work: Vec<(Sector, usize)> = Vec::new();
        for k in 0..4 {
            let s = Sector {
                r0: r_eps,
                r1: radius,
                t0: seam + TAU * k as f64 / 4.0,
                t1: seam + TAU * (k + 1) as f64 / 4.0,
            };
            let w = winding_with_fraction_retry(f, &s, cfg)?;
            if w > 0 {
                work.push((s, w as usize));
            }
        }
        let mut guard = 0usize;
        while let Some((sector, count)) = work.pop() {
            guard += 1;
            if guard > 200_000 {
                return Err(ZeroError::SubdivisionStalled(
                    "sector budget exhausted".into(),
                ));
            }
            if count == 0 {
                continue;
            }
            let diam = sector.diameter();
            if diam <= cfg.polish_threshold {
                if let Some(rec) = try_polish_sector(f, &sector, count, radius, cfg) {
                    records.push(rec);
                    continue;
                }
            }
            if diam <= cfg.min_sector {
                records.push(ZeroRecord {
                    location: sector.center(),
                    multiplicity: count,
                    residual: f.eval(sector.center()).norm(),
                    method: ZeroMethod::ArgumentPrinciple,
                });
                continue;
            }
            let children = split_sector(f, &sector, count, cfg)?;
            work.extend(children);
        }
    }

    records.sort_by(|a, b| {
        let ka = (a.location.norm(), a.location.arg());
        let kb = (b.location.norm(), b.location.arg());
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(records)
}

/// Splits a sector in its longer polar dimension; when a zero sits on the
/// proposed cut, the split fraction is perturbed before giving up.
fn split_sector<F: DiskFunction>(
    f: &F,
    s: &Sector,
    expected: usize,
    cfg: &ZeroConfig,
) -> Result<Vec<(Sector, usize)>, ZeroError> {
    let radial = s.r1 - s.r0;
    let angular = s.r1 * (s.t1 - s.t0).abs();
    for &fraction in &[0.5, 0.45, 0.55, 0.41, 0.59] {
        let (a, b) = if radial >= angular {
            let rm = s.r0 + radial * fraction;
            (
                Sector { r1: rm, ..*s },
                Sector { r0: rm, ..*s },
            )
        } else {
            let tm = s.t0 + (s.t1 - s.t0) * fraction;
            (
                Sector { t1: tm, ..*s },
                Sector { t0: tm, ..*s },
            )
        };
        let wa = match winding_of_sector(f, &a, cfg) {
            Ok(w) => w,
            Err(ZeroError::ContourTooClose(_)) => continue,
            Err(e) => return Err(e),
        };
        let wb = match winding_of_sector(f, &b, cfg) {
            Ok(w) => w,
            Err(ZeroError::ContourTooClose(_)) => continue,
            Err(e) => return Err(e),
        };
        if wa < 0 || wb < 0 || (wa + wb) as usize != expected {
            continue;
        }
        let mut out = Vec::new();
        if wa > 0 {
            out.push((a, wa as usize));
        }
        if wb > 0 {
            out.push((b, wb as usize));
        }
        return Ok(out);
    }
    Err(ZeroError::SubdivisionStalled(format!(
        "no zero-free cut found for sector r=[{:.6},{:.6}] t=[{:.6},{:.6}]",
        s.r0, s.r1, s.t0, s.t1
    )))
}

fn winding_with_fraction_retry<F: DiskFunction>(
    f: &F,
    s: &Sector,
    cfg: &ZeroConfig,
) -> Result<i64, ZeroError> {
    match winding_of_sector(f, s, cfg) {
        Ok(w) => Ok(w),
        Err(ZeroError::ContourTooClose(_)) => {
            // Shift the seam slightly; used only for top-level sectors.
            let shifted = Sector {
                t0: s.t0 + 1e-3,
                t1: s.t1 + 1e-3,
                ..*s
            };
            winding_of_sector(f, &shifted, cfg)
        }
        Err(e) => Err(e),
    }
}

/// Newton polish of a sector known to hold `count` zeros (with multiplicity).
/// Simple zeros use plain Newton; clusters use Newton on f^{(m-1)} plus a
/// multiplicity certificate. Returns None when polish fails, which sends the
/// sector back to subdivision.
fn try_polish_sector<F: DiskFunctionDerivs>(
    f: &F,
    sector: &Sector,
    count: usize,
    disk_radius: f64,
    cfg: &ZeroConfig,
) -> Option<ZeroRecord> {
    let rec = polish_candidate(f, sector.center(), count, disk_radius, cfg)?;
    let slack = 2.0 * sector.diameter();
    if !sector.contains(rec.location, slack) {
        return None;
    }
    Some(rec)
}

fn polish_candidate<F: DiskFunctionDerivs>(
    f: &F,
    start: Complex64,
    count: usize,
    disk_radius: f64,
    cfg: &ZeroConfig,
) -> Option<ZeroRecord> {
    let derivs_available = f.max_derivative_order().unwrap_or(usize::MAX);
    if count == 1 {
        if derivs_available < 1 {
            return None;
        }
        let z = newton_on_derivative(f, 0, start, 1.0)?;
        if z.norm() > disk_radius * (1.0 + 1e-6) {
            return None;
        }
        let residual = f.eval(z).norm();
        return Some(ZeroRecord {
            location: z,
            multiplicity: 1,
            residual,
            method: ZeroMethod::NewtonPolish,
        });
    }
    if derivs_available < count {
        return None;
    }
    let z = newton_on_derivative(f, count - 1, start, 1.0)?;
    if z.norm() > disk_radius * (1.0 + 1e-6) {
        return None;
    }
    let report = multiplicity_at(f, z, count, cfg);
    if report.order >= count {
        return Some(ZeroRecord {
            location: z,
            multiplicity: count,
            residual: f.eval(z).norm(),
            method: ZeroMethod::NewtonPolish,
        });
    }
    None
}

/// Polish for the origin cluster found by the small pre-count disk.
fn polish_cluster<F: DiskFunctionDerivs>(
    f: &F,
    start: Complex64,
    count: usize,
    cluster_radius: f64,
    disk_radius: f64,
    cfg: &ZeroConfig,
) -> ZeroRecord {
    if let Some(rec) = polish_candidate(f, start, count, disk_radius, cfg) {
        if (rec.location - start).norm() <= 4.0 * cluster_radius {
            return rec;
        }
    }
    ZeroRecord {
        location: start,
        multiplicity: count,
        residual: f.eval(start).norm(),
        method: ZeroMethod::ArgumentPrinciple,
    }
}

// ---------------------------------------------------------------------------
// Deep zeros
// ---------------------------------------------------------------------------

/// Certificate for one point of the exceptional set: the witness combination
/// vanishes to verified order >= n+1 there, and the Wronskian-matrix gap
/// documents the singularity decision.
#[derive(Clone, Debug)]
pub struct DeepZeroCertificate {
    pub point: Complex64,
    pub order: usize,
    pub witness: CoefficientVector,
    pub wronskian_value: Complex64,
    pub matrix_gap: f64,
    pub verified_multiplicity: usize,
    /// True when the verified multiplicity saturated at the probe limit.
    pub saturated: bool,
}

/// Deep-zero search output: certificates plus the Blaschke-condition report
/// for the located Wronskian zeros.
#[derive(Clone, Debug)]
pub struct DeepZeroSet {
    pub certificates: Vec<DeepZeroCertificate>,
    /// Σ mult · (1 − |z|) over located Wronskian zeros.
    pub blaschke_sum: f64,
}

/// Deep zeros of an exact polynomial family: the Wronskian is computed
/// exactly, its roots exactly square-free factored, and every root receives
/// a nullspace witness verified by the derivative-magnitude test.
pub fn deep_zero_set_exact(
    ps: &[ExactPoly],
    radius: f64,
    cfg: &ZeroConfig,
) -> Result<DeepZeroSet, ZeroError> {
    let verdict = independence_exact(ps)?;
    if !verdict.independent {
        return Err(ZeroError::DependentInputs);
    }
    let n = ps.len() - 1;
    let w = wronskian_exact(ps)?;
    let floats: Vec<FloatPoly> = ps.iter().map(|p| p.to_float()).collect();
    let w_float = w.to_float();

    let mut certificates = Vec::new();
    let mut blaschke_sum = 0.0;
    if w.degree().is_some_and(|d| d > 0) {
        let (roots, _) = exact_roots(&w, &cfg.roots)?;
        for root in roots.iter().filter(|r| r.location.norm() <= radius) {
            blaschke_sum += root.multiplicity as f64 * (1.0 - root.location.norm());
            let matrix = wronskian_matrix_at(&floats, root.location, n);
            let ns = nullspace_coefficients(&matrix, cfg.tol_rank)?;
            let mut g = FloatPoly::zero();
            for (p, &l) in floats.iter().zip(&ns.witness.lambdas) {
                g = &g + &p.scale(&l);
            }
            let report = multiplicity_at(&g, root.location, n + 1, cfg);
            certificates.push(DeepZeroCertificate {
                point: root.location,
                order: n,
                witness: ns.witness,
                wronskian_value: w_float.eval(&root.location),
                matrix_gap: ns.gap,
                verified_multiplicity: report.order,
                saturated: report.saturated,
            });
        }
    }
    certificates.sort_by(|a, b| {
        (a.point.norm(), a.point.arg())
            .partial_cmp(&(b.point.norm(), b.point.arg()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(DeepZeroSet {
        certificates,
        blaschke_sum,
    })
}

/// Deep zeros of a structured family: the Wronskian is built in-family, its
/// zeros located by the argument principle, and witnesses verified as in the
/// exact engine.
pub fn deep_zero_set_structured(
    fs: &[StructuredFunction],
    radius: f64,
    max_zeros: usize,
    cfg: &ZeroConfig,
) -> Result<DeepZeroSet, ZeroError> {
    let verdict = independence_structured(fs)?;
    if !verdict.independent {
        return Err(ZeroError::DependentInputs);
    }
    let n = fs.len() - 1;
    let w = wronskian_structured(fs)?;
    let w_tower = DerivativeTower::new(w, n + 2);
    let zeros = locate_zeros(&w_tower, radius, max_zeros, cfg)?;

    let towers: Vec<DerivativeTower> = fs
        .iter()
        .map(|f| DerivativeTower::new(f.clone(), n + 1))
        .collect();

    let mut certificates = Vec::new();
    let mut blaschke_sum = 0.0;
    for zr in &zeros {
        blaschke_sum += zr.multiplicity as f64 * (1.0 - zr.location.norm());
        let matrix = wronskian_matrix_at(&towers, zr.location, n);
        let ns = nullspace_coefficients(&matrix, cfg.tol_rank)?;
        let g = StructuredFunction::combine(fs, &ns.witness.lambdas)
            .expect("witness is nontrivial by construction");
        let g_tower = DerivativeTower::new(g, n + 1);
        let report = multiplicity_at(&g_tower, zr.location, n + 1, cfg);
        certificates.push(DeepZeroCertificate {
            point: zr.location,
            order: n,
            witness: ns.witness,
            wronskian_value: w_tower.function().eval(zr.location),
            matrix_gap: ns.gap,
            verified_multiplicity: report.order,
            saturated: report.saturated,
        });
    }
    Ok(DeepZeroSet {
        certificates,
        blaschke_sum,
    })
}
