//! Polynomial root finding: Aberth-Ehrlich simultaneous iteration with
//! Newton polish and explicit multiplicity clustering, plus an exact
//! square-free pre-factorization for Gaussian-rational polynomials.

use super::{ExactPoly, FloatPoly, PolyError};
use crate::exact::ExactComplex;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// One located root with its clustered multiplicity and measured residual.
#[derive(Clone, Debug)]
pub struct RootRecord {
    pub location: Complex64,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct RootConfig {
    /// Base clustering radius for multiplicity grouping.
    pub cluster_radius: f64,
    /// Relative derivative-magnitude gate for certifying a merged cluster as
    /// one multiple root.
    pub certify_tol: f64,
    pub max_iterations: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            cluster_radius: 1e-6,
            certify_tol: 1e-9,
            max_iterations: 600,
        }
    }
}

/// All roots of a nonzero float polynomial, with multiplicities from
/// clustering and every residual measured at the returned location.
///
/// The zero polynomial is rejected: in the Wronskian pipeline it signals
/// linearly dependent inputs rather than a root-finding problem.
pub fn float_roots(p: &FloatPoly, cfg: &RootConfig) -> Result<Vec<RootRecord>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let deg = p.degree().unwrap();
    if deg == 0 {
        return Ok(Vec::new());
    }

    // Roots at the origin come out exactly by stripping low zero coefficients.
    let mut low = 0;
    while low < deg && p.coeff(low).norm() == 0.0 {
        low += 1;
    }
    let reduced = FloatPoly::new(p.coeffs()[low..].to_vec());

    let mut points = aberth(&reduced, cfg)?;
    for z in points.iter_mut() {
        *z = newton_polish(&reduced, *z);
    }

    let mut clusters = greedy_clusters(&points, cfg.cluster_radius);
    repair_multiple_roots(&reduced, &mut clusters, cfg);

    let mut records: Vec<RootRecord> = clusters
        .into_iter()
        .map(|c| {
            let location = c.center;
            RootRecord {
                location,
                multiplicity: c.points.len(),
                residual: p.eval(&location).norm(),
            }
        })
        .collect();
    if low > 0 {
        records.push(RootRecord {
            location: Complex64::ZERO,
            multiplicity: low,
            residual: p.eval(&Complex64::ZERO).norm(),
        });
    }
    sort_records(&mut records);
    Ok(records)
}

/// Roots of an exact polynomial via exact square-free factorization (Yun's
/// algorithm over the Gaussian rationals) followed by float root finding on
/// the simple-root factors. Multiplicities are exact; the reported f64 is the
/// worst coefficient conversion error.
pub fn exact_roots(
    p: &ExactPoly,
    cfg: &RootConfig,
) -> Result<(Vec<RootRecord>, f64), PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let (p_float, conv_err) = p.to_float_with_error();
    if p.degree() == Some(0) {
        return Ok((Vec::new(), conv_err));
    }
    let mut records = Vec::new();
    for (factor, mult) in square_free_decomposition(p) {
        if factor.degree().is_none_or(|d| d == 0) {
            continue;
        }
        let simple = float_roots(&factor.to_float(), cfg)?;
        for r in simple {
            records.push(RootRecord {
                location: r.location,
                multiplicity: mult,
                residual: p_float.eval(&r.location).norm(),
            });
        }
    }
    sort_records(&mut records);
    Ok((records, conv_err))
}

fn sort_records(records: &mut [RootRecord]) {
    records.sort_by(|a, b| {
        let ka = (a.location.norm(), a.location.arg());
        let kb = (b.location.norm(), b.location.arg());
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
}

// ---------------------------------------------------------------------------
// Aberth-Ehrlich iteration
// ---------------------------------------------------------------------------

fn aberth(p: &FloatPoly, cfg: &RootConfig) -> Result<Vec<Complex64>, PolyError> {
    let deg = p.degree().unwrap();
    let lead = *p.leading().unwrap();
    let monic = p.scale(&(1.0 / lead));

    // Cauchy bound and geometric-mean radius for the starting circle.
    let cauchy = 1.0 + monic
        .coeffs()
        .iter()
        .take(deg)
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let geo = monic.coeff(0).norm().powf(1.0 / deg as f64);
    let radius = geo.clamp(0.25, cauchy).min(cauchy);

    let mut z: Vec<Complex64> = (0..deg)
        .map(|j| {
            let t = TAU * (j as f64 + 0.25) / deg as f64 + 0.7;
            radius * Complex64::new(t.cos(), t.sin())
        })
        .collect();

    let mut best = f64::INFINITY;
    let mut since_improved = 0usize;
    for _ in 0..cfg.max_iterations {
        let mut worst = 0.0f64;
        let snapshot = z.clone();
        for i in 0..deg {
            let zi = snapshot[i];
            let (v, d) = monic.eval_with_derivative(zi);
            if v.norm() == 0.0 {
                continue;
            }
            let newton = if d.norm() > 0.0 {
                v / d
            } else {
                Complex64::new(1e-8, 1e-8)
            };
            let mut repulsion = Complex64::ZERO;
            for (j, &zj) in snapshot.iter().enumerate() {
                if j != i {
                    let diff = zi - zj;
                    if diff.norm() > 1e-300 {
                        repulsion += 1.0 / diff;
                    }
                }
            }
            let denom = Complex64::ONE - newton * repulsion;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] = zi - step;
            worst = worst.max(step.norm() / (1.0 + zi.norm()));
        }
        if worst < 1e-14 {
            return Ok(z);
        }
        if worst < best * 0.5 {
            best = worst;
            since_improved = 0;
        } else {
            since_improved += 1;
            // Multiple-root clusters plateau; polishing and clustering take over.
            if since_improved > 40 {
                return Ok(z);
            }
        }
    }
    if best < 1e-4 {
        return Ok(z);
    }
    Err(PolyError::RootsDiverged(format!(
        "Aberth stalled with correction {best:.3e} on degree {deg}"
    )))
}

fn newton_polish(p: &FloatPoly, start: Complex64) -> Complex64 {
    let mut z = start;
    for _ in 0..40 {
        let (v, d) = p.eval_with_derivative(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = v / d;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

// ---------------------------------------------------------------------------
// Clustering
// ---------------------------------------------------------------------------

struct Cluster {
    points: Vec<Complex64>,
    center: Complex64,
}

impl Cluster {
    fn recenter(&mut self) {
        let sum: Complex64 = self.points.iter().sum();
        self.center = sum / self.points.len() as f64;
    }
}

fn greedy_clusters(points: &[Complex64], radius: f64) -> Vec<Cluster> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(points[i]);
    }
    groups
        .into_values()
        .map(|points| {
            let mut c = Cluster {
                points,
                center: Complex64::ZERO,
            };
            c.recenter();
            c
        })
        .collect()
}

/// Floating root finding scatters a multiplicity-m root over a radius of
/// roughly eps^(1/m), far beyond the base clustering radius for m >= 3. This
/// pass groups base clusters inside a generous exploration radius and merges
/// a group only when a derivative-magnitude certificate at the jointly
/// polished center confirms the hypothesized multiplicity.
fn repair_multiple_roots(p: &FloatPoly, clusters: &mut Vec<Cluster>, cfg: &RootConfig) {
    let deg = p.degree().unwrap_or(0);
    if deg < 3 || clusters.len() < 2 {
        return;
    }
    let explore = scatter_radius(deg.min(8)).max(cfg.cluster_radius);
    let centers: Vec<Complex64> = clusters.iter().map(|c| c.center).collect();
    let wide = greedy_clusters(&centers, explore);

    let mut merged: Vec<Cluster> = Vec::new();
    let mut consumed = vec![false; clusters.len()];
    for group in &wide {
        // Indices of the base clusters in this wide group.
        let mut members: Vec<usize> = clusters
            .iter()
            .enumerate()
            .filter(|(i, c)| {
                !consumed[*i] && group.points.iter().any(|&g| (g - c.center).norm() == 0.0)
            })
            .map(|(i, _)| i)
            .collect();
        let mut total: usize = members.iter().map(|&i| clusters[i].points.len()).sum();
        if members.len() < 2 || total > deg {
            continue;
        }
        // Try the full group first, then smaller hypotheses built from the
        // clusters nearest the group centroid.
        while members.len() >= 2 && total >= 2 {
            let centroid = weighted_centroid(clusters, &members);
            if let Some(c) = certify_multiple_root(p, centroid, total, cfg.certify_tol) {
                let within = members.iter().all(|&i| {
                    clusters[i]
                        .points
                        .iter()
                        .all(|&z| (z - c).norm() <= 3.0 * scatter_radius(total).max(cfg.cluster_radius))
                });
                if within {
                    let mut points = Vec::new();
                    for &i in &members {
                        points.extend_from_slice(&clusters[i].points);
                        consumed[i] = true;
                    }
                    merged.push(Cluster { points, center: c });
                    break;
                }
            }
            // Drop the member farthest from the centroid and retry.
            let far = *members
                .iter()
                .max_by(|&&a, &&b| {
                    let da = (clusters[a].center - centroid).norm();
                    let db = (clusters[b].center - centroid).norm();
                    da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            members.retain(|&i| i != far);
            total = members.iter().map(|&i| clusters[i].points.len()).sum();
        }
    }
    let mut rest: Vec<Cluster> = Vec::new();
    for (i, c) in clusters.drain(..).enumerate() {
        if !consumed[i] {
            rest.push(c);
        }
    }
    rest.extend(merged);
    *clusters = rest;

    // Polish base clusters of size >= 2 the same way when they certify.
    for cl in clusters.iter_mut() {
        let m = cl.points.len();
        if m >= 2 {
            if let Some(c) = certify_multiple_root(p, cl.center, m, cfg.certify_tol) {
                cl.center = c;
            }
        }
    }
}

/// Expected scatter of a multiplicity-m root under double precision.
fn scatter_radius(m: usize) -> f64 {
    1e-12f64.powf(1.0 / m as f64)
}

fn weighted_centroid(clusters: &[Cluster], members: &[usize]) -> Complex64 {
    let mut sum = Complex64::ZERO;
    let mut n = 0usize;
    for &i in members {
        for &z in &clusters[i].points {
            sum += z;
            n += 1;
        }
    }
    sum / n as f64
}

/// Newton-polishes `c0` as a simple root of p^{(m-1)} and accepts it as a
/// multiplicity-m root when every lower derivative is negligible there.
fn certify_multiple_root(
    p: &FloatPoly,
    c0: Complex64,
    m: usize,
    tol: f64,
) -> Option<Complex64> {
    if m < 2 || m > p.degree().unwrap_or(0) {
        return None;
    }
    let dm1 = p.derivative_n(m - 1);
    let c = newton_polish(&dm1, c0);
    if (c - c0).norm() > 3.0 * scatter_radius(m) + 1e-6 {
        return None;
    }
    let mags: Vec<f64> = (0..=m).map(|k| p.derivative_n(k).eval(&c).norm()).collect();
    let scale = mags.iter().fold(0.0f64, |a, &b| a.max(b));
    if scale == 0.0 {
        return None;
    }
    let ok = mags[..m].iter().all(|&v| v <= tol * scale) && mags[m] > tol * scale;
    ok.then_some(c)
}

// ---------------------------------------------------------------------------
// Exact square-free decomposition over the Gaussian rationals
// ---------------------------------------------------------------------------

fn monic_exact(p: &ExactPoly) -> ExactPoly {
    match p.leading() {
        Some(lead) if !lead.is_zero() => p.scale(&lead.inv()),
        _ => p.clone(),
    }
}

/// Quotient and remainder of exact polynomial division.
fn divmod_exact(num: &ExactPoly, den: &ExactPoly) -> (ExactPoly, ExactPoly) {
    let dden = den.degree().expect("division by zero polynomial");
    let lead_inv = den.leading().unwrap().inv();
    let mut rem: Vec<ExactComplex> = num.coeffs().to_vec();
    let dnum = match num.degree() {
        Some(d) if d >= dden => d,
        _ => return (ExactPoly::zero(), num.clone()),
    };
    let mut quot = vec![ExactComplex::zero(); dnum - dden + 1];
    for k in (0..=(dnum - dden)).rev() {
        let coef = &rem[k + dden] * &lead_inv;
        if coef.is_zero() {
            continue;
        }
        for (j, d) in den.coeffs().iter().enumerate() {
            let sub = &coef * d;
            rem[k + j] = &rem[k + j] - &sub;
        }
        quot[k] = coef;
    }
    (ExactPoly::new(quot), ExactPoly::new(rem))
}

/// Monic GCD by the Euclidean algorithm, with remainders re-normalized each
/// step to control coefficient growth.
fn gcd_exact(a: &ExactPoly, b: &ExactPoly) -> ExactPoly {
    let mut a = monic_exact(a);
    let mut b = monic_exact(b);
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let (_, r) = divmod_exact(&a, &b);
        a = b;
        b = monic_exact(&r);
    }
    if a.is_zero() {
        a
    } else {
        monic_exact(&a)
    }
}

/// Yun's algorithm: returns pairwise-coprime monic factors s_i with
/// p = lead · prod s_i^i.
pub fn square_free_decomposition(p: &ExactPoly) -> Vec<(ExactPoly, usize)> {
    let p = monic_exact(p);
    if p.degree().is_none_or(|d| d == 0) {
        return Vec::new();
    }
    let dp = p.derivative();
    let g = gcd_exact(&p, &dp);
    if g.degree() == Some(0) {
        return vec![(p, 1)];
    }
    let mut out = Vec::new();
    let (mut w, _) = divmod_exact(&p, &g);
    let (y, _) = divmod_exact(&dp, &g);
    let mut z = &y - &w.derivative();
    let mut i = 1usize;
    while w.degree().is_some_and(|d| d > 0) {
        let gi = gcd_exact(&w, &z);
        if gi.degree().is_some_and(|d| d > 0) {
            out.push((gi.clone(), i));
        }
        let (w_next, _) = divmod_exact(&w, &gi);
        let (y_next, _) = divmod_exact(&z, &gi);
        w = w_next;
        z = &y_next - &w.derivative();
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactComplex;

    fn assert_has_root(records: &[RootRecord], z: Complex64, mult: usize, tol: f64) {
        let hit = records
            .iter()
            .find(|r| (r.location - z).norm() <= tol)
            .unwrap_or_else(|| panic!("no root near {z} in {records:?}"));
        assert_eq!(hit.multiplicity, mult, "bad multiplicity near {z}");
    }

    #[test]
    fn simple_quadratic() {
        let p = FloatPoly::from_f64_coeffs(&[-1.0, 0.0, 1.0]);
        let r = float_roots(&p, &RootConfig::default()).unwrap();
        assert_eq!(r.len(), 2);
        assert_has_root(&r, Complex64::new(1.0, 0.0), 1, 1e-10);
        assert_has_root(&r, Complex64::new(-1.0, 0.0), 1, 1e-10);
    }

    #[test]
    fn triple_root_clusters() {
        // (z - 0.5)^3 constructed in floats; the certificate pass must group
        // the eps^(1/3) scatter into one multiplicity-3 record.
        let lin = FloatPoly::from_f64_coeffs(&[-0.5, 1.0]);
        let p = &(&lin * &lin) * &lin;
        let r = float_roots(&p, &RootConfig::default()).unwrap();
        assert_eq!(r.len(), 1, "expected a single cluster, got {r:?}");
        assert_has_root(&r, Complex64::new(0.5, 0.0), 3, 1e-9);
        assert!(r[0].residual <= 1e-12);
    }

    #[test]
    fn wronskian_of_one_and_z_squared() {
        // W(1, z²) = 2z: single root at the origin.
        let p = FloatPoly::from_f64_coeffs(&[0.0, 2.0]);
        let r = float_roots(&p, &RootConfig::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert_has_root(&r, Complex64::ZERO, 1, 1e-14);
    }

    #[test]
    fn zero_polynomial_rejected() {
        let err = float_roots(&FloatPoly::zero(), &RootConfig::default()).unwrap_err();
        assert!(err.to_string().contains("linearly dependent"));
    }

    #[test]
    fn multiplicity_sum_equals_degree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0x5EED);
        for _ in 0..50 {
            let deg = rng.gen_range(1..=8);
            let coeffs: Vec<Complex64> = (0..=deg)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let p = FloatPoly::new(coeffs);
            if p.degree().is_none_or(|d| d == 0) {
                continue;
            }
            let r = float_roots(&p, &RootConfig::default()).unwrap();
            let total: usize = r.iter().map(|x| x.multiplicity).sum();
            assert_eq!(total, p.degree().unwrap());
        }
    }

    #[test]
    fn reexpansion_reproduces_coefficients() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0xC0FFEE);
        for _ in 0..60 {
            let deg = rng.gen_range(1..=8usize);
            let p = ExactPoly::new(
                (0..=deg)
                    .map(|_| {
                        ExactComplex::from_ratios(
                            rng.gen_range(-5..=5),
                            rng.gen_range(1..=3),
                            rng.gen_range(-5..=5),
                            rng.gen_range(1..=3),
                        )
                    })
                    .collect(),
            );
            let Some(d) = p.degree().filter(|&d| d > 0) else {
                continue;
            };
            let (roots, _) = exact_roots(&p, &RootConfig::default()).unwrap();
            let flat: Vec<Complex64> = roots
                .iter()
                .flat_map(|r| std::iter::repeat(r.location).take(r.multiplicity))
                .collect();
            assert_eq!(flat.len(), d);
            let monic = FloatPoly::from_roots(&flat);
            let pf = p.to_float();
            let lead = *pf.leading().unwrap();
            let scale = pf.coeff_scale();
            for k in 0..=d {
                let err = (monic.coeff(k) * lead - pf.coeff(k)).norm();
                assert!(
                    err <= 1e-8 * scale,
                    "coefficient {k} off by {err:.3e} (scale {scale:.3e})"
                );
            }
        }
    }

    #[test]
    fn exact_multiplicities_via_square_free() {
        // (z-1)^2 (z+2) over the rationals.
        let a = ExactPoly::from_integer_coeffs(&[(-1, 0), (1, 0)]);
        let b = ExactPoly::from_integer_coeffs(&[(2, 0), (1, 0)]);
        let p = &(&a * &a) * &b;
        let (roots, conv) = exact_roots(&p, &RootConfig::default()).unwrap();
        assert_eq!(conv, 0.0);
        assert_has_root(&roots, Complex64::new(1.0, 0.0), 2, 1e-10);
        assert_has_root(&roots, Complex64::new(-2.0, 0.0), 1, 1e-10);
    }

    #[test]
    fn roots_at_origin_are_exact() {
        // z^2 (z - 0.25)
        let p = FloatPoly::from_f64_coeffs(&[0.0, 0.0, -0.25, 1.0]);
        let r = float_roots(&p, &RootConfig::default()).unwrap();
        assert_has_root(&r, Complex64::ZERO, 2, 0.0);
        assert_has_root(&r, Complex64::new(0.25, 0.0), 1, 1e-12);
    }
}
