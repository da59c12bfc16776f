//! Orbit dynamics on cone interiors.
//!
//! Thompson-mode orbits iterate the raw map and store gauge-normalized
//! points plus a cumulative log-gauge, so norm-unbounded orbits never
//! overflow; Hilbert-mode orbits iterate the gauge-normalized map g = f/q(f)
//! on the slice {q = 1}. Omega-limit sets are clustered with a greedy
//! epsilon-net, tested for boundary attachment, and certified by a
//! separating positive functional (vanishing facets on polyhedral cones, a
//! common-kernel projector on Psd cones, the mirror functional on a Lorentz
//! ray).

use crate::cone::{
    dot, interior_gap, is_interior, order_unit_norm, projective_distance, ConeDescriptor,
    ConeKind, DualFunctional, Point,
};
use crate::error::{ConeError, Result};
use crate::horo::{eval_horofunction, Horofunction};
use crate::maps::{apply, GaugeSpec, MapKind, MapSpec};
use crate::packed;
use crate::sampling::random_convex_weights;
use crate::spectral::spectral_radius;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Relative interior gap below which an orbit point counts as boundary.
pub const BOUNDARY_ATTACH_TOL: f64 = 1e-6;
/// Log-gauge span that certifies an unbounded orbit.
pub const UNBOUNDED_LOG_SPAN: f64 = 20.0;
/// Default omega-limit clustering parameters.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;
pub const DEFAULT_CLUSTER_RADIUS: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitMode {
    Thompson,
    Hilbert,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitRecord {
    pub k: usize,
    /// Gauge-normalized coordinates (||.||_u = 1 in Thompson mode, q = 1 in
    /// Hilbert mode).
    pub coords: Vec<f64>,
    /// Cumulative log-gauge of the raw iterate.
    pub log_gauge: f64,
    /// Metric increments to the previous recorded point.
    pub thompson_step: Option<f64>,
    pub hilbert_step: Option<f64>,
    /// Relative interior gap of the normalized point.
    pub interior_gap: f64,
    /// Horofunction values at the raw iterate (Thompson mode adjusts the
    /// recorded gauge back in).
    pub horo_values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitTrace {
    #[serde(skip)]
    pub cone: Arc<ConeDescriptor>,
    pub mode: OrbitMode,
    pub k_max: usize,
    pub stride: usize,
    pub truncated: bool,
    pub records: Vec<OrbitRecord>,
}

fn horo_adjustment(h: &Horofunction, mode: OrbitMode, log_gauge: f64) -> f64 {
    if mode == OrbitMode::Hilbert {
        return 0.0;
    }
    match h {
        Horofunction::FunkSym { .. } => log_gauge,
        Horofunction::RFunk { .. } => -log_gauge,
        Horofunction::HilbertSym { .. } => 0.0,
    }
}

/// Iterate an orbit for `k_max` steps, recording every `stride`-th point
/// (default keeps at most ~20k records). In Hilbert mode the map must carry
/// a Normalized wrapper.
pub fn iterate_orbit(
    f: &MapSpec,
    x0: &Point,
    k_max: usize,
    mode: OrbitMode,
    record_horo: &[Horofunction],
    stride: Option<usize>,
) -> Result<OrbitTrace> {
    if !is_interior(x0) {
        return Err(ConeError::NotInterior { what: "x0" });
    }
    let stride = stride.unwrap_or_else(|| (k_max / 20_000).max(1));

    // split a Normalized wrapper into (inner, gauge) so the log-gauge of the
    // raw map is still accumulated in Hilbert mode
    let (step_map, gauge): (MapSpec, Option<GaugeSpec>) = match (&f.kind, mode) {
        (MapKind::Normalized { inner, gauge }, OrbitMode::Hilbert) => (
            MapSpec {
                kind: (**inner).clone(),
                cone: Arc::clone(&f.cone),
            },
            Some(gauge.clone()),
        ),
        (_, OrbitMode::Hilbert) => {
            return Err(ConeError::InvalidMap(
                "hilbert mode requires a Normalized map".into(),
            ))
        }
        (_, OrbitMode::Thompson) => (f.clone(), None),
    };

    let normalize = |p: &Point| -> Result<(Point, f64)> {
        let g = match &gauge {
            Some(q) => q.eval(p),
            None => order_unit_norm(p),
        };
        if !(g > 0.0) || !g.is_finite() {
            return Err(ConeError::GaugeCollapse);
        }
        Ok((p.scaled(1.0 / g), g))
    };

    let mut records = Vec::new();
    let mut truncated = false;
    let (mut cur, g0) = normalize(x0)?;
    let mut log_gauge = g0.ln();
    let mut last_recorded: Option<(Point, f64)> = None;

    // metric steps and horofunction values degrade to None/NaN once the
    // orbit sits too close to the boundary for the ratio computations; the
    // orbit itself keeps iterating
    let mut push_record = |k: usize,
                           cur: &Point,
                           log_gauge: f64,
                           last: &mut Option<(Point, f64)>| {
        let (t_step, h_step) = match last {
            Some((prev, prev_lg)) => {
                let fwd = crate::cone::m_ratio_raw(cur, prev).ln() + log_gauge - *prev_lg;
                let bwd = crate::cone::m_ratio_raw(prev, cur).ln() + *prev_lg - log_gauge;
                let t = fwd.max(bwd);
                let h = projective_distance(cur, prev).unwrap_or(f64::NAN);
                (t.is_finite().then_some(t), h.is_finite().then_some(h))
            }
            None => (None, None),
        };
        let rel_gap = interior_gap(cur) / order_unit_norm(cur);
        let mut horo_values = Vec::with_capacity(record_horo.len());
        for h in record_horo {
            let v = eval_horofunction(h, cur)
                .map(|v| v + horo_adjustment(h, mode, log_gauge))
                .unwrap_or(f64::NAN);
            horo_values.push(v);
        }
        records.push(OrbitRecord {
            k,
            coords: cur.coords.clone(),
            log_gauge,
            thompson_step: t_step,
            hilbert_step: h_step,
            interior_gap: rel_gap,
            horo_values,
        });
        *last = Some((cur.clone(), log_gauge));
    };

    push_record(0, &cur, log_gauge, &mut last_recorded);
    for k in 1..=k_max {
        let next = match apply(&step_map, &cur) {
            Ok(p) => p,
            Err(_) => {
                truncated = true;
                break;
            }
        };
        match normalize(&next) {
            Ok((p, g)) => {
                cur = p;
                log_gauge += g.ln();
            }
            Err(_) => {
                truncated = true;
                break;
            }
        }
        if k % stride == 0 || k == k_max {
            push_record(k, &cur, log_gauge, &mut last_recorded);
        }
    }
    Ok(OrbitTrace {
        cone: Arc::clone(&f.cone),
        mode,
        k_max,
        stride,
        truncated,
        records,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaCluster {
    pub representative: Vec<f64>,
    pub members: Vec<usize>,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaReport {
    pub clusters: Vec<OmegaCluster>,
    pub all_boundary: bool,
    pub separating_functional: Option<DualFunctional>,
    /// phi evaluated at the (interior) first orbit point, when a functional
    /// was found.
    pub functional_interior_value: Option<f64>,
    pub hull_in_boundary: bool,
    pub mode: OrbitMode,
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Greedy epsilon-net followed by single-linkage merging of nets whose
/// representatives sit within 2*radius: a slowly convergent tail then
/// collapses to one cluster while accumulation points separated by more than
/// 2*radius stay distinct. The representative is the latest (best converged)
/// member.
fn greedy_clusters(points: &[(usize, &[f64])], radius: f64) -> Vec<OmegaCluster> {
    let mut nets: Vec<(Vec<f64>, Vec<usize>)> = Vec::new();
    for (idx, p) in points {
        match nets.iter_mut().find(|(rep, _)| euclid(rep, p) <= radius) {
            Some((_, members)) => members.push(*idx),
            None => nets.push((p.to_vec(), vec![*idx])),
        }
    }
    // transitive merge
    let mut group: Vec<usize> = (0..nets.len()).collect();
    loop {
        let mut changed = false;
        for i in 0..nets.len() {
            for j in (i + 1)..nets.len() {
                if group[i] != group[j] && euclid(&nets[i].0, &nets[j].0) <= 2.0 * radius {
                    let (gi, gj) = (group[i], group[j]);
                    for g in group.iter_mut() {
                        if *g == gj {
                            *g = gi;
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let by_index: std::collections::BTreeMap<usize, Vec<usize>> =
        group
            .iter()
            .enumerate()
            .fold(std::collections::BTreeMap::new(), |mut m, (i, g)| {
                m.entry(*g).or_default().push(i);
                m
            });
    let index_of = |k: usize| points.iter().position(|(i, _)| *i == k).unwrap();
    let mut clusters: Vec<OmegaCluster> = by_index
        .values()
        .map(|net_ids| {
            let mut members: Vec<usize> = net_ids
                .iter()
                .flat_map(|&ni| nets[ni].1.iter().cloned())
                .collect();
            members.sort_unstable();
            let rep = points[index_of(*members.last().unwrap())].1.to_vec();
            let radius = members
                .iter()
                .map(|&k| euclid(&rep, points[index_of(k)].1))
                .fold(0.0, f64::max);
            OmegaCluster {
                representative: rep,
                members,
                radius,
            }
        })
        .collect();
    clusters.sort_by_key(|c| std::cmp::Reverse(c.members.len()));
    clusters
}

/// Structural separating functional annihilating all representatives, or
/// None when no certifiable functional exists.
pub fn fit_separating_functional(
    cone: &Arc<ConeDescriptor>,
    reps: &[Vec<f64>],
) -> Option<DualFunctional> {
    if reps.is_empty() {
        return None;
    }
    let vanish_tol = 1e-6;
    let phi = match &cone.kind {
        ConeKind::Orthant | ConeKind::Polyhedral { .. } => {
            let facets: Vec<Vec<f64>> = match &cone.kind {
                ConeKind::Orthant => (0..cone.ambient_dim)
                    .map(|i| {
                        let mut f = vec![0.0; cone.ambient_dim];
                        f[i] = 1.0;
                        f
                    })
                    .collect(),
                ConeKind::Polyhedral { facets } => facets.clone(),
                _ => unreachable!(),
            };
            let mut acc = vec![0.0; cone.ambient_dim];
            let mut found = false;
            for f in &facets {
                let len = dot(f, f).sqrt();
                let vanishes = reps.iter().all(|r| {
                    let scale = r.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-300);
                    (dot(f, r) / (len * scale)).abs() <= vanish_tol
                });
                if vanishes {
                    found = true;
                    for (a, c) in acc.iter_mut().zip(f) {
                        *a += c / len;
                    }
                }
            }
            if !found {
                return None;
            }
            DualFunctional { coords: acc }
        }
        ConeKind::Psd { n } => {
            // common kernel of the representatives = kernel of their sum
            let mut sum = nalgebra::DMatrix::zeros(*n, *n);
            for r in reps {
                sum += packed::unpack(r, *n);
            }
            let (vals, vecs) = packed::sym_eigen(&sum);
            let vmax = vals[0].max(1e-300);
            let mut proj = nalgebra::DMatrix::zeros(*n, *n);
            let mut rank = 0;
            for k in 0..*n {
                if vals[k].abs() <= vanish_tol * vmax {
                    let v = vecs.column(k);
                    proj += v * v.transpose();
                    rank += 1;
                }
            }
            if rank == 0 {
                return None;
            }
            DualFunctional {
                coords: packed::pack(&proj),
            }
        }
        ConeKind::Lorentz => {
            // a single boundary ray admits the mirror functional
            let first = &reps[0];
            let coherent = reps.iter().all(|r| {
                first
                    .iter()
                    .zip(r)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    <= 1e-6
            });
            if !coherent {
                return None;
            }
            let mut coords = first.clone();
            for c in coords[1..].iter_mut() {
                *c = -*c;
            }
            DualFunctional { coords }
        }
    };
    // certification: phi must annihilate every representative
    let pnorm = phi.norm().max(1e-300);
    for r in reps {
        let rnorm = r.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-300);
        if (phi.apply_coords(r) / (pnorm * rnorm)).abs() > vanish_tol {
            return None;
        }
    }
    Some(phi)
}

/// Cluster the orbit tail, test boundary attachment, fit a separating
/// functional and check that the convex hull of the representatives stays in
/// the boundary.
pub fn omega_limit(
    trace: &OrbitTrace,
    tail_fraction: f64,
    cluster_radius: f64,
    seed: u64,
) -> Result<OmegaReport> {
    if trace.records.len() < 10 {
        return Err(ConeError::NonConvergence {
            what: "trace too short for omega-limit analysis (need >= 10 records)".into(),
        });
    }
    let n = trace.records.len();
    let tail_start = ((1.0 - tail_fraction) * n as f64).floor() as usize;
    let tail: Vec<(usize, &[f64])> = trace.records[tail_start..]
        .iter()
        .map(|r| (r.k, r.coords.as_slice()))
        .collect();
    let clusters = greedy_clusters(&tail, cluster_radius);

    let rep_points: Vec<Point> = clusters
        .iter()
        .map(|c| trace.cone.point(c.representative.clone()))
        .collect::<Result<_>>()?;
    let all_boundary = rep_points.iter().all(|p| {
        interior_gap(p) / order_unit_norm(p).max(1e-300) <= BOUNDARY_ATTACH_TOL
    });

    let separating_functional = if all_boundary {
        fit_separating_functional(
            &trace.cone,
            &clusters.iter().map(|c| c.representative.clone()).collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let functional_interior_value = separating_functional
        .as_ref()
        .map(|phi| phi.apply_coords(&trace.records[0].coords));

    // hull test by random convex combinations of the representatives
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hull_in_boundary = all_boundary;
    if all_boundary && !rep_points.is_empty() {
        for _ in 0..1000 {
            let w = random_convex_weights(rep_points.len(), &mut rng);
            let mut comb = vec![0.0; trace.cone.ambient_dim];
            for (wi, p) in w.iter().zip(&rep_points) {
                for (c, pc) in comb.iter_mut().zip(&p.coords) {
                    *c += wi * pc;
                }
            }
            let cp = trace.cone.point(comb)?;
            if interior_gap(&cp) / order_unit_norm(&cp).max(1e-300) > BOUNDARY_ATTACH_TOL {
                hull_in_boundary = false;
                break;
            }
        }
    }
    Ok(OmegaReport {
        clusters,
        all_boundary,
        separating_functional,
        functional_interior_value,
        hull_in_boundary,
        mode: trace.mode,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitCase {
    /// Bounded log-gauge: pre-compact orbit closure.
    PreCompact,
    /// Log-gauge diverges: the raw orbit escapes to infinity in norm.
    Unbounded,
    /// k_max too small to classify.
    Undetermined,
}

/// Classify an orbit from its Thompson-mode log-gauge profile: unbounded if
/// the span exceeds UNBOUNDED_LOG_SPAN or the second half still grows by at
/// least 0.5; pre-compact if the growth has stalled below 0.05.
pub fn classify_orbit(trace: &OrbitTrace) -> (OrbitCase, f64, f64) {
    let lgs: Vec<f64> = trace.records.iter().map(|r| r.log_gauge).collect();
    let span = lgs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - lgs.iter().cloned().fold(f64::INFINITY, f64::min);
    let growth = lgs[lgs.len() - 1] - lgs[lgs.len() / 2];
    let case = if span > UNBOUNDED_LOG_SPAN || growth >= 0.5 {
        OrbitCase::Unbounded
    } else if growth.abs() <= 0.05 {
        OrbitCase::PreCompact
    } else {
        OrbitCase::Undetermined
    };
    (case, span, growth)
}

#[derive(Debug, Clone, Serialize)]
pub struct DwStartReport {
    pub start: Vec<f64>,
    pub case: OrbitCase,
    pub log_gauge_span: f64,
    pub log_gauge_growth: f64,
    pub thompson_omega: OmegaReport,
    pub hilbert_omega: OmegaReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct DenjoyWolffReport {
    /// False when the map has an interior eigenvector (the fixed-point-free
    /// hypotheses are unmet and no orbit analysis is performed).
    pub hypotheses_met: bool,
    pub r_hat: f64,
    pub interior_eigenvector_found: bool,
    pub starts: Vec<DwStartReport>,
    /// A single functional annihilating the union of all clusters.
    pub common_functional: Option<DualFunctional>,
    pub common_functional_annihilates: bool,
}

/// Full Denjoy-Wolff verification: confirm the absence of an interior
/// eigenvector, rescale to unit spectral radius, iterate every start in both
/// modes, aggregate omega reports, and re-fit one separating functional on
/// the union of all clusters.
pub fn denjoy_wolff_report(
    f: &MapSpec,
    gauge: GaugeSpec,
    starts: &[Point],
    k_max: usize,
    seed: u64,
) -> Result<DenjoyWolffReport> {
    let u = f.cone.unit_point();
    let spec = spectral_radius(f, &u, 1.0, 0.5, 1e-5)?;
    if spec.interior_eigenvector_found {
        return Ok(DenjoyWolffReport {
            hypotheses_met: false,
            r_hat: spec.r_hat,
            interior_eigenvector_found: true,
            starts: Vec::new(),
            common_functional: None,
            common_functional_annihilates: false,
        });
    }
    let fs = f.clone().scaled(1.0 / spec.r_hat)?;
    let fnorm = fs.clone().normalized(gauge)?;
    let mut start_reports = Vec::new();
    let mut union_reps: Vec<Vec<f64>> = Vec::new();
    for (i, x0) in starts.iter().enumerate() {
        let t_trace = iterate_orbit(&fs, x0, k_max, OrbitMode::Thompson, &[], None)?;
        let h_trace = iterate_orbit(&fnorm, x0, k_max, OrbitMode::Hilbert, &[], None)?;
        let t_omega = omega_limit(
            &t_trace,
            DEFAULT_TAIL_FRACTION,
            DEFAULT_CLUSTER_RADIUS,
            seed.wrapping_add(2 * i as u64),
        )?;
        let h_omega = omega_limit(
            &h_trace,
            DEFAULT_TAIL_FRACTION,
            DEFAULT_CLUSTER_RADIUS,
            seed.wrapping_add(2 * i as u64 + 1),
        )?;
        for c in t_omega.clusters.iter().chain(&h_omega.clusters) {
            union_reps.push(c.representative.clone());
        }
        let (case, span, growth) = classify_orbit(&t_trace);
        start_reports.push(DwStartReport {
            start: x0.coords.clone(),
            case,
            log_gauge_span: span,
            log_gauge_growth: growth,
            thompson_omega: t_omega,
            hilbert_omega: h_omega,
        });
    }
    let common_functional = fit_separating_functional(&f.cone, &union_reps);
    let common_functional_annihilates = common_functional.is_some();
    Ok(DenjoyWolffReport {
        hypotheses_met: true,
        r_hat: spec.r_hat,
        interior_eigenvector_found: false,
        starts: start_reports,
        common_functional,
        common_functional_annihilates,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DichotomyReport {
    pub unbounded: bool,
    pub bounded_boundary_accumulation: bool,
    pub violation: bool,
    pub log_gauge_span: f64,
}

/// Check the polyhedral dichotomy: no orbit may be simultaneously
/// norm-unbounded and have a bounded subsequence accumulating at a boundary
/// point. The map must already be rescaled to unit spectral radius.
pub fn polyhedral_dichotomy_check(
    f: &MapSpec,
    x0: &Point,
    k_max: usize,
) -> Result<DichotomyReport> {
    if !matches!(f.cone.kind, ConeKind::Orthant | ConeKind::Polyhedral { .. }) {
        return Err(ConeError::UnsupportedCone {
            op: "polyhedral_dichotomy_check",
        });
    }
    dichotomy_scan(f, x0, k_max)
}

/// The same scan without the cone-kind gate, for recording (never asserting)
/// outcomes on non-polyhedral cones.
pub fn dichotomy_scan(f: &MapSpec, x0: &Point, k_max: usize) -> Result<DichotomyReport> {
    let trace = iterate_orbit(f, x0, k_max, OrbitMode::Thompson, &[], None)?;
    let lgs: Vec<f64> = trace.records.iter().map(|r| r.log_gauge).collect();
    let lg_min = lgs.iter().cloned().fold(f64::INFINITY, f64::min);
    let lg_max = lgs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = lg_max - lg_min;
    let unbounded = span > UNBOUNDED_LOG_SPAN;

    // bounded band: raw iterates whose gauge stays within e^5 of the minimum
    let band: Vec<(usize, Vec<f64>)> = trace
        .records
        .iter()
        .filter(|r| r.log_gauge <= lg_min + 5.0)
        .map(|r| {
            let scale = (r.log_gauge - lg_min).exp();
            (r.k, r.coords.iter().map(|c| c * scale).collect())
        })
        .collect();
    let mut accumulation = false;
    if band.len() >= 10 {
        let refs: Vec<(usize, &[f64])> = band.iter().map(|(k, v)| (*k, v.as_slice())).collect();
        let clusters = greedy_clusters(&refs, 1e-6);
        for c in clusters {
            if c.members.len() >= 10 {
                let p = trace.cone.point(c.representative.clone())?;
                if interior_gap(&p) / order_unit_norm(&p).max(1e-300) <= BOUNDARY_ATTACH_TOL {
                    accumulation = true;
                    break;
                }
            }
        }
    }
    Ok(DichotomyReport {
        unbounded,
        bounded_boundary_accumulation: accumulation,
        violation: unbounded && accumulation,
        log_gauge_span: span,
    })
}
