//! Acceptance suite: one test per criterion, each at its stated tolerance,
//! printing a pass line (visible with `--nocapture`).
//!
//! Independent oracles live here: a power-method Perron solver for positive
//! matrices, closed-form iterates for the parabolic congruence, and the
//! defining-limit horofunction oracle.

use conegeo_core::cone::{ConeDescriptor, DualFunctional, Point};
use conegeo_core::dynamics::{
    iterate_orbit, omega_limit, polyhedral_dichotomy_check, OrbitMode,
};
use conegeo_core::horo::{
    check_wolff, eval_horofunction, horo_limit_oracle, jordan_frame_sequence,
    subgradient_functional, Horofunction,
};
use conegeo_core::maps::{apply, catalog, GaugeSpec, MapSpec};
use conegeo_core::metrics::{cross_ratio_hilbert, funk, hilbert, rfunk, thompson, MetricKind};
use conegeo_core::packed;
use conegeo_core::sampling::{random_boundary_point, random_interior_point};
use conegeo_core::spectral::{
    contraction_certificate, cw_lower_bound, cw_upper_bound, escape_rate, spectral_radius,
};
use conegeo_core::{m_ratio, order_unit_norm, ConeKind};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use std::time::Instant;

fn psd2_cone() -> Arc<ConeDescriptor> {
    ConeDescriptor::psd(2)
}

fn parabolic_map() -> MapSpec {
    MapSpec::congruence(psd2_cone(), vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()
}

fn psd2_point(cone: &Arc<ConeDescriptor>, a: f64, b: f64, c: f64) -> Point {
    cone.point(packed::pack(&DMatrix::from_row_slice(2, 2, &[a, b, b, c])))
        .unwrap()
}

fn polyhedral_cone() -> Arc<ConeDescriptor> {
    ConeDescriptor::polyhedral(
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, -1.0],
        ],
        vec![1.0, 1.0, 1.0],
    )
    .unwrap()
}

fn random_positive_matrix(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(0.1..1.1)).collect())
        .collect()
}

/// Power-method Perron oracle for entrywise-positive matrices: dominant
/// eigenvalue and sup-normalized positive eigenvector.
fn perron_oracle(a: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let n = a.len();
    let mut v = vec![1.0; n];
    let mut r = 0.0;
    for _ in 0..200_000 {
        let w: Vec<f64> = a.iter().map(|row| {
            row.iter().zip(&v).map(|(c, x)| c * x).sum::<f64>()
        }).collect();
        let norm = w.iter().cloned().fold(0.0f64, f64::max);
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let delta = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        v = next;
        r = norm;
        if delta < 1e-15 {
            break;
        }
    }
    (r, v)
}

#[test]
fn c01_parabolic_closed_form() {
    let start = Instant::now();
    let psd = psd2_cone();
    let f = parabolic_map();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..100 {
        let x = random_interior_point(&psd, &mut rng);
        let m = packed::unpack(&x.coords, 2);
        let (a, b, c) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
        let mut cur = x.clone();
        for k in 1..=100u32 {
            cur = apply(&f, &cur).unwrap();
            let kf = k as f64;
            let expect = psd2_point(&psd, a + 2.0 * kf * b + kf * kf * c, b + kf * c, c);
            let err = cur.sub(&expect).euclidean_norm();
            assert!(
                err <= 1e-12 * expect.euclidean_norm(),
                "k={k}: relative error {err:e}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "runtime {elapsed:?} >= 1 s");
    println!("acceptance 01 (parabolic closed form, k<=100, rel 1e-12): PASS in {elapsed:?}");
}

#[test]
fn c02_parabolic_denjoy_wolff_orbit() {
    let start = Instant::now();
    let psd = psd2_cone();
    let trace_gauge = GaugeSpec::DualFunctional(DualFunctional {
        coords: packed::pack(&DMatrix::identity(2, 2)),
    });
    let g = parabolic_map().normalized(trace_gauge).unwrap();
    let x0 = psd.unit_point();
    let trace = iterate_orbit(&g, &x0, 10_000, OrbitMode::Hilbert, &[], Some(1)).unwrap();

    let last = trace.records.last().unwrap();
    assert_eq!(last.k, 10_000);
    let target = packed::pack(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
    let dist: f64 = last
        .coords
        .iter()
        .zip(&target)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    assert!(dist <= 2e-4, "||g^k(I) - diag(1,0)|| = {dist:e}");

    let omega = omega_limit(&trace, 0.5, 1e-4, 202).unwrap();
    assert_eq!(omega.clusters.len(), 1, "expected a single cluster");
    assert!(omega.all_boundary);
    assert!(omega.hull_in_boundary);
    let phi = omega.separating_functional.as_ref().expect("separating functional");
    let dir: Vec<f64> = phi.coords.iter().map(|c| c / phi.norm()).collect();
    assert!(
        dir[0].abs() <= 1e-2 && dir[1].abs() <= 1e-2 && (dir[2] - 1.0).abs() <= 1e-2,
        "functional direction {dir:?} is not X_22"
    );
    for cl in &omega.clusters {
        let rep = psd.point(cl.representative.clone()).unwrap();
        let v = phi.apply(&rep);
        assert!(
            v.abs() <= 1e-6 * phi.norm() * rep.euclidean_norm(),
            "phi does not annihilate the cluster: {v:e}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "runtime {elapsed:?} >= 5 s");
    println!("acceptance 02 (parabolic Denjoy-Wolff orbit + omega report): PASS in {elapsed:?}");
}

#[test]
fn c03_parabolic_horofunction_equalities() {
    let psd = psd2_cone();
    let f = parabolic_map();
    let z = psd2_point(&psd, 0.0, 0.0, 1.0);
    let y = psd2_point(&psd, 1.0, 0.0, 0.0);
    let h_f = Horofunction::funk_sym(z.clone()).unwrap();
    let h_r = Horofunction::rfunk(y.clone(), psd.unit_point()).unwrap();
    let h_h = Horofunction::hilbert_sym(y, z).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let samples: Vec<Point> = (0..100).map(|_| random_interior_point(&psd, &mut rng)).collect();
    let rep = check_wolff(&f, &h_f, &h_r, &h_h, &samples, 1.0).unwrap();
    assert!(rep.max_gap_funk <= 1e-10, "h_F gap {:e}", rep.max_gap_funk);
    assert!(rep.max_gap_rfunk <= 1e-10, "h_R gap {:e}", rep.max_gap_rfunk);
    assert!(rep.max_gap_hilbert <= 1e-10, "h_H gap {:e}", rep.max_gap_hilbert);
    println!("acceptance 03 (parabolic horofunction equalities <= 1e-10): PASS");
}

#[test]
fn c04_spectral_radius_vs_perron_oracle() {
    let start = Instant::now();
    let cone = ConeDescriptor::orthant(5);
    let u = cone.unit_point();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for trial in 0..50 {
        let m = random_positive_matrix(5, &mut rng);
        let (r_oracle, _) = perron_oracle(&m);
        let f = MapSpec::linear(Arc::clone(&cone), m).unwrap();
        let rep = spectral_radius(&f, &u, 1.0, 0.5, 1e-10).unwrap();
        assert!(
            (rep.r_hat - r_oracle).abs() <= 1e-8,
            "trial {trial}: r_hat {} vs oracle {r_oracle}",
            rep.r_hat
        );
        for w in rep.eps_trace.windows(2) {
            assert!(
                w[1].r_eps <= w[0].r_eps + 1e-9,
                "trial {trial}: r_eps not nondecreasing in eps"
            );
        }
        assert!(rep.interior_eigenvector_found);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "runtime {elapsed:?} >= 10 s");
    println!("acceptance 04 (spectral radius vs Perron oracle, 50x5x5, 1e-8): PASS in {elapsed:?}");
}

#[test]
fn c05_contraction_certificate() {
    let cone = ConeDescriptor::orthant(5);
    let u = cone.unit_point();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for trial in 0..20 {
        let m = random_positive_matrix(5, &mut rng);
        let f = MapSpec::linear(Arc::clone(&cone), m).unwrap();
        let m1 = m_ratio(&apply(&f, &u).unwrap(), &u).unwrap().0;
        let rep = spectral_radius(&f, &u, 1.0, 0.5, 1e-10).unwrap();
        for step in &rep.eps_trace {
            let bound = contraction_certificate(m1, step.eps);
            assert!(
                step.contraction <= bound + 1e-9,
                "trial {trial}, eps {:e}: measured {} > bound {bound}",
                step.eps,
                step.contraction
            );
        }
    }
    println!("acceptance 05 (contraction certificate along the continuation): PASS");
}

#[test]
fn c06_collatz_wielandt_sandwich() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for entry in catalog() {
        let cone = &entry.map.cone;
        let u = cone.unit_point();
        let rep = spectral_radius(&entry.map, &u, 1.0, 0.5, 1e-5).unwrap();
        let mut candidates = vec![u.clone()];
        for _ in 0..2 {
            candidates.push(random_interior_point(cone, &mut rng));
        }
        for y in &candidates {
            let lower = cw_lower_bound(&entry.map, y).unwrap();
            assert!(
                lower <= rep.r_hat + 1e-6,
                "{}: cw_lower {lower} above r_hat {}",
                entry.name,
                rep.r_hat
            );
            for k in [1usize, 3, 10] {
                let upper = cw_upper_bound(&entry.map, y, k).unwrap();
                assert!(
                    rep.r_hat <= upper + 1e-6,
                    "{}: cw_upper {upper} (k={k}) below r_hat {}",
                    entry.name,
                    rep.r_hat
                );
            }
        }
    }
    // the defective matrix attains the lower formula at the boundary vector
    let cone = ConeDescriptor::orthant(2);
    let a = MapSpec::linear(Arc::clone(&cone), vec![vec![2.0, 1.0], vec![0.0, 2.0]]).unwrap();
    let boundary = cone.point(vec![1.0, 0.0]).unwrap();
    let lower = cw_lower_bound(&a, &boundary).unwrap();
    assert!((lower - 2.0).abs() <= 1e-9, "cw_lower at (1,0): {lower}");
    println!("acceptance 06 (Collatz-Wielandt sandwich across the catalog): PASS");
}

#[test]
fn c07_metric_identity_suite() {
    let start = Instant::now();
    let trials = 10_000;
    let cones: Vec<(Arc<ConeDescriptor>, f64)> = vec![
        (ConeDescriptor::orthant(3), 1e-10),
        (polyhedral_cone(), 1e-10),
        (ConeDescriptor::lorentz(3), 1e-9),
        (ConeDescriptor::psd(2), 1e-9),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    for (cone, tol) in &cones {
        for _ in 0..trials {
            let x = random_interior_point(cone, &mut rng);
            let y = random_interior_point(cone, &mut rng);
            let z = random_interior_point(cone, &mut rng);
            let fxy = funk(&x, &y).unwrap();
            let fyx = funk(&y, &x).unwrap();
            let rf = rfunk(&x, &y).unwrap();
            let t = thompson(&x, &y).unwrap();
            let h = hilbert(&x, &y).unwrap();
            assert!((h - (fxy + rf)).abs() <= *tol);
            assert!((t - fxy.max(fyx)).abs() <= *tol);

            let a: f64 = rng.gen_range(0.1..10.0);
            let b: f64 = rng.gen_range(0.1..10.0);
            assert!((funk(&x.scaled(a), &y.scaled(b)).unwrap() - (fxy + a.ln() - b.ln())).abs() <= *tol);
            assert!((hilbert(&x.scaled(a), &y.scaled(b)).unwrap() - h).abs() <= *tol);

            assert!(funk(&x, &z).unwrap() <= fxy + funk(&y, &z).unwrap() + tol);
            assert!(rfunk(&x, &z).unwrap() <= rf + rfunk(&y, &z).unwrap() + tol);
            assert!(thompson(&x, &z).unwrap() <= t + thompson(&y, &z).unwrap() + tol);
            assert!(hilbert(&x, &z).unwrap() <= h + hilbert(&y, &z).unwrap() + tol);
        }
    }
    // nonexpansiveness under every catalog map
    for entry in catalog() {
        let cone = &entry.map.cone;
        let tol = match cone.kind {
            ConeKind::Orthant | ConeKind::Polyhedral { .. } => 1e-10,
            _ => 1e-9,
        };
        let g = entry.map.clone().normalized(GaugeSpec::OrderUnitNorm).unwrap();
        for _ in 0..trials {
            let x = random_interior_point(cone, &mut rng);
            let y = random_interior_point(cone, &mut rng);
            let fx = apply(&entry.map, &x).unwrap();
            let fy = apply(&entry.map, &y).unwrap();
            assert!(
                funk(&fx, &fy).unwrap() <= funk(&x, &y).unwrap() + tol,
                "{}: funk expanded",
                entry.name
            );
            assert!(
                thompson(&fx, &fy).unwrap() <= thompson(&x, &y).unwrap() + tol,
                "{}: thompson expanded",
                entry.name
            );
            let gx = apply(&g, &x).unwrap();
            let gy = apply(&g, &y).unwrap();
            assert!(
                hilbert(&gx, &gy).unwrap() <= hilbert(&x, &y).unwrap() + tol,
                "{}: hilbert expanded under the normalized map",
                entry.name
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "runtime {elapsed:?} >= 30 s");
    println!("acceptance 07 (metric identity suite, 1e4 trials/kind): PASS in {elapsed:?}");
}

#[test]
fn c08_cross_ratio_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for cone in [ConeDescriptor::orthant(3), polyhedral_cone()] {
        for _ in 0..1000 {
            let x = random_interior_point(&cone, &mut rng);
            let y = random_interior_point(&cone, &mut rng);
            let h = hilbert(&x, &y).unwrap();
            let cr = cross_ratio_hilbert(&x, &y).unwrap();
            assert!(
                (h - cr).abs() <= 1e-9 * h.max(1.0),
                "cross-ratio {cr} vs hilbert {h}"
            );
        }
    }
    println!("acceptance 08 (cross-ratio oracle == hilbert, 1e-9): PASS");
}

#[test]
fn c09_horofunction_limit_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let rfunk_ts: Vec<f64> = (30..=34).map(|k| 0.5f64.powi(k)).collect();
    let frame_ts: Vec<f64> = (11..=15).map(|k| 0.5f64.powi(k)).collect();

    // reverse-Funk constructions on every cone kind (any boundary target)
    for cone in [
        ConeDescriptor::orthant(3),
        polyhedral_cone(),
        ConeDescriptor::lorentz(3),
        ConeDescriptor::psd(2),
        ConeDescriptor::psd(3),
    ] {
        let b = cone.unit_point();
        for _ in 0..20 {
            let y = random_boundary_point(&cone, &mut rng);
            let x = random_interior_point(&cone, &mut rng);
            let seq: Vec<Point> = rfunk_ts
                .iter()
                .map(|t| y.scaled(1.0 - t).add(&b.scaled(*t)))
                .collect();
            let h = Horofunction::rfunk(y.clone(), b.clone()).unwrap();
            let oracle = horo_limit_oracle(MetricKind::RFunk, &seq, &b, &x).unwrap();
            let eval = eval_horofunction(&h, &x).unwrap();
            assert!((oracle - eval).abs() <= 1e-6, "hR: {oracle} vs {eval}");
        }
    }

    // Funk/Hilbert constructions through Jordan-frame sequences on the
    // symmetric cones, including Psd(2) and Psd(3)
    let mut frame_cases: Vec<(Arc<ConeDescriptor>, Point, Point)> = Vec::new();
    let orthant = ConeDescriptor::orthant(3);
    for _ in 0..7 {
        // disjoint supports on the orthant
        let split = rng.gen_range(1..3usize);
        let mut yc = vec![0.0; 3];
        let mut zc = vec![0.0; 3];
        for (i, (yv, zv)) in yc.iter_mut().zip(zc.iter_mut()).enumerate() {
            if i < split {
                *yv = rng.gen_range(0.2..1.0);
            } else {
                *zv = rng.gen_range(0.2..1.0);
            }
        }
        frame_cases.push((
            Arc::clone(&orthant),
            orthant.point(yc).unwrap(),
            orthant.point(zc).unwrap(),
        ));
    }
    let lorentz = ConeDescriptor::lorentz(3);
    for _ in 0..7 {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let y = lorentz
            .point(vec![0.5, 0.5 * theta.cos(), 0.5 * theta.sin()])
            .unwrap();
        let z = lorentz
            .point(vec![0.5, -0.5 * theta.cos(), -0.5 * theta.sin()])
            .unwrap();
        frame_cases.push((Arc::clone(&lorentz), y, z));
    }
    let psd2 = ConeDescriptor::psd(2);
    for _ in 0..7 {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let q = DMatrix::from_row_slice(
            2,
            2,
            &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()],
        );
        let c1 = q.column(0) * q.column(0).transpose();
        let c2 = q.column(1) * q.column(1).transpose();
        frame_cases.push((
            Arc::clone(&psd2),
            psd2.point(packed::pack(&c1)).unwrap(),
            psd2.point(packed::pack(&c2)).unwrap(),
        ));
    }
    let psd3 = ConeDescriptor::psd(3);
    for case in 0..6 {
        let g = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0f64..1.0));
        let q = g.qr().q();
        let c: Vec<DMatrix<f64>> = (0..3)
            .map(|i| q.column(i) * q.column(i).transpose())
            .collect();
        let (y, z) = if case % 2 == 0 {
            // y rank 1, z rank 2
            let mu3: f64 = rng.gen_range(0.3..1.0);
            (c[0].clone(), &c[1] * 1.0 + &c[2] * mu3)
        } else {
            // y rank 2, z rank 1
            let l2: f64 = rng.gen_range(0.3..1.0);
            (&c[0] * 1.0 + &c[1] * l2, c[2].clone())
        };
        frame_cases.push((
            Arc::clone(&psd3),
            psd3.point(packed::pack(&y)).unwrap(),
            psd3.point(packed::pack(&z)).unwrap(),
        ));
    }

    for (cone, y, z) in &frame_cases {
        let b = cone.unit_point();
        let x = random_interior_point(cone, &mut rng);
        let seq = jordan_frame_sequence(y, z, &frame_ts).unwrap();

        let h_f = Horofunction::funk_sym(z.clone()).unwrap();
        let of = horo_limit_oracle(MetricKind::Funk, &seq, &b, &x).unwrap();
        let ef = eval_horofunction(&h_f, &x).unwrap();
        assert!((of - ef).abs() <= 1e-6, "hF: oracle {of} vs eval {ef}");

        let h_r = Horofunction::rfunk(y.clone(), b.clone()).unwrap();
        let or = horo_limit_oracle(MetricKind::RFunk, &seq, &b, &x).unwrap();
        let er = eval_horofunction(&h_r, &x).unwrap();
        assert!((or - er).abs() <= 1e-6, "hR: oracle {or} vs eval {er}");

        let h_h = Horofunction::hilbert_sym(y.clone(), z.clone()).unwrap();
        let oh = horo_limit_oracle(MetricKind::Hilbert, &seq, &b, &x).unwrap();
        let eh = eval_horofunction(&h_h, &x).unwrap();
        assert!((oh - eh).abs() <= 1e-6, "hH: oracle {oh} vs eval {eh}");
    }
    println!("acceptance 09 (horofunction limit oracle, 1e-6): PASS");
}

#[test]
fn c10_wolff_inequalities() {
    // parabolic triple on Psd(2)
    let psd = psd2_cone();
    let f = parabolic_map();
    let z = psd2_point(&psd, 0.0, 0.0, 1.0);
    let y = psd2_point(&psd, 1.0, 0.0, 0.0);
    let h_f = Horofunction::funk_sym(z.clone()).unwrap();
    let h_r = Horofunction::rfunk(y.clone(), psd.unit_point()).unwrap();
    let h_h = Horofunction::hilbert_sym(y, z).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let samples: Vec<Point> = (0..100).map(|_| random_interior_point(&psd, &mut rng)).collect();
    let rep = check_wolff(&f, &h_f, &h_r, &h_h, &samples, 1.0).unwrap();
    assert!(rep.max_violation_funk <= 1e-9);
    assert!(rep.max_violation_rfunk <= 1e-9);
    assert!(rep.max_violation_hilbert <= 1e-9);

    // orthant example A/2 with h_R(x) = -log x_1
    let cone = ConeDescriptor::orthant(2);
    let half_a = MapSpec::linear(Arc::clone(&cone), vec![vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
    let yo = cone.point(vec![1.0, 0.0]).unwrap();
    let zo = cone.point(vec![0.0, 1.0]).unwrap();
    let h_fo = Horofunction::funk_sym(zo.clone()).unwrap();
    let h_ro = Horofunction::rfunk(yo.clone(), cone.unit_point()).unwrap();
    let h_ho = Horofunction::hilbert_sym(yo, zo).unwrap();
    let samples_o: Vec<Point> = (0..100).map(|_| random_interior_point(&cone, &mut rng)).collect();
    let rep_o = check_wolff(&half_a, &h_fo, &h_ro, &h_ho, &samples_o, 1.0).unwrap();
    assert!(rep_o.max_violation_funk <= 1e-9);
    assert!(rep_o.max_violation_rfunk <= 1e-9);
    assert!(rep_o.max_violation_hilbert <= 1e-9);

    // subgradient bound log phi(f^k(x)) <= h_F(x) + k log r along 1e3-step
    // orbits (both maps have unit spectral radius)
    for (map, h_f_ref, cone_ref) in [(&f, &h_f, &psd), (&half_a, &h_fo, &cone)] {
        let phi = subgradient_functional(h_f_ref).unwrap();
        for _ in 0..5 {
            let x0 = random_interior_point(cone_ref, &mut rng);
            let bound = eval_horofunction(h_f_ref, &x0).unwrap();
            let mut cur = x0.clone();
            let mut log_gauge = 0.0f64;
            for _ in 0..1000 {
                cur = apply(map, &cur).unwrap();
                let g = order_unit_norm(&cur);
                log_gauge += g.ln();
                cur = cur.scaled(1.0 / g);
                let log_phi = log_gauge + phi.apply(&cur).ln();
                assert!(
                    log_phi <= bound + 1e-8,
                    "subgradient bound violated: {log_phi} > {bound}"
                );
            }
        }
    }
    println!("acceptance 10 (Wolff inequalities + subgradient orbit bound): PASS");
}

#[test]
fn c11_escape_rate() {
    // per-map reference rates and starts; the parabolic congruence needs a
    // start aligned with its invariant direction for the k = 1e3 estimate
    let psd = psd2_cone();
    let poly_r = perron_oracle(&[
        vec![1.0, 1.0, 0.0],
        vec![1.0, 2.0, 1.0],
        vec![1.0, 1.0, 1.0],
    ])
    .0;
    let lorentz_top = 2.0 + (0.34f64).sqrt();
    for entry in catalog() {
        let cone = &entry.map.cone;
        let (log_r, x0) = match entry.name {
            "perron2" => (2.0f64.ln(), cone.unit_point()),
            "defective2" => (2.0f64.ln(), cone.unit_point()),
            "parabolic_psd2" => (0.0, psd2_point(&psd, 1.0, 0.0, 1e-6)),
            "reducible_diag" => (0.0, cone.unit_point()),
            "topical_minmax" => (0.0, cone.unit_point()),
            "polyhedral_positive" => (poly_r.ln(), cone.unit_point()),
            "lorentz_quadratic" => (2.0 * lorentz_top.ln(), cone.unit_point()),
            other => panic!("unlisted catalog map {other}"),
        };
        let est = escape_rate(&entry.map, &x0, 1000).unwrap();
        assert!(
            (est - log_r).abs() <= 1e-2,
            "{}: escape {est} vs log r {log_r}",
            entry.name
        );
    }

    // positive matrices from the Perron eigenvector: 1e-6 at k = 100
    let cone = ConeDescriptor::orthant(5);
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    for _ in 0..10 {
        let m = random_positive_matrix(5, &mut rng);
        let (r, v) = perron_oracle(&m);
        let f = MapSpec::linear(Arc::clone(&cone), m).unwrap();
        let x = cone.point(v).unwrap();
        let est = escape_rate(&f, &x, 100).unwrap();
        assert!(
            (est - r.ln()).abs() <= 1e-6,
            "positive matrix: escape {est} vs {}",
            r.ln()
        );
    }
    println!("acceptance 11 (escape rate vs log spectral radius): PASS");
}

#[test]
fn c12_polyhedral_dichotomy() {
    for entry in catalog() {
        if !matches!(
            entry.map.cone.kind,
            ConeKind::Orthant | ConeKind::Polyhedral { .. }
        ) {
            continue;
        }
        let cone = &entry.map.cone;
        let u = cone.unit_point();
        let rep = spectral_radius(&entry.map, &u, 1.0, 0.5, 1e-5).unwrap();
        let f = entry.map.clone().scaled(1.0 / rep.r_hat).unwrap();
        let x0 = cone.unit_point().scaled(1.5);
        let r = polyhedral_dichotomy_check(&f, &x0, 10_000).unwrap();
        assert!(!r.violation, "{}: dichotomy violation flagged", entry.name);
    }

    // Proposition-style witness: h_R drops below h_R(x0) - 5 along the
    // unbounded A/2 orbit
    let cone = ConeDescriptor::orthant(2);
    let half_a = MapSpec::linear(Arc::clone(&cone), vec![vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
    let h_r = Horofunction::rfunk(cone.point(vec![1.0, 0.0]).unwrap(), cone.unit_point()).unwrap();
    let x0 = cone.point(vec![1.0, 1.0]).unwrap();
    let h0 = eval_horofunction(&h_r, &x0).unwrap();
    let trace = iterate_orbit(
        &half_a,
        &x0,
        10_000,
        OrbitMode::Thompson,
        std::slice::from_ref(&h_r),
        Some(1),
    )
    .unwrap();
    let reached = trace
        .records
        .iter()
        .any(|r| r.horo_values[0].is_finite() && r.horo_values[0] < h0 - 5.0);
    assert!(reached, "h_R never dropped below h_R(x0) - 5");
    println!("acceptance 12 (polyhedral dichotomy + unbounded-orbit witness): PASS");
}

#[test]
fn c13_harness_determinism() {
    use conegeo_cli::{run, ExperimentConfig};

    let configs = [
        r#"{
            "cone": { "kind": "psd", "n": 2 },
            "map": { "kind": "congruence", "m": [[1.0, 1.0], [0.0, 1.0]] },
            "task": "dw-report",
            "params": {
                "starts": [[1.0, 0.0, 1.0], [2.0, 0.0, 1.0]],
                "k_max": 2000,
                "gauge": { "kind": "dual", "phi": [1.0, 0.0, 1.0] }
            },
            "output": "dw.json",
            "seed": 41
        }"#,
        r#"{
            "cone": { "kind": "orthant", "n": 2 },
            "map": { "kind": "linear", "matrix": [[1.0, 0.5], [0.0, 1.0]] },
            "task": "orbit",
            "params": {
                "x0": [1.0, 1.0], "mode": "thompson", "k_max": 500,
                "horo_y": [1.0, 0.0]
            },
            "output": "orbit.csv",
            "seed": 41
        }"#,
        r#"{
            "cone": { "kind": "orthant", "n": 2 },
            "map": { "kind": "linear", "matrix": [[1.0, 1.0], [1.0, 1.0]] },
            "task": "spectral",
            "params": {},
            "output": "spectral.json",
            "seed": 41
        }"#,
    ];
    for (i, text) in configs.iter().enumerate() {
        let cfg: ExperimentConfig = serde_json::from_str(text).unwrap();
        let artifact = match cfg.output.as_deref() {
            Some(p) => p.to_string(),
            None => unreachable!(),
        };
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let code_a = run(&cfg, dir_a.path()).unwrap();
        let code_b = run(&cfg, dir_b.path()).unwrap();
        assert_eq!(code_a, code_b);
        let bytes_a = std::fs::read(dir_a.path().join(&artifact)).unwrap();
        let bytes_b = std::fs::read(dir_b.path().join(&artifact)).unwrap();
        assert_eq!(bytes_a, bytes_b, "config {i}: artifacts differ between runs");
        assert!(!bytes_a.is_empty());
    }
    println!("acceptance 13 (deterministic artifacts under fixed seed): PASS");
}
