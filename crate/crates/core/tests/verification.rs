use num_complex::Complex64;
use proptest::prelude::*;

use fekete_core::ball::build_ball_simplex;
use fekete_core::cube::{cube_points, sylvester};
use fekete_core::torus::{fourier_matrix, torus_points};
use fekete_core::verification::{bound_check, fejer_check};
use fekete_core::{AnyMatrix, Domain, DomainPoint, PointSet, RealMatrix};

fn ball_point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.0f64..1.0, d).prop_map(|v| {
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1.0 {
            v.into_iter().map(|x| x / r).collect()
        } else {
            v
        }
    })
}

fn lebesgue_at(p: &PointSet, x: &DomainPoint) -> (f64, f64) {
    let a = p.lagrange_basis().unwrap().abs_values(x).unwrap();
    (a.iter().sum(), a.iter().map(|v| v * v).sum())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cauchy_schwarz_ball(y in ball_point(6)) {
        let p = build_ball_simplex(6).unwrap().to_point_set();
        let (l1, l2) = lebesgue_at(&p, &DomainPoint::Real(y));
        prop_assert!(l1 <= 7f64.sqrt() * l2.sqrt() + 1e-12);
        prop_assert!(l1 <= 7f64.sqrt() + 1e-9);
    }

    #[test]
    fn cauchy_schwarz_cube(x in proptest::collection::vec(-1.0f64..1.0, 7)) {
        let p = cube_points(&sylvester(3).unwrap()).unwrap().to_point_set();
        let (l1, l2) = lebesgue_at(&p, &DomainPoint::Real(x));
        prop_assert!(l1 <= 8f64.sqrt() * l2.sqrt() + 1e-12);
        prop_assert!(l1 <= 8f64.sqrt() + 1e-9);
    }

    #[test]
    fn cauchy_schwarz_torus(t in proptest::collection::vec(0.0f64..std::f64::consts::TAU, 4)) {
        let p = torus_points(&fourier_matrix(5).unwrap()).unwrap().to_point_set();
        let z: Vec<Complex64> = t.iter().map(|a| Complex64::from_polar(1.0, *a)).collect();
        let (l1, l2) = lebesgue_at(&p, &DomainPoint::Complex(z));
        prop_assert!((l2 - 1.0).abs() <= 1e-12);
        prop_assert!(l1 <= 5f64.sqrt() + 1e-9);
    }

    // A Fejér-passing set never has a sampled Lebesgue value above √(d+1);
    // perturbed sets usually fail the Fejér check, which is also fine.
    #[test]
    fn fejer_implies_upper_bound(noise in proptest::collection::vec(-0.05f64..0.05, 12), scale in 0.0f64..1.0) {
        let base = build_ball_simplex(3).unwrap();
        let pts = base.points();
        let moved = RealMatrix::from_fn(4, 3, |i, j| pts[(i, j)] + scale * noise[3 * i + j]);
        let rows: Vec<Vec<f64>> = moved.to_rows().into_iter().map(|r| {
            let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1.0 { r.into_iter().map(|x| x / n).collect() } else { r }
        }).collect();
        let p = PointSet::new(Domain::Ball, AnyMatrix::Real(RealMatrix::from_rows(&rows).unwrap())).unwrap();
        let fejer = fejer_check(&p, 400, 3).unwrap();
        if fejer.passed() {
            let mut worst = 0.0f64;
            for k in 0..200u64 {
                let y: Vec<f64> = (0..3).map(|j| ((k * 7 + j as u64 * 13) % 29) as f64 / 29.0 * 2.0 - 1.0).collect();
                let n = y.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
                let y: Vec<f64> = y.into_iter().map(|x| x / n).collect();
                worst = worst.max(lebesgue_at(&p, &DomainPoint::Real(y)).0);
            }
            let bounds = bound_check(3, worst);
            prop_assert!(bounds.check("upper_bound_sqrt_d_plus_1").unwrap().passed);
        }
    }
}
