use flexcap_core::lp::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random LP that is feasible by construction: rows are built around a
/// known point inside the box.
fn random_lp(seed: u64, n: usize, m: usize) -> LpProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = LpProblem::new("rand");
    let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
    for j in 0..n {
        p.add_var(format!("x{j}"), 0.0, 10.0, rng.gen_range(-5.0..5.0));
    }
    for i in 0..m {
        let mut terms = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.5) {
                terms.push((VarId(j), rng.gen_range(-3.0..3.0)));
            }
        }
        let act: f64 = terms.iter().map(|(v, a)| a * x0[v.0]).sum();
        let (sense, rhs) = match rng.gen_range(0..3) {
            0 => (Sense::Le, act + rng.gen_range(0.0..2.0)),
            1 => (Sense::Ge, act - rng.gen_range(0.0..2.0)),
            _ => (Sense::Eq, act),
        };
        p.add_constraint(format!("c{i}"), terms, sense, rhs);
    }
    p
}

fn solver() -> Solver {
    Solver::register(Box::new(ReferenceSimplex::default())).unwrap()
}

#[test]
fn toy_examples() {
    // min x + 2y, x + y >= 2, x <= 1.5
    let mut p = LpProblem::new("t");
    let x = p.add_var("x", 0.0, 1.5, 1.0);
    let y = p.add_var("y", 0.0, f64::INFINITY, 2.0);
    let r = p.add_constraint("c", vec![(x, 1.0), (y, 1.0)], Sense::Ge, 2.0);
    let s = solver().solve(&p).unwrap();
    assert!((s.objective - 2.5).abs() < 1e-9);
    assert!((s.duals[r.0] - 2.0).abs() < 1e-9);

    let mut q = LpProblem::new("inf");
    let x = q.add_var("x", 0.0, 1.0, 1.0);
    q.add_constraint("c", vec![(x, 1.0)], Sense::Ge, 2.0);
    assert_eq!(solver().solve(&q).unwrap().status, LpStatus::Infeasible);

    let mut u = LpProblem::new("unb");
    let x = u.add_var("x", 0.0, f64::INFINITY, -1.0);
    let y = u.add_var("y", 0.0, f64::INFINITY, 0.0);
    u.add_constraint("c", vec![(x, 1.0), (y, -1.0)], Sense::Le, 1.0);
    assert_eq!(solver().solve(&u).unwrap().status, LpStatus::Unbounded);
}

#[test]
fn size_guard_rejects_large_models() {
    let p = random_lp(1, 30, 10);
    let small = ReferenceSimplex::new(SimplexOptions {
        size_limit: 20,
        ..Default::default()
    });
    assert!(matches!(small.solve_raw(&p), Err(LpError::SizeGuard { .. })));
}

#[test]
fn interchange_round_trip_preserves_the_optimum() {
    let p = random_lp(9, 15, 10);
    let bytes = export_interchange(&p).unwrap();
    let q = import_interchange(&bytes).unwrap();
    assert_eq!(export_interchange(&q).unwrap(), bytes);
    let a = solver().solve(&p).unwrap();
    let b = solver().solve(&q).unwrap();
    assert_eq!(a.objective, b.objective);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_lps_meet_the_contract(seed in any::<u64>(), n in 2usize..20, m in 1usize..15) {
        let p = random_lp(seed, n, m);
        let s = solver().solve(&p).unwrap();
        prop_assert!(s.is_optimal());
        let rep = assess(&p, &s, &Tolerances::default());
        prop_assert!(rep.within(&Tolerances::default()), "{:?}", rep);
        // Bland's rule reaches the same optimum
        let bland = ReferenceSimplex::new(SimplexOptions { always_bland: true, ..Default::default() });
        let t = bland.solve_raw(&p).unwrap();
        prop_assert!((t.objective - s.objective).abs() <= 1e-6 * (1.0 + s.objective.abs()));
    }
}
