//! Randomized invariants across bounds, membership and representations.

use exclusivity::bounds::{bounds_many, bounds_report, lovasz_theta};
use exclusivity::graph::{enumerate_maximal_cliques, maximal_stable_sets};
use exclusivity::ortho::{or_value, quantum_assignment, random_or, umbrella_or, verify_or};
use exclusivity::rational::{self, Rational};
use exclusivity::sets::{in_qstab, in_stab, in_th, is_perfect, result3_check, ProbabilityAssignment};
use exclusivity::{Execution, Graph, Settings, VertexSet};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.random_bool(density))
        .collect();
    Graph::from_edge_list(n, &edges, None).unwrap()
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| Rational::new(rng.random_range(4..=20).into(), 4.into())).collect()
}

#[test]
fn report_witnesses_and_bracket_width() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let settings = Settings::default();
    for _ in 0..40 {
        let n = rng.random_range(1..=11);
        let g = random_graph(&mut rng, n, 0.5);
        let g = g.clone().with_weights(random_weights(&mut rng, n)).unwrap();
        let r = bounds_report(&g, &settings).unwrap();
        assert!(g.is_stable(&r.alpha_witness));
        let achieved: Rational = r.alpha_witness.iter().map(|v| g.weight(v).clone()).sum();
        assert_eq!(achieved, r.alpha);
        for c in enumerate_maximal_cliques(&g) {
            let sum: Rational = c.iter().map(|v| r.alpha_star.assignment[v].clone()).sum();
            assert!(sum <= Rational::one());
        }
        assert!(r.alpha_star.assignment.iter().all(|p| *p >= Rational::zero()));
        let value: Rational = g.weights().iter().zip(&r.alpha_star.assignment).map(|(w, p)| w * p).sum();
        assert_eq!(value, r.alpha_star.value);
        assert!(r.theta.upper - r.theta.lower <= settings.tol);
    }
}

#[test]
fn scaling_weights_scales_all_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let settings = Settings::default();
    let c = Rational::new(7.into(), 3.into());
    for _ in 0..15 {
        let n = rng.random_range(2..=9);
        let g = random_graph(&mut rng, n, 0.5);
        let w = random_weights(&mut rng, n);
        let scaled: Vec<Rational> = w.iter().map(|x| x * &c).collect();
        let a = bounds_report(&g.clone().with_weights(w).unwrap(), &settings).unwrap();
        let b = bounds_report(&g.with_weights(scaled).unwrap(), &settings).unwrap();
        assert_eq!(b.alpha, &a.alpha * &c);
        assert_eq!(b.alpha_star.value, &a.alpha_star.value * &c);
        let cf = rational::to_f64(&c);
        assert!((b.theta.lower - a.theta.lower * cf).abs() <= settings.tol * cf * 2.0);
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let settings = Settings::default();
    let graphs: Vec<Graph> = (0..12).map(|_| random_graph(&mut rng, 9, 0.5)).collect();
    let seq = bounds_many(&graphs, &settings, Execution::Sequential);
    let par = bounds_many(&graphs, &settings, Execution::Parallel);
    for (a, b) in seq.iter().zip(&par) {
        let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
        assert_eq!(a.to_json(), b.to_json());
    }
    for g in &graphs {
        assert_eq!(
            is_perfect(g, &settings, Execution::Sequential).unwrap(),
            is_perfect(g, &settings, Execution::Parallel).unwrap()
        );
    }
}

/// Random convex combination of stable labelings.
fn stab_point(rng: &mut ChaCha8Rng, g: &Graph) -> ProbabilityAssignment {
    let sets = maximal_stable_sets(g);
    let coeffs: Vec<f64> = sets.iter().map(|_| rng.random_range(0.0..1.0)).collect();
    let total: f64 = coeffs.iter().sum::<f64>() + rng.random_range(0.0..0.5);
    let mut p = vec![0.0; g.order()];
    for (s, c) in sets.iter().zip(&coeffs) {
        for v in s.iter() {
            p[v] += c / total;
        }
    }
    ProbabilityAssignment::new(p).unwrap()
}

#[test]
fn stab_points_lie_in_every_body() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let settings = Settings::default();
    for k in 0..100 {
        let n = rng.random_range(1..=9);
        let g = random_graph(&mut rng, n, 0.5);
        let p = stab_point(&mut rng, &g);
        assert!(in_stab(&g, &p, &settings).unwrap().inside, "#{k}");
        assert!(in_th(&g, &p, &settings).unwrap().inside, "#{k}");
        assert!(in_qstab(&g, &p).unwrap().inside, "#{k}");
    }
}

#[test]
fn qstab_matches_direct_clique_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.random_range(1..=9);
        let g = random_graph(&mut rng, n, 0.5);
        let p: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0..=8u8)) / 8.0).collect();
        let exact: Vec<Rational> = p.iter().map(|&x| rational::from_f64(x).unwrap()).collect();
        let direct = enumerate_maximal_cliques(&g)
            .iter()
            .all(|c| c.iter().map(|v| exact[v].clone()).sum::<Rational>() <= Rational::one());
        let verdict = in_qstab(&g, &ProbabilityAssignment::new(p).unwrap()).unwrap();
        assert_eq!(verdict.inside, direct);
    }
}

#[test]
fn sampled_th_points_respect_theta() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let settings = Settings::default();
    for _ in 0..100 {
        let n = rng.random_range(2..=10);
        let g = random_graph(&mut rng, n, 0.5);
        let g = g.clone().with_weights(random_weights(&mut rng, n)).unwrap();
        let theta = lovasz_theta(&g, &settings).unwrap();
        let w = g.weights_f64();
        for _ in 0..5 {
            let rep = random_or(&g, &mut rng);
            assert!(verify_or(&g, &rep, 1e-9).unwrap().valid);
            assert!(or_value(&rep, &w) <= theta.upper + 1e-5);
            let p = quantum_assignment(&rep);
            assert!(in_qstab(&g, &p).unwrap().inside);
        }
    }
}

#[test]
fn quantum_points_are_in_th() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let settings = Settings::default();
    for _ in 0..30 {
        let n = rng.random_range(2..=8);
        let g = random_graph(&mut rng, n, 0.5);
        let p = quantum_assignment(&random_or(&g, &mut rng));
        assert!(in_th(&g, &p, &settings).unwrap().inside);
    }
}

#[test]
fn umbrellas() {
    for n in [5, 7, 9, 11, 13] {
        let rep = umbrella_or(n).unwrap();
        let g = Graph::cycle(n).unwrap();
        assert!(verify_or(&g, &rep, 1e-10).unwrap().valid);
        let c = (std::f64::consts::PI / n as f64).cos();
        assert!((or_value(&rep, &vec![1.0; n]) - n as f64 * c / (1.0 + c)).abs() < 1e-9);
    }
    let nine = or_value(&umbrella_or(9).unwrap(), &[1.0; 9]);
    assert!((nine - 4.360089).abs() < 1e-6);
    assert!(umbrella_or(6).is_err() && umbrella_or(3).is_err());
}

fn theta_equals_alpha_everywhere(g: &Graph, settings: &Settings) -> bool {
    let n = g.order();
    (1u64..1 << n).all(|mask| {
        let h = g.induced_subgraph(&VertexSet::from_mask(n, mask)).unwrap();
        let r = bounds_report(&h, settings).unwrap();
        let alpha = rational::to_f64(&r.alpha);
        (r.theta.lower - alpha).abs() <= 1e-6 && (r.theta.upper - alpha).abs() <= 1e-6
    })
}

#[test]
fn perfectness_agrees_with_induced_collapse() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let settings = Settings::default();
    let mut imperfect = 0;
    for _ in 0..40 {
        let n = rng.random_range(5..=7);
        let density = rng.random_range(0.3..0.7);
        let g = random_graph(&mut rng, n, density);
        let perfect = is_perfect(&g, &settings, Execution::Parallel).unwrap().perfect;
        imperfect += usize::from(!perfect);
        assert_eq!(perfect, theta_equals_alpha_everywhere(&g, &settings), "{g:?}");
    }
    assert!(imperfect > 0, "corpus should contain imperfect graphs");
}

#[test]
fn collapse_check_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let settings = Settings::default();
    for _ in 0..4 {
        let g = random_graph(&mut rng, 7, 0.5);
        let check = result3_check(&g, &settings, Execution::Parallel).unwrap();
        assert!(check.consistent, "{g:?}: {check:?}");
    }
}
