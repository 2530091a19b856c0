use little_model::harness::{run_trials, ExperimentConfig, Problem};
use little_model::instance::{generate_instance, symmetrize, Distribution, LittleInstance, SymmetricInstance};
use little_model::solvers::*;
use proptest::prelude::*;

fn limits() -> SolverLimits {
    SolverLimits::default()
}

fn matrix(max_m: usize, max_n: usize) -> impl Strategy<Value = LittleInstance> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        prop::collection::vec(-3.0f64..3.0, m * n).prop_map(move |h| LittleInstance::from_row_major(m, n, h).unwrap())
    })
}

fn rows_of(inst: &LittleInstance) -> Vec<Vec<f64>> {
    (0..inst.m()).map(|i| inst.row(i).to_vec()).collect()
}

/// Subset-sum scan: `min_S |total - 2 sum(S)| / sqrt(n)`.
fn partition_oracle(h: &[f64]) -> f64 {
    let total: f64 = h.iter().sum();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << h.len()) {
        let s: f64 = h.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).sum();
        best = best.min((total - 2.0 * s).abs());
    }
    best / (h.len() as f64).sqrt()
}

/// `max_x (1/n) x^T h x` by direct enumeration of every sign vector.
fn full_quadratic_oracle(h: &LittleInstance) -> f64 {
    let n = h.n();
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        let x: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += h.get(i, j) * x[i] * x[j];
            }
        }
        best = best.max(s / n as f64);
    }
    best
}

fn sk_oracle(sym: &SymmetricInstance) -> f64 {
    let n = sym.n();
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        let x: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += sym.get(i, j) * x[i] * x[j];
            }
        }
        best = best.max(s / n as f64);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn walk_matches_brute_force(inst in matrix(4, 4)) {
        let max = solve_max(&inst, &limits()).unwrap().value;
        let minmax = solve_minmax(&inst, &limits()).unwrap().value;
        prop_assert!((max - brute_force_max(&inst).unwrap().value).abs() < 1e-12);
        prop_assert!((minmax - brute_force_minmax(&inst).unwrap().value).abs() < 1e-12);
    }

    #[test]
    fn sign_flips_are_absorbed(inst in matrix(5, 6), pick in 0usize..64) {
        let base_max = solve_max(&inst, &limits()).unwrap().value;
        let base_min = solve_minmax(&inst, &limits()).unwrap().value;
        let mut rows = rows_of(&inst);
        let col = pick % inst.n();
        for r in rows.iter_mut() {
            r[col] = -r[col];
        }
        let row = pick % inst.m();
        for v in rows[row].iter_mut() {
            *v = -*v;
        }
        let flipped = LittleInstance::from_rows(&rows).unwrap();
        prop_assert!((solve_max(&flipped, &limits()).unwrap().value - base_max).abs() < 1e-12);
        prop_assert!((solve_minmax(&flipped, &limits()).unwrap().value - base_min).abs() < 1e-12);
    }

    #[test]
    fn positive_scaling_is_equivariant(inst in matrix(5, 6), k in -3i32..4) {
        // Powers of two keep the scaling exact in floating point.
        let t = 2f64.powi(k);
        let scaled = LittleInstance::from_row_major(inst.m(), inst.n(), inst.as_row_major().iter().map(|v| v * t).collect()).unwrap();
        prop_assert_eq!(solve_max(&scaled, &limits()).unwrap().value, t * solve_max(&inst, &limits()).unwrap().value);
        prop_assert_eq!(solve_minmax(&scaled, &limits()).unwrap().value, t * solve_minmax(&inst, &limits()).unwrap().value);
    }

    #[test]
    fn adding_a_row_never_lowers_the_l1_maximum(inst in matrix(5, 6), extra in prop::collection::vec(-3.0f64..3.0, 6)) {
        let mut rows = rows_of(&inst);
        rows.push(extra[..inst.n()].to_vec());
        let bigger = LittleInstance::from_rows(&rows).unwrap();
        let before = solve_max(&inst, &limits()).unwrap().value * (inst.m() as f64).sqrt();
        let after = solve_max(&bigger, &limits()).unwrap().value * (bigger.m() as f64).sqrt();
        prop_assert!(after >= before - 1e-12);
    }

    #[test]
    fn sk_walk_matches_brute_force(n in 1usize..=4, h in prop::collection::vec(-3.0f64..3.0, 16)) {
        let sym = SymmetricInstance::from_upper(n, &h[..n * n]).unwrap();
        prop_assert!((solve_sk(&sym, &limits()).unwrap().value - sk_oracle(&sym)).abs() < 1e-12);
    }

    #[test]
    fn single_row_is_number_partitioning(h in prop::collection::vec(-5.0f64..5.0, 1..=12)) {
        let inst = LittleInstance::from_row_major(1, h.len(), h.clone()).unwrap();
        let got = solve_minmax(&inst, &limits()).unwrap().value;
        prop_assert!((got - partition_oracle(&h)).abs() < 1e-12);
    }
}

#[test]
fn number_partitioning_at_twenty() {
    for seed in 0..3 {
        let inst = generate_instance(1, 20, Distribution::Gaussian, seed).unwrap();
        let got = solve_minmax(&inst, &limits()).unwrap().value;
        let want = partition_oracle(inst.row(0));
        assert!((got - want).abs() < 1e-12, "seed {seed}: {got} vs {want}");
    }
}

#[test]
fn symmetrization_identity() {
    for (k, n) in (1..=12).cycle().take(30).enumerate() {
        let h = generate_instance(n, n, Distribution::Gaussian, 1000 + k as u64).unwrap();
        let via_sk = solve_quadratic(&h, &limits()).unwrap().value;
        let sk = solve_sk(&symmetrize(&h).unwrap(), &limits()).unwrap().value;
        let oracle = full_quadratic_oracle(&h);
        assert!((via_sk - oracle).abs() < 1e-10, "n = {n}: {via_sk} vs {oracle}");
        assert!((std::f64::consts::SQRT_2 * sk + h.trace() / n as f64 - oracle).abs() < 1e-10);
    }
}

#[test]
fn permuting_rows_and_columns_changes_nothing() {
    let inst = generate_instance(7, 9, Distribution::Gaussian, 31).unwrap();
    let rows = rows_of(&inst);
    let row_perm = [3, 0, 6, 1, 5, 2, 4];
    let col_perm = [8, 2, 5, 0, 7, 1, 4, 6, 3];
    let permuted: Vec<Vec<f64>> = row_perm.iter().map(|&i| col_perm.iter().map(|&j| rows[i][j]).collect()).collect();
    let permuted = LittleInstance::from_rows(&permuted).unwrap();
    for solve in [solve_max, solve_minmax] {
        let a = solve(&inst, &limits()).unwrap().scaled;
        let b = solve(&permuted, &limits()).unwrap().scaled;
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn sk_finite_size_band() {
    let cfg = ExperimentConfig::new(Problem::Sk, 20, 20, Distribution::Gaussian, 200, 2024).with_workers(8);
    let stats = run_trials(&cfg).unwrap();
    assert!((0.65..=0.80).contains(&stats.mean), "mean {}", stats.mean);
}

#[test]
fn results_reevaluate_to_their_value() {
    for seed in 0..5 {
        let inst = generate_instance(6, 10, Distribution::Bernoulli, seed).unwrap();
        for r in [solve_max(&inst, &limits()).unwrap(), solve_minmax(&inst, &limits()).unwrap()] {
            let y = r.assignment.y.as_ref().unwrap();
            assert!((bilinear(&inst, &r.assignment.x, y) - r.value).abs() < 1e-9);
            assert!((reduced_objective(&inst, &r.assignment.x) - r.value).abs() < 1e-9);
        }
        let sym = symmetrize(&generate_instance(10, 10, Distribution::Gaussian, seed).unwrap()).unwrap();
        let r = solve_sk(&sym, &limits()).unwrap();
        assert!((sk_objective(&sym, &r.assignment.x) - r.value).abs() < 1e-9);
    }
}
