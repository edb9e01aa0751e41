mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use zonolat::cli::files::{ProblemFile, SolutionFile};
use zonolat::constructions::incidence_matrix;
use zonolat::mmcc::{compute_lambda, cost, mean_cost};
use zonolat::oracle::{brute_force_cvp, check_tu, enumerate_primitive_chains, OracleLimits};
use zonolat::rational::{int, to_rational_vec};
use zonolat::simplex::{solve_lp, LpProblem, LpStatus};
use zonolat::{conformal_decompose, kernel_basis, solve_cvp, Chain, Rational, SolveOptions};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_lattice_vector(rng: &mut ChaCha8Rng, lattice: &zonolat::ZonotopalLattice, spread: i64) -> Vec<i64> {
    let mut v = vec![0i64; lattice.dim()];
    for b in lattice.basis() {
        let c = rng.gen_range(-spread..=spread);
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += c * bi;
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_matches_brute_force(seed in any::<u64>(), family in 0usize..6) {
        let (_, inst) = random_instance(&mut rng(seed), family);
        let sol = solve_cvp(&inst, &SolveOptions::default()).unwrap();
        let limits = OracleLimits { max_rank: 10, ..OracleLimits::default() };
        let x = brute_force_cvp(&inst, 1, &limits).unwrap();
        prop_assert_eq!(inst.objective(&x), sol.distance_sq.clone());
        prop_assert!(inst.lattice().contains(&sol.closest));
        prop_assert!(sol.final_lambda == int(0));
        prop_assert_eq!(compute_lambda(&sol.closest, &inst).unwrap().0, int(0));
    }

    #[test]
    fn projection_is_orthogonal_and_idempotent(seed in any::<u64>(), family in 0usize..6) {
        let mut r = rng(seed);
        let (_, lat) = random_lattice(&mut r, family);
        let t = random_target(&mut r, lat.dim());
        let p = lat.project(&t).unwrap();
        prop_assert!(lat.in_span(&p));
        prop_assert_eq!(lat.project(&p).unwrap(), p.clone());
        let residual: Vec<Rational> = t.iter().zip(&p).map(|(a, b)| a - b).collect();
        for b in lat.basis() {
            prop_assert_eq!(lat.inner(&residual, &to_rational_vec(b)).unwrap(), int(0));
        }
    }

    #[test]
    fn cost_is_objective_difference(seed in any::<u64>(), family in 0usize..6) {
        let mut r = rng(seed);
        let (_, inst) = random_instance(&mut r, family);
        let chains = enumerate_primitive_chains(inst.lattice(), &OracleLimits::default()).unwrap();
        prop_assume!(!chains.is_empty());
        let v = random_lattice_vector(&mut r, inst.lattice(), 5);
        let u = &chains[r.gen_range(0..chains.len())];
        let moved: Vec<i64> = v.iter().zip(u.coords()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(inst.objective(&moved) - inst.objective(&v), cost(&v, u, &inst));
    }

    #[test]
    fn lambda_lp_matches_enumerated_mean_costs(seed in any::<u64>(), family in 0usize..6) {
        let mut r = rng(seed);
        let (_, inst) = random_instance(&mut r, family);
        let chains = enumerate_primitive_chains(inst.lattice(), &OracleLimits::default()).unwrap();
        prop_assume!(!chains.is_empty());
        let v = random_lattice_vector(&mut r, inst.lattice(), 3);
        let best = chains.iter().map(|u| mean_cost(&v, u, &inst)).min().unwrap();
        let expected = if best < int(0) { -best } else { int(0) };
        prop_assert_eq!(compute_lambda(&v, &inst).unwrap().0, expected);
    }

    #[test]
    fn conformal_parts_sum_and_agree_in_sign(seed in any::<u64>(), family in 0usize..6) {
        let mut r = rng(seed);
        let (_, lat) = random_lattice(&mut r, family);
        let v = random_lattice_vector(&mut r, &lat, 3);
        let parts = conformal_decompose(&Chain::new(v.clone(), &lat).unwrap(), &lat).unwrap();
        let mut sum = vec![0i64; lat.dim()];
        for p in &parts {
            for (i, &c) in p.coords().iter().enumerate() {
                prop_assert!(c == 0 || c * v[i] > 0);
                sum[i] += c;
            }
        }
        prop_assert_eq!(sum, v);
    }

    #[test]
    fn kernel_basis_spans_kernel(seed in any::<u64>()) {
        let d = random_digraph(&mut rng(seed), 6, 9);
        let m = incidence_matrix(&d).unwrap();
        let basis = kernel_basis(&m);
        prop_assert_eq!(basis.len(), d.arc_count() - m.rank());
        for b in &basis {
            prop_assert!(m.mul_int(b).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn incidence_and_network_matrices_are_tu(seed in any::<u64>()) {
        let d = random_connected_digraph(&mut rng(seed), 6, 9);
        prop_assert!(check_tu(&incidence_matrix(&d).unwrap()).unwrap());
        let net = zonolat::TuMatrix::asserted(d.fundamental_cycles(), d.arc_count()).unwrap();
        prop_assert!(check_tu(&net).unwrap());
    }

    #[test]
    fn lp_optimum_beats_known_feasible_point(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vars = r.gen_range(2..6);
        let rows = r.gen_range(1..4);
        let x0: Vec<Rational> = (0..vars).map(|_| int(r.gen_range(0..4))).collect();
        let mut lp = LpProblem::new((0..vars).map(|_| int(r.gen_range(-3..=5))).collect());
        for _ in 0..rows {
            let row: Vec<Rational> = (0..vars).map(|_| int(r.gen_range(-2..=2))).collect();
            let rhs: Rational = row.iter().zip(&x0).map(|(a, b)| a * b).sum();
            lp.add_equality(row, rhs);
        }
        lp.upper = vec![Some(int(6)); vars];
        let res = solve_lp(&lp).unwrap();
        prop_assert_eq!(res.status, LpStatus::Optimal);
        let x = res.vertex.unwrap();
        let at_x0: Rational = lp.objective.iter().zip(&x0).map(|(a, b)| a * b).sum();
        prop_assert!(res.optimum.clone().unwrap() <= at_x0);
        for (row, rhs) in lp.constraints.iter().zip(&lp.rhs) {
            let lhs: Rational = row.iter().zip(&x).map(|(a, b)| a * b).sum();
            prop_assert_eq!(&lhs, rhs);
        }
        prop_assert!(x.iter().all(|xi| *xi >= int(0) && *xi <= int(6)));
    }

    #[test]
    fn files_round_trip(seed in any::<u64>(), family in 0usize..6) {
        let mut r = rng(seed);
        let (name, inst) = random_instance(&mut r, family);
        let mut p = ProblemFile::from_lattice(name, inst.lattice());
        p.t = inst.target().iter().cloned().map(zonolat::cli::files::RationalText).collect();
        prop_assert_eq!(ProblemFile::parse(&p.to_json()).unwrap(), p);
        let sol = solve_cvp(&inst, &SolveOptions { certify: false, ..SolveOptions::default() }).unwrap();
        let s = SolutionFile::from_solution(&sol, Some(true));
        prop_assert_eq!(SolutionFile::parse(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn strict_voronoi_counts_ignore_weights(seed in any::<u64>(), family in 0usize..6) {
        let mut r = rng(seed);
        let (_, lat) = random_lattice(&mut r, family);
        let reweighted = lat.with_weights(random_weights(&mut r, lat.dim(), 8, 4)).unwrap();
        let limits = OracleLimits::default();
        prop_assert_eq!(
            enumerate_primitive_chains(&lat, &limits).unwrap(),
            enumerate_primitive_chains(&reweighted, &limits).unwrap()
        );
    }
}
