mod common;

use common::{random_uniform, random_weights};
use gromon_core::gromov::gm_exact;
use gromon_core::invariants::{
    cost_function, global_distribution, lower_bound_global, lower_bound_local_kantorovich, lower_bound_local_monge,
    local_map_cost, MapClass,
};
use gromon_core::scalar::{q, qi, Rational};
use gromon_core::transport::{solve_kantorovich, w1_cdf, CostMatrix, StepCDF};
use gromon_core::{FiniteMMSpace, PExponent, Scalar};
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The LP min Σ c_ij π_ij over couplings, solved by an off-the-shelf float simplex.
fn lp_oracle(c: &[Vec<f64>], a: &[f64], b: &[f64]) -> f64 {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Vec<_>> = c.iter().map(|row| row.iter().map(|&cij| lp.add_var(cij, (0.0, f64::INFINITY))).collect()).collect();
    for (i, ai) in a.iter().enumerate() {
        let terms: Vec<_> = vars[i].iter().map(|&v| (v, 1.0)).collect();
        lp.add_constraint(terms.as_slice(), ComparisonOp::Eq, *ai);
    }
    for (j, bj) in b.iter().enumerate() {
        let terms: Vec<_> = vars.iter().map(|r| (r[j], 1.0)).collect();
        lp.add_constraint(terms.as_slice(), ComparisonOp::Eq, *bj);
    }
    lp.solve().unwrap().objective()
}

#[test]
fn kantorovich_matches_float_lp() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let (n, m) = (rng.random_range(1..7), rng.random_range(1..7));
        let c: Vec<Vec<Rational>> = (0..n).map(|_| (0..m).map(|_| q(rng.random_range(0..20), 3)).collect()).collect();
        let a = random_weights(&mut rng, n);
        let b = random_weights(&mut rng, m);
        let cm = CostMatrix::new(c.clone()).unwrap();
        let (plan, v) = solve_kantorovich(&cm, &a, &b, 0.0).unwrap();
        plan.validate(&a, &b, 0.0).unwrap();
        assert_eq!(plan.cost(&c), v);
        let f = |xs: &[Rational]| xs.iter().map(|x| x.to_f64()).collect::<Vec<_>>();
        let cf: Vec<Vec<f64>> = c.iter().map(|r| f(r)).collect();
        let oracle = lp_oracle(&cf, &f(&a), &f(&b));
        assert!((v.to_f64() - oracle).abs() < 1e-9, "{v} vs {oracle}");
        // the float path of the same solver
        let (_, vf) = solve_kantorovich(&CostMatrix::new(cf).unwrap(), &f(&a), &f(&b), 1e-12).unwrap();
        assert!((vf - oracle).abs() < 1e-9);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn monge_bound_matches_permutation_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let n = rng.random_range(1..=6);
        let x = random_uniform(&mut rng, n);
        let y = random_uniform(&mut rng, n);
        let c = cost_function(&x, &y);
        let oracle = permutations(n)
            .into_iter()
            .map(|p| p.iter().enumerate().fold(qi(0), |acc, (i, &j)| acc + c.get(i, j) * q(1, n as i64)))
            .min()
            .unwrap();
        let a = lower_bound_local_monge(&x, &y, MapClass::Bijective).unwrap().into_finite().unwrap();
        assert_eq!(a.cost, oracle);
        assert_eq!(local_map_cost(&x, &y, &a.map).unwrap(), oracle);
    }
}

/// For equal-size uniform spaces the global distributions are n² equal atoms, so
/// W_p is the mean p-th power gap between the sorted distance lists.
fn sorted_quantile_oracle(x: &FiniteMMSpace<Rational>, y: &FiniteMMSpace<Rational>, p: u32) -> Rational {
    let list = |s: &FiniteMMSpace<Rational>| {
        let mut v: Vec<Rational> = (0..s.n()).flat_map(|i| (0..s.n()).map(move |j| (i, j))).map(|(i, j)| s.d(i, j).clone()).collect();
        v.sort();
        v
    };
    let (a, b) = (list(x), list(y));
    let n2 = a.len() as i64;
    a.iter().zip(&b).fold(qi(0), |acc, (u, v)| {
        let g = if u > v { u - v } else { v - u };
        acc + g.powu(p) / qi(n2)
    })
}

#[test]
fn global_bound_matches_sorted_distances() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..30 {
        let n = rng.random_range(1..=7);
        let x = random_uniform(&mut rng, n);
        let y = random_uniform(&mut rng, n);
        for p in 1..=3 {
            let v = lower_bound_global(&x, &y, PExponent::Finite(p)).unwrap();
            assert_eq!(v.power, sorted_quantile_oracle(&x, &y, p));
        }
    }
}

#[test]
fn w1_equals_mean_absolute_quantile_gap_on_a_grid() {
    // F = uniform on {0,1,2,3}, G = uniform on {1/2, 5/2}; W1 by quantiles on a grid of 1/4
    let f = StepCDF::from_weighted((0..4).map(|i| (qi(i), q(1, 4))).collect()).unwrap();
    let g = StepCDF::from_weighted(vec![(q(1, 2), q(1, 2)), (q(5, 2), q(1, 2))]).unwrap();
    let gaps = [q(1, 2), q(1, 2), q(1, 2), q(1, 2)];
    let oracle = gaps.iter().fold(qi(0), |a, b| a + b * q(1, 4));
    assert_eq!(w1_cdf(&f, &g), oracle);
}

#[test]
fn global_distribution_of_a_weighted_triangle() {
    let x = FiniteMMSpace::new(
        vec![vec![qi(0), qi(1), qi(2)], vec![qi(1), qi(0), qi(2)], vec![qi(2), qi(2), qi(0)]],
        vec![q(1, 2), q(1, 4), q(1, 4)],
    )
    .unwrap();
    let h = global_distribution(&x);
    // diagonal 1/4+1/16+1/16, pair (0,1) twice 1/8 each, pairs with 2 twice 1/8 + 1/16
    assert_eq!(h.breakpoints(), &[qi(0), qi(1), qi(2)]);
    assert_eq!(h.values(), &[q(3, 8), q(5, 8), qi(1)]);
}

fn uniform_space(n: usize) -> impl Strategy<Value = FiniteMMSpace<Rational>> {
    proptest::collection::vec(0i64..5, n * (n - 1) / 2).prop_map(move |vals| {
        let mut d = vec![vec![qi(0); n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                d[i][j] = q(4 + vals[k], 4);
                d[j][i] = d[i][j].clone();
                k += 1;
            }
        }
        FiniteMMSpace::uniform(d).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lower_bounds_sit_below_the_distance(
        (x, y) in (1usize..=3).prop_flat_map(|n| (uniform_space(2 * n), uniform_space(n)))
    ) {
        let gm = gm_exact(&x, &y, PExponent::Finite(1)).unwrap().value.into_finite().unwrap().power;
        let lg = lower_bound_global(&x, &y, PExponent::Finite(1)).unwrap().power;
        let lh = lower_bound_local_monge(&x, &y, MapClass::All).unwrap().into_finite().unwrap().cost;
        let (_, lu) = lower_bound_local_kantorovich(&x, &y).unwrap();
        prop_assert!(lg <= gm);
        prop_assert!(lu <= lh);
        prop_assert!(lh <= gm);
    }

    #[test]
    fn isomorphic_copies_have_zero_bounds(x in (1usize..=6).prop_flat_map(uniform_space), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..x.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let y = x.permuted(&perm);
        prop_assert!(lower_bound_global(&x, &y, PExponent::Finite(2)).unwrap().is_zero());
        prop_assert!(lower_bound_local_kantorovich(&x, &y).unwrap().1 == qi(0));
    }

    #[test]
    fn cdf_quantile_is_a_generalized_inverse(
        atoms in proptest::collection::vec((0i64..10, 1i64..4), 1..8),
        u_num in 0i64..=12,
    ) {
        let total: i64 = atoms.iter().map(|a| a.1).sum();
        let f = StepCDF::from_weighted(atoms.iter().map(|&(x, m)| (qi(x), q(m, total))).collect()).unwrap();
        let u = q(u_num, 12);
        let r = f.quantile(&u).unwrap();
        // F(r) > u unless u = 1, and F(r') <= u for every breakpoint r' < r
        if u < qi(1) {
            prop_assert!(f.eval(&r) > u);
        }
        for b in f.breakpoints() {
            if *b < r {
                prop_assert!(f.eval(b) <= u);
            }
        }
    }
}
