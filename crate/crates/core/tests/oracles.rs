mod common;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use permlab::combin::Combinations;
use permlab::estimators::{
    check_bounds, enumerate_distribution, enumerate_exact, exact_det_singular_prob, mc_probability, mc_value_counts,
    Claim, Event, LinearMapLaw, Method, Statistic, Verdict,
};
use permlab::events::{build_mj, detect_e, SearchConfig};
use permlab::processes::{exact_weights, replay_growth, run_growth_process, verify_trace, GrowthParams};
use permlab::{make_distribution, make_field, sample_matrix, uniform_distribution, MatrixFq, RandomStream};

#[test]
fn enumeration_matches_permutation_sums() {
    for q in [2u64, 3, 4] {
        let f = make_field(q).unwrap();
        for n in 1..=3usize {
            if q.pow((n * n) as u32) > 300_000 {
                continue;
            }
            let mut per = vec![0u64; q as usize];
            let mut det = vec![0u64; q as usize];
            for a in common::all_matrices(&f, n, n) {
                per[common::permanent(&a) as usize] += 1;
                det[common::determinant(&a) as usize] += 1;
            }
            assert_eq!(enumerate_exact(n, &f, Statistic::Per, 2).unwrap().counts, per, "per q={q} n={n}");
            assert_eq!(enumerate_exact(n, &f, Statistic::Det, 2).unwrap().counts, det, "det q={q} n={n}");
        }
    }
}

#[test]
fn det_enumeration_matches_closed_form() {
    for (q, n) in [(2u64, 2usize), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
        let c = enumerate_exact(n, &make_field(q).unwrap(), Statistic::Det, 1).unwrap();
        assert_eq!(c.probability(0), exact_det_singular_prob(n, q), "q={q} n={n}");
    }
}

#[test]
fn nonzero_permanent_values_are_equidistributed() {
    for (q, n) in [(3u64, 2usize), (3, 3), (5, 2), (7, 2), (9, 2), (4, 3)] {
        let c = enumerate_exact(n, &make_field(q).unwrap(), Statistic::Per, 1).unwrap();
        assert!(c.nonzero_equidistributed(), "q={q} n={n}: {:?}", c.counts);
    }
}

#[test]
fn weighted_enumeration_matches_direct_sum() {
    let f = make_field(3).unwrap();
    let d = make_distribution(&f, &[0.6, 0.3, 0.1]).unwrap();
    let w = exact_weights(&d);
    let mut exact = vec![BigRational::zero(); 3];
    for a in common::all_matrices(&f, 2, 2) {
        let p: BigRational = a.data().iter().map(|&v| w[v as usize].clone()).product();
        exact[common::permanent(&a) as usize] += p;
    }
    let law = enumerate_distribution(2, &d, Statistic::Per, 3).unwrap();
    for z in 0..3 {
        assert!((law[z] - exact[z].to_f64().unwrap()).abs() < 1e-14);
    }
}

#[test]
fn monte_carlo_agrees_with_enumeration() {
    let f = make_field(3).unwrap();
    let d = uniform_distribution(&f);
    let exact = enumerate_exact(2, &f, Statistic::Per, 1).unwrap().probability(0).to_f64().unwrap();
    let e = mc_probability(&Event::PerEquals { value: 0 }, 2, &d, 1_000_000, 3, 2).unwrap();
    assert!((e.point - exact).abs() <= 4.0 * e.sigma_at(exact), "{} vs {exact}", e.point);
    assert!(e.lo <= exact && exact <= e.hi);

    let skew = make_distribution(&f, &[0.6, 0.3, 0.1]).unwrap();
    let law = enumerate_distribution(3, &skew, Statistic::Det, 1).unwrap();
    let counts = mc_value_counts(Statistic::Det, 3, &skew, 200_000, 4, 2).unwrap();
    for z in 0..3u32 {
        let e = counts.estimate(z);
        let p = law[z as usize];
        assert!((e.point - p).abs() <= 4.0 * e.sigma_at(p), "z={z}: {} vs {p}", e.point);
    }
}

#[test]
fn witness_chain_is_monotone() {
    let q = 3.0f64;
    let n = 6;
    let d = uniform_distribution(&make_field(3).unwrap());
    for s in 1..=n {
        let e = mc_probability(&Event::E { s: s - 1, ell: 1 }, n, &d, 4000, 17, 1).unwrap();
        let bound: f64 = (s..=n).map(|i| 1.0 - q.powi(-(i as i32))).product();
        assert!(e.point >= bound - 4.0 * e.sigma_at(bound), "s={s}: {} < {bound}", e.point);
    }
}

#[test]
fn e_events_match_definition() {
    let f = make_field(3).unwrap();
    let d = uniform_distribution(&f);
    let root = RandomStream::new(21);
    for i in 0..200 {
        let a = sample_matrix(5, &d, &mut root.split(i));
        for s in 0..=3 {
            let any = Combinations::new(5, s).any(|set| common::per_sub(&a, &set) != 0);
            let rep = detect_e(&a, s, 1, &SearchConfig::default()).unwrap();
            assert_eq!(rep.holds, any, "matrix {i}, s={s}");
            for w in &rep.witnesses {
                assert_ne!(common::per_sub(&a, w), 0);
            }
        }
    }
}

#[test]
fn mj_times_row_gives_smaller_witnesses() {
    let f = make_field(5).unwrap();
    let d = uniform_distribution(&f);
    let root = RandomStream::new(2);
    for k in 0..40 {
        let a = sample_matrix(6, &d, &mut root.split(k));
        for set in [vec![1, 4], vec![0, 2, 5], vec![3]] {
            let m = build_mj(&a, &set).unwrap();
            let xbar = a.row(6 - set.len());
            let image = m.mul_vec(xbar);
            for (r, &i) in set.iter().enumerate() {
                let rest: Vec<usize> = set.iter().copied().filter(|&x| x != i).collect();
                assert_eq!(image[r], common::per_sub(&a, &rest), "matrix {k}, set {set:?}, row {r}");
            }
        }
    }
}

/// Block instances: `D` disjoint invertible `r×r` principal blocks, random elsewhere.
fn block_instance(r: usize, blocks: usize, stream: &mut RandomStream) -> MatrixFq {
    let f = make_field(3).unwrap();
    let u = uniform_distribution(&f);
    let n = r * blocks;
    loop {
        let m = MatrixFq::new(&f, n, n, u.sample_vector(n * n, stream)).unwrap();
        let ok = (0..blocks).all(|b| {
            let idx: Vec<usize> = (b * r..(b + 1) * r).collect();
            m.submatrix(&idx, &idx).unwrap().rank() == r
        });
        if ok {
            return m;
        }
    }
}

#[test]
fn hamming_tail_respects_markov_bound() {
    let f = make_field(3).unwrap();
    let mu = make_distribution(&f, &[0.6, 0.3, 0.1]).unwrap();
    let mut s = RandomStream::new(38);
    for (r, blocks) in [(1usize, 6usize), (2, 4), (2, 6), (3, 4)] {
        let m = block_instance(r, blocks, &mut s);
        let law = LinearMapLaw::new(&m, &mu).unwrap();
        let p_r = BigRational::new(1.into(), 3u64.pow(r as u32).into());
        // epsilon from the worst single-block zero probability, as in the Markov argument with K = 1
        let worst = (0..blocks)
            .map(|b| {
                let rows: Vec<usize> = (b * r..(b + 1) * r).collect();
                let cols: Vec<usize> = (0..m.cols()).collect();
                let mb = m.submatrix(&rows, &cols).unwrap();
                LinearMapLaw::new(&mb, &mu).unwrap().probability(&vec![0; r])
            })
            .max()
            .unwrap();
        let eps = if worst > p_r { (worst - &p_r) * BigRational::from_integer(2.into()) } else { BigRational::zero() };
        for ell in 1..=blocks / 2 {
            let tail = law.hamming_tail(ell);
            // with D = 2ℓ disjoint groups the bound applies to ℓ ≤ D/2
            assert!(tail <= p_r.clone() * BigRational::from_integer(2.into()) + &eps, "r={r} D={blocks} ell={ell}");
        }
        assert_eq!(law.hamming_tail(m.rows()), BigRational::one());
    }
}

#[test]
fn desk_scale_growth_runs_verify() {
    let d = uniform_distribution(&make_field(3).unwrap());
    let params = GrowthParams { t: 3, delta: 0.34 };
    let target: Vec<usize> = (0..6).collect();
    let root = RandomStream::new(12);
    let runs = 150u64;
    let mut bad = 0.0;
    for r in 0..runs {
        let tr = run_growth_process(&d, 14, &target, params, &root.split(r)).unwrap();
        assert_eq!(verify_trace(&tr).unwrap(), Ok(()), "run {r}");
        if r < 10 {
            assert_eq!(replay_growth(&tr).unwrap(), Ok(()));
        }
        bad += tr.bad_steps() as f64;
    }
    let mean = bad / runs as f64;
    let steps = (params.t_prime() - params.t) as f64;
    let rho = d.rho();
    assert!(mean <= rho * steps + 4.0 * (steps * rho * (1.0 - rho) / runs as f64).sqrt(), "mean bad steps {mean}");
}

#[test]
fn bounds_exact_at_enumerable_sizes() {
    let d = uniform_distribution(&make_field(3).unwrap());
    for n in 1..=4 {
        let mut claims = vec![Claim::TrivialLowerBound, Claim::SeparationAllP];
        if n >= 3 {
            claims.push(Claim::AsymptoticP);
        }
        let v = check_bounds(&claims, n, &d, 1, 0, 2).unwrap();
        for b in &v {
            assert_eq!(b.method, Method::Exact);
            assert_ne!(b.verdict, Verdict::Violated, "n={n} {:?}", b.claim);
        }
    }
    let mu = make_distribution(&make_field(5).unwrap(), &[0.5, 0.2, 0.1, 0.1, 0.1]).unwrap();
    let v = check_bounds(&[Claim::SeparationGeneral, Claim::AsymptoticGeneral], 3, &mu, 1, 0, 1).unwrap();
    assert!(v.iter().all(|b| b.method == Method::Exact && b.verdict != Verdict::Violated));
}
