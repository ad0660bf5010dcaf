//! Acceptance suite: one test per release criterion, each printing a
//! `criterion N: PASS — ...` line (visible with `--nocapture`) and
//! enforcing its runtime budget. Reference numbers are frozen from
//! independent enumeration oracles; recurrence and network fixtures
//! live in `condpoisson::fixtures`.

use std::time::{Duration, Instant};

use condpoisson::fixtures::{
    self, a_antagonist_trap, a_association, a_isomerization, a_receptor_ligand,
};
use condpoisson::genfun::{self, enumerate_support, series_table, two_row_f0, Rates};
use condpoisson::rational::{inv_factorial, parse_rational, to_f64};
use condpoisson::recurrence::verify;
use condpoisson::{
    BigRational, Complex, Conditional, ConservationLaws, ConstraintMatrix, ReactionNetwork,
};
use itertools::Itertools;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn rats(ss: &[&str]) -> Vec<BigRational> {
    ss.iter().map(|s| rat(s)).collect()
}

fn ones(n: usize) -> Vec<BigRational> {
    vec![BigRational::one(); n]
}

/// Random positive rational with numerator 1..=6 and denominator 1..=4.
fn rand_rate(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.gen_range(1..=6).into(), rng.gen_range(1..=4).into())
}

fn rand_rates(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n).map(|_| rand_rate(rng)).collect()
}

/// All lattice points with `0 <= N_s <= max` in every coordinate.
fn lattice(dims: usize, max: u32) -> impl Iterator<Item = Vec<u32>> {
    (0..dims).map(|_| 0..=max).multi_cartesian_product()
}

fn ms(t: Instant) -> u128 {
    t.elapsed().as_millis()
}

#[test]
fn criterion_1_correlation_matrix() {
    let t0 = Instant::now();
    let a = a_receptor_ligand();
    let report = genfun::stats(&a, &ones(5), &[5, 5]).unwrap();

    let expected = [
        [1.0, -0.3647053019, 0.5636021195, -0.2407443460, -0.2407443460],
        [-0.3647053019, 1.0, 0.5636021195, -0.2407443460, -0.2407443460],
        [0.5636021195, 0.5636021195, 1.0, -0.4271530174, -0.4271530174],
        [-0.2407443460, -0.2407443460, -0.4271530174, 1.0, -0.6350805992],
        [-0.2407443460, -0.2407443460, -0.4271530174, -0.6350805992, 1.0],
    ];
    for i in 0..5 {
        for j in 0..5 {
            let got = report.correlation[i][j].expect("degenerate variance");
            assert!(
                (got - expected[i][j]).abs() < 1e-8,
                "correlation[{i}][{j}] = {got:.10}, want {:.10}",
                expected[i][j]
            );
        }
    }
    assert!(t0.elapsed() < Duration::from_secs(1), "budget 1 s exceeded");
    println!(
        "criterion 1: PASS — all 25 correlation entries at b=(5,5) match references to 1e-8 ({} ms)",
        ms(t0)
    );
}

#[test]
fn criterion_2_four_row_conditional_statistics() {
    let t0 = Instant::now();
    let a = a_antagonist_trap();
    let lam = ones(8);

    // Quoted reference pairs (mean, dispersion). The dispersion values
    // 1.112 / 1.379 match the conditional standard deviation, not the
    // variance (exact variances are ~1.2370 and ~1.9006); the suite
    // pins both facts so the discrepancy stays visible.
    let cases = [([10u32; 4], 1.897, 1.112), ([20u32; 4], 2.813, 1.379)];
    let mut summary = Vec::new();
    for (b, mean_ref, sd_ref) in cases {
        let cond = Conditional::new(&a, &lam, &b).unwrap();
        let mean = to_f64(&cond.mean(1).unwrap());
        let var = to_f64(&cond.variance(1).unwrap());
        let sd = var.sqrt();
        assert!(
            (mean - mean_ref).abs() <= 1e-3,
            "mean {mean:.6} vs reference {mean_ref} at b={b:?}"
        );
        assert!(
            (sd - sd_ref).abs() <= 1e-3,
            "std dev {sd:.6} vs reference {sd_ref} at b={b:?}"
        );
        assert!(
            (var - sd_ref).abs() > 1e-3,
            "variance {var:.6} unexpectedly equals the quoted dispersion {sd_ref}; \
             the reference value should match the standard deviation instead"
        );
        summary.push(format!(
            "b={}^4: mean {mean:.6} (ref {mean_ref}), sd {sd:.6} (ref {sd_ref}), variance {var:.6}",
            b[0]
        ));
    }
    assert!(t0.elapsed() < Duration::from_secs(120), "budget 120 s exceeded");
    println!(
        "criterion 2: PASS — {}; quoted dispersions match std devs, not variances ({} ms)",
        summary.join("; "),
        ms(t0)
    );
}

/// Direct-sum oracle: weights w_k = prod_j lambda_j^{k_j}/k_j! over the
/// enumerated support, plus conditional expectations of arbitrary
/// per-point statistics.
struct SupportOracle {
    support: Vec<Vec<u32>>,
    weights: Vec<BigRational>,
    total: BigRational,
}

impl SupportOracle {
    fn new(a: &ConstraintMatrix, lambda: &[BigRational], b: &[u32]) -> Self {
        let support = enumerate_support(a, b).unwrap();
        let weights: Vec<BigRational> = support
            .iter()
            .map(|k| {
                let mut w = BigRational::one();
                for (j, &kj) in k.iter().enumerate() {
                    w *= lambda[j].pow(kj as i32) * inv_factorial(kj);
                }
                w
            })
            .collect();
        let total = weights.iter().sum();
        SupportOracle { support, weights, total }
    }

    fn expect<F: Fn(&[u32]) -> BigRational>(&self, stat: F) -> BigRational {
        let num: BigRational = self
            .support
            .iter()
            .zip(&self.weights)
            .map(|(k, w)| stat(k) * w)
            .sum();
        num / &self.total
    }
}

fn falling(k: u32, r: u32) -> BigRational {
    let mut acc = BigRational::one();
    for s in 0..r {
        if k < s + 1 {
            return BigRational::zero();
        }
        acc *= BigRational::from_integer((k - s).into());
    }
    acc
}

#[test]
fn criterion_3_oracle_equivalence() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut feasible = 0usize;
    let mut empty = 0usize;
    let mut two_row_checked = 0usize;

    for inst in 0..200 {
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=6);
        // columns sampled until nonzero so the matrix is admissible
        let mut entries = vec![0u32; m * n];
        for j in 0..n {
            loop {
                for i in 0..m {
                    entries[i * n + j] = rng.gen_range(0..=2);
                }
                if (0..m).any(|i| entries[i * n + j] != 0) {
                    break;
                }
            }
        }
        let a = ConstraintMatrix::new(m, n, entries).unwrap();
        let lam = rand_rates(&mut rng, n);
        let rates = Rates::numeric(lam.clone()).unwrap();

        // mostly guaranteed-feasible b = A·k with small total, sometimes raw
        let b: Vec<u32> = if rng.gen_bool(0.75) {
            loop {
                let k: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
                let b: Vec<u32> =
                    (0..m).map(|i| (0..n).map(|j| a.at(i, j) * k[j]).sum()).collect();
                if b.iter().sum::<u32>() <= 10 {
                    break b;
                }
            }
        } else {
            (0..m).map(|_| rng.gen_range(0..=3)).collect()
        };

        let oracle = SupportOracle::new(&a, &lam, &b);
        let series = series_table(&a, &lam, &b).unwrap().value(&b);
        let enumerated = genfun::f0_enumerate(&a, &rates, &b).unwrap().unwrap_exact();
        assert_eq!(series, oracle.total, "series f0 mismatch at instance {inst}");
        assert_eq!(enumerated, oracle.total, "enumeration f0 mismatch at instance {inst}");
        if m == 2 && (0..2).all(|i| (0..n).all(|j| a.at(i, j) <= 1)) {
            let tr = two_row_f0(&a, &rates, &b).unwrap().unwrap_exact();
            assert_eq!(tr, oracle.total, "closed two-row f0 mismatch at instance {inst}");
            two_row_checked += 1;
        }

        if oracle.total.is_zero() {
            empty += 1;
            continue;
        }
        feasible += 1;

        // moment-shift identities against direct conditional expectations
        let cond = Conditional::new(&a, &lam, &b).unwrap();
        for j in 1..=n {
            for r in [1u32, 2] {
                let want = oracle.expect(|k| falling(k[j - 1], r));
                assert_eq!(
                    cond.factorial_moment(j, r).unwrap(),
                    want,
                    "factorial moment ({j},{r}) mismatch at instance {inst}"
                );
            }
            let want_var = {
                let m1 = oracle.expect(|k| falling(k[j - 1], 1));
                let m2 = oracle.expect(|k| falling(k[j - 1], 2));
                m2 + &m1 - &m1 * &m1
            };
            assert_eq!(cond.variance(j).unwrap(), want_var, "variance {j} at instance {inst}");
        }
        for i in 1..=n {
            for j in i + 1..=n {
                let want = oracle.expect(|k| {
                    BigRational::from_integer((k[i - 1] as u64 * k[j - 1] as u64).into())
                });
                assert_eq!(
                    cond.mixed_factorial_moment(i, j).unwrap(),
                    want,
                    "mixed moment ({i},{j}) at instance {inst}"
                );
            }
        }
    }

    assert!(feasible >= 100, "too few feasible instances: {feasible}");
    assert!(two_row_checked >= 10, "too few two-row instances: {two_row_checked}");
    assert!(t0.elapsed() < Duration::from_secs(60), "budget 60 s exceeded");
    println!(
        "criterion 3: PASS — 200 random instances agree exactly across series, enumeration, \
         and {} closed-form two-row cases; moments checked on {} feasible events ({} zero-mass) ({} ms)",
        two_row_checked,
        feasible,
        empty,
        ms(t0)
    );
}

#[test]
fn criterion_4_binomial_law() {
    let t0 = Instant::now();
    let a = a_isomerization();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let lam = rand_rates(&mut rng, 2);
        let b = rng.gen_range(0..=30u32);
        let cond = Conditional::new(&a, &lam, &[b]).unwrap();
        let p = &lam[0] / (&lam[0] + &lam[1]);
        let bq = BigRational::from_integer(b.into());
        assert_eq!(cond.mean(1).unwrap(), &bq * &p);
        assert_eq!(
            cond.variance(1).unwrap(),
            bq * &p * (BigRational::one() - &p)
        );
    }
    println!(
        "criterion 4: PASS — 50 random events on the sum constraint give exact binomial mean and variance ({} ms)",
        ms(t0)
    );
}

#[test]
fn criterion_5_recurrence_fixtures() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    // Part A: catalogued one- and two-row recurrences hold on 1 <= b_i <= 15
    // for 5 random rate vectors...
    let trusted = ["isomerization-b1", "association-b1", "association-b2"];
    for name in trusted {
        let fx = fixtures::reference_recurrence(name).unwrap();
        let m = fx.matrix.rows();
        for _ in 0..5 {
            let lam = rand_rates(&mut rng, fx.matrix.cols());
            let rates = Rates::numeric(lam).unwrap();
            let out = verify(&fx.recurrence, &fx.matrix, &rates, &vec![1; m], &vec![15; m]).unwrap();
            assert!(out.pass, "{name} failed on the window");
        }
    }

    // ...and marching the full systems reproduces f0 exactly up to b_i = 25.
    for _ in 0..2 {
        let lam = rand_rates(&mut rng, 2);
        let sys = fixtures::isomerization_system();
        let table = series_table(&a_isomerization(), &lam, &[25]).unwrap();
        for b in 0..=25u32 {
            assert_eq!(
                condpoisson::recurrence::march(&sys, &lam, &[b]).unwrap(),
                table.value(&[b]),
                "march mismatch at b={b}"
            );
        }
    }
    for _ in 0..2 {
        let lam = rand_rates(&mut rng, 3);
        let sys = fixtures::association_system();
        let table = series_table(&a_association(), &lam, &[25, 25]).unwrap();
        for b in lattice(2, 25) {
            assert_eq!(
                condpoisson::recurrence::march(&sys, &lam, &b).unwrap(),
                table.value(&b),
                "march mismatch at b={b:?}"
            );
        }
    }

    // Part B: every other catalogued recurrence is verify-or-reject; the
    // outcome must match its frozen `verified` flag at random rates.
    let others = [
        "combustion-b1",
        "combustion-b2",
        "receptor-ligand-b1",
        "receptor-ligand-b2",
        "two-component-b1",
        "two-component-b2",
        "futile-cycle-b1",
        "futile-cycle-b2",
        "association-single-sum-b1",
    ];
    let mut rejected = Vec::new();
    for name in others {
        let fx = fixtures::reference_recurrence(name).unwrap();
        let m = fx.matrix.rows();
        for _ in 0..2 {
            let lam = rand_rates(&mut rng, fx.matrix.cols());
            let rates = Rates::numeric(lam).unwrap();
            let out = verify(&fx.recurrence, &fx.matrix, &rates, &vec![0; m], &vec![10; m]).unwrap();
            assert_eq!(
                out.pass, fx.verified,
                "{name}: verification disagrees with the catalogued flag"
            );
            assert_eq!(out.counterexample.is_some(), !fx.verified);
        }
        if !fx.verified {
            assert!(!fx.note.is_empty(), "{name} rejected without a note");
            rejected.push(name);
        }
    }
    assert_eq!(
        rejected,
        ["combustion-b1", "futile-cycle-b1", "futile-cycle-b2", "association-single-sum-b1"]
    );

    // For each rejected entry the guesser must supply a replacement that
    // passes exact verification on 0 <= b_i <= 30 at its search rates.
    for name in &rejected {
        let fx = fixtures::reference_recurrence(name).unwrap();
        let n = fx.matrix.cols();
        let m = fx.matrix.rows();
        let lam = rats(&["2/3", "5/7", "3/2", "5/3", "7/4", "4/5"][..n]);
        let rec = condpoisson::guess::minimal_fit_confirmed(
            &fx.matrix,
            &lam,
            fx.recurrence.direction(),
            4,
            4,
            &vec![14; m],
        )
        .unwrap()
        .unwrap_or_else(|| panic!("no replacement found for {name}"));
        let rates = Rates::numeric(lam).unwrap();
        let out = verify(&rec, &fx.matrix, &rates, &vec![0; m], &vec![30; m]).unwrap();
        assert!(out.pass, "replacement for {name} fails on 0..=30");
    }

    assert!(t0.elapsed() < Duration::from_secs(120), "budget 120 s exceeded");
    println!(
        "criterion 5: PASS — 3 catalogued recurrences verified and marched to b=25; 9 more \
         matched their frozen verify-or-reject flags; replacements guessed for {:?} all pass on b<=30 ({} ms)",
        rejected,
        ms(t0)
    );
}

#[test]
fn criterion_6_guessing_fixed_rates() {
    let t0 = Instant::now();

    // Window [17,30] is disjoint from every fit/validation box the default
    // ansatz search touches (those end by b_i = 16 for these shapes).
    let a1 = a_isomerization();
    let lam2 = ones(2);
    let rec1 = condpoisson::guess::minimal_fit(&a1, &lam2, 1, 3, 3).unwrap().unwrap();
    assert_eq!(rec1.order(), 1);
    let rates2 = Rates::numeric(lam2).unwrap();
    assert!(verify(&rec1, &a1, &rates2, &[17], &[30]).unwrap().pass);

    let a2 = a_association();
    let lam3 = ones(3);
    let rates3 = Rates::numeric(lam3.clone()).unwrap();
    for dir in [1, 2] {
        let rec = condpoisson::guess::minimal_fit(&a2, &lam3, dir, 3, 3).unwrap().unwrap();
        assert_eq!(rec.order(), 2, "direction {dir}");
        assert!(verify(&rec, &a2, &rates3, &[17, 17], &[30, 30]).unwrap().pass);
    }

    assert!(t0.elapsed() < Duration::from_secs(30), "budget 30 s exceeded");
    println!(
        "criterion 6: PASS — guessed order-1 and two order-2 recurrences at unit rates, all \
         verified on the disjoint window 17..=30 ({} ms)",
        ms(t0)
    );
}

#[test]
fn criterion_7_network_reports() {
    let t0 = Instant::now();
    let expected = [
        ("isomerization", 2, 1, 1, 0),
        ("association", 2, 1, 1, 0),
        ("combustion", 2, 1, 1, 0),
        ("receptor-ligand", 4, 1, 3, 0),
        ("two-component", 5, 1, 4, 0),
        ("antagonist-trap", 8, 4, 4, 0),
        ("futile-cycle", 6, 2, 3, 1),
    ];
    for (name, c, l, r, d) in expected {
        let net = fixtures::network_fixture(name).unwrap().network();
        let rep = net.analyze();
        assert_eq!(
            (rep.complexes, rep.linkage_classes, rep.rank, rep.deficiency),
            (c, l, r, d),
            "structural report mismatch for {name}"
        );
        assert!(rep.weakly_reversible, "{name} should be weakly reversible");
    }
    println!(
        "criterion 7: PASS — complex/linkage/rank/deficiency counts match for all seven networks ({} ms)",
        ms(t0)
    );
}

#[test]
fn criterion_8_conservation_matrices() {
    let t0 = Instant::now();
    let names = [
        "isomerization",
        "association",
        "combustion",
        "receptor-ligand",
        "two-component",
        "futile-cycle",
        "antagonist-trap",
    ];
    for name in names {
        let fx = fixtures::network_fixture(name).unwrap();
        let net = fx.network();
        let got = match net.conservation_matrix() {
            ConservationLaws::Constraints(m) => m,
            ConservationLaws::Basis(_) => {
                panic!("{name}: expected non-negative integer conservation rows")
            }
        };
        let mut got_rows: Vec<Vec<u32>> = (0..got.rows()).map(|i| got.row(i).to_vec()).collect();
        let mut want_rows: Vec<Vec<u32>> =
            (0..fx.conservation.rows()).map(|i| fx.conservation.row(i).to_vec()).collect();
        got_rows.sort();
        want_rows.sort();
        assert_eq!(got_rows, want_rows, "conservation rows differ for {name}");
    }
    println!(
        "criterion 8: PASS — derived conservation matrices equal the catalogued ones (up to row \
         order) for all seven networks ({} ms)",
        ms(t0)
    );
}

#[test]
fn criterion_9_balance_and_master_equation() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    let assoc = ReactionNetwork::parse("X1 + X2 <-> X3 @ 3, 2").unwrap();
    let balanced: [(&str, ReactionNetwork, Vec<BigRational>); 3] = [
        ("association (rates 3,2)", assoc, rats(&["1", "1", "3/2"])),
        (
            "receptor-ligand",
            fixtures::network_fixture("receptor-ligand").unwrap().network(),
            ones(5),
        ),
        (
            "two-component",
            fixtures::network_fixture("two-component").unwrap().network(),
            ones(6),
        ),
    ];

    for (label, net, xbar) in &balanced {
        for (cx, res) in net.complex_balance_residuals(xbar).unwrap() {
            assert!(res.is_zero(), "{label}: complex {cx:?} unbalanced: {res}");
        }
        let dims = net.species().len();
        for n in lattice(dims, 6) {
            let res = net.sscme_residual(xbar, &n).unwrap();
            assert!(res.is_zero(), "{label}: master-equation residual {res} at N={n:?}");
        }
        let c = net.complexes().len();
        for _ in 0..100 {
            let alpha: Vec<BigRational> = (0..c)
                .map(|_| BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into()))
                .collect();
            let res = net.key_lemma_residual(xbar, &alpha).unwrap();
            assert!(res.is_zero(), "{label}: summation identity residual {res}");
        }
    }

    // counterexample: balanced in net flux but not complex balanced
    let counter = fixtures::network_fixture("counter-example").unwrap().network();
    let xbar = rats(&["2", "1"]);
    let residuals = counter.complex_balance_residuals(&xbar).unwrap();
    let at_a = residuals
        .iter()
        .find(|(cx, _)| cx == &Complex(vec![1, 0]))
        .map(|(_, r)| r.clone())
        .unwrap();
    assert_eq!(at_a, rat("-2"), "imbalance at the singleton complex");
    let broken = lattice(2, 4).any(|n| !counter.sscme_residual(&xbar, &n).unwrap().is_zero());
    assert!(broken, "expected a nonzero master-equation residual within 0..=4");

    assert!(t0.elapsed() < Duration::from_secs(60), "budget 60 s exceeded");
    println!(
        "criterion 9: PASS — three balanced networks solve the stationary master equation \
         exactly on |N|<=6 with the summation identity holding for 300 random weightings; the \
         counterexample shows residual -2 at its singleton complex ({} ms)",
        ms(t0)
    );
}
