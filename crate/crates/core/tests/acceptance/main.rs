//! End-to-end acceptance suite. Each test covers one numbered check, prints
//! a single `[criterion N] PASS` line with its key figures, and fails loudly
//! otherwise. Brute-force counterparts live in `oracle.rs` and share no
//! solver code with the library.

mod oracle;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rosenthal_core::amalgam::{
    build_amalgam, encode_members, enrich_for_members, norm_identity_report, select_chain,
    verify_member_strong_embedding, verify_norm_identity, AmalgamOutput, ChainSelection, Member,
};
use rosenthal_core::basisnorm::{
    basis_constant, verify_p1, verify_p2, BasisConstant, PrefixNormSystem,
};
use rosenthal_core::ell1::{build_glued_tree, l1_equivalence_constants, FnWindow};
use rosenthal_core::embed::{extract_2k_equivalence, max_diff_lemma, monotone_map_iv};
use rosenthal_core::families::{
    family_tree, projection_functions, random_hereditary, schreier_restricted,
    verify_hereditary_claim, HereditaryFamily,
};
use rosenthal_core::polylin::rat::rat;
use rosenthal_core::polylin::{
    check_pwl_dominance, min_norm_over_l1_sphere, sup_norm_over_unit_ball, PwlNorm, Rat,
    WeightedL1,
};
use rosenthal_core::stepfn::{
    combination_norm, prefix_max_norm, AtomSpace, BinWord, StepFn,
};

fn step(level: u32, values: &[&str]) -> StepFn {
    StepFn::new(
        AtomSpace::dyadic(level),
        values.iter().map(|s| rat(s)).collect(),
    )
    .unwrap()
}

fn window(level: u32, rows: &[&[&str]]) -> FnWindow {
    FnWindow::new(rows.iter().map(|r| step(level, r)).collect()).unwrap()
}

const GRID: [&str; 5] = ["-1", "-1/2", "0", "1/2", "1"];

fn grid_value(rng: &mut ChaCha8Rng) -> Rat {
    rat(GRID[rng.gen_range(0..GRID.len())])
}

/// Random window on dyadic(2); `normalized` forces every entry to reach
/// sup norm exactly 1. Retries until the window constraints hold.
fn random_window(rng: &mut ChaCha8Rng, arity: usize, normalized: bool) -> FnWindow {
    loop {
        let mut fns = Vec::with_capacity(arity);
        for _ in 0..arity {
            loop {
                let vals: Vec<Rat> = (0..4).map(|_| grid_value(rng)).collect();
                let sup = vals.iter().map(Rat::abs).max().unwrap();
                if sup.is_zero() || (normalized && sup != Rat::one()) {
                    continue;
                }
                fns.push(StepFn::new(AtomSpace::dyadic(2), vals).unwrap());
                break;
            }
        }
        if let Ok(w) = FnWindow::new(fns) {
            return w;
        }
    }
}

fn flagship_members() -> Vec<Member> {
    let a = Member::new(
        window(
            3,
            &[
                &["1", "1", "1", "1", "1/2", "1/2", "1/2", "1/2"],
                &["-1", "-1/2", "-1/2", "-1", "1/2", "1/4", "1/4", "1/2"],
                &["1/2", "-1/2", "1/2", "-1/2", "-1/4", "1/4", "-1/4", "1/4"],
            ],
        ),
        rat("1/4"),
    )
    .unwrap();
    let b = Member::new(
        window(
            3,
            &[
                &["1", "-1", "1", "-1", "1", "-1", "1", "-1"],
                &["1/2", "1/2", "-1/2", "-1/2", "1/4", "1/4", "-1/4", "-1/4"],
                &["-1", "0", "0", "1", "-1/2", "0", "0", "1/2"],
            ],
        ),
        rat("1/4"),
    )
    .unwrap();
    vec![a, b]
}

fn build_for(members: &[Member], depth: usize) -> AmalgamOutput {
    let dense = enrich_for_members(&[], members, depth).unwrap();
    let tree = encode_members(members, &dense, depth).unwrap();
    build_amalgam(&tree, &dense).unwrap()
}

fn chain_windows(out: &AmalgamOutput, selection: &ChainSelection) -> (FnWindow, FnWindow) {
    let h_chain = FnWindow::new(
        selection
            .node_indices
            .iter()
            .map(|&r| out.nodes[r].h.clone())
            .collect(),
    )
    .unwrap();
    let f_sel = out.f.select(&selection.f_indices).unwrap();
    (h_chain, f_sel)
}

#[test]
fn c1_random_and_schreier_families_certify() {
    let start = Instant::now();

    let mut families = 0usize;
    for seed in 0..200u64 {
        let ground = 4 + (seed as usize % 5);
        let maximal = 1 + (seed as usize % 3);
        let max_size = 3 + (seed as usize % 3);
        let f = random_hereditary(ground, maximal, max_size, seed).unwrap();
        let again = random_hereditary(ground, maximal, max_size, seed).unwrap();
        assert_eq!(f, again, "seed {seed} is not stable");
        let report = verify_hereditary_claim(&f).unwrap();
        assert_eq!(report.scale, rat("2"));
        assert!(
            report.holds,
            "claim failed for seed {seed}: {:?}",
            report.failures
        );
        families += 1;
    }

    for n in 0..=9 {
        let f = schreier_restricted(n).unwrap();
        let report = verify_hereditary_claim(&f).unwrap();
        assert_eq!(report.scale, rat("2"));
        assert!(report.holds, "claim failed for schreier({n})");
        let t = family_tree(&f);
        assert_eq!(t.order(), oracle::tree_order(&t), "order oracle at n = {n}");
    }
    let order9 = family_tree(&schreier_restricted(9).unwrap()).order();
    assert_eq!(order9, 6);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "[criterion 1] PASS: {families} random families and schreier 0..=9 certify at scale 2, \
         schreier(9) tree order {order9} matches the brute-force count, in {elapsed:?}"
    );
}

#[test]
fn c2_pair_projection_lower_constant() {
    let f = HereditaryFamily::new(
        1,
        [
            BTreeSet::new(),
            BTreeSet::from([0]),
            BTreeSet::from([1]),
            BTreeSet::from([0, 1]),
        ],
    )
    .unwrap();
    let w = projection_functions(&f).unwrap();
    let constants = l1_equivalence_constants(w.fns()).unwrap();
    assert_eq!(constants.lower, rat("1/2"));
    assert_eq!(constants.upper, rat("1"));

    let norm = combination_norm(w.fns()).unwrap();
    let brute = oracle::min_over_sphere(&norm, &[Rat::one(), Rat::one()]);
    assert_eq!(brute, rat("1/2"));

    println!(
        "[criterion 2] PASS: projection pair over the full family on {{0,1}} has lower \
         constant exactly 1/2, confirmed by sphere-vertex enumeration"
    );
}

#[test]
fn c3_flagship_amalgam_certificates() {
    let start = Instant::now();
    let members = flagship_members();
    let out = build_for(&members, 8);
    assert_eq!(out.count, 3);
    assert_eq!(out.f.len(), 16);

    for (i, (branch, member)) in out.tree.branches().to_vec().iter().zip(&members).enumerate() {
        let certificate = verify_member_strong_embedding(&out, branch, member).unwrap();
        assert!(certificate.holds(), "member {i} certificate");

        let selection = select_chain(&out, branch, member).unwrap();
        let identity = verify_norm_identity(&out, &selection).unwrap();
        assert!(identity.holds, "member {i} norm identity at zero slack");
        assert_eq!(identity.forward.margin, rat("0"));
        assert_eq!(identity.backward.margin, rat("0"));
    }

    // Negative control: keep the chain functions but mount them on pairwise
    // incomparable words. The chain's running maximum sees cancellations the
    // decoupled family cannot, so the identity must fail with a witness.
    let selection = select_chain(&out, &out.tree.branches()[0], &members[0]).unwrap();
    let (h_chain, _) = chain_windows(&out, &selection);
    let corrupted = FnWindow::new(
        h_chain
            .fns()
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let mut word = BinWord::empty();
                for _ in 0..i {
                    word = word.child(true);
                }
                word = word.child(false);
                for _ in word.len()..out.level as usize {
                    word = word.child(false);
                }
                let cyl = StepFn::cylinder_indicator(out.level, &word).unwrap();
                StepFn::tensor(&cyl, h).unwrap()
            })
            .collect(),
    )
    .unwrap();
    let control = norm_identity_report(&h_chain, &corrupted).unwrap();
    assert!(!control.holds, "corrupted realization must fail");
    let violation = control
        .forward
        .violation
        .as_ref()
        .or(control.backward.violation.as_ref())
        .expect("a failing direction carries a witness");
    assert!(violation.lhs > violation.rhs);
    // Re-substitute the witness into both norms from scratch.
    let pm = prefix_max_norm(h_chain.fns()).unwrap();
    let cn = combination_norm(corrupted.fns()).unwrap();
    let (lhs, rhs) = if control.forward.violation.is_some() {
        (pm.eval(&violation.witness), cn.eval(&violation.witness))
    } else {
        (cn.eval(&violation.witness), pm.eval(&violation.witness))
    };
    assert_eq!(lhs, violation.lhs);
    assert_eq!(rhs, violation.rhs);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!(
        "[criterion 3] PASS: both flagship members certify, the norm identity is exact at \
         zero slack, and the corrupted realization fails at witness {:?} ({} > {}), in {elapsed:?}",
        violation.witness, violation.lhs, violation.rhs
    );
}

#[test]
fn c4_monotone_maps_on_built_amalgams() {
    // Every instance pairs a built construction with a scale d for which the
    // member tolerance satisfies eps < 1/(2d).
    let mut instances: Vec<(Member, AmalgamOutput, Rat)> = Vec::new();

    let members = flagship_members();
    let out = build_for(&members, 8);
    for member in &members {
        instances.push((member.clone(), out.clone(), rat("3/2")));
    }

    let eighth = rat("1/8");
    let singles = [
        window(
            2,
            &[
                &["1", "0", "0", "0"],
                &["0", "1", "0", "0"],
                &["0", "0", "1", "0"],
            ],
        ),
        window(
            2,
            &[
                &["1", "1", "1", "1"],
                &["1", "1", "-1", "-1"],
                &["1", "-1", "0", "0"],
            ],
        ),
        window(2, &[&["1", "1/2", "0", "0"], &["0", "0", "1", "1/2"]]),
    ];
    for w in singles {
        let depth = w.len();
        let member = Member::new(w, eighth.clone()).unwrap();
        let single = std::slice::from_ref(&member);
        let out = build_for(single, depth);
        instances.push((member, out, rat("2")));
    }

    let total = instances.len();
    let mut passed = 0usize;
    for (member, out, d) in &instances {
        let branch = out
            .tree
            .branches()
            .iter()
            .find(|b| select_chain(out, b, member).is_ok())
            .expect("the member's own branch is marked");
        let selection = select_chain(out, branch, member).unwrap();
        let report = monotone_map_iv(
            &member.window,
            &out.f,
            &selection.f_indices,
            &member.eps,
            d,
        )
        .unwrap();
        assert!(report.holds, "escaped nodes: {:?}", report.escaped);
        assert!(report.g_tree_order <= report.f_tree_order);
        passed += 1;
    }
    assert_eq!(passed, total);
    println!(
        "[criterion 4] PASS: {passed}/{total} built instances map their scale-d tree \
         monotonely into the scale-2d tree of the full sequence"
    );
}

#[test]
fn c5_two_k_extraction_on_basic_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(517);
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < 20 {
        attempts += 1;
        assert!(attempts < 10_000, "window generation stalled");
        let arity = 2 + (done % 2);
        let w = random_window(&mut rng, arity, true);
        let k = match basis_constant(w.fns()).unwrap() {
            BasisConstant::Basic(k) => k,
            BasisConstant::NotBasic => continue,
        };
        let eps = (Rat::from_int(8) * &k).recip().min(rat("1/8"));

        let member = Member::new(w.clone(), eps.clone()).unwrap();
        let single = std::slice::from_ref(&member);
        let out = build_for(single, w.len());
        let selection = select_chain(&out, &out.tree.branches()[0], &member).unwrap();
        let f_sel = out.f.select(&selection.f_indices).unwrap();

        let report = extract_2k_equivalence(&w, &f_sel, &eps).unwrap();
        assert!(report.holds, "window {done} with K = {k}");
        assert_eq!(report.basis_constant, k);
        let best = report.equivalence.best().expect("both directions bounded");
        assert!(best <= Rat::from_int(2) * &k, "constant {best} exceeds 2K = 2*{k}");
        done += 1;
    }
    println!(
        "[criterion 5] PASS: 20 normalized basic windows re-extract a two-sided constant \
         at most 2K from their encoded sequences ({attempts} candidates drawn)"
    );
}

#[test]
fn c6_prefix_basis_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(1106);
    let mut basic = 0usize;
    for i in 0..50 {
        let arity = 2 + (i % 2);
        let w = random_window(&mut rng, arity, false);
        let sys = PrefixNormSystem::new(w.clone()).unwrap();
        let p1 = verify_p1(&sys).unwrap();
        assert!(p1.holds, "window {i}");
        assert_eq!(p1.coordinate_basis_constant, Rat::one());

        if let BasisConstant::Basic(k) = basis_constant(w.fns()).unwrap() {
            let p2 = verify_p2(&w).unwrap();
            assert!(p2.holds, "window {i} with K = {k}");
            assert_eq!(p2.basis_constant, k);
            basic += 1;
        }
    }
    println!(
        "[criterion 6] PASS: coordinate vectors are a constant-1 monotone basis on all 50 \
         windows; {basic} basic windows stay K-equivalent to their coordinate image"
    );
}

#[test]
fn c7_solver_queries_match_brute_force() {
    // Every norm below is the combination or running-maximum norm of a
    // window on at most 8 atoms, arity at most 3.
    let w_single = window(1, &[&["1", "-1/2"]]);
    let w_half = window(1, &[&["1/2", "1/2"]]);
    let w_disjoint = window(1, &[&["1", "0"], &["0", "1"]]);
    let w_skew = window(1, &[&["1", "1"], &["-1", "-1/2"]]);
    let w_scaled = window(0, &[&["1/2"], &["1"]]);
    let w_quarters = window(
        3,
        &[
            &["1", "1", "1", "1", "1", "1", "1", "1"],
            &["1", "1", "1", "1", "-1", "-1", "-1", "-1"],
            &["1", "1", "-1", "-1", "1/2", "1/2", "-1/2", "-1/2"],
        ],
    );
    let w_taper = window(
        2,
        &[
            &["1", "1", "1", "1"],
            &["1/2", "1/2", "-1/2", "-1/2"],
            &["1/4", "-1/4", "0", "0"],
        ],
    );

    let comb = |w: &FnWindow| combination_norm(w.fns()).unwrap();
    let pm = |w: &FnWindow| prefix_max_norm(w.fns()).unwrap();

    let pairs: Vec<(&str, PwlNorm, PwlNorm)> = vec![
        ("single vs half", comb(&w_single), comb(&w_half)),
        ("disjoint comb vs prefix", comb(&w_disjoint), pm(&w_disjoint)),
        ("skew comb vs prefix", comb(&w_skew), pm(&w_skew)),
        ("scaled pair (degenerate)", comb(&w_scaled), comb(&w_scaled)),
        ("disjoint vs degenerate", comb(&w_disjoint), comb(&w_scaled)),
        ("quarters comb vs prefix", comb(&w_quarters), pm(&w_quarters)),
        ("taper comb vs prefix", comb(&w_taper), pm(&w_taper)),
        ("quarters vs taper prefix", comb(&w_quarters), pm(&w_taper)),
    ];

    let mut queries = 0usize;
    for (name, a, b) in &pairs {
        for (x, y) in [(a, b), (b, a)] {
            let solver = sup_norm_over_unit_ball(x, y).unwrap();
            let brute = oracle::sup_over_ball(x, y);
            assert_eq!(solver, brute, "sup mismatch on '{name}'");
            queries += 1;
        }

        for norm in [a, b] {
            let v = norm.arity();
            let uniform = vec![Rat::one(); v];
            let geometric: Vec<Rat> = (0..v).map(|n| Rat::pow2_recip(n as u32 + 1)).collect();
            for weights in [uniform, geometric] {
                let solver = min_norm_over_l1_sphere(norm, &weights).unwrap();
                let brute = oracle::min_over_sphere(norm, &weights);
                assert_eq!(solver, brute, "min mismatch on '{name}'");
                queries += 1;
            }
        }

        let v = a.arity();
        let slack = WeightedL1::new((0..v).map(|n| Rat::pow2_recip(n as u32 + 1)).collect())
            .unwrap();
        for eps in [rat("0"), rat("1/4")] {
            for (x, y) in [(a, b), (b, a)] {
                let report = check_pwl_dominance(x, y, &slack, &eps).unwrap();
                let brute = oracle::dominance_margin(x, y, &slack, &eps);
                assert_eq!(report.margin, brute, "margin mismatch on '{name}'");
                assert_eq!(report.holds, !brute.is_positive());
                if let Some(violation) = &report.violation {
                    assert_eq!(x.eval(&violation.witness), violation.lhs);
                    assert_eq!(
                        y.eval(&violation.witness) + &eps * &slack.eval(&violation.witness),
                        violation.rhs
                    );
                }
                queries += 1;
            }
        }
    }
    println!(
        "[criterion 7] PASS: {queries} solver queries across {} norm pairs agree exactly \
         with vertex and arrangement enumeration",
        pairs.len()
    );
}

#[test]
fn c8_max_difference_bound_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut held = 0usize;
    for _ in 0..1000 {
        let len = rng.gen_range(1..=6);
        let r: Vec<Rat> = (0..len)
            .map(|_| Rat::new(rng.gen_range(1..=20), rng.gen_range(1..=10)))
            .collect();
        let theta: Vec<Rat> = (0..len)
            .map(|_| Rat::new(rng.gen_range(1..=20), rng.gen_range(1..=10)))
            .collect();
        let delta: Vec<Rat> = r
            .iter()
            .zip(&theta)
            .map(|(a, b)| (a - b).abs() + Rat::new(rng.gen_range(1..=5), 7))
            .collect();
        assert!(max_diff_lemma(&r, &theta, &delta).unwrap());
        held += 1;
    }
    assert_eq!(held, 1000);
    println!(
        "[criterion 8] PASS: the maximum-difference bound held on all 1000 randomized triples"
    );
}

#[test]
fn c9_glued_ranks_invariant_under_pullback() {
    let mut rng = ChaCha8Rng::seed_from_u64(9090);
    let mut pairs = 0usize;
    for i in 0..50 {
        let arity = 2 + (i % 2);
        let w = random_window(&mut rng, arity, false);
        let source_atoms = w.space().atom_count();

        // Onto map from dyadic(3) onto the window's space: hit every source
        // atom once, fill the rest at random, then shuffle in place.
        let target = AtomSpace::dyadic(3);
        let mut map: Vec<usize> = (0..target.atom_count())
            .map(|j| {
                if j < source_atoms {
                    j
                } else {
                    rng.gen_range(0..source_atoms)
                }
            })
            .collect();
        for j in (1..map.len()).rev() {
            map.swap(j, rng.gen_range(0..=j));
        }

        let pulled = FnWindow::new(
            w.fns()
                .iter()
                .map(|f| f.pullback(&target, &map).unwrap())
                .collect(),
        )
        .unwrap();

        let original = build_glued_tree(&w, 2, w.len()).unwrap();
        let transported = build_glued_tree(&pulled, 2, pulled.len()).unwrap();
        assert_eq!(original.order(), transported.order(), "pair {i}");
        let a: BTreeSet<_> = original.nodes().cloned().collect();
        let b: BTreeSet<_> = transported.nodes().cloned().collect();
        assert_eq!(a, b, "pair {i}");
        pairs += 1;
    }
    assert_eq!(pairs, 50);
    println!(
        "[criterion 9] PASS: glued ranks agree on all 50 window/onto-map pairs"
    );
}
