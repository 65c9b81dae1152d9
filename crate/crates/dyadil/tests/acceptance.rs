//! Acceptance suite: one test per criterion, each printing a single
//! verdict line. All comparisons are exact; there is no tolerance.

use std::time::{Duration, Instant};

use dyadil::automata::{check_isometry, check_nondegenerate, eval_equiv, EvalOutput, Transducer};
use dyadil::dilatation::{stabilize, DilatationStructure, Mutation, Operator};
use dyadil::verify;
use dyadil::words::{concat, cylinder_reps, finite_words, DyadicScale, OmegaWord};
use dyadil::workspace::{parse_workspace, Workspace};

fn fixtures() -> Workspace {
    parse_workspace(include_str!("data/fixtures.dil")).expect("fixtures parse")
}

fn all_structures(ws: &Workspace) -> Vec<&DilatationStructure> {
    ["Did", "Dmix1", "Dmix2", "Dlev"]
        .iter()
        .map(|n| &ws.structures[*n])
        .collect()
}

fn verdict(criterion: &str, pass: bool) {
    println!(
        "criterion {criterion}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed");
}

fn within(start: Instant, budget: Duration, what: &str) {
    let took = start.elapsed();
    assert!(took < budget, "{what} took {took:?}, budget {budget:?}");
}

#[test]
fn criterion_01_cone_property() {
    let ws = fixtures();
    let start = Instant::now();
    let mut pass = true;
    for d in all_structures(&ws) {
        pass &= verify::check_a3_cone(d, 6, 3).pass;
    }
    within(start, Duration::from_secs(60), "cone check");
    verdict("1 (cone property)", pass);
}

#[test]
fn criterion_02_image_and_round_trip() {
    let ws = fixtures();
    let start = Instant::now();
    let mut pass = true;
    for d in all_structures(&ws) {
        pass &= verify::check_a0_domains(d, 6, 3).pass;
    }
    within(start, Duration::from_secs(30), "round-trip check");
    verdict("2 (image/round-trip)", pass);
}

#[test]
fn criterion_03_semigroup_and_fixed_point() {
    let ws = fixtures();
    let mut pass = true;
    for d in all_structures(&ws) {
        pass &= verify::check_a1(d, 6).pass;
        pass &= verify::check_a2(d, 6, 3).pass;
    }
    verdict("3 (semigroup and fixed point)", pass);
}

#[test]
fn criterion_04_smoothness() {
    let ws = fixtures();
    let mut pass = true;
    for d in all_structures(&ws) {
        let m = d.wfun().max_window() as i32;
        for j in 0..=4 {
            let r = verify::check_smooth(d, DyadicScale::power(-j), 8);
            pass &= r.strict_pass;
            let floor = DyadicScale::power(-(j + m));
            pass &= r.empirical_mu.is_some_and(|mu| mu >= floor);
        }
    }
    verdict("4 (smoothness)", pass);
}

#[test]
fn criterion_05_selfsimilarity() {
    let ws = fixtures();
    let mut pass = verify::check_selfsimilar(&ws.structures["Dmix1"], 8).pass;
    pass &= verify::check_selfsimilar(&ws.structures["Dmix2"], 8).pass;
    let neg = verify::check_selfsimilar(&ws.structures["Dlev"], 8);
    pass &= !neg.pass && !neg.witnesses.is_empty();
    // Reproducibility of the negative control: identical reports.
    pass &= neg == verify::check_selfsimilar(&ws.structures["Dlev"], 8);
    verdict("5 (self-similarity)", pass);
}

#[test]
fn criterion_06_lipschitz_bound() {
    let ws = fixtures();
    let mut pass = true;
    for name in ["Did", "Dmix1", "Dmix2"] {
        let d = &ws.structures[name];
        let m = d.wfun().max_window() as i32;
        let r = verify::check_lipschitz(d, 8).expect("selfsimilar fixture");
        pass &= r.pass && r.constant <= DyadicScale::power(m);
    }
    verdict("6 (Lipschitz bound)", pass);
}

#[test]
fn criterion_07_isometries_and_sections() {
    let ws = fixtures();
    let mut machines: Vec<Transducer> = vec![Transducer::identity()];
    machines.extend(ws.machines.values().cloned());
    let isometries: Vec<&Transducer> = machines
        .iter()
        .filter(|m| check_isometry(m).pass)
        .collect();
    let mut pass = isometries.len() == 3; // id, flip, odo

    // Exact distance preservation at depth 10.
    let start = Instant::now();
    let reps = cylinder_reps(10);
    for m in &isometries {
        let outs: Vec<OmegaWord> = reps
            .iter()
            .map(|w| match m.eval(w) {
                EvalOutput::Word(o) => o,
                EvalOutput::Finite(_) => unreachable!(),
            })
            .collect();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                if outs[i].distance(&outs[j]) != reps[i].distance(&reps[j]) {
                    pass = false;
                }
            }
        }
    }
    within(start, Duration::from_secs(10), "distance preservation");

    // Section identity up to prefix length 6 on odometer and flip.
    let probes = cylinder_reps(6);
    for name in ["odo", "flip"] {
        let m = ws.machine(name).unwrap();
        for qlen in 0..=6 {
            for q in finite_words(qlen) {
                let sec = m.section(&q).unwrap();
                let head = m.eval_finite(&q).0;
                for w in &probes {
                    let lhs = m.eval(&concat(&q, w));
                    let rhs = match sec.eval(w) {
                        EvalOutput::Word(o) => EvalOutput::Word(concat(&head, &o)),
                        EvalOutput::Finite(o) => EvalOutput::Finite(head.concat(&o)),
                    };
                    if lhs != rhs {
                        pass = false;
                    }
                }
            }
        }
    }

    // Invert/compose round trips at depth 8.
    let id = Transducer::identity();
    for m in &isometries {
        let inv = m.invert().unwrap();
        pass &= eval_equiv(&m.compose(&inv).unwrap(), &id, 8);
        pass &= eval_equiv(&inv.compose(m).unwrap(), &id, 8);
    }
    verdict("7 (isometry and sections)", pass);
}

#[test]
fn criterion_08_asynchronous_continuity() {
    let ws = fixtures();
    let skip = ws.machine("skip").unwrap();
    let mut pass = matches!(
        skip.check_nondegenerate(),
        Err(cycle) if !cycle.is_empty()
    );
    pass &= !check_nondegenerate(&skip).pass;

    // Frozen moduli over n <= 12 for the nondegenerate fixtures.
    let expect: &[(&str, Vec<usize>)] = &[
        ("flip", (1..=12).collect()),
        ("odo", (1..=12).collect()),
        ("double", (1..=12).map(|k| 2 * k).collect()),
    ];
    for (name, want) in expect {
        let m = ws.machine(name).unwrap();
        let f = m.continuity_modulus(12).expect("nondegenerate");
        pass &= &f == want;
        pass &= f.windows(2).all(|w| w[0] <= w[1]); // nondecreasing
        pass &= f[0] >= 1;
        pass &= f[11] > f[0]; // unbounded over the tested range
    }
    verdict("8 (asynchronous continuity)", pass);
}

/// The difference operator on the identity-assignment structure is
/// claimed to be scale-independent from the first step. The operator
/// as defined contracts its first argument toward the base, so the
/// value genuinely changes with the scale (for example x=(0), u=1(0),
/// v=(1) gives 00(1) at p=1 but 0(1) at p=2); the claim fails and this
/// test records that honestly rather than weakening the assertion.
#[test]
fn criterion_09a_scale_independence_for_identity_assignment() {
    let ws = fixtures();
    let d = &ws.structures["Did"];
    let reps = cylinder_reps(5);
    let mut pass = true;
    let mut first_bad = None;
    'outer: for x in &reps {
        for u in &reps {
            for v in &reps {
                let rep = stabilize(d, Operator::Delta, x, u, Some(v), 9, 5).unwrap();
                if rep.stable_from != Some(1) {
                    pass = false;
                    first_bad = Some((x.clone(), u.clone(), v.clone(), rep.stable_from));
                    break 'outer;
                }
            }
        }
    }
    if let Some((x, u, v, got)) = &first_bad {
        println!("counterexample: x={x} u={u} v={v} stable_from={got:?}");
    }
    verdict("9a (scale independence, identity assignment)", pass);
}

#[test]
fn criterion_09b_stabilization_for_mixed_assignment() {
    let ws = fixtures();
    let r = verify::check_a4(&ws.structures["Dmix1"], 8, 9);
    verdict("9b (stabilization, mixed assignment)", r.pass);
}

#[test]
fn criterion_10_linearity_matches_selfsimilarity() {
    let ws = fixtures();
    let mut pass = true;
    for d in all_structures(&ws) {
        let lin = verify::check_prepend_linear(d, 6).pass;
        let ss = verify::check_selfsimilar(d, 6).pass;
        pass &= lin == ss;
    }
    verdict("10 (linearity matches self-similarity)", pass);
}

#[test]
fn criterion_11_mutation_kill() {
    let ws = fixtures();
    let mut pass = true;

    let bad = ws.structures["Dmix1"].clone().with_mutation(Mutation::DropNegation);
    pass &= !verify::check_a1(&bad, 6).pass;

    let bad = ws.structures["Dlev"].clone().with_mutation(Mutation::LevelShift);
    pass &= !verify::check_a2(&bad, 6, 3).pass;
    let bad = ws.structures["Dmix1"].clone().with_mutation(Mutation::LevelShift);
    pass &= !verify::check_selfsimilar(&bad, 6).pass;

    let bad = ws.structures["Dmix2"].clone().with_mutation(Mutation::NoInvert);
    pass &= !verify::check_a0_domains(&bad, 6, 3).pass;

    verdict("11 (mutation kill)", pass);
}
