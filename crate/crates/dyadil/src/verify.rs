//! Exhaustive finite-depth checkers for the dilatation axioms, with
//! counterexample witnesses.
//!
//! Every check enumerates cylinder representatives at the caller's
//! depth and compares exactly (canonical words, exact scales); there is
//! no tolerance. A FAIL always carries at least one witness and
//! witnesses are emitted in enumeration (lexicographic) order, so
//! reports are deterministic.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::automata::{EvalOutput, Transducer};
use crate::dilatation::{DilatationStructure, Operator, StabilizationReport, WFunction};
use crate::words::{concat, cylinder_reps, DyadicScale, FiniteWord, Letter, OmegaWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("structure {0:?} is leveled; this check applies to self-similar structures")]
    Leveled(String),
    #[error("machine {0:?} is not a boundary isometry")]
    NotIsometry(String),
}

/// One concrete counterexample: the inputs and both sides' values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
}

impl Witness {
    fn new(inputs: String, lhs: impl ToString, rhs: impl ToString) -> Witness {
        Witness {
            inputs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }
}

const WITNESS_CAP: usize = 8;

/// Verdict of one checker run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    pub depth: usize,
    pub pmax: usize,
    pub cases: usize,
    pub failures: usize,
    /// First few counterexamples, in enumeration order.
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    fn new(check: &str, depth: usize, pmax: usize) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            pass: true,
            depth,
            pmax,
            cases: 0,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    fn case(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.cases += 1;
        if !ok {
            self.pass = false;
            self.failures += 1;
            if self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(witness());
            }
        }
    }
}

fn apply(m: &Transducer, w: &OmegaWord) -> OmegaWord {
    match m.eval(w) {
        EvalOutput::Word(out) => out,
        EvalOutput::Finite(_) => unreachable!("isometries emit infinite output"),
    }
}

/// Fixed point and exact convergence: the base is fixed, and
/// contracting toward it scales the distance to the base by exactly
/// `2^{-p}`. The paper states convergence as an upper bound; the exact
/// form is what the construction guarantees and is what makes this
/// check falsifiable.
pub fn check_a1(d: &DilatationStructure, n: usize) -> CheckReport {
    let mut r = CheckReport::new("A1", n, n);
    let reps = cylinder_reps(n);
    for x in &reps {
        for p in 0..=n {
            let z = d.dilate(x, p, x);
            r.case(&z == x, || {
                Witness::new(format!("x={x} p={p}"), &z, x)
            });
        }
        for y in &reps {
            for p in 0..=n {
                let z = d.dilate(x, p, y);
                let want = DyadicScale::power(-(p as i32)) * x.distance(y);
                let got = z.distance(x);
                r.case(got == want, || {
                    Witness::new(format!("x={x} y={y} p={p}"), got, want)
                });
            }
        }
    }
    r
}

/// Semigroup law: composing contractions adds the exponents.
pub fn check_a2(d: &DilatationStructure, n: usize, pmax: usize) -> CheckReport {
    let mut r = CheckReport::new("A2", n, pmax);
    let reps = cylinder_reps(n);
    for x in &reps {
        for u in &reps {
            for p in 0..=pmax {
                for q in 0..=pmax - p {
                    let whole = d.dilate(x, p + q, u);
                    let split = d.dilate(x, p, &d.dilate(x, q, u));
                    r.case(whole == split, || {
                        Witness::new(format!("x={x} u={u} p={p} q={q}"), &whole, &split)
                    });
                }
            }
        }
    }
    r
}

/// Cone property: contracting toward any base scales all mutual
/// distances by exactly `2^{-p}`, so the rescaled tangent distance
/// coincides with the original distance.
pub fn check_a3_cone(d: &DilatationStructure, n: usize, pmax: usize) -> CheckReport {
    let mut r = CheckReport::new("A3", n, pmax);
    let reps = cylinder_reps(n);
    for x in &reps {
        for p in 1..=pmax {
            let images: Vec<OmegaWord> = reps.iter().map(|y| d.dilate(x, p, y)).collect();
            let scale = DyadicScale::power(-(p as i32));
            for (i, u) in reps.iter().enumerate() {
                for (j, v) in reps.iter().enumerate().skip(i) {
                    let got = images[i].distance(&images[j]);
                    let want = scale * u.distance(v);
                    r.case(got == want, || {
                        Witness::new(format!("x={x} u={u} v={v} p={p}"), got, want)
                    });
                }
            }
        }
    }
    r
}

/// Image and round trips: contraction lands in the base's cylinder,
/// every point of that cylinder is hit, expansion inverts contraction
/// in both orders, and points outside the cylinder are rejected.
pub fn check_a0_domains(d: &DilatationStructure, n: usize, pmax: usize) -> CheckReport {
    let mut r = CheckReport::new("A0", n, pmax);
    let reps = cylinder_reps(n);
    for x in &reps {
        for p in 0..=pmax {
            let xp = x.prefix(p);
            for y in &reps {
                let z = d.dilate(x, p, y);
                r.case(z.prefix(p) == xp, || {
                    Witness::new(format!("x={x} y={y} p={p}"), z.prefix(p), &xp)
                });
                let back = d.undilate(x, p, &z);
                r.case(back.as_ref() == Ok(y), || {
                    Witness::new(
                        format!("x={x} y={y} p={p}"),
                        match &back {
                            Ok(w) => w.to_string(),
                            Err(e) => e.to_string(),
                        },
                        y,
                    )
                });
            }
            for z in &reps {
                if z.prefix(p) == xp {
                    // Surjectivity onto the cylinder: expand, then
                    // contract back.
                    match d.undilate(x, p, z) {
                        Ok(y) => {
                            let again = d.dilate(x, p, &y);
                            r.case(&again == z, || {
                                Witness::new(format!("x={x} z={z} p={p}"), &again, z)
                            });
                        }
                        Err(e) => r.case(false, || {
                            Witness::new(format!("x={x} z={z} p={p}"), e.to_string(), "defined")
                        }),
                    }
                } else {
                    r.case(d.undilate(x, p, z).is_err(), || {
                        Witness::new(format!("x={x} z={z} p={p}"), "defined", "out of domain")
                    });
                }
            }
        }
    }
    r
}

/// Scale limit of the difference operator: every sampled triple must
/// stabilize at the report depth by scale exponent `p_limit`. The
/// sweep runs one step past the limit so that stability at the limit
/// itself is still witnessed by a later value.
pub fn check_a4(d: &DilatationStructure, n: usize, p_limit: usize) -> CheckReport {
    let mut r = CheckReport::new("A4", n, p_limit);
    let reps = cylinder_reps(n.min(5));
    for x in &reps {
        for u in &reps {
            for v in &reps {
                let rep = stabilize_delta(d, x, u, v, p_limit + 1, n);
                let ok = matches!(rep.stable_from, Some(s) if s <= p_limit);
                r.case(ok, || {
                    Witness::new(
                        format!("x={x} u={u} v={v}"),
                        match rep.stable_from {
                            Some(s) => format!("stable_from={s}"),
                            None => "no stabilization".to_string(),
                        },
                        format!("stable_from<={p_limit}"),
                    )
                });
            }
        }
    }
    r
}

fn stabilize_delta(
    d: &DilatationStructure,
    x: &OmegaWord,
    u: &OmegaWord,
    v: &OmegaWord,
    p_max: usize,
    depth: usize,
) -> StabilizationReport {
    crate::dilatation::stabilize(d, Operator::Delta, x, u, Some(v), p_max, depth)
        .expect("difference operator is total")
}

/// Data shared by the smoothness and Lipschitz checks: the worst and
/// per-point differences of two named isometries over depth-`n` reps.
struct IsoDiffs {
    reps: Vec<OmegaWord>,
    /// `(a, b) -> per-rep distances d(a(y), b(y))`.
    table: BTreeMap<(String, String), Vec<DyadicScale>>,
}

impl IsoDiffs {
    fn new(d: &DilatationStructure, n: usize) -> IsoDiffs {
        let reps = cylinder_reps(n);
        let names: Vec<String> = d.library().names().map(|s| s.to_string()).collect();
        let mut outputs: BTreeMap<&str, Vec<OmegaWord>> = BTreeMap::new();
        for name in &names {
            let m = d.library().get(name).unwrap();
            outputs.insert(name, reps.iter().map(|y| apply(m, y)).collect());
        }
        let mut table = BTreeMap::new();
        for a in &names {
            for b in &names {
                let diffs = outputs[a.as_str()]
                    .iter()
                    .zip(&outputs[b.as_str()])
                    .map(|(u, v)| u.distance(v))
                    .collect();
                table.insert((a.clone(), b.clone()), diffs);
            }
        }
        IsoDiffs { reps, table }
    }

    fn diffs(&self, a: &str, b: &str) -> &[DyadicScale] {
        &self.table[&(a.to_string(), b.to_string())]
    }

    fn worst(&self, a: &str, b: &str) -> (DyadicScale, usize) {
        let diffs = self.diffs(a, b);
        let mut best = (DyadicScale::Zero, 0);
        for (i, &v) in diffs.iter().enumerate() {
            if v > best.0 {
                best = (v, i);
            }
        }
        best
    }
}

/// Smoothness report: how uniformly the attached isometries vary with
/// the base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub epsilon: DyadicScale,
    pub depth: usize,
    /// Verdict under the universal reading of the level quantifier
    /// (every level below the pair's separation); this one decides
    /// PASS/FAIL.
    pub strict_pass: bool,
    /// Verdict under the existential reading (some level suffices).
    pub some_pass: bool,
    /// Largest scale `2^{-i}` such that every base pair at distance
    /// `<= 2^{-i}` meets the bound at every tested level, if any.
    pub empirical_mu: Option<DyadicScale>,
    /// For each pair-distance class, the worst rescaled difference per
    /// level: `(pair distance, [(k, worst value)])`.
    pub worst_by_class: Vec<(DyadicScale, Vec<(usize, DyadicScale)>)>,
    pub cases: usize,
    pub witnesses: Vec<Witness>,
}

/// Evaluates `2^{-k} d(W^x_k(y), W^{x'}_k(y)) <= eps` over all pairs of
/// depth-`n` bases, all reps `y`, and all levels `k <= n` with
/// `d(x, x') < 2^{-k}`.
pub fn check_smooth(d: &DilatationStructure, epsilon: DyadicScale, n: usize) -> SmoothnessReport {
    let diffs = IsoDiffs::new(d, n);
    let reps = &diffs.reps;
    let mut strict_pass = true;
    let mut some_pass = true;
    let mut cases = 0usize;
    let mut witnesses = Vec::new();
    // class_worst[i][k-1] = worst value over pairs at distance 2^{-i}
    let mut class_worst: BTreeMap<i32, Vec<DyadicScale>> = BTreeMap::new();
    // class_ok[i] = strict bound holds on every pair at distance 2^{-i}
    let mut class_ok: BTreeMap<i32, bool> = BTreeMap::new();

    for (ia, x) in reps.iter().enumerate() {
        for xp in reps.iter().skip(ia + 1) {
            let dist = x.distance(xp);
            let DyadicScale::Power(neg_i) = dist else { continue };
            let i = -neg_i as usize; // d(x, x') = 2^{-i}
            // valid levels: d(x, x') < 2^{-k}  <=>  k < i
            let kmax = n.min(i.saturating_sub(1));
            if kmax == 0 {
                continue;
            }
            let worst_row = class_worst
                .entry(neg_i)
                .or_insert_with(|| vec![DyadicScale::Zero; n]);
            let ok_row = class_ok.entry(neg_i).or_insert(true);
            let mut any_level_ok = vec![false; reps.len()];
            for k in 1..=kmax {
                let a = d.iso_name_at(x, k);
                let b = d.iso_name_at(xp, k);
                let scale = DyadicScale::power(-(k as i32));
                let (worst, worst_y) = diffs.worst(a, b);
                let value = scale * worst;
                cases += 1;
                if value > worst_row[k - 1] {
                    worst_row[k - 1] = value;
                }
                if value > epsilon {
                    *ok_row = false;
                    strict_pass = false;
                    if witnesses.len() < WITNESS_CAP {
                        witnesses.push(Witness::new(
                            format!("x={x} x'={xp} y={} k={k}", reps[worst_y]),
                            value,
                            format!("<= {epsilon}"),
                        ));
                    }
                }
                for (iy, &dy) in diffs.diffs(a, b).iter().enumerate() {
                    if scale * dy <= epsilon {
                        any_level_ok[iy] = true;
                    }
                }
            }
            if !any_level_ok.iter().all(|&ok| ok) {
                some_pass = false;
            }
        }
    }

    // The largest threshold 2^{-i} such that no class at distance
    // <= 2^{-i} fails the strict bound.
    let mut empirical_mu = None;
    for i in 0..=n as i32 {
        let thr = -i;
        if class_ok.iter().all(|(&e, &ok)| ok || e > thr) {
            empirical_mu = Some(DyadicScale::Power(thr));
            break;
        }
    }

    let worst_by_class = class_worst
        .into_iter()
        .map(|(e, row)| {
            let levels = row
                .into_iter()
                .enumerate()
                .map(|(k, v)| (k + 1, v))
                .collect();
            (DyadicScale::Power(e), levels)
        })
        .collect();

    SmoothnessReport {
        epsilon,
        depth: n,
        strict_pass,
        some_pass,
        empirical_mu,
        worst_by_class,
        cases,
        witnesses,
    }
}

/// Self-similarity: contraction commutes with prepending a letter. For
/// leveled assignments the per-level tables are also compared directly
/// (shifting the base by one letter must not change the isometry).
pub fn check_selfsimilar(d: &DilatationStructure, n: usize) -> CheckReport {
    let mut r = prepend_commutation(d, n);
    r.check = "selfsimilar".to_string();
    if let WFunction::Leveled { .. } = d.wfun() {
        // Level-independence of the assignment itself.
        let window = d.wfun().max_window();
        for q in 1..n.max(1) {
            for x in cylinder_reps(window.min(n)) {
                for head in crate::words::finite_words(q) {
                    let shifted = concat(&head, &x);
                    let deep = d.iso_name_at(&shifted, q + 1).to_string();
                    let base = d.iso_name_at(&x, 1).to_string();
                    r.case(deep == base, || {
                        Witness::new(format!("q={head} x={x}"), &deep, &base)
                    });
                }
            }
        }
    }
    r
}

/// The prepend maps `w -> 0w` and `w -> 1w` tested for linearity:
/// exactly the self-similarity equality.
pub fn check_prepend_linear(d: &DilatationStructure, n: usize) -> CheckReport {
    let mut r = prepend_commutation(d, n);
    r.check = "prepend-linear".to_string();
    r
}

fn prepend_commutation(d: &DilatationStructure, n: usize) -> CheckReport {
    let mut r = CheckReport::new("prepend", n, 1);
    for alpha in [Letter::Zero, Letter::One] {
        let a = FiniteWord::from_letters(vec![alpha]);
        let map = |w: &OmegaWord| concat(&a, w);
        commutation_cases(d, n, &map, &format!("{alpha}^"), &mut r);
    }
    r
}

/// Linearity of a boundary isometry with respect to the structure: the
/// machine commutes with contraction toward any base.
pub fn check_linear(
    d: &DilatationStructure,
    m: &Transducer,
    n: usize,
) -> Result<CheckReport, VerifyError> {
    if !m.is_isometry() {
        return Err(VerifyError::NotIsometry(m.name().to_string()));
    }
    let mut r = CheckReport::new("linear", n, 1);
    let map = |w: &OmegaWord| apply(m, w);
    commutation_cases(d, n, &map, m.name(), &mut r);
    Ok(r)
}

fn commutation_cases(
    d: &DilatationStructure,
    n: usize,
    map: &dyn Fn(&OmegaWord) -> OmegaWord,
    map_name: &str,
    r: &mut CheckReport,
) {
    let reps = cylinder_reps(n);
    for x in &reps {
        let fx = map(x);
        for y in &reps {
            let lhs = map(&d.dilate2(x, y));
            let rhs = d.dilate2(&fx, &map(y));
            r.case(lhs == rhs, || {
                Witness::new(format!("A={map_name} x={x} y={y}"), &lhs, &rhs)
            });
        }
    }
}

/// Lipschitz dependence of the attached isometry on the base point,
/// for self-similar structures: the worst ratio
/// `d(W^x(y), W^{x'}(y)) / d(x, x')` must not exceed `2^m` for window
/// `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzReport {
    pub constant: DyadicScale,
    pub bound: DyadicScale,
    pub pass: bool,
    pub depth: usize,
    pub cases: usize,
    pub witness: Option<Witness>,
}

pub fn check_lipschitz(d: &DilatationStructure, n: usize) -> Result<LipschitzReport, VerifyError> {
    let WFunction::SelfSimilar(table) = d.wfun() else {
        return Err(VerifyError::Leveled(d.name().to_string()));
    };
    let m = table.window();
    let diffs = IsoDiffs::new(d, n);
    let reps = &diffs.reps;
    let mut constant = DyadicScale::Zero;
    let mut witness = None;
    let mut cases = 0usize;
    for (ia, x) in reps.iter().enumerate() {
        for xp in reps.iter().skip(ia + 1) {
            let a = d.iso_name_at(x, 1);
            let b = d.iso_name_at(xp, 1);
            let (worst, worst_y) = diffs.worst(a, b);
            cases += 1;
            let Some(ratio) = worst.ratio(x.distance(xp)) else {
                continue;
            };
            if ratio > constant {
                constant = ratio;
                witness = Some(Witness::new(
                    format!("x={x} x'={xp} y={}", reps[worst_y]),
                    ratio,
                    format!("<= 2^{m}"),
                ));
            }
        }
    }
    let bound = DyadicScale::power(m as i32);
    Ok(LipschitzReport {
        constant,
        bound,
        pass: constant <= bound,
        depth: n,
        cases,
        witness,
    })
}
