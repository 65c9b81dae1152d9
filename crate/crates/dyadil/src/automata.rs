//! Letter-to-letter and asynchronous transducers on binary words.
//!
//! A machine has finitely many states; reading a letter in a state
//! produces an output block (exactly one letter in the synchronous
//! case, any finite word otherwise) and moves to a next state. Running
//! a machine on an eventually periodic input always yields either an
//! eventually periodic output or a finite one, found exactly by
//! detecting a repeated (state, position-in-period) pair.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::words::{concat, FiniteWord, Letter, OmegaWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("machine {0:?}: state {1:?} not defined")]
    UnknownState(String, String),
    #[error("machine {0:?}: synchronous machines must output exactly one letter per step")]
    NotLetterToLetter(String),
    #[error("inverting {0:?}: {1}")]
    NotInvertible(String, String),
    #[error("{0} requires a letter-to-letter machine, {1:?} is asynchronous")]
    AsyncRejected(&'static str, String),
    #[error("machine {0:?} is degenerate (has a silent reachable cycle)")]
    Degenerate(String),
}

/// Verdict of a per-machine check, with a witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineReport {
    pub check: String,
    pub machine: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineKind {
    /// Letter-to-letter: every step emits exactly one letter.
    Mealy,
    /// Every step emits a finite (possibly empty) word.
    Async,
}

/// One transducer. States are indexed; names are kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transducer {
    name: String,
    kind: MachineKind,
    state_names: Vec<String>,
    start: usize,
    /// `steps[state][letter] = (next state, output)`.
    steps: Vec<[(usize, FiniteWord); 2]>,
}

/// Result of running a machine on an infinite input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalOutput {
    /// The output is itself eventually periodic and infinite.
    Word(OmegaWord),
    /// The run eventually stops emitting: only this finite prefix is
    /// ever produced.
    Finite(FiniteWord),
}

impl fmt::Display for EvalOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalOutput::Word(w) => write!(f, "{w}"),
            EvalOutput::Finite(q) => write!(f, "finite {q}"),
        }
    }
}

impl Transducer {
    /// Builds a machine from named rows. Every state must have a row
    /// for both letters; synchronous machines must emit one letter per
    /// step.
    pub fn new(
        name: &str,
        kind: MachineKind,
        start: &str,
        rows: &[(String, Letter, String, FiniteWord)],
    ) -> Result<Transducer, AutomataError> {
        let mut state_names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut intern = |s: &str, state_names: &mut Vec<String>| -> usize {
            *index.entry(s.to_string()).or_insert_with(|| {
                state_names.push(s.to_string());
                state_names.len() - 1
            })
        };
        let start_ix = intern(start, &mut state_names);
        for (src, _, dst, _) in rows {
            intern(src, &mut state_names);
            intern(dst, &mut state_names);
        }
        let n = state_names.len();
        let mut seen = vec![[false; 2]; n];
        let mut steps = vec![
            [
                (0usize, FiniteWord::empty()),
                (0usize, FiniteWord::empty())
            ];
            n
        ];
        for (src, a, dst, out) in rows {
            if kind == MachineKind::Mealy && out.len() != 1 {
                return Err(AutomataError::NotLetterToLetter(name.to_string()));
            }
            let s = intern(src, &mut state_names);
            let d = intern(dst, &mut state_names);
            seen[s][a.index()] = true;
            steps[s][a.index()] = (d, out.clone());
        }
        for (s, flags) in seen.iter().enumerate() {
            if !(flags[0] && flags[1]) {
                return Err(AutomataError::UnknownState(
                    name.to_string(),
                    format!("{} is missing a transition", state_names[s]),
                ));
            }
        }
        Ok(Transducer {
            name: name.to_string(),
            kind,
            state_names,
            start: start_ix,
            steps,
        })
    }

    /// The identity machine: one state, copies its input.
    pub fn identity() -> Transducer {
        Transducer {
            name: "id".to_string(),
            kind: MachineKind::Mealy,
            state_names: vec!["q".to_string()],
            start: 0,
            steps: vec![[
                (0, FiniteWord::from_letters(vec![Letter::Zero])),
                (0, FiniteWord::from_letters(vec![Letter::One])),
            ]],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> MachineKind {
        self.kind
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.state_names[s]
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn step(&self, state: usize, a: Letter) -> (usize, &FiniteWord) {
        let (d, ref out) = self.steps[state][a.index()];
        (d, out)
    }

    /// States reachable from the start state, in discovery order.
    pub fn reachable_states(&self) -> Vec<usize> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![self.start];
        seen[self.start] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for a in [Letter::Zero, Letter::One] {
                let (d, _) = self.steps[s][a.index()];
                if !seen[d] {
                    seen[d] = true;
                    order.push(d);
                }
            }
            i += 1;
        }
        order
    }

    /// Runs the machine on a finite word from a given state; returns
    /// the output and the ending state.
    pub fn eval_finite_from(&self, mut state: usize, input: &FiniteWord) -> (FiniteWord, usize) {
        let mut out = FiniteWord::empty();
        for &a in input.letters() {
            let (d, block) = self.step(state, a);
            out = out.concat(block);
            state = d;
        }
        (out, state)
    }

    /// Runs the machine on a finite word from the start state.
    pub fn eval_finite(&self, input: &FiniteWord) -> (FiniteWord, usize) {
        self.eval_finite_from(self.start, input)
    }

    /// Runs the machine on an eventually periodic input from a given
    /// state. Exact: once the input is inside its period, the pair
    /// (machine state, offset into the period) must repeat, and the
    /// output between two visits is the output period. A repeat that
    /// emitted nothing means the output is finite.
    pub fn eval_from(&self, state: usize, input: &OmegaWord) -> EvalOutput {
        let (pre_out, mut state) = self.eval_finite_from(state, input.preperiod());
        let per = input.period().letters();
        // outputs[k] = output emitted by visits 0..k of the period cursor
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut emitted: Vec<usize> = vec![0]; // prefix lengths at each visit
        let mut body = FiniteWord::empty();
        let mut offset = 0usize;
        loop {
            if let Some(&first) = seen.get(&(state, offset)) {
                let cut = emitted[first];
                let cycle_len = body.len() - cut;
                let head: FiniteWord = pre_out
                    .letters()
                    .iter()
                    .chain(body.letters()[..cut].iter())
                    .copied()
                    .collect();
                if cycle_len == 0 {
                    return EvalOutput::Finite(head);
                }
                let period = FiniteWord::from_letters(body.letters()[cut..].to_vec());
                return EvalOutput::Word(concat(&head, &OmegaWord::new(FiniteWord::empty(), period).unwrap()));
            }
            seen.insert((state, offset), emitted.len() - 1);
            let a = per[offset];
            let (d, block) = self.step(state, a);
            body = body.concat(block);
            state = d;
            offset = (offset + 1) % per.len();
            emitted.push(body.len());
        }
    }

    /// Runs the machine on an eventually periodic input from the start
    /// state.
    pub fn eval(&self, input: &OmegaWord) -> EvalOutput {
        self.eval_from(self.start, input)
    }

    /// The machine restarted after reading `q`: same rows, start state
    /// moved to wherever `q` leads. Satisfies
    /// `A(q w) = A(q) . section(A, q)(w)`. Defined for letter-to-letter
    /// machines only.
    pub fn section(&self, q: &FiniteWord) -> Result<Transducer, AutomataError> {
        if self.kind != MachineKind::Mealy {
            return Err(AutomataError::AsyncRejected("section", self.name.clone()));
        }
        let (_, end) = self.eval_finite(q);
        let mut m = self.clone();
        m.start = end;
        m.name = format!("{}[{}]", self.name, q);
        Ok(m)
    }

    /// Serial composition of letter-to-letter machines: feed the
    /// output of `self` into `other`. States are the reachable pairs.
    pub fn compose(&self, other: &Transducer) -> Result<Transducer, AutomataError> {
        for m in [self, other] {
            if m.kind != MachineKind::Mealy {
                return Err(AutomataError::AsyncRejected("compose", m.name.clone()));
            }
        }
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.start, other.start)];
        index.insert((self.start, other.start), 0);
        let mut steps: Vec<[(usize, FiniteWord); 2]> = Vec::new();
        let mut state_names = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (s1, s2) = pairs[i];
            state_names.push(format!("{},{}", self.state_names[s1], other.state_names[s2]));
            let mut row = [
                (0usize, FiniteWord::empty()),
                (0usize, FiniteWord::empty()),
            ];
            for a in [Letter::Zero, Letter::One] {
                let (d1, mid) = self.step(s1, a);
                let (out, d2) = other.eval_finite_from(s2, mid);
                let next = *index.entry((d1, d2)).or_insert_with(|| {
                    pairs.push((d1, d2));
                    pairs.len() - 1
                });
                row[a.index()] = (next, out);
            }
            steps.push(row);
            i += 1;
        }
        Ok(Transducer {
            name: format!("{}.{}", other.name, self.name),
            kind: MachineKind::Mealy,
            state_names,
            start: 0,
            steps,
        })
    }

    /// Whether the machine acts as an isometry on the boundary: it is
    /// letter-to-letter and in every reachable state the output map is
    /// a permutation of the alphabet.
    pub fn is_isometry(&self) -> bool {
        if self.kind != MachineKind::Mealy {
            return false;
        }
        self.reachable_states().iter().all(|&s| {
            let o0 = self.steps[s][0].1.letters()[0];
            let o1 = self.steps[s][1].1.letters()[0];
            o0 != o1
        })
    }

    /// Inverse of an isometry: swap the roles of input and output
    /// letters in every row.
    pub fn invert(&self) -> Result<Transducer, AutomataError> {
        if !self.is_isometry() {
            return Err(AutomataError::NotInvertible(
                self.name.clone(),
                "machine is not a state-wise permutation".to_string(),
            ));
        }
        let mut steps = vec![
            [
                (0usize, FiniteWord::empty()),
                (0usize, FiniteWord::empty())
            ];
            self.state_count()
        ];
        for (s, row) in steps.iter_mut().enumerate() {
            for a in [Letter::Zero, Letter::One] {
                let (d, out) = self.step(s, a);
                let b = out.letters()[0];
                row[b.index()] = (d, FiniteWord::from_letters(vec![a]));
            }
        }
        Ok(Transducer {
            name: format!("{}^-1", self.name),
            kind: MachineKind::Mealy,
            state_names: self.state_names.clone(),
            start: self.start,
            steps,
        })
    }

    /// Whether no reachable run can get stuck emitting nothing: every
    /// cycle through empty-output transitions is excluded. Returns the
    /// offending cycle as (state, input letter) edges on failure.
    pub fn check_nondegenerate(&self) -> Result<(), Vec<(String, Letter)>> {
        // Restrict to edges with empty output; any cycle there is bad.
        let reach = self.reachable_states();
        let mut color = vec![0u8; self.state_count()]; // 0 white 1 gray 2 black
        let mut stack: Vec<(usize, Letter)> = Vec::new();
        fn dfs(
            m: &Transducer,
            s: usize,
            color: &mut Vec<u8>,
            stack: &mut Vec<(usize, Letter)>,
        ) -> Option<Vec<(usize, Letter)>> {
            color[s] = 1;
            for a in [Letter::Zero, Letter::One] {
                let (d, out) = m.step(s, a);
                if !out.is_empty() {
                    continue;
                }
                stack.push((s, a));
                if color[d] == 1 {
                    let at = stack.iter().position(|&(x, _)| x == d).unwrap();
                    return Some(stack[at..].to_vec());
                }
                if color[d] == 0 {
                    if let Some(c) = dfs(m, d, color, stack) {
                        return Some(c);
                    }
                }
                stack.pop();
            }
            color[s] = 2;
            None
        }
        for &s in &reach {
            if color[s] == 0 {
                if let Some(cyc) = dfs(self, s, &mut color, &mut stack) {
                    return Err(cyc
                        .into_iter()
                        .map(|(i, a)| (self.state_names[i].clone(), a))
                        .collect());
                }
            }
        }
        Ok(())
    }

    /// `f(k)` = the least number of output letters guaranteed after
    /// reading any `k` input letters from the start state. Computed by
    /// a shortest-output dynamic program over (depth, state). Rejects
    /// degenerate machines, whose modulus would not grow.
    pub fn continuity_modulus(&self, kmax: usize) -> Result<Vec<usize>, AutomataError> {
        if self.check_nondegenerate().is_err() {
            return Err(AutomataError::Degenerate(self.name.clone()));
        }
        let n = self.state_count();
        // best[s] = min output length over length-d inputs starting at s
        let mut best = vec![0usize; n];
        let mut out = Vec::with_capacity(kmax);
        for _ in 1..=kmax {
            let mut next = vec![usize::MAX; n];
            for (s, slot) in next.iter_mut().enumerate() {
                for a in [Letter::Zero, Letter::One] {
                    let (d, block) = self.step(s, a);
                    *slot = (*slot).min(block.len() + best[d]);
                }
            }
            best = next;
            out.push(best[self.start]);
        }
        Ok(out)
    }
}

/// Isometry verdict: letter-to-letter with a per-state output
/// permutation on the reachable part. The witness names the state and
/// letters breaking the permutation.
pub fn check_isometry(m: &Transducer) -> MachineReport {
    let mut report = MachineReport {
        check: "isometry".to_string(),
        machine: m.name().to_string(),
        pass: true,
        witness: None,
    };
    if m.kind() != MachineKind::Mealy {
        report.pass = false;
        report.witness = Some("machine is asynchronous".to_string());
        return report;
    }
    for s in m.reachable_states() {
        let o0 = m.step(s, Letter::Zero).1.letters()[0];
        let o1 = m.step(s, Letter::One).1.letters()[0];
        if o0 == o1 {
            report.pass = false;
            report.witness = Some(format!(
                "state {} sends both 0 and 1 to {}",
                m.state_name(s),
                o0
            ));
            return report;
        }
    }
    report
}

/// Nondegeneracy verdict with the silent cycle as witness.
pub fn check_nondegenerate(m: &Transducer) -> MachineReport {
    let (pass, witness) = match m.check_nondegenerate() {
        Ok(()) => (true, None),
        Err(cycle) => {
            let path: Vec<String> = cycle
                .iter()
                .map(|(s, a)| format!("{s} --{a}/e-->"))
                .collect();
            (false, Some(path.join(" ")))
        }
    };
    MachineReport {
        check: "nondegenerate".to_string(),
        machine: m.name().to_string(),
        pass,
        witness,
    }
}

/// Whether two machines compute the same boundary map, checked on all
/// cylinder representatives of the given depth plus the constant words.
pub fn eval_equiv(a: &Transducer, b: &Transducer, depth: usize) -> bool {
    let mut probes = crate::words::cylinder_reps(depth);
    probes.push(OmegaWord::constant(Letter::One));
    probes.iter().all(|w| a.eval(w) == b.eval(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::cylinder_reps;
    use proptest::prelude::*;

    fn w(s: &str) -> OmegaWord {
        s.parse().unwrap()
    }

    fn fin(s: &str) -> FiniteWord {
        FiniteWord::from_bits(s).unwrap()
    }

    fn row(src: &str, a: char, dst: &str, out: &str) -> (String, Letter, String, FiniteWord) {
        (
            src.to_string(),
            Letter::from_char(a).unwrap(),
            dst.to_string(),
            fin(out),
        )
    }

    /// Binary odometer (add one, least significant bit first).
    fn odo() -> Transducer {
        Transducer::new(
            "odo",
            MachineKind::Mealy,
            "c",
            &[
                row("c", '1', "c", "0"),
                row("c", '0', "e", "1"),
                row("e", '0', "e", "0"),
                row("e", '1', "e", "1"),
            ],
        )
        .unwrap()
    }

    fn flip() -> Transducer {
        Transducer::new(
            "flip",
            MachineKind::Mealy,
            "q",
            &[row("q", '0', "q", "1"), row("q", '1', "q", "0")],
        )
        .unwrap()
    }

    /// Swallows zeros, copies ones: degenerate.
    fn skip() -> Transducer {
        Transducer::new(
            "skip",
            MachineKind::Async,
            "a",
            &[
                (
                    "a".to_string(),
                    Letter::Zero,
                    "a".to_string(),
                    FiniteWord::empty(),
                ),
                row("a", '1', "a", "1"),
            ],
        )
        .unwrap()
    }

    /// Emits each input letter twice.
    fn double() -> Transducer {
        Transducer::new(
            "double",
            MachineKind::Async,
            "a",
            &[row("a", '0', "a", "00"), row("a", '1', "a", "11")],
        )
        .unwrap()
    }

    /// One-letter delay: emits the previous input letter.
    fn lag() -> Transducer {
        Transducer::new(
            "lag",
            MachineKind::Async,
            "s",
            &[
                (
                    "s".to_string(),
                    Letter::Zero,
                    "z".to_string(),
                    FiniteWord::empty(),
                ),
                (
                    "s".to_string(),
                    Letter::One,
                    "o".to_string(),
                    FiniteWord::empty(),
                ),
                row("z", '0', "z", "0"),
                row("z", '1', "o", "0"),
                row("o", '0', "z", "1"),
                row("o", '1', "o", "1"),
            ],
        )
        .unwrap()
    }

    /// Oracle: add one to a bit string read least significant first.
    fn add_one_lsb(bits: &FiniteWord) -> FiniteWord {
        let mut carry = true;
        bits.letters()
            .iter()
            .map(|&b| {
                let v = (b == Letter::One) as u8 + carry as u8;
                carry = v >= 2;
                if v % 2 == 1 { Letter::One } else { Letter::Zero }
            })
            .collect()
    }

    #[test]
    fn odometer_finite_matches_adder() {
        let m = odo();
        assert_eq!(m.eval_finite(&fin("110")).0, fin("001"));
        for n in 0..64u32 {
            let bits: FiniteWord = (0..6)
                .map(|i| {
                    if n >> i & 1 == 1 {
                        Letter::One
                    } else {
                        Letter::Zero
                    }
                })
                .collect();
            assert_eq!(m.eval_finite(&bits).0, add_one_lsb(&bits));
        }
    }

    #[test]
    fn odometer_infinite() {
        let m = odo();
        assert_eq!(m.eval(&w("1(0)")), EvalOutput::Word(w("01(0)")));
        assert_eq!(m.eval(&w("(1)")), EvalOutput::Word(w("(0)")));
        assert_eq!(m.eval(&w("(0)")), EvalOutput::Word(w("1(0)")));
    }

    #[test]
    fn skip_is_degenerate() {
        let m = skip();
        assert_eq!(m.eval(&w("1(0)")), EvalOutput::Finite(fin("1")));
        assert_eq!(m.eval(&w("(10)")), EvalOutput::Word(w("(1)")));
        assert_eq!(
            m.check_nondegenerate(),
            Err(vec![("a".to_string(), Letter::Zero)])
        );
        assert_eq!(
            m.continuity_modulus(3),
            Err(AutomataError::Degenerate("skip".to_string()))
        );
        let report = check_nondegenerate(&m);
        assert!(!report.pass);
        assert_eq!(report.witness.as_deref(), Some("a --0/e-->"));
        assert!(m.section(&fin("1")).is_err());
        assert!(m.compose(&m).is_err());
    }

    #[test]
    fn double_modulus() {
        let m = double();
        assert_eq!(m.continuity_modulus(4), Ok(vec![2, 4, 6, 8]));
        assert_eq!(m.eval(&w("(01)")), EvalOutput::Word(w("(0011)")));
    }

    #[test]
    fn lag_modulus_and_eval() {
        let m = lag();
        assert_eq!(m.continuity_modulus(4), Ok(vec![0, 1, 2, 3]));
        assert_eq!(m.eval(&w("1(0)")), EvalOutput::Word(w("1(0)")));
        assert_eq!(m.eval(&w("(01)")), EvalOutput::Word(w("(01)")));
        assert!(m.check_nondegenerate().is_ok());
    }

    #[test]
    fn odometer_modulus() {
        assert_eq!(odo().continuity_modulus(3), Ok(vec![1, 2, 3]));
    }

    #[test]
    fn isometry_detection() {
        assert!(odo().is_isometry());
        assert!(flip().is_isometry());
        assert!(Transducer::identity().is_isometry());
        assert!(!skip().is_isometry());
        assert!(!double().is_isometry());
        // Letter-to-letter but constant in a state: not an isometry.
        let c = Transducer::new(
            "const0",
            MachineKind::Mealy,
            "q",
            &[row("q", '0', "q", "0"), row("q", '1', "q", "0")],
        )
        .unwrap();
        assert!(!c.is_isometry());
        assert!(c.invert().is_err());
        let report = check_isometry(&c);
        assert!(!report.pass);
        assert_eq!(
            report.witness.as_deref(),
            Some("state q sends both 0 and 1 to 0")
        );
        assert!(check_isometry(&odo()).pass);
    }

    #[test]
    fn section_identity() {
        let m = odo();
        for q in crate::words::finite_words(4) {
            let sec = m.section(&q).unwrap();
            for v in cylinder_reps(4) {
                let lhs = m.eval(&crate::words::concat(&q, &v));
                let head = m.eval_finite(&q).0;
                let rhs = match sec.eval(&v) {
                    EvalOutput::Word(out) => EvalOutput::Word(crate::words::concat(&head, &out)),
                    EvalOutput::Finite(out) => EvalOutput::Finite(head.concat(&out)),
                };
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn invert_round_trip() {
        for m in [odo(), flip()] {
            let inv = m.invert().unwrap();
            let both = m.compose(&inv).unwrap();
            assert!(eval_equiv(&both, &Transducer::identity(), 6));
            let other = inv.compose(&m).unwrap();
            assert!(eval_equiv(&other, &Transducer::identity(), 6));
        }
    }

    #[test]
    fn compose_matches_sequential_eval() {
        let m = odo();
        let f = flip();
        let comp = m.compose(&f).unwrap(); // flip after odo
        for v in cylinder_reps(5) {
            let mid = match m.eval(&v) {
                EvalOutput::Word(u) => u,
                EvalOutput::Finite(_) => unreachable!(),
            };
            assert_eq!(comp.eval(&v), f.eval(&mid));
        }
    }

    fn arb_omega() -> impl Strategy<Value = OmegaWord> {
        (
            prop::collection::vec(prop_oneof![Just(Letter::Zero), Just(Letter::One)], 0..=5),
            prop::collection::vec(prop_oneof![Just(Letter::Zero), Just(Letter::One)], 1..=4),
        )
            .prop_map(|(pre, per)| {
                OmegaWord::new(FiniteWord::from_letters(pre), FiniteWord::from_letters(per))
                    .unwrap()
            })
    }

    proptest! {
        #[test]
        fn isometry_preserves_distance(u in arb_omega(), v in arb_omega()) {
            let m = odo();
            let (EvalOutput::Word(mu), EvalOutput::Word(mv)) = (m.eval(&u), m.eval(&v)) else {
                unreachable!()
            };
            prop_assert_eq!(mu.distance(&mv), u.distance(&v));
        }

        #[test]
        fn eval_matches_prefix_run(u in arb_omega(), k in 1usize..24) {
            // The infinite-run output must agree with running on prefixes.
            let m = odo();
            let EvalOutput::Word(out) = m.eval(&u) else { unreachable!() };
            let (fin_out, _) = m.eval_finite(&u.prefix(k));
            prop_assert_eq!(out.prefix(fin_out.len()), fin_out);
        }

        #[test]
        fn async_eval_matches_prefix_run(u in arb_omega(), k in 1usize..24) {
            for m in [skip(), double(), lag()] {
                let (fin_out, _) = m.eval_finite(&u.prefix(k));
                match m.eval(&u) {
                    EvalOutput::Word(out) => prop_assert_eq!(out.prefix(fin_out.len()), fin_out),
                    EvalOutput::Finite(full) => {
                        prop_assert_eq!(&full.letters()[..fin_out.len()], fin_out.letters())
                    }
                }
            }
        }
    }
}
