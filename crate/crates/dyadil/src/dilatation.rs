//! Dilatations on the boundary of the dyadic tree.
//!
//! A structure is determined by a family of boundary isometries
//! (letter-to-letter transducers): one per tree level and finite window
//! of the base point. Dilating a point toward a base halves its
//! distance to the base and twists the tail by the isometry attached to
//! the level where base and point split.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::automata::{EvalOutput, Transducer};
use crate::words::{concat, FiniteWord, Letter, OmegaWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DilatationError {
    #[error("point is outside the domain: expected prefix {expected}, found {found}")]
    OutOfDomain { expected: FiniteWord, found: FiniteWord },
    #[error("unknown isometry {0:?}")]
    UnknownIsometry(String),
    #[error("machine {0:?} is not a boundary isometry")]
    NotIsometry(String),
    #[error("bad table: {0}")]
    BadTable(String),
}

/// Named boundary isometries, with inverses precomputed.
#[derive(Debug, Clone)]
pub struct IsometryLibrary {
    machines: BTreeMap<String, Transducer>,
    inverses: BTreeMap<String, Transducer>,
}

impl IsometryLibrary {
    /// Library containing only the identity machine `id`.
    pub fn with_identity() -> IsometryLibrary {
        let mut lib = IsometryLibrary {
            machines: BTreeMap::new(),
            inverses: BTreeMap::new(),
        };
        lib.insert(Transducer::identity()).unwrap();
        lib
    }

    /// Registers a machine under its own name. Fails unless it acts as
    /// an isometry.
    pub fn insert(&mut self, m: Transducer) -> Result<(), DilatationError> {
        if !m.is_isometry() {
            return Err(DilatationError::NotIsometry(m.name().to_string()));
        }
        let inv = m.invert().expect("isometries invert");
        self.inverses.insert(m.name().to_string(), inv);
        self.machines.insert(m.name().to_string(), m);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Transducer> {
        self.machines.get(name)
    }

    pub fn get_inverse(&self, name: &str) -> Option<&Transducer> {
        self.inverses.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.machines.keys().map(|s| s.as_str())
    }
}

/// A total map from length-`window` words to isometry names. The key
/// is read off the base point at the level being looked up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WTable {
    window: usize,
    entries: BTreeMap<FiniteWord, String>,
}

impl WTable {
    pub fn new(window: usize, entries: BTreeMap<FiniteWord, String>) -> Result<WTable, DilatationError> {
        if entries.len() != 1usize << window {
            return Err(DilatationError::BadTable(format!(
                "window {window} needs {} rows, found {}",
                1usize << window,
                entries.len()
            )));
        }
        for k in entries.keys() {
            if k.len() != window {
                return Err(DilatationError::BadTable(format!(
                    "key {k} does not have window length {window}"
                )));
            }
        }
        Ok(WTable { window, entries })
    }

    /// The table that names `iso` on every key.
    pub fn constant(window: usize, iso: &str) -> WTable {
        let entries = crate::words::finite_words(window)
            .into_iter()
            .map(|k| (k, iso.to_string()))
            .collect();
        WTable { window, entries }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn entries(&self) -> &BTreeMap<FiniteWord, String> {
        &self.entries
    }

    pub fn lookup(&self, key: &FiniteWord) -> &str {
        &self.entries[key]
    }

    /// Same table re-keyed on a longer window: a longer key maps to
    /// the value of its prefix.
    pub fn widen(&self, window: usize) -> WTable {
        assert!(window >= self.window);
        let entries = crate::words::finite_words(window)
            .into_iter()
            .map(|k| {
                let v = self
                    .entries
                    .get(&FiniteWord::from_letters(k.letters()[..self.window].to_vec()))
                    .unwrap()
                    .clone();
                (k, v)
            })
            .collect();
        WTable { window, entries }
    }
}

/// The isometry assignment of a structure: either one table reused at
/// every level, or per-level tables with a tail table for all deeper
/// levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WFunction {
    SelfSimilar(WTable),
    Leveled { levels: Vec<WTable>, tail: WTable },
}

impl WFunction {
    /// The table used at level `k` (1-indexed).
    pub fn table_at(&self, k: usize) -> &WTable {
        assert!(k >= 1);
        match self {
            WFunction::SelfSimilar(t) => t,
            WFunction::Leveled { levels, tail } => levels.get(k - 1).unwrap_or(tail),
        }
    }

    pub fn max_window(&self) -> usize {
        match self {
            WFunction::SelfSimilar(t) => t.window,
            WFunction::Leveled { levels, tail } => levels
                .iter()
                .map(|t| t.window)
                .max()
                .unwrap_or(0)
                .max(tail.window),
        }
    }

    /// Number of explicitly listed levels (0 for self-similar).
    pub fn level_count(&self) -> usize {
        match self {
            WFunction::SelfSimilar(_) => 0,
            WFunction::Leveled { levels, .. } => levels.len(),
        }
    }

    fn iso_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        match self {
            WFunction::SelfSimilar(t) => out.extend(t.entries.values().map(|s| s.as_str())),
            WFunction::Leveled { levels, tail } => {
                for t in levels {
                    out.extend(t.entries.values().map(|s| s.as_str()));
                }
                out.extend(tail.entries.values().map(|s| s.as_str()));
            }
        }
        out
    }
}

/// Deliberate defects for testing the checkers. Hidden from the public
/// surface; every variant must be caught by at least one axiom check.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Emit the base's next letter instead of its negation.
    DropNegation,
    /// Look up the isometry by iteration count instead of split level.
    LevelShift,
    /// Apply the forward isometry where the inverse is required.
    NoInvert,
}

#[derive(Debug, Clone)]
pub struct DilatationStructure {
    name: String,
    wfun: WFunction,
    library: IsometryLibrary,
    mutation: Option<Mutation>,
}

fn apply(m: &Transducer, w: &OmegaWord) -> OmegaWord {
    match m.eval(w) {
        EvalOutput::Word(out) => out,
        EvalOutput::Finite(_) => unreachable!("isometries emit infinite output"),
    }
}

impl DilatationStructure {
    /// Validates that every table is total and every named isometry
    /// exists in the library.
    pub fn new(
        name: &str,
        wfun: WFunction,
        library: IsometryLibrary,
    ) -> Result<DilatationStructure, DilatationError> {
        for iso in wfun.iso_names() {
            if library.get(iso).is_none() {
                return Err(DilatationError::UnknownIsometry(iso.to_string()));
            }
        }
        Ok(DilatationStructure {
            name: name.to_string(),
            wfun,
            library,
            mutation: None,
        })
    }

    #[doc(hidden)]
    pub fn with_mutation(mut self, m: Mutation) -> DilatationStructure {
        self.mutation = Some(m);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn wfun(&self) -> &WFunction {
        &self.wfun
    }

    pub fn library(&self) -> &IsometryLibrary {
        &self.library
    }

    /// Name of the isometry attached to `base` at level `k`.
    pub fn iso_name_at(&self, base: &OmegaWord, k: usize) -> &str {
        let t = self.wfun.table_at(k);
        t.lookup(&base.segment(k, t.window))
    }

    fn iso_at(&self, base: &OmegaWord, k: usize) -> &Transducer {
        self.library.get(self.iso_name_at(base, k)).unwrap()
    }

    fn iso_inverse_at(&self, base: &OmegaWord, k: usize) -> &Transducer {
        self.library.get_inverse(self.iso_name_at(base, k)).unwrap()
    }

    /// One dilatation step of coefficient 1/2 toward `base`. `step` is
    /// the iteration index inside `dilate`, used only by the
    /// level-shift defect.
    fn dilate2_at(&self, base: &OmegaWord, y: &OmegaWord, step: usize) -> OmegaWord {
        let Some(fd) = base.first_difference(y) else {
            return base.clone();
        };
        let q = base.prefix(fd - 1);
        let alpha = base.letter_at(fd);
        let x1 = base.letter_at(fd + 1);
        let tail = y.shift(fd);
        let level = match self.mutation {
            Some(Mutation::LevelShift) => step,
            _ => fd,
        };
        let twisted = apply(self.iso_at(base, level), &tail);
        let emitted = match self.mutation {
            Some(Mutation::DropNegation) => x1,
            _ => x1.flip(),
        };
        let mut head = q;
        head.push(alpha);
        head.push(emitted);
        concat(&head, &twisted)
    }

    /// Dilatation of coefficient 1/2 based at `base`.
    pub fn dilate2(&self, base: &OmegaWord, y: &OmegaWord) -> OmegaWord {
        self.dilate2_at(base, y, 1)
    }

    /// Dilatation of coefficient `2^{-p}`: `p`-fold composition of the
    /// half-step at the same base.
    pub fn dilate(&self, base: &OmegaWord, p: usize, y: &OmegaWord) -> OmegaWord {
        let mut z = y.clone();
        for j in 1..=p {
            z = self.dilate2_at(base, &z, j);
        }
        z
    }

    /// One inverse step.
    fn undilate2(&self, base: &OmegaWord, z: &OmegaWord) -> OmegaWord {
        let Some(fd) = base.first_difference(z) else {
            return base.clone();
        };
        // The forward step agrees with the base one letter further than
        // its input did, so the split is at fd >= 2 on any image point.
        let qprime_len = fd - 1;
        let q = base.prefix(qprime_len - 1);
        let alpha = base.letter_at(qprime_len);
        let tail = z.shift(qprime_len + 1);
        let machine = match self.mutation {
            Some(Mutation::NoInvert) => self.iso_at(base, qprime_len),
            _ => self.iso_inverse_at(base, qprime_len),
        };
        let untwisted = apply(machine, &tail);
        let mut head = q;
        head.push(alpha.flip());
        concat(&head, &untwisted)
    }

    /// Inverse of [`dilate`](Self::dilate): expands by `2^p` around
    /// `base`. The argument must lie in the image cylinder, i.e. share
    /// the first `p` letters with the base.
    pub fn undilate(
        &self,
        base: &OmegaWord,
        p: usize,
        z: &OmegaWord,
    ) -> Result<OmegaWord, DilatationError> {
        if z.prefix(p) != base.prefix(p) {
            return Err(DilatationError::OutOfDomain {
                expected: base.prefix(p),
                found: z.prefix(p),
            });
        }
        let mut y = z.clone();
        for _ in 0..p {
            y = self.undilate2(base, &y);
        }
        Ok(y)
    }

    /// Approximate difference at scale `2^{-p}`:
    /// contract both points toward `x`, then read the displacement of
    /// the second from the first.
    pub fn delta_op(
        &self,
        x: &OmegaWord,
        p: usize,
        u: &OmegaWord,
        v: &OmegaWord,
    ) -> Result<OmegaWord, DilatationError> {
        let du = self.dilate(x, p, u);
        let dv = self.dilate(x, p, v);
        self.undilate(&du, p, &dv)
    }

    /// Approximate sum at scale `2^{-p}`.
    pub fn sigma_op(
        &self,
        x: &OmegaWord,
        p: usize,
        u: &OmegaWord,
        v: &OmegaWord,
    ) -> Result<OmegaWord, DilatationError> {
        let du = self.dilate(x, p, u);
        let inner = self.dilate(&du, p, v);
        self.undilate(x, p, &inner)
    }

    /// Approximate inverse at scale `2^{-p}`.
    pub fn inv_op(
        &self,
        x: &OmegaWord,
        p: usize,
        u: &OmegaWord,
    ) -> Result<OmegaWord, DilatationError> {
        let du = self.dilate(x, p, u);
        self.undilate(&du, p, x)
    }

    /// Restriction to one subtree. In this window-bounded class the
    /// result does not depend on which child is chosen: the first base
    /// letter never reaches any window at level two or deeper.
    pub fn restrict(&self, alpha: Letter) -> DilatationStructure {
        let wfun = match &self.wfun {
            WFunction::SelfSimilar(t) => WFunction::SelfSimilar(t.clone()),
            WFunction::Leveled { levels, tail } => {
                let rest: Vec<WTable> = levels.iter().skip(1).cloned().collect();
                if rest.is_empty() {
                    WFunction::SelfSimilar(tail.clone())
                } else {
                    WFunction::Leveled {
                        levels: rest,
                        tail: tail.clone(),
                    }
                }
            }
        };
        DilatationStructure {
            name: format!("{}|{}", self.name, alpha),
            wfun,
            library: self.library.clone(),
            mutation: self.mutation,
        }
    }
}

/// Pointwise union of two tables at the wider window size. Both tables
/// are total, so they can only genuinely merge where they agree; on
/// conflicting keys the first operand wins.
fn merge_tables(a: &WTable, b: &WTable) -> WTable {
    a.widen(a.window.max(b.window))
}

/// Whether two tables name the same isometry on every (widened) key.
pub fn tables_agree(a: &WTable, b: &WTable) -> bool {
    let window = a.window.max(b.window);
    a.widen(window).entries == b.widen(window).entries
}

/// Assembles a structure whose level-one behaviour is given explicitly
/// and whose deeper levels come from the two operands, shifted down by
/// one. When the operands disagree at some level the first one wins.
pub fn combine(
    d0: &DilatationStructure,
    d1: &DilatationStructure,
    level1: Option<WTable>,
) -> Result<DilatationStructure, DilatationError> {
    let mut library = d0.library.clone();
    for name in d1.library.names() {
        if library.get(name).is_none() {
            library.insert(d1.library.get(name).unwrap().clone())?;
        }
    }
    let first = level1.unwrap_or_else(|| WTable::constant(1, "id"));
    let deep = d0.wfun.level_count().max(d1.wfun.level_count());
    let mut levels = vec![first];
    for k in 1..=deep {
        levels.push(merge_tables(d0.wfun.table_at(k), d1.wfun.table_at(k)));
    }
    let tail = merge_tables(
        d0.wfun.table_at(deep + 1),
        d1.wfun.table_at(deep + 1),
    );
    DilatationStructure::new(
        &format!("({}*{})", d0.name, d1.name),
        WFunction::Leveled { levels, tail },
        library,
    )
}

/// A first-order operation whose scale limit is of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Delta,
    Sigma,
    Inv,
}

impl Operator {
    pub fn value(
        self,
        d: &DilatationStructure,
        x: &OmegaWord,
        p: usize,
        u: &OmegaWord,
        v: Option<&OmegaWord>,
    ) -> Result<OmegaWord, DilatationError> {
        match self {
            Operator::Delta => d.delta_op(x, p, u, v.expect("delta needs v")),
            Operator::Sigma => d.sigma_op(x, p, u, v.expect("sigma needs v")),
            Operator::Inv => d.inv_op(x, p, u),
        }
    }
}

/// The values of an operator for `p = 1 .. p_max`, with the least scale
/// from which all later values agree to `depth` letters. A stable
/// point must be witnessed by at least one later value, so `p_max`
/// itself never qualifies on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationReport {
    pub values: Vec<OmegaWord>,
    pub stable_from: Option<usize>,
    pub limit_candidate: OmegaWord,
    pub depth: usize,
}

pub fn stabilize(
    d: &DilatationStructure,
    op: Operator,
    x: &OmegaWord,
    u: &OmegaWord,
    v: Option<&OmegaWord>,
    p_max: usize,
    depth: usize,
) -> Result<StabilizationReport, DilatationError> {
    assert!(p_max >= 1);
    let mut values = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        values.push(op.value(d, x, p, u, v)?);
    }
    let last_prefix = values[p_max - 1].prefix(depth);
    let stable_from = (1..p_max)
        .find(|&p| values[p - 1..].iter().all(|w| w.prefix(depth) == last_prefix));
    Ok(StabilizationReport {
        limit_candidate: values[p_max - 1].clone(),
        values,
        stable_from,
        depth,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::automata::MachineKind;
    use crate::words::cylinder_reps;
    use proptest::prelude::*;

    fn w(s: &str) -> OmegaWord {
        s.parse().unwrap()
    }

    fn fin(s: &str) -> FiniteWord {
        FiniteWord::from_bits(s).unwrap()
    }

    pub(crate) fn flip_machine() -> Transducer {
        Transducer::new(
            "flip",
            MachineKind::Mealy,
            "q",
            &[
                ("q".into(), Letter::Zero, "q".into(), fin("1")),
                ("q".into(), Letter::One, "q".into(), fin("0")),
            ],
        )
        .unwrap()
    }

    pub(crate) fn odo_machine() -> Transducer {
        Transducer::new(
            "odo",
            MachineKind::Mealy,
            "c",
            &[
                ("c".into(), Letter::One, "c".into(), fin("0")),
                ("c".into(), Letter::Zero, "e".into(), fin("1")),
                ("e".into(), Letter::Zero, "e".into(), fin("0")),
                ("e".into(), Letter::One, "e".into(), fin("1")),
            ],
        )
        .unwrap()
    }

    pub(crate) fn full_library() -> IsometryLibrary {
        let mut lib = IsometryLibrary::with_identity();
        lib.insert(flip_machine()).unwrap();
        lib.insert(odo_machine()).unwrap();
        lib
    }

    fn table1(z: &str, o: &str) -> WTable {
        WTable::new(
            1,
            [(fin("0"), z.to_string()), (fin("1"), o.to_string())].into(),
        )
        .unwrap()
    }

    fn table2(rows: [(&str, &str); 4]) -> WTable {
        WTable::new(
            2,
            rows.iter()
                .map(|(k, v)| (fin(k), v.to_string()))
                .collect(),
        )
        .unwrap()
    }

    /// Identity everywhere.
    pub(crate) fn d_id() -> DilatationStructure {
        DilatationStructure::new(
            "Did",
            WFunction::SelfSimilar(WTable::constant(1, "id")),
            full_library(),
        )
        .unwrap()
    }

    /// Window one, mixes id and flip.
    pub(crate) fn d_mix1() -> DilatationStructure {
        DilatationStructure::new(
            "Dmix1",
            WFunction::SelfSimilar(table1("id", "flip")),
            full_library(),
        )
        .unwrap()
    }

    /// Window two, includes a stateful isometry.
    pub(crate) fn d_mix2() -> DilatationStructure {
        DilatationStructure::new(
            "Dmix2",
            WFunction::SelfSimilar(table2([("00", "id"), ("01", "flip"), ("10", "odo"), ("11", "flip")])),
            full_library(),
        )
        .unwrap()
    }

    /// Level one differs from the tail.
    pub(crate) fn d_lev() -> DilatationStructure {
        DilatationStructure::new(
            "Dlev",
            WFunction::Leveled {
                levels: vec![table1("flip", "flip")],
                tail: WTable::constant(1, "id"),
            },
            full_library(),
        )
        .unwrap()
    }

    #[test]
    fn dilate2_frozen_examples() {
        // base (0), point (1): split at level 1, next base letter 0.
        assert_eq!(d_id().dilate2(&w("(0)"), &w("(1)")), w("01(1)"));
        // Same split but the level-one isometry is flip.
        assert_eq!(d_lev().dilate2(&w("(0)"), &w("(1)")), w("01(0)"));
        // mix1 keys on the base letter, which is 0 here, naming id.
        assert_eq!(d_mix1().dilate2(&w("(0)"), &w("(1)")), w("01(1)"));
        assert_eq!(d_mix1().dilate2(&w("(1)"), &w("(0)")), w("10(1)"));
        // Fixed point of the base itself.
        assert_eq!(d_mix1().dilate2(&w("(0)"), &w("(0)")), w("(0)"));
    }

    #[test]
    fn dilate_iterates_the_half_step() {
        let d = d_mix1();
        let x = w("1(0)");
        let y = w("(01)");
        assert_eq!(d.dilate(&x, 0, &y), y);
        assert_eq!(d.dilate(&x, 1, &y), d.dilate2(&x, &y));
        assert_eq!(d.dilate(&x, 3, &y), d.dilate2(&x, &d.dilate2(&x, &d.dilate2(&x, &y))));
    }

    #[test]
    fn undilate_inverts_dilate() {
        for d in [d_id(), d_mix1(), d_mix2(), d_lev()] {
            for x in cylinder_reps(3) {
                for y in cylinder_reps(3) {
                    for p in 0..=3 {
                        let z = d.dilate(&x, p, &y);
                        assert_eq!(d.undilate(&x, p, &z), Ok(y.clone()), "{} {x} {y} p={p}", d.name());
                    }
                }
            }
        }
    }

    #[test]
    fn undilate_rejects_points_outside_the_cylinder() {
        let d = d_id();
        let err = d.undilate(&w("(0)"), 2, &w("01(0)"));
        assert_eq!(
            err,
            Err(DilatationError::OutOfDomain {
                expected: fin("00"),
                found: fin("01"),
            })
        );
    }

    #[test]
    fn operator_frozen_examples() {
        let d = d_id();
        let x = w("(0)");
        let u = w("1(0)");
        let v = w("(1)");
        assert_eq!(d.delta_op(&x, 1, &u, &v), Ok(w("00(1)")));
        assert_eq!(d.delta_op(&x, 2, &u, &v), Ok(w("0(1)")));
        assert_eq!(d.delta_op(&x, 3, &u, &v), Ok(w("0(1)")));
        assert_eq!(d.sigma_op(&x, 1, &u, &x), Ok(w("11(0)")));
        assert_eq!(d.inv_op(&x, 1, &u), Ok(w("1(0)")));
    }

    #[test]
    fn stabilize_detects_agreement() {
        let d = d_id();
        let rep = stabilize(&d, Operator::Delta, &w("(0)"), &w("1(0)"), Some(&w("(1)")), 3, 8).unwrap();
        assert_eq!(rep.values, vec![w("00(1)"), w("0(1)"), w("0(1)")]);
        assert_eq!(rep.stable_from, Some(2));
        assert_eq!(rep.limit_candidate, w("0(1)"));
    }

    #[test]
    fn stabilize_requires_a_witness() {
        // With only the endpoint agreeing, stability is not claimed.
        let d = d_id();
        let rep = stabilize(&d, Operator::Delta, &w("(0)"), &w("1(0)"), Some(&w("(1)")), 2, 8).unwrap();
        assert_eq!(rep.stable_from, None);
    }

    #[test]
    fn restrict_examples() {
        // Self-similar structures restrict to themselves.
        let d = d_mix1();
        let r = d.restrict(Letter::Zero);
        assert_eq!(r.wfun(), d.wfun());
        // Leveled structures lose their first level.
        let r = d_lev().restrict(Letter::One);
        assert_eq!(r.wfun(), &WFunction::SelfSimilar(WTable::constant(1, "id")));
    }

    #[test]
    fn restrict_matches_subtree_dilations() {
        // Dilating inside a subtree equals dilating with the
        // restriction, after stripping the shared first letter.
        for d in [d_mix1(), d_lev()] {
            for alpha in [Letter::Zero, Letter::One] {
                let r = d.restrict(alpha);
                let a = FiniteWord::from_letters(vec![alpha]);
                for x in cylinder_reps(3) {
                    for y in cylinder_reps(3) {
                        let big = d.dilate2(&concat(&a, &x), &concat(&a, &y));
                        let small = r.dilate2(&x, &y);
                        assert_eq!(big, concat(&a, &small), "{} {alpha} {x} {y}", d.name());
                    }
                }
            }
        }
    }

    #[test]
    fn combine_shifts_levels_down() {
        let c = combine(&d_mix1(), &d_mix1(), None).unwrap();
        // Level one defaults to the identity; deeper levels follow the
        // operands.
        assert_eq!(c.wfun().table_at(1), &WTable::constant(1, "id"));
        assert!(tables_agree(c.wfun().table_at(2), d_mix1().wfun().table_at(1)));
        // Restriction then returns the operand behaviour.
        let r = c.restrict(Letter::Zero);
        for x in cylinder_reps(3) {
            for y in cylinder_reps(3) {
                assert_eq!(r.dilate2(&x, &y), d_mix1().dilate2(&x, &y));
            }
        }
    }

    #[test]
    fn combine_with_explicit_first_level() {
        let t = table1("flip", "flip");
        let c = combine(&d_id(), &d_id(), Some(t.clone())).unwrap();
        assert_eq!(c.wfun().table_at(1), &t);
        assert!(tables_agree(c.wfun().table_at(2), &WTable::constant(1, "id")));
    }

    #[test]
    fn dilate_only_reads_the_window() {
        // Two bases agreeing far enough produce the same dilation head.
        let d = d_mix2();
        let x1 = w("10(0)");
        let x2 = w("10(01)");
        let y = w("0(1)");
        // Split at level 1 for both; window 2 reads positions 1..2.
        let z1 = d.dilate2(&x1, &y);
        let z2 = d.dilate2(&x2, &y);
        assert_eq!(z1.prefix(4), z2.prefix(4));
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
        fn dilate_contracts_exactly(x in arb_omega(), y in arb_omega(), p in 0usize..4) {
            for d in [d_id(), d_mix1(), d_mix2(), d_lev()] {
                let z = d.dilate(&x, p, &y);
                let scale = crate::words::DyadicScale::power(-(p as i32));
                prop_assert_eq!(z.distance(&x), scale * y.distance(&x));
            }
        }

        #[test]
        fn undilate_round_trip(x in arb_omega(), y in arb_omega(), p in 0usize..4) {
            for d in [d_id(), d_mix1(), d_mix2(), d_lev()] {
                let z = d.dilate(&x, p, &y);
                prop_assert_eq!(d.undilate(&x, p, &z), Ok(y.clone()));
            }
        }

        #[test]
        fn delta_fixed_points(x in arb_omega(), u in arb_omega(), p in 1usize..4) {
            for d in [d_id(), d_mix1(), d_mix2(), d_lev()] {
                // delta(x; u, u) is the contraction of u, which tends
                // to x; delta(x; x, v) = v exactly.
                prop_assert_eq!(d.delta_op(&x, p, &u, &u), Ok(d.dilate(&x, p, &u)));
                prop_assert_eq!(d.delta_op(&x, p, &x, &u), Ok(u.clone()));
            }
        }
    }
}
