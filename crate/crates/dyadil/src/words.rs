//! Finite and eventually periodic infinite words over `{0, 1}`, and the
//! ultrametric distance on the tree boundary.
//!
//! An [`OmegaWord`] is kept in canonical form: the period has minimal
//! length and the preperiod is the shortest one for that period, so two
//! values denote the same infinite word iff they are equal.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("period must be nonempty")]
    EmptyPeriod,
    #[error("invalid word literal: {0}")]
    Literal(String),
}

/// One letter of the two-letter alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Zero,
    One,
}

impl Letter {
    /// The overbar involution: `a.flip().flip() == a`.
    pub fn flip(self) -> Letter {
        match self {
            Letter::Zero => Letter::One,
            Letter::One => Letter::Zero,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Letter::Zero => 0,
            Letter::One => 1,
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            '0' => Some(Letter::Zero),
            '1' => Some(Letter::One),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::Zero => '0',
            Letter::One => '1',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A word of finite length, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FiniteWord(Vec<Letter>);

impl FiniteWord {
    pub fn empty() -> FiniteWord {
        FiniteWord(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> FiniteWord {
        FiniteWord(letters)
    }

    /// Parses a bit string such as `"0110"`; the empty string is the
    /// empty word.
    pub fn from_bits(s: &str) -> Result<FiniteWord, WordError> {
        s.chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| WordError::Literal(format!("bad bit {c:?}"))))
            .collect::<Result<Vec<_>, _>>()
            .map(FiniteWord)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FiniteWord(v)
    }
}

impl FromIterator<Letter> for FiniteWord {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        FiniteWord(iter.into_iter().collect())
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.0 {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for FiniteWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FiniteWord::from_bits(s)
    }
}

/// An eventually periodic infinite word, always in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OmegaWord {
    preperiod: FiniteWord,
    period: FiniteWord,
}

fn minimal_root(per: &[Letter]) -> Vec<Letter> {
    let n = per.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && per.chunks(d).all(|c| c == &per[..d]) {
            return per[..d].to_vec();
        }
    }
    unreachable!("nonempty word has a root")
}

impl OmegaWord {
    /// Canonicalizes `(preperiod, period)`: minimal period, then the
    /// shortest preperiod for it. Rejects an empty period.
    pub fn new(preperiod: FiniteWord, period: FiniteWord) -> Result<OmegaWord, WordError> {
        if period.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        let mut pre = preperiod.0;
        let mut per = minimal_root(&period.0);
        // pre a (u a)^w = pre (a u)^w
        while let Some(&last) = pre.last() {
            if last == *per.last().unwrap() {
                pre.pop();
                per.rotate_right(1);
            } else {
                break;
            }
        }
        Ok(OmegaWord {
            preperiod: FiniteWord(pre),
            period: FiniteWord(per),
        })
    }

    /// The all-`a` word `(a)^w`.
    pub fn constant(a: Letter) -> OmegaWord {
        OmegaWord::new(FiniteWord::empty(), FiniteWord(vec![a])).unwrap()
    }

    pub fn preperiod(&self) -> &FiniteWord {
        &self.preperiod
    }

    pub fn period(&self) -> &FiniteWord {
        &self.period
    }

    /// The `i`-th letter of the expansion, 1-indexed.
    ///
    /// Panics if `i == 0`; words are functions on positive naturals.
    pub fn letter_at(&self, i: usize) -> Letter {
        assert!(i >= 1, "letter positions are 1-indexed");
        let i = i - 1;
        let p = self.preperiod.len();
        if i < p {
            self.preperiod.0[i]
        } else {
            self.period.0[(i - p) % self.period.len()]
        }
    }

    /// Infinite iterator over the expansion.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.preperiod
            .0
            .iter()
            .copied()
            .chain(self.period.0.iter().copied().cycle())
    }

    /// The first `k` letters.
    pub fn prefix(&self, k: usize) -> FiniteWord {
        self.letters().take(k).collect()
    }

    /// Letters at positions `k .. k + len - 1`, 1-indexed.
    pub fn segment(&self, k: usize, len: usize) -> FiniteWord {
        (k..k + len).map(|i| self.letter_at(i)).collect()
    }

    /// Drops the first `k` letters.
    pub fn shift(&self, k: usize) -> OmegaWord {
        let p = self.preperiod.len();
        if k <= p {
            OmegaWord::new(FiniteWord(self.preperiod.0[k..].to_vec()), self.period.clone()).unwrap()
        } else {
            let r = (k - p) % self.period.len();
            let mut per = self.period.0.clone();
            per.rotate_left(r);
            OmegaWord::new(FiniteWord::empty(), FiniteWord(per)).unwrap()
        }
    }

    /// Smallest position at which the two expansions differ, or `None`
    /// if they denote the same word. Exact: the search is bounded by
    /// the preperiod lengths plus the lcm of the period lengths.
    pub fn first_difference(&self, other: &OmegaWord) -> Option<usize> {
        let bound = self.preperiod.len().max(other.preperiod.len())
            + lcm(self.period.len(), other.period.len());
        self.letters()
            .zip(other.letters())
            .take(bound)
            .position(|(a, b)| a != b)
            .map(|i| i + 1)
    }

    /// Ultrametric distance: `2^{-(i-1)}` where `i` is the first
    /// differing position, or zero for equal words.
    pub fn distance(&self, other: &OmegaWord) -> DyadicScale {
        match self.first_difference(other) {
            None => DyadicScale::Zero,
            Some(i) => DyadicScale::power(-((i - 1) as i32)),
        }
    }
}

impl fmt::Display for OmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.preperiod, self.period)
    }
}

impl FromStr for OmegaWord {
    type Err = WordError;

    /// Parses the `BITS(BITS)` literal syntax, e.g. `01(10)` or `(10)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let open = s
            .find('(')
            .ok_or_else(|| WordError::Literal(format!("{s:?}: missing '('")))?;
        if !s.ends_with(')') {
            return Err(WordError::Literal(format!("{s:?}: missing trailing ')'")));
        }
        let pre = FiniteWord::from_bits(&s[..open])?;
        let per = FiniteWord::from_bits(&s[open + 1..s.len() - 1])?;
        OmegaWord::new(pre, per)
    }
}

/// Prepends a finite word to an infinite one.
pub fn concat(q: &FiniteWord, w: &OmegaWord) -> OmegaWord {
    OmegaWord::new(q.concat(&w.preperiod), w.period.clone()).unwrap()
}

/// The `2^n` cylinder representatives `q (0)^w` for `q` in `X^n`, in
/// lexicographic order of `q`.
pub fn cylinder_reps(n: usize) -> Vec<OmegaWord> {
    let mut out = Vec::with_capacity(1 << n);
    for bits in 0u64..(1 << n) {
        let q: FiniteWord = (0..n)
            .map(|i| {
                if bits >> (n - 1 - i) & 1 == 0 {
                    Letter::Zero
                } else {
                    Letter::One
                }
            })
            .collect();
        out.push(concat(&q, &OmegaWord::constant(Letter::Zero)));
    }
    out
}

/// All finite words of length exactly `n`, in lexicographic order.
pub fn finite_words(n: usize) -> Vec<FiniteWord> {
    let mut out = Vec::with_capacity(1 << n);
    for bits in 0u64..(1 << n) {
        out.push(
            (0..n)
                .map(|i| {
                    if bits >> (n - 1 - i) & 1 == 0 {
                        Letter::Zero
                    } else {
                        Letter::One
                    }
                })
                .collect(),
        );
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// An exact value `2^e` or zero. Distances use `e <= 0`; elements of the
/// scale group use any integer exponent. Zero is absorbing under
/// multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DyadicScale {
    Zero,
    Power(i32),
}

impl DyadicScale {
    pub fn one() -> DyadicScale {
        DyadicScale::Power(0)
    }

    pub fn power(e: i32) -> DyadicScale {
        DyadicScale::Power(e)
    }

    pub fn is_zero(self) -> bool {
        self == DyadicScale::Zero
    }

    /// Exact quotient `self / other`; `None` when dividing by zero.
    pub fn ratio(self, other: DyadicScale) -> Option<DyadicScale> {
        match (self, other) {
            (_, DyadicScale::Zero) => None,
            (DyadicScale::Zero, _) => Some(DyadicScale::Zero),
            (DyadicScale::Power(a), DyadicScale::Power(b)) => Some(DyadicScale::Power(a - b)),
        }
    }
}

impl std::ops::Mul for DyadicScale {
    type Output = DyadicScale;

    // multiplying powers of two adds exponents
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: DyadicScale) -> DyadicScale {
        match (self, rhs) {
            (DyadicScale::Zero, _) | (_, DyadicScale::Zero) => DyadicScale::Zero,
            (DyadicScale::Power(a), DyadicScale::Power(b)) => DyadicScale::Power(a + b),
        }
    }
}

impl PartialOrd for DyadicScale {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicScale {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (DyadicScale::Zero, DyadicScale::Zero) => Ordering::Equal,
            (DyadicScale::Zero, _) => Ordering::Less,
            (_, DyadicScale::Zero) => Ordering::Greater,
            (DyadicScale::Power(a), DyadicScale::Power(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for DyadicScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DyadicScale::Zero => write!(f, "0"),
            DyadicScale::Power(0) => write!(f, "1"),
            DyadicScale::Power(e) => write!(f, "2^{e}"),
        }
    }
}
