//! Infinite binary words: periodic patterns, rational mechanical words and
//! Sturmian characteristic words given by continued-fraction directives.
//!
//! Sturmian words never touch floating point. A directive `[d1, d2, ..., dK]`
//! (all `>= 1`) denotes the slope `α = [0; d1 + 1, d2, ..., dK, ...]` and the
//! characteristic word is produced by the standard-word recursion
//! `s(-1) = 1`, `s(0) = 0`, `s(k) = s(k-1)^dk s(k-2)`. Every `s(k)` with `k >= 0`
//! is a prefix of the infinite word, so a directive of length `K` determines
//! exactly `|s(K)|` symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finitely described infinite binary word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WordSpec {
    /// `pattern` repeated forever.
    Periodic {
        #[serde(with = "bitstring")]
        pattern: Vec<u8>,
    },
    /// Characteristic word of slope `[0; d1 + 1, d2, ...]`.
    Sturmian { directive: Vec<u32> },
    /// Mechanical word `w_k = floor((k+1)p/q) - floor(kp/q)`, `k >= 1`, of slope `p/q`.
    Mechanical { p: u64, q: u64 },
}

/// A finite factor together with the (1-based) position it was taken from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub bits: Vec<u8>,
    pub start_index: usize,
}

impl Factor {
    pub fn height(&self) -> usize {
        height(&self.bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Slope of a word: exact for periodic words, a convergent bracket otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slope {
    Exact(Rational),
    Interval { lo: Rational, hi: Rational },
}

impl Slope {
    pub fn lo(&self) -> &Rational {
        match self {
            Slope::Exact(r) => r,
            Slope::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            Slope::Exact(r) => r,
            Slope::Interval { hi, .. } => hi,
        }
    }

    pub fn width(&self) -> Rational {
        Rational::from(self.hi() - self.lo())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Slope::Exact(_))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo() <= x && x <= self.hi()
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Exact(r) => write!(f, "{r}"),
            Slope::Interval { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

/// Number of ones in a bit string.
pub fn height(bits: &[u8]) -> usize {
    bits.iter().filter(|&&b| b == 1).count()
}

impl WordSpec {
    pub fn periodic(pattern: &str) -> Result<Self> {
        let spec = WordSpec::Periodic {
            pattern: bitstring::parse(pattern)?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sturmian(directive: Vec<u32>) -> Result<Self> {
        let spec = WordSpec::Sturmian { directive };
        spec.validate()?;
        Ok(spec)
    }

    pub fn mechanical(p: u64, q: u64) -> Result<Self> {
        let spec = WordSpec::Mechanical { p, q };
        spec.validate()?;
        Ok(spec)
    }

    /// The Fibonacci word `0100101001001...` with `quotients` ones in its directive.
    pub fn fibonacci(quotients: usize) -> Self {
        WordSpec::Sturmian {
            directive: vec![1; quotients],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WordSpec::Periodic { pattern } => {
                if pattern.is_empty() {
                    return Err(Error::InvalidSpec("empty periodic pattern".into()));
                }
                if pattern.iter().any(|&b| b > 1) {
                    return Err(Error::InvalidSpec("pattern symbols must be 0 or 1".into()));
                }
            }
            WordSpec::Sturmian { directive } => {
                if directive.is_empty() {
                    return Err(Error::InvalidSpec("empty Sturmian directive".into()));
                }
                if directive.contains(&0) {
                    return Err(Error::InvalidSpec(
                        "directive quotients must be positive".into(),
                    ));
                }
            }
            WordSpec::Mechanical { p, q } => {
                if *q == 0 || p > q {
                    return Err(Error::InvalidSpec(format!(
                        "mechanical slope {p}/{q} must satisfy 0 <= p <= q, q >= 1"
                    )));
                }
                if gcd(*p, *q) != 1 {
                    return Err(Error::InvalidSpec(format!(
                        "mechanical slope {p}/{q} is not reduced"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Minimal period for periodic and mechanical words; `None` for Sturmian words.
    pub fn period(&self) -> Option<usize> {
        match self {
            WordSpec::Periodic { pattern } => Some(minimal_cyclic_period(pattern)),
            WordSpec::Mechanical { q, .. } => Some(*q as usize),
            WordSpec::Sturmian { .. } => None,
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.period().is_some()
    }

    /// Number of symbols this description determines (`None` when unbounded).
    pub fn available_len(&self) -> Option<usize> {
        match self {
            WordSpec::Sturmian { directive } => {
                let (mut prev, mut cur) = (1usize, 1usize);
                for &d in directive {
                    let next = (d as usize)
                        .saturating_mul(cur)
                        .saturating_add(prev);
                    prev = cur;
                    cur = next;
                }
                Some(cur)
            }
            _ => None,
        }
    }

    /// `w_1 ... w_len`.
    pub fn prefix(&self, len: usize) -> Result<Vec<u8>> {
        self.validate()?;
        if len == 0 {
            return Err(Error::InvalidSpec("prefix length must be positive".into()));
        }
        match self {
            WordSpec::Periodic { pattern } => {
                Ok(pattern.iter().copied().cycle().take(len).collect())
            }
            WordSpec::Mechanical { p, q } => {
                let (p, q) = (*p as u128, *q as u128);
                Ok((1..=len as u128)
                    .map(|k| ((k + 1) * p / q - k * p / q) as u8)
                    .collect())
            }
            WordSpec::Sturmian { directive } => {
                let available = self.available_len().unwrap_or(0);
                if len > available {
                    return Err(Error::DirectiveExhausted {
                        needed: len,
                        available,
                    });
                }
                let mut older = vec![1u8];
                let mut old = vec![0u8];
                for &d in directive {
                    if old.len() >= len {
                        break;
                    }
                    let mut next = Vec::with_capacity(old.len() * d as usize + older.len());
                    for _ in 0..d {
                        next.extend_from_slice(&old);
                    }
                    next.extend_from_slice(&older);
                    older = std::mem::replace(&mut old, next);
                }
                old.truncate(len);
                Ok(old)
            }
        }
    }

    /// Distinct factors of length `n`, each with the position of its first
    /// occurrence, in order of first occurrence.
    ///
    /// The scanned prefix starts at `(n+1)^2 + n` and doubles until the factor
    /// count is unchanged across two consecutive doublings.
    pub fn factors(&self, n: usize) -> Result<Vec<Factor>> {
        if n == 0 {
            return Err(Error::InvalidSpec("factor length must be positive".into()));
        }
        let mut len = (n + 1) * (n + 1) + n;
        loop {
            let counts = [len, 2 * len, 4 * len]
                .iter()
                .map(|&l| self.prefix(l).map(|w| distinct_factors(&w, n).len()))
                .collect::<Result<Vec<_>>>()?;
            if counts[0] == counts[1] && counts[1] == counts[2] {
                return Ok(distinct_factors(&self.prefix(len)?, n));
            }
            len *= 2;
        }
    }

    /// Factor complexity `Comp_w(n)`.
    pub fn complexity(&self, n: usize) -> Result<usize> {
        Ok(self.factors(n)?.len())
    }

    pub fn slope(&self) -> Slope {
        match self {
            WordSpec::Periodic { pattern } => Slope::Exact(Rational::from((
                height(pattern) as u64,
                pattern.len() as u64,
            ))),
            WordSpec::Mechanical { p, q } => Slope::Exact(Rational::from((*p, *q))),
            WordSpec::Sturmian { directive } => {
                let (prev, last) = convergents(directive);
                if prev <= last {
                    Slope::Interval { lo: prev, hi: last }
                } else {
                    Slope::Interval { lo: last, hi: prev }
                }
            }
        }
    }

    /// `max |h(x) - h(y)|` over equal-length factor pairs of length `1..=n_max`.
    pub fn balance_constant(&self, n_max: usize) -> Result<usize> {
        let mut best = 0;
        for n in 1..=n_max {
            let heights: Vec<usize> = self.factors(n)?.iter().map(Factor::height).collect();
            let spread = heights.iter().max().unwrap() - heights.iter().min().unwrap();
            best = best.max(spread);
        }
        Ok(best)
    }

    /// `max |h(u)/n - π(w)|` over factors `u` of length `n`. For bracketed
    /// slopes the supremum over the bracket is returned, which bounds the true
    /// deviation from above.
    pub fn factor_height_deviation(&self, n: usize) -> Result<Rational> {
        let slope = self.slope();
        let mut best = Rational::new();
        for f in self.factors(n)? {
            let r = Rational::from((f.height() as u64, n as u64));
            for end in [slope.lo(), slope.hi()] {
                let dev = Rational::from(&r - end).abs();
                if dev > best {
                    best = dev;
                }
            }
        }
        Ok(best)
    }
}

/// Convergents `p_{K-1}/q_{K-1}` and `p_K/q_K` of `[0; d1 + 1, d2, ..., dK]`.
fn convergents(directive: &[u32]) -> (Rational, Rational) {
    // (p, q) of s(-1) = "1" and s(0) = "0".
    let (mut p_older, mut q_older) = (Integer::from(1), Integer::from(1));
    let (mut p_old, mut q_old) = (Integer::from(0), Integer::from(1));
    for &d in directive {
        let p_new = Integer::from(&p_old * d) + &p_older;
        let q_new = Integer::from(&q_old * d) + &q_older;
        p_older = std::mem::replace(&mut p_old, p_new);
        q_older = std::mem::replace(&mut q_old, q_new);
    }
    (
        Rational::from((p_older, q_older)),
        Rational::from((p_old, q_old)),
    )
}

fn distinct_factors(word: &[u8], n: usize) -> Vec<Factor> {
    if word.len() < n {
        return Vec::new();
    }
    let mut seen: BTreeMap<&[u8], usize> = BTreeMap::new();
    let mut out = Vec::new();
    for (i, window) in word.windows(n).enumerate() {
        if !seen.contains_key(window) {
            seen.insert(window, i + 1);
            out.push(Factor {
                bits: window.to_vec(),
                start_index: i + 1,
            });
        }
    }
    out
}

fn minimal_cyclic_period(pattern: &[u8]) -> usize {
    let len = pattern.len();
    (1..=len)
        .find(|&p| len % p == 0 && (0..len).all(|i| pattern[i] == pattern[i % p]))
        .unwrap_or(len)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FromStr for WordSpec {
    type Err = Error;

    /// Shorthand used on the command line: `periodic:0110`, `sturmian:1,1,1`,
    /// `mechanical:2/5`, or a JSON object.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let spec: WordSpec =
                serde_json::from_str(s).map_err(|e| Error::InvalidSpec(e.to_string()))?;
            spec.validate()?;
            return Ok(spec);
        }
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("expected kind:body, got {s:?}")))?;
        match kind {
            "periodic" => WordSpec::periodic(body),
            "sturmian" => {
                let directive = body
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u32>()
                            .map_err(|e| Error::InvalidSpec(format!("bad quotient {t:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                WordSpec::sturmian(directive)
            }
            "mechanical" => {
                let (p, q) = body
                    .split_once('/')
                    .ok_or_else(|| Error::InvalidSpec(format!("expected p/q, got {body:?}")))?;
                let parse = |t: &str| {
                    t.trim()
                        .parse::<u64>()
                        .map_err(|e| Error::InvalidSpec(format!("bad integer {t:?}: {e}")))
                };
                WordSpec::mechanical(parse(p)?, parse(q)?)
            }
            other => Err(Error::InvalidSpec(format!("unknown word kind {other:?}"))),
        }
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordSpec::Periodic { pattern } => {
                write!(f, "periodic:{}", bitstring::render(pattern))
            }
            WordSpec::Sturmian { directive } => {
                let parts: Vec<String> = directive.iter().map(|d| d.to_string()).collect();
                write!(f, "sturmian:{}", parts.join(","))
            }
            WordSpec::Mechanical { p, q } => write!(f, "mechanical:{p}/{q}"),
        }
    }
}

/// Bit vectors serialized as `"0110"` strings.
pub mod bitstring {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::error::{Error, Result};

    pub fn parse(s: &str) -> Result<Vec<u8>> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidSpec(format!("symbol {other:?} is not a bit"))),
            })
            .collect()
    }

    pub fn render(bits: &[u8]) -> String {
        bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
    }

    pub fn serialize<S: Serializer>(bits: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render(bits))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}
