//! Codimensions `c_n`, cocharacter multiplicities `m_λ` and colengths `l_n`.
//!
//! `P_n(A)` is identified with the row space of the evaluation matrix: rows
//! are basis monomials, columns are pairs (substitution, output basis
//! element) and entries are 0/1. The rank is computed over several prime
//! fields and, for small matrices, confirmed by exact elimination over `Q`.
//!
//! Multiplicities come from traces of `S_n` on the row space. A basis `B` of
//! rows and a set `J` of pivot columns with `M[B,J]` invertible are found
//! mod `p`; the coordinates of a row `v` in `B` are `v_J M[B,J]^{-1}`. Since
//! `|tr σ| <= c_n`, a trace that lifts to the same integer for every prime of
//! full rank is exact.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraModel, AlgebraParams, BasisElement, ModelDescriptor};
use crate::error::{Error, Result};
use crate::linalg::{self, ModEchelon, DEFAULT_PRIMES};
use crate::multilinear::{
    evaluate, monomial_basis, relevant_substitutions, BasisShape, Monomial, Permutation,
    FULL_CAP, LEFT_NORMED_CAP,
};
use crate::repr::{character_value, Partition};
use crate::words::Slope;

/// Largest degree for cocharacters of non-unital models.
pub const COCHARACTER_CAP: usize = 6;
/// Largest degree for cocharacters of unital models.
pub const UNITAL_COCHARACTER_CAP: usize = 5;
/// Largest `dim P_n` confirmed by exact elimination.
pub const EXACT_THRESHOLD: usize = 2000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Left-normed for non-unital models, full for unital ones.
    #[default]
    Auto,
    Full,
    LeftNormed,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Mode::Auto),
            "full" => Ok(Mode::Full),
            "left-normed" | "left_normed" => Ok(Mode::LeftNormed),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Auto => "auto",
            Mode::Full => "full",
            Mode::LeftNormed => "left-normed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimConfig {
    pub mode: Mode,
    pub primes: Vec<u64>,
    pub exact_threshold: usize,
}

impl Default for CodimConfig {
    fn default() -> Self {
        CodimConfig {
            mode: Mode::Auto,
            primes: DEFAULT_PRIMES.to_vec(),
            exact_threshold: EXACT_THRESHOLD,
        }
    }
}

impl CodimConfig {
    pub fn with_mode(mode: Mode) -> Self {
        CodimConfig {
            mode,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.primes.len() < 2 {
            return Err(Error::InvalidParams("at least two primes are required".into()));
        }
        for (i, &p) in self.primes.iter().enumerate() {
            if !linalg::is_prime(p) || p >= 1 << 63 {
                return Err(Error::InvalidParams(format!("{p} is not a prime below 2^63")));
            }
            if self.primes[..i].contains(&p) {
                return Err(Error::InvalidParams(format!("prime {p} listed twice")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub primes: Vec<u64>,
    pub ranks: Vec<usize>,
    /// Rank over `Q`, when the matrix was small enough.
    pub exact: Option<usize>,
}

impl RankCertificate {
    pub fn primes_agree(&self) -> bool {
        self.ranks.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicity {
    pub lambda: Partition,
    pub m: u64,
    pub dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimReport {
    pub n: usize,
    pub c_n: u64,
    /// The mode actually used (never `Auto`).
    pub mode: Mode,
    pub unital: bool,
    /// Number of basis monomials (rows).
    pub rows: usize,
    pub certificate: RankCertificate,
    /// Nonzero multiplicities, in reverse lexicographic order of `λ`.
    pub multiplicities: Option<Vec<Multiplicity>>,
    pub l_n: Option<u64>,
}

impl CodimReport {
    pub fn multiplicity(&self, lambda: &Partition) -> Option<u64> {
        let ms = self.multiplicities.as_ref()?;
        Some(ms.iter().find(|x| &x.lambda == lambda).map_or(0, |x| x.m))
    }

    /// `max d_λ` over `λ ⊢ n` with `m_λ ≠ 0`.
    pub fn max_dim(&self) -> Option<u64> {
        Some(self.multiplicities.as_ref()?.iter().map(|x| x.dim).max().unwrap_or(0))
    }

    /// `Σ m_λ d_λ = c_n` and `c_n <= l_n · max d_λ`.
    pub fn check_sum_rules(&self) -> Option<bool> {
        let ms = self.multiplicities.as_ref()?;
        let sum: u64 = ms.iter().map(|x| x.m * x.dim).sum();
        let l_n: u64 = ms.iter().map(|x| x.m).sum();
        Some(sum == self.c_n && Some(l_n) == self.l_n && self.c_n <= l_n * self.max_dim()?)
    }
}

/// The 0/1 evaluation matrix, rows as sorted column supports.
#[derive(Clone, Debug)]
pub struct EvaluationMatrix {
    pub monomials: Vec<Monomial>,
    pub rows: Vec<Vec<u32>>,
    pub ncols: usize,
}

impl EvaluationMatrix {
    pub fn build(model: &AlgebraModel, n: usize, shape: BasisShape) -> Result<Self> {
        let monomials = monomial_basis(n, shape)?;
        let subs = relevant_substitutions(n, model);
        Ok(Self::assemble(model, monomials, &subs))
    }

    fn assemble(
        model: &AlgebraModel,
        monomials: Vec<Monomial>,
        subs: &[crate::multilinear::Substitution],
    ) -> Self {
        let blocks: Vec<(usize, Vec<(u32, u32)>)> = subs
            .par_iter()
            .map(|sub| {
                let values: Vec<Option<BasisElement>> =
                    monomials.iter().map(|f| evaluate(f, sub, model)).collect();
                let mut outputs: Vec<BasisElement> = values.iter().flatten().copied().collect();
                outputs.sort_unstable();
                outputs.dedup();
                let entries = values
                    .iter()
                    .enumerate()
                    .filter_map(|(r, v)| {
                        v.map(|e| (r as u32, outputs.binary_search(&e).unwrap() as u32))
                    })
                    .collect();
                (outputs.len(), entries)
            })
            .collect();
        let mut rows = vec![Vec::new(); monomials.len()];
        let mut offset = 0u32;
        for (width, entries) in blocks {
            for (r, c) in entries {
                rows[r as usize].push(offset + c);
            }
            offset += width as u32;
        }
        EvaluationMatrix {
            monomials,
            rows,
            ncols: offset as usize,
        }
    }

    /// Row index of every monomial.
    pub fn index(&self) -> HashMap<&Monomial, usize> {
        self.monomials.iter().enumerate().map(|(i, m)| (m, i)).collect()
    }
}

fn resolve_mode(model: &AlgebraModel, mode: Mode) -> Result<BasisShape> {
    match (mode, model.is_unital()) {
        (Mode::Full, _) | (Mode::Auto, true) => Ok(BasisShape::Full),
        (Mode::LeftNormed, true) => Err(Error::ModeUnsound(
            "left-normed reduction needs x1(x2x3) = 0, which fails in unital models".into(),
        )),
        (Mode::LeftNormed, false) | (Mode::Auto, false) => {
            if model.verify_left_annihilator_identity() {
                Ok(BasisShape::LeftNormed)
            } else {
                Err(Error::ModeUnsound("model violates x1(x2x3) = 0".into()))
            }
        }
    }
}

fn shape_mode(shape: BasisShape) -> Mode {
    match shape {
        BasisShape::Full => Mode::Full,
        BasisShape::LeftNormed => Mode::LeftNormed,
    }
}

struct Ranked {
    matrix: EvaluationMatrix,
    dedup_rows: Vec<Vec<u32>>,
    dedup_cols: usize,
    report: CodimReport,
}

fn ranked(model: &AlgebraModel, n: usize, config: &CodimConfig) -> Result<Ranked> {
    config.validate()?;
    let shape = resolve_mode(model, config.mode)?;
    let cap = match shape {
        BasisShape::Full => FULL_CAP,
        BasisShape::LeftNormed => LEFT_NORMED_CAP,
    };
    if n > cap {
        return Err(Error::CapExceeded {
            what: "codimension degree",
            requested: n,
            cap,
        });
    }
    let matrix = EvaluationMatrix::build(model, n, shape)?;
    let (dedup_rows, dedup_cols) = linalg::dedup_columns(&matrix.rows, matrix.ncols);
    let ranks: Vec<usize> = config
        .primes
        .par_iter()
        .map(|&p| linalg::rank_mod_p(&dedup_rows, dedup_cols, p))
        .collect();
    let exact = (matrix.rows.len() <= config.exact_threshold).then(|| {
        let mut distinct = dedup_rows.clone();
        distinct.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        distinct.dedup();
        linalg::rank_exact(&distinct)
    });
    let best = *ranks.iter().max().unwrap();
    if let Some(e) = exact {
        if best > e {
            return Err(Error::InvariantViolation(format!(
                "rank mod p {best} exceeds rational rank {e}"
            )));
        }
    }
    let c_n = exact.unwrap_or(best) as u64;
    let report = CodimReport {
        n,
        c_n,
        mode: shape_mode(shape),
        unital: model.is_unital(),
        rows: matrix.rows.len(),
        certificate: RankCertificate {
            primes: config.primes.clone(),
            ranks,
            exact,
        },
        multiplicities: None,
        l_n: None,
    };
    Ok(Ranked {
        matrix,
        dedup_rows,
        dedup_cols,
        report,
    })
}

/// `c_n` of a model whose window is large enough for degree `n`.
pub fn codimension(model: &AlgebraModel, n: usize, config: &CodimConfig) -> Result<CodimReport> {
    Ok(ranked(model, n, config)?.report)
}

/// `c_n` of a model family, building the degree-`n` model first.
pub fn codimension_of(desc: &ModelDescriptor, n: usize, config: &CodimConfig) -> Result<CodimReport> {
    codimension(&desc.build_for_degree(n)?, n, config)
}

/// Integer traces of one representative per cycle type, computed mod `p`.
fn traces_mod_p(
    ranked: &Ranked,
    classes: &[Partition],
    index: &HashMap<&Monomial, usize>,
    p: u64,
) -> Result<Vec<i128>> {
    let mut ech = ModEchelon::new(p, ranked.dedup_cols);
    for (i, r) in ranked.dedup_rows.iter().enumerate() {
        ech.insert_support(r, i);
    }
    let r = ech.rank();
    let basis = ech.basis_rows().to_vec();
    let jpos: HashMap<u32, usize> = ech
        .pivot_cols()
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let restrict = |row: usize| -> Vec<usize> {
        ranked.dedup_rows[row]
            .iter()
            .filter_map(|c| jpos.get(c).copied())
            .collect()
    };
    let mut m = vec![vec![0u64; r]; r];
    for (bi, &row) in basis.iter().enumerate() {
        for j in restrict(row) {
            m[bi][j] = 1;
        }
    }
    let inv = linalg::invert_mod_p(m, p)
        .ok_or_else(|| Error::InvariantViolation("pivot minor is singular".into()))?;
    let mut out = Vec::with_capacity(classes.len());
    for mu in classes {
        let ct: Vec<usize> = mu.parts().iter().map(|&x| x as usize).collect();
        let sigma = Permutation::of_cycle_type(&ct);
        let mut tr = 0u64;
        for (bi, &row) in basis.iter().enumerate() {
            let image = ranked.matrix.monomials[row].act(&sigma);
            let target = *index.get(&image).ok_or_else(|| {
                Error::InvariantViolation(format!("monomial {image} outside the basis"))
            })?;
            for j in restrict(target) {
                tr = (tr + inv[j][bi]) % p;
            }
        }
        out.push(linalg::symmetric_lift(tr, p));
    }
    Ok(out)
}

/// Codimension together with the multiplicities `m_λ` and colength `l_n`.
pub fn cocharacter(model: &AlgebraModel, n: usize, config: &CodimConfig) -> Result<CodimReport> {
    let cap = if model.is_unital() {
        UNITAL_COCHARACTER_CAP
    } else {
        COCHARACTER_CAP
    };
    if n > cap {
        return Err(Error::CapExceeded {
            what: "cocharacter degree",
            requested: n,
            cap,
        });
    }
    let ranked = ranked(model, n, config)?;
    let c_n = ranked.report.c_n;
    let classes = Partition::all(n);
    let index = ranked.matrix.index();
    let full_rank: Vec<u64> = config
        .primes
        .iter()
        .zip(&ranked.report.certificate.ranks)
        .filter(|(_, &r)| r as u64 == c_n)
        .map(|(&p, _)| p)
        .collect();
    if full_rank.is_empty() {
        return Err(Error::InvariantViolation(
            "no prime attains the rational rank".into(),
        ));
    }
    let per_prime: Vec<Vec<i128>> = full_rank
        .par_iter()
        .map(|&p| traces_mod_p(&ranked, &classes, &index, p))
        .collect::<Result<_>>()?;
    let traces = &per_prime[0];
    if per_prime.iter().any(|t| t != traces) {
        return Err(Error::InvariantViolation("traces disagree between primes".into()));
    }
    if traces.iter().any(|t| t.unsigned_abs() > c_n as u128) {
        return Err(Error::InvariantViolation("trace exceeds the dimension".into()));
    }
    if traces[classes.len() - 1] != c_n as i128 {
        return Err(Error::InvariantViolation("trace of the identity is not c_n".into()));
    }
    let mut mults = Vec::new();
    for lambda in &classes {
        let mut m = Rational::new();
        for (mu, &t) in classes.iter().zip(traces) {
            let chi = character_value(lambda, mu)?;
            m += Rational::from((Integer::from(chi) * Integer::from(t), mu.centralizer_order()));
        }
        if *m.denom() != 1 || m < 0 {
            return Err(Error::InvariantViolation(format!("m_{lambda} = {m} is not a nonnegative integer")));
        }
        let m = m.numer().to_u64().unwrap();
        if m > 0 {
            let dim = lambda.hook_dimension().to_u64().unwrap();
            mults.push(Multiplicity {
                lambda: lambda.clone(),
                m,
                dim,
            });
        }
    }
    let mut report = ranked.report;
    report.l_n = Some(mults.iter().map(|x| x.m).sum());
    report.multiplicities = Some(mults);
    if report.check_sum_rules() != Some(true) {
        return Err(Error::InvariantViolation("Σ m_λ d_λ differs from c_n".into()));
    }
    Ok(report)
}

pub fn cocharacter_of(desc: &ModelDescriptor, n: usize, config: &CodimConfig) -> Result<CodimReport> {
    cocharacter(&desc.build_for_degree(n)?, n, config)
}

/// Height constraints on contributing shapes: `h(λ) <= d+2` and
/// `λ_{d+2} <= 1` without a unit, `h(λ) <= d+3` with one. `None` if the
/// report has no multiplicities.
pub fn verify_shape_bounds(report: &CodimReport, d: u32) -> Option<bool> {
    let d = d as usize;
    Some(report.multiplicities.as_ref()?.iter().all(|x| {
        let l = &x.lambda;
        if report.unital {
            l.height() <= d + 3
        } else {
            l.height() <= d + 2 && l.part(d + 2) <= 1
        }
    }))
}

/// The polynomial colength bound for the report's flavor.
pub fn colength_bound(n: usize, params: &AlgebraParams, unital: bool) -> Integer {
    let (m, d) = (params.m, params.d);
    if unital {
        Integer::from(n + 1).pow(3 * (d + 3) * (d + 3))
    } else {
        Integer::from(2 * d * d * (m + 1)) * Integer::from(n).pow((d + 1) * (d + 3)) * (n as u32 + 1)
    }
}

pub fn verify_colength_bound(report: &CodimReport, params: &AlgebraParams) -> Option<bool> {
    let l_n = report.l_n?;
    Some(l_n <= colength_bound(report.n, params, report.unital))
}

/// `c_n <= c_{n+1}` along consecutive reports.
pub fn is_nondecreasing(reports: &[CodimReport]) -> bool {
    reports.windows(2).all(|w| w[0].c_n <= w[1].c_n)
}

/// The largest share of `b`'s among nonzero left-normed evaluations of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BDegree {
    pub n: usize,
    pub max_b: usize,
    pub ratio: Rational,
    /// `1/(m+α)` for the upper end of the slope enclosure.
    pub reference: Rational,
    pub slack: Rational,
}

/// Nonzero left-normed products are `z · t_1 ⋯ t_{n-1}` with a forced letter
/// at every step, so the maximum runs over start elements only.
pub fn max_b_degree(model: &AlgebraModel, n: usize) -> Result<BDegree> {
    if model.is_unital() {
        return Err(Error::ModeUnsound("b-degree bound concerns non-unital models".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParams("degree must be positive".into()));
    }
    let mut best = 0usize;
    if n == 1 {
        best = 1;
    } else {
        for start in model.z_representatives() {
            let mut cur = start;
            let mut bs = 0;
            let mut alive = true;
            for _ in 1..n {
                let BasisElement::Z { i, j, k } = cur else { unreachable!() };
                let letter = if j < model.m_k(k) {
                    BasisElement::a(i)
                } else {
                    bs += 1;
                    BasisElement::B
                };
                match model.multiply(cur, letter) {
                    Some(next) => cur = next,
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                best = best.max(bs);
            }
        }
    }
    let params = model.params();
    let alpha_hi = match params.word.slope() {
        Slope::Exact(q) => q,
        Slope::Interval { hi, .. } => hi,
    };
    let reference = Rational::from(1) / (alpha_hi + params.m);
    let ratio = Rational::from((best, n));
    let slack = Rational::from(&ratio - &reference);
    Ok(BDegree {
        n,
        max_b: best,
        ratio,
        reference,
        slack,
    })
}

/// Slack of the `b`-degree share over a range of degrees.
#[derive(Clone, Debug)]
pub struct BDegreeTrend {
    pub rows: Vec<BDegree>,
    /// First degree of the trend window, `d(m+1)+2`.
    pub window_start: usize,
    pub bounded: bool,
    pub decreasing: bool,
}

impl BDegreeTrend {
    pub fn holds(&self) -> bool {
        self.bounded && self.decreasing
    }
}

/// Bounded slack (`|slack| <= 1`) and no growth of the positive part from the
/// first to the second half of the window.
pub fn b_degree_trend(desc: &ModelDescriptor, n_max: usize) -> Result<BDegreeTrend> {
    let params = desc.params()?;
    let window_start = (params.d * (params.m + 1) + 2) as usize;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let model = AlgebraModel::windowed_for_degree(params.clone(), n)?;
        rows.push(max_b_degree(&model, n)?);
    }
    let window: Vec<&BDegree> = rows.iter().filter(|r| r.n >= window_start).collect();
    let bounded = window.iter().all(|r| r.slack.clone().abs() <= 1);
    let half = window.len() / 2;
    let pos_max = |xs: &[&BDegree]| {
        xs.iter()
            .map(|r| r.slack.clone().max(Rational::new()))
            .max()
            .unwrap_or_default()
    };
    let decreasing = window.len() < 2 || pos_max(&window[half..]) <= pos_max(&window[..half]);
    Ok(BDegreeTrend {
        rows,
        window_start,
        bounded,
        decreasing,
    })
}

/// Multiplicity map keyed by partition.
pub fn multiplicity_map(report: &CodimReport) -> Option<BTreeMap<Partition, u64>> {
    Some(
        report
            .multiplicities
            .as_ref()?
            .iter()
            .map(|x| (x.lambda.clone(), x.m))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FlavorKind;
    use crate::multilinear::Substitution;
    use itertools::Itertools;

    fn desc(m: u32, d: u32, word: &str, unital: bool) -> ModelDescriptor {
        ModelDescriptor {
            m,
            d,
            word: word.parse().unwrap(),
            flavor: FlavorKind::Windowed,
            unital,
        }
    }

    fn c(desc: &ModelDescriptor, n: usize) -> u64 {
        codimension_of(desc, n, &CodimConfig::default()).unwrap().c_n
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn a210_sequence_matches_central_binomials() {
        // Independent count: n · binom(n-1, floor((n-1)/2)).
        let d = desc(2, 1, "periodic:0", false);
        for n in 1..=7 {
            let expected = n as u64 * binom(n as u64 - 1, (n as u64 - 1) / 2);
            assert_eq!(c(&d, n), expected, "n = {n}");
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(c(&desc(2, 1, "periodic:0", false), 1), 1);
        assert_eq!(c(&desc(2, 1, "periodic:0", false), 2), 2);
        assert_eq!(c(&desc(2, 1, "periodic:0", true), 2), 2);
    }

    #[test]
    fn full_and_left_normed_agree() {
        for (dsc, n_max) in [
            (desc(2, 1, "periodic:0", false), 5),
            (desc(3, 2, "periodic:01", false), 5),
            (desc(2, 1, "sturmian:1,1,1,1,1,1,1,1,1,1,1,1", false), 5),
        ] {
            for n in 1..=n_max {
                let model = dsc.build_for_degree(n).unwrap();
                let full = codimension(&model, n, &CodimConfig::with_mode(Mode::Full)).unwrap();
                let ln = codimension(&model, n, &CodimConfig::with_mode(Mode::LeftNormed)).unwrap();
                assert_eq!(full.c_n, ln.c_n);
                assert_eq!(ln.mode, Mode::LeftNormed);
            }
        }
    }

    #[test]
    fn left_normed_rejected_for_unital() {
        let model = desc(2, 1, "periodic:0", true).build_for_degree(3).unwrap();
        assert!(matches!(
            codimension(&model, 3, &CodimConfig::with_mode(Mode::LeftNormed)),
            Err(Error::ModeUnsound(_))
        ));
        assert_eq!(codimension(&model, 3, &CodimConfig::default()).unwrap().mode, Mode::Full);
    }

    #[test]
    fn caps_and_config() {
        let model = desc(2, 1, "periodic:0", true).build_for_degree(8).unwrap();
        assert!(matches!(
            codimension(&model, 8, &CodimConfig::default()),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            cocharacter(&model, 6, &CodimConfig::default()),
            Err(Error::CapExceeded { cap: 5, .. })
        ));
        let bad = CodimConfig {
            primes: vec![DEFAULT_PRIMES[0]],
            ..CodimConfig::default()
        };
        assert!(codimension(&model, 2, &bad).is_err());
        let composite = CodimConfig {
            primes: vec![DEFAULT_PRIMES[0], 1_000_000_008],
            ..CodimConfig::default()
        };
        assert!(codimension(&model, 2, &composite).is_err());
    }

    #[test]
    fn primes_agree_and_exact_confirms() {
        let report = codimension_of(&desc(3, 1, "periodic:011", false), 6, &CodimConfig::default()).unwrap();
        assert!(report.certificate.primes_agree());
        assert_eq!(report.certificate.exact, Some(report.c_n as usize));
    }

    /// Brute force over every basis substitution of a fixed window, with no pruning.
    fn brute_force(model: &AlgebraModel, n: usize) -> usize {
        let basis = model.basis();
        let subs: Vec<Substitution> = (0..n)
            .map(|_| basis.iter().copied())
            .multi_cartesian_product()
            .map(Substitution::new)
            .collect();
        let shape = if model.is_unital() { BasisShape::Full } else { BasisShape::LeftNormed };
        let monos = monomial_basis(n, shape).unwrap();
        let m = EvaluationMatrix::assemble(model, monos, &subs);
        linalg::rank_exact(&m.rows)
    }

    #[test]
    fn pruned_substitutions_give_the_same_rank() {
        for (dsc, n_max) in [
            (desc(2, 1, "periodic:0", false), 4),
            (desc(2, 1, "periodic:0", true), 3),
            (desc(2, 1, "periodic:01", false), 4),
        ] {
            for n in 1..=n_max {
                let model = dsc.build_for_degree(n).unwrap();
                assert_eq!(brute_force(&model, n) as u64, c(&dsc, n), "{dsc:?} n = {n}");
            }
        }
    }

    #[test]
    fn cocharacter_small() {
        let d = desc(2, 1, "periodic:0", false);
        let r1 = cocharacter_of(&d, 1, &CodimConfig::default()).unwrap();
        assert_eq!(r1.multiplicity(&Partition::new(vec![1]).unwrap()), Some(1));
        let r2 = cocharacter_of(&d, 2, &CodimConfig::default()).unwrap();
        let m2 = r2.multiplicity(&Partition::new(vec![2]).unwrap()).unwrap();
        let m11 = r2.multiplicity(&Partition::new(vec![1, 1]).unwrap()).unwrap();
        assert_eq!(m2 + m11, 2);
        assert_eq!(r2.l_n, Some(2));
    }

    #[test]
    fn cocharacter_sum_rules_and_bounds() {
        for dsc in [desc(2, 1, "periodic:0", false), desc(3, 2, "periodic:01", false)] {
            for n in 1..=5 {
                let r = cocharacter_of(&dsc, n, &CodimConfig::default()).unwrap();
                assert_eq!(r.check_sum_rules(), Some(true));
                assert_eq!(verify_shape_bounds(&r, dsc.d), Some(true), "{dsc:?} {n}");
                assert_eq!(verify_colength_bound(&r, &dsc.params().unwrap()), Some(true));
            }
        }
        let u = desc(2, 1, "periodic:0", true);
        for n in 1..=4 {
            let r = cocharacter_of(&u, n, &CodimConfig::default()).unwrap();
            assert_eq!(r.check_sum_rules(), Some(true));
            assert_eq!(verify_shape_bounds(&r, 1), Some(true));
        }
    }

    #[test]
    fn cocharacter_modes_agree() {
        let model = desc(2, 1, "periodic:0", false).build_for_degree(4).unwrap();
        let a = cocharacter(&model, 4, &CodimConfig::with_mode(Mode::Full)).unwrap();
        let b = cocharacter(&model, 4, &CodimConfig::with_mode(Mode::LeftNormed)).unwrap();
        assert_eq!(a.multiplicities, b.multiplicities);
    }

    #[test]
    fn shape_violation_flagged() {
        let report = CodimReport {
            n: 4,
            c_n: 1,
            mode: Mode::LeftNormed,
            unital: false,
            rows: 24,
            certificate: RankCertificate {
                primes: vec![],
                ranks: vec![],
                exact: None,
            },
            multiplicities: Some(vec![Multiplicity {
                lambda: Partition::new(vec![1, 1, 1, 1]).unwrap(),
                m: 1,
                dim: 1,
            }]),
            l_n: Some(1),
        };
        assert_eq!(verify_shape_bounds(&report, 1), Some(false));
        let unital = CodimReport {
            unital: true,
            ..report.clone()
        };
        assert_eq!(verify_shape_bounds(&unital, 1), Some(true));
        let empty = CodimReport {
            multiplicities: Some(vec![]),
            l_n: Some(0),
            ..report
        };
        assert_eq!(verify_colength_bound(&empty, &AlgebraParams::new(2, 1, "periodic:0".parse().unwrap()).unwrap()), Some(true));
    }

    #[test]
    fn b_degree_examples() {
        let p = AlgebraParams::new(2, 1, "periodic:0".parse().unwrap()).unwrap();
        let m3 = AlgebraModel::windowed_for_degree(p.clone(), 3).unwrap();
        let r = max_b_degree(&m3, 3).unwrap();
        assert_eq!(r.ratio, Rational::from((1, 3)));
        assert_eq!(r.reference, Rational::from((1, 2)));
        let m1 = AlgebraModel::windowed_for_degree(p.clone(), 1).unwrap();
        assert_eq!(max_b_degree(&m1, 1).unwrap().ratio, 1);
        let unital = m3.adjoin_unit().unwrap();
        assert!(matches!(max_b_degree(&unital, 3), Err(Error::ModeUnsound(_))));

        let q = AlgebraParams::new(3, 1, "periodic:0".parse().unwrap()).unwrap();
        let m4 = AlgebraModel::windowed_for_degree(q, 4).unwrap();
        // z^1_{3,1} · b a a: one b in four symbols
        assert_eq!(max_b_degree(&m4, 4).unwrap().ratio, Rational::from((1, 4)));
    }

    /// Direct count: nonzero evaluations with the most `b`'s, by enumeration
    /// over all left-normed substitutions.
    fn enumerate_b(model: &AlgebraModel, n: usize) -> usize {
        let zs = model.z_representatives();
        let letters = model.letters();
        let mut best = 0;
        for z in zs {
            for tail in (0..n - 1).map(|_| letters.iter().copied()).multi_cartesian_product() {
                if model.left_normed_eval(z, &tail).is_some() {
                    best = best.max(tail.iter().filter(|&&e| e == BasisElement::B).count());
                }
            }
        }
        best
    }

    #[test]
    fn b_degree_matches_enumeration() {
        for word in ["periodic:0", "periodic:01", "periodic:1"] {
            let p = AlgebraParams::new(3, 2, word.parse().unwrap()).unwrap();
            for n in 2..=8 {
                let model = AlgebraModel::windowed_for_degree(p.clone(), n).unwrap();
                assert_eq!(max_b_degree(&model, n).unwrap().max_b, enumerate_b(&model, n));
            }
        }
    }

    #[test]
    fn b_degree_slack_trends_down() {
        for (m, d, w) in [(2, 1, "periodic:0"), (3, 2, "periodic:01"), (4, 1, "fibonacci")] {
            let word = if w == "fibonacci" { format!("sturmian:{}", vec!["1"; 22].join(",")) } else { w.to_string() };
            let t = b_degree_trend(&desc(m, d, &word, false), 40).unwrap();
            assert!(t.holds(), "{m} {d} {w}: {:?}", t.rows.iter().map(|r| r.slack.to_f64()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn monotone_and_unital_dominates() {
        let a = desc(2, 1, "periodic:0", false);
        let u = desc(2, 1, "periodic:0", true);
        let ra: Vec<CodimReport> = (1..=4).map(|n| codimension_of(&a, n, &CodimConfig::default()).unwrap()).collect();
        let ru: Vec<CodimReport> = (1..=4).map(|n| codimension_of(&u, n, &CodimConfig::default()).unwrap()).collect();
        assert!(is_nondecreasing(&ra));
        assert!(is_nondecreasing(&ru));
        for (x, y) in ra.iter().zip(&ru) {
            assert!(y.c_n >= x.c_n);
        }
    }

    #[test]
    fn windowed_equals_wrapped() {
        let mut w = desc(2, 1, "periodic:01", false);
        for n in 1..=5 {
            let windowed = c(&w, n);
            w.flavor = FlavorKind::PeriodicWrap;
            let wrapped = c(&w, n);
            w.flavor = FlavorKind::Windowed;
            assert_eq!(windowed, wrapped, "n = {n}");
        }
    }

    #[test]
    fn report_json_round_trip() {
        let r = cocharacter_of(&desc(2, 1, "periodic:0", false), 3, &CodimConfig::default()).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: CodimReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
