//! Exponent targets `Φ_d(1/(m+α))`, finite-degree sandwiches around computed
//! codimensions, unital witness shapes and density scans.
//!
//! Limits are never extrapolated: a trajectory shows `c_n`, `c_n^{1/n}`, the
//! witness lower bound `d_{λ^(n)}` at witness degrees and an upper bound from
//! the cocharacter (or the basis size), next to the target values.

use rayon::prelude::*;
use rug::{Float, Integer, Rational};

use crate::algebra::{AlgebraParams, ModelDescriptor};
use crate::codim::{
    cocharacter, codimension, CodimConfig, CodimReport, COCHARACTER_CAP, UNITAL_COCHARACTER_CAP,
};
use crate::error::{Error, Result};
use crate::repr::{ln_phi_partition, optimal_added_row_length, phi_d, Interval, Partition};
use crate::words::{Slope, WordSpec};

/// `exp(A) = Φ_d(1/(m+α))` and `exp(A^#) = exp(A) + 1`.
#[derive(Clone, Debug)]
pub struct ExponentTarget {
    pub m: u32,
    pub d: u32,
    pub slope: Slope,
    pub value: Interval,
    /// The same quantity from `ln Φ = (1/s) ln s + ((s-1)/s) ln(ds/(s-1))`, `s = m + α`.
    pub closed_form: Interval,
    pub unital_value: Interval,
}

impl ExponentTarget {
    /// Width of the hull of the two evaluations.
    pub fn agreement(&self) -> Float {
        self.value.hull(&self.closed_form).width()
    }

    /// `d < value <= d + 1`, not refuted by the enclosure.
    pub fn in_range(&self) -> bool {
        *self.value.lo() > self.d && *self.value.lo() <= self.d + 1
    }
}

fn closed_form(s: &Rational, d: u32, prec: u32) -> Interval {
    let si = Interval::from_rational(s, prec);
    if *s == 1 {
        return Interval::from_int(1, prec);
    }
    let s1 = Rational::from(s - 1u32);
    let first = si.ln().div(&si);
    let ratio = Rational::from(s * d) / s1.clone();
    let second = Interval::from_rational(&ratio, prec)
        .ln()
        .mul(&Interval::from_rational(&(s1 / s.clone()), prec));
    first.add(&second).exp()
}

fn target_exact(m: u32, d: u32, alpha: &Rational, prec: u32) -> Result<(Interval, Interval)> {
    let s = Rational::from(alpha + m);
    let gamma = Rational::from(s.recip_ref());
    Ok((phi_d(&gamma, d, prec)?, closed_form(&s, d, prec)))
}

pub fn target(m: u32, d: u32, slope: &Slope, prec: u32) -> Result<ExponentTarget> {
    if m < 2 || d < 1 || d >= m {
        return Err(Error::InvalidParams(format!("(m, d) = ({m}, {d}) needs m >= 2 and 1 <= d <= m-1")));
    }
    if *slope.lo() < 0 || *slope.hi() > 1 {
        return Err(Error::InvalidParams(format!("slope {slope} outside [0, 1]")));
    }
    // Φ_d(1/(m+α)) decreases in α, so an enclosure of α maps to a hull.
    let (value, closed) = match slope {
        Slope::Exact(a) => target_exact(m, d, a, prec)?,
        Slope::Interval { lo, hi } => {
            let (v_hi, c_hi) = target_exact(m, d, lo, prec)?;
            let (v_lo, c_lo) = target_exact(m, d, hi, prec)?;
            (
                Interval::new(v_lo.lo().clone(), v_hi.hi().clone()),
                Interval::new(c_lo.lo().clone(), c_hi.hi().clone()),
            )
        }
    };
    let unital_value = value.add(&Interval::from_int(1, prec));
    Ok(ExponentTarget {
        m,
        d,
        slope: slope.clone(),
        value,
        closed_form: closed,
        unital_value,
    })
}

pub fn target_for(params: &AlgebraParams, prec: u32) -> Result<ExponentTarget> {
    target(params.m, params.d, &params.word.slope(), prec)
}

/// The witness shape `((Σm_j - t)^d, td, 1)` of degree `n(t) = (Σ m_j) d + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPartition {
    pub t: usize,
    pub n: usize,
    pub lambda: Partition,
    /// `β = λ_{d+1} / n`.
    pub beta: Rational,
}

pub fn witness_partition(params: &AlgebraParams, t: usize) -> Result<WitnessPartition> {
    params.validate()?;
    if t == 0 {
        return Err(Error::InvalidParams("t must be positive".into()));
    }
    let d = params.d;
    let sum: u32 = params.row_lengths(t)?.iter().sum();
    let t32 = t as u32;
    let mut parts = vec![sum - t32; d as usize];
    parts.push(t32 * d);
    parts.push(1);
    let lambda = Partition::new(parts)?;
    let n = lambda.n();
    Ok(WitnessPartition {
        t,
        n,
        beta: Rational::from((t32 * d, n as u32)),
        lambda,
    })
}

/// Row insertions of length `k` into `λ^(n)`: as row `d+2`, between rows
/// `d` and `d+1`, and on top. Invalid orderings are dropped; `k = 0` gives `λ`.
pub fn unital_witness_partitions(lambda: &Partition, k: u32) -> Result<Vec<Partition>> {
    let h = lambda.height();
    if h < 3 {
        return Err(Error::InvalidParams(format!("{lambda} is not a witness shape")));
    }
    let d = h - 2;
    let td = lambda.part(d + 1);
    if k > td {
        return Err(Error::InvalidParams(format!("k = {k} exceeds td = {td}")));
    }
    if k == 0 {
        return Ok(vec![lambda.clone()]);
    }
    let p = lambda.parts();
    let candidates = [
        [&p[..=d], &[k, 1][..]].concat(),
        [&p[..d], &[k, p[d], 1][..]].concat(),
        [&[k][..], p].concat(),
    ];
    let mut out: Vec<Partition> = candidates
        .into_iter()
        .filter(|c| c.windows(2).all(|w| w[0] >= w[1]))
        .map(Partition::new)
        .collect::<Result<_>>()?;
    out.dedup();
    out.sort_by(|a, b| b.cmp(a));
    out.dedup();
    Ok(out)
}

/// Admissible added-row lengths `k` for `λ`, `n/β - 1 <= k <= n/β` with
/// `β = Φ(λ)`, restricted to `k <= td`, with their insertion shapes.
pub fn unital_witness_candidates(lambda: &Partition, prec: u32) -> Result<Vec<(u64, Vec<Partition>)>> {
    let beta = ln_phi_partition(lambda, prec).exp().mid();
    let td = lambda.part(lambda.height().saturating_sub(1)) as u64;
    optimal_added_row_length(lambda.n() as u64, &beta)?
        .into_iter()
        .filter(|&k| k <= td)
        .map(|k| Ok((k, unital_witness_partitions(lambda, k as u32)?)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpperKind {
    /// `l_n · max d_λ` from a cocharacter.
    Colength,
    /// Number of basis monomials.
    Dimension,
}

#[derive(Clone, Debug)]
pub struct TrajectoryRow {
    pub n: usize,
    pub c_n: u64,
    /// `c_n^{1/n}`.
    pub root: Interval,
    /// `d_{λ^(n)}` at witness degrees.
    pub lower: Option<Integer>,
    pub upper: Integer,
    pub upper_kind: UpperKind,
    pub report: CodimReport,
}

#[derive(Clone, Debug)]
pub struct TrajectoryReport {
    pub descriptor: ModelDescriptor,
    pub rows: Vec<TrajectoryRow>,
    pub target: ExponentTarget,
    pub monotone: bool,
}

impl TrajectoryReport {
    /// `lower <= c_n <= upper` on every row.
    pub fn sandwich_holds(&self) -> bool {
        self.rows.iter().all(|r| {
            r.lower.as_ref().map_or(true, |l| *l <= r.c_n) && r.upper >= r.c_n
        })
    }

    /// `c_n^{1/n}` strictly increases along the rows (as enclosures).
    pub fn root_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].root.certainly_lt(&w[1].root))
    }
}

pub fn trajectory(
    desc: &ModelDescriptor,
    n_max: usize,
    config: &CodimConfig,
    prec: u32,
) -> Result<TrajectoryReport> {
    let params = desc.params()?;
    let target = target_for(&params, prec)?;
    let co_cap = if desc.unital {
        UNITAL_COCHARACTER_CAP
    } else {
        COCHARACTER_CAP
    };
    let mut witnesses = Vec::new();
    for t in 1.. {
        let w = witness_partition(&params, t)?;
        if w.n > n_max {
            break;
        }
        witnesses.push(w);
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let model = desc.build_for_degree(n)?;
        let report = if n <= co_cap {
            cocharacter(&model, n, config)?
        } else {
            codimension(&model, n, config)?
        };
        let (upper, upper_kind) = match (report.l_n, report.max_dim()) {
            (Some(l), Some(d)) => (Integer::from(l) * d, UpperKind::Colength),
            _ => (Integer::from(report.rows), UpperKind::Dimension),
        };
        let root = if report.c_n == 0 {
            Interval::from_int(0, prec)
        } else {
            Interval::from_integer(&Integer::from(report.c_n), prec)
                .ln()
                .div(&Interval::from_int(n as i64, prec))
                .exp()
        };
        let lower = witnesses
            .iter()
            .find(|w| w.n == n)
            .map(|w| w.lambda.hook_dimension());
        rows.push(TrajectoryRow {
            n,
            c_n: report.c_n,
            root,
            lower,
            upper,
            upper_kind,
            report,
        });
    }
    let monotone = rows.windows(2).all(|w| w[0].c_n <= w[1].c_n);
    Ok(TrajectoryReport {
        descriptor: desc.clone(),
        rows,
        target,
        monotone,
    })
}

#[derive(Clone, Debug)]
pub struct ScanResult {
    pub gamma: Rational,
    pub m: u32,
    pub d: u32,
    pub q: Rational,
    /// A periodic word of slope exactly `q`.
    pub word: WordSpec,
    /// `Φ_d(1/(m+q)) + 1`.
    pub achieved: Interval,
    /// Upper bound on `|achieved - γ|`.
    pub error: Float,
}

#[derive(Clone, Debug)]
pub enum ScanOutcome {
    Found(ScanResult),
    /// `γ = 2`: the limiting end of the `(m, 1)` family, not attained by it.
    Boundary { gamma: Rational, note: String },
}

fn exponent_at(m: u32, d: u32, q: &Rational, prec: u32) -> Result<Interval> {
    Ok(target_exact(m, d, q, prec)?.0)
}

fn max_deviation(x: &Interval, tau: &Rational) -> Float {
    let prec = x.prec();
    let a = Float::with_val(prec, x.hi() - tau).abs();
    let b = Float::with_val(prec, x.lo() - tau).abs();
    a.max(&b)
}

/// Finds `(m, d, q)` with `|Φ_d(1/(m+q)) + 1 - γ| <= ε`, `q` dyadic in `[0, 1)`.
pub fn density_scan(gamma: &Rational, eps: &Rational, prec: u32) -> Result<ScanOutcome> {
    if *gamma < 2 {
        return Err(Error::NotRepresentable(format!(
            "γ = {gamma} is below 2; unital exponents of the family are at least 2"
        )));
    }
    if *eps <= 0 {
        return Err(Error::InvalidParams("ε must be positive".into()));
    }
    if *gamma == 2 {
        return Ok(ScanOutcome::Boundary {
            gamma: gamma.clone(),
            note: "γ = 2 is the infimum of exp(A#) over m >= 2, d = 1 and is not attained \
                   by the family; it is realised by the Grassmann algebra instead"
                .into(),
        });
    }
    let tau = Rational::from(gamma - 1u32);
    // d < τ <= d + 1
    let d = {
        let c = tau.clone().ceil();
        c.numer().to_u32().ok_or_else(|| Error::InvalidParams("γ too large".into()))? - 1
    };
    let zero = Rational::new();
    let f = |m: u32, q: &Rational| exponent_at(m, d, q, prec);
    let ge_tau = |x: &Interval| x.mid() >= tau;
    let not_below = |x: &Interval| *x.hi() >= tau;
    // largest m >= d+1 with Φ_d(1/m) >= τ, by doubling then bisection
    let mut lo_m = d + 1;
    if !not_below(&f(lo_m, &zero)?) {
        return Err(Error::InvariantViolation("Φ_d(1/(d+1)) below τ".into()));
    }
    let mut hi_m = lo_m + 1;
    while not_below(&f(hi_m, &zero)?) {
        lo_m = hi_m;
        hi_m = hi_m.checked_mul(2).ok_or_else(|| {
            Error::NotRepresentable(format!("γ = {gamma} needs m beyond u32"))
        })?;
    }
    while hi_m - lo_m > 1 {
        let mid = lo_m + (hi_m - lo_m) / 2;
        if not_below(&f(mid, &zero)?) {
            lo_m = mid;
        } else {
            hi_m = mid;
        }
    }
    let m = lo_m;
    let eps_f = Float::with_val(prec, eps);
    let mut lo = Rational::new();
    let mut hi = Rational::from(1);
    let mut found = None;
    for _ in 0..(prec as usize) {
        let v_lo = f(m, &lo)?;
        if max_deviation(&v_lo, &tau) <= eps_f {
            found = Some((lo.clone(), v_lo));
            break;
        }
        let mid = Rational::from(&lo + &hi) / 2u32;
        let v_mid = f(m, &mid)?;
        if max_deviation(&v_mid, &tau) <= eps_f {
            found = Some((mid, v_mid));
            break;
        }
        if ge_tau(&v_mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (q, value) = found.ok_or_else(|| {
        Error::NotRepresentable(format!("no dyadic slope within ε of γ = {gamma}"))
    })?;
    let word = WordSpec::mechanical(q.numer().to_u64().unwrap(), q.denom().to_u64().unwrap())?;
    if word.slope() != Slope::Exact(q.clone()) {
        return Err(Error::InvariantViolation(format!("word {word} does not have slope {q}")));
    }
    let achieved = value.add(&Interval::from_int(1, prec));
    let error = max_deviation(&value, &tau);
    Ok(ScanOutcome::Found(ScanResult {
        gamma: gamma.clone(),
        m,
        d,
        q,
        word,
        achieved,
        error,
    }))
}

/// Independent scans, run in parallel.
pub fn density_scan_many(gammas: &[Rational], eps: &Rational, prec: u32) -> Vec<Result<ScanOutcome>> {
    gammas.par_iter().map(|g| density_scan(g, eps, prec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FlavorKind;
    use crate::repr::DEFAULT_PREC as P;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::from((p, q))
    }

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn params(m: u32, d: u32, w: &str) -> AlgebraParams {
        AlgebraParams::new(m, d, w.parse().unwrap()).unwrap()
    }

    #[test]
    fn symmetric_targets() {
        let t = target(2, 1, &Slope::Exact(r(0, 1)), P).unwrap();
        assert!(t.value.contains_rational(&r(2, 1)));
        assert!(t.unital_value.contains_rational(&r(3, 1)));
        let t = target(3, 2, &Slope::Exact(r(0, 1)), P).unwrap();
        assert!(t.value.contains_rational(&r(3, 1)));
        assert!(t.unital_value.contains_rational(&r(4, 1)));
        assert!(t.agreement() < 1e-20);
        assert!(t.in_range());
    }

    #[test]
    fn slope_one_target() {
        // Φ(2/3, 1/3) = 3 / 2^{2/3}
        let t = target(2, 1, &Slope::Exact(r(1, 1)), P).unwrap();
        let direct = 3.0 / 2f64.powf(2.0 / 3.0);
        assert!((t.value.to_f64() - direct).abs() < 1e-14);
        assert!((t.value.to_f64() - 1.889_881_574_8).abs() < 1e-9);
        assert!((t.unital_value.to_f64() - 2.889_881_574_8).abs() < 1e-9);
    }

    #[test]
    fn sturmian_target_is_an_enclosure() {
        let w = WordSpec::fibonacci(20);
        let t = target_for(&AlgebraParams::new(3, 1, w).unwrap(), P).unwrap();
        let alpha = (3.0 - 5f64.sqrt()) / 2.0;
        let s = 3.0 + alpha;
        let direct = (s.ln() / s + (s - 1.0) / s * (s / (s - 1.0)).ln()).exp();
        assert!(t.value.lo().to_f64() <= direct + 1e-12 && direct - 1e-12 <= t.value.hi().to_f64());
        assert!(t.value.width() < 1e-6);
        assert!(t.in_range());
    }

    #[test]
    fn target_errors() {
        assert!(target(1, 1, &Slope::Exact(r(0, 1)), P).is_err());
        assert!(target(3, 3, &Slope::Exact(r(0, 1)), P).is_err());
        assert!(target(3, 1, &Slope::Exact(r(3, 2)), P).is_err());
    }

    #[test]
    fn witness_partitions() {
        let p = params(2, 1, "periodic:0");
        let w1 = witness_partition(&p, 1).unwrap();
        assert_eq!(w1.lambda, part(&[1, 1, 1]));
        assert_eq!(w1.n, 3);
        let w2 = witness_partition(&p, 2).unwrap();
        assert_eq!(w2.lambda, part(&[2, 2, 1]));
        assert_eq!(w2.n, 5);
        assert_eq!(w2.beta, r(2, 5));
        // β = 1/(m + avg w + 1/(td))
        let q = params(3, 2, "periodic:01");
        for t in 1..6 {
            let w = witness_partition(&q, t).unwrap();
            let sum_w: u32 = q.word.prefix(t).unwrap().iter().map(|&x| x as u32).sum();
            let avg = Rational::from((sum_w, t as u32));
            let expected = Rational::from(1) / (avg + 3u32 + Rational::from((1, 2 * t as u32)));
            assert_eq!(w.beta, expected);
            assert_eq!(w.n, crate::multilinear::witness::witness_degree(&q, t).unwrap());
        }
    }

    #[test]
    fn insertion_shapes() {
        let l = part(&[1, 1, 1]);
        assert_eq!(unital_witness_partitions(&l, 1).unwrap(), vec![part(&[1, 1, 1, 1])]);
        assert_eq!(unital_witness_partitions(&l, 0).unwrap(), vec![l.clone()]);
        assert!(unital_witness_partitions(&l, 2).is_err());
        let l = part(&[5, 5, 4, 1]);
        let shapes = unital_witness_partitions(&l, 4).unwrap();
        assert!(shapes.contains(&part(&[5, 5, 4, 4, 1])));
        assert!(shapes.contains(&part(&[5, 5, 4, 4, 1])));
        assert_eq!(shapes.len(), 1);
        let shapes = unital_witness_partitions(&part(&[3, 3, 2, 1]), 2).unwrap();
        assert_eq!(shapes, vec![part(&[3, 3, 2, 2, 1])]);
        for k in 0..=2u32 {
            for s in unital_witness_partitions(&part(&[4, 2, 1]), k).unwrap() {
                assert_eq!(s.n(), 7 + k as usize);
            }
        }
    }

    #[test]
    fn candidates_for_two_two_one() {
        // Φ(2/5, 2/5, 1/5) ≈ 2.8717, 5/Φ ≈ 1.741, so k = 1
        let c = unital_witness_candidates(&part(&[2, 2, 1]), P).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].0, 1);
        assert!(c[0].1.contains(&part(&[2, 2, 1, 1])));
    }

    fn desc(unital: bool) -> ModelDescriptor {
        ModelDescriptor {
            m: 2,
            d: 1,
            word: "periodic:0".parse().unwrap(),
            flavor: FlavorKind::Windowed,
            unital,
        }
    }

    #[test]
    fn trajectory_a210() {
        let t = trajectory(&desc(false), 6, &CodimConfig::default(), P).unwrap();
        assert_eq!(t.rows.iter().map(|r| r.c_n).collect::<Vec<_>>(), vec![1, 2, 6, 12, 30, 60]);
        assert!(t.monotone);
        assert!(t.sandwich_holds());
        assert!(t.root_increasing());
        assert_eq!(t.rows[2].lower, Some(Integer::from(1)));
        assert_eq!(t.rows[4].lower, Some(Integer::from(5)));
        assert!(t.rows.iter().all(|r| r.upper_kind == UpperKind::Colength));
        assert!(t.target.value.contains_rational(&r(2, 1)));
    }

    #[test]
    fn unital_trajectory_dominates() {
        let a = trajectory(&desc(false), 4, &CodimConfig::default(), P).unwrap();
        let u = trajectory(&desc(true), 4, &CodimConfig::default(), P).unwrap();
        for (x, y) in a.rows.iter().zip(&u.rows) {
            assert!(y.c_n >= x.c_n);
        }
        assert!(u.sandwich_holds());
    }

    fn found(g: Rational, eps: Rational) -> ScanResult {
        match density_scan(&g, &eps, P).unwrap() {
            ScanOutcome::Found(r) => r,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scan_symmetric_point() {
        let s = found(r(3, 1), r(1, 1_000_000));
        assert_eq!((s.m, s.d), (2, 1));
        assert_eq!(s.q, 0);
        assert!(s.achieved.contains_rational(&r(3, 1)));
        let s = found(r(4, 1), r(1, 1_000_000));
        assert_eq!((s.m, s.d, s.q.clone()), (3, 2, Rational::new()));
    }

    #[test]
    fn scan_interior() {
        for g in [r(9, 4), r(5, 2), r(11, 4), r(7, 2)] {
            let eps = r(1, 10_000);
            let s = found(g.clone(), eps.clone());
            assert!(s.error <= Float::with_val(P, &eps));
            assert!(s.q >= 0 && s.q < 1);
            assert_eq!(s.word.slope(), Slope::Exact(s.q.clone()));
            assert!(s.achieved.to_f64() - g.to_f64() < 1e-4);
            let direct = target(s.m, s.d, &Slope::Exact(s.q.clone()), P).unwrap();
            assert_eq!(direct.unital_value, s.achieved);
        }
        let s = found(r(5, 2), r(1, 10_000));
        assert_eq!(s.d, 1);
    }

    #[test]
    fn scan_boundary_and_errors() {
        assert!(matches!(density_scan(&r(2, 1), &r(1, 10), P), Ok(ScanOutcome::Boundary { .. })));
        assert!(matches!(density_scan(&r(19, 10), &r(1, 10), P), Err(Error::NotRepresentable(_))));
        assert!(density_scan(&r(5, 2), &r(0, 1), P).is_err());
        let many = density_scan_many(&[r(5, 2), r(1, 1)], &r(1, 100), P);
        assert!(many[0].is_ok() && many[1].is_err());
    }

    proptest! {
        #[test]
        fn target_decreases_in_slope(a in 0u32..1000, b in 0u32..1000, m in 2u32..7, d_off in 0u32..5) {
            prop_assume!(a != b);
            let d = 1 + d_off % (m - 1);
            let (lo, hi) = (a.min(b), a.max(b));
            let t_lo = target(m, d, &Slope::Exact(r(lo as i64, 1000)), P).unwrap();
            let t_hi = target(m, d, &Slope::Exact(r(hi as i64, 1000)), P).unwrap();
            prop_assert!(t_hi.value.certainly_lt(&t_lo.value));
        }

        #[test]
        fn targets_in_range_and_forms_agree(a in 0u32..=1000, m in 2u32..9, d_off in 0u32..7) {
            let d = 1 + d_off % (m - 1);
            let t = target(m, d, &Slope::Exact(r(a as i64, 1000)), P).unwrap();
            prop_assert!(t.in_range());
            prop_assert!(t.agreement() < 1e-20);
            let shift = t.unital_value.sub(&t.value);
            prop_assert!(shift.contains_rational(&r(1, 1)));
        }
    }
}
