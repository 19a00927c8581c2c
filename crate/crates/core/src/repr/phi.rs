use rug::float::Round;
use rug::{Float, Rational};

use super::{Interval, Partition};
use crate::error::{Error, Result};

fn check_point(point: &[Rational]) -> Result<()> {
    if point.is_empty() {
        return Err(Error::InvalidParams("empty point".into()));
    }
    if point.iter().any(|x| *x < 0 || *x > 1) {
        return Err(Error::InvalidParams("coordinates must lie in [0, 1]".into()));
    }
    let sum: Rational = point.iter().sum();
    if sum != 1 {
        return Err(Error::InvalidParams(format!("coordinates sum to {sum}, not 1")));
    }
    Ok(())
}

/// `ln Φ(x) = -Σ x_i ln x_i` (with `0 ln 0 = 0`).
pub fn ln_phi(point: &[Rational], prec: u32) -> Result<Interval> {
    check_point(point)?;
    Ok(point
        .iter()
        .fold(Interval::from_int(0, prec), |acc, x| acc.sub(&Interval::xlnx(x, prec))))
}

/// `Φ(x_1, ..., x_d) = 1 / (x_1^{x_1} ... x_d^{x_d})` on the simplex.
pub fn phi(point: &[Rational], prec: u32) -> Result<Interval> {
    Ok(ln_phi(point, prec)?.exp())
}

/// `Σ λ_i ln λ_i` over the rows.
fn row_entropy(lambda: &Partition, prec: u32) -> Interval {
    lambda
        .parts()
        .iter()
        .fold(Interval::from_int(0, prec), |acc, &p| acc.add(&Interval::int_xlnx(p as u64, prec)))
}

/// `ln Φ(λ) = ln n - (1/n) Σ λ_i ln λ_i`.
pub fn ln_phi_partition(lambda: &Partition, prec: u32) -> Interval {
    let n = lambda.n() as i64;
    let ln_n = Interval::from_int(n, prec).ln();
    ln_n.sub(&row_entropy(lambda, prec).div(&Interval::from_int(n, prec)))
}

/// `Φ(λ_1/n, ..., λ_d/n)`, zero-padded to `d` coordinates.
pub fn phi_of_partition(lambda: &Partition, d: usize, prec: u32) -> Result<Interval> {
    if d < lambda.height() {
        return Err(Error::InvalidParams(format!(
            "d = {d} is smaller than the height of {lambda}"
        )));
    }
    Ok(ln_phi_partition(lambda, prec).exp())
}

/// `Φ(θ, ..., θ, γ)` with `d` copies of `θ` and `dθ + γ = 1`.
pub fn phi_d(gamma: &Rational, d: u32, prec: u32) -> Result<Interval> {
    Ok(ln_phi_d(gamma, d, prec)?.exp())
}

pub fn ln_phi_d(gamma: &Rational, d: u32, prec: u32) -> Result<Interval> {
    if d == 0 {
        return Err(Error::InvalidParams("d must be positive".into()));
    }
    if *gamma < 0 || *gamma > 1 {
        return Err(Error::InvalidParams(format!("γ = {gamma} outside [0, 1]")));
    }
    let theta = (1 - gamma.clone()) / d;
    let mut point = vec![theta; d as usize];
    point.push(gamma.clone());
    ln_phi(&point, prec)
}

#[derive(Clone, Debug)]
pub struct L1Check {
    pub lambda: Partition,
    pub d: usize,
    /// `ln d_λ - (n ln Φ(λ) - (d² + d) ln n)`.
    pub lower_margin: Interval,
    /// `ln n + n ln Φ(λ) - ln d_λ`.
    pub upper_margin: Interval,
    pub holds: bool,
    /// `false` when `n < 100`, below the range where the bounds are claimed.
    pub hypothesis_met: bool,
}

/// `Φ(λ)^n / n^{d²+d} <= d_λ <= n Φ(λ)^n`, compared in logarithms with
/// outward rounding: `holds` is a proof of both inequalities.
pub fn check_l1(lambda: &Partition, d: usize, prec: u32) -> Result<L1Check> {
    if d < lambda.height() {
        return Err(Error::InvalidParams(format!(
            "{lambda} has more than d = {d} rows"
        )));
    }
    let n = lambda.n() as i64;
    let ln_n = Interval::from_int(n, prec).ln();
    let n_ln_phi = ln_phi_partition(lambda, prec).mul_int(n);
    let ln_dim = Interval::from_integer(&lambda.hook_dimension(), prec).ln();
    let dd = (d * d + d) as i64;
    let lower_margin = ln_dim.sub(&n_ln_phi.sub(&ln_n.mul_int(dd)));
    let upper_margin = ln_n.add(&n_ln_phi).sub(&ln_dim);
    let holds = lower_margin.certainly_nonnegative() && upper_margin.certainly_nonnegative();
    Ok(L1Check {
        lambda: lambda.clone(),
        d,
        lower_margin,
        upper_margin,
        holds,
        hypothesis_met: n >= 100,
    })
}

#[derive(Clone, Debug)]
pub struct PushDownCheck {
    pub lambda: Partition,
    pub mu: Partition,
    /// `ln Φ(μ) - ln Φ(λ)`.
    pub gain: Interval,
    /// The enclosure proves `Φ(μ) >= Φ(λ)`.
    pub proven: bool,
    /// The enclosure proves `Φ(μ) < Φ(λ)`.
    pub violated: bool,
}

/// Push one cell from row `i` down to row `j` and compare `Φ`.
pub fn check_push_down(lambda: &Partition, i: usize, j: usize, prec: u32) -> Result<PushDownCheck> {
    let mu = lambda.push_down(i, j)?;
    // same n: ln Φ(μ) - ln Φ(λ) = (S(λ) - S(μ)) / n
    let diff = row_entropy(lambda, prec).sub(&row_entropy(&mu, prec));
    let gain = diff.div(&Interval::from_int(lambda.n() as i64, prec));
    Ok(PushDownCheck {
        proven: gain.certainly_nonnegative(),
        violated: gain.hi() < &0,
        lambda: lambda.clone(),
        mu,
        gain,
    })
}

#[derive(Clone, Debug)]
pub struct AddedRowMax {
    pub t_star: Float,
    pub value: Float,
    pub numeric_t: Float,
    pub numeric_value: Float,
}

impl AddedRowMax {
    /// Largest of `|t* - t_num|` and `|value - value_num|`.
    pub fn discrepancy(&self) -> Float {
        let dt = Float::with_val(self.t_star.prec(), &self.t_star - &self.numeric_t).abs();
        let dv = Float::with_val(self.value.prec(), &self.value - &self.numeric_value).abs();
        dt.max(&dv)
    }
}

/// `ln F(t) = t ln a + H(t)` where `F(t) = Φ(t z_1, ..., t z_d, 1 - t)` and `Φ(z) = a`.
fn ln_added_row(t: &Float, ln_a: &Float) -> Float {
    let prec = t.prec();
    let one_minus = Float::with_val(prec, 1 - t);
    let mut v = Float::with_val(prec, t * ln_a);
    if *t > 0 {
        v -= Float::with_val(prec, t * Float::with_val(prec, t.ln_ref()));
    }
    if one_minus > 0 {
        v -= Float::with_val(prec, &one_minus * Float::with_val(prec, one_minus.ln_ref()));
    }
    v
}

/// Maximize a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_section_max(f: impl Fn(&Float) -> Float, lo: Float, hi: Float, tol: &Float) -> Float {
    let prec = lo.prec();
    let inv_phi = (Float::with_val(prec, 5u32).sqrt() - 1u32) / 2u32;
    let (mut a, mut b) = (lo, hi);
    let width = |a: &Float, b: &Float| Float::with_val(prec, b - a);
    let mut c = Float::with_val(prec, &b - Float::with_val(prec, &inv_phi * width(&a, &b)));
    let mut d = Float::with_val(prec, &a + Float::with_val(prec, &inv_phi * width(&a, &b)));
    let (mut fc, mut fd) = (f(&c), f(&d));
    while width(&a, &b) > *tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = Float::with_val(prec, &b - Float::with_val(prec, &inv_phi * width(&a, &b)));
            fc = f(&c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = Float::with_val(prec, &a + Float::with_val(prec, &inv_phi * width(&a, &b)));
            fd = f(&d);
        }
    }
    (a + b) / 2u32
}

/// Closed-form maximum of the added-row function, `t* = a/(a+1)` with value
/// `a + 1`, alongside a golden-section search.
pub fn maximize_added_row(a: &Float) -> Result<AddedRowMax> {
    if *a < 1 {
        return Err(Error::HypothesisViolated(format!(
            "a = {a} is not a value of Φ (Φ >= 1 everywhere)"
        )));
    }
    let prec = a.prec();
    let a_plus = Float::with_val(prec, a + 1u32);
    let t_star = Float::with_val(prec, a / &a_plus);
    let ln_a = Float::with_val(prec, a.ln_ref());
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32 / 2)));
    let numeric_t = golden_section_max(
        |t| ln_added_row(t, &ln_a),
        Float::with_val(prec, 0u32),
        Float::with_val(prec, 1u32),
        &tol,
    );
    let numeric_value = ln_added_row(&numeric_t, &ln_a).exp();
    Ok(AddedRowMax {
        t_star,
        value: a_plus,
        numeric_t,
        numeric_value,
    })
}

/// Integers `k >= 0` with `n/β - 1 <= k <= n/β`.
pub fn optimal_added_row_length(n: u64, beta: &Float) -> Result<Vec<u64>> {
    if *beta <= 0 {
        return Err(Error::InvalidParams("β must be positive".into()));
    }
    let prec = beta.prec().max(64);
    let ratio_lo = Float::with_val_round(prec, n / beta, Round::Down).0;
    let ratio_hi = Float::with_val_round(prec, n / beta, Round::Up).0;
    let first = Float::with_val(prec, &ratio_lo - 1u32).ceil().max(&Float::with_val(prec, 0u32));
    let last = ratio_hi.floor();
    let (first, last) = (
        first.to_integer().unwrap().to_u64().unwrap_or(0),
        last.to_integer().unwrap().to_u64().unwrap_or(0),
    );
    Ok((first..=last).collect())
}
