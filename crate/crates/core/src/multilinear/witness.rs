//! Alternating non-identities of `A(m,d,w)` whose values at a fixed
//! substitution are nonzero multiples of `z^1_{1,t+1}`.
//!
//! With `p_j = m_j - 1` the defining monomial is
//!
//! ```text
//! h_t = z · Π_{j=1..t} ( x^1_{q+1} .. x^1_{q+p_j} y^j_1 ... x^d_{q+1} .. x^d_{q+p_j} y^j_d )
//! ```
//!
//! (`q = p_1 + ... + p_{j-1}`), left-normed. Block `j` is alternated over
//! `{x^1_{q+s}, ..., x^d_{q+s}, y^j_s}` for `s <= d` (with `z` added to the very
//! first set) and over `{x^1_{q+s}, ..., x^d_{q+s}}` for `d < s <= p_j`.

use std::collections::BTreeMap;

use rug::{Integer, Rational};

use super::{Monomial, Polynomial, Substitution};
use crate::algebra::{AlgebraModel, AlgebraParams, BasisElement, Flavor};
use crate::error::{Error, Result};

/// Largest number of expanded terms a witness may have.
pub const WITNESS_TERM_CAP: u128 = 2_000_000;

#[derive(Clone, Debug)]
pub struct Witness {
    pub params: AlgebraParams,
    pub t: usize,
    pub polynomial: Polynomial,
    pub substitution: Substitution,
    /// 0-based variable sets alternated in the construction.
    pub alternation_sets: Vec<Vec<usize>>,
    /// Families `{x^1_*}, ..., {x^d_*}, {y^*_*}` used by the symmetrization.
    pub symmetrization_families: Vec<Vec<usize>>,
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Degree `n(t) = (m_1 + ... + m_t) d + 1`.
pub fn witness_degree(params: &AlgebraParams, t: usize) -> Result<usize> {
    let rows = params.row_lengths(t)?;
    Ok(rows.iter().map(|&m| m as usize).sum::<usize>() * params.d as usize + 1)
}

pub fn build_witness(params: &AlgebraParams, t: usize) -> Result<Witness> {
    params.validate()?;
    if t == 0 {
        return Err(Error::InvalidParams("t must be positive".into()));
    }
    let d = params.d as usize;
    let rows = params.row_lengths(t)?;

    // Lay out h_t: variable 0 is z.
    let mut images = vec![BasisElement::z(1, 1, 1)];
    let mut x_family: Vec<Vec<usize>> = vec![Vec::new(); d];
    let mut y_family = Vec::new();
    let mut blocks = Vec::new();
    for &m_j in &rows {
        let p_j = m_j as usize - 1;
        // x[i][s] and y[s] of this block
        let mut xs = vec![Vec::with_capacity(p_j); d];
        let mut ys = Vec::with_capacity(d);
        for i in 0..d {
            for _ in 0..p_j {
                xs[i].push(images.len());
                x_family[i].push(images.len());
                images.push(BasisElement::a(i as u32 + 1));
            }
            ys.push(images.len());
            y_family.push(images.len());
            images.push(BasisElement::B);
        }
        let mut sets = Vec::new();
        for s in 0..p_j {
            let mut set: Vec<usize> = (0..d).map(|i| xs[i][s]).collect();
            if s < d {
                set.push(ys[s]);
            }
            sets.push(set);
        }
        blocks.push(sets);
    }
    blocks[0][0].insert(0, 0);

    let terms: u128 = blocks
        .iter()
        .flatten()
        .map(|s| factorial(s.len()))
        .try_fold(1u128, |acc, f| acc.checked_mul(f))
        .unwrap_or(u128::MAX);
    if terms > WITNESS_TERM_CAP {
        return Err(Error::CapExceeded {
            what: "witness terms",
            requested: usize::try_from(terms).unwrap_or(usize::MAX),
            cap: WITNESS_TERM_CAP as usize,
        });
    }

    let first_len = 1 + d * rows[0] as usize;
    let mut poly = Polynomial::monomial(Monomial::left_normed((0..first_len as u8).collect()));
    for (j, sets) in blocks.iter().enumerate() {
        if j > 0 {
            poly = poly.extend_left_normed(d * rows[j] as usize)?;
        }
        for set in sets {
            if set.len() > 1 {
                poly = poly.alternate(set)?;
            }
        }
    }
    debug_assert_eq!(poly.degree(), witness_degree(params, t)?);

    let mut families = x_family;
    families.push(y_family);
    Ok(Witness {
        params: params.clone(),
        t,
        polynomial: poly,
        substitution: Substitution::new(images),
        alternation_sets: blocks.into_iter().flatten().collect(),
        symmetrization_families: families,
    })
}

impl Witness {
    pub fn degree(&self) -> usize {
        self.polynomial.degree()
    }

    /// A windowed model deep enough to hold the value `z^1_{1,t+1}`.
    pub fn windowed_model(&self) -> Result<AlgebraModel> {
        AlgebraModel::build(self.params.clone(), Flavor::Windowed { depth: self.t + 1 })
    }

    /// `z^1_{1,t+1}`, with the position wrapped in periodic-wrap models.
    pub fn expected_image(&self, model: &AlgebraModel) -> BasisElement {
        let k = match model.flavor() {
            Flavor::Windowed { .. } => self.t + 1,
            Flavor::PeriodicWrap { period } => self.t % period + 1,
        };
        BasisElement::z(1, 1, k as u32)
    }

    pub fn evaluate(&self, model: &AlgebraModel) -> Result<BTreeMap<BasisElement, Rational>> {
        self.polynomial.evaluate(&self.substitution, model)
    }

    /// The coefficient `c` with `φ(f_t) = c · z^1_{1,t+1}`; errors unless the
    /// value has exactly that shape with `c ≠ 0`.
    pub fn image_coefficient(&self, model: &AlgebraModel) -> Result<Rational> {
        let value = self.evaluate(model)?;
        let target = self.expected_image(model);
        match value.iter().next() {
            Some((e, c)) if value.len() == 1 && *e == target => Ok(c.clone()),
            _ => Err(Error::InvariantViolation(format!(
                "witness value is not a nonzero multiple of {target}"
            ))),
        }
    }

    /// `K = Π |S|!` over the symmetrization families.
    pub fn symmetrization_factor(&self) -> Integer {
        self.symmetrization_families
            .iter()
            .map(|f| Integer::from(Integer::factorial(f.len() as u32)))
            .product()
    }

    /// Symmetrization of the witness over its families.
    pub fn symmetrized(&self) -> Result<Polynomial> {
        let growth: u128 = self
            .symmetrization_families
            .iter()
            .map(|f| factorial(f.len()))
            .product();
        let terms = growth.saturating_mul(self.polynomial.len() as u128);
        if terms > WITNESS_TERM_CAP {
            return Err(Error::CapExceeded {
                what: "symmetrized witness terms",
                requested: usize::try_from(terms).unwrap_or(usize::MAX),
                cap: WITNESS_TERM_CAP as usize,
            });
        }
        let mut p = self.polynomial.clone();
        for family in &self.symmetrization_families {
            if family.len() > 1 {
                p = p.symmetrize(family)?;
            }
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::WordSpec;

    fn params(m: u32, d: u32, w: &str) -> AlgebraParams {
        AlgebraParams::new(m, d, w.parse().unwrap()).unwrap()
    }

    #[test]
    fn first_witness_of_a210() {
        let w = build_witness(&params(2, 1, "periodic:0"), 1).unwrap();
        assert_eq!(w.degree(), 3);
        assert_eq!(w.polynomial.len(), 6);
        let model = w.windowed_model().unwrap();
        assert_eq!(w.image_coefficient(&model).unwrap(), 1);
        assert_eq!(w.expected_image(&model), BasisElement::z(1, 1, 2));
    }

    #[test]
    fn second_witness_of_a210() {
        let w = build_witness(&params(2, 1, "periodic:0"), 2).unwrap();
        assert_eq!(w.degree(), 5);
        let model = w.windowed_model().unwrap();
        assert_ne!(w.image_coefficient(&model).unwrap(), 0);
        assert_eq!(w.expected_image(&model), BasisElement::z(1, 1, 3));
    }

    #[test]
    fn degree_formula() {
        for (m, d, word, t) in [(2, 1, "periodic:0", 2), (3, 2, "periodic:01", 2), (3, 1, "periodic:1", 3)] {
            let p = params(m, d, word);
            let rows = p.row_lengths(t).unwrap();
            let wsum: u32 = rows.iter().map(|r| r - m).sum();
            let expected = (t as u32 * m * d + d * wsum + 1) as usize;
            assert_eq!(witness_degree(&p, t).unwrap(), expected);
        }
        let w = build_witness(&params(3, 2, "periodic:01"), 1).unwrap();
        assert_eq!(w.degree(), witness_degree(&w.params, 1).unwrap());
    }

    #[test]
    fn alternation_set_sizes() {
        // m = 4, d = 2: p = 3 > d gives sets of sizes d+2, d+1, d
        let w = build_witness(&params(4, 2, "periodic:0"), 1).unwrap();
        let sizes: Vec<usize> = w.alternation_sets.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 3, 2]);
        let model = w.windowed_model().unwrap();
        assert_eq!(w.image_coefficient(&model).unwrap(), 1);
    }

    #[test]
    fn nonvanishing_on_other_words() {
        for (m, d, word, t) in [(3, 2, "periodic:0", 1), (2, 1, "periodic:1", 2), (3, 1, "mechanical:1/2", 2)] {
            let w = build_witness(&params(m, d, word), t).unwrap();
            let model = w.windowed_model().unwrap();
            assert_ne!(w.image_coefficient(&model).unwrap(), 0, "{m} {d} {word} {t}");
        }
        let sturm = AlgebraParams::new(2, 1, WordSpec::fibonacci(8)).unwrap();
        let w = build_witness(&sturm, 2).unwrap();
        assert_ne!(w.image_coefficient(&w.windowed_model().unwrap()).unwrap(), 0);
    }

    #[test]
    fn wrapped_image() {
        let w = build_witness(&params(2, 1, "periodic:0"), 2).unwrap();
        let b = AlgebraModel::periodic(w.params.clone()).unwrap();
        assert_eq!(w.expected_image(&b), BasisElement::z(1, 1, 1));
        assert_ne!(w.image_coefficient(&b).unwrap(), 0);
    }

    #[test]
    fn symmetrization_scales_the_value() {
        for (m, d, t) in [(2, 1, 1), (2, 1, 2), (3, 1, 1), (3, 2, 1)] {
            let w = build_witness(&params(m, d, "periodic:0"), t).unwrap();
            let model = w.windowed_model().unwrap();
            let base = w.image_coefficient(&model).unwrap();
            let sym = w.symmetrized().unwrap().evaluate(&w.substitution, &model).unwrap();
            let k = Rational::from(w.symmetrization_factor());
            assert_eq!(sym.get(&w.expected_image(&model)), Some(&(base * k)));
            assert_eq!(sym.len(), 1);
        }
    }

    #[test]
    fn term_cap() {
        assert!(matches!(
            build_witness(&params(6, 5, "periodic:0"), 2),
            Err(Error::CapExceeded { .. })
        ));
    }
}
