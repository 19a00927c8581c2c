use std::collections::BTreeMap;

use itertools::Itertools;
use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{evaluate, Monomial, Permutation, Substitution};
use crate::algebra::{AlgebraModel, BasisElement};
use crate::error::{Error, Result};
use crate::repr::Tableau;

/// A homogeneous multilinear polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    degree: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(degree: usize) -> Self {
        Polynomial {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut p = Polynomial::zero(m.degree());
        p.terms.insert(m, Rational::from(1));
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) -> Result<()> {
        if m.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: m.degree(),
            });
        }
        self.add_term_unchecked(m, c);
        Ok(())
    }

    fn add_term_unchecked(&mut self, m: Monomial, c: Rational) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_degree(other.degree)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term_unchecked(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(self.degree);
        if *c != 0 {
            for (m, v) in &self.terms {
                out.terms.insert(m.clone(), Rational::from(v * c));
            }
        }
        out
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: n,
            });
        }
        Ok(())
    }

    /// `σ f(x_1, ..., x_n) = f(x_{σ(1)}, ..., x_{σ(n)})`.
    pub fn act(&self, sigma: &Permutation) -> Result<Polynomial> {
        self.check_degree(sigma.degree())?;
        let mut out = Polynomial::zero(self.degree);
        for (m, c) in &self.terms {
            out.add_term_unchecked(m.act(sigma), c.clone());
        }
        Ok(out)
    }

    fn sum_over(&self, varset: &[usize], signed: bool) -> Result<Polynomial> {
        if varset.is_empty() {
            return Err(Error::InvalidParams("empty variable set".into()));
        }
        if varset.iter().any(|&v| v >= self.degree) || !varset.iter().all_unique() {
            return Err(Error::InvalidParams(format!(
                "variable set {varset:?} is not a subset of 0..{}",
                self.degree
            )));
        }
        let mut out = Polynomial::zero(self.degree);
        for tau in Permutation::all(varset.len()) {
            let mut images: Vec<u8> = (0..self.degree as u8).collect();
            for (i, &v) in varset.iter().enumerate() {
                images[v] = varset[tau.apply(i)] as u8;
            }
            let sigma = Permutation::from_images(images)?;
            let sign = if signed { tau.sign() } else { 1 };
            for (m, c) in &self.terms {
                let c = if sign < 0 { Rational::from(-c) } else { c.clone() };
                out.add_term_unchecked(m.act(&sigma), c);
            }
        }
        Ok(out)
    }

    /// `Σ_τ sgn(τ) τ·f` over permutations of the (0-based) variables in `varset`.
    pub fn alternate(&self, varset: &[usize]) -> Result<Polynomial> {
        self.sum_over(varset, true)
    }

    /// `Σ_τ τ·f` over permutations of the (0-based) variables in `varset`.
    pub fn symmetrize(&self, varset: &[usize]) -> Result<Polynomial> {
        self.sum_over(varset, false)
    }

    /// `R(T) C(T) f`: column alternations first, then row symmetrizations.
    pub fn young_symmetrizer(&self, tableau: &Tableau) -> Result<Polynomial> {
        self.check_degree(tableau.size())?;
        let mut out = self.clone();
        for col in tableau.columns() {
            if col.len() > 1 {
                out = out.alternate(&zero_based(&col))?;
            }
        }
        for row in tableau.rows() {
            if row.len() > 1 {
                out = out.symmetrize(&zero_based(row))?;
            }
        }
        Ok(out)
    }

    /// Right multiplication of left-normed terms by fresh variables:
    /// `f ↦ f x_{n+1} ... x_{n+r}`.
    pub fn extend_left_normed(&self, r: usize) -> Result<Polynomial> {
        let n = self.degree;
        let mut out = Polynomial::zero(n + r);
        for (m, c) in &self.terms {
            if !m.is_left_normed() {
                return Err(Error::InvalidParams("term is not left-normed".into()));
            }
            let mut vars = m.vars.clone();
            vars.extend((n..n + r).map(|v| v as u8));
            out.terms.insert(Monomial::left_normed(vars), c.clone());
        }
        Ok(out)
    }

    /// Linear combination of basis elements obtained by substituting.
    pub fn evaluate(
        &self,
        sub: &Substitution,
        model: &AlgebraModel,
    ) -> Result<BTreeMap<BasisElement, Rational>> {
        self.check_degree(sub.len())?;
        let mut out: BTreeMap<BasisElement, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some(e) = evaluate(m, sub, model) {
                *out.entry(e).or_default() += c;
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(out)
    }
}

fn zero_based(labels: &[usize]) -> Vec<usize> {
    labels.iter().map(|&l| l - 1).collect()
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    tree: String,
    coeff: String,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                tree: m.to_string(),
                coeff: c.to_string(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let first = terms
            .first()
            .ok_or_else(|| D::Error::custom("empty polynomial has no degree"))?;
        let degree = Monomial::parse(&first.tree).map_err(D::Error::custom)?.degree();
        let mut p = Polynomial::zero(degree);
        for t in terms {
            let m = Monomial::parse(&t.tree).map_err(D::Error::custom)?;
            let c: Rational = t.coeff.parse().map_err(D::Error::custom)?;
            p.add_term(m, c).map_err(D::Error::custom)?;
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraParams, Flavor};
    use crate::repr::Partition;
    use proptest::prelude::*;

    fn mono(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    fn x1x2() -> Polynomial {
        Polynomial::monomial(mono("(1,2)"))
    }

    #[test]
    fn transposition_action() {
        let s = Permutation::from_cycles(2, &[vec![1, 2]]).unwrap();
        assert_eq!(x1x2().act(&s).unwrap(), Polynomial::monomial(mono("(2,1)")));
        assert_eq!(x1x2().act(&Permutation::identity(2)).unwrap(), x1x2());
        assert!(matches!(
            x1x2().act(&Permutation::identity(3)),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn alternation_examples() {
        let alt = x1x2().alternate(&[0, 1]).unwrap();
        assert_eq!(alt.coefficient(&mono("(1,2)")), 1);
        assert_eq!(alt.coefficient(&mono("(2,1)")), -1);
        assert_eq!(alt.alternate(&[0, 1]).unwrap(), alt.scale(&Rational::from(2)));

        let model = AlgebraModel::build(
            AlgebraParams::new(2, 1, "periodic:0".parse().unwrap()).unwrap(),
            Flavor::Windowed { depth: 2 },
        )
        .unwrap()
        .adjoin_unit()
        .unwrap();
        let a1 = BasisElement::a(1);
        let sub = Substitution::new(vec![a1, a1]);
        assert!(alt.evaluate(&sub, &model).unwrap().is_empty());
        let sub = Substitution::new(vec![BasisElement::Unit, a1]);
        assert!(alt.evaluate(&sub, &model).unwrap().is_empty());
    }

    #[test]
    fn young_symmetrizer_extremes() {
        let p = Polynomial::monomial(mono("((1,2),3)"));
        let row = Tableau::row_reading(&Partition::new(vec![3]).unwrap());
        assert_eq!(p.young_symmetrizer(&row).unwrap(), p.symmetrize(&[0, 1, 2]).unwrap());
        let col = Tableau::row_reading(&Partition::new(vec![1, 1, 1]).unwrap());
        assert_eq!(p.young_symmetrizer(&col).unwrap(), p.alternate(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn young_symmetrizer_is_quasi_idempotent() {
        let t = Tableau::row_reading(&Partition::new(vec![2, 1]).unwrap());
        for m in super::super::monomial_basis(3, super::super::BasisShape::Full).unwrap() {
            let e = Polynomial::monomial(m).young_symmetrizer(&t).unwrap();
            let ee = e.young_symmetrizer(&t).unwrap();
            // γ = n! / d_λ = 6 / 2
            assert_eq!(ee, e.scale(&Rational::from(3)));
        }
    }

    #[test]
    fn json_round_trip() {
        let p = x1x2().alternate(&[0, 1]).unwrap().scale(&Rational::from((1, 2)));
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[{"tree":"(1,2)","coeff":"1/2"},{"tree":"(2,1)","coeff":"-1/2"}]"#);
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn extend_left_normed() {
        let p = Polynomial::monomial(mono("(2,1)")).extend_left_normed(2).unwrap();
        assert_eq!(p, Polynomial::monomial(mono("(((2,1),3),4)")));
        assert!(Polynomial::monomial(mono("(1,(2,3))")).extend_left_normed(1).is_err());
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u8).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    fn poly_strategy(n: usize) -> impl Strategy<Value = Polynomial> {
        let monos = super::super::monomial_basis(n, super::super::BasisShape::Full).unwrap();
        prop::collection::vec((0..monos.len(), -3i32..=3), 1..6).prop_map(move |terms| {
            let mut p = Polynomial::zero(n);
            for (i, c) in terms {
                p.add_term(monos[i].clone(), Rational::from(c)).unwrap();
            }
            p
        })
    }

    proptest! {
        #[test]
        fn action_is_a_left_action(
            s in perm_strategy(4),
            t in perm_strategy(4),
            p in poly_strategy(4),
        ) {
            let lhs = p.act(&s.compose(&t)).unwrap();
            let rhs = p.act(&t).unwrap().act(&s).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn alternation_kills_repeated_images(
            p in poly_strategy(3),
            images in prop::collection::vec(0usize..3, 3),
        ) {
            let model = AlgebraModel::build(
                AlgebraParams::new(2, 1, "periodic:0".parse().unwrap()).unwrap(),
                Flavor::Windowed { depth: 3 },
            )
            .unwrap()
            .adjoin_unit()
            .unwrap();
            let pool = [BasisElement::z(1, 1, 1), BasisElement::a(1), BasisElement::Unit];
            let mut imgs: Vec<BasisElement> = images.iter().map(|&i| pool[i]).collect();
            imgs[1] = imgs[0];
            let alt = p.alternate(&[0, 1]).unwrap();
            prop_assert!(alt.evaluate(&Substitution::new(imgs), &model).unwrap().is_empty());
        }

        #[test]
        fn evaluation_is_linear(p in poly_strategy(3), q in poly_strategy(3), c in -4i32..=4) {
            let model = AlgebraModel::build(
                AlgebraParams::new(2, 1, "periodic:0".parse().unwrap()).unwrap(),
                Flavor::Windowed { depth: 3 },
            )
            .unwrap()
            .adjoin_unit()
            .unwrap();
            let c = Rational::from(c);
            let sub = Substitution::new(vec![BasisElement::Unit, BasisElement::z(1, 1, 1), BasisElement::a(1)]);
            let combo = p.add(&q.scale(&c)).unwrap().evaluate(&sub, &model).unwrap();
            let mut expected = p.evaluate(&sub, &model).unwrap();
            for (e, v) in q.evaluate(&sub, &model).unwrap() {
                *expected.entry(e).or_default() += Rational::from(&v * &c);
            }
            expected.retain(|_, v| *v != 0);
            prop_assert_eq!(combo, expected);
        }
    }
}
