//! Structure-constant models of `A(m,d,w)`, its periodic quotient model
//! `B(m,d,w)` and unital extensions.
//!
//! The basis is `{a_1..a_d, b} ∪ {z^i_{j,k}}` with `1 <= j <= m_k = m + w_k`.
//! The only nonzero products are
//!
//! * `z^i_{j,k} · a_i = z^i_{j+1,k}` for `j < m_k`,
//! * `z^i_{m_k,k} · b = z^{i+1}_{1,k}` for `i < d`, and `z^1_{1,k+1}` for `i = d`,
//!
//! plus the unit axioms in unital models. A windowed model of depth `K` is the
//! quotient by the ideal spanned by `z^i_{j,k}` with `k > K`; a periodic-wrap
//! model identifies `k + T` with `k`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::WordSpec;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraParams {
    pub m: u32,
    pub d: u32,
    pub word: WordSpec,
}

impl AlgebraParams {
    pub fn new(m: u32, d: u32, word: WordSpec) -> Result<Self> {
        let params = AlgebraParams { m, d, word };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::InvalidParams(format!("m = {} must be at least 2", self.m)));
        }
        if self.d < 1 || self.d >= self.m {
            return Err(Error::InvalidParams(format!(
                "d = {} must satisfy 1 <= d <= m - 1 = {}",
                self.d,
                self.m - 1
            )));
        }
        self.word.validate()
    }

    /// `m_k = m + w_k` for `k = 1..=len`.
    pub fn row_lengths(&self, len: usize) -> Result<Vec<u32>> {
        Ok(self
            .word
            .prefix(len)?
            .into_iter()
            .map(|w| self.m + w as u32)
            .collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum BasisElement {
    A { i: u32 },
    B,
    Z { i: u32, j: u32, k: u32 },
    Unit,
}

impl BasisElement {
    pub fn a(i: u32) -> Self {
        BasisElement::A { i }
    }

    pub fn z(i: u32, j: u32, k: u32) -> Self {
        BasisElement::Z { i, j, k }
    }

    pub fn is_z(&self) -> bool {
        matches!(self, BasisElement::Z { .. })
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::A { i } => write!(f, "a{i}"),
            BasisElement::B => write!(f, "b"),
            BasisElement::Z { i, j, k } => write!(f, "z^{i}_{{{j},{k}}}"),
            BasisElement::Unit => write!(f, "1"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlavorKind {
    #[serde(rename = "windowed")]
    Windowed,
    #[serde(rename = "periodic-wrap")]
    PeriodicWrap,
}

impl std::str::FromStr for FlavorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "windowed" => Ok(FlavorKind::Windowed),
            "periodic-wrap" => Ok(FlavorKind::PeriodicWrap),
            other => Err(Error::Parse(format!("unknown flavor {other:?}"))),
        }
    }
}

impl fmt::Display for FlavorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlavorKind::Windowed => "windowed",
            FlavorKind::PeriodicWrap => "periodic-wrap",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Positions `1..=depth`; products leaving the window vanish.
    Windowed { depth: usize },
    /// Positions `1..=period` with `z^d_{m_T,T} · b = z^1_{1,1}`.
    PeriodicWrap { period: usize },
}

impl Flavor {
    pub fn kind(&self) -> FlavorKind {
        match self {
            Flavor::Windowed { .. } => FlavorKind::Windowed,
            Flavor::PeriodicWrap { .. } => FlavorKind::PeriodicWrap,
        }
    }

    pub fn positions(&self) -> usize {
        match *self {
            Flavor::Windowed { depth } => depth,
            Flavor::PeriodicWrap { period } => period,
        }
    }
}

/// A finite multiplication oracle.
#[derive(Clone, Debug)]
pub struct AlgebraModel {
    params: AlgebraParams,
    flavor: Flavor,
    unital: bool,
    row_len: Vec<u32>,
    z_starts: Vec<u32>,
}

impl AlgebraModel {
    pub fn build(params: AlgebraParams, flavor: Flavor) -> Result<Self> {
        params.validate()?;
        match flavor {
            Flavor::Windowed { depth: 0 } => {
                return Err(Error::InvalidParams("window depth must be positive".into()))
            }
            Flavor::PeriodicWrap { period } => match params.word.period() {
                None => {
                    return Err(Error::FlavorMismatch(
                        "periodic-wrap needs a periodic word".into(),
                    ))
                }
                Some(t) if period == 0 || period % t != 0 => {
                    return Err(Error::FlavorMismatch(format!(
                        "wrap length {period} is not a multiple of the period {t}"
                    )))
                }
                _ => {}
            },
            _ => {}
        }
        let positions = flavor.positions();
        let row_len = params.row_lengths(positions)?;
        Ok(AlgebraModel {
            params,
            flavor,
            unital: false,
            row_len,
            z_starts: (1..=positions as u32).collect(),
        })
    }

    /// `B(m,d,w)` with its minimal period.
    pub fn periodic(params: AlgebraParams) -> Result<Self> {
        let period = params.word.period().ok_or_else(|| {
            Error::FlavorMismatch("periodic-wrap needs a periodic word".into())
        })?;
        Self::build(params, Flavor::PeriodicWrap { period })
    }

    /// A windowed model sufficient for degree-`n` evaluations: one start
    /// position per distinct length-`(n+1)` factor of the word.
    pub fn windowed_for_degree(params: AlgebraParams, n: usize) -> Result<Self> {
        params.validate()?;
        let starts: Vec<u32> = params
            .word
            .factors(n + 1)?
            .iter()
            .map(|f| f.start_index as u32)
            .collect();
        let depth = *starts.iter().max().unwrap() as usize + n + 1;
        let mut model = Self::build(params, Flavor::Windowed { depth })?;
        model.z_starts = starts;
        Ok(model)
    }

    pub fn adjoin_unit(&self) -> Result<Self> {
        if self.unital {
            return Err(Error::AlreadyUnital);
        }
        let mut model = self.clone();
        model.unital = true;
        Ok(model)
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    /// `m_k`; positions are 1-based.
    pub fn m_k(&self, k: u32) -> u32 {
        self.row_len[k as usize - 1]
    }

    /// Start positions used for `Z` images in substitutions.
    pub fn z_starts(&self) -> &[u32] {
        &self.z_starts
    }

    /// `Z`-elements at the representative start positions.
    pub fn z_representatives(&self) -> Vec<BasisElement> {
        let d = self.params.d;
        let mut out = Vec::new();
        for &k in &self.z_starts {
            for i in 1..=d {
                for j in 1..=self.m_k(k) {
                    out.push(BasisElement::z(i, j, k));
                }
            }
        }
        out
    }

    /// The non-`Z` basis elements: `a_1..a_d`, `b`, and the unit when present.
    pub fn letters(&self) -> Vec<BasisElement> {
        let mut out: Vec<_> = (1..=self.params.d).map(BasisElement::a).collect();
        out.push(BasisElement::B);
        if self.unital {
            out.push(BasisElement::Unit);
        }
        out
    }

    pub fn basis(&self) -> Vec<BasisElement> {
        let mut out = self.letters();
        let d = self.params.d;
        for k in 1..=self.flavor.positions() as u32 {
            for i in 1..=d {
                for j in 1..=self.m_k(k) {
                    out.push(BasisElement::z(i, j, k));
                }
            }
        }
        out
    }

    pub fn contains(&self, e: &BasisElement) -> bool {
        match *e {
            BasisElement::A { i } => (1..=self.params.d).contains(&i),
            BasisElement::B => true,
            BasisElement::Unit => self.unital,
            BasisElement::Z { i, j, k } => {
                (1..=self.params.d).contains(&i)
                    && (1..=self.flavor.positions() as u32).contains(&k)
                    && (1..=self.m_k(k)).contains(&j)
            }
        }
    }

    /// Product of two basis elements; `None` is zero.
    #[inline]
    pub fn multiply(&self, x: BasisElement, y: BasisElement) -> Option<BasisElement> {
        use BasisElement::*;
        match (x, y) {
            (Unit, y) => Some(y),
            (x, Unit) => Some(x),
            (Z { i, j, k }, A { i: ia }) if ia == i && j < self.m_k(k) => Some(Z { i, j: j + 1, k }),
            (Z { i, j, k }, B) if j == self.m_k(k) => {
                if i < self.params.d {
                    Some(Z { i: i + 1, j: 1, k })
                } else {
                    match self.flavor {
                        Flavor::Windowed { depth } => {
                            ((k as usize) < depth).then_some(Z { i: 1, j: 1, k: k + 1 })
                        }
                        Flavor::PeriodicWrap { period } => Some(Z {
                            i: 1,
                            j: 1,
                            k: if k as usize == period { 1 } else { k + 1 },
                        }),
                    }
                }
            }
            _ => None,
        }
    }

    /// `(...((start · t_1) · t_2) ... · t_r)`.
    pub fn left_normed_eval(&self, start: BasisElement, tail: &[BasisElement]) -> Option<BasisElement> {
        tail.iter()
            .try_fold(start, |acc, &t| self.multiply(acc, t))
    }

    /// Exhaustive check of `x(yz) = 0` over basis triples.
    pub fn verify_left_annihilator_identity(&self) -> bool {
        let basis = self.basis();
        let products: BTreeSet<BasisElement> = basis
            .iter()
            .flat_map(|&y| basis.iter().filter_map(move |&z| self.multiply(y, z)))
            .collect();
        products
            .iter()
            .all(|&yz| basis.iter().all(|&x| self.multiply(x, yz).is_none()))
    }

    /// The `Z`-span is an ideal with zero multiplication.
    pub fn verify_z_ideal(&self) -> bool {
        let basis = self.basis();
        basis.iter().filter(|e| e.is_z()).all(|&z| {
            basis.iter().all(|&x| {
                let left = self.multiply(x, z);
                let right = self.multiply(z, x);
                let in_z = |p: Option<BasisElement>| p.map_or(true, |e| e.is_z());
                in_z(left) && in_z(right) && (!x.is_z() || (left.is_none() && right.is_none()))
            })
        })
    }

    pub fn descriptor(&self) -> ModelDescriptor {
        ModelDescriptor {
            m: self.params.m,
            d: self.params.d,
            word: self.params.word.clone(),
            flavor: self.flavor.kind(),
            unital: self.unital,
        }
    }
}

/// Serializable description of a model family, independent of degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub m: u32,
    pub d: u32,
    pub word: WordSpec,
    #[serde(default = "default_flavor")]
    pub flavor: FlavorKind,
    #[serde(default)]
    pub unital: bool,
}

fn default_flavor() -> FlavorKind {
    FlavorKind::Windowed
}

impl ModelDescriptor {
    pub fn params(&self) -> Result<AlgebraParams> {
        AlgebraParams::new(self.m, self.d, self.word.clone())
    }

    /// The model used for degree-`n` computations.
    pub fn build_for_degree(&self, n: usize) -> Result<AlgebraModel> {
        let params = self.params()?;
        let model = match self.flavor {
            FlavorKind::Windowed => AlgebraModel::windowed_for_degree(params, n)?,
            FlavorKind::PeriodicWrap => AlgebraModel::periodic(params)?,
        };
        if self.unital {
            model.adjoin_unit()
        } else {
            Ok(model)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BasisElement::*;

    fn params(m: u32, d: u32, word: &str) -> AlgebraParams {
        AlgebraParams::new(m, d, word.parse().unwrap()).unwrap()
    }

    fn a210(depth: usize) -> AlgebraModel {
        AlgebraModel::build(params(2, 1, "periodic:0"), Flavor::Windowed { depth }).unwrap()
    }

    #[test]
    fn multiplication_table() {
        let a = a210(4);
        assert_eq!(a.multiply(BasisElement::z(1, 1, 1), BasisElement::a(1)), Some(BasisElement::z(1, 2, 1)));
        assert_eq!(a.multiply(BasisElement::a(1), BasisElement::a(1)), None);
        assert_eq!(a.multiply(BasisElement::z(1, 2, 1), BasisElement::a(1)), None);
        assert_eq!(a.multiply(BasisElement::z(1, 2, 1), B), Some(BasisElement::z(1, 1, 2)));
        assert_eq!(a.multiply(BasisElement::z(1, 1, 1), B), None);
        assert_eq!(a.multiply(B, BasisElement::z(1, 1, 1)), None);
    }

    #[test]
    fn b_steps_through_blocks() {
        let a = AlgebraModel::build(params(3, 2, "periodic:0"), Flavor::Windowed { depth: 3 }).unwrap();
        assert_eq!(a.multiply(BasisElement::z(1, 3, 1), B), Some(BasisElement::z(2, 1, 1)));
        assert_eq!(a.multiply(BasisElement::z(2, 3, 1), B), Some(BasisElement::z(1, 1, 2)));
        assert_eq!(a.multiply(BasisElement::z(1, 1, 1), BasisElement::a(2)), None);
        assert_eq!(a.multiply(BasisElement::z(2, 3, 3), B), None);
    }

    #[test]
    fn row_lengths_follow_word() {
        let a = AlgebraModel::build(params(2, 1, "periodic:01"), Flavor::Windowed { depth: 4 }).unwrap();
        assert_eq!((1..=4).map(|k| a.m_k(k)).collect::<Vec<_>>(), vec![2, 3, 2, 3]);
        assert!(a.contains(&BasisElement::z(1, 3, 2)));
        assert!(!a.contains(&BasisElement::z(1, 3, 1)));
        assert!(!a.contains(&Unit));
    }

    #[test]
    fn periodic_wrap() {
        let b = AlgebraModel::periodic(params(2, 1, "periodic:0")).unwrap();
        assert_eq!(b.multiply(BasisElement::z(1, 2, 1), B), Some(BasisElement::z(1, 1, 1)));
        let b2 = AlgebraModel::periodic(params(2, 1, "periodic:01")).unwrap();
        assert_eq!(b2.multiply(BasisElement::z(1, 2, 1), B), Some(BasisElement::z(1, 1, 2)));
        assert_eq!(b2.multiply(BasisElement::z(1, 3, 2), B), Some(BasisElement::z(1, 1, 1)));
    }

    #[test]
    fn flavor_errors() {
        let sturm = AlgebraParams::new(2, 1, WordSpec::fibonacci(10)).unwrap();
        assert!(matches!(
            AlgebraModel::periodic(sturm.clone()),
            Err(Error::FlavorMismatch(_))
        ));
        assert!(matches!(
            AlgebraModel::build(sturm, Flavor::Windowed { depth: 0 }),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            AlgebraModel::build(params(2, 1, "periodic:01"), Flavor::PeriodicWrap { period: 3 }),
            Err(Error::FlavorMismatch(_))
        ));
    }

    #[test]
    fn invalid_params() {
        let w = WordSpec::periodic("0").unwrap();
        assert!(matches!(AlgebraParams::new(1, 1, w.clone()), Err(Error::InvalidParams(_))));
        assert!(matches!(AlgebraParams::new(3, 3, w.clone()), Err(Error::InvalidParams(_))));
        assert!(matches!(AlgebraParams::new(3, 0, w), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn unit() {
        let a = a210(3).adjoin_unit().unwrap();
        assert_eq!(a.multiply(Unit, BasisElement::z(1, 1, 1)), Some(BasisElement::z(1, 1, 1)));
        assert_eq!(a.multiply(Unit, Unit), Some(Unit));
        assert_eq!(a.multiply(BasisElement::z(1, 1, 1), BasisElement::a(2)), None);
        assert_eq!(a.adjoin_unit().unwrap_err(), Error::AlreadyUnital);
    }

    #[test]
    fn left_normed() {
        let a = a210(4);
        let z = BasisElement::z(1, 1, 1);
        assert_eq!(a.left_normed_eval(z, &[BasisElement::a(1), B]), Some(BasisElement::z(1, 1, 2)));
        assert_eq!(a.left_normed_eval(z, &[]), Some(z));
        assert_eq!(a.left_normed_eval(z, &[B]), None);
    }

    #[test]
    fn left_annihilator_identity() {
        assert!(AlgebraModel::periodic(params(2, 1, "periodic:0"))
            .unwrap()
            .verify_left_annihilator_identity());
        let a32 = AlgebraModel::build(params(3, 2, "periodic:0"), Flavor::Windowed { depth: 4 }).unwrap();
        assert!(a32.verify_left_annihilator_identity());
        assert!(!a210(3).adjoin_unit().unwrap().verify_left_annihilator_identity());
    }

    #[test]
    fn z_span_is_square_zero_ideal() {
        assert!(a210(3).verify_z_ideal());
        assert!(AlgebraModel::periodic(params(3, 2, "periodic:011")).unwrap().verify_z_ideal());
    }

    #[test]
    fn windowed_for_degree_uses_window_representatives() {
        let m = AlgebraModel::windowed_for_degree(params(2, 1, "periodic:0"), 4).unwrap();
        assert_eq!(m.z_starts(), &[1]);
        assert_eq!(m.z_representatives().len(), 2);
        let p = AlgebraModel::windowed_for_degree(params(2, 1, "periodic:01"), 3).unwrap();
        assert_eq!(p.z_starts(), &[1, 2]);
        let f = AlgebraModel::windowed_for_degree(AlgebraParams::new(2, 1, WordSpec::fibonacci(25)).unwrap(), 3)
            .unwrap();
        assert_eq!(f.z_starts().len(), 5);
    }

    #[test]
    fn descriptor_json() {
        let json = r#"{"m":2,"d":1,"word":{"kind":"periodic","pattern":"01"},"flavor":"periodic-wrap","unital":true}"#;
        let desc: ModelDescriptor = serde_json::from_str(json).unwrap();
        assert_eq!(desc.flavor, FlavorKind::PeriodicWrap);
        let model = desc.build_for_degree(3).unwrap();
        assert!(model.is_unital());
        assert_eq!(model.descriptor(), desc);
        assert_eq!(serde_json::to_string(&desc).unwrap(), json);
    }
}
