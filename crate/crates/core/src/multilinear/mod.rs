//! Multilinear nonassociative monomials and polynomials.
//!
//! A monomial of degree `n` is a planar binary tree with `n` leaves whose
//! leaves carry the variables `x_1..x_n` once each. Variables are stored
//! 0-based: leaf `p` carries `x_{vars[p] + 1}`.

mod perm;
mod polynomial;
mod tree;
pub mod witness;

use std::fmt;

use itertools::Itertools;

pub use perm::Permutation;
pub use polynomial::Polynomial;
pub use tree::{catalan, PlanarTree, MAX_LEAVES};

use crate::algebra::{AlgebraModel, BasisElement};
use crate::error::{Error, Result};

/// Default degree cap for all tree shapes.
pub const FULL_CAP: usize = 7;
/// Default degree cap for left-normed monomials.
pub const LEFT_NORMED_CAP: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisShape {
    Full,
    LeftNormed,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub tree: PlanarTree,
    pub vars: Vec<u8>,
}

impl Monomial {
    pub fn new(tree: PlanarTree, vars: Vec<u8>) -> Result<Self> {
        if tree.leaves() != vars.len() {
            return Err(Error::DegreeMismatch {
                expected: tree.leaves(),
                got: vars.len(),
            });
        }
        Permutation::from_images(vars.clone())?;
        Ok(Monomial { tree, vars })
    }

    /// `((x_{v1} x_{v2}) ...) x_{vn}` with 0-based labels.
    pub fn left_normed(vars: Vec<u8>) -> Self {
        Monomial {
            tree: PlanarTree::left_comb(vars.len()),
            vars,
        }
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn is_left_normed(&self) -> bool {
        self.tree.is_left_comb()
    }

    /// `σ · m`: every `x_i` is replaced by `x_{σ(i)}`.
    pub fn act(&self, sigma: &Permutation) -> Monomial {
        Monomial {
            tree: self.tree,
            vars: self.vars.iter().map(|&v| sigma.apply(v as usize) as u8).collect(),
        }
    }

    /// Parses `((1,2),3)` notation with 1-based labels.
    pub fn parse(s: &str) -> Result<Self> {
        let (tree, labels) = PlanarTree::parse(s)?;
        let vars = labels
            .iter()
            .map(|l| match l.trim_start_matches('x').parse::<u8>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::Parse(format!("bad variable label {l:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Monomial::new(tree, vars)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.vars.iter().map(|v| (v + 1).to_string()).collect();
        f.write_str(&self.tree.render(&labels))
    }
}

/// Images of `x_1, ..., x_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    pub images: Vec<BasisElement>,
}

impl Substitution {
    pub fn new(images: Vec<BasisElement>) -> Self {
        Substitution { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

fn check_cap(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("degree must be positive".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded {
            what,
            requested: n,
            cap,
        });
    }
    Ok(())
}

/// The canonical basis of `P_n`: trees in canonical order, then permutations
/// in lexicographic order.
pub fn monomial_basis(n: usize, shape: BasisShape) -> Result<Vec<Monomial>> {
    let cap = match shape {
        BasisShape::Full => FULL_CAP,
        BasisShape::LeftNormed => LEFT_NORMED_CAP,
    };
    monomial_basis_capped(n, shape, cap)
}

pub fn monomial_basis_capped(n: usize, shape: BasisShape, cap: usize) -> Result<Vec<Monomial>> {
    check_cap(n, cap.min(MAX_LEAVES), "monomial basis degree")?;
    let trees = match shape {
        BasisShape::Full => PlanarTree::all(n)?,
        BasisShape::LeftNormed => vec![PlanarTree::left_comb(n)],
    };
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    Ok(trees
        .iter()
        .flat_map(|&tree| {
            perms.iter().map(move |p| Monomial {
                tree,
                vars: p.images().to_vec(),
            })
        })
        .collect())
}

/// `dim P_n = n! · Catalan(n-1)`.
pub fn free_dimension(n: usize) -> u128 {
    (1..=n as u128).product::<u128>() * catalan(n.saturating_sub(1))
}

/// Value of a monomial under a substitution; `None` is zero.
pub fn evaluate(mono: &Monomial, sub: &Substitution, model: &AlgebraModel) -> Option<BasisElement> {
    let img = |p: usize| sub.images[mono.vars[p] as usize];
    if mono.tree.is_left_comb() {
        let mut acc = img(0);
        for p in 1..mono.vars.len() {
            acc = model.multiply(acc, img(p))?;
        }
        Some(acc)
    } else {
        mono.tree
            .evaluate(&mut |p| Some(img(p)), &|x, y| model.multiply(x, y))
    }
}

/// Substitutions that can give nonzero values: exactly one `Z` image (at a
/// representative start position), all other images letters. For `n = 1`
/// every basis representative is used.
pub fn relevant_substitutions(n: usize, model: &AlgebraModel) -> Vec<Substitution> {
    let zs = model.z_representatives();
    let letters = model.letters();
    if n == 1 {
        return zs
            .iter()
            .chain(letters.iter())
            .map(|&e| Substitution::new(vec![e]))
            .collect();
    }
    let tails: Vec<Vec<BasisElement>> = (0..n - 1)
        .map(|_| letters.iter().copied())
        .multi_cartesian_product()
        .collect();
    let mut out = Vec::with_capacity(n * zs.len() * tails.len());
    for pos in 0..n {
        for &z in &zs {
            for tail in &tails {
                let mut images = Vec::with_capacity(n);
                images.extend_from_slice(&tail[..pos]);
                images.push(z);
                images.extend_from_slice(&tail[pos..]);
                out.push(Substitution::new(images));
            }
        }
    }
    out
}
