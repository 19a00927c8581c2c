use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Largest leaf count representable in the packed encoding.
pub const MAX_LEAVES: usize = 32;

/// A full binary tree with ordered leaves, packed as its preorder node
/// sequence (`1` = internal node, `0` = leaf), most significant bit first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PlanarTree {
    bits: u64,
    len: u8,
}

impl PlanarTree {
    pub const LEAF: PlanarTree = PlanarTree { bits: 0, len: 1 };

    pub fn node(left: PlanarTree, right: PlanarTree) -> PlanarTree {
        let len = 1 + left.len + right.len;
        assert!(len < 64, "tree too large");
        PlanarTree {
            bits: (1u64 << (left.len + right.len)) | (left.bits << right.len) | right.bits,
            len,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.len == 1
    }

    pub fn leaves(&self) -> usize {
        (self.len as usize).div_ceil(2)
    }

    /// Left and right subtrees of an internal node.
    pub fn split(&self) -> Option<(PlanarTree, PlanarTree)> {
        if self.is_leaf() {
            return None;
        }
        let body = self.len - 1;
        // scan the left subtree: it ends once leaves exceed internal nodes
        let mut balance = 0i32;
        let mut left_len = 0u8;
        for pos in (0..body).rev() {
            left_len += 1;
            balance += if (self.bits >> pos) & 1 == 1 { 1 } else { -1 };
            if balance < 0 {
                break;
            }
        }
        let right_len = body - left_len;
        let right = PlanarTree {
            bits: self.bits & ((1u64 << right_len) - 1),
            len: right_len,
        };
        let left = PlanarTree {
            bits: (self.bits >> right_len) & ((1u64 << left_len) - 1),
            len: left_len,
        };
        Some((left, right))
    }

    /// `((x1 x2) x3) ... xn`.
    pub fn left_comb(n: usize) -> PlanarTree {
        assert!((1..=MAX_LEAVES).contains(&n));
        (1..n).fold(PlanarTree::LEAF, |acc, _| PlanarTree::node(acc, PlanarTree::LEAF))
    }

    pub fn is_left_comb(&self) -> bool {
        *self == PlanarTree::left_comb(self.leaves())
    }

    /// All shapes with `n` leaves, in canonical order.
    pub fn all(n: usize) -> Result<Vec<PlanarTree>> {
        if n == 0 || n > MAX_LEAVES {
            return Err(Error::InvalidParams(format!("tree size {n} out of range")));
        }
        let mut by_size: Vec<Vec<PlanarTree>> = vec![Vec::new(), vec![PlanarTree::LEAF]];
        for size in 2..=n {
            let mut trees = Vec::new();
            for left_size in 1..size {
                for &l in &by_size[left_size] {
                    for &r in &by_size[size - left_size] {
                        trees.push(PlanarTree::node(l, r));
                    }
                }
            }
            by_size.push(trees);
        }
        Ok(by_size.swap_remove(n))
    }

    /// Evaluate with leaf values supplied in left-to-right order; `None` absorbs.
    pub fn evaluate<T: Copy>(
        &self,
        leaf: &mut impl FnMut(usize) -> Option<T>,
        mul: &impl Fn(T, T) -> Option<T>,
    ) -> Option<T> {
        let mut pos = self.len;
        let mut next_leaf = 0;
        self.eval_from(&mut pos, &mut next_leaf, leaf, mul)
    }

    fn eval_from<T: Copy>(
        &self,
        pos: &mut u8,
        next_leaf: &mut usize,
        leaf: &mut impl FnMut(usize) -> Option<T>,
        mul: &impl Fn(T, T) -> Option<T>,
    ) -> Option<T> {
        *pos -= 1;
        if (self.bits >> *pos) & 1 == 0 {
            let v = leaf(*next_leaf);
            *next_leaf += 1;
            return v;
        }
        let l = self.eval_from(pos, next_leaf, leaf, mul);
        let r = self.eval_from(pos, next_leaf, leaf, mul);
        mul(l?, r?)
    }

    /// Nested-pair rendering with the given leaf labels, e.g. `((1,2),3)`.
    pub fn render(&self, labels: &[String]) -> String {
        let mut out = String::new();
        let mut next = 0;
        self.render_into(labels, &mut next, &mut out);
        out
    }

    fn render_into(&self, labels: &[String], next: &mut usize, out: &mut String) {
        match self.split() {
            None => {
                out.push_str(&labels[*next]);
                *next += 1;
            }
            Some((l, r)) => {
                out.push('(');
                l.render_into(labels, next, out);
                out.push(',');
                r.render_into(labels, next, out);
                out.push(')');
            }
        }
    }

    /// Parses nested-pair notation, returning the shape and the leaf labels.
    pub fn parse(s: &str) -> Result<(PlanarTree, Vec<String>)> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let mut labels = Vec::new();
        let tree = parse_node(&chars, &mut pos, &mut labels)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok((tree, labels))
    }
}

fn parse_node(chars: &[char], pos: &mut usize, labels: &mut Vec<String>) -> Result<PlanarTree> {
    let err = || Error::Parse("malformed tree".to_string());
    if chars.get(*pos) == Some(&'(') {
        *pos += 1;
        let l = parse_node(chars, pos, labels)?;
        (chars.get(*pos) == Some(&',')).then_some(()).ok_or_else(err)?;
        *pos += 1;
        let r = parse_node(chars, pos, labels)?;
        (chars.get(*pos) == Some(&')')).then_some(()).ok_or_else(err)?;
        *pos += 1;
        if l.leaves() + r.leaves() > MAX_LEAVES {
            return Err(Error::Parse("tree too large".into()));
        }
        Ok(PlanarTree::node(l, r))
    } else {
        let start = *pos;
        while *pos < chars.len() && !matches!(chars[*pos], '(' | ',' | ')') {
            *pos += 1;
        }
        if start == *pos {
            return Err(err());
        }
        labels.push(chars[start..*pos].iter().collect());
        Ok(PlanarTree::LEAF)
    }
}

impl Ord for PlanarTree {
    /// `(leaves, left size, left, right)`, recursively.
    fn cmp(&self, other: &Self) -> Ordering {
        self.leaves().cmp(&other.leaves()).then_with(|| {
            match (self.split(), other.split()) {
                (None, None) => Ordering::Equal,
                (Some((l1, r1)), Some((l2, r2))) => l1
                    .leaves()
                    .cmp(&l2.leaves())
                    .then_with(|| l1.cmp(&l2))
                    .then_with(|| r1.cmp(&r2)),
                _ => unreachable!("equal leaf counts"),
            }
        })
    }
}

impl PartialOrd for PlanarTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `Catalan(n) = binom(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}
