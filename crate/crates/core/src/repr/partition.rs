use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer partition `λ_1 >= λ_2 >= ... >= λ_k > 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidParams(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParams(format!("partition {parts:?} is not non-increasing")));
        }
        Ok(Partition { parts })
    }

    /// Drops trailing zeros before validating.
    pub fn from_padded(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// Number of rows `h(λ)`.
    pub fn height(&self) -> usize {
        self.parts.len()
    }

    /// `λ_i` with 1-based `i`; zero past the last row.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        Partition {
            parts: (1..=cols)
                .map(|c| self.parts.iter().filter(|&&p| p >= c).count() as u32)
                .collect(),
        }
    }

    /// Number of standard Young tableaux of shape `λ` (hook-length formula).
    pub fn hook_dimension(&self) -> Integer {
        let conj = self.conjugate();
        let mut hooks = Integer::from(1);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row as usize - j - 1;
                let leg = conj.parts[j] as usize - i - 1;
                hooks *= (arm + leg + 1) as u32;
            }
        }
        Integer::from(Integer::factorial(self.n() as u32)) / hooks
    }

    /// All partitions of `n` in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        Partition::with_max_height(n, n)
    }

    /// Partitions of `n` with at most `h` rows, reverse lexicographic.
    pub fn with_max_height(n: usize, h: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fill(n as u32, n as u32, h, &mut cur, &mut out);
        out
    }

    /// `z_λ = Π i^{k_i} k_i!`, the centralizer order of the cycle type `λ`.
    pub fn centralizer_order(&self) -> Integer {
        let mut z = Integer::from(1);
        let mut i = 0;
        while i < self.parts.len() {
            let part = self.parts[i];
            let mut k = 0u32;
            while i < self.parts.len() && self.parts[i] == part {
                k += 1;
                i += 1;
            }
            z *= Integer::from(part).pow(k);
            z *= Integer::from(Integer::factorial(k));
        }
        z
    }

    /// The diagram obtained by moving one cell from row `i` to row `j > i`
    /// (1-based; `j = h(λ) + 1` opens a new row).
    pub fn push_down(&self, i: usize, j: usize) -> Result<Partition> {
        let h = self.height();
        if i == 0 || i >= j || i > h || j > h + 1 {
            return Err(Error::InvalidMove(format!(
                "rows ({i}, {j}) are not a downward move in {self}"
            )));
        }
        let mut parts = self.parts.clone();
        if j == h + 1 {
            parts.push(0);
        }
        parts[i - 1] -= 1;
        parts[j - 1] += 1;
        Partition::new(parts).map_err(|_| {
            Error::InvalidMove(format!("moving a cell from row {i} to row {j} of {self} breaks the shape"))
        })
    }
}

fn fill(rest: u32, max: u32, rows: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    if rows == 0 {
        return;
    }
    for p in (1..=max.min(rest)).rev() {
        cur.push(p);
        fill(rest - p, p, rows - 1, cur, out);
        cur.pop();
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// `3,2,1` or `(3,2,1)`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad part {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// A Young tableau filled with `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    /// Validates that the rows form a standard tableau.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len() as u32).collect())?;
        let n = shape.n();
        let mut seen = vec![false; n + 1];
        for r in &rows {
            for &v in r {
                if v == 0 || v > n || seen[v] {
                    return Err(Error::InvalidParams(format!("bad tableau entry {v}")));
                }
                seen[v] = true;
            }
        }
        let t = Tableau { rows };
        let increasing = t.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]))
            && t.columns().iter().all(|c| c.windows(2).all(|w| w[0] < w[1]));
        if !increasing {
            return Err(Error::InvalidParams("tableau is not standard".into()));
        }
        Ok(t)
    }

    /// Rows filled left to right, top to bottom.
    pub fn row_reading(shape: &Partition) -> Self {
        let mut next = 1;
        let rows = shape
            .parts()
            .iter()
            .map(|&len| {
                let row: Vec<usize> = (next..next + len as usize).collect();
                next += len as usize;
                row
            })
            .collect();
        Tableau { rows }
    }

    pub fn shape(&self) -> Partition {
        Partition {
            parts: self.rows.iter().map(|r| r.len() as u32).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        let width = self.rows.first().map_or(0, Vec::len);
        (0..width)
            .map(|c| self.rows.iter().filter_map(|r| r.get(c).copied()).collect())
            .collect()
    }
}
