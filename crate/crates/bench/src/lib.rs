//! Fixtures shared by the benchmarks.

use codimlab_core::{FlavorKind, ModelDescriptor, WordSpec};

pub fn model(m: u32, d: u32, word: &str, unital: bool) -> ModelDescriptor {
    ModelDescriptor {
        m,
        d,
        word: word.parse::<WordSpec>().expect("valid word"),
        flavor: FlavorKind::Windowed,
        unital,
    }
}

/// Pseudo-random sparse 0/1 rows with a fixed seed.
pub fn sparse_rows(nrows: usize, ncols: usize, per_row: usize) -> Vec<Vec<u32>> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    (0..nrows)
        .map(|_| {
            let mut row: Vec<u32> = (0..per_row)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state % ncols as u64) as u32
                })
                .collect();
            row.sort_unstable();
            row.dedup();
            row
        })
        .collect()
}
