use super::Partition;
use crate::error::{Error, Result};

/// Largest degree accepted by [`character_value`].
pub const CHARACTER_CAP: usize = 12;

/// `χ_λ(μ)` by the Murnaghan–Nakayama rule, with `μ` a cycle type.
///
/// Rim hooks are removed on the beta-set (first-column hook lengths): a
/// hook of length `r` moves a bead from `β` to `β - r`, with sign given by the
/// parity of the beads jumped over.
pub fn character_value(lambda: &Partition, cycle_type: &Partition) -> Result<i64> {
    let n = lambda.n();
    if n != cycle_type.n() {
        return Err(Error::DegreeMismatch {
            expected: n,
            got: cycle_type.n(),
        });
    }
    if n > CHARACTER_CAP {
        return Err(Error::CapExceeded {
            what: "character degree",
            requested: n,
            cap: CHARACTER_CAP,
        });
    }
    let k = lambda.height();
    let mut beads: Vec<u32> = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (k - 1 - i) as u32)
        .collect();
    Ok(mn(&mut beads, cycle_type.parts()))
}

fn mn(beads: &mut Vec<u32>, rest: &[u32]) -> i64 {
    let Some((&r, tail)) = rest.split_first() else {
        return 1;
    };
    let mut total = 0;
    for idx in 0..beads.len() {
        let b = beads[idx];
        if b < r || beads.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let jumped = beads.iter().filter(|&&x| x > target && x < b).count();
        beads[idx] = target;
        let v = mn(beads, tail);
        beads[idx] = b;
        total += if jumped % 2 == 0 { v } else { -v };
    }
    total
}
