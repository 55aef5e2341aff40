//! Canonical codes for small tournaments by partition refinement and
//! exhaustive individualization.

use crate::error::{Error, Result};
use crate::tournament::Tournament;

/// Largest vertex count accepted by [`canonical_code`].
pub const MAX_CANON_N: usize = 16;

type Partition = Vec<Vec<usize>>;

/// Splits cells by out-degree profile against every cell until stable.
fn refine(t: &Tournament, mut cells: Partition) -> Partition {
    loop {
        let mut cell_of = vec![0usize; t.n()];
        for (ci, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = ci;
            }
        }
        let mut next: Partition = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut prof = vec![0usize; cells.len()];
                    for w in t.out_neighbours(v) {
                        prof[cell_of[w]] += 1;
                    }
                    (prof, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn leaf_code(t: &Tournament, order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut bytes = vec![n as u8];
    let mut acc = 0u8;
    let mut used = 0;
    for i in 0..n {
        for j in i + 1..n {
            acc = (acc << 1) | t.arc(order[i], order[j]) as u8;
            used += 1;
            if used == 8 {
                bytes.push(acc);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        bytes.push(acc << (8 - used));
    }
    bytes
}

fn search(t: &Tournament, cells: Partition, best: &mut Option<(Vec<u8>, Vec<usize>)>) {
    let cells = refine(t, cells);
    let target = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i);
    match target {
        None => {
            let order: Vec<usize> = cells.into_iter().flatten().collect();
            let code = leaf_code(t, &order);
            if best.as_ref().is_none_or(|(b, _)| code > *b) {
                *best = Some((code, order));
            }
        }
        Some(ci) => {
            for &v in &cells[ci] {
                let mut next = cells[..ci].to_vec();
                next.push(vec![v]);
                next.push(cells[ci].iter().copied().filter(|&w| w != v).collect());
                next.extend_from_slice(&cells[ci + 1..]);
                search(t, next, best);
            }
        }
    }
}

/// Canonical code together with a canonical ordering: listing the vertices of
/// `t` in that order yields the same tournament for every isomorphic copy.
pub fn canonical_form(t: &Tournament) -> Result<(Vec<u8>, Vec<usize>)> {
    if t.n() > MAX_CANON_N {
        return Err(Error::SizeLimit {
            what: "canonical code",
            size: t.n(),
            limit: MAX_CANON_N,
        });
    }
    if t.n() == 0 {
        return Ok((vec![0], vec![]));
    }
    let mut best = None;
    search(t, vec![(0..t.n()).collect()], &mut best);
    Ok(best.expect("non-empty search space"))
}

/// Byte string equal for two tournaments iff they are isomorphic. Exact for
/// up to [`MAX_CANON_N`] vertices.
pub fn canonical_code(t: &Tournament) -> Result<Vec<u8>> {
    canonical_form(t).map(|(c, _)| c)
}

pub fn code_hex(t: &Tournament) -> Result<String> {
    canonical_code(t).map(hex::encode)
}
