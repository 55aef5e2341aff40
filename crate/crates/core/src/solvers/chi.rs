//! Dichromatic number: fewest transitive classes covering the tournament.

use serde::{Deserialize, Serialize};

use super::{Mode, SolverConfig};
use crate::error::{Error, Result};
use crate::tournament::Tournament;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DicolouringCertificate {
    pub schema: u32,
    /// Number of classes; an upper bound unless `mode` is exact.
    pub value: usize,
    pub lower: usize,
    /// Each class sorted, classes ordered by their least vertex.
    pub classes: Vec<Vec<usize>>,
    pub mode: Mode,
    pub nodes_expanded: u64,
}

impl DicolouringCertificate {
    pub fn is_exact(&self) -> bool {
        self.mode == Mode::Exact
    }
}

/// Adding `v` to the transitive class `c` keeps it transitive iff no
/// `u in c ∩ N⁺(v)` beats some `w in c ∩ N⁻(v)` (which would close u→w→v→u).
fn can_join(out: &[u64], inn: &[u64], class: u64, v: usize) -> bool {
    let mut ahead = class & out[v];
    let behind = class & inn[v];
    if behind == 0 {
        return true;
    }
    while ahead != 0 {
        let u = ahead.trailing_zeros() as usize;
        ahead &= ahead - 1;
        if out[u] & behind != 0 {
            return false;
        }
    }
    true
}

struct Colour<'a> {
    out: &'a [u64],
    inn: Vec<u64>,
    n: usize,
    k: usize,
    classes: Vec<u64>,
    nodes: u64,
    budget: Option<u64>,
    exhausted: bool,
}

impl Colour<'_> {
    fn search(&mut self, v: usize) -> bool {
        if v == self.n {
            return true;
        }
        let used = self.classes.len();
        for c in 0..=used.min(self.k - 1) {
            if c < used && !can_join(self.out, &self.inn, self.classes[c], v) {
                continue;
            }
            self.nodes += 1;
            if self.budget.is_some_and(|b| self.nodes > b) {
                self.exhausted = true;
                return false;
            }
            if c == used {
                self.classes.push(1 << v);
            } else {
                self.classes[c] |= 1 << v;
            }
            if self.search(v + 1) {
                return true;
            }
            if c == used {
                self.classes.pop();
            } else {
                self.classes[c] &= !(1 << v);
            }
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

fn greedy(out: &[u64], inn: &[u64], n: usize) -> Vec<u64> {
    let mut classes: Vec<u64> = Vec::new();
    for v in 0..n {
        match classes.iter().position(|&c| can_join(out, inn, c, v)) {
            Some(c) => classes[c] |= 1 << v,
            None => classes.push(1 << v),
        }
    }
    classes
}

fn unpack(classes: &[u64]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = classes
        .iter()
        .map(|&m| (0..64).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

/// Exact dichromatic number of a mask tournament on `0..n`, `n <= 64`.
pub(crate) fn chi_mask(out: &[u64], n: usize, budget: Option<u64>) -> DicolouringCertificate {
    let mut inn = vec![0u64; n];
    for v in 0..n {
        for w in 0..n {
            if out[v] >> w & 1 == 1 {
                inn[w] |= 1 << v;
            }
        }
    }
    let upper_classes = greedy(out, &inn, n);
    let upper = upper_classes.len();
    let lower = match n {
        0 => 0,
        _ => 1,
    };
    let mut nodes = 0;
    for k in lower..=upper {
        if k == 0 {
            break;
        }
        let mut s = Colour {
            out,
            inn: inn.clone(),
            n,
            k,
            classes: Vec::new(),
            nodes,
            budget,
            exhausted: false,
        };
        let found = s.search(0);
        nodes = s.nodes;
        if found {
            return DicolouringCertificate {
                schema: 1,
                value: k,
                lower: k,
                classes: unpack(&s.classes),
                mode: Mode::Exact,
                nodes_expanded: nodes,
            };
        }
        if s.exhausted {
            return DicolouringCertificate {
                schema: 1,
                value: upper,
                lower: k,
                classes: unpack(&upper_classes),
                mode: Mode::Exceeded,
                nodes_expanded: nodes,
            };
        }
    }
    DicolouringCertificate {
        schema: 1,
        value: 0,
        lower: 0,
        classes: vec![],
        mode: Mode::Exact,
        nodes_expanded: nodes,
    }
}

/// Dichromatic number with an optimal partition into transitive classes.
pub fn chi_dir(t: &Tournament, config: &SolverConfig) -> Result<DicolouringCertificate> {
    let limit = config.chi_limit.min(64);
    if t.n() > limit {
        return Err(Error::SizeLimit {
            what: "exact dichromatic number",
            size: t.n(),
            limit,
        });
    }
    Ok(chi_mask(&t.out_masks(), t.n(), config.budget))
}
