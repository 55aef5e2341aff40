//! Constructive steps producing bag-chains: vertices rich in both
//! directions, growing a copy of a pattern while keeping every atom rich,
//! turning a half-bag-chain into a two-bag chain (or a `D_n`), and the
//! three-level doubling to a chain of length 8.

use serde::{Deserialize, Serialize};

use super::{all_hold, first_failure, rich_sets_contain, verify_bag_chain, BagChain, ChainReport, Evaluator, HypothesisCheck, Policy};
use crate::bitset::VertexSet;
use crate::bounds::{self, certainly_ge, certainly_gt, BoundExpr, Value};
use crate::constructions::{self, Family};
use crate::containment::{contains_copy_within, verify_embedding};
use crate::error::{Error, Result};
use crate::tournament::Tournament;

/// Vertices of `within` whose in- and out-neighbourhoods inside `within`
/// both have clique number at least `b`.
pub fn bidirectional_rich_within(eval: &mut Evaluator, within: &VertexSet, b: usize) -> Result<VertexSet> {
    let t = eval.tournament();
    let mut out = VertexSet::new(t.n());
    for v in within.iter() {
        if eval.omega(&t.out_neighbours(v).intersection(within))? >= b
            && eval.omega(&t.in_neighbours(v).intersection(within))? >= b
        {
            out.insert(v);
        }
    }
    Ok(out)
}

pub fn bidirectional_rich(eval: &mut Evaluator, b: usize) -> Result<VertexSet> {
    let all = eval.tournament().vertices();
    bidirectional_rich_within(eval, &all, b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    /// `pattern[i]` is whether members beat the `(i+1)`-th chosen vertex.
    pub pattern: Vec<bool>,
    pub members: VertexSet,
    pub omega: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomGrowth {
    /// Length of the longest prefix found.
    pub k: usize,
    pub vertices: Vec<usize>,
    /// The `2^k` atoms of `vertices`, indexed by pattern read as binary
    /// (bit `i` for the `(i+1)`-th vertex).
    pub atoms: Vec<Atom>,
    /// A full copy of the pattern when `k >= |Q| - 1` allowed completing it.
    pub embedding: Option<Vec<usize>>,
    /// The search budget ran out; `k` is then only a lower bound.
    pub exhausted: bool,
    pub nodes: u64,
}

fn mask_set(n: usize, mask: u64) -> VertexSet {
    VertexSet::from_mask(n, mask)
}

fn pattern_bits(bits: usize, len: usize) -> Vec<bool> {
    (0..len).map(|i| bits >> i & 1 == 1).collect()
}

struct Grower<'e, 'a> {
    eval: &'e mut Evaluator<'a>,
    out: Vec<u64>,
    q: &'e Tournament,
    thresholds: &'e [usize],
    budget: Option<u64>,
    nodes: u64,
    exhausted: bool,
    best: (Vec<usize>, Vec<u64>, Vec<usize>),
    embedding: Option<Vec<usize>>,
}

impl Grower<'_, '_> {
    /// Pattern of `q_{i+1}` against `q_1..q_i`, as an atom index.
    fn pattern_of(&self, i: usize) -> usize {
        (0..i).filter(|&j| self.q.arc(i, j)).fold(0, |acc, j| acc | 1 << j)
    }

    fn done(&self) -> bool {
        self.embedding.is_some() || self.exhausted
    }

    fn dfs(&mut self, prefix: &mut Vec<usize>, atoms: &[u64], omegas: &[usize]) -> Result<()> {
        let i = prefix.len();
        let t = self.q.n();
        if i > self.best.0.len() || (i == 0 && self.best.1.is_empty()) {
            self.best = (prefix.clone(), atoms.to_vec(), omegas.to_vec());
            if i == t {
                self.embedding = Some(prefix.clone());
            } else if i + 1 == t && i > 0 {
                let x = atoms[self.pattern_of(i)];
                if x != 0 {
                    let mut full = prefix.clone();
                    full.push(x.trailing_zeros() as usize);
                    self.embedding = Some(full);
                }
            }
        }
        if i == t || self.done() {
            return Ok(());
        }
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.exhausted = true;
            return Ok(());
        }
        // Atoms only shrink as the prefix grows, so the weakest atom caps the
        // depth any extension can reach.
        let weakest = omegas.iter().copied().min().unwrap_or(0);
        let mut reach = i;
        while reach < t && self.thresholds[reach] <= weakest {
            reach += 1;
        }
        if reach <= self.best.0.len() {
            return Ok(());
        }
        let need = self.thresholds[i];
        let mut cand = atoms[self.pattern_of(i)];
        while cand != 0 && !self.done() {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let mut next = Vec::with_capacity(atoms.len() * 2);
            let mut next_w = Vec::with_capacity(atoms.len() * 2);
            let beaten_by_v = self.out[v];
            let mut ok = true;
            // Index p (x does not beat v) then p | 1 << i (x beats v).
            let mut split = vec![0u64; atoms.len() * 2];
            for (p, &a) in atoms.iter().enumerate() {
                let a = a & !(1 << v);
                split[p] = a & beaten_by_v;
                split[p | 1 << i] = a & !beaten_by_v;
            }
            for s in split {
                let w = self.eval.omega_mask(s)?;
                if w < need {
                    ok = false;
                    break;
                }
                next.push(s);
                next_w.push(w);
            }
            if ok {
                prefix.push(v);
                self.dfs(prefix, &next, &next_w)?;
                prefix.pop();
            }
        }
        Ok(())
    }
}

/// Grows `v_1, v_2, …` realizing `Q[q_1..q_i]` (pattern vertices in id
/// order) inside `within`, keeping every atom `X_b` (the vertices outside the
/// prefix whose out-neighbourhood in the prefix is `b`) at clique number at
/// least `thresholds[i-1]`. Returns the largest such `i` found by an
/// exhaustive depth-first search, the lexicographically least prefix
/// attaining it, and its atoms.
pub fn grow_copy_atoms_within(
    eval: &mut Evaluator,
    within: &VertexSet,
    q: &Tournament,
    thresholds: &[usize],
    budget: Option<u64>,
) -> Result<AtomGrowth> {
    let t = eval.tournament();
    if thresholds.len() != q.n() {
        return Err(Error::InvalidArgument(format!(
            "{} thresholds for a pattern on {} vertices",
            thresholds.len(),
            q.n()
        )));
    }
    if q.n() > 20 {
        return Err(Error::SizeLimit {
            what: "atom growing pattern",
            size: q.n(),
            limit: 20,
        });
    }
    let n = t.n();
    let root = within.mask();
    let root_w = eval.omega_mask(root)?;
    let mut g = Grower {
        out: t.out_masks(),
        eval,
        q,
        thresholds,
        budget,
        nodes: 0,
        exhausted: false,
        best: (vec![], vec![], vec![]),
        embedding: None,
    };
    g.dfs(&mut Vec::new(), &[root], &[root_w])?;
    let (vertices, masks, omegas) = g.best;
    let k = vertices.len();
    if let Some(map) = &g.embedding {
        if !verify_embedding(t, q, map) {
            return Err(Error::Consistency("grown copy does not verify".into()));
        }
    }
    Ok(AtomGrowth {
        k,
        atoms: masks
            .iter()
            .zip(&omegas)
            .enumerate()
            .map(|(p, (&m, &w))| Atom {
                pattern: pattern_bits(p, k),
                members: mask_set(n, m),
                omega: w,
            })
            .collect(),
        vertices,
        embedding: g.embedding,
        exhausted: g.exhausted,
        nodes: g.nodes,
    })
}

pub fn grow_copy_atoms(
    eval: &mut Evaluator,
    q: &Tournament,
    thresholds: &[usize],
    budget: Option<u64>,
) -> Result<AtomGrowth> {
    let all = eval.tournament().vertices();
    grow_copy_atoms_within(eval, &all, q, thresholds, budget)
}

/// Which neighbourhood of the members of `A` is thin inside `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `ω⃗(N⁻(v) ∩ B) < x` for every `v ∈ A`: `A` precedes `B`.
    In,
    /// `ω⃗(N⁺(v) ∩ B) < x` for every `v ∈ A`: `B` precedes `A`.
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignedClass {
    pub side: Side,
    pub pattern: Vec<bool>,
    pub members: VertexSet,
    pub omega: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfBagPair {
    pub a: VertexSet,
    pub b: VertexSet,
    pub x: usize,
    pub side: Side,
    /// Vertices of the extending atom rich in both directions inside it.
    pub b_star: VertexSet,
    pub classes: Vec<AssignedClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum HalfBagOutcome {
    BelowThreshold { detail: String },
    Embedding { map: Vec<usize> },
    Pair(HalfBagPair),
    Inconclusive { detail: String },
}

/// From a maximal atom growth, the pair `(A, B)` with every member of `A`
/// thin on one side into `B`: `A` is the largest class of rich vertices of
/// the extending atom, grouped by the first atom they fail to split.
pub fn half_bag_chain(
    eval: &mut Evaluator,
    within: &VertexSet,
    q: &Tournament,
    thresholds: &[usize],
    budget: Option<u64>,
) -> Result<(AtomGrowth, HalfBagOutcome)> {
    let growth = grow_copy_atoms_within(eval, within, q, thresholds, budget)?;
    let t = eval.tournament();
    let k = growth.k;
    if let Some(map) = &growth.embedding {
        let map = map.clone();
        return Ok((growth, HalfBagOutcome::Embedding { map }));
    }
    if growth.exhausted {
        return Ok((growth, HalfBagOutcome::Inconclusive { detail: "atom search budget exhausted".into() }));
    }
    if k == 0 {
        let detail = format!("no vertex keeps both atoms at clique number >= {}", thresholds[0]);
        return Ok((growth, HalfBagOutcome::BelowThreshold { detail }));
    }
    if k >= q.n() {
        return Err(Error::Consistency("full prefix without embedding".into()));
    }
    let x = thresholds[k];
    let b_star_idx = (0..k).filter(|&j| q.arc(k, j)).fold(0usize, |acc, j| acc | 1 << j);
    let ext = growth.atoms[b_star_idx].members.clone();
    let b_star = bidirectional_rich_within(eval, &ext, x)?;
    let n = t.n();
    let slots = growth.atoms.len() * 2;
    let mut classes: Vec<VertexSet> = vec![VertexSet::new(n); slots];
    for v in b_star.iter() {
        let mut placed = false;
        'pairs: for (b, atom) in growth.atoms.iter().enumerate() {
            for (si, side) in [t.in_neighbours(v), t.out_neighbours(v)].into_iter().enumerate() {
                if eval.omega(&atom.members.intersection(side))? < x {
                    classes[2 * b + si].insert(v);
                    placed = true;
                    break 'pairs;
                }
            }
        }
        if !placed {
            return Err(Error::Consistency(format!(
                "vertex {v} extends the maximal prefix of length {k}"
            )));
        }
    }
    let mut report = Vec::new();
    let mut best: Option<(usize, usize)> = None;
    for (slot, members) in classes.into_iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let w = eval.omega(&members)?;
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((slot, w));
        }
        report.push(AssignedClass {
            side: if slot % 2 == 0 { Side::In } else { Side::Out },
            pattern: pattern_bits(slot / 2, k),
            members,
            omega: w,
        });
    }
    let Some((slot, _)) = best else {
        let detail = format!("no vertex of the extending atom is rich both ways at {x}");
        return Ok((growth, HalfBagOutcome::BelowThreshold { detail }));
    };
    let chosen = report
        .iter()
        .find(|c| c.pattern == pattern_bits(slot / 2, k) && (c.side == Side::In) == (slot % 2 == 0))
        .expect("chosen class recorded");
    let pair = HalfBagPair {
        a: chosen.members.clone(),
        b: growth.atoms[slot / 2].members.clone(),
        x,
        side: chosen.side,
        b_star,
        classes: report,
    };
    Ok((growth, HalfBagOutcome::Pair(pair)))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfToFullParams {
    pub n: usize,
    pub c: usize,
    pub c_small: usize,
    pub c_large: usize,
    /// Replaces `g45((1 + |D_{n-1}|)·c_small)` in the size hypothesis on `B`.
    pub g_bound: Option<usize>,
    /// Exchange the roles of in- and out-neighbourhoods throughout.
    pub swapped: bool,
    pub policy: Policy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum HalfToFull {
    /// `map` embeds `D_n`; `d_alpha` lies in `A`, `d_beta` and `pivot` in `B`.
    DnEmbedding {
        map: Vec<usize>,
        pivot: usize,
        d_alpha: Vec<usize>,
        d_beta: Vec<usize>,
    },
    /// `B_2 ⊆ B` with clique number at least `c_large`, each member thin
    /// into `A`.
    Split { b2: VertexSet, omega: usize },
    HypothesisFailed { detail: String },
    Inconclusive { detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfToFullReport {
    pub hypotheses: Vec<HypothesisCheck>,
    /// Members of `B` rich on the wrong side into `A`.
    pub rich: VertexSet,
    pub outcome: HalfToFull,
}

fn d_size(n: usize) -> usize {
    (1usize << n) - 1
}

/// One side of the half-to-full step: either `B` minus its vertices rich
/// into `A` is still large, or a pivot in `B` with a rich backward part and
/// two `D_{n-1}` copies assemble into `D_n`.
pub fn half_to_full_step(
    eval: &mut Evaluator,
    a: &VertexSet,
    b: &VertexSet,
    p: &HalfToFullParams,
) -> Result<HalfToFullReport> {
    let t = eval.tournament();
    if p.n < 2 || p.n > constructions::MAX_D {
        return Err(Error::InvalidArgument(format!("n must lie in 2..={}", constructions::MAX_D)));
    }
    // Main orientation: A is thin on its in-side into B; vertices of B rich
    // on their out-side into A are the troublemakers.
    let (thin_side, rich_side): (fn(&Tournament, usize) -> &VertexSet, fn(&Tournament, usize) -> &VertexSet) =
        if p.swapped {
            (Tournament::out_neighbours, Tournament::in_neighbours)
        } else {
            (Tournament::in_neighbours, Tournament::out_neighbours)
        };
    let d_prev = constructions::build(Family::D, p.n - 1)?;
    let factor = 1 + d_size(p.n - 1);
    let mut hyp = Vec::new();
    hyp.push(HypothesisCheck::new(
        "A and B are disjoint",
        Some(a.is_disjoint(b)),
        format!("|A| = {}, |B| = {}", a.len(), b.len()),
    ));
    hyp.push(rich_sets_contain(eval, &d_prev, p.c)?);
    hyp.push(HypothesisCheck::new(
        "c_small >= c",
        Some(p.c_small >= p.c),
        format!("c = {}, c_small = {}", p.c, p.c_small),
    ));
    let wa = eval.omega(a)?;
    hyp.push(HypothesisCheck::new(
        "clique number of A >= c_large",
        Some(wa >= p.c_large),
        format!("{wa} vs {}", p.c_large),
    ));
    let wb = eval.omega(b)?;
    let (holds, detail) = match p.g_bound {
        Some(g) => (Some(wb >= p.c_large + g), format!("{wb} vs {} + {g} (override)", p.c_large)),
        None => {
            let need = Value::add(&[
                Value::int(p.c_large as u64),
                Value::g45(&Value::int((factor * p.c_small) as u64)),
            ]);
            let have = Value::int(wb as u64);
            let h = if certainly_ge(&have, &need) {
                Some(true)
            } else if certainly_gt(&need, &have) {
                Some(false)
            } else {
                None
            };
            (h, format!("{wb} vs {need}"))
        }
    };
    hyp.push(HypothesisCheck::new("clique number of B >= c_large + g45((1+|D_{n-1}|)·c_small)", holds, detail));
    let mut worst = (0, None);
    for v in a.iter() {
        let w = eval.omega(&thin_side(t, v).intersection(b))?;
        if w >= worst.0 {
            worst = (w, Some(v));
        }
    }
    hyp.push(HypothesisCheck::new(
        "members of A are thin into B",
        Some(a.is_empty() || worst.0 < p.c_small),
        match worst.1 {
            Some(v) => format!("vertex {v} reaches {} (bound < {})", worst.0, p.c_small),
            None => "A is empty".into(),
        },
    ));
    let holds = all_hold(&hyp);
    let n = t.n();
    if !a.is_disjoint(b) || (!holds && p.policy == Policy::Strict) {
        return Ok(HalfToFullReport {
            outcome: HalfToFull::HypothesisFailed {
                detail: first_failure(&hyp).unwrap_or_default(),
            },
            hypotheses: hyp,
            rich: VertexSet::new(n),
        });
    }
    // Guarantees only follow from the hypotheses with the true g45.
    let guaranteed = holds && p.g_bound.is_none();

    let mut rich = VertexSet::new(n);
    for v in b.iter() {
        if eval.omega(&rich_side(t, v).intersection(a))? >= p.c {
            rich.insert(v);
        }
    }
    let rest = b.difference(&rich);
    let w_rest = eval.omega(&rest)?;
    if w_rest >= p.c_large {
        return Ok(HalfToFullReport {
            hypotheses: hyp,
            rich,
            outcome: HalfToFull::Split { b2: rest, omega: w_rest },
        });
    }

    let need = factor * p.c_small;
    let mut pivots = Vec::new();
    let mut fallback = Vec::new();
    for v in rich.iter() {
        if eval.omega(&thin_side(t, v).intersection(&rich))? >= need {
            pivots.push(v);
        } else {
            fallback.push(v);
        }
    }
    if p.policy == Policy::Relaxed {
        pivots.extend(fallback);
    }
    let mut last = format!("no pivot whose backward part of the rich set reaches {need}");
    for &pv in &pivots {
        let alpha_zone = rich_side(t, pv).intersection(a);
        let Some(d_alpha) = contains_copy_within(t, &d_prev, &alpha_zone) else {
            last = format!("pivot {pv}: no D_{} on the rich side in A", p.n - 1);
            continue;
        };
        let mut beta_zone = thin_side(t, pv).intersection(&rich);
        for &u in &d_alpha {
            beta_zone.difference_with(thin_side(t, u));
        }
        let Some(d_beta) = contains_copy_within(t, &d_prev, &beta_zone) else {
            last = format!("pivot {pv}: no D_{} left for the second copy", p.n - 1);
            continue;
        };
        let mut map = if p.swapped { d_beta.clone() } else { d_alpha.clone() };
        map.extend(if p.swapped { &d_alpha } else { &d_beta });
        map.push(pv);
        if !verify_embedding(t, &constructions::build(Family::D, p.n)?, &map) {
            return Err(Error::Consistency("assembled D_n does not verify".into()));
        }
        return Ok(HalfToFullReport {
            hypotheses: hyp,
            rich,
            outcome: HalfToFull::DnEmbedding {
                map,
                pivot: pv,
                d_alpha,
                d_beta,
            },
        });
    }
    if guaranteed {
        return Err(Error::Consistency(format!("half-to-full step failed under its hypotheses: {last}")));
    }
    Ok(HalfToFullReport {
        hypotheses: hyp,
        rich,
        outcome: HalfToFull::Inconclusive { detail: last },
    })
}

/// Desk-scale replacements for the constants of one two-bag step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepConstants {
    /// `c_1, …, c_t` for growing `D_n` (`t = |V(D_n)|`).
    pub atom_thresholds: Vec<usize>,
    pub g_bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum TwoBagOutcome {
    /// `(first, second)` is a `(c_large, c)` bag-chain.
    Chain { first: VertexSet, second: VertexSet },
    Embedding { map: Vec<usize> },
    BelowThreshold { detail: String },
    HypothesisFailed { detail: String },
    Inconclusive { detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoBagReport {
    pub growth_k: usize,
    pub half: Option<HalfBagPair>,
    pub steps: Vec<HalfToFullReport>,
    pub outcome: TwoBagOutcome,
}

/// Removes highest-numbered vertices until the clique number is `level`.
fn shrink_to(eval: &mut Evaluator, s: &VertexSet, level: usize) -> Result<Option<VertexSet>> {
    let mut s = s.clone();
    while eval.omega(&s)? > level {
        let top = s.iter().last().expect("non-empty");
        s.remove(top);
    }
    Ok((eval.omega(&s)? == level).then_some(s))
}

/// Inside `within`: grows `D_n`, takes the half-bag pair, applies the
/// half-to-full step to `(A, B)` and then, swapped, to `(B_2, A)`, and trims
/// both bags to clique number exactly `c_large`.
pub fn two_bag_chain(
    eval: &mut Evaluator,
    within: &VertexSet,
    n: usize,
    c: usize,
    c_large: usize,
    consts: &StepConstants,
    policy: Policy,
    budget: Option<u64>,
) -> Result<TwoBagReport> {
    let dn = constructions::build(Family::D, n)?;
    let (growth, half) = half_bag_chain(eval, within, &dn, &consts.atom_thresholds, budget)?;
    let mut report = TwoBagReport {
        growth_k: growth.k,
        half: None,
        steps: vec![],
        outcome: TwoBagOutcome::Inconclusive { detail: String::new() },
    };
    let pair = match half {
        HalfBagOutcome::Pair(p) => p,
        HalfBagOutcome::Embedding { map } => {
            report.outcome = TwoBagOutcome::Embedding { map };
            return Ok(report);
        }
        HalfBagOutcome::BelowThreshold { detail } => {
            report.outcome = TwoBagOutcome::BelowThreshold { detail };
            return Ok(report);
        }
        HalfBagOutcome::Inconclusive { detail } => {
            report.outcome = TwoBagOutcome::Inconclusive { detail };
            return Ok(report);
        }
    };
    let swapped = pair.side == Side::Out;
    let mut params = HalfToFullParams {
        n,
        c,
        c_small: pair.x,
        c_large,
        g_bound: consts.g_bound,
        swapped,
        policy,
    };
    let (a, b) = (pair.a.clone(), pair.b.clone());
    report.half = Some(pair);
    // First B_2 ⊆ B thin towards A, then (swapped) B_1 ⊆ A thin towards B_2.
    let mut found = Vec::new();
    let mut x = a.clone();
    let mut y = b;
    for _ in 0..2 {
        let step = half_to_full_step(eval, &x, &y, &params)?;
        let outcome = step.outcome.clone();
        report.steps.push(step);
        match outcome {
            HalfToFull::Split { b2, .. } => found.push(b2),
            HalfToFull::DnEmbedding { map, .. } => {
                report.outcome = TwoBagOutcome::Embedding { map };
                return Ok(report);
            }
            HalfToFull::HypothesisFailed { detail } => {
                report.outcome = TwoBagOutcome::HypothesisFailed { detail };
                return Ok(report);
            }
            HalfToFull::Inconclusive { detail } => {
                report.outcome = TwoBagOutcome::Inconclusive { detail };
                return Ok(report);
            }
        }
        x = found.last().expect("split").clone();
        y = a.clone();
        params.swapped = !params.swapped;
    }
    let (b2, b1) = (found[0].clone(), found[1].clone());
    let (Some(b1), Some(b2)) = (shrink_to(eval, &b1, c_large)?, shrink_to(eval, &b2, c_large)?) else {
        report.outcome = TwoBagOutcome::Inconclusive {
            detail: format!("a bag fell below clique number {c_large}"),
        };
        return Ok(report);
    };
    let (first, second) = if swapped { (b2, b1) } else { (b1, b2) };
    let chain = BagChain {
        bags: vec![first.clone(), second.clone()],
        c: c_large,
        a: c,
    };
    let rep = verify_bag_chain(eval, &chain)?;
    if !rep.valid {
        let strict_ok = report.steps.iter().all(|s| all_hold(&s.hypotheses));
        if strict_ok && consts.g_bound.is_none() {
            return Err(Error::Consistency("two-bag chain does not verify".into()));
        }
        report.outcome = TwoBagOutcome::Inconclusive {
            detail: format!("assembled pair has {} chain violations", rep.violations.len()),
        };
        return Ok(report);
    }
    report.outcome = TwoBagOutcome::Chain { first, second };
    Ok(report)
}

/// Bag levels `[c_1, c_2, c_3]` of the doubling (bottom to top) and the
/// step constants used when splitting into bags of each level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Length8Constants {
    pub levels: [usize; 3],
    pub steps: [StepConstants; 3],
}

impl Length8Constants {
    pub fn uniform(levels: [usize; 3], step: StepConstants) -> Self {
        Length8Constants {
            levels,
            steps: [step.clone(), step.clone(), step],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum Length8Outcome {
    Chain { chain: BagChain, report: ChainReport },
    Embedding { map: Vec<usize> },
    BelowThreshold { omega: usize, needed: String },
    /// The true constants do not fit a machine word.
    ConstantOverflow { constant: String, digits: usize },
    HypothesisFailed { detail: String },
    Inconclusive { detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Length8Report {
    pub levels: Option<[usize; 3]>,
    pub splits: Vec<TwoBagReport>,
    pub outcome: Length8Outcome,
}

fn overflow(e: &BoundExpr) -> Length8Outcome {
    Length8Outcome::ConstantOverflow {
        constant: e.value().to_string(),
        digits: e.value().lower_digits(),
    }
}

/// Exact desk constants from the recurrences, when every one fits.
fn computed_constants(n: usize, c: usize, c_large: usize) -> Result<std::result::Result<Length8Constants, BoundExpr>> {
    let cc = BoundExpr::int(c as u64);
    let mut level = BoundExpr::int(c_large as u64);
    let mut levels = [0; 3];
    let mut steps: [StepConstants; 3] = Default::default();
    for i in 0..3 {
        let next = bounds::c54(&level, &cc, n)?;
        let Some(v) = next.exact_usize() else {
            return Ok(Err(bounds::c55(&BoundExpr::int(c_large as u64), &cc, n)?));
        };
        let factor = BoundExpr::int(1 + d_size(n - 1) as u64);
        let lv = level.clone();
        let g = move |x: &BoundExpr| -> Result<BoundExpr> {
            let scaled = BoundExpr::apply("scaled", bounds::Op::Mul, vec![factor.clone(), x.clone()])?;
            BoundExpr::apply("g", bounds::Op::Add, vec![lv.clone(), bounds::g45(&scaled)?])
        };
        let (ladder, _) = bounds::c_ladder_2a(&cc, d_size(n), &g)?;
        let atom_thresholds: Option<Vec<usize>> = ladder.iter().map(|e| e.exact_usize()).collect();
        let Some(atom_thresholds) = atom_thresholds else {
            return Ok(Err(next));
        };
        steps[i] = StepConstants { atom_thresholds, g_bound: None };
        levels[i] = v;
        level = next;
    }
    Ok(Ok(Length8Constants { levels, steps }))
}

/// Three rounds of two-bag splitting: the whole tournament into two bags of
/// level `c_2`, each of those into two of level `c_1`, and each of those into
/// two of level `c_large`; the eight final bags are verified as a
/// `(c_large, c)` bag-chain.
pub fn build_chain_length8(
    eval: &mut Evaluator,
    n: usize,
    c: usize,
    c_large: usize,
    overrides: Option<&Length8Constants>,
    policy: Policy,
    budget: Option<u64>,
) -> Result<Length8Report> {
    if !(2..=constructions::MAX_D).contains(&n) {
        return Err(Error::InvalidArgument(format!("n must lie in 2..={}", constructions::MAX_D)));
    }
    let consts = match overrides {
        Some(k) => k.clone(),
        None => match computed_constants(n, c, c_large)? {
            Ok(k) => k,
            Err(e) => {
                return Ok(Length8Report {
                    levels: None,
                    splits: vec![],
                    outcome: overflow(&e),
                })
            }
        },
    };
    let t = eval.tournament();
    let all = t.vertices();
    let top = consts.levels[2];
    let w = eval.omega(&all)?;
    let mut report = Length8Report {
        levels: Some(consts.levels),
        splits: vec![],
        outcome: Length8Outcome::Inconclusive { detail: String::new() },
    };
    if w < top {
        report.outcome = Length8Outcome::BelowThreshold {
            omega: w,
            needed: top.to_string(),
        };
        return Ok(report);
    }
    let targets = [consts.levels[1], consts.levels[0], c_large];
    let step_for = [&consts.steps[2], &consts.steps[1], &consts.steps[0]];
    let mut current = vec![all];
    for round in 0..3 {
        let mut next = Vec::with_capacity(current.len() * 2);
        for s in &current {
            let r = two_bag_chain(eval, s, n, c, targets[round], step_for[round], policy, budget)?;
            let outcome = r.outcome.clone();
            report.splits.push(r);
            match outcome {
                TwoBagOutcome::Chain { first, second } => {
                    next.push(first);
                    next.push(second);
                }
                TwoBagOutcome::Embedding { map } => {
                    report.outcome = Length8Outcome::Embedding { map };
                    return Ok(report);
                }
                TwoBagOutcome::BelowThreshold { detail } => {
                    report.outcome = Length8Outcome::Inconclusive {
                        detail: format!("round {}: {detail}", round + 1),
                    };
                    return Ok(report);
                }
                TwoBagOutcome::HypothesisFailed { detail } => {
                    report.outcome = Length8Outcome::HypothesisFailed { detail };
                    return Ok(report);
                }
                TwoBagOutcome::Inconclusive { detail } => {
                    report.outcome = Length8Outcome::Inconclusive {
                        detail: format!("round {}: {detail}", round + 1),
                    };
                    return Ok(report);
                }
            }
        }
        current = next;
    }
    let chain = BagChain {
        bags: current,
        c: c_large,
        a: c,
    };
    let rep = verify_bag_chain(eval, &chain)?;
    if !rep.valid {
        return Err(Error::Consistency("length-8 chain does not verify".into()));
    }
    report.outcome = Length8Outcome::Chain { chain, report: rep };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_d;

    fn set(n: usize, xs: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, xs.iter().copied())
    }

    #[test]
    fn rich_examples() {
        let t = Tournament::transitive(5);
        let mut e = Evaluator::new(&t).unwrap();
        assert_eq!(bidirectional_rich(&mut e, 1).unwrap(), set(5, &[1, 2, 3]));
        assert!(bidirectional_rich(&mut e, 2).unwrap().is_empty());
        let c3 = Tournament::cyclic_triangle();
        let mut e = Evaluator::new(&c3).unwrap();
        assert_eq!(bidirectional_rich(&mut e, 1).unwrap(), c3.vertices());
    }

    #[test]
    fn growth_examples() {
        let t = Tournament::random(7, 5);
        let mut e = Evaluator::new(&t).unwrap();
        let g = grow_copy_atoms(&mut e, &Tournament::single(), &[0], None).unwrap();
        assert_eq!(g.k, 1);
        assert_eq!(g.atoms.len(), 2);
        assert_eq!(g.embedding, Some(vec![0]));
        let g = grow_copy_atoms(&mut e, &Tournament::cyclic_triangle(), &[9, 9, 9], None).unwrap();
        assert_eq!(g.k, 0);
        assert!(g.embedding.is_none());
        assert!(grow_copy_atoms(&mut e, &Tournament::single(), &[1, 1], None).is_err());
    }

    #[test]
    fn growth_completes_copies() {
        for seed in 0..20 {
            let t = Tournament::random(9, 100 + seed);
            let mut e = Evaluator::new(&t).unwrap();
            let g = grow_copy_atoms(&mut e, &Tournament::cyclic_triangle(), &[1, 1, 1], None).unwrap();
            for a in &g.atoms {
                assert!(a.omega >= 1 && a.omega == e.omega(&a.members).unwrap());
            }
            if let Some(m) = g.embedding {
                assert!(verify_embedding(&t, &Tournament::cyclic_triangle(), &m));
            }
        }
    }

    fn forward_pair(a: usize, b: usize) -> (Tournament, VertexSet, VertexSet) {
        // A = 0..a, B = a..a+b, both cyclic-ish blocks, A ⇒ B.
        let n = a + b;
        let t = Tournament::from_fn(n, |i, j| {
            let (bi, bj) = (i >= a, j >= a);
            if bi != bj {
                return !bi;
            }
            let (oi, oj) = if bi { (i - a, j - a) } else { (i, j) };
            (oj - oi) % 2 == 1
        });
        (t, VertexSet::from_iter(n, 0..a), VertexSet::from_iter(n, a..n))
    }

    #[test]
    fn forward_pair_splits() {
        let (t, a, b) = forward_pair(3, 3);
        let mut e = Evaluator::new(&t).unwrap();
        let p = HalfToFullParams {
            n: 2,
            c: 1,
            c_small: 1,
            c_large: 1,
            g_bound: Some(1),
            swapped: false,
            policy: Policy::Strict,
        };
        let r = half_to_full_step(&mut e, &a, &b, &p).unwrap();
        assert!(all_hold(&r.hypotheses));
        assert_eq!(r.outcome, HalfToFull::Split { b2: b.clone(), omega: 2 });
        // Without the override the g45 requirement is astronomically large.
        let strict = HalfToFullParams { g_bound: None, ..p.clone() };
        let r = half_to_full_step(&mut e, &a, &b, &strict).unwrap();
        assert!(matches!(r.outcome, HalfToFull::HypothesisFailed { .. }));
        // Swapped, A's out-neighbourhood into B is everything: bullet fails.
        let sw = HalfToFullParams { swapped: true, ..p };
        let r = half_to_full_step(&mut e, &a, &b, &sw).unwrap();
        assert!(matches!(r.outcome, HalfToFull::HypothesisFailed { detail } if detail.contains("thin")));
    }

    #[test]
    fn delta_pattern_gives_triangle() {
        // A = {0, 3}, B = {1, 2}: 1 → 0 → 2 → 1 and 2 → 3 → 1.
        let t = Tournament::from_fn(4, |i, j| matches!((i, j), (0, 2) | (0, 3) | (2, 3)));
        let a = set(4, &[0, 3]);
        let b = set(4, &[1, 2]);
        let mut e = Evaluator::new(&t).unwrap();
        let p = HalfToFullParams {
            n: 2,
            c: 1,
            c_small: 1,
            c_large: 2,
            g_bound: Some(0),
            swapped: false,
            policy: Policy::Relaxed,
        };
        let r = half_to_full_step(&mut e, &a, &b, &p).unwrap();
        match r.outcome {
            HalfToFull::DnEmbedding { map, pivot, .. } => {
                assert_eq!(pivot, 1);
                assert_eq!(map, vec![0, 2, 1]);
                assert!(verify_embedding(&t, &build_d(2).unwrap(), &map));
            }
            other => panic!("unexpected {other:?}"),
        }
        let strict = HalfToFullParams { policy: Policy::Strict, ..p };
        assert!(matches!(
            half_to_full_step(&mut e, &a, &b, &strict).unwrap().outcome,
            HalfToFull::HypothesisFailed { .. }
        ));
    }

    /// Transitive tournament whose vertex ids are permuted so that the
    /// lexicographically least splitting vertex is always in the middle.
    pub(crate) fn balanced_transitive() -> (Tournament, Vec<usize>) {
        // Positions 0..29; pivots of the three rounds get the smallest ids.
        let pivots = [13, 5, 20, 1, 8, 16, 23];
        let mut id_of = vec![usize::MAX; 29];
        for (k, &p) in pivots.iter().enumerate() {
            id_of[p] = k;
        }
        let mut next = pivots.len();
        for slot in id_of.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        let mut pos_of = vec![0; 29];
        for (p, &id) in id_of.iter().enumerate() {
            pos_of[id] = p;
        }
        (Tournament::from_fn(29, |i, j| pos_of[i] < pos_of[j]), pos_of)
    }

    #[test]
    fn two_bags_on_triangle_layers() {
        // Eight cyclic triangles, all arcs between layers pointing forward.
        let t = Tournament::from_fn(24, |i, j| if i / 3 == j / 3 { (j % 3 + 3 - i % 3) % 3 == 1 } else { i < j });
        let mut e = Evaluator::new(&t).unwrap();
        assert!(contains_copy_within(&t, &build_d(3).unwrap(), &t.vertices()).is_none());
        let consts = StepConstants { atom_thresholds: vec![2, 2, 2, 2, 2, 2, 2], g_bound: Some(0) };
        let r = two_bag_chain(&mut e, &t.vertices(), 3, 2, 2, &consts, Policy::Strict, None).unwrap();
        assert_eq!(r.growth_k, 1);
        match r.outcome {
            TwoBagOutcome::Chain { first, second } => {
                let chain = BagChain { bags: vec![first, second], c: 2, a: 2 };
                assert!(verify_bag_chain(&mut e, &chain).unwrap().valid);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn length8_on_balanced_transitive() {
        let (t, pos_of) = balanced_transitive();
        let mut e = Evaluator::new(&t).unwrap();
        let consts = Length8Constants::uniform([1, 1, 1], StepConstants { atom_thresholds: vec![1, 1, 1], g_bound: Some(0) });
        let r = build_chain_length8(&mut e, 2, 1, 1, Some(&consts), Policy::Strict, None).unwrap();
        match &r.outcome {
            Length8Outcome::Chain { chain, report } => {
                assert!(report.valid);
                assert_eq!(chain.bags.len(), 8);
                let pos: Vec<usize> = chain.bags.iter().map(|b| pos_of[b.first().unwrap()]).collect();
                assert!(pos.windows(2).all(|w| w[0] < w[1]));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(r.splits.len(), 7);
    }

    #[test]
    fn length8_other_outcomes() {
        let (t, pos_of) = balanced_transitive();
        // Reverse one arc across the middle: a cyclic triangle appears.
        let id = |p: usize| pos_of.iter().position(|&q| q == p).unwrap();
        let (u, w) = (id(10), id(14));
        let s = Tournament::from_fn(29, |i, j| if (i, j) == (u, w) || (i, j) == (w, u) { t.arc(j, i) } else { t.arc(i, j) });
        let mut e = Evaluator::new(&s).unwrap();
        let consts = Length8Constants::uniform([1, 1, 1], StepConstants { atom_thresholds: vec![1, 1, 1], g_bound: Some(0) });
        let r = build_chain_length8(&mut e, 2, 1, 1, Some(&consts), Policy::Strict, None).unwrap();
        match r.outcome {
            Length8Outcome::Embedding { map } => assert!(verify_embedding(&s, &build_d(2).unwrap(), &map)),
            other => panic!("unexpected {other:?}"),
        }
        let mut e = Evaluator::new(&t).unwrap();
        let high = Length8Constants::uniform([1, 1, 5], StepConstants { atom_thresholds: vec![1, 1, 1], g_bound: Some(0) });
        let r = build_chain_length8(&mut e, 2, 1, 1, Some(&high), Policy::Strict, None).unwrap();
        assert!(matches!(r.outcome, Length8Outcome::BelowThreshold { omega: 1, .. }));
        let r = build_chain_length8(&mut e, 2, 1, 1, None, Policy::Strict, None).unwrap();
        assert!(matches!(r.outcome, Length8Outcome::ConstantOverflow { digits, .. } if digits > 40));
    }
}
