//! Merging a near-bag-chain into bags of comparable clique number, and the
//! resulting dichotomy: either the backward-edge graph has small clique
//! number and concatenating per-bag optimal orderings certifies
//! `ω⃗ < 4mc`, or a large backward clique yields an induced `A_m`.

use serde::{Deserialize, Serialize};

use super::{all_hold, first_failure, rich_sets_contain, verify_near_bag_chain, Evaluator, HypothesisCheck, NearBagChain, Policy};
use crate::bitset::VertexSet;
use crate::constructions::{self, Family};
use crate::containment::{contains_copy_within, verify_embedding};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solvers::clique::max_clique_within;
use crate::solvers::omega::solve_mask;
use crate::tournament::Tournament;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeResult {
    /// A `(2c, a)` near-bag-chain when the input was a `(c, a)` one.
    pub chain: NearBagChain,
    pub omegas: Vec<usize>,
    /// `groups[l]` lists the input bag indices (0-based) merged into bag `l`.
    pub groups: Vec<Vec<usize>>,
}

/// Greedy left-to-right merge: a merged bag is closed as soon as its clique
/// number exceeds `c`, and the next input bag starts a new one.
pub fn merge_bags(eval: &mut Evaluator, q: &NearBagChain, c: usize) -> Result<MergeResult> {
    let n = eval.tournament().n();
    let mut bags: Vec<VertexSet> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, b) in q.bags.iter().enumerate() {
        let open_new = match bags.last() {
            None => true,
            Some(cur) => eval.omega(cur)? > c,
        };
        if open_new {
            bags.push(VertexSet::new(n));
            groups.push(Vec::new());
        }
        bags.last_mut().expect("open bag").union_with(b);
        groups.last_mut().expect("open group").push(i);
    }
    let omegas = bags.iter().map(|b| eval.omega(b)).collect::<Result<Vec<_>>>()?;
    Ok(MergeResult {
        chain: NearBagChain {
            bags,
            c: 2 * c,
            a: q.a,
        },
        omegas,
        groups,
    })
}

/// Undirected graph (on all of `V(T)`) of the arcs from a later bag to an
/// earlier one.
pub fn backward_graph(t: &Tournament, bags: &[VertexSet]) -> Result<Graph> {
    super::check_bags(t, bags)?;
    let mut g = Graph::empty(t.n());
    for (i, bi) in bags.iter().enumerate() {
        for bj in &bags[..i] {
            for u in bi.iter() {
                for v in t.out_neighbours(u).intersection(bj).iter() {
                    g.add_edge(u, v);
                }
            }
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyOptions {
    pub policy: Policy,
    /// Backward cliques tried in the embedding branch before giving up
    /// (relaxed policy only; strict uses the first).
    pub max_cliques: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "branch")]
pub enum DichotomyResult {
    Ordering {
        order: Vec<usize>,
        /// Backedge clique number of `order`, from an independent clique search.
        clique: usize,
        bound: usize,
        /// Largest number of clique vertices inside one merged bag.
        per_bag_max: usize,
    },
    Embedding {
        /// `map[q]` is the host vertex of vertex `q` of `A_m`.
        map: Vec<usize>,
        /// The backward clique, sorted by bag.
        clique: Vec<usize>,
        /// The `A_{m-1}` copies, in order.
        blocks: Vec<Vec<usize>>,
    },
    HypothesisFailed {
        detail: String,
    },
    Inconclusive {
        detail: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub hypotheses: Vec<HypothesisCheck>,
    pub merged: Vec<Vec<usize>>,
    pub merged_omegas: Vec<usize>,
    pub backward_clique_number: usize,
    pub result: DichotomyResult,
}

fn factorial(m: usize) -> usize {
    (1..=m).product()
}

fn bag_index(bags: &[VertexSet], v: usize) -> usize {
    bags.iter().position(|b| b.contains(v)).expect("vertex in some bag")
}

/// All `k`-cliques of `g` inside `within`, in lexicographic order, at most
/// `limit` of them.
fn cliques_of_size(g: &Graph, within: &VertexSet, k: usize, limit: usize) -> Vec<Vec<usize>> {
    fn go(g: &Graph, cand: VertexSet, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        if cur.len() + cand.len() < k {
            return;
        }
        for v in cand.iter() {
            let next = VertexSet::from_iter(cand.universe(), cand.iter().filter(|&w| w > v))
                .intersection(g.neighbours(v));
            cur.push(v);
            go(g, next, k, cur, out, limit);
            cur.pop();
            if out.len() >= limit {
                return;
            }
        }
    }
    let mut out = Vec::new();
    go(g, within.clone(), k, &mut Vec::new(), &mut out, limit);
    out
}

/// Runs the merge, then either certifies `ω⃗(∪Q) < 4mc` by an ordering or
/// extracts an induced `A_m` from a backward clique of size `2m`.
pub fn chain_dichotomy(
    eval: &mut Evaluator,
    q: &NearBagChain,
    m: usize,
    c: usize,
    a: usize,
    c_small: usize,
    opts: &DichotomyOptions,
) -> Result<DichotomyReport> {
    let t = eval.tournament();
    if !(2..=constructions::MAX_A).contains(&m) {
        return Err(Error::InvalidArgument(format!("m must lie in 2..={}", constructions::MAX_A)));
    }
    let mut hyp = Vec::new();
    let as_near = NearBagChain {
        bags: q.bags.clone(),
        c,
        a,
    };
    let rep = verify_near_bag_chain(eval, &as_near)?;
    hyp.push(HypothesisCheck::new(
        "bags form a (c, a) near-bag-chain",
        Some(rep.valid),
        format!("{} violations", rep.violations.len()),
    ));
    let need = 2 * factorial(m) * a + c_small;
    hyp.push(HypothesisCheck::new(
        "c >= 2 m! a + c_small",
        Some(c >= need),
        format!("c = {c}, 2 m! a + c_small = {need}"),
    ));
    let a_prev = constructions::build(Family::A, m - 1)?;
    hyp.push(rich_sets_contain(eval, &a_prev, c_small)?);
    let holds = all_hold(&hyp);
    let empty = |hyp, result| DichotomyReport {
        hypotheses: hyp,
        merged: vec![],
        merged_omegas: vec![],
        backward_clique_number: 0,
        result,
    };
    // The ordering branch only needs the near-bag-chain property.
    if !rep.valid || (!holds && opts.policy == Policy::Strict) {
        let detail = first_failure(&hyp).unwrap_or_default();
        return Ok(empty(hyp, DichotomyResult::HypothesisFailed { detail }));
    }

    let merged = merge_bags(eval, &as_near, c)?;
    let zs = &merged.chain.bags;
    let n = t.n();
    let union = super::union_of(n, zs);
    let g = backward_graph(t, zs)?;
    let (omega_g, _) = max_clique_within(&g, &union);
    let bound = 4 * m * c;
    let mut report = DichotomyReport {
        hypotheses: hyp,
        merged: merged.groups.clone(),
        merged_omegas: merged.omegas.clone(),
        backward_clique_number: omega_g,
        result: DichotomyResult::Inconclusive { detail: String::new() },
    };

    if omega_g < 2 * m {
        let mut order = Vec::with_capacity(union.len());
        for z in zs {
            let (sub, map) = t.induced(z);
            let cert = solve_mask(&sub.out_masks(), sub.n(), None);
            order.extend(cert.order.iter().map(|&i| map[i]));
        }
        let (sub, map) = t.induced(&union);
        let pos: Vec<usize> = order.iter().map(|v| map.iter().position(|x| x == v).expect("member")).collect();
        let bg = sub.backedge_graph(&pos)?;
        let (clique, members) = crate::solvers::clique::max_clique(bg.graph());
        let per_bag_max = zs
            .iter()
            .map(|z| members.iter().filter(|&i| z.contains(map[i])).count())
            .max()
            .unwrap_or(0);
        if clique >= bound || per_bag_max > 2 * c {
            return Err(Error::Consistency(format!(
                "concatenated ordering has backedge clique {clique} (bound {bound}, per bag {per_bag_max})"
            )));
        }
        report.result = DichotomyResult::Ordering {
            order,
            clique,
            bound,
            per_bag_max,
        };
        return Ok(report);
    }

    let limit = match opts.policy {
        Policy::Strict => 1,
        Policy::Relaxed => opts.max_cliques.unwrap_or(10_000),
    };
    let target = constructions::build(Family::A, m)?;
    let mut last_failure = String::new();
    for mut k in cliques_of_size(&g, &union, 2 * m, limit) {
        k.sort_by_key(|&v| bag_index(zs, v));
        match extract_a_m(t, zs, &k, m, &a_prev) {
            Ok((map, blocks)) => {
                if !verify_embedding(t, &target, &map) {
                    return Err(Error::Consistency("assembled A_m does not verify".into()));
                }
                report.result = DichotomyResult::Embedding { map, clique: k, blocks };
                return Ok(report);
            }
            Err(detail) => {
                if holds {
                    return Err(Error::Consistency(format!(
                        "A_m extraction failed under satisfied hypotheses: {detail}"
                    )));
                }
                last_failure = detail;
            }
        }
    }
    report.result = DichotomyResult::Inconclusive {
        detail: format!("no backward clique of size {} led to A_{m}: {last_failure}", 2 * m),
    };
    Ok(report)
}

/// The embedding branch for one clique `k` (sorted by bag): returns the map
/// of `A_m` (layout `v1, T1, …, vm`) and the blocks, or why it failed.
fn extract_a_m(
    t: &Tournament,
    zs: &[VertexSet],
    k: &[usize],
    m: usize,
    a_prev: &Tournament,
) -> std::result::Result<(Vec<usize>, Vec<Vec<usize>>), String> {
    let n = t.n();
    let bag = |i: usize| &zs[bag_index(zs, k[i - 1])];
    // 1-based positions: odd ones form the spine, even ones 2..2m-2 host blocks.
    let evens: Vec<usize> = (2..=2 * m - 2).step_by(2).collect();
    let odds: Vec<usize> = (1..2 * m).step_by(2).collect();
    let s = super::union_of(n, evens.iter().map(|&i| bag(i)));
    let mut removed = VertexSet::new(n);
    for &io in &odds {
        let v = k[io - 1];
        for &ie in &evens {
            let side = if ie > io { t.in_neighbours(v) } else { t.out_neighbours(v) };
            removed.union_with(&bag(ie).intersection(side));
        }
    }
    let mut avail = s.difference(&removed);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &ie in &evens {
        let zone = bag(ie).intersection(&avail);
        let Some(x) = contains_copy_within(t, a_prev, &zone) else {
            return Err(format!("no A_{} left in the bag of clique position {ie}", m - 1));
        };
        for &v in &x {
            avail.difference_with(t.in_neighbours(v));
        }
        blocks.push(x);
    }
    // Layout of A_m: v1, T1, v2, T2, …, vm.
    let mut map = Vec::new();
    for (idx, &io) in odds.iter().enumerate() {
        map.push(k[io - 1]);
        if idx < blocks.len() {
            map.extend(&blocks[idx]);
        }
    }
    Ok((map, blocks))
}
