//! Seeded property batteries behind `lemma-suite` and `mountain-audit`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_code;
use crate::chains::{assign_zones, BagChain, Evaluator};
use crate::constructions::{build, Family};
use crate::containment::{contains_copy, is_prime, verify_embedding};
use crate::error::Result;
use crate::graph::Graph;
use crate::mountains::{
    log_bound_audit, random_colouring, size_bound, two_colouring_witness, verify_mountain, Colour,
    MountainFinder,
};
use crate::solvers::{chi_dir, omega_dir, omega_of, SolverConfig};
use crate::tournament::{OrderedBackedgeGraph, Tournament};
use crate::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub violations: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.into(),
            cases: 0,
            violations: vec![],
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `ω⃗(T) <= ω⃗(X) + ω⃗(Y)` for random bipartitions, `n <= max_n`.
pub fn subadditivity(seed: u64, cases: usize, max_n: usize) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 1);
    let mut res = SuiteResult::new("subadditivity");
    for _ in 0..cases {
        let n = rng.gen_range(1..=max_n);
        let t = Tournament::random_with(n, &mut rng);
        let x = VertexSet::from_iter(n, (0..n).filter(|_| rng.gen_bool(0.5)));
        let y = x.complement();
        let (w, wx, wy) = (omega_of(&t, &t.vertices())?, omega_of(&t, &x)?, omega_of(&t, &y)?);
        res.check(w <= wx + wy, || format!("n = {n}, X = {:?}: {w} > {wx} + {wy}", x.to_vec()));
    }
    Ok(res)
}

/// Exact `ω⃗ <= χ⃗`, and every colour class transitive.
pub fn omega_le_chi(seed: u64, cases: usize, max_n: usize) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 2);
    let mut res = SuiteResult::new("omega <= chi");
    let cfg = SolverConfig::default();
    for _ in 0..cases {
        let n = rng.gen_range(1..=max_n);
        let t = Tournament::random_with(n, &mut rng);
        let w = omega_dir(&t, &cfg)?;
        let c = chi_dir(&t, &cfg)?;
        let classes_ok = c
            .classes
            .iter()
            .all(|cl| t.is_transitive_on(&VertexSet::from_iter(n, cl.iter().copied())));
        res.check(w.value <= c.value && classes_ok, || {
            format!("n = {n}: omega {} chi {} transitive classes {classes_ok}", w.value, c.value)
        });
    }
    Ok(res)
}

/// Tournament -> backedge graph -> tournament, and graph -> tournament -> graph.
pub fn backedge_round_trip(seed: u64, cases: usize, max_n: usize) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 3);
    let mut res = SuiteResult::new("backedge round trip");
    for _ in 0..cases {
        let n = rng.gen_range(1..=max_n);
        let t = Tournament::random_with(n, &mut rng);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let back = t.backedge_graph(&order)?;
        res.check(back.tournament() == t, || format!("n = {n}, order {order:?}: tournament differs"));
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let g = Graph::from_edges(n, edges);
        let obg = OrderedBackedgeGraph::new(order.clone(), g.clone())?;
        let again = obg.tournament().backedge_graph(&order)?;
        res.check(again.graph() == &g, || format!("n = {n}, order {order:?}: graph differs"));
    }
    Ok(res)
}

/// Found mountains verify and have at most `(k!)^2` vertices.
pub fn mountain_size(seed: u64, cases: usize, max_n: usize) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 4);
    let mut res = SuiteResult::new("mountain certificates and size bound");
    for _ in 0..cases {
        let n = rng.gen_range(3..=max_n);
        let t = Tournament::random_with(n, &mut rng);
        let mut f = MountainFinder::new(&t)?;
        for k in 2..=3 {
            if let Some(m) = f.find_level_mountain(full(n), k)? {
                let problems = verify_mountain(&t, &m);
                let size_ok = m.vertex_set.len() as u128 <= size_bound(k);
                res.check(problems.is_empty() && size_ok, || {
                    format!("n = {n}, k = {k}: {problems:?}, {} vertices", m.vertex_set.len())
                });
            }
        }
    }
    Ok(res)
}

/// Monochromatic witness extraction from random colourings of mountains.
pub fn two_colouring(seed: u64, cases: usize, max_n: usize) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 5);
    let mut res = SuiteResult::new("two-colouring witnesses");
    let mut attempts = 0;
    while res.cases < cases && attempts < cases * 50 {
        attempts += 1;
        let n = rng.gen_range(3..=max_n);
        let t = Tournament::random_with(n, &mut rng);
        let mut f = MountainFinder::new(&t)?;
        let Some(m) = f.largest_mountain(full(n), 3)? else { continue };
        let k = m.level().expect("largest mountain has a level");
        if k < 2 {
            continue;
        }
        let a = rng.gen_range(1..=k);
        let b = k + 1 - a;
        let col = random_colouring(n, &mut rng);
        let (c, w) = two_colouring_witness(&t, &m, &col, a, b)?;
        let want = if c == Colour::Red { a } else { b };
        let ok = verify_mountain(&t, &w).is_empty()
            && w.level() == Some(want)
            && w.vertex_set.iter().all(|&v| col[v] == c)
            && w.vertex_set.iter().all(|v| m.vertex_set.contains(v));
        res.check(ok, || format!("n = {n}, k = {k}, a = {a}, b = {b}: bad witness {w:?}"));
    }
    Ok(res)
}

/// `ω⃗(T) >= ⌊log₂ r⌋` whenever `T` has an `r`-mountain.
pub fn log_bound(seed: u64, cases: usize, max_n: usize) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 6);
    let mut res = SuiteResult::new("logarithmic mountain bound");
    for _ in 0..cases {
        let n = rng.gen_range(1..=max_n);
        let t = Tournament::random_with(n, &mut rng);
        let a = log_bound_audit(&t, crate::mountains::DEFAULT_MAX_R)?;
        res.check(a.holds, || format!("n = {n}: {a:?}"));
    }
    Ok(res)
}

/// Fixed containment and identity facts about the three families.
pub fn family_facts(max_d: usize) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("family freeness and identities");
    let d3 = build(Family::D, 3)?;
    let a3 = build(Family::A, 3)?;
    let u3 = build(Family::U, 3)?;
    for n in 3..=4 {
        let a = build(Family::A, n)?;
        res.check(contains_copy(&a, &d3).is_none(), || format!("A_{n} contains D_3"));
    }
    for n in 1..=max_d {
        let d = build(Family::D, n)?;
        res.check(contains_copy(&d, &a3).is_none(), || format!("D_{n} contains A_3"));
    }
    let found = contains_copy(&a3, &u3);
    res.check(found.as_ref().is_some_and(|m| verify_embedding(&a3, &u3, m)), || {
        "A_3 has no verified U_3 copy".into()
    });
    res.check(is_prime(&u3), || "U_3 is not prime".into());
    for n in 1..=2 {
        let same = canonical_code(&build(Family::A, n)?)? == canonical_code(&build(Family::D, n)?)?;
        res.check(same, || format!("A_{n} and D_{n} differ"));
    }
    let c3 = canonical_code(&Tournament::cyclic_triangle())?;
    res.check(canonical_code(&build(Family::D, 2)?)? == c3, || "D_2 is not C_3".into());
    Ok(res)
}

/// Zones place every vertex outside the bags exactly once.
pub fn zone_partition(seed: u64, cases: usize, max_n: usize) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 7);
    let mut res = SuiteResult::new("zone partition totality");
    for _ in 0..cases {
        let n = rng.gen_range(2..=max_n);
        let t = Tournament::random_with(n, &mut rng);
        let len = rng.gen_range(1..=4usize);
        let mut bags = vec![VertexSet::new(n); len];
        for v in 0..n {
            // About half the vertices go into bags.
            let slot = rng.gen_range(0..2 * len);
            if slot < len {
                bags[slot].insert(v);
            }
        }
        let chain = BagChain { bags, c: 1, a: 1 };
        let c_small = rng.gen_range(1..=2);
        let mut eval = Evaluator::new(&t)?;
        let z = assign_zones(&mut eval, &chain, c_small)?;
        let mut count = vec![0usize; n];
        for zone in &z.zones {
            for v in zone.iter() {
                count[v] += 1;
            }
        }
        for b in &chain.bags {
            for v in b.iter() {
                count[v] += 1;
            }
        }
        let ok = z.zones.len() == len && count.iter().all(|&k| k == 1);
        res.check(ok, || format!("n = {n}, {len} bags: coverage {count:?}"));
    }
    Ok(res)
}

/// Case counts for one battery run.
#[derive(Clone, Copy, Debug)]
pub struct SuiteSize {
    pub subadditivity: usize,
    pub omega_chi: usize,
    pub round_trip: usize,
    pub mountains: usize,
    pub colourings: usize,
    pub log_bound: usize,
    pub zones: usize,
    pub max_d: usize,
}

impl Default for SuiteSize {
    fn default() -> Self {
        SuiteSize {
            subadditivity: 1000,
            omega_chi: 200,
            round_trip: 500,
            mountains: 200,
            colourings: 500,
            log_bound: 200,
            zones: 200,
            max_d: 5,
        }
    }
}

/// The mountain lemmas only.
pub fn mountain_battery(seed: u64, size: &SuiteSize) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        mountain_size(seed, size.mountains, 9)?,
        two_colouring(seed, size.colourings, 9)?,
        log_bound(seed, size.log_bound, 10)?,
    ])
}

/// Every battery.
pub fn lemma_battery(seed: u64, size: &SuiteSize) -> Result<Vec<SuiteResult>> {
    let mut out = vec![
        subadditivity(seed, size.subadditivity, 10)?,
        omega_le_chi(seed, size.omega_chi, 8)?,
        backedge_round_trip(seed, size.round_trip, 12)?,
    ];
    out.extend(mountain_battery(seed, size)?);
    out.push(family_facts(size.max_d)?);
    out.push(zone_partition(seed, size.zones, 14)?);
    Ok(out)
}
