//! The `A_n`, `D_n` and `U_n` families.
//!
//! Every builder returns vertex labels alongside the tournament:
//! * `A_n` is laid out as `v1, T1, v2, T2, …, vn` and labels read like
//!   `T2/T1/v3` (block path, then spine index);
//! * `D_n` labels are the recursion path through `Δ(D', D'', D_1)`, the three
//!   parts numbered 1, 2, 3, e.g. `1.2.3`; the single vertex of `D_1` is `*`;
//! * `U_n` labels are `u1 … u(2n-1)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tournament::Tournament;

pub const MAX_D: usize = 8;
pub const MAX_A: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    U,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::D => "D",
            Family::U => "U",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "D" | "d" => Ok(Family::D),
            "U" | "u" => Ok(Family::U),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labelled {
    pub tournament: Tournament,
    pub labels: Vec<String>,
}

impl Labelled {
    /// Sidecar text: one `id label` line per vertex.
    pub fn label_file(&self) -> String {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("{i} {l}\n"))
            .collect()
    }
}

fn check_index(family: Family, n: usize, max: Option<usize>) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(format!("{family}_n needs n >= 1")));
    }
    if let Some(max) = max {
        if n > max {
            return Err(Error::SizeLimit {
                what: match family {
                    Family::A => "A_n index",
                    Family::D => "D_n index",
                    Family::U => "U_n index",
                },
                size: n,
                limit: max,
            });
        }
    }
    Ok(())
}

pub fn build_d_labelled(n: usize) -> Result<Labelled> {
    check_index(Family::D, n, Some(MAX_D))?;
    let mut cur = Labelled {
        tournament: Tournament::single(),
        labels: vec!["*".into()],
    };
    for _ in 1..n {
        let t = Tournament::delta_compose(&cur.tournament, &cur.tournament, &Tournament::single());
        let prefix = |p: &str, l: &String| {
            if l == "*" {
                p.to_string()
            } else {
                format!("{p}.{l}")
            }
        };
        let mut labels: Vec<String> = cur.labels.iter().map(|l| prefix("1", l)).collect();
        labels.extend(cur.labels.iter().map(|l| prefix("2", l)));
        labels.push("3".into());
        cur = Labelled { tournament: t, labels };
    }
    Ok(cur)
}

pub fn build_d(n: usize) -> Result<Tournament> {
    build_d_labelled(n).map(|l| l.tournament)
}

#[derive(Clone, Copy)]
enum Role {
    Spine(usize),
    Block(usize, usize),
}

pub fn build_a_labelled(n: usize) -> Result<Labelled> {
    check_index(Family::A, n, Some(MAX_A))?;
    let mut cur = Labelled {
        tournament: Tournament::single(),
        labels: vec!["v1".into()],
    };
    for k in 2..=n {
        let inner = &cur.tournament;
        let mut roles = Vec::new();
        let mut labels = Vec::new();
        for i in 1..=k {
            roles.push(Role::Spine(i));
            labels.push(format!("v{i}"));
            if i < k {
                for a in 0..inner.n() {
                    roles.push(Role::Block(i, a));
                    labels.push(format!("T{i}/{}", cur.labels[a]));
                }
            }
        }
        let t = Tournament::from_fn(roles.len(), |x, y| match (roles[x], roles[y]) {
            (Role::Spine(i), Role::Spine(j)) => i > j,
            (Role::Block(i, a), Role::Block(j, b)) => {
                if i == j {
                    inner.arc(a, b)
                } else {
                    i < j
                }
            }
            (Role::Spine(i), Role::Block(j, _)) => i <= j,
            (Role::Block(j, _), Role::Spine(i)) => i > j,
        });
        cur = Labelled { tournament: t, labels };
    }
    Ok(cur)
}

pub fn build_a(n: usize) -> Result<Tournament> {
    build_a_labelled(n).map(|l| l.tournament)
}

/// `U_n` on `2n − 1` vertices; id `i` is `u_{i+1}`.
pub fn build_u_labelled(n: usize) -> Result<Labelled> {
    check_index(Family::U, n, None)?;
    let m = 2 * n - 1;
    // 1-based indices i < j: both odd gives u_j -> u_i, otherwise u_i -> u_j.
    let t = Tournament::from_fn(m, |x, y| {
        let (i, j) = (x + 1, y + 1);
        !(i % 2 == 1 && j % 2 == 1)
    });
    let labels = (1..=m).map(|i| format!("u{i}")).collect();
    Ok(Labelled { tournament: t, labels })
}

pub fn build_u(n: usize) -> Result<Tournament> {
    build_u_labelled(n).map(|l| l.tournament)
}

pub fn build(family: Family, n: usize) -> Result<Tournament> {
    build_labelled(family, n).map(|l| l.tournament)
}

pub fn build_labelled(family: Family, n: usize) -> Result<Labelled> {
    match family {
        Family::A => build_a_labelled(n),
        Family::D => build_d_labelled(n),
        Family::U => build_u_labelled(n),
    }
}

/// `|V(A_n)|`: `a_1 = 1`, `a_n = (n − 1)·a_{n−1} + n`.
pub fn size_a(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("A_n needs n >= 1".into()));
    }
    let mut a = BigUint::one();
    let mut fact = BigUint::one();
    for k in 2..=n {
        a = a * (k - 1) + k;
        fact *= k;
        debug_assert!(a <= BigUint::from(2u32) * &fact);
    }
    Ok(a)
}

pub fn size_d(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("D_n needs n >= 1".into()));
    }
    Ok((BigUint::one() << n) - 1u32)
}

/// Ordering `(v1, V(T1), …, vn)` — the layout order of [`build_a`].
pub fn a_spine_order(n: usize) -> Result<Vec<usize>> {
    Ok((0..build_a(n)?.n()).collect())
}

/// Spine vertex ids `v1..vn` of [`build_a`]`(n)`.
pub fn a_spine(n: usize) -> Result<Vec<usize>> {
    let inner = usize::try_from(size_a(n.saturating_sub(1).max(1))?).expect("small");
    let block = if n == 1 { 0 } else { inner };
    Ok((0..n).map(|i| i * (block + 1)).collect())
}

/// Substitutes `inner` for every vertex in `at` (ascending ids) of `host`.
pub fn substitute_many(host: &Tournament, at: &[usize], inner: &Tournament) -> Result<Tournament> {
    let mut t = host.clone();
    // Process from the highest id so earlier ids keep their position.
    let mut ids = at.to_vec();
    ids.sort_unstable();
    for &v in ids.iter().rev() {
        t = t.substitute(v, inner)?.0;
    }
    Ok(t)
}
