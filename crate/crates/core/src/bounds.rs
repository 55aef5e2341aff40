//! The constant recurrences behind the clique-number bound, evaluated in
//! arbitrary precision with a derivation trace for every number.
//!
//! Most of these constants are far too large to write down: `f(2)` already
//! needs `g45(30)`, whose defining ladder has `2^30` rungs. A [`Value`] is
//! therefore either an exact integer or a symbolic term over `+`, `·`, `max`
//! and `g45` kept in a canonical form (flattened, constants folded, operands
//! sorted, dominated `max` operands dropped), so two evaluations of the same
//! recurrence compare equal structurally. Every symbolic term carries a
//! certified exact lower bound.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::rc::Rc;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};

/// Largest `b` for which `g45(b)` is materialized exactly.
pub const G45_EXACT_MAX: u64 = 5;

#[derive(Clone)]
pub enum Value {
    Exact(BigUint),
    Sym(Rc<Sym>),
}

pub struct Sym {
    kind: SymKind,
    hash: u64,
    lower: BigUint,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum SymKind {
    /// `konst + Σ terms`.
    Add(BigUint, Vec<Value>),
    /// `konst · Π factors`.
    Mul(BigUint, Vec<Value>),
    Max(Vec<Value>),
    G45(Value),
}

impl SymKind {
    fn tag(&self) -> u8 {
        match self {
            SymKind::Add(..) => 0,
            SymKind::Mul(..) => 1,
            SymKind::Max(..) => 2,
            SymKind::G45(..) => 3,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A total order used only for canonical sorting (exact before symbolic).
impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a.cmp(b),
            (Value::Exact(_), Value::Sym(_)) => Ordering::Less,
            (Value::Sym(_), Value::Exact(_)) => Ordering::Greater,
            (Value::Sym(a), Value::Sym(b)) => {
                if Rc::ptr_eq(a, b) {
                    return Ordering::Equal;
                }
                a.hash
                    .cmp(&b.hash)
                    .then_with(|| a.kind.tag().cmp(&b.kind.tag()))
                    .then_with(|| a.kind.cmp(&b.kind))
            }
        }
    }
}

impl Value {
    pub fn int(n: u64) -> Value {
        Value::Exact(BigUint::from(n))
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Value::Exact(n) => Some(n),
            Value::Sym(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact().is_some()
    }

    /// Certified lower bound (the value itself when exact).
    pub fn lower(&self) -> BigUint {
        match self {
            Value::Exact(n) => n.clone(),
            Value::Sym(s) => s.lower.clone(),
        }
    }

    fn sym(kind: SymKind) -> Value {
        let mut h = DefaultHasher::new();
        kind.tag().hash(&mut h);
        let hash_vals = |h: &mut DefaultHasher, vs: &[Value]| {
            for v in vs {
                v.hash_code().hash(h);
            }
        };
        let lower = match &kind {
            SymKind::Add(k, ts) => {
                k.hash(&mut h);
                hash_vals(&mut h, ts);
                ts.iter().fold(k.clone(), |acc, t| acc + t.lower())
            }
            SymKind::Mul(k, fs) => {
                k.hash(&mut h);
                hash_vals(&mut h, fs);
                fs.iter().fold(k.clone(), |acc, f| acc * f.lower())
            }
            SymKind::Max(items) => {
                hash_vals(&mut h, items);
                items.iter().map(Value::lower).max().unwrap_or_default()
            }
            SymKind::G45(arg) => {
                arg.hash_code().hash(&mut h);
                let b = arg.lower().to_u64().unwrap_or(u64::MAX).min(G45_EXACT_MAX);
                g45_exact(b).clone()
            }
        };
        Value::Sym(Rc::new(Sym {
            kind,
            hash: h.finish(),
            lower,
        }))
    }

    fn hash_code(&self) -> u64 {
        match self {
            Value::Exact(n) => {
                let mut h = DefaultHasher::new();
                n.hash(&mut h);
                h.finish()
            }
            Value::Sym(s) => s.hash,
        }
    }

    pub fn add(vals: &[Value]) -> Value {
        let mut konst = BigUint::zero();
        let mut terms = Vec::new();
        for v in vals {
            match v {
                Value::Exact(n) => konst += n,
                Value::Sym(s) => match &s.kind {
                    SymKind::Add(k, ts) => {
                        konst += k;
                        terms.extend(ts.iter().cloned());
                    }
                    _ => terms.push(v.clone()),
                },
            }
        }
        terms.sort();
        match (terms.len(), konst.is_zero()) {
            (0, _) => Value::Exact(konst),
            (1, true) => terms.pop().expect("one term"),
            _ => Value::sym(SymKind::Add(konst, terms)),
        }
    }

    pub fn mul(vals: &[Value]) -> Value {
        let mut konst = BigUint::one();
        let mut factors = Vec::new();
        for v in vals {
            match v {
                Value::Exact(n) => konst *= n,
                Value::Sym(s) => match &s.kind {
                    SymKind::Mul(k, fs) => {
                        konst *= k;
                        factors.extend(fs.iter().cloned());
                    }
                    _ => factors.push(v.clone()),
                },
            }
        }
        if konst.is_zero() {
            return Value::Exact(konst);
        }
        factors.sort();
        match (factors.len(), konst.is_one()) {
            (0, _) => Value::Exact(konst),
            (1, true) => factors.pop().expect("one factor"),
            _ => Value::sym(SymKind::Mul(konst, factors)),
        }
    }

    pub fn max(vals: &[Value]) -> Value {
        let mut items = Vec::new();
        let mut best_exact: Option<BigUint> = None;
        for v in vals {
            match v {
                Value::Exact(n) => {
                    if best_exact.as_ref().is_none_or(|b| n > b) {
                        best_exact = Some(n.clone());
                    }
                }
                Value::Sym(s) => match &s.kind {
                    SymKind::Max(inner) => {
                        for x in inner {
                            match x {
                                Value::Exact(n) => {
                                    if best_exact.as_ref().is_none_or(|b| n > b) {
                                        best_exact = Some(n.clone());
                                    }
                                }
                                _ => items.push(x.clone()),
                            }
                        }
                    }
                    _ => items.push(v.clone()),
                },
            }
        }
        items.sort();
        items.dedup();
        // Drop operands another operand provably dominates.
        let mut kept: Vec<Value> = Vec::new();
        for (i, x) in items.iter().enumerate() {
            let dominated = items
                .iter()
                .enumerate()
                .any(|(j, y)| j != i && certainly_ge(y, x) && !(certainly_ge(x, y) && j > i));
            if !dominated {
                kept.push(x.clone());
            }
        }
        if let Some(e) = best_exact {
            if !kept.iter().any(|x| x.lower() >= e) {
                kept.insert(0, Value::Exact(e));
            }
        }
        match kept.len() {
            0 => Value::Exact(BigUint::zero()),
            1 => kept.pop().expect("one item"),
            _ => Value::sym(SymKind::Max(kept)),
        }
    }

    pub fn g45(arg: &Value) -> Value {
        match arg {
            Value::Exact(b) if *b <= BigUint::from(G45_EXACT_MAX) => {
                Value::Exact(g45_exact(b.to_u64().expect("small")).clone())
            }
            _ => Value::sym(SymKind::G45(arg.clone())),
        }
    }

    /// Decimal digit count of the certified lower bound.
    pub fn lower_digits(&self) -> usize {
        self.lower().to_string().len()
    }
}

type Memo = HashMap<(usize, usize, bool), bool>;

fn key(v: &Value) -> usize {
    match v {
        Value::Sym(s) => Rc::as_ptr(s) as usize,
        Value::Exact(_) => 0,
    }
}

/// `a >= b` provable from the structure of the two terms.
pub fn certainly_ge(a: &Value, b: &Value) -> bool {
    ge(a, b, &mut Memo::new())
}

/// `a > b` provable from the structure of the two terms.
pub fn certainly_gt(a: &Value, b: &Value) -> bool {
    gt(a, b, &mut Memo::new())
}

// Both relations recurse over shared subterms, so answers are memoized by
// node identity to keep the walk polynomial in the size of the term DAG.
fn memoized(a: &Value, b: &Value, strict: bool, memo: &mut Memo, f: impl FnOnce(&mut Memo) -> bool) -> bool {
    let k = (key(a), key(b), strict);
    if k.0 != 0 && k.1 != 0 {
        if let Some(&hit) = memo.get(&k) {
            return hit;
        }
        // Provisional answer guards against revisiting during the walk.
        memo.insert(k, false);
    }
    let r = f(memo);
    if k.0 != 0 && k.1 != 0 {
        memo.insert(k, r);
    }
    r
}

fn ge(a: &Value, b: &Value, memo: &mut Memo) -> bool {
    if a == b {
        return true;
    }
    if let Some(bv) = b.exact() {
        return a.lower() >= *bv;
    }
    let Value::Sym(bs) = b else { unreachable!() };
    let Value::Sym(asym) = a else { return false };
    memoized(a, b, false, memo, |memo| {
        if let SymKind::Max(items) = &bs.kind {
            return items.iter().all(|y| ge(a, y, memo));
        }
        match (&asym.kind, &bs.kind) {
            (SymKind::Mul(ka, fa), SymKind::Mul(kb, fb)) if fa == fb => ka >= kb,
            (SymKind::Add(ka, ta), SymKind::Add(kb, tb)) if ta == tb => ka >= kb,
            (SymKind::G45(x), SymKind::G45(y)) => ge(x, y, memo),
            (SymKind::Max(items), _) => items.iter().any(|x| ge(x, b, memo)),
            (SymKind::Add(_, ts), _) => ts.iter().any(|t| ge(t, b, memo)),
            (SymKind::Mul(_, fs), _) => fs.iter().any(|f| ge(f, b, memo)),
            (SymKind::G45(x), _) => ge(x, b, memo),
        }
    })
}

fn gt(a: &Value, b: &Value, memo: &mut Memo) -> bool {
    if let Some(bv) = b.exact() {
        return a.lower() > *bv;
    }
    let Value::Sym(bs) = b else { unreachable!() };
    let Value::Sym(asym) = a else { return false };
    memoized(a, b, true, memo, |memo| {
        if let SymKind::Max(items) = &bs.kind {
            return items.iter().all(|y| gt(a, y, memo));
        }
        let positive = !b.lower().is_zero();
        match &asym.kind {
            SymKind::Mul(ka, fa) => {
                if let SymKind::Mul(kb, fb) = &bs.kind {
                    if fa == fb && ka > kb && positive {
                        return true;
                    }
                }
                let rest = Value::mul(fa);
                *ka >= BigUint::from(2u32) && positive && ge(&rest, b, memo)
            }
            SymKind::Add(ka, ts) => {
                (!ka.is_zero() && ts.iter().any(|t| ge(t, b, memo))) || ts.iter().any(|t| gt(t, b, memo))
            }
            SymKind::Max(items) => items.iter().any(|x| gt(x, b, memo)),
            SymKind::G45(_) => false,
        }
    })
}

fn big_str(n: &BigUint) -> String {
    let s = n.to_string();
    if s.len() <= 40 {
        s
    } else {
        format!("{}.{}e{} ({} digits)", &s[..1], &s[1..6], s.len() - 1, s.len())
    }
}

/// Rendered terms are cut off after this many characters.
const RENDER_LIMIT: usize = 480;

impl Value {
    fn render(&self, out: &mut String) {
        if out.len() > RENDER_LIMIT {
            if !out.ends_with('…') {
                out.push('…');
            }
            return;
        }
        let list = |out: &mut String, konst: Option<&BigUint>, vs: &[Value], sep: &str| {
            let mut first = true;
            if let Some(k) = konst {
                out.push_str(&big_str(k));
                first = false;
            }
            for v in vs {
                if !first {
                    out.push_str(sep);
                }
                first = false;
                v.render(out);
            }
        };
        match self {
            Value::Exact(n) => out.push_str(&big_str(n)),
            Value::Sym(s) => match &s.kind {
                SymKind::Add(k, ts) => {
                    out.push('(');
                    list(out, (!k.is_zero()).then_some(k), ts, " + ");
                    out.push(')');
                }
                SymKind::Mul(k, fs) => list(out, (!k.is_one()).then_some(k), fs, "·"),
                SymKind::Max(items) => {
                    out.push_str("max{");
                    list(out, None, items, ", ");
                    out.push('}');
                }
                SymKind::G45(x) => {
                    out.push_str("g45(");
                    x.render(out);
                    out.push(')');
                }
            },
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(&mut s);
        f.write_str(&s)
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Ramsey upper bound with exact small cases; `C(s+t−2, s−1)` otherwise.
fn ramsey_value(s: &BigUint, t: &BigUint) -> BigUint {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let three = BigUint::from(3u32);
    if *s <= one || *t <= one {
        return one;
    }
    if *s == two {
        return t.clone();
    }
    if *t == two {
        return s.clone();
    }
    if *s == three && *t == three {
        return BigUint::from(6u32);
    }
    // C(s+t−2, k) with k the smaller of s−1, t−1 (always a machine word here).
    let (big, small) = if s >= t { (s, t) } else { (t, s) };
    let k = (small - 1u32).to_u64().expect("Ramsey second argument fits in u64");
    binomial(&(big + small - 2u32), k)
}

fn binomial(n: &BigUint, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

fn factorial_value(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn q_value(b: u64, r: u64, s: u64) -> BigUint {
    let f = factorial_value(r);
    let first = BigUint::from(b) * &f * &f + 1u32;
    ramsey_value(&first, &BigUint::from(s + 1)) + s
}

/// `c_1 … c_{2^b+1}` of the mountain ladder, exactly.
fn ladder_values(b: u64) -> Vec<BigUint> {
    let rungs = 1u64 << b;
    let mut ladder = vec![BigUint::one()];
    for r in 1..=rungs {
        let mut c = ladder[r as usize - 1].clone().max(BigUint::from(r));
        for s in 1..=r {
            c = BigUint::from(b + 1) * q_value(b, r, s) + c;
        }
        ladder.push(c);
    }
    ladder
}

fn g45_exact(b: u64) -> &'static BigUint {
    static TABLE: OnceLock<Vec<BigUint>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=G45_EXACT_MAX)
            .map(|b| ladder_values(b).pop().expect("non-empty ladder"))
            .collect()
    });
    &table[b.min(G45_EXACT_MAX) as usize]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Const,
    Add,
    Mul,
    Max,
    Pow2,
    Factorial,
    Ramsey,
    G45,
}

pub struct Node {
    pub label: String,
    pub op: Op,
    pub args: Vec<BoundExpr>,
    pub value: Value,
}

/// A number together with the formula tree it was computed from.
#[derive(Clone)]
pub struct BoundExpr(Rc<Node>);

fn eval(op: &Op, args: &[Value], konst: Option<&Value>) -> Result<Value> {
    let exact_u64 = |v: &Value, what: &str| -> Result<u64> {
        v.exact()
            .and_then(|n| n.to_u64())
            .ok_or_else(|| Error::InvalidArgument(format!("{what} needs a small exact argument")))
    };
    Ok(match op {
        Op::Const => konst.expect("constant node").clone(),
        Op::Add => Value::add(args),
        Op::Mul => Value::mul(args),
        Op::Max => Value::max(args),
        Op::Pow2 => Value::Exact(BigUint::one() << exact_u64(&args[0], "power of two")?),
        Op::Factorial => Value::Exact(factorial_value(exact_u64(&args[0], "factorial")?)),
        Op::Ramsey => {
            let (s, t) = match (args[0].exact(), args[1].exact()) {
                (Some(s), Some(t)) => (s, t),
                _ => return Err(Error::InvalidArgument("Ramsey bound needs exact arguments".into())),
            };
            Value::Exact(ramsey_value(s, t))
        }
        Op::G45 => Value::g45(&args[0]),
    })
}

impl BoundExpr {
    pub fn constant(label: impl Into<String>, n: impl Into<BigUint>) -> BoundExpr {
        BoundExpr(Rc::new(Node {
            label: label.into(),
            op: Op::Const,
            args: vec![],
            value: Value::Exact(n.into()),
        }))
    }

    pub fn int(n: u64) -> BoundExpr {
        Self::constant(n.to_string(), n)
    }

    pub fn apply(label: impl Into<String>, op: Op, args: Vec<BoundExpr>) -> Result<BoundExpr> {
        let vals: Vec<Value> = args.iter().map(|a| a.value().clone()).collect();
        let value = eval(&op, &vals, None)?;
        Ok(BoundExpr(Rc::new(Node {
            label: label.into(),
            op,
            args,
            value,
        })))
    }

    fn op2(label: &str, op: Op, a: &BoundExpr, b: &BoundExpr) -> Result<BoundExpr> {
        Self::apply(label, op, vec![a.clone(), b.clone()])
    }

    pub fn value(&self) -> &Value {
        &self.0.value
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn exact_usize(&self) -> Option<usize> {
        self.value().exact().and_then(|n| n.to_usize())
    }

    /// Recomputes every node of the trace from its operands and checks the
    /// stored values. Shared subterms are visited once.
    pub fn reevaluate(&self) -> bool {
        fn go(e: &BoundExpr, seen: &mut HashMap<*const Node, bool>) -> bool {
            let key = Rc::as_ptr(&e.0);
            if let Some(&ok) = seen.get(&key) {
                return ok;
            }
            let args_ok = e.0.args.iter().all(|a| go(a, seen));
            let vals: Vec<Value> = e.0.args.iter().map(|a| a.value().clone()).collect();
            let ok = args_ok
                && match eval(&e.0.op, &vals, Some(&e.0.value)) {
                    Ok(v) => v == e.0.value,
                    Err(_) => false,
                };
            seen.insert(key, ok);
            ok
        }
        go(self, &mut HashMap::new())
    }

    /// Trace as JSON, cut off below `depth`.
    pub fn trace_json(&self, depth: usize) -> serde_json::Value {
        let n = &self.0;
        let mut v = json!({
            "label": n.label,
            "op": format!("{:?}", n.op).to_lowercase(),
            "value": n.value.to_string(),
            "exact": n.value.is_exact(),
        });
        if !n.value.is_exact() {
            v["lower_bound_digits"] = json!(n.value.lower_digits());
        }
        if !n.args.is_empty() {
            v["args"] = if depth == 0 {
                json!(format!("{} operands elided", n.args.len()))
            } else {
                json!(n.args.iter().map(|a| a.trace_json(depth - 1)).collect::<Vec<_>>())
            };
        }
        v
    }

    /// Indented text rendering of the trace down to `depth`.
    pub fn trace_text(&self, depth: usize) -> String {
        fn go(e: &BoundExpr, indent: usize, depth: usize, out: &mut String) {
            let n = &e.0;
            out.push_str(&format!("{}{} = {}\n", "  ".repeat(indent), n.label, n.value));
            if depth == 0 {
                if !n.args.is_empty() {
                    out.push_str(&format!("{}…\n", "  ".repeat(indent + 1)));
                }
                return;
            }
            for a in &n.args {
                go(a, indent + 1, depth - 1, out);
            }
        }
        let mut s = String::new();
        go(self, 0, depth, &mut s);
        s
    }
}

impl fmt::Debug for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.0.label, self.0.value)
    }
}

/// Upper bound on the Ramsey number `R(s, t)`.
pub fn ramsey_upper(s: u64, t: u64) -> Result<BoundExpr> {
    if s == 0 || t == 0 {
        return Err(Error::InvalidArgument("Ramsey arguments must be positive".into()));
    }
    BoundExpr::apply(format!("R({s},{t})"), Op::Ramsey, vec![BoundExpr::int(s), BoundExpr::int(t)])
}

/// `q = R(b·(r!)² + 1, s + 1) + s`.
pub fn q_of(b: u64, r: u64, s: u64) -> Result<BoundExpr> {
    if r == 0 || s == 0 || s > r {
        return Err(Error::InvalidArgument("need r >= 1 and 1 <= s <= r".into()));
    }
    let fr = BoundExpr::apply(format!("{r}!"), Op::Factorial, vec![BoundExpr::int(r)])?;
    let sq = BoundExpr::op2(&format!("({r}!)^2"), Op::Mul, &fr, &fr)?;
    let first = BoundExpr::apply(
        format!("b·({r}!)^2 + 1"),
        Op::Add,
        vec![BoundExpr::op2("b·(r!)^2", Op::Mul, &BoundExpr::int(b), &sq)?, BoundExpr::int(1)],
    )?;
    let second = BoundExpr::int(s + 1);
    let ram = BoundExpr::op2("R(b·(r!)^2 + 1, s + 1)", Op::Ramsey, &first, &second)?;
    BoundExpr::op2(&format!("q(b={b}, r={r}, s={s})"), Op::Add, &ram, &BoundExpr::int(s))
}

/// The thresholds `c_1 … c_{2^b+1}`: tournaments whose out-neighbourhoods
/// all have clique number at most `b` and whose clique number reaches `c_r`
/// contain an `r`-mountain. Each rung starts from `max(c_r, r)` and adds
/// `(b+1)·q(b, r, s)` for `s = 1..=r`.
pub fn mountain_ladder(b: u64) -> Result<Vec<BoundExpr>> {
    if b > G45_EXACT_MAX {
        return Err(Error::SizeLimit {
            what: "materialized mountain ladder (b)",
            size: b as usize,
            limit: G45_EXACT_MAX as usize,
        });
    }
    let rungs = 1u64 << b;
    let mut ladder = vec![BoundExpr::constant("c_1 (every non-empty tournament has a 1-mountain)", 1u32)];
    let b_plus = BoundExpr::int(b + 1);
    for r in 1..=rungs {
        let mut c = BoundExpr::op2(
            &format!("max(c_{r}, {r})"),
            Op::Max,
            &ladder[r as usize - 1],
            &BoundExpr::int(r),
        )?;
        for s in 1..=r {
            let step = BoundExpr::op2("(b+1)·q", Op::Mul, &b_plus, &q_of(b, r, s)?)?;
            c = BoundExpr::op2(&format!("threshold for an ({r},{})-mountain", s + 1), Op::Add, &step, &c)?;
        }
        ladder.push(BoundExpr::apply(format!("c_{}", r + 1), Op::Add, vec![c])?);
    }
    Ok(ladder)
}

/// `g45(b)`: clique number forcing a vertex whose out-neighbourhood (and one
/// whose in-neighbourhood) has clique number at least `b`.
pub fn g45(b: &BoundExpr) -> Result<BoundExpr> {
    BoundExpr::apply(format!("g45({})", b.node().label), Op::G45, vec![b.clone()])
}

pub fn g45_of(b: u64) -> Result<BoundExpr> {
    g45(&BoundExpr::int(b))
}

/// Constant ladder of the half-bag-chain lemma: `c_t = c` and
/// `c_i = 2·g45(c_{i+1}) + 2^{i+1}·f(c_{i+1})`, then `C = 2·g45(c_1) + 1`.
/// Returns `([c_1, …, c_t], C)`.
pub fn c_ladder_2a(
    c: &BoundExpr,
    t: usize,
    f: &dyn Fn(&BoundExpr) -> Result<BoundExpr>,
) -> Result<(Vec<BoundExpr>, BoundExpr)> {
    if t == 0 {
        return Err(Error::InvalidArgument("ladder length must be positive".into()));
    }
    let two = BoundExpr::int(2);
    let mut desc = vec![c.clone()];
    for i in (1..t).rev() {
        let next = desc.last().expect("non-empty").clone();
        let g = BoundExpr::op2("2·g45(c_{i+1})", Op::Mul, &two, &g45(&next)?)?;
        let p = BoundExpr::apply(format!("2^{}", i + 1), Op::Pow2, vec![BoundExpr::int(i as u64 + 1)])?;
        let fp = BoundExpr::op2("2^{i+1}·f(c_{i+1})", Op::Mul, &p, &f(&next)?)?;
        desc.push(BoundExpr::op2(&format!("c_{i}"), Op::Add, &g, &fp)?);
    }
    desc.reverse();
    let c1 = &desc[0];
    let big = BoundExpr::apply(
        "C = 2·g45(c_1) + 1",
        Op::Add,
        vec![BoundExpr::op2("2·g45(c_1)", Op::Mul, &two, &g45(c1)?)?, BoundExpr::int(1)],
    )?;
    Ok((desc, big))
}

fn d_size(n: usize) -> u64 {
    (1u64 << n) - 1
}

/// Two-bag chain constant: `1 + C_half(g, c, |V(D_n)|)` with
/// `g(x) = c_large + g45((1 + |V(D_{n−1})|)·x)`.
pub fn c54(c_large: &BoundExpr, c: &BoundExpr, n: usize) -> Result<BoundExpr> {
    if n < 2 {
        return Err(Error::InvalidArgument("two-bag chain constant needs n >= 2".into()));
    }
    let factor = BoundExpr::int(1 + d_size(n - 1));
    let g = |x: &BoundExpr| -> Result<BoundExpr> {
        let scaled = BoundExpr::op2("(1+|D_{n-1}|)·x", Op::Mul, &factor, x)?;
        BoundExpr::op2("c_large + g45((1+|D_{n-1}|)·x)", Op::Add, c_large, &g45(&scaled)?)
    };
    let (_, half) = c_ladder_2a(c, d_size(n) as usize, &g)?;
    BoundExpr::op2("two-bag chain constant", Op::Add, &BoundExpr::int(1), &half)
}

/// Length-8 chain constant: three nested applications of [`c54`] starting
/// from `c_large`.
pub fn c55(c_large: &BoundExpr, c: &BoundExpr, n: usize) -> Result<BoundExpr> {
    let mut level = c_large.clone();
    for i in 1..=3 {
        let next = c54(&level, c, n)?;
        level = BoundExpr::apply(format!("chain level c_{i}"), Op::Add, vec![next])?;
    }
    BoundExpr::apply("length-8 chain constant", Op::Add, vec![level])
}

/// `f(1) = 0`; `f(t) = 16t·max{c_large, C_8(c_large, c_small), (4·t! + 1)·c_small}`
/// with `c_small = f(t−1)`, `c_large = 2^t·c_small`, chain index `n = t`.
pub fn f_main(t: usize) -> Result<BoundExpr> {
    if t == 0 {
        return Err(Error::InvalidArgument("f is defined for t >= 1".into()));
    }
    if t == 1 {
        return Ok(BoundExpr::constant("f(1)", 0u32));
    }
    let cs = f_main(t - 1)?;
    let tt = BoundExpr::int(t as u64);
    let cl = BoundExpr::op2(
        "c_large = 2^t·c_small",
        Op::Mul,
        &BoundExpr::apply(format!("2^{t}"), Op::Pow2, vec![tt.clone()])?,
        &cs,
    )?;
    let chain = c55(&cl, &cs, t)?;
    let fact = BoundExpr::apply(format!("{t}!"), Op::Factorial, vec![tt.clone()])?;
    let coeff = BoundExpr::apply(
        "4·t! + 1",
        Op::Add,
        vec![BoundExpr::op2("4·t!", Op::Mul, &BoundExpr::int(4), &fact)?, BoundExpr::int(1)],
    )?;
    let third = BoundExpr::op2("(4·t! + 1)·c_small", Op::Mul, &coeff, &cs)?;
    let inner = BoundExpr::apply("max{c_large, chain constant, (4·t!+1)·c_small}", Op::Max, vec![cl, chain, third])?;
    BoundExpr::op2(&format!("f({t})"), Op::Mul, &BoundExpr::int(16 * t as u64), &inner)
}
