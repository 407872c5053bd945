//! Exhaustive Latin-square search under identity constraints.
//!
//! Cells are filled row-major with candidates in ascending order, so results
//! come out in lexicographic order of the row-major table. Each required
//! identity is compiled to a pair of term programs. Each instance is filed
//! under the first unassigned cell (or unknown `e(x)`, `f(x)`) its evaluation
//! reaches and is re-evaluated when that slot is filled. An instance is
//! decided once every cell it reads is assigned; one blocked only on the
//! outermost product of a side, with the other side known, fixes the value of
//! that cell, and clashing fixed values prune the branch.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::identities::{holds, Flag};
use crate::table::{Elem, Quasigroup};

/// Default order bound with no identity constraints.
pub const DEFAULT_UNCONSTRAINED_BOUND: usize = 5;
/// Default order bound when at least one identity is required.
pub const DEFAULT_CONSTRAINED_BOUND: usize = 6;
/// Hard limit imposed by the bitmask representation.
pub const MAX_SEARCH_ORDER: usize = 64;

const EMPTY: u8 = u8::MAX;

/// Required flags plus structural constraints.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstraintSet {
    pub required: Vec<Flag>,
    /// Fix `x·x = x` on the diagonal; implied by requiring `idempotent`.
    pub idempotent_diagonal: bool,
    /// Fix row and column `0` to make `0` a two-sided identity.
    pub loop_identity_zero: bool,
    /// Prescribed cells `(x, y, x·y)`.
    pub cells: Vec<(Elem, Elem, Elem)>,
}

impl ConstraintSet {
    pub fn none() -> ConstraintSet {
        ConstraintSet::default()
    }

    pub fn require(flags: &[Flag]) -> ConstraintSet {
        ConstraintSet { required: flags.to_vec(), ..ConstraintSet::default() }
    }

    pub fn with_loop_identity_zero(mut self) -> ConstraintSet {
        self.loop_identity_zero = true;
        self
    }

    pub fn with_cell(mut self, x: Elem, y: Elem, v: Elem) -> ConstraintSet {
        self.cells.push((x, y, v));
        self
    }

    fn has_identities(&self) -> bool {
        self.idempotent_diagonal || self.required.iter().any(|f| !identities_for(*f).is_empty() || *f == Flag::Idempotent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchMode {
    Count,
    /// At most this many tables.
    Enumerate(usize),
    FirstWitness,
    /// First table meeting the constraints but failing the flag.
    FirstCounterexample(Flag),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SearchOutcome {
    Count(u64),
    Tables(Vec<Quasigroup>),
}

impl SearchOutcome {
    pub fn count(&self) -> u64 {
        match self {
            SearchOutcome::Count(c) => *c,
            SearchOutcome::Tables(t) => t.len() as u64,
        }
    }

    pub fn tables(self) -> Vec<Quasigroup> {
        match self {
            SearchOutcome::Count(_) => Vec::new(),
            SearchOutcome::Tables(t) => t,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Overrides the default order bounds.
    pub max_order: Option<usize>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Fix the first row to `0 1 … n-1`.
    pub symmetry: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Term {
    Var(u8),
    Mul(Box<Term>, Box<Term>),
    E(Box<Term>),
    F(Box<Term>),
}

fn v(i: u8) -> Term {
    Term::Var(i)
}

fn m(a: Term, b: Term) -> Term {
    Term::Mul(Box::new(a), Box::new(b))
}

fn e(a: Term) -> Term {
    Term::E(Box::new(a))
}

fn f(a: Term) -> Term {
    Term::F(Box::new(a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Var(u8),
    Mul,
    E,
    F,
}

fn compile(t: &Term, out: &mut Vec<Op>) {
    match t {
        Term::Var(i) => out.push(Op::Var(*i)),
        Term::Mul(a, b) => {
            compile(a, out);
            compile(b, out);
            out.push(Op::Mul);
        }
        Term::E(a) => {
            compile(a, out);
            out.push(Op::E);
        }
        Term::F(a) => {
            compile(a, out);
            out.push(Op::F);
        }
    }
}

#[derive(Debug, Clone)]
struct Identity {
    vars: usize,
    lhs: Vec<Op>,
    rhs: Vec<Op>,
}

impl Identity {
    fn new(vars: usize, lhs: Term, rhs: Term) -> Identity {
        let (mut l, mut r) = (Vec::new(), Vec::new());
        compile(&lhs, &mut l);
        compile(&rhs, &mut r);
        Identity { vars, lhs: l, rhs: r }
    }
}

/// The equalities defining an identity flag; empty for flags checked on
/// complete tables only.
fn identities_for(flag: Flag) -> Vec<Identity> {
    let (x, y, z, u) = (0, 1, 2, 3);
    let left_distributive = || Identity::new(3, m(v(x), m(v(y), v(z))), m(m(v(x), v(y)), m(v(x), v(z))));
    let right_distributive = || Identity::new(3, m(m(v(x), v(y)), v(z)), m(m(v(x), v(z)), m(v(y), v(z))));
    let left_semi_symmetric = || Identity::new(2, m(v(x), m(v(x), v(y))), v(y));
    let commutative = || Identity::new(2, m(v(x), v(y)), m(v(y), v(x)));
    match flag {
        Flag::Unipotent => vec![Identity::new(2, m(v(x), v(x)), m(v(y), v(y)))],
        Flag::Medial => vec![Identity::new(
            4,
            m(m(v(x), v(y)), m(v(z), v(u))),
            m(m(v(x), v(z)), m(v(y), v(u))),
        )],
        Flag::LeftDistributive => vec![left_distributive()],
        Flag::RightDistributive => vec![right_distributive()],
        Flag::Distributive => vec![left_distributive(), right_distributive()],
        Flag::LeftSemiSymmetric => vec![left_semi_symmetric()],
        Flag::TS => vec![left_semi_symmetric(), commutative()],
        Flag::Commutative => vec![commutative()],
        Flag::LeftF => vec![Identity::new(3, m(v(x), m(v(y), v(z))), m(m(v(x), v(y)), m(e(v(x)), v(z))))],
        Flag::RightF => vec![Identity::new(3, m(m(v(x), v(y)), v(z)), m(m(v(x), f(v(z))), m(v(y), v(z))))],
        Flag::LeftSM => vec![Identity::new(3, m(m(v(x), v(x)), m(v(y), v(z))), m(m(v(x), v(y)), m(v(x), v(z))))],
        Flag::RightSM => vec![Identity::new(3, m(m(v(z), v(y)), m(v(x), v(x))), m(m(v(z), v(x)), m(v(y), v(x))))],
        Flag::LeftE => vec![Identity::new(3, m(v(x), m(v(y), v(z))), m(m(f(v(x)), v(y)), m(v(x), v(z))))],
        Flag::RightE => vec![Identity::new(3, m(m(v(z), v(y)), v(x)), m(m(v(z), v(x)), m(v(y), e(v(x)))))],
        Flag::Quasigroup
        | Flag::Idempotent
        | Flag::Loop
        | Flag::LeftLoop
        | Flag::RightLoop
        | Flag::LIP
        | Flag::RIP
        | Flag::IP => Vec::new(),
    }
}

fn instances_of(ids: &[Identity], n: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for (k, id) in ids.iter().enumerate() {
        let total = n.pow(id.vars as u32);
        for mut code in 0..total {
            let mut vars = [0u8; 4];
            for v in vars[..id.vars].iter_mut().rev() {
                *v = (code % n) as u8;
                code /= n;
            }
            out.push(Instance { id: k as u8, vars });
        }
    }
    out
}

fn leaf_flag(flag: Flag) -> bool {
    matches!(flag, Flag::Loop | Flag::LeftLoop | Flag::RightLoop | Flag::LIP | Flag::RIP | Flag::IP)
}

/// One concrete instance of a required identity.
#[derive(Clone, Copy)]
struct Instance {
    id: u8,
    vars: [u8; 4],
}

/// Where an undecided evaluation is stuck: a cell index, or `n² + x` for an
/// unknown `e(x)`, or `n² + n + x` for an unknown `f(x)`.
type Slot = usize;

enum Eval {
    Blocked(Slot),
    /// Blocked only on the outermost product of one side while the other
    /// side is known, which fixes that cell's value.
    Forced(Slot, u8),
    Holds,
    Fails,
}

#[derive(Clone)]
struct State {
    n: usize,
    cells: Vec<u8>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
    /// `e[x] = y` once `x·y = x` is assigned.
    e: Vec<u8>,
    /// `f[x] = y` once `y·x = x` is assigned.
    f: Vec<u8>,
    /// Undecided instances, each filed under the slot blocking it. A filled
    /// slot keeps its list untouched so undo only pops what was pushed.
    watches: Vec<Vec<u32>>,
    /// Slots pushed onto since the search began, popped on undo.
    moved: Vec<Slot>,
    /// Values implied for unassigned cells by [`Eval::Forced`].
    forced: Vec<u8>,
    /// Cells whose `forced` entry was set, cleared on undo.
    forced_trail: Vec<usize>,
    /// Lengths of `moved` and `forced_trail` before each live assignment.
    marks: Vec<(usize, usize)>,
}

impl State {
    fn new(n: usize) -> State {
        State {
            n,
            cells: vec![EMPTY; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
            e: vec![EMPTY; n],
            f: vec![EMPTY; n],
            watches: vec![Vec::new(); n * n + 2 * n],
            moved: Vec::new(),
            forced: vec![EMPTY; n * n],
            forced_trail: Vec::new(),
            marks: Vec::new(),
        }
    }

    fn available(&self, r: usize, c: usize) -> u64 {
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        full & !(self.row_used[r] | self.col_used[c])
    }

    fn set(&mut self, r: usize, c: usize, val: usize) {
        self.cells[r * self.n + c] = val as u8;
        self.row_used[r] |= 1 << val;
        self.col_used[c] |= 1 << val;
        if val == r {
            self.e[r] = c as u8;
        }
        if val == c {
            self.f[c] = r as u8;
        }
    }

    fn clear(&mut self, r: usize, c: usize) {
        let val = self.cells[r * self.n + c] as usize;
        self.cells[r * self.n + c] = EMPTY;
        self.row_used[r] &= !(1 << val);
        self.col_used[c] &= !(1 << val);
        if val == r {
            self.e[r] = EMPTY;
        }
        if val == c {
            self.f[c] = EMPTY;
        }
    }

    /// Prescribes a cell before watches are built; `false` on a Latin conflict.
    fn prescribe(&mut self, r: usize, c: usize, val: usize) -> bool {
        let cur = self.cells[r * self.n + c];
        if cur != EMPTY {
            return cur as usize == val;
        }
        if self.available(r, c) & (1 << val) == 0 {
            return false;
        }
        self.set(r, c, val);
        true
    }

    /// Evaluates a side; on failure reports the blocking slot and whether it
    /// is the outermost product.
    fn eval(&self, prog: &[Op], vars: &[u8]) -> std::result::Result<u8, (Slot, bool)> {
        let n = self.n;
        let mut stack = [0u8; 16];
        let mut sp = 0;
        for op in prog {
            match *op {
                Op::Var(i) => {
                    stack[sp] = vars[i as usize];
                    sp += 1;
                }
                Op::Mul => {
                    let b = stack[sp - 1] as usize;
                    let a = stack[sp - 2] as usize;
                    let val = self.cells[a * n + b];
                    if val == EMPTY {
                        return Err((a * n + b, sp == 2 && std::ptr::eq(op, prog.last().expect("nonempty"))));
                    }
                    sp -= 1;
                    stack[sp - 1] = val;
                }
                Op::E => {
                    let a = stack[sp - 1] as usize;
                    if self.e[a] == EMPTY {
                        return Err((n * n + a, false));
                    }
                    stack[sp - 1] = self.e[a];
                }
                Op::F => {
                    let a = stack[sp - 1] as usize;
                    if self.f[a] == EMPTY {
                        return Err((n * n + n + a, false));
                    }
                    stack[sp - 1] = self.f[a];
                }
            }
        }
        Ok(stack[0])
    }

    fn eval_instance(&self, ids: &[Identity], inst: &Instance) -> Eval {
        let id = &ids[inst.id as usize];
        let vars = &inst.vars[..id.vars];
        match (self.eval(&id.lhs, vars), self.eval(&id.rhs, vars)) {
            (Ok(l), Ok(r)) if l == r => Eval::Holds,
            (Ok(_), Ok(_)) => Eval::Fails,
            (Ok(v), Err((slot, true))) | (Err((slot, true)), Ok(v)) => Eval::Forced(slot, v),
            (Err((slot, _)), _) | (_, Err((slot, _))) => Eval::Blocked(slot),
        }
    }

    /// Records that `cell` must hold `val`; `false` on a contradiction.
    fn force(&mut self, cell: usize, val: u8) -> bool {
        let cur = self.forced[cell];
        if cur != EMPTY {
            return cur == val;
        }
        let (r, c) = (cell / self.n, cell % self.n);
        if self.available(r, c) & (1 << val) == 0 {
            return false;
        }
        let clash = (0..self.n).any(|k| {
            (k != c && self.forced[r * self.n + k] == val) || (k != r && self.forced[k * self.n + c] == val)
        });
        if clash {
            return false;
        }
        self.forced[cell] = val;
        self.forced_trail.push(cell);
        true
    }

    /// Candidate values for an unassigned cell.
    fn candidates(&self, r: usize, c: usize) -> u64 {
        let avail = self.available(r, c);
        match self.forced[r * self.n + c] {
            EMPTY => avail,
            v => avail & (1 << v),
        }
    }

    /// Files every instance under its blocking slot; `false` if one already fails.
    fn init_watches(&mut self, ids: &[Identity], instances: &[Instance]) -> bool {
        for (i, inst) in instances.iter().enumerate() {
            match self.eval_instance(ids, inst) {
                Eval::Blocked(slot) => self.watches[slot].push(i as u32),
                Eval::Forced(slot, v) => {
                    self.watches[slot].push(i as u32);
                    if !self.force(slot, v) {
                        return false;
                    }
                }
                Eval::Holds => {}
                Eval::Fails => return false,
            }
        }
        true
    }

    /// Assigns a cell and re-examines the instances it unblocks. Always
    /// pushes an undo mark; returns `false` on a violated instance.
    fn assign(&mut self, ids: &[Identity], instances: &[Instance], r: usize, c: usize, val: usize) -> bool {
        let n = self.n;
        self.set(r, c, val);
        self.marks.push((self.moved.len(), self.forced_trail.len()));
        let clash = (0..n).any(|k| {
            (k != c && self.cells[r * n + k] == EMPTY && self.forced[r * n + k] == val as u8)
                || (k != r && self.cells[k * n + c] == EMPTY && self.forced[k * n + c] == val as u8)
        });
        if clash {
            return false;
        }
        let mut slots = [r * n + c, usize::MAX, usize::MAX];
        if val == r {
            slots[1] = n * n + r;
        }
        if val == c {
            slots[2] = n * n + n + c;
        }
        for slot in slots {
            if slot == usize::MAX {
                continue;
            }
            for k in 0..self.watches[slot].len() {
                let i = self.watches[slot][k];
                match self.eval_instance(ids, &instances[i as usize]) {
                    Eval::Blocked(next) => {
                        self.watches[next].push(i);
                        self.moved.push(next);
                    }
                    Eval::Forced(next, v) => {
                        self.watches[next].push(i);
                        self.moved.push(next);
                        if !self.force(next, v) {
                            return false;
                        }
                    }
                    Eval::Holds => {}
                    Eval::Fails => return false,
                }
            }
        }
        true
    }

    fn unassign(&mut self, r: usize, c: usize) {
        let (mark, forced_mark) = self.marks.pop().expect("unassign matches an assign");
        while self.forced_trail.len() > forced_mark {
            let cell = self.forced_trail.pop().expect("length checked");
            self.forced[cell] = EMPTY;
        }
        while self.moved.len() > mark {
            let slot = self.moved.pop().expect("length checked");
            self.watches[slot].pop();
        }
        self.clear(r, c);
    }

    fn to_quasigroup(&self) -> Quasigroup {
        Quasigroup::from_table(self.n, self.cells.iter().map(|&c| c as usize).collect())
            .expect("complete search states are Latin")
    }
}

struct Problem {
    ids: Vec<Identity>,
    instances: Vec<Instance>,
    leaf_flags: Vec<Flag>,
    /// Free cells in row-major order.
    order: Vec<(usize, usize)>,
    mode: SearchMode,
}

enum Collect {
    Count(u64),
    Tables(Vec<Quasigroup>),
}

impl Problem {
    fn limit(&self) -> usize {
        match self.mode {
            SearchMode::Count => usize::MAX,
            SearchMode::Enumerate(l) => l,
            SearchMode::FirstWitness | SearchMode::FirstCounterexample(_) => 1,
        }
    }

    /// Returns `true` when the search should stop.
    fn leaf(&self, st: &State, acc: &mut Collect) -> bool {
        let needs_table = !self.leaf_flags.is_empty() || !matches!(self.mode, SearchMode::Count);
        if !needs_table {
            if let Collect::Count(c) = acc {
                *c += 1;
            }
            return false;
        }
        let q = st.to_quasigroup();
        if !self.leaf_flags.iter().all(|f| holds(&q, *f)) {
            return false;
        }
        if let SearchMode::FirstCounterexample(target) = self.mode {
            if holds(&q, target) {
                return false;
            }
        }
        match acc {
            Collect::Count(c) => {
                *c += 1;
                false
            }
            Collect::Tables(t) => {
                t.push(q);
                t.len() >= self.limit()
            }
        }
    }

    fn rec(&self, st: &mut State, pos: usize, acc: &mut Collect) -> bool {
        if pos == self.order.len() {
            return self.leaf(st, acc);
        }
        let (r, c) = self.order[pos];
        let mut avail = st.candidates(r, c);
        while avail != 0 {
            let val = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            let ok = st.assign(&self.ids, &self.instances, r, c, val);
            let stop = ok && self.rec(st, pos + 1, acc);
            st.unassign(r, c);
            if stop {
                return true;
            }
        }
        false
    }

    /// Value prefixes for the first `depth` free cells that survive
    /// propagation, in lexicographic order.
    fn frontier(&self, root: &mut State, depth: usize) -> Vec<Vec<u8>> {
        fn go(p: &Problem, st: &mut State, pos: usize, depth: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if pos == depth {
                out.push(prefix.clone());
                return;
            }
            let (r, c) = p.order[pos];
            let mut avail = st.candidates(r, c);
            while avail != 0 {
                let val = avail.trailing_zeros() as usize;
                avail &= avail - 1;
                if st.assign(&p.ids, &p.instances, r, c, val) {
                    prefix.push(val as u8);
                    go(p, st, pos + 1, depth, prefix, out);
                    prefix.pop();
                }
                st.unassign(r, c);
            }
        }
        let mut out = Vec::new();
        go(self, root, 0, depth.min(self.order.len()), &mut Vec::new(), &mut out);
        out
    }

    /// Replays a prefix on a copy of `root` and searches the rest.
    fn subtree(&self, root: &State, prefix: &[u8]) -> Collect {
        let mut st = root.clone();
        let mut acc = self.empty_acc();
        for (pos, &val) in prefix.iter().enumerate() {
            let (r, c) = self.order[pos];
            let ok = st.assign(&self.ids, &self.instances, r, c, val as usize);
            debug_assert!(ok, "frontier prefixes are consistent");
        }
        self.rec(&mut st, prefix.len(), &mut acc);
        acc
    }

    fn empty_acc(&self) -> Collect {
        match self.mode {
            SearchMode::Count => Collect::Count(0),
            _ => Collect::Tables(Vec::new()),
        }
    }

    fn run(&self, root: State, parallel: bool) -> SearchOutcome {
        if !parallel {
            let mut acc = self.empty_acc();
            self.rec(&mut root.clone(), 0, &mut acc);
            return finish(acc);
        }
        let depth = split_depth(&self.order, root.n);
        let mut scratch = root.clone();
        let subtrees = self.frontier(&mut scratch, depth);
        let run_one = |prefix: &Vec<u8>| self.subtree(&root, prefix);
        match self.mode {
            SearchMode::Count => SearchOutcome::Count(
                subtrees.par_iter().map(|st| match run_one(st) {
                    Collect::Count(c) => c,
                    Collect::Tables(t) => t.len() as u64,
                })
                .sum(),
            ),
            SearchMode::Enumerate(limit) => {
                let parts: Vec<Vec<Quasigroup>> = subtrees
                    .par_iter()
                    .map(|st| match run_one(st) {
                        Collect::Tables(t) => t,
                        Collect::Count(_) => Vec::new(),
                    })
                    .collect();
                let mut all: Vec<Quasigroup> = parts.into_iter().flatten().collect();
                all.truncate(limit);
                SearchOutcome::Tables(all)
            }
            SearchMode::FirstWitness | SearchMode::FirstCounterexample(_) => {
                let found = subtrees.par_iter().find_map_first(|st| match run_one(st) {
                    Collect::Tables(mut t) if !t.is_empty() => Some(t.remove(0)),
                    _ => None,
                });
                SearchOutcome::Tables(found.into_iter().collect())
            }
        }
    }
}

fn finish(acc: Collect) -> SearchOutcome {
    match acc {
        Collect::Count(c) => SearchOutcome::Count(c),
        Collect::Tables(t) => SearchOutcome::Tables(t),
    }
}

/// Number of free cells assigned before handing subtrees to workers.
fn split_depth(order: &[(usize, usize)], n: usize) -> usize {
    if n <= 3 {
        return 0;
    }
    order.len().min(n)
}

fn bound_for(cs: &ConstraintSet, opts: &SearchOptions) -> usize {
    opts.max_order.unwrap_or(if cs.has_identities() { DEFAULT_CONSTRAINED_BOUND } else { DEFAULT_UNCONSTRAINED_BOUND })
}

/// Searches with default options.
pub fn search_quasigroups(n: usize, cs: &ConstraintSet, mode: SearchMode) -> Result<SearchOutcome> {
    search_with(n, cs, mode, &SearchOptions::default())
}

pub fn search_with(n: usize, cs: &ConstraintSet, mode: SearchMode, opts: &SearchOptions) -> Result<SearchOutcome> {
    let bound = bound_for(cs, opts).min(MAX_SEARCH_ORDER);
    if n > bound {
        return Err(Error::OrderBoundExceeded { order: n, bound });
    }
    if n == 0 {
        return Err(Error::InconsistentConstraints("order must be positive".into()));
    }
    let mut root = State::new(n);
    let mut prescribe = |r: usize, c: usize, val: usize, why: &str| -> Result<()> {
        if r >= n || c >= n || val >= n {
            return Err(Error::InconsistentConstraints(format!("{why}: cell ({r}, {c}) = {val} is out of range")));
        }
        if root.prescribe(r, c, val) {
            Ok(())
        } else {
            Err(Error::InconsistentConstraints(format!("{why}: cell ({r}, {c}) = {val} conflicts")))
        }
    };
    if cs.idempotent_diagonal || cs.required.contains(&Flag::Idempotent) {
        for x in 0..n {
            prescribe(x, x, x, "idempotent diagonal")?;
        }
    }
    if cs.loop_identity_zero {
        for x in 0..n {
            prescribe(0, x, x, "loop identity 0")?;
            prescribe(x, 0, x, "loop identity 0")?;
        }
    }
    if opts.symmetry {
        for x in 0..n {
            prescribe(0, x, x, "first row fixed")?;
        }
    }
    for &(x, y, val) in &cs.cells {
        prescribe(x, y, val, "prescribed cell")?;
    }
    let mut ids = Vec::new();
    for flag in &cs.required {
        ids.extend(identities_for(*flag));
    }
    let instances = instances_of(&ids, n);
    if !root.init_watches(&ids, &instances) {
        return Err(Error::InconsistentConstraints("prescribed cells violate a required identity".into()));
    }
    let order = (0..n * n).map(|i| (i / n, i % n)).filter(|&(r, c)| root.cells[r * n + c] == EMPTY).collect();
    let problem = Problem {
        ids,
        instances,
        leaf_flags: cs.required.iter().copied().filter(|f| leaf_flag(*f)).collect(),
        order,
        mode,
    };
    match opts.jobs {
        Some(1) => Ok(problem.run(root, false)),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::InternalCheckFailed(format!("thread pool: {e}")))?;
            Ok(pool.install(|| problem.run(root, true)))
        }
        None => Ok(problem.run(root, true)),
    }
}

/// Number of tables of order `n` meeting `cs`.
pub fn count(n: usize, cs: &ConstraintSet) -> Result<u64> {
    Ok(search_quasigroups(n, cs, SearchMode::Count)?.count())
}

/// Every table of order `n` meeting `cs`, in lexicographic order.
pub fn enumerate_all(n: usize, cs: &ConstraintSet) -> Result<Vec<Quasigroup>> {
    Ok(search_quasigroups(n, cs, SearchMode::Enumerate(usize::MAX))?.tables())
}

/// Concatenates tables in the table format with `#`-comment separators.
pub fn render_tables(tables: &[Quasigroup]) -> String {
    let mut out = String::new();
    for (i, q) in tables.iter().enumerate() {
        out.push_str(&format!("# table {}\n", i + 1));
        out.push_str(&q.to_table_string());
    }
    out
}
