//! Finite automata for the lexicographic conditions defining `U_q'` and `V_q'`.
//!
//! A run keeps one pointer per pending comparison `σ^k c` vs `α` (opened after
//! a digit `c_k < M`) and `σ^k c` vs `reflect(α)` (opened after `c_k > 0`). A
//! pointer is a position on the lasso of the eventually periodic bound; two
//! pointers at the same position have the same future and are merged. A digit
//! that beats the bound kills the run, a digit on the safe side retires the
//! pointer, and a tie advances it.
//!
//! Non-strict mode is a safety condition. Strict mode also rejects runs in which
//! some pointer survives forever (`σ^k c = α`); this is tracked with an
//! obligation set that is refilled whenever it drains, and a drain marks the
//! transition as accepting.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::trie::{PrefixTrie, TrieMode};
use crate::words::{Alphabet, PeriodicSeq};

/// Hard cap on explored states.
pub const MAX_STATES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Mode {
    /// Strict inequalities, the conditions of `U_q'`.
    Strict,
    /// Non-strict inequalities, the conditions of `V_q'`.
    NonStrict,
}

/// Eventually periodic bound unrolled as a lasso of positions.
#[derive(Debug, Clone)]
struct Lasso {
    digits: Vec<u8>,
    loop_start: usize,
}

impl Lasso {
    fn new(s: &PeriodicSeq) -> Self {
        let mut digits = s.preperiod().to_vec();
        digits.extend_from_slice(s.period());
        Lasso {
            digits,
            loop_start: s.preperiod().len(),
        }
    }

    fn next(&self, pos: u32) -> u32 {
        let p = pos as usize + 1;
        if p < self.digits.len() {
            p as u32
        } else {
            self.loop_start as u32
        }
    }
}

/// Pointers: `(side, position)` with side 0 against `α`, 1 against `reflect(α)`.
type Pointers = Vec<(u8, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct StateKey {
    pointers: Pointers,
    obligations: Pointers,
}

#[derive(Debug, Clone)]
pub struct LexAutomaton {
    alphabet: Alphabet,
    mode: Mode,
    /// `trans[s * (M+1) + d]`: successor state or `None` when the digit kills the run.
    trans: Vec<Option<u32>>,
    accepting: Vec<bool>,
    live: Vec<bool>,
    /// SCC id per state (strict mode only).
    comp: Vec<usize>,
    /// Whether a live state with two live successors is reachable through live states.
    branching: Vec<bool>,
}

/// Builds the automaton of `U_q'` (strict) or `V_q'` (non-strict) for `α(q) = alpha`.
pub fn build_automaton(alpha: &PeriodicSeq, mode: Mode) -> Result<LexAutomaton> {
    for k in 1..=alpha.cycle_bound() {
        if alpha.shift(k) > *alpha {
            return Err(Error::NotSelfAdmissible(k));
        }
    }
    LexAutomaton::for_bound(alpha, mode)
}

impl LexAutomaton {
    /// Automaton for the conditions against an arbitrary eventually periodic bound.
    pub fn for_bound(bound: &PeriodicSeq, mode: Mode) -> Result<Self> {
        let alphabet = bound.alphabet();
        let size = alphabet.size();
        let m = alphabet.max();
        let lasso = Lasso::new(bound);
        let strict = mode == Mode::Strict;

        let mut ids: HashMap<StateKey, u32> = HashMap::new();
        let mut keys: Vec<StateKey> = Vec::new();
        let start = StateKey {
            pointers: Vec::new(),
            obligations: Vec::new(),
        };
        ids.insert(start.clone(), 0);
        keys.push(start);
        let mut trans = Vec::new();
        let mut accepting = Vec::new();
        let mut i = 0;
        while i < keys.len() {
            let key = keys[i].clone();
            for d in 0..=m {
                let step = step(&lasso, m, &key, d, strict);
                match step {
                    None => {
                        trans.push(None);
                        accepting.push(false);
                    }
                    Some((next, acc)) => {
                        let id = match ids.get(&next) {
                            Some(&id) => id,
                            None => {
                                if keys.len() >= MAX_STATES {
                                    return Err(Error::TooManyStates(MAX_STATES));
                                }
                                let id = keys.len() as u32;
                                ids.insert(next.clone(), id);
                                keys.push(next);
                                id
                            }
                        };
                        trans.push(Some(id));
                        accepting.push(acc);
                    }
                }
            }
            i += 1;
        }
        debug_assert_eq!(trans.len(), keys.len() * size);
        let mut a = LexAutomaton {
            alphabet,
            mode,
            trans,
            accepting,
            live: Vec::new(),
            comp: Vec::new(),
            branching: Vec::new(),
        };
        if strict {
            a.comp = a.scc();
            a.live = a.buchi_live();
        } else {
            a.live = a.safety_live();
        }
        a.branching = a.branching_states();
        Ok(a)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn state_count(&self) -> usize {
        self.trans.len() / self.alphabet.size()
    }

    /// States with at least one accepted infinite continuation.
    pub fn live_state_count(&self) -> usize {
        self.live.iter().filter(|&&l| l).count()
    }

    fn succ(&self, s: u32, d: u8) -> Option<u32> {
        self.trans[s as usize * self.alphabet.size() + d as usize]
    }

    /// Greatest set of states each having a successor inside the set.
    fn safety_live(&self) -> Vec<bool> {
        let n = self.state_count();
        let size = self.alphabet.size();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut out_degree = vec![0usize; n];
        for (s, row) in self.trans.chunks(size).enumerate() {
            for t in row.iter().flatten() {
                preds[*t as usize].push(s as u32);
                out_degree[s] += 1;
            }
        }
        let mut live = vec![true; n];
        let mut queue: Vec<usize> = (0..n).filter(|&s| out_degree[s] == 0).collect();
        for &s in &queue {
            live[s] = false;
        }
        while let Some(s) = queue.pop() {
            for &p in &preds[s] {
                let p = p as usize;
                if live[p] {
                    out_degree[p] -= 1;
                    if out_degree[p] == 0 {
                        live[p] = false;
                        queue.push(p);
                    }
                }
            }
        }
        live
    }

    /// States that can reach a cycle through an accepting transition.
    fn buchi_live(&self) -> Vec<bool> {
        let n = self.state_count();
        let size = self.alphabet.size();
        let comp = &self.comp;
        let mut good_comp = vec![false; n];
        for s in 0..n {
            for d in 0..size {
                if let Some(t) = self.trans[s * size + d] {
                    if self.accepting[s * size + d] && comp[s] == comp[t as usize] {
                        good_comp[comp[s]] = true;
                    }
                }
            }
        }
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        for s in 0..n {
            for d in 0..size {
                if let Some(t) = self.trans[s * size + d] {
                    preds[t as usize].push(s as u32);
                }
            }
        }
        let mut live: Vec<bool> = (0..n).map(|s| good_comp[comp[s]]).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&s| live[s]).collect();
        while let Some(s) = stack.pop() {
            for &p in &preds[s] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p as usize);
                }
            }
        }
        live
    }

    fn live_succ(&self, s: u32, d: u8) -> Option<u32> {
        self.succ(s, d).filter(|&t| self.live[t as usize])
    }

    fn branching_states(&self) -> Vec<bool> {
        let n = self.state_count();
        let m = self.alphabet.max();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut branching = vec![false; n];
        let mut stack = Vec::new();
        for s in 0..n as u32 {
            if !self.live[s as usize] {
                continue;
            }
            let mut out = 0;
            for d in 0..=m {
                if let Some(t) = self.live_succ(s, d) {
                    preds[t as usize].push(s);
                    out += 1;
                }
            }
            if out > 1 {
                branching[s as usize] = true;
                stack.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            for &p in &preds[s as usize] {
                if !branching[p as usize] {
                    branching[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        branching
    }

    /// Whether exactly one accepted sequence starts with `digits`.
    pub fn unique_continuation(&self, digits: &[u8]) -> bool {
        self.run(digits)
            .is_some_and(|s| self.live[s as usize] && !self.branching[s as usize])
    }

    /// An accepted eventually periodic sequence starting with `digits`.
    pub fn completion(&self, digits: &[u8]) -> Option<PeriodicSeq> {
        let s = self.run(digits).filter(|&s| self.live[s as usize])?;
        let mut pre = digits.to_vec();
        let period = match self.mode {
            Mode::NonStrict => {
                // smallest live digit until a state repeats
                let mut seen: HashMap<u32, usize> = HashMap::new();
                let mut path = Vec::new();
                let mut cur = s;
                loop {
                    if let Some(&i) = seen.get(&cur) {
                        pre.extend_from_slice(&path[..i]);
                        break path[i..].to_vec();
                    }
                    seen.insert(cur, path.len());
                    let d =
                        (0..=self.alphabet.max()).find(|&d| self.live_succ(cur, d).is_some())?;
                    path.push(d);
                    cur = self.live_succ(cur, d)?;
                }
            }
            Mode::Strict => {
                let size = self.alphabet.size();
                let good_edge = |u: u32| {
                    (0..=self.alphabet.max()).find(|&d| {
                        let slot = u as usize * size + d as usize;
                        self.trans[slot].is_some_and(|v| {
                            self.accepting[slot] && self.comp[u as usize] == self.comp[v as usize]
                        })
                    })
                };
                let (to_u, u) = self.bfs(s, |u| good_edge(u).is_some())?;
                let d = good_edge(u)?;
                let v = self.succ(u, d)?;
                let (back, _) = self.bfs(v, |w| w == u)?;
                pre.extend(to_u);
                let mut period = vec![d];
                period.extend(back);
                period
            }
        };
        PeriodicSeq::new(pre, period, self.alphabet).ok()
    }

    /// Shortest live path from `from` to a state satisfying `goal`.
    fn bfs(&self, from: u32, goal: impl Fn(u32) -> bool) -> Option<(Vec<u8>, u32)> {
        let mut parent: HashMap<u32, (u32, u8)> = HashMap::new();
        let mut queue = std::collections::VecDeque::from([from]);
        let mut seen = std::collections::HashSet::from([from]);
        while let Some(x) = queue.pop_front() {
            if goal(x) {
                let mut path = Vec::new();
                let mut cur = x;
                while cur != from {
                    let (p, d) = parent[&cur];
                    path.push(d);
                    cur = p;
                }
                path.reverse();
                return Some((path, x));
            }
            for d in 0..=self.alphabet.max() {
                if let Some(t) = self.live_succ(x, d) {
                    if seen.insert(t) {
                        parent.insert(t, (x, d));
                        queue.push_back(t);
                    }
                }
            }
        }
        None
    }

    /// Strongly connected components (iterative Tarjan); returns a component id per state.
    fn scc(&self) -> Vec<usize> {
        let n = self.state_count();
        let size = self.alphabet.size();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![usize::MAX; n];
        let mut stack = Vec::new();
        let mut next_index = 0;
        let mut next_comp = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            // frames: (state, next digit to explore)
            let mut frames = vec![(root, 0usize)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (s, ref mut d)) = frames.last_mut() {
                if *d < size {
                    let digit = *d;
                    *d += 1;
                    if let Some(t) = self.trans[s * size + digit] {
                        let t = t as usize;
                        if index[t] == usize::MAX {
                            index[t] = next_index;
                            low[t] = next_index;
                            next_index += 1;
                            stack.push(t);
                            on_stack[t] = true;
                            frames.push((t, 0));
                        } else if on_stack[t] {
                            low[s] = low[s].min(index[t]);
                        }
                    }
                } else {
                    frames.pop();
                    if let Some(&(parent, _)) = frames.last() {
                        low[parent] = low[parent].min(low[s]);
                    }
                    if low[s] == index[s] {
                        loop {
                            let v = stack.pop().expect("tarjan stack");
                            on_stack[v] = false;
                            comp[v] = next_comp;
                            if v == s {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                }
            }
        }
        comp
    }

    /// Runs a finite word from the start state.
    fn run(&self, digits: &[u8]) -> Option<u32> {
        digits.iter().try_fold(0u32, |s, &d| self.succ(s, d))
    }

    /// Whether `digits` is a prefix of some accepted sequence.
    pub fn accepts_prefix(&self, digits: &[u8]) -> bool {
        self.run(digits).is_some_and(|s| self.live[s as usize])
    }

    /// Exact membership of an eventually periodic sequence.
    pub fn accepts(&self, c: &PeriodicSeq) -> bool {
        let Some(mut s) = self.run(c.preperiod()) else {
            return false;
        };
        let mut seen: HashMap<u32, usize> = HashMap::new();
        let mut cycle_flags = Vec::new();
        loop {
            if let Some(&start) = seen.get(&s) {
                return self.mode == Mode::NonStrict || cycle_flags[start..].contains(&true);
            }
            seen.insert(s, cycle_flags.len());
            let mut any = false;
            for &d in c.period() {
                let slot = s as usize * self.alphabet.size() + d as usize;
                match self.trans[slot] {
                    None => return false,
                    Some(t) => {
                        any |= self.accepting[slot];
                        s = t;
                    }
                }
            }
            cycle_flags.push(any);
        }
    }

    /// All length-`n` prefixes of accepted sequences, in lexicographic order.
    pub fn words(&self, n: usize) -> PrefixTrie {
        let mut trie = PrefixTrie::new(self.alphabet, n, TrieMode::Certified);
        if !self.live[0] {
            return trie;
        }
        let mut path = Vec::with_capacity(n);
        self.collect(0, n, &mut path, &mut trie);
        trie
    }

    fn collect(&self, s: u32, n: usize, path: &mut Vec<u8>, trie: &mut PrefixTrie) {
        if path.len() == n {
            trie.insert_trusted(path);
            return;
        }
        for d in 0..=self.alphabet.max() {
            if let Some(t) = self.succ(s, d) {
                if self.live[t as usize] {
                    path.push(d);
                    self.collect(t, n, path, trie);
                    path.pop();
                }
            }
        }
    }
}

/// One transition; `None` when the digit violates a pending comparison.
fn step(lasso: &Lasso, m: u8, key: &StateKey, d: u8, strict: bool) -> Option<(StateKey, bool)> {
    let advance = |set: &Pointers| -> Option<Pointers> {
        let mut out = Vec::with_capacity(set.len());
        for &(side, pos) in set {
            let a = lasso.digits[pos as usize];
            let expected = if side == 0 { a } else { m - a };
            // side 0 needs the tail below α, side 1 above reflect(α)
            let safe = if side == 0 {
                d < expected
            } else {
                d > expected
            };
            if d == expected {
                out.push((side, lasso.next(pos)));
            } else if !safe {
                return None;
            }
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    };
    let mut pointers = advance(&key.pointers)?;
    if d < m {
        pointers.push((0, 0));
    }
    if d > 0 {
        pointers.push((1, 0));
    }
    pointers.sort_unstable();
    pointers.dedup();
    if !strict {
        return Some((
            StateKey {
                pointers,
                obligations: Vec::new(),
            },
            true,
        ));
    }
    let obligations = advance(&key.obligations)?;
    let (obligations, accepting) = if obligations.is_empty() {
        (pointers.clone(), true)
    } else {
        (obligations, false)
    };
    Some((
        StateKey {
            pointers,
            obligations,
        },
        accepting,
    ))
}
