//! Prefix sets `B_n(U_q')` and `B_n(V_q')`, the symbolic Hausdorff distance and
//! the completion constructions used by the continuity arguments.

use serde::Serialize;

use crate::automaton::{build_automaton, LexAutomaton, Mode};
use crate::error::{Error, Result};
use crate::expansions::{quasi_greedy_alpha, AlphaExpansion};
use crate::numerics::BaseValue;
use crate::trie::{PrefixTrie, TrieMode};
use crate::words::{Alphabet, Dyadic, PeriodicSeq, Seq, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SetKind {
    U,
    V,
}

impl SetKind {
    pub fn mode(self) -> Mode {
        match self {
            SetKind::U => Mode::Strict,
            SetKind::V => Mode::NonStrict,
        }
    }
}

impl std::fmt::Display for SetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SetKind::U => "U",
            SetKind::V => "V",
        })
    }
}

/// A two-sided bracket `lower ⊆ B_n ⊆ upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumResult {
    pub lower: PrefixTrie,
    pub upper: PrefixTrie,
    pub certified: bool,
}

impl EnumResult {
    pub fn exact(mut trie: PrefixTrie) -> Self {
        trie.set_mode(TrieMode::Certified);
        EnumResult {
            lower: trie.clone(),
            upper: trie,
            certified: true,
        }
    }

    /// The certified set, when the bracket is closed.
    pub fn exact_set(&self) -> Option<&PrefixTrie> {
        self.certified.then_some(&self.lower)
    }
}

/// The sequence set `U_q'` or `V_q'` as far as it can be pinned down.
#[derive(Debug, Clone)]
pub enum Language {
    /// Every sequence (bases above `M + 1`).
    All(Alphabet),
    /// Exact automaton from a certified periodic `α(q)`.
    Exact(LexAutomaton),
    /// Non-strict automata for eventually periodic bounds `γ < α(q) <= δ`: the lower one
    /// accepts a subset of the set, the upper one a superset.
    Bracket {
        lower: LexAutomaton,
        upper: LexAutomaton,
    },
}

impl Language {
    pub fn new(q: &BaseValue, kind: SetKind, alpha_depth: usize) -> Result<Self> {
        if q.exceeds_alphabet()? {
            return Ok(Language::All(q.alphabet()));
        }
        let alpha = quasi_greedy_alpha(q, alpha_depth.max(1))?;
        Language::from_alpha(&alpha, kind)
    }

    pub fn from_alpha(alpha: &AlphaExpansion, kind: SetKind) -> Result<Self> {
        if let Some(a) = &alpha.certified_periodic {
            return Ok(Language::Exact(build_automaton(a, kind.mode())?));
        }
        let (below, above) = alpha_brackets(&alpha.prefix)?;
        Ok(Language::Bracket {
            lower: LexAutomaton::for_bound(&below, Mode::NonStrict)?,
            upper: LexAutomaton::for_bound(&above, Mode::NonStrict)?,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Language::All(a) => *a,
            Language::Exact(x) => x.alphabet(),
            Language::Bracket { lower, .. } => lower.alphabet(),
        }
    }

    /// `B_n`, bracketed when the language is not exact.
    pub fn prefixes(&self, n: usize) -> EnumResult {
        match self {
            Language::All(a) => EnumResult::exact(PrefixTrie::full(*a, n)),
            Language::Exact(x) => EnumResult::exact(x.words(n)),
            Language::Bracket { lower, upper } => {
                let mut lower = lower.words(n);
                let mut upper = upper.words(n);
                let certified = lower == upper;
                let (lm, um) = if certified {
                    (TrieMode::Certified, TrieMode::Certified)
                } else {
                    (TrieMode::Lower, TrieMode::Upper)
                };
                lower.set_mode(lm);
                upper.set_mode(um);
                EnumResult {
                    lower,
                    upper,
                    certified,
                }
            }
        }
    }

    /// A member of the set starting with `digits`, when one is known.
    pub fn completion(&self, digits: &[u8]) -> Option<PeriodicSeq> {
        match self {
            Language::All(a) => Some(Word::new(digits.to_vec(), *a).ok()?.zero_padded()),
            Language::Exact(x) => x.completion(digits),
            Language::Bracket { lower, .. } => lower.completion(digits),
        }
    }

    /// Whether the set is known to have exactly one member starting with `digits`.
    pub fn unique_continuation(&self, digits: &[u8]) -> bool {
        match self {
            Language::Exact(x) => x.unique_continuation(digits),
            _ => false,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Language::Bracket { .. })
    }
}

/// `B_n` of `U_q'` or `V_q'`.
///
/// With a certified periodic `α(q)` the automaton gives the exact set. Otherwise
/// the known prefix `w` of the (infinite) `α(q)` gives `w 0^∞ < α(q) <= w M^∞`;
/// the non-strict automata of these bounds enclose the set from below and above.
pub fn enum_prefixes(
    q: &BaseValue,
    n: usize,
    kind: SetKind,
    alpha_depth: usize,
) -> Result<EnumResult> {
    Ok(Language::new(q, kind, alpha_depth)?.prefixes(n))
}

/// [`enum_prefixes`] for a precomputed `α`.
pub fn enum_with_alpha(alpha: &AlphaExpansion, n: usize, kind: SetKind) -> Result<EnumResult> {
    Ok(Language::from_alpha(alpha, kind)?.prefixes(n))
}

/// Symbolic distance from an enclosed prefix set `lower ⊆ X ⊆ upper` to `target`,
/// or `None` when the enclosure leaves it open.
pub fn bracket_distance(bracket: &EnumResult, target: &PrefixTrie) -> Result<Option<Dyadic>> {
    if bracket.certified {
        return symbolic_hausdorff(&bracket.lower, target).map(Some);
    }
    bracket.lower.alphabet().ensure_same(target.alphabet())?;
    let depth = bracket.lower.depth().min(target.depth());
    for n in 1..=depth {
        let lo = bracket.lower.level(n);
        let hi = bracket.upper.level(n);
        let t = target.level(n);
        if lo == hi {
            if lo != t {
                return Ok(Some(Dyadic::pow2_neg(n as u32)));
            }
            continue;
        }
        let lo_outside = lo.iter().any(|w| t.binary_search(w).is_err());
        let t_outside = t.iter().any(|w| hi.binary_search(w).is_err());
        return Ok((lo_outside || t_outside).then(|| Dyadic::pow2_neg(n as u32)));
    }
    Ok(Some(Dyadic::ZERO))
}

/// Bounds `γ < α <= δ` for an infinite `α` known only through `prefix`:
/// `γ = prefix · 0^∞` and `δ = prefix · M^∞`.
pub fn alpha_brackets(prefix: &Word) -> Result<(PeriodicSeq, PeriodicSeq)> {
    let digits = prefix.digits();
    if digits.is_empty() {
        return Err(Error::InvalidPivot(0));
    }
    let a = prefix.alphabet();
    Ok((
        PeriodicSeq::new(digits.to_vec(), vec![0], a)?,
        PeriodicSeq::new(digits.to_vec(), vec![a.max()], a)?,
    ))
}

/// Smallest `j >= 0` whose window `c_{j+1} … c_{j+n}` reaches the bound:
/// `c_j < M` and window `>= α_1 … α_n`, or `c_j > 0` and window `<= reflect(α_1 … α_n)`.
/// At `j = 0` the guards read a virtual digit `c_0 = 0` (the integer part), so
/// only the first clause applies there. The scan stops where `c` runs out.
pub fn first_violation_index(c: &Seq, alpha_prefix: &Word) -> Option<usize> {
    let n = alpha_prefix.len();
    let m = c.alphabet().max();
    let a = alpha_prefix.digits();
    let abar = alpha_prefix.reflect();
    let scan = match c {
        Seq::Finite(w) => w.len().saturating_sub(n),
        Seq::Periodic(p) => p.cycle_bound(),
    };
    for j in 0..=scan {
        let window: Vec<u8> = (j + 1..=j + n).map_while(|i| c.digit_at(i)).collect();
        if window.len() < n {
            break;
        }
        let cj = if j == 0 { 0 } else { c.digit_at(j)? };
        if cj < m && window.as_slice() >= a {
            return Some(j);
        }
        if cj > 0 && window.as_slice() <= abar.digits() {
            return Some(j);
        }
    }
    None
}

/// `c_1 … c_j` followed by `tail`.
pub fn complete_with_alpha_tail(c: &Seq, j: usize, tail: &PeriodicSeq) -> Result<PeriodicSeq> {
    c.alphabet().ensure_same(tail.alphabet())?;
    let head = c.head(j);
    if head.len() < j {
        return Err(Error::DepthMismatch(head.len(), j));
    }
    Ok(tail.prepend(&head))
}

/// Hausdorff distance in the metric `ρ` between two sets given by prefix tries:
/// `2^{-(n+1)}` when the prefix sets agree up to length `n` and differ at `n+1`,
/// `0` when they agree up to the common depth.
pub fn symbolic_hausdorff(a: &PrefixTrie, b: &PrefixTrie) -> Result<Dyadic> {
    a.alphabet().ensure_same(b.alphabet())?;
    let depth = a.depth().min(b.depth());
    if depth == 0 {
        return Err(Error::DepthMismatch(a.depth(), b.depth()));
    }
    Ok(match a.first_divergence(b, depth) {
        None => Dyadic::ZERO,
        Some(n) => Dyadic::pow2_neg(n as u32),
    })
}

/// The periodic sequence with period
/// `α_1 … α_m · reflect(α_1 … α_{m-1} (α_m - 1) α_1 … α_m)`.
pub fn remark4_candidate(alpha: &PeriodicSeq, m: usize) -> Result<PeriodicSeq> {
    if m == 0 {
        return Err(Error::InvalidPivot(0));
    }
    let head: Vec<u8> = alpha.prefix(m).digits().to_vec();
    if head[m - 1] == 0 {
        return Err(Error::InvalidPivot(m));
    }
    let max = alpha.alphabet().max();
    let mut period = head.clone();
    let mut lowered = head.clone();
    lowered[m - 1] -= 1;
    period.extend(lowered.iter().chain(&head).map(|&d| max - d));
    // keep the period as built, even when it is not primitive
    PeriodicSeq::purely_periodic(period, alpha.alphabet())
}
