//! Prefix tries holding sets of words of one fixed length.
//!
//! A trie of depth `D` built from `B_D(A)` also represents every `B_n(A)` with
//! `n <= D`: the nodes at depth `n` are exactly the length-`n` prefixes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

const NONE: u32 = u32::MAX;

/// How the words of a trie relate to the prefix set they describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrieMode {
    /// Exactly the prefix set.
    Certified,
    /// A subset of the prefix set.
    Lower,
    /// A superset of the prefix set.
    Upper,
}

#[derive(Debug, Clone)]
pub struct PrefixTrie {
    alphabet: Alphabet,
    depth: usize,
    mode: TrieMode,
    // children of node i live at i * (M+1) .. (i+1) * (M+1)
    children: Vec<u32>,
    leaves: usize,
}

impl PrefixTrie {
    pub fn new(alphabet: Alphabet, depth: usize, mode: TrieMode) -> Self {
        PrefixTrie {
            alphabet,
            depth,
            mode,
            children: vec![NONE; alphabet.size()],
            leaves: 0,
        }
    }

    /// Trie holding all `(M+1)^depth` words.
    pub fn full(alphabet: Alphabet, depth: usize) -> Self {
        let mut t = PrefixTrie::new(alphabet, depth, TrieMode::Certified);
        let mut word = vec![0u8; depth];
        loop {
            t.insert_trusted(&word);
            // odometer increment
            let mut i = depth;
            loop {
                if i == 0 {
                    return t;
                }
                i -= 1;
                if word[i] < alphabet.max() {
                    word[i] += 1;
                    break;
                }
                word[i] = 0;
            }
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn mode(&self) -> TrieMode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: TrieMode) {
        self.mode = mode;
    }

    /// Number of stored words.
    pub fn len(&self) -> usize {
        self.leaves
    }

    pub fn is_empty(&self) -> bool {
        self.leaves == 0
    }

    pub fn node_count(&self) -> usize {
        self.children.len() / self.alphabet.size()
    }

    fn child(&self, node: u32, d: u8) -> Option<u32> {
        let c = self.children[node as usize * self.alphabet.size() + d as usize];
        (c != NONE).then_some(c)
    }

    /// Inserts a word of length `depth`; returns whether it was new.
    pub fn insert(&mut self, digits: &[u8]) -> Result<bool> {
        if digits.len() != self.depth {
            return Err(Error::DepthMismatch(digits.len(), self.depth));
        }
        self.alphabet.check(digits)?;
        Ok(self.insert_trusted(digits))
    }

    pub(crate) fn insert_trusted(&mut self, digits: &[u8]) -> bool {
        let size = self.alphabet.size();
        let mut node = 0usize;
        let mut fresh = false;
        for &d in digits {
            let slot = node * size + d as usize;
            if self.children[slot] == NONE {
                let id = self.node_count();
                self.children[slot] = id as u32;
                self.children.extend(std::iter::repeat_n(NONE, size));
                fresh = true;
            }
            node = self.children[slot] as usize;
        }
        if fresh {
            self.leaves += 1;
        }
        fresh
    }

    fn find(&self, digits: &[u8]) -> Option<u32> {
        digits.iter().try_fold(0u32, |node, &d| {
            if d > self.alphabet.max() {
                None
            } else {
                self.child(node, d)
            }
        })
    }

    pub fn contains(&self, digits: &[u8]) -> bool {
        digits.len() == self.depth && self.find(digits).is_some()
    }

    /// Whether some stored word starts with `digits`.
    pub fn contains_prefix(&self, digits: &[u8]) -> bool {
        digits.len() <= self.depth && self.find(digits).is_some()
    }

    /// All length-`n` prefixes in lexicographic order.
    pub fn level(&self, n: usize) -> Vec<Word> {
        let n = n.min(self.depth);
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(n);
        self.collect(0, n, &mut path, &mut out);
        out
    }

    fn collect(&self, node: u32, n: usize, path: &mut Vec<u8>, out: &mut Vec<Word>) {
        if path.len() == n {
            out.push(Word::from_trusted(path.clone(), self.alphabet));
            return;
        }
        for d in 0..=self.alphabet.max() {
            if let Some(c) = self.child(node, d) {
                path.push(d);
                self.collect(c, n, path, out);
                path.pop();
            }
        }
    }

    /// Stored words in lexicographic order.
    pub fn words(&self) -> Vec<Word> {
        if self.is_empty() {
            return Vec::new();
        }
        self.level(self.depth)
    }

    /// The trie of length-`n` prefixes.
    pub fn truncate(&self, n: usize) -> PrefixTrie {
        let mut t = PrefixTrie::new(self.alphabet, n.min(self.depth), self.mode);
        for w in self.level(n) {
            t.insert_trusted(w.digits());
        }
        t
    }

    /// Whether every word of `self` is stored in `other`.
    pub fn is_subset(&self, other: &PrefixTrie) -> bool {
        self.alphabet == other.alphabet
            && self.depth == other.depth
            && self.words().iter().all(|w| other.contains(w.digits()))
    }

    /// Smallest depth `n <= limit` at which the prefix sets differ.
    pub fn first_divergence(&self, other: &PrefixTrie, limit: usize) -> Option<usize> {
        let mut frontier = vec![(0u32, 0u32)];
        for n in 1..=limit {
            let mut next = Vec::new();
            for &(a, b) in &frontier {
                for d in 0..=self.alphabet.max() {
                    match (self.child(a, d), other.child(b, d)) {
                        (Some(x), Some(y)) => next.push((x, y)),
                        (None, None) => {}
                        _ => return Some(n),
                    }
                }
            }
            frontier = next;
        }
        None
    }

    /// Sorted word list, one per line, after a `#` metadata header.
    pub fn to_text(&self, header: &TrieHeader) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# q={} M={} n={} kind={} certified={} mode={:?}",
            header.q, header.m, header.n, header.kind, header.certified, self.mode
        );
        for w in self.words() {
            let _ = writeln!(s, "{w}");
        }
        s
    }
}

impl PartialEq for PrefixTrie {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.depth == other.depth
            && self.leaves == other.leaves
            && self.first_divergence(other, self.depth).is_none()
    }
}

impl Eq for PrefixTrie {}

/// Metadata written in front of serialized tries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrieHeader {
    pub q: String,
    #[serde(rename = "M")]
    pub m: u8,
    pub n: usize,
    pub kind: String,
    pub certified: bool,
}
