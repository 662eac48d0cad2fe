pub mod automaton;
pub mod enumerate;
pub mod error;
pub mod expansions;
pub mod metric;
pub mod numerics;
pub mod poly;
pub mod trie;
pub mod words;
