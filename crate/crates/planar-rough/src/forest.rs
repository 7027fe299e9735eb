//! Decorated planar rooted trees and forests.
//!
//! A forest is an ordered list of trees; a tree is a decorated root with an
//! ordered list of child trees. Planar order is significant everywhere:
//! permuting children or reordering the trees of a forest yields a different
//! object. The canonical string form uses the grammar
//!
//! ```text
//! forest := tree (',' tree)* | ''
//! tree   := letter | letter '[' forest ']'
//! ```
//!
//! which is also the interchange syntax for files and CLI arguments.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Default cap on the number of basis forests enumerated at once.
pub const DEFAULT_BASIS_CAPACITY: usize = 1_000_000;

/// Ordered set of decoration letters (each a single lowercase character).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    /// Builds an alphabet from its letters; rejects duplicates, uppercase and
    /// the empty set.
    pub fn new(letters: &str) -> Result<Self> {
        let letters: Vec<char> = letters.chars().collect();
        if letters.is_empty() {
            return Err(Error::Schema("alphabet must contain at least one letter".into()));
        }
        for (i, &c) in letters.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(Error::Schema(format!("alphabet letter '{c}' is not lowercase ascii")));
            }
            if letters[..i].contains(&c) {
                return Err(Error::Schema(format!("duplicate alphabet letter '{c}'")));
            }
        }
        Ok(Alphabet { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn letter(&self, idx: usize) -> char {
        self.letters[idx]
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.letters.iter().position(|&l| l == c)
    }

    pub fn contains(&self, c: char) -> bool {
        self.index_of(c).is_some()
    }

    pub fn as_string(&self) -> String {
        self.letters.iter().collect()
    }
}

/// Vertex decoration. `Root` is the reserved auxiliary decoration used only
/// by the coproduct machinery; it never appears in user input or basis
/// forests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Decoration {
    Letter(char),
    Root,
}

/// A decorated planar rooted tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanarTree {
    decoration: Decoration,
    children: Vec<PlanarTree>,
}

impl PlanarTree {
    pub fn leaf(letter: char) -> Self {
        PlanarTree { decoration: Decoration::Letter(letter), children: Vec::new() }
    }

    pub fn node(letter: char, children: Vec<PlanarTree>) -> Self {
        PlanarTree { decoration: Decoration::Letter(letter), children }
    }

    pub(crate) fn sentinel(children: Vec<PlanarTree>) -> Self {
        PlanarTree { decoration: Decoration::Root, children }
    }

    pub fn decoration(&self) -> Decoration {
        self.decoration
    }

    /// Root letter; panics on the internal sentinel, which never escapes.
    pub fn letter(&self) -> char {
        match self.decoration {
            Decoration::Letter(c) => c,
            Decoration::Root => unreachable!("sentinel root escaped the coproduct machinery"),
        }
    }

    pub fn children(&self) -> &[PlanarTree] {
        &self.children
    }

    /// Number of vertices.
    pub fn degree(&self) -> usize {
        1 + self.children.iter().map(PlanarTree::degree).sum::<usize>()
    }

    /// Removes the root, returning the ordered forest of its subtrees (B-).
    pub fn ungraft(&self) -> PlanarForest {
        PlanarForest::new(self.children.clone())
    }
}

/// An ordered (possibly empty) list of planar trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PlanarForest {
    trees: Vec<PlanarTree>,
}

impl PlanarForest {
    pub fn empty() -> Self {
        PlanarForest { trees: Vec::new() }
    }

    pub fn new(trees: Vec<PlanarTree>) -> Self {
        PlanarForest { trees }
    }

    pub fn single(tree: PlanarTree) -> Self {
        PlanarForest { trees: vec![tree] }
    }

    pub fn trees(&self) -> &[PlanarTree] {
        &self.trees
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Total vertex count (the Hopf grading).
    pub fn degree(&self) -> usize {
        self.trees.iter().map(PlanarTree::degree).sum()
    }

    /// True when the forest is a single tree.
    pub fn as_single_tree(&self) -> Option<&PlanarTree> {
        match self.trees.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    /// Concatenation of two forests (juxtaposition, not the Hopf product).
    pub fn concat(&self, other: &PlanarForest) -> PlanarForest {
        let mut trees = self.trees.clone();
        trees.extend(other.trees.iter().cloned());
        PlanarForest { trees }
    }

    /// Grafts the forest under a new root decorated `letter` (B+ with a
    /// decoration, written [f]_a).
    pub fn graft(&self, letter: char) -> PlanarTree {
        PlanarTree::node(letter, self.trees.clone())
    }

    pub(crate) fn graft_sentinel(&self) -> PlanarTree {
        PlanarTree::sentinel(self.trees.clone())
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.decoration {
            Decoration::Letter(c) => write!(f, "{c}")?,
            Decoration::Root => write!(f, "#")?,
        }
        if !self.children.is_empty() {
            write!(f, "[{}]", PlanarForest::new(self.children.clone()))?;
        }
        Ok(())
    }
}

impl fmt::Display for PlanarForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

// Canonical order: ascending degree, then lexicographic on the serialization.
impl Ord for PlanarForest {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

impl PartialOrd for PlanarForest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical string form; the empty forest formats as the empty string.
pub fn format_forest(f: &PlanarForest) -> String {
    f.to_string()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn forest(&mut self) -> Result<PlanarForest> {
        self.skip_ws();
        let mut trees = Vec::new();
        if matches!(self.peek(), None | Some(b']')) {
            return Ok(PlanarForest::new(trees));
        }
        trees.push(self.tree()?);
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    self.skip_ws();
                    if matches!(self.peek(), None | Some(b']' | b',')) {
                        return Err(Error::Syntax { msg: "empty tree slot after ','".into(), pos: self.pos });
                    }
                    trees.push(self.tree()?);
                }
                _ => return Ok(PlanarForest::new(trees)),
            }
        }
    }

    fn tree(&mut self) -> Result<PlanarTree> {
        self.skip_ws();
        let c = match self.peek() {
            Some(c) => c as char,
            None => return Err(Error::Syntax { msg: "expected a letter".into(), pos: self.pos }),
        };
        if !c.is_ascii_lowercase() {
            return Err(Error::Syntax { msg: format!("expected a letter, found '{c}'"), pos: self.pos });
        }
        if !self.alphabet.contains(c) {
            return Err(Error::UnknownLetter { letter: c, pos: self.pos });
        }
        self.pos += 1;
        self.skip_ws();
        let mut children = Vec::new();
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let inner = self.forest()?;
            self.skip_ws();
            if self.peek() != Some(b']') {
                return Err(Error::Syntax { msg: "unbalanced '['".into(), pos: self.pos });
            }
            self.pos += 1;
            children = inner.trees;
        }
        Ok(PlanarTree::node(c, children))
    }
}

/// Parses the canonical forest grammar over the given alphabet.
pub fn parse_forest(text: &str, alphabet: &Alphabet) -> Result<PlanarForest> {
    if !text.is_ascii() {
        return Err(Error::Syntax { msg: "non-ascii input".into(), pos: 0 });
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0, alphabet };
    let f = p.forest()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Syntax {
            msg: format!("unexpected '{}'", p.src[p.pos] as char),
            pos: p.pos,
        });
    }
    Ok(f)
}

/// Parses a single tree (a one-tree forest).
pub fn parse_tree(text: &str, alphabet: &Alphabet) -> Result<PlanarTree> {
    let f = parse_forest(text, alphabet)?;
    match f.as_single_tree() {
        Some(t) => Ok(t.clone()),
        None => Err(Error::Syntax { msg: "expected a single tree".into(), pos: 0 }),
    }
}

/// The canonically ordered set of all decorated planar forests of degree
/// <= `max_degree`, with a position index.
#[derive(Debug, Clone)]
pub struct ForestBasis {
    alphabet: Alphabet,
    max_degree: usize,
    forests: Vec<PlanarForest>,
    index: HashMap<PlanarForest, usize>,
    degree_of: Vec<usize>,
}

impl ForestBasis {
    /// Enumerates the basis. Trees of degree k are letters grafted onto
    /// forests of degree k-1; forests of degree k split as a first tree of
    /// degree j followed by a forest of degree k-j.
    pub fn enumerate(alphabet: Alphabet, max_degree: usize) -> Result<Arc<Self>> {
        Self::enumerate_with_capacity(alphabet, max_degree, DEFAULT_BASIS_CAPACITY)
    }

    pub fn enumerate_with_capacity(
        alphabet: Alphabet,
        max_degree: usize,
        capacity: usize,
    ) -> Result<Arc<Self>> {
        let mut trees_by_deg: Vec<Vec<PlanarTree>> = vec![Vec::new()];
        let mut forests_by_deg: Vec<Vec<PlanarForest>> = vec![vec![PlanarForest::empty()]];
        let mut total = 1usize;
        for k in 1..=max_degree {
            let mut tk = Vec::new();
            for &a in alphabet.letters() {
                for f in &forests_by_deg[k - 1] {
                    tk.push(f.graft(a));
                }
            }
            let mut fk = Vec::new();
            for j in 1..=k {
                for t in &trees_by_deg[j] {
                    for f in &forests_by_deg[k - j] {
                        fk.push(PlanarForest::single(t.clone()).concat(f));
                    }
                }
            }
            // degree-j trees are exactly the degree-j single-tree forests,
            // so fk at j = k already contains every tree of tk
            total += fk.len();
            if total > capacity {
                return Err(Error::CapacityExceeded { size: total, limit: capacity });
            }
            trees_by_deg.push(tk);
            forests_by_deg.push(fk);
        }
        let mut forests: Vec<PlanarForest> = forests_by_deg.into_iter().flatten().collect();
        forests.sort();
        let index = forests.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let degree_of = forests.iter().map(PlanarForest::degree).collect();
        Ok(Arc::new(ForestBasis { alphabet, max_degree, forests, index, degree_of }))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.forests.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn forests(&self) -> &[PlanarForest] {
        &self.forests
    }

    pub fn forest(&self, idx: usize) -> &PlanarForest {
        &self.forests[idx]
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.degree_of[idx]
    }

    pub fn index_of(&self, f: &PlanarForest) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Indices of all single-tree forests of degree <= `deg`.
    pub fn tree_indices(&self, deg: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                self.degree_of[i] >= 1
                    && self.degree_of[i] <= deg
                    && self.forests[i].as_single_tree().is_some()
            })
            .collect()
    }

    /// Indices of all forests of degree <= `deg` (including the empty one).
    pub fn indices_up_to(&self, deg: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree_of[i] <= deg).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::new("ab").unwrap()
    }

    #[test]
    fn parse_and_degree() {
        let al = Alphabet::new("abcde").unwrap();
        let f = parse_forest("a", &al).unwrap();
        assert_eq!(f.degree(), 1);
        let f = parse_forest("a[b]", &al).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.to_string(), "a[b]");
        let f = parse_forest("a[b,c[d]],e", &al).unwrap();
        assert_eq!(f.degree(), 5);
        assert_eq!(f.trees().len(), 2);
        assert_eq!(f.trees()[0].degree(), 4);
        assert_eq!(f.trees()[1].degree(), 1);
    }

    #[test]
    fn empty_forest_round_trip() {
        let f = parse_forest("", &ab()).unwrap();
        assert!(f.is_empty());
        assert_eq!(f.degree(), 0);
        assert_eq!(format_forest(&f), "");
    }

    #[test]
    fn whitespace_ignored() {
        let f = parse_forest(" a [ b , a ] ", &ab()).unwrap();
        assert_eq!(f.to_string(), "a[b,a]");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_forest("a[z]", &ab()),
            Err(Error::UnknownLetter { letter: 'z', pos: 2 })
        ));
        assert!(matches!(parse_forest("a[b", &ab()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_forest("a,", &ab()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_forest("a]b", &ab()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_forest("a[]b", &ab()), Err(Error::Syntax { .. })));
    }

    #[test]
    fn graft_and_ungraft() {
        let al = Alphabet::new("abc").unwrap();
        let f = parse_forest("b,c", &al).unwrap();
        let t = f.graft('a');
        assert_eq!(t.to_string(), "a[b,c]");
        assert_eq!(t.degree(), 3);
        assert_eq!(t.ungraft(), f);
        let empty = PlanarForest::empty();
        assert_eq!(empty.graft('a').to_string(), "a");
        assert_eq!(parse_tree("a[b[c]]", &al).unwrap().ungraft().to_string(), "b[c]");
    }

    #[test]
    fn basis_counts() {
        let b = ForestBasis::enumerate(Alphabet::new("a").unwrap(), 1).unwrap();
        assert_eq!(b.len(), 2);
        let b = ForestBasis::enumerate(Alphabet::new("a").unwrap(), 3).unwrap();
        assert_eq!(b.len(), 9);
        let names: Vec<String> = b.forests().iter().map(|f| f.to_string()).collect();
        assert_eq!(
            names,
            ["", "a", "a,a", "a[a]", "a,a,a", "a,a[a]", "a[a,a]", "a[a[a]]", "a[a],a"]
        );
        let b = ForestBasis::enumerate(ab(), 2).unwrap();
        assert_eq!(b.len(), 11);
        let b = ForestBasis::enumerate(ab(), 3).unwrap();
        assert_eq!(b.len(), 51);
    }

    #[test]
    fn basis_matches_brute_force() {
        // independent generator: all forests of degree <= N by exhaustive
        // composition of degrees, trees by recursive children lists
        fn gen_trees(letters: &[char], deg: usize) -> Vec<PlanarTree> {
            if deg == 0 {
                return Vec::new();
            }
            let mut out = Vec::new();
            for &a in letters {
                for f in gen_forests(letters, deg - 1) {
                    out.push(f.graft(a));
                }
            }
            out
        }
        fn gen_forests(letters: &[char], deg: usize) -> Vec<PlanarForest> {
            if deg == 0 {
                return vec![PlanarForest::empty()];
            }
            let mut out = Vec::new();
            for j in 1..=deg {
                for t in gen_trees(letters, j) {
                    for rest in gen_forests(letters, deg - j) {
                        out.push(PlanarForest::single(t.clone()).concat(&rest));
                    }
                }
            }
            out
        }
        for (letters, n) in [("a", 4), ("ab", 4), ("abc", 3)] {
            let al = Alphabet::new(letters).unwrap();
            let basis = ForestBasis::enumerate(al.clone(), n).unwrap();
            let mut brute: Vec<PlanarForest> =
                (0..=n).flat_map(|k| gen_forests(al.letters(), k)).collect();
            brute.sort();
            brute.dedup();
            assert_eq!(basis.len(), brute.len());
            for f in &brute {
                assert!(basis.index_of(f).is_some());
            }
        }
    }

    #[test]
    fn tree_count_recursion() {
        // decorated-planar recursion: trees of degree k = d * forests of degree k-1
        let b = ForestBasis::enumerate(Alphabet::new("abc").unwrap(), 4).unwrap();
        for k in 1..=4 {
            let trees = b
                .forests()
                .iter()
                .filter(|f| f.degree() == k && f.as_single_tree().is_some())
                .count();
            let forests_below = b.forests().iter().filter(|f| f.degree() == k - 1).count();
            assert_eq!(trees, 3 * forests_below);
        }
    }

    #[test]
    fn capacity_limit() {
        let r = ForestBasis::enumerate_with_capacity(ab(), 6, 100);
        assert!(matches!(r, Err(Error::CapacityExceeded { .. })));
    }

    fn arb_forest(letters: &'static str, max_deg: usize) -> impl Strategy<Value = PlanarForest> {
        let al = Alphabet::new(letters).unwrap();
        let basis = ForestBasis::enumerate(al, max_deg).unwrap();
        let n = basis.len();
        (0..n).prop_map(move |i| basis.forest(i).clone())
    }

    proptest! {
        #[test]
        fn round_trip(f in arb_forest("ab", 4)) {
            let al = Alphabet::new("ab").unwrap();
            let back = parse_forest(&format_forest(&f), &al).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn grading(f in arb_forest("ab", 3), g in arb_forest("ab", 3)) {
            prop_assert_eq!(f.graft('a').degree(), f.degree() + 1);
            prop_assert_eq!(f.concat(&g).degree(), f.degree() + g.degree());
            prop_assert_eq!(f.graft('b').ungraft(), f);
        }
    }
}
