//! Free magma words over named variables.
//!
//! A word is a binary tree whose leaves are variables; the free magma on a
//! set of variables consists of all such trees. Words carry a multidegree
//! (how often each variable occurs) and a deterministic total order:
//! first by total degree, then leaves before products, then recursively by
//! (left, right), with leaves ordered by variable name. Everything downstream
//! (polynomial term order, pivot choices, report output) inherits determinism
//! from this order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex};

use thiserror::Error;

/// Reserved leaf used to enumerate one-hole contexts; not a valid user name.
pub(crate) const HOLE_NAME: &str = "__hole";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid variable name {name:?}: {reason}")]
pub struct InvalidName {
    pub name: String,
    pub reason: &'static str,
}

/// An interned variable name. Valid names start with an ASCII letter and
/// continue with letters, digits or underscores.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(Arc<str>);

impl VarId {
    pub fn new(name: &str) -> Result<VarId, InvalidName> {
        let mut chars = name.chars();
        let ok = match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {
                chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            }
            _ => false,
        };
        if ok {
            Ok(VarId(name.into()))
        } else {
            Err(InvalidName {
                name: name.to_string(),
                reason: "must start with a letter and contain only letters, digits, underscores",
            })
        }
    }

    /// Engine-reserved names (holes, kernel generators) bypass validation so
    /// they can never collide with anything a user can write.
    pub(crate) fn internal(name: &str) -> VarId {
        VarId(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarId({})", self.0)
    }
}

enum Shape {
    Leaf(VarId),
    Node(Word, Word),
}

struct WordInner {
    shape: Shape,
    total: u32,
}

/// A free-magma word. Words are interned: structurally equal words share one
/// allocation, so equality and hashing are pointer operations. The interner
/// is invisible to behavior; the order below is purely structural.
#[derive(Clone)]
pub struct Word(Arc<WordInner>);

#[derive(PartialEq, Eq, Hash)]
enum InternKey {
    Leaf(VarId),
    Node(usize, usize),
}

static INTERNER: LazyLock<Mutex<HashMap<InternKey, Word>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Borrowed view of a word's top layer.
pub enum WordView<'a> {
    Leaf(&'a VarId),
    Node(&'a Word, &'a Word),
}

impl Word {
    pub fn leaf(v: VarId) -> Word {
        let mut map = INTERNER.lock().unwrap();
        map.entry(InternKey::Leaf(v.clone()))
            .or_insert_with(|| {
                Word(Arc::new(WordInner {
                    shape: Shape::Leaf(v),
                    total: 1,
                }))
            })
            .clone()
    }

    pub fn node(left: Word, right: Word) -> Word {
        let key = InternKey::Node(
            Arc::as_ptr(&left.0) as usize,
            Arc::as_ptr(&right.0) as usize,
        );
        let mut map = INTERNER.lock().unwrap();
        map.entry(key)
            .or_insert_with(|| {
                let total = left.0.total + right.0.total;
                Word(Arc::new(WordInner {
                    shape: Shape::Node(left, right),
                    total,
                }))
            })
            .clone()
    }

    pub fn view(&self) -> WordView<'_> {
        match &self.0.shape {
            Shape::Leaf(v) => WordView::Leaf(v),
            Shape::Node(l, r) => WordView::Node(l, r),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.0.shape, Shape::Leaf(_))
    }

    /// Total degree: the number of leaves.
    pub fn total_degree(&self) -> u32 {
        self.0.total
    }

    pub fn multidegree(&self) -> Multidegree {
        let mut d = Multidegree::new();
        fn walk(w: &Word, d: &mut Multidegree) {
            match w.view() {
                WordView::Leaf(v) => d.bump(v.clone(), 1),
                WordView::Node(l, r) => {
                    walk(l, d);
                    walk(r, d);
                }
            }
        }
        walk(self, &mut d);
        d
    }

    /// Replace every leaf through `map`, rebuilding the tree. Leaves missing
    /// from the map are kept as they are.
    pub fn rename_leaves(&self, map: &BTreeMap<VarId, VarId>) -> Word {
        match self.view() {
            WordView::Leaf(v) => match map.get(v) {
                Some(u) => Word::leaf(u.clone()),
                None => self.clone(),
            },
            WordView::Node(l, r) => Word::node(l.rename_leaves(map), r.rename_leaves(map)),
        }
    }

    /// Replace every leaf by a whole word through `map`; missing leaves stay.
    pub fn expand_leaves(&self, map: &BTreeMap<VarId, Word>) -> Word {
        match self.view() {
            WordView::Leaf(v) => match map.get(v) {
                Some(w) => w.clone(),
                None => self.clone(),
            },
            WordView::Node(l, r) => Word::node(l.expand_leaves(map), r.expand_leaves(map)),
        }
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}
impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(state);
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_words(self, other)
    }
}
impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The engine-wide total order on words: total degree first, then leaves
/// before products, then recursively by (left, right) with leaves compared by
/// variable name. (At equal total degree the leaf/product tie-break can only
/// fire at degree 1, where both words are leaves; it is kept for totality.)
pub fn compare_words(a: &Word, b: &Word) -> Ordering {
    if Arc::ptr_eq(&a.0, &b.0) {
        return Ordering::Equal;
    }
    a.0.total.cmp(&b.0.total).then_with(|| match (a.view(), b.view()) {
        (WordView::Leaf(x), WordView::Leaf(y)) => x.cmp(y),
        (WordView::Leaf(_), WordView::Node(..)) => Ordering::Less,
        (WordView::Node(..), WordView::Leaf(_)) => Ordering::Greater,
        (WordView::Node(l1, r1), WordView::Node(l2, r2)) => {
            compare_words(l1, l2).then_with(|| compare_words(r1, r2))
        }
    })
}

impl fmt::Display for Word {
    /// Prints in the identity-DSL factor form: leaves bare, products as
    /// `l*r` with non-leaf children parenthesized, e.g. `x*(y*z)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(w: &Word, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if w.is_leaf() {
                write!(f, "{}", w)
            } else {
                write!(f, "({})", w)
            }
        }
        match self.view() {
            WordView::Leaf(v) => f.write_str(v.name()),
            WordView::Node(l, r) => {
                atom(l, f)?;
                f.write_str("*")?;
                atom(r, f)
            }
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

/// A multidegree: finitely many variables with positive multiplicities.
/// The derived `Ord` is only a (deterministic) container order; the partial
/// order that matters mathematically is componentwise and exposed as
/// [`Multidegree::dominates`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Multidegree {
    counts: BTreeMap<VarId, u32>,
}

impl Multidegree {
    pub fn new() -> Multidegree {
        Multidegree::default()
    }

    pub fn of_var(v: VarId) -> Multidegree {
        let mut d = Multidegree::new();
        d.bump(v, 1);
        d
    }

    pub fn from_counts<I: IntoIterator<Item = (VarId, u32)>>(counts: I) -> Multidegree {
        let mut d = Multidegree::new();
        for (v, k) in counts {
            d.bump(v, k);
        }
        d
    }

    pub fn bump(&mut self, v: VarId, k: u32) {
        if k == 0 {
            return;
        }
        *self.counts.entry(v).or_insert(0) += k;
    }

    pub fn get(&self, v: &VarId) -> u32 {
        self.counts.get(v).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.counts.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, u32)> {
        self.counts.iter().map(|(v, k)| (v, *k))
    }

    pub fn num_vars(&self) -> usize {
        self.counts.len()
    }

    /// True when every multiplicity is exactly one.
    pub fn is_multilinear(&self) -> bool {
        self.counts.values().all(|&k| k == 1)
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &Multidegree) -> bool {
        other.counts.iter().all(|(v, k)| self.get(v) >= *k)
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        let mut d = self.clone();
        for (v, k) in other.iter() {
            d.bump(v.clone(), k);
        }
        d
    }

    pub fn checked_sub(&self, other: &Multidegree) -> Option<Multidegree> {
        if !self.dominates(other) {
            return None;
        }
        let mut d = Multidegree::new();
        for (v, k) in self.iter() {
            let rest = k - other.get(v);
            if rest > 0 {
                d.bump(v.clone(), rest);
            }
        }
        Some(d)
    }

    /// All multidegrees `e` with `0 <= e <= self` componentwise, including
    /// the empty one and `self` itself.
    pub fn sub_multidegrees(&self) -> Vec<Multidegree> {
        let entries: Vec<(&VarId, u32)> = self.counts.iter().map(|(v, k)| (v, *k)).collect();
        let mut out = vec![Multidegree::new()];
        for (v, k) in entries {
            let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
            for base in &out {
                for take in 0..=k {
                    let mut d = base.clone();
                    d.bump((*v).clone(), take);
                    next.push(d);
                }
            }
            out = next;
        }
        out
    }

    /// Ordered decompositions of `self` into `parts` multidegrees (zeros
    /// allowed); the caller filters by per-part constraints.
    pub fn decompositions(&self, parts: usize) -> Vec<Vec<Multidegree>> {
        if parts == 0 {
            return if self.is_empty() { vec![vec![]] } else { vec![] };
        }
        if parts == 1 {
            return vec![vec![self.clone()]];
        }
        let mut out = Vec::new();
        for first in self.sub_multidegrees() {
            let rest = self.checked_sub(&first).expect("sub_multidegree dominates");
            for mut tail in rest.decompositions(parts - 1) {
                let mut v = Vec::with_capacity(parts);
                v.push(first.clone());
                v.append(&mut tail);
                out.push(v);
            }
        }
        out
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return f.write_str("(empty)");
        }
        let mut first = true;
        for (v, k) in &self.counts {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", v, k)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multidegree({})", self)
    }
}

static WORD_TABLES: LazyLock<Mutex<HashMap<Multidegree, Arc<Vec<Word>>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Every word of exactly the given multidegree, sorted by [`compare_words`].
/// There are Catalan(n-1) * n!/prod(k_i!) of them for total degree n.
/// Memoized per multidegree.
pub fn enumerate_words(d: &Multidegree) -> Arc<Vec<Word>> {
    if let Some(hit) = WORD_TABLES.lock().unwrap().get(d) {
        return hit.clone();
    }
    let mut words: Vec<Word> = Vec::new();
    if d.total() == 1 {
        let v = d.vars().next().unwrap().clone();
        words.push(Word::leaf(v));
    } else if d.total() >= 2 {
        for left in d.sub_multidegrees() {
            let lt = left.total();
            if lt == 0 || lt == d.total() {
                continue;
            }
            let right = d.checked_sub(&left).unwrap();
            let ls = enumerate_words(&left);
            let rs = enumerate_words(&right);
            for l in ls.iter() {
                for r in rs.iter() {
                    words.push(Word::node(l.clone(), r.clone()));
                }
            }
        }
        words.sort();
        debug_assert!(words.windows(2).all(|w| w[0] < w[1]), "duplicate words");
    }
    let arc = Arc::new(words);
    WORD_TABLES
        .lock()
        .unwrap()
        .entry(d.clone())
        .or_insert(arc)
        .clone()
}

pub(crate) fn hole_var() -> VarId {
    VarId::internal(HOLE_NAME)
}

/// One-hole contexts of own multidegree `e`: words of multidegree `e + hole`,
/// where the hole is a reserved leaf. `e` may be empty (the bare hole).
pub(crate) fn enumerate_contexts(e: &Multidegree) -> Arc<Vec<Word>> {
    let mut with_hole = e.clone();
    with_hole.bump(hole_var(), 1);
    enumerate_words(&with_hole)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> VarId {
        VarId::new(name).unwrap()
    }

    fn md(pairs: &[(&str, u32)]) -> Multidegree {
        Multidegree::from_counts(pairs.iter().map(|(n, k)| (v(n), *k)))
    }

    fn catalan(n: u32) -> u128 {
        // C_n = binom(2n, n) / (n + 1), computed exactly.
        let mut c: u128 = 1;
        for i in 0..n as u128 {
            c = c * 2 * (2 * i + 1) / (i + 2);
        }
        c
    }

    fn multinomial(d: &Multidegree) -> u128 {
        let mut result: u128 = 1;
        let mut seen: u128 = 0;
        for (_, k) in d.iter() {
            for i in 1..=k as u128 {
                seen += 1;
                result = result * seen / i;
            }
        }
        result
    }

    fn expected_count(d: &Multidegree) -> u128 {
        catalan(d.total() - 1) * multinomial(d)
    }

    #[test]
    fn var_names_validate() {
        assert!(VarId::new("x").is_ok());
        assert!(VarId::new("b2").is_ok());
        assert!(VarId::new("x_1").is_ok());
        assert!(VarId::new("").is_err());
        assert!(VarId::new("2x").is_err());
        assert!(VarId::new("_x").is_err());
        assert!(VarId::new("x y").is_err());
    }

    #[test]
    fn interning_gives_pointer_equality() {
        let a = Word::node(Word::leaf(v("x")), Word::leaf(v("y")));
        let b = Word::node(Word::leaf(v("x")), Word::leaf(v("y")));
        assert!(Arc::ptr_eq(&a.0, &b.0));
        assert_eq!(a, b);
    }

    #[test]
    fn multidegree_of_word() {
        let w = Word::node(
            Word::leaf(v("x")),
            Word::node(Word::leaf(v("x")), Word::leaf(v("y"))),
        );
        assert_eq!(w.multidegree(), md(&[("x", 2), ("y", 1)]));
        assert_eq!(w.total_degree(), 3);
    }

    #[test]
    fn order_is_total_and_degree_first() {
        let x = Word::leaf(v("x"));
        let y = Word::leaf(v("y"));
        let z = Word::leaf(v("z"));
        let xy = Word::node(x.clone(), y.clone());
        let x_yz = Word::node(x.clone(), Word::node(y.clone(), z.clone()));
        let xy_z = Word::node(xy.clone(), z.clone());
        assert!(x < y);
        assert!(y < xy, "degree dominates");
        // Leaf-left words precede node-left words of the same degree because
        // their left subtrees have smaller degree.
        assert!(x_yz < xy_z);
        // Recursive tie-break on the right child.
        let x_zy = Word::node(x.clone(), Word::node(z.clone(), y.clone()));
        assert!(x_yz < x_zy);
    }

    #[test]
    fn display_round_trips_shape() {
        let x = Word::leaf(v("x"));
        let y = Word::leaf(v("y"));
        let z = Word::leaf(v("z"));
        assert_eq!(Word::node(x.clone(), Word::node(y.clone(), z.clone())).to_string(), "x*(y*z)");
        assert_eq!(Word::node(Word::node(x.clone(), y.clone()), z.clone()).to_string(), "(x*y)*z");
    }

    #[test]
    fn enumerate_xyz_gives_twelve() {
        let d = md(&[("x", 1), ("y", 1), ("z", 1)]);
        let words = enumerate_words(&d);
        assert_eq!(words.len(), 12);
        assert_eq!(expected_count(&d), 12);
        for w in words.iter() {
            assert_eq!(w.multidegree(), d);
        }
        assert!(words.windows(2).all(|p| p[0] < p[1]), "sorted, no duplicates");
    }

    #[test]
    fn enumeration_counts_match_catalan_times_multinomial() {
        let cases = [
            md(&[("x", 1)]),
            md(&[("x", 2)]),
            md(&[("x", 1), ("y", 1)]),
            md(&[("x", 3)]),
            md(&[("x", 2), ("y", 1)]),
            md(&[("x", 2), ("y", 2)]),
            md(&[("x", 1), ("y", 1), ("z", 1)]),
            md(&[("x", 2), ("y", 1), ("z", 1)]),
            md(&[("x", 1), ("y", 1), ("z", 1), ("w", 1)]),
            md(&[("x", 5)]),
        ];
        for d in cases {
            let words = enumerate_words(&d);
            assert_eq!(
                words.len() as u128,
                expected_count(&d),
                "count mismatch at {}",
                d
            );
            let mut sorted = words.as_ref().clone();
            sorted.dedup();
            assert_eq!(sorted.len(), words.len(), "duplicates at {}", d);
            for w in words.iter() {
                assert_eq!(w.multidegree(), d, "stray multidegree at {}", d);
            }
        }
    }

    #[test]
    fn contexts_are_words_with_one_hole() {
        let e = md(&[("x", 1)]);
        let ctxs = enumerate_contexts(&e);
        // x*hole and hole*x.
        assert_eq!(ctxs.len(), 2);
        for c in ctxs.iter() {
            assert_eq!(c.multidegree().get(&hole_var()), 1);
        }
        // The bare hole for the empty context.
        let trivial = enumerate_contexts(&Multidegree::new());
        assert_eq!(trivial.len(), 1);
        assert!(trivial[0].is_leaf());
    }

    #[test]
    fn decompositions_cover_and_sum() {
        let d = md(&[("x", 2), ("y", 1)]);
        let parts = d.decompositions(2);
        // (x2y1) into two ordered parts: 3*2 = 6 componentwise choices.
        assert_eq!(parts.len(), 6);
        for p in &parts {
            assert_eq!(p[0].add(&p[1]), d);
        }
    }

    #[test]
    fn sub_multidegrees_count() {
        let d = md(&[("x", 2), ("y", 1)]);
        assert_eq!(d.sub_multidegrees().len(), 6);
        assert!(d.dominates(&md(&[("x", 1)])));
        assert!(!md(&[("x", 1)]).dominates(&d));
    }
}
