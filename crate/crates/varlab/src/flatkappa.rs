//! Truncated presentations of the kernel functor `B♭(−)`, binary coproducts
//! of such presentations, and the degreewise comparison map
//! `κ: B♭X + B♭Y → B♭(X + Y)`.
//!
//! For a variety `𝒱` and alphabets `B` (operators) and `X` (arguments),
//! `B♭X` is the subalgebra of the free `𝒱`-algebra on `B ∪ X` spanned by the
//! monomials containing at least one variable from `X`. Up to a degree bound
//! we present it by generators (a monomial basis of each admissible
//! component, via [`crate::tideal`]) and relations (the rewrite of each
//! in-bound generator product). The coproduct of two such presentations is
//! computed degreewise as a quotient of the span of generator words, and κ is
//! the induced linear map into the corresponding component of the free
//! algebra on the merged alphabet. Everything is exact over ℚ; kernel
//! witnesses and missing cokernel classes are certified by construction and
//! re-checkable through [`ComponentAnalysis`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::matrix::{self, zero_vector, RowReducer, Vector};
use crate::poly::{scalar_to_string, Polynomial};
use crate::tideal::{instance_polynomials, ConsequenceSpace, Tables};
use crate::variety::VarietyPresentation;
use crate::words::{enumerate_contexts, enumerate_words, hole_var, Multidegree, VarId, Word, WordView};

/// A truncation bound on multidegrees: a cap on the total degree plus
/// optional per-variable caps (a variable without an explicit cap is limited
/// only by the total).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBound {
    max_total: u32,
    caps: BTreeMap<VarId, u32>,
}

impl DegreeBound {
    /// Bound by total degree alone.
    pub fn by_total(max_total: u32) -> DegreeBound {
        assert!(max_total >= 1, "degree bound must be at least 1");
        DegreeBound {
            max_total,
            caps: BTreeMap::new(),
        }
    }

    pub fn max_total(&self) -> u32 {
        self.max_total
    }

    /// Explicit per-variable caps (variables not listed default to the
    /// total bound).
    pub fn caps(&self) -> &BTreeMap<VarId, u32> {
        &self.caps
    }

    pub fn cap(&self, v: &VarId) -> u32 {
        self.caps.get(v).copied().unwrap_or(self.max_total)
    }

    pub fn set_cap(&mut self, v: VarId, cap: u32) {
        self.caps.insert(v, cap);
    }

    pub fn with_cap(mut self, v: VarId, cap: u32) -> DegreeBound {
        self.set_cap(v, cap);
        self
    }

    /// Whether the multidegree lies within the bound.
    pub fn admits(&self, d: &Multidegree) -> bool {
        d.total() <= self.max_total && d.iter().all(|(v, k)| k <= self.cap(v))
    }

    fn to_json(&self) -> Value {
        let caps: serde_json::Map<String, Value> = self
            .caps
            .iter()
            .map(|(v, k)| (v.name().to_string(), json!(k)))
            .collect();
        json!({ "max_total": self.max_total, "caps": caps })
    }
}

impl fmt::Display for DegreeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "total<={}", self.max_total)?;
        for (v, k) in &self.caps {
            write!(f, ",{}<={}", v.name(), k)?;
        }
        Ok(())
    }
}

/// The ambient alphabet of one kernel `B♭X`: operator variables (`b_vars`)
/// and argument variables (`x_vars`). Kernel monomials are exactly those
/// containing at least one argument variable.
#[derive(Clone, Debug)]
pub struct AmbientAlphabet {
    pub b_vars: Vec<VarId>,
    pub x_vars: Vec<VarId>,
}

impl AmbientAlphabet {
    pub fn new(b_vars: Vec<VarId>, x_vars: Vec<VarId>) -> AmbientAlphabet {
        assert!(!x_vars.is_empty(), "at least one argument variable required");
        let mut seen = BTreeSet::new();
        for v in b_vars.iter().chain(x_vars.iter()) {
            assert!(seen.insert(v.clone()), "duplicate alphabet variable {}", v.name());
        }
        AmbientAlphabet { b_vars, x_vars }
    }

    fn all_vars(&self) -> Vec<VarId> {
        self.b_vars.iter().chain(self.x_vars.iter()).cloned().collect()
    }

    fn argument_count(&self, d: &Multidegree) -> u32 {
        self.x_vars.iter().map(|v| d.get(v)).sum()
    }
}

/// One generator of a truncated kernel presentation: an opaque leaf symbol
/// together with the ambient monomial it stands for.
#[derive(Clone, Debug)]
pub struct KernelGenerator {
    /// Internal leaf symbol; its name encodes the enumeration index so that
    /// variable order equals creation order.
    pub var: VarId,
    /// Representative monomial over the ambient alphabet (a quotient-basis
    /// word of its component).
    pub representative: Word,
    /// Multidegree of the representative over the ambient alphabet.
    pub ambient: Multidegree,
}

/// A rewrite rule `left · right → rewrite` between generators, valid in the
/// presented algebra. `rewrite` is a linear combination of generator leaves.
#[derive(Clone, Debug)]
pub struct StructureRelation {
    pub left: VarId,
    pub right: VarId,
    pub rewrite: Polynomial,
}

/// Generators and relations presenting `B♭X` up to a degree bound.
#[derive(Clone, Debug)]
pub struct KernelPresentation {
    alphabet: AmbientAlphabet,
    bound: DegreeBound,
    generators: Vec<KernelGenerator>,
    relations: Vec<StructureRelation>,
}

impl KernelPresentation {
    pub fn alphabet(&self) -> &AmbientAlphabet {
        &self.alphabet
    }

    pub fn bound(&self) -> &DegreeBound {
        &self.bound
    }

    pub fn generators(&self) -> &[KernelGenerator] {
        &self.generators
    }

    pub fn relations(&self) -> &[StructureRelation] {
        &self.relations
    }
}

/// All multidegrees over `vars` admitted by `bound` with total degree at
/// least 1, sorted by total degree then lexicographically.
fn degrees_within(vars: &[VarId], bound: &DegreeBound) -> Vec<Multidegree> {
    let mut acc: Vec<Multidegree> = vec![Multidegree::new()];
    for v in vars {
        let cap = bound.cap(v);
        let mut next = Vec::new();
        for base in &acc {
            let room = bound.max_total() - base.total();
            for k in 0..=cap.min(room) {
                let mut d = base.clone();
                if k > 0 {
                    d.bump(v.clone(), k);
                }
                next.push(d);
            }
        }
        acc = next;
    }
    acc.retain(|d| d.total() >= 1);
    acc.sort_by_key(|d| (d.total(), d.clone()));
    acc
}

/// Computes the truncated presentation of `B♭X` for the given variety:
/// one generator per quotient-basis word of every admissible component with
/// at least one argument variable, and one rewrite relation per generator
/// pair whose product degree stays within the bound.
///
/// `prefix` namespaces the internal generator symbols (it must not collide
/// between presentations that are later combined into a [`FlatPair`]).
pub fn flat_basis(
    tables: &Tables,
    variety: &VarietyPresentation,
    alphabet: AmbientAlphabet,
    bound: DegreeBound,
    prefix: &str,
) -> KernelPresentation {
    assert!(!prefix.is_empty() && !prefix.contains('#'), "invalid generator prefix");
    let all = alphabet.all_vars();
    let mut generators: Vec<KernelGenerator> = Vec::new();
    let mut rep_index: BTreeMap<Word, usize> = BTreeMap::new();
    for gamma in degrees_within(&all, &bound) {
        if alphabet.argument_count(&gamma) == 0 {
            continue;
        }
        for rep in tables.quotient_basis(variety, &gamma) {
            let var = VarId::internal(&format!("{prefix}#{:04}", generators.len()));
            rep_index.insert(rep.clone(), generators.len());
            generators.push(KernelGenerator {
                var,
                representative: rep,
                ambient: gamma.clone(),
            });
        }
    }
    let mut relations = Vec::new();
    for g in &generators {
        for h in &generators {
            let delta = g.ambient.add(&h.ambient);
            if !bound.admits(&delta) {
                continue;
            }
            let product = Word::node(g.representative.clone(), h.representative.clone());
            let reduced = tables.reduce(variety, &Polynomial::monomial(product));
            let mut rewrite = Polynomial::zero();
            for (w, c) in reduced.terms() {
                let idx = *rep_index
                    .get(w)
                    .expect("reduced product must be supported on generator representatives");
                rewrite.add_term(Word::leaf(generators[idx].var.clone()), c.clone());
            }
            relations.push(StructureRelation {
                left: g.var.clone(),
                right: h.var.clone(),
                rewrite,
            });
        }
    }
    KernelPresentation {
        alphabet,
        bound,
        generators,
        relations,
    }
}

/// Internal per-generator data shared by the two factors of a [`FlatPair`].
#[derive(Clone, Debug)]
struct PairGen {
    var: VarId,
    /// Multidegree of the representative after merging factor copies.
    merged: Multidegree,
}

/// A pair of truncated kernel presentations `B♭X` and `B♭Y` over a shared
/// operator alphabet `B`, with the bookkeeping needed to compute their
/// coproduct and the comparison map into `B♭(X + Y)`.
#[derive(Clone, Debug)]
pub struct FlatPair {
    p1: KernelPresentation,
    p2: KernelPresentation,
    b_vars: Vec<VarId>,
    x_vars: Vec<VarId>,
    y_vars: Vec<VarId>,
    bound: DegreeBound,
    gens: Vec<PairGen>,
    /// Generator leaf → representative over the merged alphabet.
    expand: BTreeMap<VarId, Word>,
    /// Factor-local representative of each generator, for rendering.
    reps: HashMap<VarId, Word>,
    merged_deg: HashMap<VarId, Multidegree>,
    /// Per factor: merged operator variable → its copy in that factor.
    copy_maps: [BTreeMap<VarId, VarId>; 2],
}

fn numbered_names(base: &str, n: usize) -> Vec<VarId> {
    assert!(n >= 1, "alphabet sizes must be at least 1");
    if n == 1 {
        vec![VarId::new(base).expect("valid variable name")]
    } else {
        (1..=n)
            .map(|i| VarId::new(&format!("{base}{i}")).expect("valid variable name"))
            .collect()
    }
}

/// Builds the standard pair for `nb` operator variables, `nx` left-factor
/// argument variables, and `ny` right-factor argument variables, all bounded
/// by `bound` (interpreted over the merged alphabet). Merged names are `b`,
/// `x`, `y` when the count is 1 and `b1, b2, …` style otherwise; the factor
/// copies of an operator variable append `1` (left factor) or `2` (right
/// factor), so with one operator variable the copies are `b1` and `b2`.
pub fn standard_pair(
    tables: &Tables,
    variety: &VarietyPresentation,
    nb: usize,
    nx: usize,
    ny: usize,
    bound: DegreeBound,
) -> FlatPair {
    let b_vars = numbered_names("b", nb);
    let x_vars = numbered_names("x", nx);
    let y_vars = numbered_names("y", ny);
    let mut copy_maps: [BTreeMap<VarId, VarId>; 2] = [BTreeMap::new(), BTreeMap::new()];
    let mut factors: Vec<(Vec<VarId>, Vec<VarId>, &str)> = Vec::new();
    for (fi, args) in [(0usize, &x_vars), (1usize, &y_vars)] {
        let mut copies = Vec::new();
        for b in &b_vars {
            let copy = VarId::new(&format!("{}{}", b.name(), fi + 1)).expect("valid variable name");
            copy_maps[fi].insert(b.clone(), copy.clone());
            copies.push(copy);
        }
        factors.push((copies, args.clone(), if fi == 0 { "p1" } else { "p2" }));
    }
    let mut presentations = Vec::new();
    for (fi, (copies, args, prefix)) in factors.into_iter().enumerate() {
        let mut fbound = DegreeBound::by_total(bound.max_total());
        for (merged, copy) in &copy_maps[fi] {
            if let Some(&cap) = bound.caps().get(merged) {
                fbound.set_cap(copy.clone(), cap);
            }
        }
        for v in &args {
            if let Some(&cap) = bound.caps().get(v) {
                fbound.set_cap(v.clone(), cap);
            }
        }
        let alphabet = AmbientAlphabet::new(copies, args);
        presentations.push(flat_basis(tables, variety, alphabet, fbound, prefix));
    }
    let p2 = presentations.pop().expect("two presentations");
    let p1 = presentations.pop().expect("two presentations");
    let mut gens = Vec::new();
    let mut expand = BTreeMap::new();
    let mut reps = HashMap::new();
    let mut merged_deg = HashMap::new();
    for (fi, pres) in [(1u8, &p1), (2u8, &p2)] {
        let uncopy: BTreeMap<VarId, VarId> = copy_maps[(fi - 1) as usize]
            .iter()
            .map(|(merged, copy)| (copy.clone(), merged.clone()))
            .collect();
        for g in pres.generators() {
            let merged_rep = g.representative.rename_leaves(&uncopy);
            let degree = merged_rep.multidegree();
            expand.insert(g.var.clone(), merged_rep);
            reps.insert(g.var.clone(), g.representative.clone());
            merged_deg.insert(g.var.clone(), degree.clone());
            gens.push(PairGen {
                var: g.var.clone(),
                merged: degree,
            });
        }
    }
    FlatPair {
        p1,
        p2,
        b_vars,
        x_vars,
        y_vars,
        bound,
        gens,
        expand,
        reps,
        merged_deg,
        copy_maps,
    }
}

impl FlatPair {
    pub fn left(&self) -> &KernelPresentation {
        &self.p1
    }

    pub fn right(&self) -> &KernelPresentation {
        &self.p2
    }

    pub fn b_vars(&self) -> &[VarId] {
        &self.b_vars
    }

    pub fn x_vars(&self) -> &[VarId] {
        &self.x_vars
    }

    pub fn y_vars(&self) -> &[VarId] {
        &self.y_vars
    }

    /// The bound over the merged alphabet the pair was built for.
    pub fn bound(&self) -> &DegreeBound {
        &self.bound
    }

    /// All merged-alphabet variables: operators, then left arguments, then
    /// right arguments.
    pub fn merged_vars(&self) -> Vec<VarId> {
        self.b_vars
            .iter()
            .chain(self.x_vars.iter())
            .chain(self.y_vars.iter())
            .cloned()
            .collect()
    }

    /// The generator leaf whose factor-local representative is `rep`.
    pub fn generator_by_rep(&self, rep: &Word) -> Option<VarId> {
        self.gens
            .iter()
            .find(|g| self.reps.get(&g.var).is_some_and(|r| r == rep))
            .map(|g| g.var.clone())
    }

    /// Expands generator leaves to their merged-alphabet representatives.
    pub fn expand_word(&self, w: &Word) -> Word {
        w.expand_leaves(&self.expand)
    }

    fn argument_count(&self, d: &Multidegree) -> u32 {
        self.x_vars
            .iter()
            .chain(self.y_vars.iter())
            .map(|v| d.get(v))
            .sum()
    }

    /// Renders a word over generator leaves: a generator with a leaf
    /// representative prints as that variable, a compound generator prints
    /// as `g[rep]`, and ordinary structure mirrors the identity notation.
    pub fn render_word(&self, w: &Word) -> String {
        match w.view() {
            WordView::Leaf(v) => self.render_leaf(v, false),
            WordView::Node(l, r) => format!("{}*{}", self.render_atom(l), self.render_atom(r)),
        }
    }

    fn render_atom(&self, w: &Word) -> String {
        match w.view() {
            WordView::Leaf(v) => self.render_leaf(v, true),
            WordView::Node(..) => format!("({})", self.render_word(w)),
        }
    }

    fn render_leaf(&self, v: &VarId, parenthesize: bool) -> String {
        match self.reps.get(v) {
            Some(rep) if rep.is_leaf() => rep.to_string(),
            Some(rep) => {
                let body = format!("g[{rep}]");
                if parenthesize {
                    format!("({body})")
                } else {
                    body
                }
            }
            None => v.name().to_string(),
        }
    }

    /// Renders a polynomial over generator leaves in the same canonical form
    /// as the identity printer.
    pub fn render_poly(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in p.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&scalar_to_string(&abs));
                out.push('*');
            }
            out.push_str(&self.render_word(w));
        }
        out
    }
}

/// A requested component needs generators or relations beyond the bounds the
/// factor presentations were truncated at, so its coproduct cannot be
/// computed faithfully from them.
#[derive(Debug, Clone, Error)]
#[error("component {degree} requires factor-{factor} generators beyond the presentation bound")]
pub struct BoundExceeded {
    pub degree: Multidegree,
    pub factor: u8,
}

/// One multidegree component of the coproduct of the two presented kernels:
/// the span of words over generator leaves, modulo variety laws applied to
/// generators and modulo the factor rewrite relations.
#[derive(Clone, Debug)]
pub struct CoproductComponent {
    degree: Multidegree,
    /// Column words in descending order (column 0 is the largest word).
    words_desc: Vec<Word>,
    index: HashMap<Word, usize>,
    relations: Vec<Polynomial>,
    reducer: RowReducer,
}

impl CoproductComponent {
    pub fn degree(&self) -> &Multidegree {
        &self.degree
    }

    /// Column words, descending.
    pub fn words(&self) -> &[Word] {
        &self.words_desc
    }

    /// Dimension of the component (columns minus relation rank).
    pub fn dimension(&self) -> usize {
        self.words_desc.len() - self.reducer.rank()
    }

    /// Every relation row imposed on the component (law instances over the
    /// generator alphabet plus context-embedded rewrite relations).
    pub fn relation_polynomials(&self) -> &[Polynomial] {
        &self.relations
    }

    /// Non-pivot column words in ascending order: a monomial basis of the
    /// component.
    pub fn quotient_words(&self) -> Vec<Word> {
        let mut out: Vec<Word> = self
            .words_desc
            .iter()
            .enumerate()
            .filter(|(col, _)| !self.reducer.is_pivot(*col))
            .map(|(_, w)| w.clone())
            .collect();
        out.reverse();
        out
    }

    fn to_vec(&self, p: &Polynomial) -> Vector {
        let mut v = zero_vector(self.words_desc.len());
        for (w, c) in p.terms() {
            let col = *self
                .index
                .get(w)
                .unwrap_or_else(|| panic!("word {w} does not belong to component {}", self.degree));
            v[col] = c.clone();
        }
        v
    }

    fn vec_to_poly(&self, v: &Vector) -> Polynomial {
        let mut p = Polynomial::zero();
        for (col, c) in v.iter().enumerate() {
            if !c.is_zero() {
                p.add_term(self.words_desc[col].clone(), c.clone());
            }
        }
        p
    }

    /// Canonical form of a domain polynomial modulo the relation rows.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut v = self.to_vec(p);
        self.reducer.reduce(&mut v);
        self.vec_to_poly(&v)
    }

    /// Whether the polynomial represents the zero class of the component.
    pub fn class_is_zero(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }
}

/// All multidegrees over the generator alphabet whose merged ambient degree
/// is exactly `d`.
fn generator_multisets(gens: &[PairGen], d: &Multidegree) -> Vec<Multidegree> {
    fn rec(
        gens: &[PairGen],
        i: usize,
        remaining: Multidegree,
        current: &mut BTreeMap<VarId, u32>,
        out: &mut Vec<Multidegree>,
    ) {
        if remaining.is_empty() {
            out.push(Multidegree::from_counts(
                current.iter().map(|(v, k)| (v.clone(), *k)),
            ));
            return;
        }
        if i == gens.len() {
            return;
        }
        rec(gens, i + 1, remaining.clone(), current, out);
        let mut rem = remaining;
        let mut k = 0u32;
        while let Some(next) = rem.checked_sub(&gens[i].merged) {
            k += 1;
            rem = next;
            current.insert(gens[i].var.clone(), k);
            rec(gens, i + 1, rem.clone(), current, out);
        }
        current.remove(&gens[i].var);
    }
    let mut out = Vec::new();
    rec(gens, 0, d.clone(), &mut BTreeMap::new(), &mut out);
    out
}

/// Fails when some factor could, in principle, contribute a generator or
/// relation at a degree the factor presentation was truncated below.
fn check_bounds(pair: &FlatPair, d: &Multidegree) -> Result<(), BoundExceeded> {
    for (fi, pres) in [(1u8, &pair.p1), (2u8, &pair.p2)] {
        let copies = &pair.copy_maps[(fi - 1) as usize];
        let mut demand = Multidegree::new();
        for (v, k) in d.iter() {
            if let Some(copy) = copies.get(v) {
                demand.bump(copy.clone(), k);
            } else if pres.alphabet.x_vars.contains(v) {
                demand.bump(v.clone(), k);
            }
        }
        for gamma in demand.sub_multidegrees() {
            if gamma.total() == 0 || pres.alphabet.argument_count(&gamma) == 0 {
                continue;
            }
            if !pres.bound.admits(&gamma) {
                return Err(BoundExceeded {
                    degree: d.clone(),
                    factor: fi,
                });
            }
        }
    }
    Ok(())
}

fn plug(context: &Word, filler: &Word) -> Word {
    let mut map = BTreeMap::new();
    map.insert(hole_var(), filler.clone());
    context.expand_leaves(&map)
}

/// Computes the multidegree-`d` component (over the merged alphabet) of the
/// coproduct of the pair's two kernel presentations.
pub fn coproduct_component(
    variety: &VarietyPresentation,
    pair: &FlatPair,
    d: &Multidegree,
) -> Result<CoproductComponent, BoundExceeded> {
    check_bounds(pair, d)?;
    let multisets = generator_multisets(&pair.gens, d);
    let mut word_set: BTreeSet<Word> = BTreeSet::new();
    for dd in &multisets {
        for w in enumerate_words(dd).iter() {
            word_set.insert(w.clone());
        }
    }
    let words_desc: Vec<Word> = word_set.into_iter().rev().collect();
    let index: HashMap<Word, usize> = words_desc
        .iter()
        .enumerate()
        .map(|(col, w)| (w.clone(), col))
        .collect();
    let mut relations: Vec<Polynomial> = Vec::new();
    // (a) Variety laws applied over the generator alphabet.
    for dd in &multisets {
        relations.extend(instance_polynomials(variety, dd));
    }
    // (b) Factor rewrite relations embedded in every generator context.
    for pres in [&pair.p1, &pair.p2] {
        for rel in &pres.relations {
            let delta = pair.merged_deg[&rel.left].add(&pair.merged_deg[&rel.right]);
            let Some(e) = d.checked_sub(&delta) else {
                continue;
            };
            let product = Word::node(Word::leaf(rel.left.clone()), Word::leaf(rel.right.clone()));
            for ee in generator_multisets(&pair.gens, &e) {
                for context in enumerate_contexts(&ee).iter() {
                    let mut row = Polynomial::monomial(plug(context, &product));
                    for (w, c) in rel.rewrite.terms() {
                        row.add_term(plug(context, w), -c.clone());
                    }
                    if !row.is_zero() {
                        relations.push(row);
                    }
                }
            }
        }
    }
    let mut component = CoproductComponent {
        degree: d.clone(),
        words_desc,
        index,
        relations: Vec::new(),
        reducer: RowReducer::new(0),
    };
    let mut reducer = RowReducer::new(component.words_desc.len());
    for row in &relations {
        reducer.insert(component.to_vec(row));
    }
    component.relations = relations;
    component.reducer = reducer;
    Ok(component)
}

/// Sum of the exact component dimensions over every multidegree dominated by
/// `cap` — the dimension of the coproduct truncated at `cap`.
pub fn coproduct_dimension_within(
    variety: &VarietyPresentation,
    pair: &FlatPair,
    cap: &Multidegree,
) -> Result<usize, BoundExceeded> {
    let mut dim = 0;
    for e in cap.sub_multidegrees() {
        if e.total() == 0 {
            continue;
        }
        dim += coproduct_component(variety, pair, &e)?.dimension();
    }
    Ok(dim)
}

/// The comparison map κ restricted to one multidegree component, with its
/// certified kernel and cokernel data.
pub struct ComponentAnalysis {
    degree: Multidegree,
    component: CoproductComponent,
    codomain: Arc<ConsequenceSpace>,
    codomain_basis: Vec<Word>,
    image_span: RowReducer,
    expand: BTreeMap<VarId, Word>,
    dim_domain: usize,
    rank: usize,
    well_defined: bool,
    kernel_witnesses: Vec<Polynomial>,
    missing: Vec<Word>,
}

impl ComponentAnalysis {
    pub fn degree(&self) -> &Multidegree {
        &self.degree
    }

    pub fn component(&self) -> &CoproductComponent {
        &self.component
    }

    pub fn dim_domain(&self) -> usize {
        self.dim_domain
    }

    pub fn dim_codomain(&self) -> usize {
        self.codomain_basis.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn injective(&self) -> bool {
        self.rank == self.dim_domain
    }

    pub fn surjective(&self) -> bool {
        self.rank == self.codomain_basis.len()
    }

    /// Whether every relation row of the domain maps to zero (checked
    /// exhaustively; κ is only well defined on the quotient when this holds).
    pub fn well_defined(&self) -> bool {
        self.well_defined
    }

    /// Nonzero domain classes with zero image, one per kernel dimension.
    pub fn kernel_witnesses(&self) -> &[Polynomial] {
        &self.kernel_witnesses
    }

    /// Codomain basis classes not hit by κ.
    pub fn missing(&self) -> &[Word] {
        &self.missing
    }

    /// The image of a domain polynomial: expand generator leaves to merged
    /// representatives and reduce in the codomain component.
    pub fn image_poly(&self, p: &Polynomial) -> Polynomial {
        let mut expanded = Polynomial::zero();
        for (w, c) in p.terms() {
            expanded.add_term(w.expand_leaves(&self.expand), c.clone());
        }
        self.codomain.reduce(&expanded)
    }

    /// Whether the polynomial represents the zero class of the domain.
    pub fn domain_class_is_zero(&self, p: &Polynomial) -> bool {
        self.component.class_is_zero(p)
    }

    /// Certifies kernel membership: a nonzero domain class with zero image.
    pub fn kernel_contains(&self, p: &Polynomial) -> bool {
        !self.domain_class_is_zero(p) && self.image_poly(p).is_zero()
    }

    /// Whether the codomain class of `p` (a polynomial over the merged
    /// alphabet) lies in the image of κ.
    pub fn image_contains(&self, p: &Polynomial) -> bool {
        let reduced = self.codomain.reduce(p);
        let coords: Vector = self.codomain_basis.iter().map(|w| reduced.coeff(w)).collect();
        self.image_span.contains(&coords)
    }
}

/// Analyses κ on one coproduct component.
pub fn kappa_on_component(
    tables: &Tables,
    variety: &VarietyPresentation,
    pair: &FlatPair,
    component: CoproductComponent,
) -> ComponentAnalysis {
    let codomain = tables.consequence_space(variety, component.degree());
    let codomain_basis = codomain.quotient_basis();
    let m = codomain_basis.len();
    let coords = |p: &Polynomial| -> Vector { codomain_basis.iter().map(|w| p.coeff(w)).collect() };
    let image_of_word = |w: &Word| -> Polynomial {
        codomain.reduce(&Polynomial::monomial(w.expand_leaves(&pair.expand)))
    };
    let image_cols: Vec<Vector> = component
        .words()
        .iter()
        .map(|w| coords(&image_of_word(w)))
        .collect();
    let image_vec = |p: &Polynomial| -> Vector {
        let mut v = zero_vector(m);
        for (w, c) in p.terms() {
            let col = &image_cols[component.index[w]];
            for (i, x) in col.iter().enumerate() {
                v[i] = &v[i] + &(x * c);
            }
        }
        v
    };
    let well_defined = component
        .relation_polynomials()
        .iter()
        .all(|row| matrix::is_zero_vector(&image_vec(row)));
    let mut image_span = RowReducer::new(m);
    for col in &image_cols {
        image_span.insert(col.clone());
    }
    let rank = image_span.rank();
    let mut kernel_witnesses = Vec::new();
    let mut witness_span = RowReducer::new(component.words().len());
    for lambda in matrix::nullspace(&image_cols) {
        let reduced = component.reduce(&component.vec_to_poly(&lambda));
        if reduced.is_zero() {
            continue;
        }
        if witness_span.insert(component.to_vec(&reduced)) {
            kernel_witnesses.push(reduced);
        }
    }
    let mut missing = Vec::new();
    for (i, u) in codomain_basis.iter().enumerate() {
        let mut e = zero_vector(m);
        e[i] = num_traits::one();
        if !image_span.contains(&e) {
            missing.push(u.clone());
        }
    }
    ComponentAnalysis {
        degree: component.degree().clone(),
        dim_domain: component.dimension(),
        component,
        codomain,
        codomain_basis,
        image_span,
        expand: pair.expand.clone(),
        rank,
        well_defined,
        kernel_witnesses,
        missing,
    }
}

/// The full degreewise κ analysis over a bound.
pub struct KappaAnalysis {
    pub variety_name: String,
    pub bound: DegreeBound,
    pub components: Vec<ComponentAnalysis>,
    /// Degrees that could not be analysed because a factor presentation was
    /// truncated too low (empty when the pair was built for this bound).
    pub indeterminate: Vec<Multidegree>,
    pub verdict: String,
    pub iso: bool,
}

/// Runs κ over every merged multidegree admitted by the pair's bound that
/// contains at least one argument variable, in degree order, and summarises
/// the verdict.
pub fn analyze_kappa(
    tables: &Tables,
    variety: &VarietyPresentation,
    pair: &FlatPair,
) -> KappaAnalysis {
    let bound = pair.bound().clone();
    let mut components = Vec::new();
    let mut indeterminate = Vec::new();
    for d in degrees_within(&pair.merged_vars(), &bound) {
        if pair.argument_count(&d) == 0 {
            continue;
        }
        match coproduct_component(variety, pair, &d) {
            Ok(component) => components.push(kappa_on_component(tables, variety, pair, component)),
            Err(_) => indeterminate.push(d),
        }
    }
    let mut parts = Vec::new();
    if let Some(c) = components.iter().find(|c| !c.well_defined()) {
        parts.push(format!("comparison map ill-defined at {}", c.degree()));
    }
    if let Some(c) = components.iter().find(|c| !c.injective()) {
        let witness = c
            .kernel_witnesses()
            .first()
            .map(|w| pair.render_poly(w))
            .unwrap_or_else(|| "?".to_string());
        parts.push(format!("not injective (witness: {} at {})", witness, c.degree()));
    }
    if let Some(c) = components.iter().find(|c| !c.surjective()) {
        let miss = c
            .missing()
            .first()
            .map(|w| w.to_string())
            .unwrap_or_else(|| "?".to_string());
        parts.push(format!("not surjective (missing: {} at {})", miss, c.degree()));
    }
    if !indeterminate.is_empty() {
        let list: Vec<String> = indeterminate.iter().map(|d| d.to_string()).collect();
        parts.push(format!("indeterminate at this bound ({})", list.join("; ")));
    }
    let iso = parts.is_empty();
    let verdict = if iso {
        "iso up to bound".to_string()
    } else {
        parts.join("; ")
    };
    KappaAnalysis {
        variety_name: variety.name().to_string(),
        bound,
        components,
        indeterminate,
        verdict,
        iso,
    }
}

pub(crate) fn multidegree_json(d: &Multidegree) -> Value {
    let map: serde_json::Map<String, Value> = d
        .iter()
        .map(|(v, k)| (v.name().to_string(), json!(k)))
        .collect();
    Value::Object(map)
}

impl KappaAnalysis {
    /// Serialises the analysis in the report schema used by the command-line
    /// interface. Deterministic: keys are sorted and component order is the
    /// analysis order.
    pub fn to_json(&self, pair: &FlatPair) -> Value {
        let components: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                json!({
                    "multidegree": multidegree_json(c.degree()),
                    "dim_domain": c.dim_domain(),
                    "dim_codomain": c.dim_codomain(),
                    "rank": c.rank(),
                    "injective": c.injective(),
                    "surjective": c.surjective(),
                    "kernel_witnesses": c
                        .kernel_witnesses()
                        .iter()
                        .map(|w| pair.render_poly(w))
                        .collect::<Vec<String>>(),
                    "missing": c.missing().iter().map(|w| w.to_string()).collect::<Vec<String>>(),
                })
            })
            .collect();
        json!({
            "variety": self.variety_name,
            "bound": self.bound.to_json(),
            "components": components,
            "verdict": self.verdict,
        })
    }
}
