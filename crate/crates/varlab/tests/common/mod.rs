//! Shared helpers for the integration suites: parsing shortcuts, the
//! finite-dimensional model algebras used for evaluation cross-checks, and an
//! independent fixed-point closure oracle for degreewise consequence spaces.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, VecDeque};

use varlab::fdalg::StructureAlgebra;
use varlab::flatkappa::FlatPair;
use varlab::matrix::RowReducer;
use varlab::poly::{Polynomial, Scalar};
use varlab::variety::{parse_identity, Builtin, VarietyPresentation};
use varlab::words::{enumerate_words, Multidegree, VarId, Word};

pub fn v(name: &str) -> VarId {
    VarId::new(name).expect("valid variable name")
}

pub fn poly(src: &str) -> Polynomial {
    parse_identity(src)
        .unwrap_or_else(|e| panic!("parse {src:?}: {e}"))
        .poly()
        .clone()
}

pub fn word(src: &str) -> Word {
    let p = poly(src);
    assert_eq!(p.num_terms(), 1, "{src:?} is not a single monomial");
    let w = p.terms().next().unwrap().0.clone();
    w
}

pub fn md<const N: usize>(pairs: [(&str, u32); N]) -> Multidegree {
    Multidegree::from_counts(pairs.map(|(name, k)| (v(name), k)))
}

/// The leaf word of the coproduct generator whose factor representative is
/// `rep` (written over the factor alphabet, e.g. `"y*b2"`).
pub fn gen_leaf(pair: &FlatPair, rep: &str) -> Word {
    Word::leaf(
        pair.generator_by_rep(&word(rep))
            .unwrap_or_else(|| panic!("no generator with representative {rep}")),
    )
}

// ---------------------------------------------------------------------------
// Finite-dimensional model algebras, one per builtin variety.
// ---------------------------------------------------------------------------

/// A small structure-constant algebra lying in the given builtin variety
/// (verified by `check_laws` in the tests that use it). Products not listed
/// are zero.
pub fn model_for(which: Builtin) -> StructureAlgebra {
    match which {
        // Cross products on a 3-dimensional space: a Lie algebra, hence also
        // alternating.
        Builtin::Lie | Builtin::Alt => StructureAlgebra::from_integer_table(
            &["i", "j", "k"],
            &[
                ("i", "j", &[("k", 1)]),
                ("j", "i", &[("k", -1)]),
                ("j", "k", &[("i", 1)]),
                ("k", "j", &[("i", -1)]),
                ("k", "i", &[("j", 1)]),
                ("i", "k", &[("j", -1)]),
            ],
        ),
        // The square-zero truncated polynomial algebra on one generator.
        Builtin::Assoc => {
            StructureAlgebra::from_integer_table(&["a", "b"], &[("a", "a", &[("b", 1)])])
        }
        // One generator with aa = b, ab = c = -ba; antiassociative.
        Builtin::AAAlg => StructureAlgebra::from_integer_table(
            &["a", "b", "c"],
            &[
                ("a", "a", &[("b", 1)]),
                ("a", "b", &[("c", 1)]),
                ("b", "a", &[("c", -1)]),
            ],
        ),
        // Anticommutative with ab = c = -ba and all triple products zero.
        Builtin::AAAAlg => StructureAlgebra::from_integer_table(
            &["a", "b", "c"],
            &[("a", "b", &[("c", 1)]), ("b", "a", &[("c", -1)])],
        ),
        // All triple products vanish, so every trilinear law holds.
        Builtin::LeibnizRight | Builtin::LeibnizLeft | Builtin::SymLeibniz => {
            StructureAlgebra::from_integer_table(&["a", "b"], &[("a", "a", &[("b", 1)])])
        }
        // aa = b, ba = c; right multiplication is nonzero but x*(y*z) = 0.
        Builtin::Nil2a => StructureAlgebra::from_integer_table(
            &["a", "b", "c"],
            &[("a", "a", &[("b", 1)]), ("b", "a", &[("c", 1)])],
        ),
        Builtin::Abelian => StructureAlgebra::zero_products(&["a", "b"]),
        // An idempotent: no law constrains it.
        Builtin::Alg => StructureAlgebra::from_integer_table(&["e"], &[("e", "e", &[("e", 1)])]),
    }
}

// ---------------------------------------------------------------------------
// Independent consequence-space oracle.
// ---------------------------------------------------------------------------

/// One graded piece of the oracle: the row space reached so far inside the
/// coordinate space on all words of one multidegree.
pub struct OracleSpace {
    words_desc: Vec<Word>,
    index: HashMap<Word, usize>,
    reducer: RowReducer,
}

impl OracleSpace {
    fn new(d: &Multidegree) -> OracleSpace {
        let ascending = enumerate_words(d);
        let mut words_desc: Vec<Word> = ascending.iter().cloned().collect();
        words_desc.reverse();
        let index = words_desc
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let reducer = RowReducer::new(words_desc.len());
        OracleSpace {
            words_desc,
            index,
            reducer,
        }
    }

    fn vector(&self, p: &Polynomial) -> Vec<Scalar> {
        let mut row = vec![Scalar::default(); self.words_desc.len()];
        for (w, c) in p.terms() {
            let i = *self
                .index
                .get(w)
                .unwrap_or_else(|| panic!("word {w} outside the component"));
            row[i] = c.clone();
        }
        row
    }

    pub fn dimension(&self) -> usize {
        self.reducer.rank()
    }

    pub fn is_full(&self) -> bool {
        self.reducer.rank() == self.words_desc.len()
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reducer.contains(&self.vector(p))
    }

    fn insert(&mut self, p: &Polynomial) -> bool {
        let row = self.vector(p);
        self.reducer.insert(row)
    }
}

/// All consequence spaces of `variety` over the fixed pool {x, y, z} at total
/// degree ≤ `max_total`, computed as a naive fixed-point closure that shares
/// no code with the engine's instance enumeration.
///
/// Seeds are the presentation's identities themselves. The closure operations
/// are (a) substituting a single pool monomial for one variable, (b) splitting
/// one variable `v` as `v + u` for another pool variable `u` and keeping every
/// homogeneous component, and (c) multiplying by a pool monomial on either
/// side. Each operation sends consequences to consequences, and iterating
/// them from the identities reaches every degreewise consequence at bounded
/// degree, so the fixed point is the full graded family of consequence
/// spaces.
pub fn naive_closure(
    variety: &VarietyPresentation,
    max_total: u32,
) -> BTreeMap<Multidegree, OracleSpace> {
    let pool = [v("x"), v("y"), v("z")];
    let degrees = pool_multidegrees(&pool, max_total);
    let mut spaces: BTreeMap<Multidegree, OracleSpace> = degrees
        .iter()
        .map(|d| (d.clone(), OracleSpace::new(d)))
        .collect();
    let monomials: Vec<Word> = degrees
        .iter()
        .flat_map(|d| enumerate_words(d).iter().cloned().collect::<Vec<_>>())
        .collect();

    let mut queue: VecDeque<Polynomial> = VecDeque::new();
    let push = |p: Polynomial, spaces: &mut BTreeMap<Multidegree, OracleSpace>,
                queue: &mut VecDeque<Polynomial>| {
        if p.is_zero() {
            return;
        }
        let d = p.multidegree().expect("closure polynomials are homogeneous");
        let space = spaces.get_mut(&d).expect("degree inside the universe");
        if space.insert(&p) {
            queue.push_back(p);
        }
    };

    for id in variety.identities() {
        let p = id.poly().clone();
        assert!(
            p.support().iter().all(|u| pool.contains(u)),
            "oracle seeds must use pool variables"
        );
        assert!(p.multidegree().is_some(), "builtin identities are homogeneous");
        push(p, &mut spaces, &mut queue);
    }

    while let Some(p) = queue.pop_front() {
        let d = p.multidegree().expect("rows are homogeneous");

        // (a) one variable ↦ one monomial.
        for var in pool.iter().filter(|u| d.get(u) >= 1) {
            let k = d.get(var);
            for m in &monomials {
                let new_total = d.total() - k + k * m.total_degree();
                if new_total > max_total {
                    continue;
                }
                let target = substituted_degree(&d, var, &m.multidegree());
                if spaces[&target].is_full() {
                    continue;
                }
                let mut map = BTreeMap::new();
                map.insert(var.clone(), Polynomial::monomial(m.clone()));
                push(p.substitute_partial(&map), &mut spaces, &mut queue);
            }
        }

        // (b) split one repeated variable and take homogeneous components.
        for var in pool.iter().filter(|u| d.get(u) >= 2) {
            for other in pool.iter().filter(|u| u != &var) {
                let mut map = BTreeMap::new();
                map.insert(
                    var.clone(),
                    Polynomial::monomial(Word::leaf(var.clone()))
                        .add(&Polynomial::monomial(Word::leaf((*other).clone()))),
                );
                let split = p.substitute_partial(&map);
                for (_, component) in split.homogeneous_components() {
                    push(component, &mut spaces, &mut queue);
                }
            }
        }

        // (c) multiply by a monomial on either side.
        for m in &monomials {
            if d.total() + m.total_degree() > max_total {
                continue;
            }
            let target_left = d.add(&m.multidegree());
            if spaces[&target_left].is_full() {
                continue;
            }
            let pm = Polynomial::monomial(m.clone());
            push(pm.mul(&p), &mut spaces, &mut queue);
            push(p.mul(&pm), &mut spaces, &mut queue);
        }
    }

    spaces
}

fn substituted_degree(d: &Multidegree, var: &VarId, m: &Multidegree) -> Multidegree {
    let k = d.get(var);
    let mut out = Multidegree::new();
    for (u, c) in d.iter() {
        if u != var {
            out.bump(u.clone(), c);
        }
    }
    for (u, c) in m.iter() {
        out.bump(u.clone(), c * k);
    }
    out
}

/// Every multidegree over `pool` with `1 ≤ total ≤ max_total`.
pub fn pool_multidegrees(pool: &[VarId], max_total: u32) -> Vec<Multidegree> {
    fn rec(
        pool: &[VarId],
        i: usize,
        budget: u32,
        current: &mut Vec<(VarId, u32)>,
        out: &mut Vec<Multidegree>,
    ) {
        if i == pool.len() {
            let d = Multidegree::from_counts(current.iter().cloned());
            if !d.is_empty() {
                out.push(d);
            }
            return;
        }
        for k in 0..=budget {
            current.push((pool[i].clone(), k));
            rec(pool, i + 1, budget - k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(pool, 0, max_total, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}
