//! Acceptance gate: one test per criterion, each printing a single
//! `criterion N: PASS — …` line on success (visible with
//! `cargo test --test acceptance -- --nocapture`).

mod common;

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use varlab::coherence::{classify_alternating, solve_coherence, AlternatingClass};
use varlab::fdalg::gray_counterexample;
use varlab::flatkappa::{
    analyze_kappa, standard_pair, ComponentAnalysis, DegreeBound, FlatPair, KappaAnalysis,
};
use varlab::poly::{scalar_int, Polynomial, Scalar};
use varlab::tideal::Tables;
use varlab::variety::{builtin_variety, parse_identity, Builtin, VarietyPresentation, ALL_BUILTINS};
use varlab::words::{enumerate_words, Multidegree, Word};

use common::{gen_leaf, md, naive_closure, poly, word};

fn pass(n: u32, what: &str) {
    println!("criterion {n}: PASS — {what}");
}

// ---------------------------------------------------------------------------
// Shared κ fixture: one analysis per variety at total degree ≤ 3, |B|=|X|=|Y|=1.
// ---------------------------------------------------------------------------

struct KappaFixture {
    builtin: Builtin,
    pair: FlatPair,
    analysis: KappaAnalysis,
    elapsed: Duration,
}

static KAPPA: OnceLock<Vec<KappaFixture>> = OnceLock::new();

fn kappa_fixtures() -> &'static [KappaFixture] {
    KAPPA.get_or_init(|| {
        [
            Builtin::Lie,
            Builtin::LeibnizRight,
            Builtin::Nil2a,
            Builtin::Assoc,
            Builtin::AAAlg,
            Builtin::Alg,
        ]
        .into_iter()
        .map(|builtin| {
            let tables = Tables::in_memory();
            let variety = builtin_variety(builtin);
            let pair = standard_pair(&tables, &variety, 1, 1, 1, DegreeBound::by_total(3));
            let start = Instant::now();
            let analysis = analyze_kappa(&tables, &variety, &pair);
            KappaFixture {
                builtin,
                pair,
                analysis,
                elapsed: start.elapsed(),
            }
        })
        .collect()
    })
}

fn fixture(builtin: Builtin) -> &'static KappaFixture {
    kappa_fixtures()
        .iter()
        .find(|f| f.builtin == builtin)
        .expect("fixture present")
}

fn component_at<'a>(analysis: &'a KappaAnalysis, d: &Multidegree) -> &'a ComponentAnalysis {
    analysis
        .components
        .iter()
        .find(|c| c.degree() == d)
        .unwrap_or_else(|| panic!("no component at {d}"))
}

// ---------------------------------------------------------------------------
// Criteria.
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_coherence_solver() {
    let tables = Tables::in_memory();

    let start = Instant::now();
    let lie = solve_coherence(&tables, &builtin_variety(Builtin::Lie));
    let lie_time = start.elapsed();
    assert!(lie.solvable, "lie must admit a rewriting solution");
    let expected: Vec<Scalar> = [-1, -1, 0, 0, 0, 0, 0, 0]
        .into_iter()
        .map(scalar_int)
        .collect();
    assert!(
        lie.contains(&expected),
        "(-1, -1, 0, 0, 0, 0, 0, 0) must lie in the lie solution set"
    );

    let start = Instant::now();
    let alg = solve_coherence(&tables, &builtin_variety(Builtin::Alg));
    let alg_time = start.elapsed();
    assert!(!alg.solvable, "the variety of all algebras has no solution");
    assert!(alg.particular.is_none());

    assert!(lie_time < Duration::from_secs(1), "lie solve took {lie_time:?}");
    assert!(alg_time < Duration::from_secs(1), "alg solve took {alg_time:?}");
    pass(
        1,
        "coherence solver: lie solvable containing (-1,-1,0,...,0); alg unsolvable; <1s each",
    );
}

#[test]
fn criterion_2_classification() {
    let tables = Tables::in_memory();

    let lie = classify_alternating(&tables, &builtin_variety(Builtin::Lie)).unwrap();
    assert_eq!(lie.verdict, AlternatingClass::LieBranch);

    // Alternating together with associativity forces all triple products to
    // vanish, landing in the antiassociative branch.
    let alt_assoc = VarietyPresentation::new(
        "alt-assoc",
        vec![
            parse_identity("x*x").unwrap(),
            parse_identity("(x*y)*z - x*(y*z)").unwrap(),
        ],
    );
    let report = classify_alternating(&tables, &alt_assoc).unwrap();
    assert_eq!(report.verdict, AlternatingClass::AntiassociativeBranch);
    assert!(
        tables.is_law(&alt_assoc, &poly("x*(y*z)")).holds,
        "x*(y*z) must be a law of an alternating associative variety"
    );

    let aaaa = classify_alternating(&tables, &builtin_variety(Builtin::AAAAlg)).unwrap();
    assert_eq!(aaaa.verdict, AlternatingClass::AntiassociativeBranch);

    let alt = classify_alternating(&tables, &builtin_variety(Builtin::Alt)).unwrap();
    assert_eq!(alt.verdict, AlternatingClass::Neither);
    assert!(!alt.coherent, "alt must come out not algebraically coherent");

    pass(
        2,
        "classification: lie → LieBranch; alternating∧associative and the \
         antiassociative-alternating builtin → AntiassociativeBranch; alt → Neither, incoherent",
    );
}

#[test]
fn criterion_3_kappa_analysis() {
    let d111 = md([("b", 1), ("x", 1), ("y", 1)]);

    let lie = fixture(Builtin::Lie);
    assert!(lie.analysis.iso, "lie κ must be bijective at every component");
    assert!(lie.analysis.indeterminate.is_empty());
    for c in &lie.analysis.components {
        assert!(c.injective() && c.surjective(), "lie κ fails at {}", c.degree());
    }

    let lr = fixture(Builtin::LeibnizRight);
    let c = component_at(&lr.analysis, &d111);
    let witness = Polynomial::monomial(Word::node(
        gen_leaf(&lr.pair, "x"),
        gen_leaf(&lr.pair, "y*b2"),
    ))
    .add(&Polynomial::monomial(Word::node(
        gen_leaf(&lr.pair, "x"),
        gen_leaf(&lr.pair, "b2*y"),
    )));
    assert!(c.kernel_contains(&witness), "right Leibniz kernel witness");
    assert!(!c.injective());

    let nil = fixture(Builtin::Nil2a);
    let c = component_at(&nil.analysis, &d111);
    let witness = Polynomial::monomial(Word::node(
        gen_leaf(&nil.pair, "x"),
        gen_leaf(&nil.pair, "y*b2"),
    ));
    assert!(c.kernel_contains(&witness), "nil2a kernel witness");

    let assoc = fixture(Builtin::Assoc);
    let c = component_at(&assoc.analysis, &d111);
    let witness = Polynomial::monomial(Word::node(
        gen_leaf(&assoc.pair, "x*b1"),
        gen_leaf(&assoc.pair, "y"),
    ))
    .sub(&Polynomial::monomial(Word::node(
        gen_leaf(&assoc.pair, "x"),
        gen_leaf(&assoc.pair, "b2*y"),
    )));
    assert!(c.kernel_contains(&witness), "assoc kernel witness");

    let aa = fixture(Builtin::AAAlg);
    let c = component_at(&aa.analysis, &d111);
    let witness = Polynomial::monomial(Word::node(
        gen_leaf(&aa.pair, "x"),
        gen_leaf(&aa.pair, "b2*y"),
    ))
    .add(&Polynomial::monomial(Word::node(
        gen_leaf(&aa.pair, "x*b1"),
        gen_leaf(&aa.pair, "y"),
    )));
    assert!(c.kernel_contains(&witness), "antiassociative kernel witness");

    let alg = fixture(Builtin::Alg);
    let c = component_at(&alg.analysis, &d111);
    assert!(!c.surjective(), "alg κ must miss codomain classes at (1,1,1)");
    assert!(
        c.missing().contains(&word("b*(x*y)")),
        "b*(x*y) must be missing from the alg image"
    );

    for f in kappa_fixtures() {
        assert!(
            f.elapsed < Duration::from_secs(10),
            "κ analysis for {:?} took {:?}",
            f.builtin,
            f.elapsed
        );
    }
    pass(
        3,
        "κ at total ≤ 3: lie bijective everywhere; kernel witnesses for right Leibniz, \
         nil2a, assoc, antiassociative; alg misses b*(x*y); <10s per variety",
    );
}

#[test]
fn criterion_4_law_suite() {
    let tables = Tables::in_memory();
    assert!(
        tables
            .is_law(&builtin_variety(Builtin::Alt), &poly("x*y + y*x"))
            .holds
    );
    assert!(
        tables
            .is_law(&builtin_variety(Builtin::LeibnizRight), &poly("x*(y*z) + x*(z*y)"))
            .holds
    );
    assert!(
        tables
            .is_law(&builtin_variety(Builtin::SymLeibniz), &poly("(y*z)*x + x*(y*z)"))
            .holds
    );
    assert!(
        !tables
            .is_law(
                &builtin_variety(Builtin::Alt),
                &poly("x*(y*z) + z*(x*y) + y*(z*x)")
            )
            .holds,
        "the Jacobi identity is not a law of plain alternating algebras"
    );
    pass(
        4,
        "law suite: alt ⊨ xy+yx; right Leibniz ⊨ x(yz)+x(zy); symmetric Leibniz ⊨ (yz)x+x(yz); \
         alt ⊭ Jacobi",
    );
}

#[test]
fn criterion_5_counting_checks() {
    let d = md([("x", 1), ("y", 1), ("z", 1)]);
    assert_eq!(enumerate_words(&d).len(), 12);

    let tables = Tables::in_memory();
    let dims: Vec<usize> = [Builtin::Alt, Builtin::Lie, Builtin::Abelian]
        .into_iter()
        .map(|b| {
            tables
                .consequence_space(&builtin_variety(b), &d)
                .quotient_dimension()
        })
        .collect();
    assert_eq!(dims, vec![3, 2, 0]);

    // Cross-check the multilinear quotient against the classical (n-1)!
    // count for the Lie variety at small n.
    let d2 = md([("x", 1), ("y", 1)]);
    assert_eq!(
        tables
            .consequence_space(&builtin_variety(Builtin::Lie), &d2)
            .quotient_dimension(),
        1
    );
    pass(
        5,
        "counting: 12 multilinear ternary words; quotient dims at (1,1,1): alt 3, lie 2, abelian 0",
    );
}

#[test]
fn criterion_6_oracle_equivalence() {
    let tables = Tables::in_memory();
    for builtin in ALL_BUILTINS {
        let variety = builtin_variety(builtin);
        let oracle = naive_closure(&variety, 4);
        for (degree, space) in &oracle {
            let engine = tables.consequence_space(&variety, degree);
            assert_eq!(
                engine.dimension(),
                space.dimension(),
                "{:?} at {degree}: engine dim {} vs closure dim {}",
                builtin,
                engine.dimension(),
                space.dimension()
            );
            for row in engine.row_polynomials() {
                assert!(
                    space.contains(&row),
                    "{builtin:?} at {degree}: engine row {row} outside the naive closure"
                );
            }
        }
    }
    pass(
        6,
        "oracle equivalence: instance-enumeration spaces equal the naive fixed-point closure \
         for all builtins at total ≤ 4 over three variables",
    );
}

#[test]
fn criterion_7_membership_obstruction() {
    let report = gray_counterexample(false);
    assert!(report.ambient_laws_hold);
    assert!(report.target_laws_hold);
    assert!(report.g_is_homomorphism);
    assert_eq!(report.obstruction, "q", "the obstruction must be the basis class q");
    assert_eq!(report.required, "0");
    assert!(report.obstruction_nonzero);
    assert!(report.counterexample);

    let control = gray_counterexample(true);
    assert!(!control.obstruction_nonzero, "mutated fixture must report no obstruction");
    assert!(!control.counterexample);

    pass(
        7,
        "membership obstruction: default fixture yields q ≠ 0 against a required value of 0; \
         the mutated control reports none",
    );
}

#[test]
fn criterion_8_well_definedness_and_certificates() {
    for f in kappa_fixtures() {
        for c in &f.analysis.components {
            assert!(c.well_defined(), "{:?} κ ill-defined at {}", f.builtin, c.degree());
            for relation in c.component().relation_polynomials() {
                assert!(
                    c.image_poly(relation).is_zero(),
                    "{:?} at {}: relation {relation} has nonzero image",
                    f.builtin,
                    c.degree()
                );
            }
            for witness in c.kernel_witnesses() {
                assert!(
                    !c.domain_class_is_zero(witness),
                    "{:?} at {}: kernel witness {witness} is zero in the domain",
                    f.builtin,
                    c.degree()
                );
                assert!(
                    c.image_poly(witness).is_zero(),
                    "{:?} at {}: kernel witness {witness} has nonzero image",
                    f.builtin,
                    c.degree()
                );
            }
        }
    }
    pass(
        8,
        "well-definedness: every relation maps to zero and every kernel witness is nonzero \
         in the domain with zero image",
    );
}
