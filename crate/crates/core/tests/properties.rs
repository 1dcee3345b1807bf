use std::sync::Arc;

use cobweb::formulas::{self, NamedFunction};
use cobweb::oracle::{counts_to, moebius_row, ChainKind};
use cobweb::{CobwebSequence, DenseMatrix, FinitePoset, IncidenceFunction, Scalar, Vertex, VertexFunction};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

fn poset(seq: CobwebSequence, n: usize) -> Arc<FinitePoset> {
    Arc::new(FinitePoset::build(seq, n).unwrap())
}

fn small_posets() -> Vec<Arc<FinitePoset>> {
    let mut out = Vec::new();
    for seq in CobwebSequence::builtins() {
        for n in 0..=6 {
            out.push(poset(seq.clone(), n));
        }
    }
    out
}

#[test]
fn golden_zeta_matrix_matches_shipped_file() {
    let golden = DenseMatrix::from_csv(include_str!("../golden/fibonacci_p6_zeta.csv")).unwrap();
    let p = poset(CobwebSequence::fibonacci(), 6);
    assert_eq!(golden.nu, 21);
    assert_eq!(IncidenceFunction::zeta(&p).to_matrix(), golden);
    assert_eq!(NamedFunction::Zeta.tabulate(&p).unwrap().to_matrix(), golden);
}

#[test]
fn pointwise_equals_matrix_for_every_named_function() {
    for p in small_posets() {
        for f in NamedFunction::ALL {
            assert_eq!(f.tabulate(&p).unwrap(), f.matrix(&p).unwrap(), "{f} on {}", p.label());
        }
    }
}

#[test]
fn closed_form_mu_satisfies_the_recurrence() {
    for p in small_posets() {
        let seq = p.sequence();
        for x in p.vertices() {
            let row = moebius_row(&p, x).unwrap();
            for (j, y) in p.vertices().enumerate() {
                assert_eq!(formulas::mu_at(seq, x, y).unwrap(), row[j], "{x} {y} on {}", p.label());
            }
        }
    }
}

#[test]
fn chain_count_consistency() {
    for p in small_posets() {
        let seq = p.sequence();
        let n = p.depth();
        for y in p.vertices() {
            let all = counts_to(&p, y, ChainKind::AllChains).unwrap();
            let maximal = counts_to(&p, y, ChainKind::MaximalChains).unwrap();
            for (i, x) in p.vertices().enumerate() {
                let summed = (0..=n).fold(BigUint::default(), |acc, k| acc + formulas::eta_pow_at(seq, k, x, y).unwrap());
                let closed = formulas::count_all_chains(&p, x, y).unwrap();
                assert_eq!(summed, closed);
                assert_eq!(closed, all[i], "{x} {y} on {}", p.label());
                let max_closed = formulas::count_maximal_chains(&p, x, y).unwrap();
                assert_eq!(max_closed, maximal[i], "{x} {y} on {}", p.label());
            }
        }
    }
}

#[test]
fn root_to_top_maximal_chains_is_product() {
    for p in small_posets() {
        let n = p.depth();
        if n == 0 {
            continue;
        }
        let expected = (1..n).fold(BigUint::from(1u8), |acc, i| acc * p.sequence().eval(i).unwrap());
        for top in p.level(n) {
            assert_eq!(formulas::count_maximal_chains(&p, Vertex::ROOT, top).unwrap(), expected);
        }
    }
}

#[test]
fn eta_squared_is_interval_interior() {
    for p in small_posets() {
        let seq = p.sequence();
        for x in p.vertices() {
            for y in p.vertices() {
                let card = BigInt::from(formulas::card_interval(seq, x, y).unwrap());
                let expected = (card - BigInt::from(2)).max(BigInt::from(0));
                assert_eq!(BigInt::from(formulas::eta_pow_at(seq, 2, x, y).unwrap()), expected);
            }
        }
    }
}

#[test]
fn enumeration_module_is_closed_form_free() {
    let source = include_str!("../src/oracle/enumerate.rs");
    assert!(!source.contains("formulas"), "enumeration must not reach the closed forms");
    assert!(!source.contains("incidence"), "enumeration must not reach the matrix algebra");
}

#[test]
fn verify_suite_passes_on_builtins() {
    for seq in CobwebSequence::builtins() {
        let p = poset(seq, 5);
        let report = cobweb::verify_suite(&p, &Default::default());
        assert!(report.all_passed(), "{}", report.to_pretty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mobius_inversion_recovers_random_functions(
        terms in prop::collection::vec(1u64..5, 1..6),
        values in prop::collection::vec(-50i64..50, 1..64),
    ) {
        let mut listed = vec![1u64];
        listed.extend(&terms);
        let seq = CobwebSequence::list(listed).unwrap();
        let p = FinitePoset::build(seq, terms.len()).unwrap();
        let f: VertexFunction = p
            .vertices()
            .enumerate()
            .map(|(i, v)| (v, Scalar::from_integer(BigInt::from(values[i % values.len()]))))
            .collect();
        let g = formulas::down_sum(&p, &f).unwrap();
        prop_assert_eq!(formulas::mobius_inversion(&p, &g).unwrap(), f);
    }

    #[test]
    fn csv_dump_round_trips(seed in 0usize..6, n in 0usize..5) {
        let seqs = CobwebSequence::builtins();
        let p = poset(seqs[seed % seqs.len()].clone(), n);
        let f = NamedFunction::ALL[seed % NamedFunction::ALL.len()].matrix(&p).unwrap();
        let back = DenseMatrix::from_csv(&f.to_matrix().to_csv()).unwrap();
        prop_assert_eq!(IncidenceFunction::from_matrix(&p, &back).unwrap(), f);
    }

    #[test]
    fn eta_pow_matches_oracle_on_lists(terms in prop::collection::vec(1u64..4, 1..5), k in 0usize..6) {
        let mut listed = vec![0u64];
        listed.extend(&terms);
        let p = FinitePoset::build(CobwebSequence::list(listed).unwrap(), terms.len()).unwrap();
        for y in p.vertices() {
            let layers = cobweb::oracle::chain_counts_by_length(&p, y, k, false).unwrap();
            for (i, x) in p.vertices().enumerate() {
                prop_assert_eq!(formulas::eta_pow_at(p.sequence(), k, x, y).unwrap(), layers[k][i].clone());
            }
        }
    }
}
