//! Every solver agrees with the brute-force oracle on seeded random graphs.

mod common;

use std::time::Instant;

use tempqa_core::funcset::evaluate;
use tempqa_core::oracle::{self, OracleError};
use tempqa_core::QuestionType;

const GRAPHS: u64 = 1_000;
const CALLS_PER_GRAPH: usize = 3;

#[test]
fn all_functions_match_oracle_on_random_graphs() {
    let started = Instant::now();
    let mut ok_results = [0usize; 17];
    for (qi, q) in QuestionType::ALL.into_iter().enumerate() {
        for seed in 0..GRAPHS {
            let mut r = common::rng(seed * 31 + qi as u64);
            let g = common::random_tkg(&mut r, 60);
            for _ in 0..CALLS_PER_GRAPH {
                let call = common::random_call(&mut r, &g, q);
                let got = evaluate(&g, &call);
                let want = oracle::evaluate(&g, &call);
                match (&got, &want) {
                    (Ok(a), Ok(b)) => {
                        assert_eq!(a, b, "{q} seed {seed}: {}", call.to_call());
                        ok_results[qi] += 1;
                    }
                    (Err(e), Err(OracleError::Func(f))) => {
                        assert_eq!(e, f, "{q} seed {seed}: {}", call.to_call())
                    }
                    _ => panic!("{q} seed {seed}: solver {got:?} vs oracle {want:?} for {}", call.to_call()),
                }
            }
        }
    }
    // The generator must exercise the success path of every function, not
    // just the error paths.
    for (qi, n) in ok_results.iter().enumerate() {
        assert!(*n > 500, "{} only produced {n} successful calls", QuestionType::ALL[qi]);
    }
    assert!(started.elapsed().as_secs() < 60, "took {:?}", started.elapsed());
}
