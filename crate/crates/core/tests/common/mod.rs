#![allow(dead_code)]

use proptest::prelude::*;
use ranksum::Ordinal;

/// Canonical ordinals of bounded depth with small coefficients.
pub fn ordinal(depth: u32) -> BoxedStrategy<Ordinal> {
    if depth == 0 {
        return Just(Ordinal::zero()).boxed();
    }
    let exponent = ordinal(depth - 1);
    prop::collection::vec((exponent, 1u64..=6), 0..4)
        .prop_map(|mut terms| {
            terms.sort_by(|a, b| b.0.cmp(&a.0));
            terms.dedup_by(|a, b| a.0 == b.0);
            Ordinal::from_terms(terms).expect("sorted and deduplicated")
        })
        .boxed()
}

/// Ordinals up to depth 3, the range the counter-example families live in.
pub fn any_ordinal() -> BoxedStrategy<Ordinal> {
    ordinal(3)
}

/// A handful of canonical ordinals strictly below `gamma`, built by dropping
/// trailing terms and decrementing coefficients.
pub fn smaller_candidates(gamma: &Ordinal) -> Vec<Ordinal> {
    let terms: Vec<(Ordinal, u64)> = gamma
        .terms()
        .iter()
        .map(|t| (t.exponent().clone(), t.coefficient()))
        .collect();
    let mut out = Vec::new();
    for keep in 0..terms.len() {
        let mut prefix = terms[..keep].to_vec();
        out.push(Ordinal::from_terms(prefix.clone()).unwrap());
        let (e, c) = terms[keep].clone();
        if c > 1 {
            prefix.push((e.clone(), c - 1));
            out.push(Ordinal::from_terms(prefix.clone()).unwrap());
            prefix.pop();
        }
        // prefix + (e, c-1) + a large tail below e
        if !e.is_zero() {
            let mut with_tail = prefix.clone();
            if c > 1 {
                with_tail.push((e.clone(), c - 1));
            }
            with_tail.push((Ordinal::zero(), 1_000));
            if let Ok(o) = Ordinal::from_terms(with_tail) {
                out.push(o);
            }
        }
    }
    out.retain(|x| x < gamma);
    out
}

pub fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}
