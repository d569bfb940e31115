mod common;

use common::{any_ordinal, o, smaller_candidates};
use proptest::prelude::*;
use ranksum::lemma::{
    self, build_gap_family, build_switched_gap_family, random_family, BoundKind, RandomSizes,
};
use ranksum::poset::Element;
use ranksum::rankedsum::{Components, RankedFamily, SumElement};
use ranksum::{DepthCap, FinitePoset, Ordinal, Poset};

fn small_sizes() -> RandomSizes {
    RandomSizes {
        max_index_size: 4,
        max_component_size: 4,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn add_is_associative(a in any_ordinal(), b in any_ordinal(), c in any_ordinal()) {
        let left = a.checked_add(&b).unwrap().checked_add(&c).unwrap();
        let right = a.checked_add(&b.checked_add(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn add_is_monotone(a in any_ordinal(), b in any_ordinal(), c in any_ordinal()) {
        let (ab, ac) = (a.checked_add(&b).unwrap(), a.checked_add(&c).unwrap());
        if b < c {
            prop_assert!(ab < ac);
        }
        if a <= b {
            prop_assert!(a.checked_add(&c).unwrap() <= b.checked_add(&c).unwrap());
        }
        if ab == ac {
            prop_assert_eq!(b, c);
        }
    }

    #[test]
    fn outputs_are_canonical(a in any_ordinal(), b in any_ordinal()) {
        for x in [
            a.checked_add(&b).unwrap(),
            a.checked_natural_sum(&b).unwrap(),
            a.checked_succ().unwrap(),
            a.least_add_fixpoint().unwrap(),
        ] {
            prop_assert!(x.validate().is_ok());
        }
        if let Some(d) = a.left_subtract(&b) {
            prop_assert!(d.validate().is_ok());
            prop_assert_eq!(b.checked_add(&d).unwrap(), a.clone());
        } else {
            prop_assert!(a < b);
        }
    }

    #[test]
    fn natural_sum_laws(a in any_ordinal(), b in any_ordinal(), c in any_ordinal()) {
        let ab = a.checked_natural_sum(&b).unwrap();
        prop_assert_eq!(&ab, &b.checked_natural_sum(&a).unwrap());
        prop_assert_eq!(
            ab.checked_natural_sum(&c).unwrap(),
            a.checked_natural_sum(&b.checked_natural_sum(&c).unwrap()).unwrap()
        );
        prop_assert!(a.checked_add(&b).unwrap() <= ab);
        prop_assert!(b.checked_add(&a).unwrap() <= ab);
    }

    #[test]
    fn naturals_agree_with_integers(x in 0u64..1_000_000, y in 0u64..1_000_000) {
        let (a, b) = (Ordinal::from_nat(x), Ordinal::from_nat(y));
        prop_assert_eq!(a.checked_add(&b).unwrap(), Ordinal::from_nat(x + y));
        prop_assert_eq!(a.checked_natural_sum(&b).unwrap(), Ordinal::from_nat(x + y));
        prop_assert_eq!(a.cmp(&b), x.cmp(&y));
    }

    #[test]
    fn least_fixpoint_is_least(a in any_ordinal()) {
        let beta = a.least_add_fixpoint().unwrap();
        prop_assert_eq!(a.checked_add(&beta).unwrap(), beta.clone());
        for smaller in smaller_candidates(&beta) {
            prop_assert_ne!(a.checked_add(&smaller).unwrap(), smaller);
        }
    }

    #[test]
    fn print_parse_round_trip(a in any_ordinal()) {
        let text = a.to_string();
        prop_assert_eq!(Ordinal::parse(&text).unwrap(), a);
    }

    #[test]
    fn gap_families_have_gap_alpha(alpha in any_ordinal()) {
        let (fam, a) = build_gap_family(&alpha, DepthCap::default()).unwrap();
        let report = lemma::check(&fam, &a, BoundKind::Original).unwrap();
        prop_assert_eq!(report.gap.as_ref(), Some(&alpha));
        prop_assert_eq!(report.bound.checked_add(&alpha).unwrap(), report.rank.clone());
        for smaller in smaller_candidates(&alpha) {
            prop_assert_ne!(report.bound.checked_add(&smaller).unwrap(), report.rank.clone());
        }

        let (fam, a) = build_switched_gap_family(&alpha, DepthCap::default()).unwrap();
        let report = lemma::check(&fam, &a, BoundKind::Switched).unwrap();
        prop_assert_eq!(report.gap.as_ref(), Some(&alpha));
    }

    #[test]
    fn random_finite_posets_rank_strictly_increases(seed in any::<u64>()) {
        let fam = random_family(seed, small_sizes());
        let mut posets = vec![fam.index().clone()];
        if let Components::PerIndex(list) = fam.components() {
            posets.extend(list.iter().cloned());
        }
        for p in posets {
            let elements = p.elements().unwrap();
            let size = elements.len() as u64;
            for x in &elements {
                let rx = p.rank_of(x).unwrap();
                prop_assert!(rx < Ordinal::from_nat(size));
                for y in &elements {
                    if p.lt(x, y).unwrap() {
                        prop_assert!(rx < p.rank_of(y).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn ranked_order_is_strict_partial_order(seed in any::<u64>()) {
        let fam = random_family(seed, small_sizes());
        let elements = fam.elements().unwrap();
        let sum = fam.materialize().unwrap();
        for x in &elements {
            prop_assert!(!fam.less_than(x, x).unwrap());
            for y in &elements {
                let xy = fam.less_than(x, y).unwrap();
                if xy {
                    // f-monotonicity and rank monotonicity
                    prop_assert!(x.index == y.index || fam.index().lt(&x.index, &y.index).unwrap());
                    prop_assert!(sum.rank(x).unwrap() < sum.rank(y).unwrap());
                    prop_assert!(!fam.less_than(y, x).unwrap());
                }
                prop_assert_eq!(xy, sum.lt(x, y).unwrap());
                for z in &elements {
                    if xy && fam.less_than(y, z).unwrap() {
                        prop_assert!(fam.less_than(x, z).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn original_bound_and_natural_sum_on_random_families(seed in any::<u64>()) {
        let fam = random_family(seed, small_sizes());
        for e in fam.elements().unwrap() {
            let report = lemma::check(&fam, &e, BoundKind::Original).unwrap();
            prop_assert!(report.holds);
            prop_assert!(report.rank <= lemma::natural_sum_bound(&fam, &e).unwrap());
        }
    }

    #[test]
    fn antichain_index_degenerates(seed in any::<u64>()) {
        let mut fam = random_family(seed, small_sizes());
        let comps = match fam.components() {
            Components::PerIndex(list) => list.clone(),
            Components::Uniform(_) => unreachable!(),
        };
        let n = comps.len();
        fam = RankedFamily::new(Poset::Finite(FinitePoset::antichain(n)), Components::PerIndex(comps)).unwrap();
        for e in fam.elements().unwrap() {
            prop_assert_eq!(fam.brute_force_rank(&e).unwrap(), fam.g(&e).unwrap());
        }
    }

    /// Chain families with a random finite index poset: the closed form must
    /// match brute force on every element.
    #[test]
    fn symbolic_matches_brute_force_on_finite_index(seed in any::<u64>(), len in 1u64..6) {
        let index = random_family(seed, small_sizes()).index().clone();
        let fam = RankedFamily::uniform(index, Poset::chain(Ordinal::from_nat(len)));
        for e in fam.elements().unwrap() {
            prop_assert_eq!(fam.symbolic_rank(&e).unwrap(), fam.brute_force_rank(&e).unwrap());
        }
    }
}

/// Finite index poset, transfinite component chains: closed form vs the
/// recurrence evaluated by hand. With T = {x < y} and components ω+1,
/// R(x, o) = o and R(y, ω) = max(sup R(y, k)+1, R(x, ω)+1) = ω+1.
#[test]
fn symbolic_with_explicit_index() {
    let index = Poset::Finite(FinitePoset::from_covers(&["x", "y"], &[("x", "y")]).unwrap());
    let fam = RankedFamily::uniform(index, Poset::chain(o("w+1")));
    let y = fam.index().resolve("y", DepthCap::default()).unwrap();
    let x = fam.index().resolve("x", DepthCap::default()).unwrap();
    let w = Ordinal::omega();
    assert_eq!(
        fam.symbolic_rank(&SumElement::new(x, w.clone())).unwrap(),
        w
    );
    assert_eq!(
        fam.symbolic_rank(&SumElement::new(y.clone(), w)).unwrap(),
        o("w+1")
    );
    assert_eq!(
        fam.symbolic_rank(&SumElement::new(y, Ordinal::from_nat(3)))
            .unwrap(),
        o("4")
    );
}

/// R(t, o) for T = ω+1 and components ω+1, spot-checked at (n, k), (ω, k),
/// (n, ω) and (ω, ω) against the recurrence: the finite rows give n+k, the
/// limit row and column are sups of those, and the corner is the max of
/// R(ω, k)+1 = ω+k+1 and R(n, ω)+1 = ω+n+1 over all n, k, i.e. ω·2.
#[test]
fn recurrence_spot_checks() {
    let fam = RankedFamily::uniform(Poset::chain(o("w+1")), Poset::chain(o("w+1")));
    let w = Ordinal::omega();
    let r = |t: Ordinal, a: Ordinal| fam.symbolic_rank(&SumElement::ordinals(t, a)).unwrap();
    for n in 0..10 {
        for k in 0..10 {
            assert_eq!(
                r(Ordinal::from_nat(n), Ordinal::from_nat(k)),
                Ordinal::from_nat(n + k)
            );
        }
        assert_eq!(
            r(w.clone(), Ordinal::from_nat(n)),
            w.checked_add(&Ordinal::from_nat(n)).unwrap()
        );
        assert_eq!(
            r(Ordinal::from_nat(n), w.clone()),
            w.checked_add(&Ordinal::from_nat(n)).unwrap()
        );
    }
    assert_eq!(r(w.clone(), w), o("w*2"));
}

#[test]
fn transfinite_index_with_finite_components_is_not_evaluable() {
    let fam = RankedFamily::uniform(
        Poset::chain(o("w")),
        Poset::Finite(FinitePoset::antichain(2)),
    );
    let e = SumElement::new(Ordinal::zero(), Element::Node(0));
    assert!(lemma::check(&fam, &e, BoundKind::Original).is_err());
}
