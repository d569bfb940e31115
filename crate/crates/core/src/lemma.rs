//! Additive rank bounds for ranked sums and their counter-examples.
//!
//! For an element `a` of a ranked sum the original bound is
//! `rank_T(f(a)) + g(a)` and the switched bound is `g(a) + rank_T(f(a))`,
//! both with ordinary (non-commutative) ordinal addition. On finite
//! families the two coincide and the original bound always holds; on
//! transfinite families either can fail by an arbitrary ordinal gap.

use serde::Serialize;

use crate::ordinal::{DepthCap, Ordinal};
use crate::poset::{FinitePoset, Poset};
use crate::rankedsum::{
    Address, Components, FamilyError, FamilySpec, MaterializedSum, RankedFamily, SumElement,
};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Original,
    Switched,
}

impl std::str::FromStr for BoundKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "original" => Ok(BoundKind::Original),
            "switched" => Ok(BoundKind::Switched),
            other => Err(format!("unknown bound kind '{other}'")),
        }
    }
}

/// `rank_T(f(e)) + g(e)`.
pub fn lemma12_bound(family: &RankedFamily, e: &SumElement) -> Result<Ordinal, FamilyError> {
    Ok(family.index_rank(e)?.checked_add(&family.g(e)?)?)
}

/// `g(e) + rank_T(f(e))`.
pub fn switched_bound(family: &RankedFamily, e: &SumElement) -> Result<Ordinal, FamilyError> {
    Ok(family.g(e)?.checked_add(&family.index_rank(e)?)?)
}

pub fn bound(
    family: &RankedFamily,
    e: &SumElement,
    kind: BoundKind,
) -> Result<Ordinal, FamilyError> {
    match kind {
        BoundKind::Original => lemma12_bound(family, e),
        BoundKind::Switched => switched_bound(family, e),
    }
}

/// `rank_T(f(e)) ⊕ g(e)`, reported alongside the bounds.
pub fn natural_sum_bound(family: &RankedFamily, e: &SumElement) -> Result<Ordinal, FamilyError> {
    Ok(family.index_rank(e)?.checked_natural_sum(&family.g(e)?)?)
}

/// The outcome of comparing a rank against one of the bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub element: Address,
    pub rank: Ordinal,
    pub bound: Ordinal,
    pub bound_kind: BoundKind,
    /// `rank <= bound`.
    pub holds: bool,
    /// Least `γ` with `bound + γ = rank`; absent when `rank < bound`.
    pub gap: Option<Ordinal>,
}

impl GapReport {
    pub fn new(element: Address, rank: Ordinal, bound: Ordinal, bound_kind: BoundKind) -> Self {
        let holds = rank <= bound;
        let gap = rank.left_subtract(&bound);
        GapReport {
            element,
            rank,
            bound,
            bound_kind,
            holds,
            gap,
        }
    }
}

/// Compares the rank of `e` against the chosen bound, using brute force on
/// finite families and the closed form on symbolic ones.
pub fn check(
    family: &RankedFamily,
    e: &SumElement,
    kind: BoundKind,
) -> Result<GapReport, FamilyError> {
    let (rank, _) = family.rank(e)?;
    let bound = bound(family, e, kind)?;
    Ok(GapReport::new(family.address(e), rank, bound, kind))
}

/// Index chain `α+1`, components `β+1` with `β` the least additive fixpoint
/// of `α`, and the element `(α, β)` pairing the two maxima. Its rank is
/// `β + α` while the original bound is `α + β = β`.
pub fn build_gap_family(
    alpha: &Ordinal,
    cap: DepthCap,
) -> Result<(RankedFamily, SumElement), FamilyError> {
    let beta = fixpoint_within_cap(alpha, cap)?;
    let family = RankedFamily::uniform(
        Poset::chain(alpha.checked_succ()?),
        Poset::chain(beta.checked_succ()?),
    );
    Ok((family, SumElement::ordinals(alpha.clone(), beta)))
}

/// The role-swapped family: index chain `β+1`, components `α+1`, element
/// `(β, α)`. Its rank is `β + α` while the switched bound is `α + β = β`.
pub fn build_switched_gap_family(
    alpha: &Ordinal,
    cap: DepthCap,
) -> Result<(RankedFamily, SumElement), FamilyError> {
    let beta = fixpoint_within_cap(alpha, cap)?;
    let family = RankedFamily::uniform(
        Poset::chain(beta.checked_succ()?),
        Poset::chain(alpha.checked_succ()?),
    );
    Ok((family, SumElement::ordinals(beta, alpha.clone())))
}

fn fixpoint_within_cap(alpha: &Ordinal, cap: DepthCap) -> Result<Ordinal, FamilyError> {
    alpha.validate()?;
    cap.check(alpha)?;
    let beta = alpha.least_add_fixpoint()?;
    cap.check(&beta)?;
    Ok(beta)
}

/// A family element whose rank exceeds the original bound, with enough
/// detail to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub family: FamilySpec,
    pub report: GapReport,
    pub index_rank: Ordinal,
    pub primitive_rank: Ordinal,
    /// A longest chain below the element, bottom-up, ending at the element.
    pub rank_chain: Vec<Address>,
}

/// Totals from checking the original bound over many finite families.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub families: u64,
    pub elements: u64,
    pub violations: u64,
    /// Elements whose rank exceeds `rank_T(f(a)) ⊕ g(a)`.
    pub natural_sum_exceptions: u64,
    pub first_violation: Option<Violation>,
}

impl CheckSummary {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

// Partial result tagged with the enumeration position of its first
// violation, so merging is associative and independent of scheduling.
#[derive(Default)]
struct Partial {
    families: u64,
    elements: u64,
    violations: u64,
    natural_sum_exceptions: u64,
    first: Option<(u64, Violation)>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.families += other.families;
        self.elements += other.elements;
        self.violations += other.violations;
        self.natural_sum_exceptions += other.natural_sum_exceptions;
        self.first = match (self.first, other.first) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }

    fn into_summary(self) -> CheckSummary {
        CheckSummary {
            families: self.families,
            elements: self.elements,
            violations: self.violations,
            natural_sum_exceptions: self.natural_sum_exceptions,
            first_violation: self.first.map(|(_, v)| v),
        }
    }
}

/// Checks the original bound on every element of one finite family.
fn check_finite_family(family: &RankedFamily, tag: u64) -> Result<Partial, FamilyError> {
    let sum: MaterializedSum = family.materialize()?;
    let mut partial = Partial {
        families: 1,
        ..Partial::default()
    };
    for e in sum.elements() {
        partial.elements += 1;
        let rank = sum.rank(e)?;
        let bound = lemma12_bound(family, e)?;
        if natural_sum_bound(family, e)? < rank {
            partial.natural_sum_exceptions += 1;
        }
        if rank > bound {
            partial.violations += 1;
            if partial.first.is_none() {
                let violation = Violation {
                    family: family.to_spec(),
                    report: GapReport::new(family.address(e), rank, bound, BoundKind::Original),
                    index_rank: family.index_rank(e)?,
                    primitive_rank: family.g(e)?,
                    rank_chain: sum
                        .rank_witness(e)?
                        .iter()
                        .map(|x| family.address(x))
                        .collect(),
                };
                partial.first = Some((tag, violation));
            }
        }
    }
    Ok(partial)
}

fn run_indexed<F>(count: u64, make: F) -> Result<CheckSummary, FamilyError>
where
    F: Fn(u64) -> Result<RankedFamily, FamilyError> + Sync,
{
    let one = |k: u64| make(k).and_then(|family| check_finite_family(&family, k));
    #[cfg(feature = "parallel")]
    let merged = (0..count)
        .into_par_iter()
        .map(one)
        .try_reduce(Partial::default, |a, b| Ok(a.merge(b)))?;
    #[cfg(not(feature = "parallel"))]
    let merged = (0..count).try_fold(Partial::default(), |acc, k| {
        Ok::<_, FamilyError>(acc.merge(one(k)?))
    })?;
    Ok(merged.into_summary())
}

/// Bounds for [`exhaustive_finite_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExhaustiveBounds {
    pub max_index_size: usize,
    pub max_component_size: usize,
    /// Upper limit on the number of components, that is on the index size.
    pub max_components: usize,
}

/// Largest poset size the labelled enumeration accepts.
pub const MAX_ENUMERATED_POSET: usize = 5;
/// Largest number of families an exhaustive run may visit.
pub const MAX_EXHAUSTIVE_FAMILIES: u64 = 50_000_000;

/// Every strict partial order on `{0, …, n-1}`, as labelled posets.
pub fn labelled_posets(n: usize) -> Vec<FinitePoset> {
    assert!(
        n <= MAX_ENUMERATED_POSET,
        "labelled enumeration limited to {MAX_ENUMERATED_POSET} elements"
    );
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut rel = vec![vec![false; n]; n];
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                rel[i][j] = true;
            }
        }
        let antisymmetric = (0..n).all(|i| (0..n).all(|j| !(rel[i][j] && rel[j][i])));
        let transitive =
            (0..n).all(|i| (0..n).all(|j| !rel[i][j] || (0..n).all(|k| !rel[j][k] || rel[i][k])));
        if antisymmetric && transitive {
            let chosen: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            out.push(FinitePoset::from_index_pairs(n, &chosen).expect("strict order"));
        }
    }
    out
}

/// Checks the original bound on every element of every family whose index
/// is a labelled poset of at most `max_index_size` elements (and at most
/// `max_components`) and whose components are labelled posets of
/// `1..=max_component_size` elements.
pub fn exhaustive_finite_check(bounds: ExhaustiveBounds) -> Result<CheckSummary, FamilyError> {
    let max_index = bounds.max_index_size.min(bounds.max_components);
    if max_index > MAX_ENUMERATED_POSET || bounds.max_component_size > MAX_ENUMERATED_POSET {
        return Err(FamilyError::TooLarge {
            size: max_index.max(bounds.max_component_size) as u64,
            cap: MAX_ENUMERATED_POSET as u64,
        });
    }
    let pool: Vec<Poset> = (1..=bounds.max_component_size)
        .flat_map(labelled_posets)
        .map(Poset::Finite)
        .collect();

    // One block per index poset; each block enumerates pool^n assignments.
    let mut blocks: Vec<(u64, FinitePoset)> = Vec::new();
    let mut total = 0u64;
    for n in 1..=max_index {
        let per_index = (pool.len() as u64)
            .checked_pow(n as u32)
            .unwrap_or(u64::MAX);
        for index in labelled_posets(n) {
            blocks.push((total, index));
            total = total.saturating_add(per_index);
        }
    }
    if pool.is_empty() {
        total = 0;
    }
    if total > MAX_EXHAUSTIVE_FAMILIES {
        return Err(FamilyError::TooLarge {
            size: total,
            cap: MAX_EXHAUSTIVE_FAMILIES,
        });
    }

    run_indexed(total, |k| {
        let block = blocks.partition_point(|(start, _)| *start <= k) - 1;
        let (start, index) = &blocks[block];
        let mut code = k - start;
        let components = (0..index.len())
            .map(|_| {
                let choice = (code % pool.len() as u64) as usize;
                code /= pool.len() as u64;
                pool[choice].clone()
            })
            .collect();
        RankedFamily::new(
            Poset::Finite(index.clone()),
            Components::PerIndex(components),
        )
    })
}

/// Size limits for [`random_family`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSizes {
    pub max_index_size: usize,
    pub max_component_size: usize,
}

fn random_poset(rng: &mut ChaCha8Rng, n: usize) -> Poset {
    if rng.gen_bool(0.2) {
        return Poset::chain(Ordinal::from_nat(n as u64));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let density: f64 = rng.gen();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    Poset::Finite(FinitePoset::from_index_pairs(n, &pairs).expect("edges follow a permutation"))
}

/// A random finite family, fully determined by `seed`.
pub fn random_family(seed: u64, sizes: RandomSizes) -> RankedFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=sizes.max_index_size.max(1));
    let index = random_poset(&mut rng, n);
    let components = (0..n)
        .map(|_| {
            let m = rng.gen_range(1..=sizes.max_component_size.max(1));
            random_poset(&mut rng, m)
        })
        .collect();
    RankedFamily::new(index, Components::PerIndex(components)).expect("one component per index")
}

/// Checks the original bound on `count` random families derived from `seed`.
pub fn fuzz(seed: u64, count: u64, sizes: RandomSizes) -> Result<CheckSummary, FamilyError> {
    run_indexed(count, |i| Ok(random_family(seed.wrapping_add(i), sizes)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Element;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn n(k: u64) -> Ordinal {
        Ordinal::from_nat(k)
    }

    #[test]
    fn bounds_on_two_point_family() {
        let (fam, a) = build_gap_family(&n(1), DepthCap::default()).unwrap();
        assert_eq!(lemma12_bound(&fam, &a).unwrap(), o("w"));
        assert_eq!(switched_bound(&fam, &a).unwrap(), o("w+1"));
        let bottom = SumElement::ordinals(n(0), n(0));
        assert_eq!(lemma12_bound(&fam, &bottom).unwrap(), n(0));
        assert_eq!(switched_bound(&fam, &bottom).unwrap(), n(0));
    }

    #[test]
    fn antichain_index_bound_is_primitive_rank() {
        let fam =
            RankedFamily::uniform(Poset::Finite(FinitePoset::antichain(3)), Poset::chain(n(5)));
        for k in 0..5 {
            let e = SumElement::new(Element::Node(2), n(k));
            assert_eq!(lemma12_bound(&fam, &e).unwrap(), n(k));
            assert_eq!(switched_bound(&fam, &e).unwrap(), n(k));
        }
    }

    #[test]
    fn report_fields() {
        let r = GapReport::new(
            Address::new("1", "w"),
            o("w+1"),
            o("w"),
            BoundKind::Original,
        );
        assert!(!r.holds);
        assert_eq!(r.gap, Some(n(1)));
        let tight = GapReport::new(Address::new("0", "w"), o("w"), o("w"), BoundKind::Original);
        assert!(tight.holds);
        assert_eq!(tight.gap, Some(n(0)));
        let slack = GapReport::new(Address::new("0", "1"), n(1), n(3), BoundKind::Switched);
        assert!(slack.holds);
        assert_eq!(slack.gap, None);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "element": {"t": "1", "a": "w"},
                "rank": "w+1",
                "bound": "w",
                "bound_kind": "original",
                "holds": false,
                "gap": "1"
            })
        );
    }

    #[test]
    fn check_two_point_counterexample() {
        let (fam, a) = build_gap_family(&n(1), DepthCap::default()).unwrap();
        let report = check(&fam, &a, BoundKind::Original).unwrap();
        assert_eq!(
            (report.rank, report.bound, report.holds, report.gap),
            (o("w+1"), o("w"), false, Some(n(1)))
        );
        let b = SumElement::ordinals(n(0), Ordinal::omega());
        let report = check(&fam, &b, BoundKind::Original).unwrap();
        assert_eq!(
            (report.rank, report.bound, report.holds, report.gap),
            (o("w"), o("w"), true, Some(n(0)))
        );
    }

    #[test]
    fn gap_family_degenerate_and_omega() {
        let (fam, a) = build_gap_family(&n(0), DepthCap::default()).unwrap();
        assert_eq!(fam.size(), Some(1));
        let report = check(&fam, &a, BoundKind::Original).unwrap();
        assert!(report.holds);
        assert_eq!(report.gap, Some(n(0)));

        let (_, a) = build_gap_family(&o("w"), DepthCap::default()).unwrap();
        assert_eq!(a, SumElement::ordinals(o("w"), o("w^2")));
        let (fam, a) = build_gap_family(&o("w"), DepthCap::default()).unwrap();
        let report = check(&fam, &a, BoundKind::Original).unwrap();
        assert_eq!(report.rank, o("w^2+w"));
        assert_eq!(report.bound, o("w^2"));
        assert_eq!(report.gap, Some(o("w")));
    }

    #[test]
    fn switched_family() {
        let (fam, a) = build_switched_gap_family(&n(1), DepthCap::default()).unwrap();
        assert_eq!(fam.index(), &Poset::chain(o("w+1")));
        assert_eq!(a, SumElement::ordinals(o("w"), n(1)));
        let report = check(&fam, &a, BoundKind::Switched).unwrap();
        assert_eq!(
            (report.rank, report.bound, report.gap),
            (o("w+1"), o("w"), Some(n(1)))
        );

        let (fam, a) = build_switched_gap_family(&n(0), DepthCap::default()).unwrap();
        assert_eq!(
            check(&fam, &a, BoundKind::Switched).unwrap().gap,
            Some(n(0))
        );

        let (fam, a) = build_switched_gap_family(&o("w"), DepthCap::default()).unwrap();
        let report = check(&fam, &a, BoundKind::Switched).unwrap();
        assert_eq!(
            (report.rank, report.bound, report.gap),
            (o("w^2+w"), o("w^2"), Some(o("w")))
        );
    }

    #[test]
    fn depth_cap_applies_to_builders() {
        let alpha = o("w^w^w");
        assert!(build_gap_family(&alpha, DepthCap(4)).is_ok());
        assert!(matches!(
            build_gap_family(&alpha, DepthCap(3)),
            Err(FamilyError::Ordinal(_))
        ));
    }

    #[test]
    fn labelled_poset_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| labelled_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 19, 219]);
    }

    #[test]
    fn exhaustive_tiny() {
        let s = exhaustive_finite_check(ExhaustiveBounds {
            max_index_size: 1,
            max_component_size: 1,
            max_components: 1,
        })
        .unwrap();
        assert_eq!((s.families, s.elements, s.violations), (1, 1, 0));

        let s = exhaustive_finite_check(ExhaustiveBounds {
            max_index_size: 2,
            max_component_size: 2,
            max_components: 2,
        })
        .unwrap();
        // pool: 1 + 3 posets; index sizes 1 and 2 with 1 and 3 labelled posets
        assert_eq!(s.families, 4 + 3 * 16);
        assert!(s.holds());
        assert_eq!(s.natural_sum_exceptions, 0);
    }

    #[test]
    fn random_family_is_deterministic_and_valid() {
        let sizes = RandomSizes {
            max_index_size: 3,
            max_component_size: 3,
        };
        assert_eq!(random_family(7, sizes), random_family(7, sizes));
        let fam = random_family(11, sizes);
        assert!(fam.is_finite());
        let elements = fam.elements().unwrap();
        for x in &elements {
            assert!(fam.contains(x));
        }
    }

    #[test]
    fn fuzz_is_independent_of_chunking() {
        let sizes = RandomSizes {
            max_index_size: 4,
            max_component_size: 3,
        };
        let a = fuzz(5, 200, sizes).unwrap();
        let b = fuzz(5, 200, sizes).unwrap();
        assert_eq!(a, b);
        assert!(a.holds());
    }

    #[test]
    fn bound_kind_parse() {
        assert_eq!("original".parse::<BoundKind>(), Ok(BoundKind::Original));
        assert_eq!("switched".parse::<BoundKind>(), Ok(BoundKind::Switched));
        assert!("other".parse::<BoundKind>().is_err());
    }
}
