//! Ranked sums of an indexed family of posets.
//!
//! Given an index poset `T` and components `P_t`, the ranked sum orders the
//! tagged union by `(s, x) < (t, y)` iff either `s = t` and `x < y` in
//! `P_t`, or `s < t` in `T` and the primitive rank of `x` (its rank in
//! `P_s`) is at most that of `y`.
//!
//! Ranks in the sum are computed two ways. [`RankedFamily::brute_force_rank`]
//! materializes a finite sum and runs the finite rank recursion.
//! [`RankedFamily::symbolic_rank`] handles families whose components are all
//! chains of one order type, where the rank of `(t, o)` is the natural sum of
//! the index rank of `t` and `o`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::{DepthCap, Ordinal, OrdinalError};
use crate::poset::{Element, FinitePoset, Label, Poset, PosetError, PosetSpec};

/// Largest ranked sum the brute-force engine will materialize.
pub const MAX_SUM_ELEMENTS: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error("index has {index} elements but {components} components were given")]
    ComponentCount { index: u64, components: usize },
    #[error("per-index components need a finite index poset")]
    InfiniteIndex,
    #[error("family file must give exactly one of \"components\" and \"all_components\"")]
    ComponentsSpec,
    #[error("no component given for index element '{0}'")]
    MissingComponent(String),
    #[error("component key '{0}' names an index element twice")]
    DuplicateComponent(String),
    #[error("element {0} is not in the family")]
    NotInFamily(String),
    #[error("family is not finite")]
    NotFinite,
    #[error("family is outside symbolic mode: {0}")]
    NotSymbolic(&'static str),
    #[error("ranked sum has {size} elements, more than the limit of {cap}")]
    TooLarge { size: u64, cap: u64 },
    #[error("truncation bounds must be positive")]
    ZeroBound,
    #[error("family is neither finite nor in symbolic mode")]
    NotEvaluable,
    #[error("malformed family file: {0}")]
    Malformed(String),
}

/// The components of a family: one poset shared by every index, or one
/// poset per index element of a finite index (in [`Poset::elements`] order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Components {
    Uniform(Poset),
    PerIndex(Vec<Poset>),
}

/// An element of the ranked sum: the index it is tagged with and the point of
/// that index's component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SumElement {
    pub index: Element,
    pub inner: Element,
}

impl SumElement {
    pub fn new(index: impl Into<Element>, inner: impl Into<Element>) -> Self {
        SumElement {
            index: index.into(),
            inner: inner.into(),
        }
    }

    /// Shorthand for elements of chain families.
    pub fn ordinals(index: Ordinal, inner: Ordinal) -> Self {
        SumElement::new(index, inner)
    }
}

/// Textual address of a sum element, `{"t": ..., "a": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Address {
    pub t: Label,
    pub a: Label,
}

impl Address {
    pub fn new(t: impl Into<String>, a: impl Into<String>) -> Self {
        Address {
            t: Label::Text(t.into()),
            a: Label::Text(a.into()),
        }
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t, self.a)
    }
}

/// JSON form of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub index: PosetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<BTreeMap<String, PosetSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub all_components: Option<PosetSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedFamily {
    index: Poset,
    components: Components,
}

/// Which engine produced a rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    BruteForce,
    Symbolic,
}

impl RankedFamily {
    pub fn new(index: Poset, components: Components) -> Result<Self, FamilyError> {
        if let Components::PerIndex(list) = &components {
            let size = index.len().ok_or(FamilyError::InfiniteIndex)?;
            if size != list.len() as u64 {
                return Err(FamilyError::ComponentCount {
                    index: size,
                    components: list.len(),
                });
            }
        }
        Ok(RankedFamily { index, components })
    }

    pub fn uniform(index: Poset, component: Poset) -> Self {
        RankedFamily {
            index,
            components: Components::Uniform(component),
        }
    }

    pub fn index(&self) -> &Poset {
        &self.index
    }

    pub fn components(&self) -> &Components {
        &self.components
    }

    /// The component `P_t` of an index element.
    pub fn component(&self, t: &Element) -> Result<&Poset, FamilyError> {
        if !self.index.contains(t) {
            return Err(FamilyError::NotInFamily(format!(
                "index {}",
                self.index.name(t)
            )));
        }
        match &self.components {
            Components::Uniform(p) => Ok(p),
            Components::PerIndex(list) => {
                let i = self.index.position(t).expect("finite index");
                Ok(&list[i])
            }
        }
    }

    pub fn contains(&self, e: &SumElement) -> bool {
        self.component(&e.index).is_ok_and(|p| p.contains(&e.inner))
    }

    fn require(&self, e: &SumElement) -> Result<&Poset, FamilyError> {
        let component = self.component(&e.index)?;
        if component.contains(&e.inner) {
            Ok(component)
        } else {
            Err(FamilyError::NotInFamily(self.address(e).to_string()))
        }
    }

    /// The index an element is tagged with.
    pub fn f<'a>(&self, e: &'a SumElement) -> Result<&'a Element, FamilyError> {
        self.require(e)?;
        Ok(&e.index)
    }

    /// Primitive rank: the rank of the element inside its own component.
    pub fn g(&self, e: &SumElement) -> Result<Ordinal, FamilyError> {
        Ok(self.require(e)?.rank_of(&e.inner)?)
    }

    /// Rank of the element's index inside the index poset.
    pub fn index_rank(&self, e: &SumElement) -> Result<Ordinal, FamilyError> {
        self.require(e)?;
        Ok(self.index.rank_of(&e.index)?)
    }

    /// The ranked order.
    pub fn less_than(&self, x: &SumElement, y: &SumElement) -> Result<bool, FamilyError> {
        let px = self.require(x)?;
        self.require(y)?;
        if x.index == y.index {
            return Ok(px.lt(&x.inner, &y.inner)?);
        }
        Ok(self.index.lt(&x.index, &y.index)? && self.g(x)? <= self.g(y)?)
    }

    pub fn is_finite(&self) -> bool {
        self.index.is_finite()
            && match &self.components {
                Components::Uniform(p) => p.is_finite(),
                Components::PerIndex(list) => list.iter().all(Poset::is_finite),
            }
    }

    /// Number of elements of the sum, when finite.
    pub fn size(&self) -> Option<u64> {
        let n = self.index.len()?;
        match &self.components {
            Components::Uniform(p) => n.checked_mul(p.len()?),
            Components::PerIndex(list) => list
                .iter()
                .try_fold(0u64, |acc, p| acc.checked_add(p.len()?)),
        }
    }

    /// All elements of a finite sum, grouped by index.
    pub fn elements(&self) -> Option<Vec<SumElement>> {
        let mut out = Vec::new();
        for t in self.index.elements()? {
            let component = self.component(&t).ok()?;
            for x in component.elements()? {
                out.push(SumElement::new(t.clone(), x));
            }
        }
        Some(out)
    }

    /// Common component order type when every component is an ordinal chain
    /// of the same type. Any finite index poset or chain index then admits
    /// the closed-form rank.
    pub fn symbolic_component_type(&self) -> Result<&Ordinal, FamilyError> {
        fn chain_type(p: &Poset) -> Result<&Ordinal, FamilyError> {
            match p {
                Poset::Chain(c) => Ok(c.order_type()),
                Poset::Finite(_) => Err(FamilyError::NotSymbolic(
                    "a component is not an ordinal chain",
                )),
            }
        }
        match &self.components {
            Components::Uniform(p) => chain_type(p),
            Components::PerIndex(list) => {
                let mut types = list.iter().map(chain_type);
                let first = match types.next() {
                    Some(t) => t?,
                    None => return Err(FamilyError::NotSymbolic("family has no components")),
                };
                for t in types {
                    if t? != first {
                        return Err(FamilyError::NotSymbolic(
                            "component chains differ in order type",
                        ));
                    }
                }
                Ok(first)
            }
        }
    }

    pub fn is_symbolic(&self) -> bool {
        self.symbolic_component_type().is_ok()
    }

    /// Closed-form rank for symbolic-mode families: the natural sum of the
    /// index rank and the primitive rank.
    pub fn symbolic_rank(&self, e: &SumElement) -> Result<Ordinal, FamilyError> {
        self.symbolic_component_type()?;
        let index_rank = self.index_rank(e)?;
        Ok(index_rank.checked_natural_sum(&self.g(e)?)?)
    }

    /// Rank by materializing the whole sum. The family must be finite.
    pub fn brute_force_rank(&self, e: &SumElement) -> Result<Ordinal, FamilyError> {
        self.require(e)?;
        self.materialize()?.rank(e)
    }

    /// Rank with whichever engine applies: brute force for finite families,
    /// the closed form otherwise.
    pub fn rank(&self, e: &SumElement) -> Result<(Ordinal, Engine), FamilyError> {
        if self.is_finite() {
            Ok((self.brute_force_rank(e)?, Engine::BruteForce))
        } else if self.is_symbolic() {
            Ok((self.symbolic_rank(e)?, Engine::Symbolic))
        } else {
            Err(FamilyError::NotEvaluable)
        }
    }

    pub fn materialize(&self) -> Result<MaterializedSum, FamilyError> {
        if !self.is_finite() {
            return Err(FamilyError::NotFinite);
        }
        let size = self.size().unwrap_or(u64::MAX);
        if size > MAX_SUM_ELEMENTS {
            return Err(FamilyError::TooLarge {
                size,
                cap: MAX_SUM_ELEMENTS,
            });
        }
        MaterializedSum::build(self)
    }

    /// Keeps the first `index_bound` index elements and the first
    /// `component_bound` points of every component chain.
    pub fn truncate(
        &self,
        index_bound: u64,
        component_bound: u64,
    ) -> Result<RankedFamily, FamilyError> {
        if index_bound == 0 || component_bound == 0 {
            return Err(FamilyError::ZeroBound);
        }
        self.symbolic_component_type()?;
        let index = self.index.truncate(index_bound);
        let components = match &self.components {
            Components::Uniform(p) => Components::Uniform(p.truncate(component_bound)),
            Components::PerIndex(list) => {
                // The index truncation keeps labels, so components follow by name.
                let old = &self.index;
                let kept = index.elements().expect("truncated index is finite");
                Components::PerIndex(
                    kept.iter()
                        .map(|t| {
                            let name = index.name(t);
                            let original =
                                old.resolve(&name, DepthCap::default()).expect("kept label");
                            list[old.position(&original).unwrap()].truncate(component_bound)
                        })
                        .collect(),
                )
            }
        };
        RankedFamily::new(index, components)
    }

    pub fn address(&self, e: &SumElement) -> Address {
        let inner = match self.component(&e.index) {
            Ok(p) => p.name(&e.inner),
            Err(_) => format!("{:?}", e.inner),
        };
        Address::new(self.index.name(&e.index), inner)
    }

    pub fn resolve(&self, address: &Address, cap: DepthCap) -> Result<SumElement, FamilyError> {
        let index = self.index.resolve(&address.t.to_string(), cap)?;
        let component = self.component(&index)?;
        let inner = component.resolve(&address.a.to_string(), cap)?;
        Ok(SumElement { index, inner })
    }

    pub fn from_spec(spec: &FamilySpec, cap: DepthCap) -> Result<Self, FamilyError> {
        let index = spec.index.build(cap)?;
        match (&spec.components, &spec.all_components) {
            (None, Some(all)) => Ok(RankedFamily::uniform(index, all.build(cap)?)),
            (Some(map), None) => {
                let elements = index.elements().ok_or(FamilyError::InfiniteIndex)?;
                let mut slots: Vec<Option<Poset>> = vec![None; elements.len()];
                for (key, component) in map {
                    let t = index.resolve(key, cap)?;
                    let i = index.position(&t).expect("finite index");
                    if slots[i].is_some() {
                        return Err(FamilyError::DuplicateComponent(key.clone()));
                    }
                    slots[i] = Some(component.build(cap)?);
                }
                let components = slots
                    .into_iter()
                    .zip(&elements)
                    .map(|(slot, t)| {
                        slot.ok_or_else(|| FamilyError::MissingComponent(index.name(t)))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                RankedFamily::new(index, Components::PerIndex(components))
            }
            _ => Err(FamilyError::ComponentsSpec),
        }
    }

    pub fn from_json(text: &str, cap: DepthCap) -> Result<Self, FamilyError> {
        let spec: FamilySpec =
            serde_json::from_str(text).map_err(|e| FamilyError::Malformed(e.to_string()))?;
        RankedFamily::from_spec(&spec, cap)
    }

    pub fn to_spec(&self) -> FamilySpec {
        match &self.components {
            Components::Uniform(p) => FamilySpec {
                index: self.index.to_spec(),
                components: None,
                all_components: Some(p.to_spec()),
            },
            Components::PerIndex(list) => {
                let elements = self.index.elements().expect("finite index");
                FamilySpec {
                    index: self.index.to_spec(),
                    components: Some(
                        elements
                            .iter()
                            .zip(list)
                            .map(|(t, p)| (self.index.name(t), p.to_spec()))
                            .collect(),
                    ),
                    all_components: None,
                }
            }
        }
    }
}

/// A finite ranked sum laid out as an explicit [`FinitePoset`].
#[derive(Debug, Clone)]
pub struct MaterializedSum {
    elements: Vec<SumElement>,
    lookup: HashMap<SumElement, usize>,
    poset: FinitePoset,
}

impl MaterializedSum {
    fn build(family: &RankedFamily) -> Result<Self, FamilyError> {
        let elements = family.elements().ok_or(FamilyError::NotFinite)?;
        let lookup: HashMap<SumElement, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let primitive: Vec<Ordinal> = elements
            .iter()
            .map(|e| family.g(e))
            .collect::<Result<_, _>>()?;
        let index_elements = family.index().elements().ok_or(FamilyError::NotFinite)?;
        let index_lt: HashSet<(usize, usize)> = index_elements
            .iter()
            .enumerate()
            .flat_map(|(i, s)| {
                index_elements
                    .iter()
                    .enumerate()
                    .filter(move |(_, t)| family.index().lt(s, t).unwrap_or(false))
                    .map(move |(j, _)| (i, j))
            })
            .collect();
        let index_pos: Vec<usize> = elements
            .iter()
            .map(|e| family.index().position(&e.index).expect("finite index"))
            .collect();

        let mut pairs = Vec::new();
        for (j, y) in elements.iter().enumerate() {
            let component = family.component(&y.index)?;
            for (i, x) in elements.iter().enumerate() {
                let related = if index_pos[i] == index_pos[j] {
                    component.lt(&x.inner, &y.inner)?
                } else {
                    index_lt.contains(&(index_pos[i], index_pos[j])) && primitive[i] <= primitive[j]
                };
                if related {
                    pairs.push((i, j));
                }
            }
        }
        let poset = FinitePoset::from_index_pairs(elements.len(), &pairs)?;
        Ok(MaterializedSum {
            elements,
            lookup,
            poset,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[SumElement] {
        &self.elements
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    fn position(&self, e: &SumElement) -> Result<usize, FamilyError> {
        self.lookup
            .get(e)
            .copied()
            .ok_or_else(|| FamilyError::NotInFamily(format!("{e:?}")))
    }

    pub fn rank(&self, e: &SumElement) -> Result<Ordinal, FamilyError> {
        Ok(Ordinal::from_nat(self.poset.rank(self.position(e)?)))
    }

    pub fn lt(&self, x: &SumElement, y: &SumElement) -> Result<bool, FamilyError> {
        Ok(self.poset.lt(self.position(x)?, self.position(y)?))
    }

    /// A longest descending chain ending at `e`, listed bottom-up; its length
    /// minus one is the rank of `e`.
    pub fn rank_witness(&self, e: &SumElement) -> Result<Vec<SumElement>, FamilyError> {
        let mut at = self.position(e)?;
        let mut chain = vec![at];
        while self.poset.rank(at) > 0 {
            let want = self.poset.rank(at) - 1;
            at = self
                .poset
                .below(at)
                .find(|&x| self.poset.rank(x) == want)
                .expect("positive rank has a predecessor one step down");
            chain.push(at);
        }
        chain.reverse();
        Ok(chain
            .into_iter()
            .map(|i| self.elements[i].clone())
            .collect())
    }
}
