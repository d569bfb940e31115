//! Well-founded posets: explicit finite posets and ordinal chains.
//!
//! The rank of an element is `sup` over its strict predecessors of
//! `rank + 1`, with minimal elements at rank 0. For a chain of order type
//! `γ` the rank of an element is the element itself.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::{DepthCap, Ordinal, OrdinalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("cycle in order relation: {}", .0.join(" < "))]
    Cycle(Vec<String>),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("duplicate element '{0}'")]
    DuplicateElement(String),
    #[error("element '{element}' is not below chain order type {order_type}")]
    NotInChain {
        element: Ordinal,
        order_type: Ordinal,
    },
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// A finite strict partial order, stored as its full transitive closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    positions: HashMap<String, usize>,
    // below[y] holds every x with x < y
    below: Vec<FixedBitSet>,
    ranks: Vec<u64>,
}

impl FinitePoset {
    /// Builds a poset from element labels and `(lower, upper)` pairs,
    /// closing the relation transitively.
    pub fn from_covers<S: AsRef<str>>(
        elements: &[S],
        covers: &[(S, S)],
    ) -> Result<FinitePoset, PosetError> {
        let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut positions = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if positions.insert(label.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(label.clone()));
            }
        }
        let lookup = |s: &S| {
            positions
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| PosetError::UnknownElement(s.as_ref().to_owned()))
        };
        let mut edges = Vec::with_capacity(covers.len());
        for (lo, hi) in covers {
            edges.push((lookup(lo)?, lookup(hi)?));
        }
        FinitePoset::from_edges(labels, positions, &edges)
    }

    /// Builds a poset on `0..n`, labelled by position, from index pairs.
    pub fn from_index_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<FinitePoset, PosetError> {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let positions = labels.iter().cloned().zip(0..).collect();
        if let Some(&(lo, hi)) = pairs.iter().find(|&&(lo, hi)| lo >= n || hi >= n) {
            return Err(PosetError::UnknownElement(lo.max(hi).to_string()));
        }
        FinitePoset::from_edges(labels, positions, pairs)
    }

    pub fn chain(n: usize) -> FinitePoset {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FinitePoset::from_index_pairs(n, &pairs).expect("a chain is acyclic")
    }

    pub fn antichain(n: usize) -> FinitePoset {
        FinitePoset::from_index_pairs(n, &[]).expect("no relations")
    }

    fn from_edges(
        labels: Vec<String>,
        positions: HashMap<String, usize>,
        edges: &[(usize, usize)],
    ) -> Result<FinitePoset, PosetError> {
        let n = labels.len();
        let mut succs = vec![Vec::new(); n];
        let mut preds = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(lo, hi) in edges {
            succs[lo].push(hi);
            preds[hi].push(lo);
            indegree[hi] += 1;
        }

        // Kahn's algorithm; whatever is left over contains a cycle.
        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        while let Some(x) = ready.pop() {
            order.push(x);
            for &y in &succs[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.push(y);
                }
            }
        }
        if order.len() < n {
            let stuck: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
            let cycle = find_cycle(&succs, &stuck);
            return Err(PosetError::Cycle(
                cycle.into_iter().map(|i| labels[i].clone()).collect(),
            ));
        }

        let mut below = vec![FixedBitSet::with_capacity(n); n];
        let mut ranks = vec![0u64; n];
        for &y in &order {
            let mut set = FixedBitSet::with_capacity(n);
            let mut rank = 0;
            for &x in &preds[y] {
                set.union_with(&below[x]);
                set.insert(x);
                rank = rank.max(ranks[x] + 1);
            }
            below[y] = set;
            ranks[y] = rank;
        }
        Ok(FinitePoset {
            labels,
            positions,
            below,
            ranks,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.positions.get(label).copied()
    }

    /// `x < y` by position. Panics if either is out of range.
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.below[y].contains(x)
    }

    /// Strict predecessors of `y`.
    pub fn below(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.below[y].ones()
    }

    pub fn rank(&self, x: usize) -> u64 {
        self.ranks[x]
    }

    /// Height of the poset: one more than the largest rank, 0 when empty.
    pub fn height(&self) -> u64 {
        self.ranks.iter().map(|r| r + 1).max().unwrap_or(0)
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|x| (0..x).all(|y| self.lt(x, y) || self.lt(y, x)))
    }

    /// All `(lower, upper)` pairs of the closed relation.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|y| self.below(y).map(move |x| (x, y)))
            .collect()
    }

    /// The sub-poset induced on the given positions, keeping labels.
    pub fn restrict(&self, keep: &[usize]) -> FinitePoset {
        let labels: Vec<String> = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let positions = labels.iter().cloned().zip(0..).collect();
        let mut pairs = Vec::new();
        for (b, &y) in keep.iter().enumerate() {
            for (a, &x) in keep.iter().enumerate() {
                if self.lt(x, y) {
                    pairs.push((a, b));
                }
            }
        }
        FinitePoset::from_edges(labels, positions, &pairs).expect("restriction stays acyclic")
    }

    /// Positions sorted by rank, ties broken by position: a linear extension
    /// in which every prefix is down-closed.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.ranks[i], i));
        order
    }
}

fn find_cycle(succs: &[Vec<usize>], stuck: &[bool]) -> Vec<usize> {
    // DFS over the nodes Kahn's algorithm could not schedule; a node met
    // again while still on the path closes a cycle.
    let n = succs.len();
    let mut state = vec![0u8; n]; // 0 unseen, 1 on path, 2 done
    for start in (0..n).filter(|&i| stuck[i]) {
        if state[start] != 0 {
            continue;
        }
        let mut path: Vec<(usize, usize)> = vec![(start, 0)];
        state[start] = 1;
        while let Some(top) = path.len().checked_sub(1) {
            let (node, next) = path[top];
            match succs[node].get(next) {
                Some(&succ) => {
                    path[top].1 += 1;
                    if !stuck[succ] {
                        continue;
                    }
                    match state[succ] {
                        0 => {
                            state[succ] = 1;
                            path.push((succ, 0));
                        }
                        1 => {
                            let from = path.iter().position(|&(p, _)| p == succ).unwrap();
                            let mut cycle: Vec<usize> =
                                path[from..].iter().map(|&(p, _)| p).collect();
                            cycle.push(succ);
                            return cycle;
                        }
                        _ => {}
                    }
                }
                None => {
                    state[node] = 2;
                    path.pop();
                }
            }
        }
    }
    Vec::new()
}

/// The chain of all ordinals below `order_type`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrdinalChain {
    order_type: Ordinal,
}

impl OrdinalChain {
    pub fn new(order_type: Ordinal) -> Self {
        OrdinalChain { order_type }
    }

    pub fn order_type(&self) -> &Ordinal {
        &self.order_type
    }

    pub fn contains(&self, x: &Ordinal) -> bool {
        x < &self.order_type
    }
}

/// A point of a [`Poset`]: a position in a finite poset or an ordinal in a
/// chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Node(usize),
    Ordinal(Ordinal),
}

impl From<Ordinal> for Element {
    fn from(o: Ordinal) -> Self {
        Element::Ordinal(o)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Poset {
    Finite(FinitePoset),
    Chain(OrdinalChain),
}

impl Poset {
    pub fn chain(order_type: Ordinal) -> Poset {
        Poset::Chain(OrdinalChain::new(order_type))
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Poset::Finite(_) => true,
            Poset::Chain(c) => c.order_type.is_finite(),
        }
    }

    /// Number of elements, if finite.
    pub fn len(&self) -> Option<u64> {
        match self {
            Poset::Finite(p) => Some(p.len() as u64),
            Poset::Chain(c) => c.order_type.as_nat(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Every element, when the poset is finite.
    pub fn elements(&self) -> Option<Vec<Element>> {
        match self {
            Poset::Finite(p) => Some((0..p.len()).map(Element::Node).collect()),
            Poset::Chain(c) => c.order_type.as_nat().map(|n| {
                (0..n)
                    .map(|k| Element::Ordinal(Ordinal::from_nat(k)))
                    .collect()
            }),
        }
    }

    /// Index of an element within [`Poset::elements`].
    pub fn position(&self, x: &Element) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        match (self, x) {
            (Poset::Finite(_), Element::Node(i)) => Some(*i),
            (Poset::Chain(_), Element::Ordinal(o)) => o.as_nat().map(|n| n as usize),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        match (self, x) {
            (Poset::Finite(p), Element::Node(i)) => *i < p.len(),
            (Poset::Chain(c), Element::Ordinal(o)) => c.contains(o),
            _ => false,
        }
    }

    fn require(&self, x: &Element) -> Result<(), PosetError> {
        if self.contains(x) {
            return Ok(());
        }
        match (self, x) {
            (Poset::Chain(c), Element::Ordinal(o)) => Err(PosetError::NotInChain {
                element: o.clone(),
                order_type: c.order_type.clone(),
            }),
            _ => Err(PosetError::UnknownElement(format!("{x:?}"))),
        }
    }

    /// Resolves a textual element name: a label for finite posets, an
    /// ordinal expression for chains.
    pub fn resolve(&self, name: &str, cap: DepthCap) -> Result<Element, PosetError> {
        match self {
            Poset::Finite(p) => p
                .position(name)
                .map(Element::Node)
                .ok_or_else(|| PosetError::UnknownElement(name.to_owned())),
            Poset::Chain(_) => {
                let x = Element::Ordinal(Ordinal::parse_with_cap(name, cap)?);
                self.require(&x)?;
                Ok(x)
            }
        }
    }

    /// Textual name of an element, inverse to [`Poset::resolve`].
    pub fn name(&self, x: &Element) -> String {
        match (self, x) {
            (Poset::Finite(p), Element::Node(i)) if *i < p.len() => p.labels[*i].clone(),
            (_, Element::Ordinal(o)) => o.to_string(),
            (_, Element::Node(i)) => format!("#{i}"),
        }
    }

    pub fn lt(&self, x: &Element, y: &Element) -> Result<bool, PosetError> {
        self.require(x)?;
        self.require(y)?;
        Ok(match (self, x, y) {
            (Poset::Finite(p), Element::Node(a), Element::Node(b)) => p.lt(*a, *b),
            (Poset::Chain(_), Element::Ordinal(a), Element::Ordinal(b)) => a < b,
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn rank_of(&self, x: &Element) -> Result<Ordinal, PosetError> {
        self.require(x)?;
        Ok(match (self, x) {
            (Poset::Finite(p), Element::Node(i)) => Ordinal::from_nat(p.rank(*i)),
            (Poset::Chain(_), Element::Ordinal(o)) => o.clone(),
            _ => unreachable!("membership checked above"),
        })
    }

    /// Height of the whole poset: `sup (rank + 1)` over its elements.
    pub fn poset_rank(&self) -> Ordinal {
        match self {
            Poset::Finite(p) => Ordinal::from_nat(p.height()),
            Poset::Chain(c) => c.order_type.clone(),
        }
    }

    /// The first `n` elements along a down-closed linear extension.
    pub fn truncate(&self, n: u64) -> Poset {
        match self {
            Poset::Chain(c) => {
                let bound = Ordinal::from_nat(n);
                Poset::chain(std::cmp::min(bound, c.order_type.clone()))
            }
            Poset::Finite(p) => {
                let mut keep = p.linear_extension();
                keep.truncate(n.min(p.len() as u64) as usize);
                keep.sort_unstable();
                Poset::Finite(p.restrict(&keep))
            }
        }
    }

    pub fn to_spec(&self) -> PosetSpec {
        match self {
            Poset::Chain(c) => PosetSpec::Chain {
                chain: c.order_type.to_string(),
            },
            Poset::Finite(p) => PosetSpec::Explicit {
                elements: p.labels.iter().cloned().map(Label::Text).collect(),
                covers: p
                    .relation_pairs()
                    .into_iter()
                    .map(|(x, y)| {
                        (
                            Label::Text(p.labels[x].clone()),
                            Label::Text(p.labels[y].clone()),
                        )
                    })
                    .collect(),
            },
        }
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Poset::Chain(c) => write!(f, "chain {}", c.order_type),
            Poset::Finite(p) => {
                let pairs: Vec<String> = p
                    .relation_pairs()
                    .into_iter()
                    .map(|(x, y)| format!("{}<{}", p.labels[x], p.labels[y]))
                    .collect();
                write!(f, "{{{}}} with [{}]", p.labels.join(","), pairs.join(", "))
            }
        }
    }
}

/// Element identifier as it appears in JSON: a string or an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Text(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Text(s) => f.write_str(s),
        }
    }
}

/// JSON form of a poset: `{"chain": "<ordinal>"}` or
/// `{"elements": [...], "covers": [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum PosetSpec {
    Chain {
        chain: String,
    },
    Explicit {
        elements: Vec<Label>,
        #[serde(default)]
        covers: Vec<(Label, Label)>,
    },
}

impl PosetSpec {
    pub fn build(&self, cap: DepthCap) -> Result<Poset, PosetError> {
        match self {
            PosetSpec::Chain { chain } => Ok(Poset::chain(Ordinal::parse_with_cap(chain, cap)?)),
            PosetSpec::Explicit { elements, covers } => {
                let elements: Vec<String> = elements.iter().map(Label::to_string).collect();
                let covers: Vec<(String, String)> = covers
                    .iter()
                    .map(|(x, y)| (x.to_string(), y.to_string()))
                    .collect();
                Ok(Poset::Finite(FinitePoset::from_covers(&elements, &covers)?))
            }
        }
    }
}
