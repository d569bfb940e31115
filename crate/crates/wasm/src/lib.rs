//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string,
//! either the result object or `{"error": "..."}`.

use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use ranksum::lemma::{self, BoundKind};
use ranksum::{DepthCap, Ordinal};

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn parse(text: &str) -> Result<Ordinal, String> {
    Ordinal::parse(text).map_err(|e| format!("'{text}': {e}"))
}

fn kind(text: &str) -> Result<BoundKind, String> {
    text.parse()
}

fn sums(a: &str, b: &str) -> Result<Value, String> {
    let (x, y) = (parse(a)?, parse(b)?);
    let err = |e: ranksum::OrdinalError| e.to_string();
    Ok(json!({
        "a": x,
        "b": y,
        "a_plus_b": x.checked_add(&y).map_err(err)?,
        "b_plus_a": y.checked_add(&x).map_err(err)?,
        "natural_sum": x.checked_natural_sum(&y).map_err(err)?,
        "order": format!("{:?}", x.cmp(&y)),
        "fixpoint_a": x.least_add_fixpoint().map_err(err)?,
    }))
}

/// Normalizes `a` and `b` and returns both ordinary sums, the natural sum,
/// their comparison and the least additive fixpoint of `a`.
#[wasm_bindgen]
pub fn ordinal_sums(a: &str, b: &str) -> String {
    respond(sums(a, b))
}

fn build(alpha: &str, kind_name: &str) -> Result<Value, String> {
    let alpha = parse(alpha)?;
    let kind = kind(kind_name)?;
    let (family, element) = match kind {
        BoundKind::Original => lemma::build_gap_family(&alpha, DepthCap::default()),
        BoundKind::Switched => lemma::build_switched_gap_family(&alpha, DepthCap::default()),
    }
    .map_err(|e| e.to_string())?;
    let report = lemma::check(&family, &element, kind).map_err(|e| e.to_string())?;
    let mut doc = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    doc["family"] = serde_json::to_value(family.to_spec()).map_err(|e| e.to_string())?;
    doc["natural_sum_bound"] = serde_json::to_value(
        lemma::natural_sum_bound(&family, &element).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    Ok(doc)
}

/// The family on which the chosen bound (`"original"` or `"switched"`)
/// fails by exactly `alpha`, with its gap report.
#[wasm_bindgen]
pub fn counterexample(alpha: &str, kind: &str) -> String {
    respond(build(alpha, kind))
}

#[derive(Serialize)]
struct Cell {
    t: String,
    a: String,
    rank: Ordinal,
    bound: Ordinal,
    holds: bool,
    engine: &'static str,
}

/// Up to `limit` finite points of a chain followed by its largest point.
fn axis(order_type: &Ordinal, limit: u32) -> Vec<Ordinal> {
    let mut points: Vec<Ordinal> = (0..u64::from(limit.clamp(1, 12)))
        .map(Ordinal::from_nat)
        .take_while(|p| p < order_type)
        .collect();
    // order types here are successors, so the top is the predecessor
    if let Some(top) = predecessor(order_type) {
        if !points.contains(&top) {
            points.push(top);
        }
    }
    points
}

fn predecessor(x: &Ordinal) -> Option<Ordinal> {
    if !x.is_successor() {
        return None;
    }
    let mut terms: Vec<(Ordinal, u64)> = x
        .terms()
        .iter()
        .map(|t| (t.exponent().clone(), t.coefficient()))
        .collect();
    let last = terms.last_mut()?;
    last.1 -= 1;
    if last.1 == 0 {
        terms.pop();
    }
    Ordinal::from_terms(terms).ok()
}

fn grid(alpha: &str, kind_name: &str, rows: u32, cols: u32) -> Result<Value, String> {
    let alpha = parse(alpha)?;
    let kind = kind(kind_name)?;
    let (family, _) = match kind {
        BoundKind::Original => lemma::build_gap_family(&alpha, DepthCap::default()),
        BoundKind::Switched => lemma::build_switched_gap_family(&alpha, DepthCap::default()),
    }
    .map_err(|e| e.to_string())?;
    let index_type = family.index().poset_rank();
    let component_type = family
        .symbolic_component_type()
        .map_err(|e| e.to_string())?
        .clone();
    let row_points = axis(&index_type, rows);
    let col_points = axis(&component_type, cols);

    // Finite cells are also ranked by brute force on a truncation.
    let finite_rows = row_points.iter().filter(|p| p.is_finite()).count() as u64;
    let finite_cols = col_points.iter().filter(|p| p.is_finite()).count() as u64;
    let truncated = family
        .truncate(finite_rows.max(1), finite_cols.max(1))
        .map_err(|e| e.to_string())?;
    let sum = truncated.materialize().map_err(|e| e.to_string())?;

    let mut cells = Vec::new();
    for t in &row_points {
        for a in &col_points {
            let e = ranksum::SumElement::ordinals(t.clone(), a.clone());
            let (rank, engine) = if sum.elements().contains(&e) {
                (sum.rank(&e).map_err(|e| e.to_string())?, "brute_force")
            } else {
                (
                    family.symbolic_rank(&e).map_err(|e| e.to_string())?,
                    "symbolic",
                )
            };
            let bound = lemma::bound(&family, &e, kind).map_err(|e| e.to_string())?;
            cells.push(Cell {
                t: t.to_string(),
                a: a.to_string(),
                holds: rank <= bound,
                rank,
                bound,
                engine,
            });
        }
    }
    let names = |v: &[Ordinal]| v.iter().map(Ordinal::to_string).collect::<Vec<_>>();
    Ok(json!({
        "rows": names(&row_points),
        "cols": names(&col_points),
        "cells": cells,
    }))
}

/// Ranks and bounds over a window of the counter-example family: the first
/// `rows` index points plus the top index, by the first `cols` component
/// points plus the top component point.
#[wasm_bindgen]
pub fn rank_grid(alpha: &str, kind: &str, rows: u32, cols: u32) -> String {
    respond(grid(alpha, kind, rows, cols))
}
