//! Three browser entry points over the core crate. Each takes the plain-text
//! formats the CLI uses and returns text or SVG.

use pointpart::cycle_partition::{check_cycles, partition_cycles};
use pointpart::feasibility::{check_cycle_feasible, PartitionSpec};
use pointpart::sat_gadget::{build_gadget, normalize_formula, parse_dimacs};
use pointpart::svg::{render_gadget, render_polygons};
use pointpart::PointSet;
use wasm_bindgen::prelude::*;

fn spec_for(spec: &str, ps: &PointSet) -> Result<PartitionSpec, String> {
    if spec.trim() == "triangles" {
        if ps.is_empty() || ps.len() % 3 != 0 {
            return Err(format!("{} points do not split into triangles", ps.len()));
        }
        return PartitionSpec::triangles(ps.len() / 3).map_err(|e| e.to_string());
    }
    PartitionSpec::parse(spec).map_err(|e| e.to_string())
}

pub fn check_text(points: &str, spec: &str) -> Result<String, String> {
    let ps = PointSet::parse(points).map_err(|e| e.to_string())?;
    let spec = spec_for(spec, &ps)?;
    let v = check_cycle_feasible(&ps, &spec).map_err(|e| e.to_string())?;
    Ok(if v.feasible { "feasible".into() } else { format!("infeasible: {}", v.certificate) })
}

pub fn partition_svg_text(points: &str, spec: &str) -> Result<String, String> {
    let ps = PointSet::parse(points).map_err(|e| e.to_string())?;
    let spec = spec_for(spec, &ps)?;
    let cp = partition_cycles(&ps, &spec).map_err(|e| e.to_string())?;
    check_cycles(&ps, &cp).map_err(|d| format!("partition failed verification: {d:?}"))?;
    let polys: Vec<Vec<usize>> = cp.polygons.iter().map(|p| p.indices.clone()).collect();
    Ok(render_polygons(&ps, &polys))
}

pub fn gadget_svg_text(dimacs: &str, k: usize) -> Result<String, String> {
    let f = parse_dimacs(dimacs).map_err(|e| e.to_string())?;
    let f = if f.check_normalized().is_ok() { f } else { normalize_formula(&f).map_err(|e| e.to_string())?.formula };
    let g = build_gadget(&f, k).map_err(|e| e.to_string())?;
    Ok(render_gadget(&g, None))
}

#[wasm_bindgen]
pub fn check(points: &str, spec: &str) -> Result<String, JsError> {
    check_text(points, spec).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn partition_svg(points: &str, spec: &str) -> Result<String, JsError> {
    partition_svg_text(points, spec).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn gadget_svg(dimacs: &str, k: usize) -> Result<String, JsError> {
    gadget_svg_text(dimacs, k).map_err(|e| JsError::new(&e))
}
