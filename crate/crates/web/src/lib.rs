//! Browser bindings. Every function takes text and returns a JSON string;
//! failures come back as `{"error": ...}` so the page has one code path.

use cubegirth::constructions::wreath_demo as run_wreath_demo;
use cubegirth::format::{parse_cubegraph, parse_permgrp};
use cubegirth::girth::girth_cayley;
use cubegirth::groups::FiniteGroup;
use cubegirth::halfspaces::HyperplaneSystem;
use cubegirth::Error;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest group the page will enumerate.
const MAX_ORDER: usize = 50_000;

fn finish(r: Result<Value, Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(Error::Parse { line, column, message }) => {
            json!({ "error": message, "line": line, "column": column }).to_string()
        }
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Girth of the Cayley graph of a permgrp file with respect to its generators.
#[wasm_bindgen]
pub fn girth(permgrp: &str) -> String {
    finish((|| {
        let spec = parse_permgrp(permgrp)?;
        let (labels, perms) = spec.generators.into_iter().unzip();
        let g = FiniteGroup::generate(spec.degree, perms, labels)?;
        if g.order() > MAX_ORDER {
            return Err(Error::Invalid(format!("group order {} is above the demo limit {MAX_ORDER}", g.order())));
        }
        let girth = girth_cayley(&g, &g.generator_indices())?;
        Ok(json!({ "order": g.order(), "girth": girth }))
    })())
}

/// Hyperplanes of a cubegraph file, with the vertices on each side.
#[wasm_bindgen]
pub fn hyperplanes(cubegraph: &str) -> String {
    finish((|| {
        let g = parse_cubegraph(cubegraph)?;
        let sys = HyperplaneSystem::new(&g)?;
        let names = |vs: Vec<cubegirth::VertexId>| vs.into_iter().map(|v| g.name(v).to_string()).collect::<Vec<_>>();
        let list: Vec<Value> = (0..sys.len())
            .map(|i| {
                let (a, b) = sys.halfspace_pair(i);
                let h = sys.hyperplane(i);
                json!({
                    "id": i,
                    "edges": h.edges.iter().map(|e| [g.name(e.0), g.name(e.1)]).collect::<Vec<_>>(),
                    "sides": [names(a), names(b)],
                })
            })
            .collect();
        let strongly_separated = (0..sys.len())
            .flat_map(|i| (i + 1..sys.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| sys.strongly_separated(i, j))
            .count();
        Ok(json!({
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "dimension": g.max_cube_dimension(),
            "count": sys.len(),
            "strongly_separated_pairs": strongly_separated,
            "hyperplanes": list,
        }))
    })())
}

/// The fixing group of opposite corners of the n-cube, the law and solvability.
#[wasm_bindgen]
pub fn wreath_demo(n: usize, trials: usize, seed: u64) -> String {
    finish((|| {
        if !(1..=5).contains(&n) {
            return Err(Error::Invalid("the demo supports n from 1 to 5".into()));
        }
        let r = run_wreath_demo(n, trials, 3, seed)?;
        Ok(json!({
            "fixing_group_order": r.coordinate_action.group_order,
            "symmetric_on_hyperplanes": r.coordinate_action.is_isomorphism_onto_symmetric(),
            "law_exponent": r.law.exponent,
            "law_holds": r.law.passed(),
            "derived_series": r.nonsolvability.derived_series.orders,
            "nonsolvable": r.nonsolvability.nonsolvable,
        }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn cycle_of_five() {
        let r = parse(&girth("permgrp 1\ndeg 5\ng s 1 2 3 4 0\n"));
        assert_eq!(r["girth"]["length"], 5);
    }

    #[test]
    fn errors_carry_positions() {
        let r = parse(&girth("permgrp 1\ndeg 2\ng s 1 q\n"));
        assert_eq!(r["line"], 3);
        assert_eq!(r["column"], 7);
    }

    #[test]
    fn square_has_two_transverse_hyperplanes() {
        let r = parse(&hyperplanes("cubegraph 1\nv 00\nv 01\nv 10\nv 11\ne 00 01\ne 00 10\ne 01 11\ne 10 11\n"));
        assert_eq!(r["count"], 2);
        assert_eq!(r["dimension"], 2);
        assert_eq!(r["strongly_separated_pairs"], 0);
    }

    #[test]
    fn path_hyperplanes_are_strongly_separated_at_distance() {
        let r = parse(&hyperplanes("cubegraph 1\nv a\nv b\nv c\nv d\ne a b\ne b c\ne c d\n"));
        assert_eq!(r["count"], 3);
        // Only the two end edges have a third hyperplane between them.
        assert_eq!(r["strongly_separated_pairs"], 1);
    }

    #[test]
    fn wreath_for_the_cube() {
        let r = parse(&wreath_demo(3, 50, 1));
        assert_eq!(r["fixing_group_order"], 6);
        assert_eq!(r["law_holds"], true);
        assert_eq!(r["nonsolvable"], false);
        let r = parse(&wreath_demo(9, 1, 1));
        assert!(r["error"].is_string());
    }
}
