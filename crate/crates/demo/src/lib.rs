//! Browser bindings for a few `leavitt` operations. Every function takes the
//! text formats used by the command line tool and returns printable text.

use wasm_bindgen::prelude::*;

use leavitt::format::{parse_graph, parse_matrix, print_graph};
use leavitt::groups::FieldDescriptor;
use leavitt::intlinalg::snf as smith;
use leavitt::ktheory::invariants as bundle;
use leavitt::moves::cuntz_splice as splice;

/// `key: value` lines of the invariant bundle over the named field.
#[wasm_bindgen]
pub fn invariants(graph_text: &str, field: &str) -> Result<String, String> {
  let g = parse_graph(graph_text).map_err(|e| e.to_string())?;
  let field: FieldDescriptor = field.trim().parse().map_err(|e: leavitt::Error| e.to_string())?;
  Ok(bundle(&g, field)
    .fields()
    .iter()
    .map(|(k, v)| format!("{k}: {v}\n"))
    .collect())
}

/// The graph text of the Cuntz splice at `vertex`.
#[wasm_bindgen]
pub fn cuntz_splice(graph_text: &str, vertex: &str) -> Result<String, String> {
  let g = parse_graph(graph_text).map_err(|e| e.to_string())?;
  let h = splice(&g, vertex.trim()).map_err(|e| e.to_string())?;
  Ok(print_graph(&h))
}

/// The Smith normal form diagonal as `d: ...`.
#[wasm_bindgen]
pub fn snf(matrix_text: &str) -> Result<String, String> {
  let m = parse_matrix(matrix_text).map_err(|e| e.to_string())?;
  let r = smith(&m);
  let d: Vec<String> = (0..m.rows().min(m.cols())).map(|i| r.diag(i).to_string()).collect();
  Ok(format!("d: {}\n", d.join(" ")))
}
