//! Best-effort DOT export: one node per object, one edge per non-identity
//! morphism, weak equivalences dashed. No round trip.

use std::collections::BTreeSet;

use glutop_core::fincat::FinCategory;

pub fn category_dot(cat: &FinCategory, weq: Option<&BTreeSet<String>>) -> String {
    let mut out = String::from("digraph category {\n");
    for o in cat.objects() {
        out.push_str(&format!("  \"{o}\";\n"));
    }
    for m in cat.morphisms() {
        if cat.is_identity(&m.id) {
            continue;
        }
        let style = if weq.is_some_and(|w| w.contains(&m.id)) {
            ", style=dashed"
        } else {
            ""
        };
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"{}];\n",
            m.src, m.tgt, m.id, style
        ));
    }
    out.push_str("}\n");
    out
}
