use std::fmt::Write as _;

use super::Presentation;

/// Canonical text for a presentation.
///
/// Relations appear in declaration order, one per line, with terms in
/// length-lex path order and explicit `+`/`-` between terms.
pub fn serialize(p: &Presentation) -> String {
    let q = p.quiver();
    let mut out = String::new();
    let _ = writeln!(out, "algebra {}", p.name());
    let _ = writeln!(out, "vertices: {}", q.vertices().join(", "));
    let arrows: Vec<String> = q
        .arrows()
        .iter()
        .map(|a| format!("{}:{}->{}", a.name, q.vertices()[a.source], q.vertices()[a.target]))
        .collect();
    let _ = writeln!(out, "arrows: {}", arrows.join(", "));
    out.push_str("relations:\n");
    for i in 0..p.relations().len() {
        let _ = writeln!(out, "  {};", p.relation_string(i));
    }
    let _ = writeln!(out, "field: {}", p.field());
    out
}
