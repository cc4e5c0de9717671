//! Built-in families of presentations.

use std::fmt;
use std::str::FromStr;

use super::{Element, Path, Presentation, Quiver};
use crate::field::FieldKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `Q(1E)^r`: one vertex, loops `a`, `b` with
    /// `a^2 = (b*a)^(r-1)*b`, `b^2 = (a*b)^(r-1)*a`, `(a*b)^r = (b*a)^r`,
    /// `(a*b)^r*a = 0`. Requires `r >= 2`.
    Q1e,
    /// One vertex, loops `a`, `b` with `a^2 = b^2 = 0`, `(a*b)^r = (b*a)^r`.
    TwoLoop,
    /// `k[x]/(x^n)`.
    TruncatedPoly,
    /// The linearly oriented `A_n` quiver without relations.
    LinearAn,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::Q1e, Family::TwoLoop, Family::TruncatedPoly, Family::LinearAn];

    pub fn name(self) -> &'static str {
        match self {
            Family::Q1e => "q1e",
            Family::TwoLoop => "two_loop",
            Family::TruncatedPoly => "truncated_poly",
            Family::LinearAn => "linear_an",
        }
    }

    fn min_param(self) -> i64 {
        match self {
            Family::Q1e | Family::TruncatedPoly | Family::LinearAn => 2,
            Family::TwoLoop => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuiltinError {
    #[error("unknown family `{0}` (expected q1e, two_loop, truncated_poly or linear_an)")]
    UnknownFamily(String),
    #[error("{family} takes exactly one parameter, got {got}")]
    Arity { family: Family, got: usize },
    #[error("{family} requires parameter >= {min}, got {got}")]
    InvalidParameter { family: Family, min: i64, got: i64 },
    #[error("malformed builtin `{0}` (expected name:param)")]
    Malformed(String),
}

impl FromStr for Family {
    type Err = BuiltinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| BuiltinError::UnknownFamily(s.to_string()))
    }
}

// Above these sizes the presentations stop being desk-scale.
const MAX_PARAM: i64 = 64;

/// Builds a member of a built-in family over the rationals.
pub fn builtin(family: Family, params: &[i64]) -> Result<Presentation, BuiltinError> {
    let &[n] = params else {
        return Err(BuiltinError::Arity { family, got: params.len() });
    };
    let min = family.min_param();
    if n < min || n > MAX_PARAM {
        return Err(BuiltinError::InvalidParameter { family, min, got: n });
    }
    let n = n as usize;
    let name = format!("{}_{n}", family.name());
    let p = match family {
        Family::Q1e => {
            let q = two_loops();
            let (a, b) = (0, 1);
            let rels = vec![
                word(&[a, a]).sub(&word(&alternating(b, a, 2 * n - 1))),
                word(&[b, b]).sub(&word(&alternating(a, b, 2 * n - 1))),
                word(&alternating(a, b, 2 * n)).sub(&word(&alternating(b, a, 2 * n))),
                word(&alternating(a, b, 2 * n + 1)),
            ];
            Presentation::new(name, q, rels, FieldKind::Q)
        }
        Family::TwoLoop => {
            let q = two_loops();
            let (a, b) = (0, 1);
            let rels = vec![
                word(&[a, a]),
                word(&[b, b]),
                word(&alternating(a, b, 2 * n)).sub(&word(&alternating(b, a, 2 * n))),
            ];
            Presentation::new(name, q, rels, FieldKind::Q)
        }
        Family::TruncatedPoly => {
            let q = Quiver::new(["e"], [("x", "e", "e")]).expect("valid quiver");
            Presentation::new(name, q, vec![word(&vec![0; n])], FieldKind::Q)
        }
        Family::LinearAn => {
            let vertices: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
            let arrows: Vec<(String, String, String)> = (1..n)
                .map(|i| (format!("a{i}"), format!("v{i}"), format!("v{}", i + 1)))
                .collect();
            let q = Quiver::new(vertices, arrows).expect("valid quiver");
            Presentation::new(name, q, Vec::new(), FieldKind::Q)
        }
    };
    Ok(p.expect("builtin relations are admissible"))
}

/// Parses `name:p1,p2,...` (as used by `--builtin`) and builds the family.
pub fn parse_builtin_spec(spec: &str) -> Result<Presentation, BuiltinError> {
    let (name, params) =
        spec.split_once(':').ok_or_else(|| BuiltinError::Malformed(spec.to_string()))?;
    let family: Family = name.trim().parse()?;
    let params = params
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| BuiltinError::Malformed(spec.to_string()))?;
    builtin(family, &params)
}

fn two_loops() -> Quiver {
    Quiver::new(["e"], [("a", "e", "e"), ("b", "e", "e")]).expect("valid quiver")
}

/// `first, second, first, ...` of the given length.
fn alternating(first: usize, second: usize, len: usize) -> Vec<usize> {
    (0..len).map(|i| if i % 2 == 0 { first } else { second }).collect()
}

// One-vertex words only: every arrow is a loop at vertex 0.
fn word(arrows: &[usize]) -> Element<i64> {
    Element::from_path(Path::from_parts(0, 0, arrows.to_vec()))
}
