//! Quivers, paths, elements of path algebras, and presentations `kQ/I`.
//!
//! Composition is diagrammatic: in the path `a*b` the arrow `a` is traversed
//! first, so `target(a) == source(b)`. Every module in this crate follows
//! that convention.

mod builtin;
mod parse;
mod serialize;

use std::cmp::Ordering;
use std::collections::btree_map::{self, BTreeMap};
use std::collections::HashSet;
use std::fmt::Write as _;

use crate::field::{FieldKind, Ring};

pub use builtin::{builtin, parse_builtin_spec, BuiltinError, Family};
pub use parse::{parse_presentation, ParseError, ParseErrorKind};
pub use serialize::serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("arrow name `{0}` is also a vertex name")]
    ArrowShadowsVertex(String),
    #[error("unknown vertex `{vertex}` in arrow `{arrow}`")]
    UnknownVertex { arrow: String, vertex: String },
}

impl Quiver {
    /// Builds a quiver from vertex names and `(name, source, target)` triples.
    pub fn new<V, A, S>(vertices: V, arrows: A) -> Result<Self, QuiverError>
    where
        V: IntoIterator<Item = S>,
        A: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let mut arrow_names = HashSet::new();
        let mut out = Vec::new();
        for (name, source, target) in arrows {
            let (name, source, target): (String, String, String) =
                (name.into(), source.into(), target.into());
            if seen.contains(name.as_str()) {
                return Err(QuiverError::ArrowShadowsVertex(name));
            }
            if !arrow_names.insert(name.clone()) {
                return Err(QuiverError::DuplicateArrow(name));
            }
            let lookup = |v: &str| {
                vertices.iter().position(|w| w == v).ok_or_else(|| QuiverError::UnknownVertex {
                    arrow: name.clone(),
                    vertex: v.to_string(),
                })
            };
            let (s, t) = (lookup(&source)?, lookup(&target)?);
            out.push(Arrow { name, source: s, target: t });
        }
        Ok(Quiver { vertices, arrows: out })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// The path consisting of the single arrow `a`.
    pub fn arrow_path(&self, a: usize) -> Path {
        let arrow = &self.arrows[a];
        Path { source: arrow.source, target: arrow.target, arrows: vec![a] }
    }

    /// Builds a path from arrow names, checking composability.
    pub fn path(&self, names: &[&str]) -> Option<Path> {
        let mut arrows = Vec::with_capacity(names.len());
        for n in names {
            arrows.push(self.arrow_index(n)?);
        }
        self.path_from_arrows(arrows)
    }

    pub fn path_from_arrows(&self, arrows: Vec<usize>) -> Option<Path> {
        let first = self.arrows.get(*arrows.first()?)?;
        let mut at = first.target;
        for &a in &arrows[1..] {
            let arrow = self.arrows.get(a)?;
            if arrow.source != at {
                return None;
            }
            at = arrow.target;
        }
        Some(Path { source: first.source, target: at, arrows })
    }

    /// Whether the underlying undirected graph is connected.
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for a in &self.arrows {
            let (ra, rb) = (find(&mut parent, a.source), find(&mut parent, a.target));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        (1..n).all(|v| find(&mut parent, v) == root)
    }

    /// Renders a path with arrow names, e.g. `a*b*a`, or the vertex name for
    /// a trivial path.
    pub fn path_name(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return self.vertices[p.source].clone();
        }
        let mut s = String::new();
        for (i, &a) in p.arrows.iter().enumerate() {
            if i > 0 {
                s.push('*');
            }
            s.push_str(&self.arrows[a].name);
        }
        s
    }

    /// Renders an element as a signed sum, e.g. `a*a - b*a*b`.
    pub fn element_string<K: Ring>(&self, x: &Element<K>) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (p, c)) in x.terms().enumerate() {
            let name = self.path_name(p);
            let shown = c.to_string();
            let (negative, magnitude) = match shown.strip_prefix('-') {
                Some(_) => (true, -c.clone()),
                None => (false, c.clone()),
            };
            s.push_str(match (i > 0, negative) {
                (false, false) => "",
                (false, true) => "-",
                (true, false) => " + ",
                (true, true) => " - ",
            });
            if magnitude == K::one() {
                s.push_str(&name);
            } else {
                let _ = write!(s, "{magnitude}*{name}");
            }
        }
        s
    }
}

/// A path in a quiver: a trivial path at a vertex or a composable arrow word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    source: usize,
    target: usize,
    arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(vertex: usize) -> Self {
        Path { source: vertex, target: vertex, arrows: Vec::new() }
    }

    pub(crate) fn from_parts(source: usize, target: usize, arrows: Vec<usize>) -> Self {
        Path { source, target, arrows }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_parallel(&self, other: &Path) -> bool {
        self.source == other.source && self.target == other.target
    }

    /// Concatenation `self` then `other`, or `None` when not composable.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.target != other.source {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.len() + other.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&other.arrows);
        Some(Path { source: self.source, target: other.target, arrows })
    }

    /// Number of occurrences of each arrow, indexed by arrow.
    pub fn arrow_counts(&self, num_arrows: usize) -> Vec<i64> {
        let mut counts = vec![0; num_arrows];
        for &a in &self.arrows {
            counts[a] += 1;
        }
        counts
    }
}

/// Length-lex: shorter first, then arrow words lexicographically by arrow
/// index, trivial paths by vertex index.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
            .then_with(|| self.target.cmp(&other.target))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite linear combination of paths with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element<K> {
    terms: BTreeMap<Path, K>,
}

impl<K: Ring> Default for Element<K> {
    fn default() -> Self {
        Element { terms: BTreeMap::new() }
    }
}

impl<K: Ring> Element<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_path(p: Path) -> Self {
        Self::monomial(p, K::one())
    }

    pub fn monomial(p: Path, c: K) -> Self {
        let mut x = Self::zero();
        x.add_term(p, c);
        x
    }

    pub fn from_terms<I: IntoIterator<Item = (Path, K)>>(terms: I) -> Self {
        let mut x = Self::zero();
        for (p, c) in terms {
            x.add_term(p, c);
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, p: &Path) -> K {
        self.terms.get(p).cloned().unwrap_or_else(K::zero)
    }

    /// Terms in length-lex order of paths.
    pub fn terms(&self) -> btree_map::Iter<'_, Path, K> {
        self.terms.iter()
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, p: Path, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.add_term(p.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Element {
            terms: self
                .terms
                .iter()
                .map(|(p, d)| (p.clone(), d.clone() * c.clone()))
                .filter(|(_, d)| !d.is_zero())
                .collect(),
        }
    }

    /// Product in the path algebra; non-composable pairs contribute zero.
    pub fn path_product(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (p, c) in self.terms() {
            for (q, d) in other.terms() {
                if let Some(pq) = p.concat(q) {
                    out.add_term(pq, c.clone() * d.clone());
                }
            }
        }
        out
    }

    /// Maps coefficients through `f` (e.g. integers into a field), dropping
    /// terms that become zero.
    pub fn map_coefficients<L: Ring>(&self, f: impl Fn(&K) -> L) -> Element<L> {
        Element::from_terms(self.terms().map(|(p, c)| (p.clone(), f(c))))
    }

    /// Whether all paths share one source and one target.
    pub fn is_parallel(&self) -> bool {
        let mut it = self.paths();
        match it.next() {
            None => true,
            Some(first) => it.all(|p| p.is_parallel(first)),
        }
    }

    pub fn min_path_len(&self) -> Option<usize> {
        self.paths().map(Path::len).min()
    }

    pub fn max_path_len(&self) -> Option<usize> {
        self.paths().map(Path::len).max()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("relation {index} is zero")]
    ZeroRelation { index: usize },
    #[error("relation {index} contains the path `{path}` of length < 2")]
    ShortPath { index: usize, path: String },
    #[error("relation {index} mixes non-parallel paths")]
    NotParallel { index: usize },
}

/// A quiver with relations over a chosen scalar field.
///
/// Relations carry integer coefficients; they are mapped into the field
/// when the quotient algebra is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    name: String,
    quiver: Quiver,
    relations: Vec<Element<i64>>,
    field: FieldKind,
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        quiver: Quiver,
        relations: Vec<Element<i64>>,
        field: FieldKind,
    ) -> Result<Self, PresentationError> {
        for (i, rel) in relations.iter().enumerate() {
            let index = i + 1;
            if rel.is_zero() {
                return Err(PresentationError::ZeroRelation { index });
            }
            if let Some(p) = rel.paths().find(|p| p.len() < 2) {
                return Err(PresentationError::ShortPath { index, path: quiver.path_name(p) });
            }
            if !rel.is_parallel() {
                return Err(PresentationError::NotParallel { index });
            }
        }
        Ok(Presentation { name: name.into(), quiver, relations, field })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Element<i64>] {
        &self.relations
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    /// The same presentation over another field.
    pub fn with_field(&self, field: FieldKind) -> Self {
        Presentation { field, ..self.clone() }
    }

    /// The arrows occurring in relation `i`, as a sorted index list.
    pub fn relation_arrows(&self, i: usize) -> Vec<usize> {
        let mut arrows: Vec<usize> =
            self.relations[i].paths().flat_map(|p| p.arrows().iter().copied()).collect();
        arrows.sort_unstable();
        arrows.dedup();
        arrows
    }

    pub fn relation_string(&self, i: usize) -> String {
        self.quiver.element_string(&self.relations[i])
    }
}
