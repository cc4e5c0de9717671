//! The finite-dimensional quotient `A = kQ/I` of a path algebra.
//!
//! [`build_quotient`] completes the relations into a rewriting system inside
//! `kQ/J^(L+1)` for `L = 2, 3, ...` and stops at the first `L` (no smaller
//! than the longest relation) where no irreducible path of length `L` is
//! left. At that point `J^L` lies in `I + J^(L+1)`; for an admissible ideal
//! this is exactly `kQ/I`. The irreducible paths form the basis: trivial
//! paths first, then paths chosen greedily in length-lex order, one radical
//! layer at a time.

mod rewrite;

use std::collections::HashMap;

use crate::field::{Field, Ring};
use crate::linalg::{span_basis, Matrix};
use crate::presentation::{Element, Path, Presentation, Quiver};

use rewrite::{Poly, Rewriter, Word};

pub const DEFAULT_MAX_LEN: usize = 50;

/// Largest basis considered before giving up on finite-dimensionality.
pub const MAX_DIMENSION: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("quotient is not finite-dimensional within path length {max_len}{}", detail_suffix(.detail))]
    NotFiniteWithinBound { max_len: usize, detail: Option<String> },
    #[error("relation {index} contains a path of length < 2; the ideal is not admissible")]
    NotAdmissible { index: usize },
    #[error("path of length {len} exceeds the truncation length {limit}")]
    TruncationExceeded { len: usize, limit: usize },
}

fn detail_suffix(detail: &Option<String>) -> String {
    detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default()
}

/// Evidence that the computed basis is closed under multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StabilizationCertificate {
    pub stabilized_at: usize,
    /// Every product `arrow * basis path` and `basis path * arrow` reduces
    /// into the span of the basis.
    pub verified_closure: bool,
}

#[derive(Debug, Clone)]
pub struct QuotientAlgebra<F> {
    presentation: Presentation,
    relations: Vec<Element<F>>,
    rewriter: Rewriter<F>,
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
    /// `table[i * dim + j]` = coordinates of `basis[i] * basis[j]`.
    table: Vec<Vec<(usize, F)>>,
    radical_dims: Vec<usize>,
    certificate: StabilizationCertificate,
}

fn arrow_words<F: Field>(rel: &Element<F>) -> Vec<(Vec<usize>, F)> {
    rel.terms().map(|(p, c)| (p.arrows().to_vec(), c.clone())).collect()
}

/// Builds `kQ/I` over the field `F`, mapping the integer relation
/// coefficients into `F`.
pub fn build_quotient<F: Field>(
    p: &Presentation,
    max_len: usize,
) -> Result<QuotientAlgebra<F>, AlgebraError> {
    for (i, rel) in p.relations().iter().enumerate() {
        if rel.min_path_len().unwrap_or(0) < 2 {
            return Err(AlgebraError::NotAdmissible { index: i + 1 });
        }
    }
    let relations: Vec<Element<F>> =
        p.relations().iter().map(|r| r.map_coefficients(|&c| F::from_i64(c))).collect();
    let words: Vec<Vec<(Vec<usize>, F)>> = relations.iter().map(arrow_words).collect();
    let longest = relations.iter().filter_map(Element::max_path_len).max().unwrap_or(0);
    let quiver = p.quiver();

    for len in 2..=max_len.max(2) {
        let rewriter = Rewriter::complete(&words, len);
        let basis = normal_paths(quiver, &rewriter).ok_or_else(|| {
            AlgebraError::NotFiniteWithinBound {
                max_len,
                detail: Some(format!("more than {MAX_DIMENSION} basis paths at length {len}")),
            }
        })?;
        let top = basis.last().map_or(0, Path::len);
        if top < len && len >= longest {
            return Ok(QuotientAlgebra::assemble(p.clone(), relations, rewriter, basis, len));
        }
    }
    Err(AlgebraError::NotFiniteWithinBound { max_len, detail: None })
}

/// All irreducible paths of length `<= max_len`, in length-lex order.
fn normal_paths<F: Field>(q: &Quiver, rw: &Rewriter<F>) -> Option<Vec<Path>> {
    let mut layer: Vec<Path> = (0..q.num_vertices()).map(Path::trivial).collect();
    let mut all = layer.clone();
    for _ in 0..rw.max_len() {
        let mut next = Vec::new();
        for p in &layer {
            for (a, arrow) in q.arrows().iter().enumerate() {
                if arrow.source != p.target() {
                    continue;
                }
                let mut w = p.arrows().to_vec();
                w.push(a);
                if !rw.has_lead_suffix(&w) {
                    let source = if p.is_trivial() { arrow.source } else { p.source() };
                    next.push(Path::from_parts(source, arrow.target, w));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        all.extend(next.iter().cloned());
        if all.len() > MAX_DIMENSION {
            return None;
        }
        layer = next;
    }
    all.sort();
    Some(all)
}

impl<F: Field> QuotientAlgebra<F> {
    fn assemble(
        presentation: Presentation,
        relations: Vec<Element<F>>,
        rewriter: Rewriter<F>,
        basis: Vec<Path>,
        len: usize,
    ) -> Self {
        let index: HashMap<Path, usize> =
            basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut alg = QuotientAlgebra {
            presentation,
            relations,
            rewriter,
            basis,
            index,
            table: Vec::new(),
            radical_dims: Vec::new(),
            certificate: StabilizationCertificate { stabilized_at: len, verified_closure: false },
        };
        let dim = alg.basis.len();
        let mut table = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                table.push(match alg.basis[i].concat(&alg.basis[j]) {
                    Some(p) => alg.reduce_path_coords(&p),
                    None => Vec::new(),
                });
            }
        }
        alg.table = table;
        alg.certificate.verified_closure = alg.check_closure();
        alg.radical_dims = alg.compute_radical_dims();
        alg
    }

    fn word_path(&self, w: &[usize]) -> Path {
        self.presentation.quiver().path_from_arrows(w.to_vec()).expect("rewriting keeps paths")
    }

    /// Coordinates of a single path; paths longer than the truncation
    /// length lie in `J^L` and are zero.
    fn reduce_path_coords(&self, p: &Path) -> Vec<(usize, F)> {
        if p.is_trivial() {
            return vec![(self.index[p], F::one())];
        }
        let reduced: Poly<F> = self.rewriter.reduce_word(p.arrows());
        let mut out: Vec<(usize, F)> = reduced
            .into_iter()
            .map(|(Word(w), c)| (self.index[&self.word_path(&w)], c))
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    fn check_closure(&self) -> bool {
        let q = self.presentation.quiver();
        let limit = self.truncation_length();
        (0..q.num_arrows()).all(|a| {
            let arrow = q.arrow_path(a);
            self.basis.iter().all(|b| {
                [b.concat(&arrow), arrow.concat(b)].into_iter().flatten().all(|p| {
                    p.len() > limit
                        || self
                            .rewriter
                            .reduce_word(p.arrows())
                            .keys()
                            .all(|Word(w)| w.len() < limit && self.index.contains_key(&self.word_path(w)))
                })
            })
        })
    }

    fn compute_radical_dims(&self) -> Vec<usize> {
        let dim = self.dim();
        let arrows: Vec<Vec<F>> = (0..self.presentation.quiver().num_arrows())
            .map(|a| self.coords_of_path(&self.presentation.quiver().arrow_path(a)))
            .collect();
        let mut dims = Vec::new();
        // rad^0 = A, rad^(i+1) = span { y * a : y in rad^i, a an arrow }
        let mut current: Vec<Vec<F>> = (0..dim).map(|i| unit(dim, i)).collect();
        for _ in 0..=dim {
            if current.is_empty() {
                break;
            }
            let products: Vec<Vec<F>> = current
                .iter()
                .flat_map(|y| arrows.iter().map(move |a| (y, a)))
                .map(|(y, a)| self.mul_coords(y, a))
                .filter(|v| v.iter().any(|x| !x.is_zero()))
                .collect();
            let next = span_basis(&products, dim);
            dims.push(current.len() - next.len());
            current = next;
        }
        dims
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn quiver(&self) -> &Quiver {
        self.presentation.quiver()
    }

    /// The relations with coefficients in `F`.
    pub fn relations(&self) -> &[Element<F>] {
        &self.relations
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn truncation_length(&self) -> usize {
        self.rewriter.max_len()
    }

    pub fn certificate(&self) -> StabilizationCertificate {
        self.certificate
    }

    /// Dimensions of `rad^i / rad^(i+1)` for `i = 0, 1, ...`.
    pub fn radical_series(&self) -> &[usize] {
        &self.radical_dims
    }

    /// Coordinates of `basis[i] * basis[j]`.
    pub fn structure_constants(&self, i: usize, j: usize) -> &[(usize, F)] {
        &self.table[i * self.dim() + j]
    }

    pub fn identity(&self) -> Element<F> {
        Element::from_terms(
            (0..self.quiver().num_vertices()).map(|v| (Path::trivial(v), F::one())),
        )
    }

    /// The unique representative of `x` in the span of the basis.
    pub fn normal_form(&self, x: &Element<F>) -> Result<Element<F>, AlgebraError> {
        let limit = self.truncation_length();
        if let Some(p) = x.paths().find(|p| p.len() > limit) {
            return Err(AlgebraError::TruncationExceeded { len: p.len(), limit });
        }
        Ok(self.element(&self.coords(x)))
    }

    pub fn reduces_to_zero(&self, x: &Element<F>) -> Result<bool, AlgebraError> {
        Ok(self.normal_form(x)?.is_zero())
    }

    pub fn multiply(&self, x: &Element<F>, y: &Element<F>) -> Element<F> {
        self.element(&self.mul_coords(&self.coords(x), &self.coords(y)))
    }

    /// Coordinates in the basis of any element; paths beyond the truncation
    /// length are zero in `A`.
    pub fn coords(&self, x: &Element<F>) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        for (p, c) in x.terms() {
            for (i, d) in self.path_coords(p) {
                v[i] = v[i].clone() + c.clone() * d;
            }
        }
        v
    }

    pub fn coords_of_path(&self, p: &Path) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        for (i, d) in self.path_coords(p) {
            v[i] = d;
        }
        v
    }

    fn path_coords(&self, p: &Path) -> Vec<(usize, F)> {
        match self.index.get(p) {
            Some(&i) => vec![(i, F::one())],
            None => self.reduce_path_coords(p),
        }
    }

    pub fn element(&self, v: &[F]) -> Element<F> {
        Element::from_terms(
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.basis[i].clone(), c.clone())),
        )
    }

    /// Product of two coordinate vectors.
    pub fn mul_coords(&self, x: &[F], y: &[F]) -> Vec<F> {
        let dim = self.dim();
        let mut out = vec![F::zero(); dim];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.clone() * b.clone();
                for (k, c) in &self.table[i * dim + j] {
                    out[*k] = out[*k].clone() + ab.clone() * c.clone();
                }
            }
        }
        out
    }

    /// Matrix of left multiplication `y -> x * y`.
    pub fn left_mul_matrix(&self, x: &[F]) -> Matrix<F> {
        let dim = self.dim();
        let cols: Vec<Vec<F>> = (0..dim).map(|j| self.mul_coords(x, &unit(dim, j))).collect();
        Matrix::from_columns(dim, &cols)
    }

    /// Matrix of right multiplication `y -> y * x`.
    pub fn right_mul_matrix(&self, x: &[F]) -> Matrix<F> {
        let dim = self.dim();
        let cols: Vec<Vec<F>> = (0..dim).map(|j| self.mul_coords(&unit(dim, j), x)).collect();
        Matrix::from_columns(dim, &cols)
    }

    /// A basis of the two-sided socle `{ x : x*a = 0 = a*x for every arrow a }`.
    pub fn socle(&self) -> Vec<Element<F>> {
        let dim = self.dim();
        let q = self.quiver();
        let mut rows: Vec<Vec<F>> = Vec::new();
        for a in 0..q.num_arrows() {
            let av = self.coords_of_path(&q.arrow_path(a));
            for m in [self.right_mul_matrix(&av), self.left_mul_matrix(&av)] {
                for i in 0..dim {
                    rows.push((0..dim).map(|j| m[(i, j)].clone()).collect());
                }
            }
        }
        if rows.is_empty() {
            return (0..dim).map(|i| self.element(&unit(dim, i))).collect();
        }
        Matrix::from_rows(&rows).kernel().iter().map(|v| self.element(v)).collect()
    }
}

pub(crate) fn unit<F: Ring>(dim: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); dim];
    v[i] = F::one();
    v
}

/// Whether the quiver's underlying undirected graph is connected.
pub fn is_connected(q: &Quiver) -> bool {
    q.is_connected()
}
