//! Automorphisms of `A = kQ/I` over small finite fields.
//!
//! Every candidate fixes the trivial paths and sends each arrow to a
//! combination of positive-length basis paths parallel to it. Such a choice
//! extends multiplicatively to all of `A` exactly when it kills every
//! relation; [`enumerate_automorphisms`] walks all choices, testing each
//! relation as soon as the arrows it uses have images.
//!
//! Results over `F_q` are evidence about the algebraic group of
//! automorphisms, not a proof of anything over an algebraically closed field.

use rayon::prelude::*;

use crate::algebra::{unit, AlgebraError, QuotientAlgebra};
use crate::field::{Field, FiniteField};
use crate::linalg::Matrix;
use crate::presentation::{Element, Quiver};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutosError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("expected {expected} arrow images, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("image of arrow {arrow} is not in the radical")]
    ImageNotInRadical { arrow: String },
    #[error("image of arrow {arrow} is not parallel to it")]
    ImageNotParallel { arrow: String },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("conjugation does not fix the vertex idempotents")]
    MovesIdempotents,
    #[error("candidate is not an automorphism")]
    NotAnAutomorphism,
    #[error("search space of about {estimate} arrow-image tuples exceeds the cap {cap}")]
    SearchSpaceExceeded { estimate: u128, cap: u128 },
}

/// An algebra endomorphism fixing the trivial paths, given by arrow images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismCandidate<F> {
    /// Image of each arrow, in declaration order, in normal form.
    pub images: Vec<Element<F>>,
    /// Column `j` holds the coordinates of the image of `basis[j]`.
    pub induced_matrix: Matrix<F>,
}

impl<F: Field> AutomorphismCandidate<F> {
    /// Renders the arrow images, e.g. `a -> b, b -> a`.
    pub fn describe(&self, q: &Quiver) -> String {
        q.arrows()
            .iter()
            .zip(&self.images)
            .map(|(a, x)| format!("{} -> {}", a.name, q.element_string(x)))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn is_identity(&self) -> bool {
        self.induced_matrix.is_identity()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnipotenceReport<F> {
    pub total_found: usize,
    pub all_unipotent: bool,
    /// Automorphisms that are not unipotent; empty exactly when
    /// `all_unipotent` holds.
    pub witnesses: Vec<AutomorphismCandidate<F>>,
}

#[derive(Debug, Clone)]
pub struct Enumeration<F> {
    pub automorphisms: Vec<AutomorphismCandidate<F>>,
    pub report: UnipotenceReport<F>,
    /// Size of the unpruned search space.
    pub search_space: u128,
}

/// Images of every basis path under the arrow images `images` (given as
/// coordinate vectors), as matrix columns.
fn induced_columns<F: Field>(a: &QuotientAlgebra<F>, images: &[Vec<F>]) -> Vec<Vec<F>> {
    let dim = a.dim();
    a.basis()
        .iter()
        .enumerate()
        .map(|(j, p)| {
            if p.is_trivial() {
                return unit(dim, j);
            }
            product(a, p.arrows().iter().map(|&x| &images[x]))
        })
        .collect()
}

fn product<'a, F: Field>(
    a: &QuotientAlgebra<F>,
    mut factors: impl Iterator<Item = &'a Vec<F>>,
) -> Vec<F> {
    let first = factors.next().expect("positive-length path").clone();
    factors.fold(first, |acc, x| a.mul_coords(&acc, x))
}

/// Image of relation `rel` under the arrow images.
fn relation_image<F: Field>(a: &QuotientAlgebra<F>, rel: &Element<F>, images: &[Vec<F>]) -> Vec<F> {
    let mut out = vec![F::zero(); a.dim()];
    for (p, c) in rel.terms() {
        let v = product(a, p.arrows().iter().map(|&x| &images[x]));
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() + c.clone() * x;
        }
    }
    out
}

fn from_image_coords<F: Field>(a: &QuotientAlgebra<F>, images: Vec<Vec<F>>) -> AutomorphismCandidate<F> {
    let induced_matrix = Matrix::from_columns(a.dim(), &induced_columns(a, &images));
    AutomorphismCandidate {
        images: images.iter().map(|v| a.element(v)).collect(),
        induced_matrix,
    }
}

/// Extends arrow images multiplicatively to the whole basis.
pub fn candidate_from_images<F: Field>(
    a: &QuotientAlgebra<F>,
    images: &[Element<F>],
) -> Result<AutomorphismCandidate<F>, AutosError> {
    let q = a.quiver();
    if images.len() != q.num_arrows() {
        return Err(AutosError::WrongArity { expected: q.num_arrows(), found: images.len() });
    }
    let mut coords = Vec::with_capacity(images.len());
    for (i, x) in images.iter().enumerate() {
        let arrow = &q.arrows()[i];
        let nf = a.normal_form(x)?;
        if nf.paths().any(|p| p.is_trivial()) {
            return Err(AutosError::ImageNotInRadical { arrow: arrow.name.clone() });
        }
        if nf.paths().any(|p| p.source() != arrow.source || p.target() != arrow.target) {
            return Err(AutosError::ImageNotParallel { arrow: arrow.name.clone() });
        }
        coords.push(a.coords(&nf));
    }
    Ok(from_image_coords(a, coords))
}

/// Whether every relation maps to zero.
pub fn is_homomorphism<F: Field>(c: &AutomorphismCandidate<F>, a: &QuotientAlgebra<F>) -> bool {
    let images: Vec<Vec<F>> = c.images.iter().map(|x| a.coords(x)).collect();
    a.relations().iter().all(|rel| relation_image(a, rel, &images).iter().all(F::is_zero))
}

pub fn is_invertible<F: Field>(c: &AutomorphismCandidate<F>) -> bool {
    c.induced_matrix.rank() == c.induced_matrix.rows()
}

/// Whether `(M - I)^dim = 0` for the induced matrix `M`.
///
/// Fails with [`AutosError::NotAnAutomorphism`] when `M` is singular.
pub fn is_unipotent<F: Field>(c: &AutomorphismCandidate<F>) -> Result<bool, AutosError> {
    if !is_invertible(c) {
        return Err(AutosError::NotAnAutomorphism);
    }
    Ok(matrix_is_unipotent(&c.induced_matrix))
}

/// Whether `(m - I)^n = 0` for the `n x n` matrix `m`.
pub fn matrix_is_unipotent<F: Field>(m: &Matrix<F>) -> bool {
    let n = m.rows();
    m.sub(&Matrix::identity(n)).pow(n as u32).is_zero()
}

/// `q^(number of free coefficients)`, saturating.
pub fn search_space_size<F: FiniteField>(a: &QuotientAlgebra<F>) -> u128 {
    let slots: usize = image_slots(a).iter().map(Vec::len).sum();
    let Ok(slots) = u32::try_from(slots) else {
        return u128::MAX;
    };
    (F::ORDER as u128).checked_pow(slots).unwrap_or(u128::MAX)
}

/// For each arrow, the positive-length basis paths parallel to it.
fn image_slots<F: Field>(a: &QuotientAlgebra<F>) -> Vec<Vec<usize>> {
    a.quiver()
        .arrows()
        .iter()
        .map(|arrow| {
            a.basis()
                .iter()
                .enumerate()
                .filter(|(_, p)| {
                    !p.is_trivial() && p.source() == arrow.source && p.target() == arrow.target
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect()
}

struct Search<'a, F> {
    algebra: &'a QuotientAlgebra<F>,
    slots: Vec<Vec<usize>>,
    /// Relations to test once arrow `d` has its image.
    ready: Vec<Vec<usize>>,
}

impl<F: FiniteField> Search<'_, F> {
    fn choices(&self, arrow: usize) -> u128 {
        (F::ORDER as u128).pow(self.slots[arrow].len() as u32)
    }

    fn decode(&self, arrow: usize, mut n: u128) -> Vec<F> {
        let mut v = vec![F::zero(); self.algebra.dim()];
        // first slot most significant
        for &slot in self.slots[arrow].iter().rev() {
            v[slot] = F::element((n % F::ORDER as u128) as usize);
            n /= F::ORDER as u128;
        }
        v
    }

    fn passes(&self, depth: usize, images: &[Vec<F>]) -> bool {
        let rels = self.algebra.relations();
        self.ready[depth]
            .iter()
            .all(|&r| relation_image(self.algebra, &rels[r], images).iter().all(F::is_zero))
    }

    fn extend(&self, images: &mut Vec<Vec<F>>, out: &mut Vec<AutomorphismCandidate<F>>) {
        let depth = images.len();
        if depth == self.slots.len() {
            let c = from_image_coords(self.algebra, images.clone());
            if is_invertible(&c) {
                out.push(c);
            }
            return;
        }
        for n in 0..self.choices(depth) {
            images.push(self.decode(depth, n));
            if self.passes(depth, images) {
                self.extend(images, out);
            }
            images.pop();
        }
    }

    fn search_from_first(&self, n: u128) -> Vec<AutomorphismCandidate<F>> {
        let mut images = vec![self.decode(0, n)];
        let mut out = Vec::new();
        if self.passes(0, &images) {
            self.extend(&mut images, &mut out);
        }
        out
    }
}

/// All automorphisms fixing the trivial paths, in a fixed order: arrows in
/// declaration order, each image's coefficients lexicographic over the
/// field's element indices.
///
/// `jobs` worker threads split the work by the image of the first arrow;
/// `0` uses every core and `1` runs on the calling thread. The order of the
/// result does not depend on `jobs`.
pub fn enumerate_automorphisms<F: FiniteField>(
    a: &QuotientAlgebra<F>,
    cap: u128,
    jobs: usize,
) -> Result<Enumeration<F>, AutosError> {
    let estimate = search_space_size(a);
    if estimate > cap {
        return Err(AutosError::SearchSpaceExceeded { estimate, cap });
    }
    let p = a.presentation();
    let slots = image_slots(a);
    let mut ready = vec![Vec::new(); slots.len()];
    for r in 0..p.relations().len() {
        if let Some(&last) = p.relation_arrows(r).last() {
            ready[last].push(r);
        }
    }
    let search = Search { algebra: a, slots, ready };

    let automorphisms = if search.slots.is_empty() {
        vec![from_image_coords(a, Vec::new())]
    } else if jobs == 1 {
        (0..search.choices(0)).flat_map(|n| search.search_from_first(n)).collect()
    } else {
        let run = || {
            (0..search.choices(0) as u64)
                .into_par_iter()
                .flat_map_iter(|n| search.search_from_first(u128::from(n)))
                .collect::<Vec<_>>()
        };
        if jobs == 0 {
            run()
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_or_else(|_| run(), |pool| pool.install(run))
        }
    };

    let witnesses: Vec<_> = automorphisms
        .iter()
        .filter(|c| !matrix_is_unipotent(&c.induced_matrix))
        .cloned()
        .collect();
    let report = UnipotenceReport {
        total_found: automorphisms.len(),
        all_unipotent: witnesses.is_empty(),
        witnesses,
    };
    Ok(Enumeration { automorphisms, report, search_space: estimate })
}

/// Inverse of `u` in `A`, if it exists.
pub fn inverse<F: Field>(a: &QuotientAlgebra<F>, u: &Element<F>) -> Option<Element<F>> {
    let uc = a.coords(u);
    let one = a.coords(&a.identity());
    let x = a.left_mul_matrix(&uc).solve(&one)?;
    (a.mul_coords(&x, &uc) == one).then(|| a.element(&x))
}

/// Conjugation `x -> u * x * u^-1`.
///
/// The result is checked to be a homomorphism and invertible before it is
/// returned.
pub fn inner_automorphism<F: Field>(
    a: &QuotientAlgebra<F>,
    u: &Element<F>,
) -> Result<AutomorphismCandidate<F>, AutosError> {
    let inv = inverse(a, u).ok_or(AutosError::NotInvertible)?;
    let (uc, ic) = (a.coords(u), a.coords(&inv));
    let conj = |x: &[F]| a.mul_coords(&a.mul_coords(&uc, x), &ic);
    for v in 0..a.quiver().num_vertices() {
        let e = a.coords(&Element::from_path(crate::presentation::Path::trivial(v)));
        if conj(&e) != e {
            return Err(AutosError::MovesIdempotents);
        }
    }
    let q = a.quiver();
    let images: Vec<Vec<F>> =
        (0..q.num_arrows()).map(|i| conj(&a.coords_of_path(&q.arrow_path(i)))).collect();
    let c = from_image_coords(a, images);
    let dim = a.dim();
    let direct: Vec<Vec<F>> = (0..dim).map(|j| conj(&unit(dim, j))).collect();
    if c.induced_matrix != Matrix::from_columns(dim, &direct)
        || !is_homomorphism(&c, a)
        || !is_invertible(&c)
    {
        return Err(AutosError::NotAnAutomorphism);
    }
    Ok(c)
}
