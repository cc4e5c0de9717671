//! Arrow gradings: integer degrees on arrows (vertices in degree 0) that
//! make the relation ideal homogeneous, and their classes up to the shift
//! action of graded Morita equivalence.
//!
//! A vertex-degree vector `d` shifts an assignment by
//! `g(a) -> g(a) + d(target a) - d(source a)`. Parallel paths share their
//! endpoints, so a shift moves every term of a relation by the same amount:
//! the shift sublattice always lies inside the kernel lattice.

mod snf;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{build_quotient, AlgebraError, QuotientAlgebra};
use crate::field::Field;
use crate::presentation::{Element, Path, Presentation, Quiver};

pub use snf::{smith_normal_form, IntMatrix, SnfResult};

/// Integer degree of every arrow, indexed by arrow.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DegreeAssignment(Vec<i64>);

impl DegreeAssignment {
    pub fn new(degrees: Vec<i64>) -> Self {
        DegreeAssignment(degrees)
    }

    pub fn trivial(num_arrows: usize) -> Self {
        DegreeAssignment(vec![0; num_arrows])
    }

    pub fn degrees(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self, arrow: usize) -> i64 {
        self.0[arrow]
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn path_degree(&self, p: &Path) -> i64 {
        p.arrows().iter().map(|&a| self.0[a]).sum()
    }
}

impl fmt::Display for DegreeAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// One row per (relation, term >= 2): arrow counts of the first term minus
/// arrow counts of that term. `M * g = 0` exactly when every relation has
/// all its terms in one degree under `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityMatrix {
    /// `(relation index, term index)`, both 0-based, terms in length-lex order.
    pub labels: Vec<(usize, usize)>,
    pub matrix: IntMatrix,
}

pub fn homogeneity_matrix(p: &Presentation) -> HomogeneityMatrix {
    let n = p.quiver().num_arrows();
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for (r, rel) in p.relations().iter().enumerate() {
        let mut paths = rel.paths();
        let Some(first) = paths.next() else { continue };
        let base = first.arrow_counts(n);
        for (t, path) in paths.enumerate() {
            let counts = path.arrow_counts(n);
            rows.push(base.iter().zip(&counts).map(|(a, b)| a - b).collect());
            labels.push((r, t + 1));
        }
    }
    HomogeneityMatrix { labels, matrix: IntMatrix::from_rows(n, &rows) }
}

/// Rank and torsion of `kernel / (kernel ∩ shift)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassInvariants {
    pub rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingLattice {
    pub kernel_basis: Vec<DegreeAssignment>,
    pub rank: usize,
    pub shift_basis: Vec<DegreeAssignment>,
    pub class_invariants: ClassInvariants,
    /// Coordinates of the shift generators in the kernel basis, and their
    /// Smith form; used to decide shift-sublattice membership.
    shift_coords: SnfResult,
    kernel_snf: SnfResult,
}

impl GradingLattice {
    /// Whether `g` lies in the kernel lattice.
    pub fn contains(&self, g: &DegreeAssignment) -> bool {
        self.kernel_coordinates(g).is_some()
    }

    /// Coordinates of `g` in `kernel_basis`, if `g` lies in the kernel.
    pub fn kernel_coordinates(&self, g: &DegreeAssignment) -> Option<Vec<i64>> {
        let y = self.kernel_snf.v_inv.mul_vec(g.degrees());
        let r = self.kernel_snf.rank();
        y[..r].iter().all(|&x| x == 0).then(|| y[r..].to_vec())
    }

    /// Whether `g` is a shift of the trivial grading.
    pub fn in_shift_sublattice(&self, g: &DegreeAssignment) -> bool {
        let Some(c) = self.kernel_coordinates(g) else {
            return false;
        };
        // c in column space of C = u_inv * d * v_inv  <=>  u*c in d * Z^n
        let uc = self.shift_coords.u.mul_vec(&c);
        let factors = self.shift_coords.invariant_factors();
        uc.iter().enumerate().all(|(i, &x)| match factors.get(i) {
            Some(&d) => x % d == 0,
            None => x == 0,
        })
    }

    /// First kernel basis vector outside the shift sublattice.
    pub fn witness(&self) -> Option<&DegreeAssignment> {
        self.kernel_basis.iter().find(|g| !self.in_shift_sublattice(g))
    }
}

/// `s_v(a) = [target a = v] - [source a = v]`, the shift by the indicator
/// of vertex `v`.
fn shift_generator(q: &Quiver, v: usize) -> Vec<i64> {
    q.arrows()
        .iter()
        .map(|a| i64::from(a.target == v) - i64::from(a.source == v))
        .collect()
}

pub fn grading_lattice(p: &Presentation) -> GradingLattice {
    let q = p.quiver();
    let m = homogeneity_matrix(p);
    let kernel_snf = smith_normal_form(&m.matrix);
    let r = kernel_snf.rank();
    let kernel: Vec<Vec<i64>> = kernel_snf.kernel_basis();
    let k = kernel.len();

    let coords: Vec<Vec<i64>> = (0..q.num_vertices())
        .map(|v| {
            let y = kernel_snf.v_inv.mul_vec(&shift_generator(q, v));
            debug_assert!(y[..r].iter().all(|&x| x == 0), "shift left the kernel");
            y[r..].to_vec()
        })
        .collect();
    let c = IntMatrix::from_columns(k, &coords);
    let shift_coords = smith_normal_form(&c);
    let factors = shift_coords.invariant_factors();

    let kernel_matrix = IntMatrix::from_columns(q.num_arrows(), &kernel);
    let shift_basis = factors
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let col: Vec<i64> = shift_coords.u_inv.column(i).iter().map(|x| x * d).collect();
            normalize_sign(kernel_matrix.mul_vec(&col))
        })
        .map(DegreeAssignment)
        .collect();

    GradingLattice {
        kernel_basis: kernel.into_iter().map(DegreeAssignment).collect(),
        rank: k,
        shift_basis,
        class_invariants: ClassInvariants {
            rank: k - factors.len(),
            torsion: factors.iter().copied().filter(|&d| d > 1).collect(),
        },
        shift_coords,
        kernel_snf,
    }
}

fn normalize_sign(mut v: Vec<i64>) -> Vec<i64> {
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Shifts `g` by the vertex degrees `d`: `a -> g(a) + d(target) - d(source)`.
pub fn apply_shift(q: &Quiver, g: &DegreeAssignment, d: &[i64]) -> DegreeAssignment {
    assert_eq!(d.len(), q.num_vertices(), "one shift per vertex");
    DegreeAssignment(
        q.arrows()
            .iter()
            .zip(g.degrees())
            .map(|(a, &deg)| deg + d[a.target] - d[a.source])
            .collect(),
    )
}

/// For each relation, whether all of its terms have the same degree.
pub fn is_relation_homogeneous(p: &Presentation, g: &DegreeAssignment) -> Vec<bool> {
    p.relations()
        .iter()
        .map(|rel| {
            let mut degrees = rel.paths().map(|path| g.path_degree(path));
            let first = degrees.next();
            degrees.all(|d| Some(d) == first)
        })
        .collect()
}

/// Splits each relation into homogeneous components under `g` and checks
/// that every component lies in the ideal.
pub fn ideal_is_homogeneous<F: Field>(
    a: &QuotientAlgebra<F>,
    g: &DegreeAssignment,
) -> Result<bool, AlgebraError> {
    for rel in a.relations() {
        let mut components: BTreeMap<i64, Element<F>> = BTreeMap::new();
        for (path, c) in rel.terms() {
            components.entry(g.path_degree(path)).or_insert_with(Element::zero).add_term(path.clone(), c.clone());
        }
        for component in components.values() {
            if !a.reduces_to_zero(component)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedStructure {
    /// Degree of each basis path.
    pub degrees: Vec<i64>,
    /// Number of basis paths in each degree.
    pub graded_dims: BTreeMap<i64, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("grading violation: {left} * {right} has a component {output} of degree {found}, expected {expected}")]
pub struct GradingViolation {
    pub left: String,
    pub right: String,
    pub output: String,
    pub expected: i64,
    pub found: i64,
}

/// Assigns each basis path its degree and checks `A_i A_j ⊆ A_(i+j)` on
/// every structure constant.
pub fn grade_algebra<F: Field>(
    a: &QuotientAlgebra<F>,
    g: &DegreeAssignment,
) -> Result<GradedStructure, GradingViolation> {
    let degrees: Vec<i64> = a.basis().iter().map(|p| g.path_degree(p)).collect();
    let dim = a.dim();
    for i in 0..dim {
        for j in 0..dim {
            for (k, _) in a.structure_constants(i, j) {
                if degrees[*k] != degrees[i] + degrees[j] {
                    let name = |x: usize| a.quiver().path_name(&a.basis()[x]);
                    return Err(GradingViolation {
                        left: name(i),
                        right: name(j),
                        output: name(*k),
                        expected: degrees[i] + degrees[j],
                        found: degrees[*k],
                    });
                }
            }
        }
    }
    let mut graded_dims = BTreeMap::new();
    for &d in &degrees {
        *graded_dims.entry(d).or_insert(0) += 1;
    }
    Ok(GradedStructure { degrees, graded_dims })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// One vertex and no nonzero arrow grading.
    RigidArrowGradings,
    /// Some arrow grading is not a shift of the trivial one.
    NontrivialGradingExists,
    /// Arrow gradings exist but all are shifts of the trivial grading.
    AllGradingsShiftTrivial,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::RigidArrowGradings => "rigid-arrow-gradings",
            Verdict::NontrivialGradingExists => "nontrivial-grading-exists",
            Verdict::AllGradingsShiftTrivial => "all-gradings-shift-trivial",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The arrow-grading side of the rigidity question, with the algebra built
/// over the presentation's field. Automorphism evidence
/// is gathered separately by [`crate::autos`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityVerdict {
    pub dimension: usize,
    pub connected: bool,
    pub one_vertex: bool,
    pub lattice: GradingLattice,
    pub verdict: Verdict,
    /// A grading that is not a shift of the trivial one.
    pub witness: Option<DegreeAssignment>,
    /// For connected quivers with several vertices: a nonzero grading
    /// obtained by shifting the trivial grading at one end of an arrow.
    pub shift_witness: Option<DegreeAssignment>,
}

impl RigidityVerdict {
    pub fn lattice_rank(&self) -> usize {
        self.lattice.rank
    }

    pub fn class_rank(&self) -> usize {
        self.lattice.class_invariants.rank
    }
}

pub fn rigidity_verdict(p: &Presentation, max_len: usize) -> Result<RigidityVerdict, AlgebraError> {
    let dimension = crate::with_field!(p.field(), F => build_quotient::<F>(p, max_len)?.dim());
    let q = p.quiver();
    let lattice = grading_lattice(p);
    let (verdict, witness) = if lattice.rank == 0 {
        (Verdict::RigidArrowGradings, None)
    } else if lattice.class_invariants.rank > 0 {
        (Verdict::NontrivialGradingExists, lattice.witness().cloned())
    } else {
        (Verdict::AllGradingsShiftTrivial, None)
    };
    let connected = q.is_connected();
    let shift_witness = (connected && q.num_vertices() > 1)
        .then(|| {
            q.arrows().iter().find(|a| a.source != a.target).map(|a| {
                let mut d = vec![0; q.num_vertices()];
                d[a.target] = 1;
                apply_shift(q, &DegreeAssignment::trivial(q.num_arrows()), &d)
            })
        })
        .flatten();
    Ok(RigidityVerdict {
        dimension,
        connected,
        one_vertex: q.num_vertices() == 1,
        lattice,
        verdict,
        witness,
        shift_witness,
    })
}
