//! Property checks shared by the proptest suites and the acceptance gate.

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use qga::algebra::{build_quotient, QuotientAlgebra, DEFAULT_MAX_LEN};
use qga::field::{Field, FieldKind, Rational, Ring, F5};
use qga::gradings::{apply_shift, grading_lattice, homogeneity_matrix, smith_normal_form, IntMatrix};
use qga::presentation::{builtin, parse_presentation, serialize, Element, Family, Path, Presentation, Quiver};

use super::{box_kernel, rational_det, rational_is_unit, rational_rank, q, IntegerSpan};

/// Every builtin and file fixture used across the suites.
pub fn fixtures() -> Vec<Presentation> {
    let mut out = Vec::new();
    for (family, params) in [
        (Family::Q1e, &[2, 3, 4, 8][..]),
        (Family::TwoLoop, &[1, 2, 3]),
        (Family::TruncatedPoly, &[2, 3, 4]),
        (Family::LinearAn, &[2, 3, 4]),
    ] {
        for &n in params {
            out.push(builtin(family, &[n]).unwrap());
        }
    }
    for file in ["commutative_square.alg", "two_cycle.alg", "cusp.alg", "exterior.alg"] {
        out.push(parse_presentation(&super::fixture(file)).unwrap());
    }
    out
}

pub fn fixture_algebras<F: Field>() -> Vec<QuotientAlgebra<F>> {
    fixtures().iter().map(|p| build_quotient(p, DEFAULT_MAX_LEN).unwrap()).collect()
}

pub fn arb_matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(rows, cols)| {
        (Just(cols), prop::collection::vec(prop::collection::vec(-9i64..=9, cols), rows))
    })
}

fn rows_of(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// `U*M*V = D`, `U`, `V` unimodular with the tracked inverses, `D` diagonal
/// with a divisibility chain, and the kernel basis a Z-basis of every
/// solution in the box `[-4, 4]^cols`.
pub fn snf_identities(cols: usize, rows: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let m = IntMatrix::from_rows(cols, rows);
    let s = smith_normal_form(&m);
    prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
    for (x, x_inv) in [(&s.u, &s.u_inv), (&s.v, &s.v_inv)] {
        prop_assert!(rational_is_unit(&rational_det(&rows_of(x))));
        prop_assert_eq!(x.mul(x_inv), IntMatrix::identity(x.rows()));
    }
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j {
                prop_assert_eq!(s.d[(i, j)], 0);
            }
        }
    }
    let factors = s.invariant_factors();
    prop_assert!(factors.iter().all(|&d| d > 0));
    for w in factors.windows(2) {
        prop_assert_eq!(w[1] % w[0], 0);
    }
    let rank = rational_rank(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect());
    prop_assert_eq!(factors.len(), rank);

    let kernel = s.kernel_basis();
    prop_assert_eq!(kernel.len(), cols - rank);
    for k in &kernel {
        prop_assert!(m.mul_vec(k).iter().all(|&x| x == 0));
    }
    let span = IntegerSpan::new(&kernel);
    for v in box_kernel(rows, cols, 4) {
        prop_assert!(span.contains(&v), "{:?} not in the kernel lattice", v);
    }
    Ok(())
}

pub fn arb_coefficients() -> impl Strategy<Value = (usize, Vec<u8>)> {
    (0usize..64, prop::collection::vec(0u8..5, 3 * 64))
}

/// `(x*y)*z = x*(y*z)` for random elements over `F5`.
pub fn associativity_random(
    algebras: &[QuotientAlgebra<F5>],
    pick: usize,
    coeffs: &[u8],
) -> Result<(), TestCaseError> {
    let a = &algebras[pick % algebras.len()];
    let dim = a.dim();
    let el = |k: usize| -> Vec<F5> { coeffs[k * dim..(k + 1) * dim].iter().map(|&c| F5::new(c.into())).collect() };
    let (x, y, z) = (el(0), el(1), el(2));
    let left = a.mul_coords(&a.mul_coords(&x, &y), &z);
    let right = a.mul_coords(&x, &a.mul_coords(&y, &z));
    prop_assert_eq!(left, right);
    Ok(())
}

/// `(b_i*b_j)*b_k = b_i*(b_j*b_k)` on every basis triple, from the sparse
/// structure constants.
pub fn associativity_exhaustive<F: Field>(a: &QuotientAlgebra<F>) -> Result<(), String> {
    let dim = a.dim();
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let mut left: BTreeMap<usize, F> = BTreeMap::new();
                for (s, c) in a.structure_constants(i, j) {
                    for (t, d) in a.structure_constants(*s, k) {
                        let e = left.entry(*t).or_insert_with(F::zero);
                        *e = e.clone() + c.clone() * d.clone();
                    }
                }
                let mut right: BTreeMap<usize, F> = BTreeMap::new();
                for (s, c) in a.structure_constants(j, k) {
                    for (t, d) in a.structure_constants(i, *s) {
                        let e = right.entry(*t).or_insert_with(F::zero);
                        *e = e.clone() + c.clone() * d.clone();
                    }
                }
                left.retain(|_, c| !c.is_zero());
                right.retain(|_, c| !c.is_zero());
                if left != right {
                    return Err(format!("{}: basis triple ({i}, {j}, {k})", a.presentation().name()));
                }
            }
        }
    }
    Ok(())
}

pub fn arb_path_element() -> impl Strategy<Value = (usize, Vec<(Vec<u8>, i64)>)> {
    (0usize..64, prop::collection::vec((prop::collection::vec(0u8..8, 0..=6), -3i64..=3), 1..=6))
}

/// Builds the element `sum c * word` of `kQ`, dropping non-composable words.
fn path_element(q: &Quiver, terms: &[(Vec<u8>, i64)], max_len: usize) -> Element<Rational> {
    let mut x = Element::zero();
    for (w, c) in terms {
        let arrows: Vec<usize> = w.iter().take(max_len).map(|&a| a as usize % q.num_arrows().max(1)).collect();
        let path = if q.num_arrows() == 0 || arrows.is_empty() {
            Some(Path::trivial(0))
        } else {
            q.path_from_arrows(arrows)
        };
        if let Some(p) = path {
            x.add_term(p, Rational::from_i64(*c));
        }
    }
    x
}

/// `nf(nf(x)) = nf(x)` and `x - nf(x)` lies in the ideal.
pub fn normal_form_idempotent(
    algebras: &[QuotientAlgebra<Rational>],
    pick: usize,
    terms: &[(Vec<u8>, i64)],
) -> Result<(), TestCaseError> {
    let a = &algebras[pick % algebras.len()];
    let x = path_element(a.quiver(), terms, a.truncation_length());
    let nf = a.normal_form(&x).unwrap();
    prop_assert_eq!(a.normal_form(&nf).unwrap(), nf.clone());
    prop_assert!(nf.paths().all(|p| a.basis_index(p).is_some()));
    prop_assert!(a.reduces_to_zero(&x.sub(&nf)).unwrap());
    Ok(())
}

/// Random presentations on up to three vertices with relations built from
/// parallel paths of length 2 or 3.
pub fn arb_presentation() -> impl Strategy<Value = Presentation> {
    (
        1usize..=3,
        prop::collection::vec((0usize..3, 0usize..3), 1..=4),
        prop::collection::vec((any::<u16>(), any::<u16>(), prop::collection::vec(-3i64..=3, 4)), 0..=3),
        0usize..6,
    )
        .prop_filter_map("not a valid presentation", |(nv, arrows, rels, field)| {
            random_presentation(nv, &arrows, &rels, FieldKind::ALL[field])
        })
}

fn random_presentation(
    nv: usize,
    arrows: &[(usize, usize)],
    rels: &[(u16, u16, Vec<i64>)],
    field: FieldKind,
) -> Option<Presentation> {
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let arrow_specs: Vec<(String, String, String)> = arrows
        .iter()
        .enumerate()
        .map(|(i, &(s, t))| (format!("a{i}"), vertices[s % nv].clone(), vertices[t % nv].clone()))
        .collect();
    let q = Quiver::new(vertices.clone(), arrow_specs).ok()?;

    let mut groups: BTreeMap<(usize, usize), Vec<Path>> = BTreeMap::new();
    let n = q.num_arrows();
    for len in 2..=3u32 {
        for code in 0..n.pow(len) {
            let word: Vec<usize> = (0..len).map(|k| code / n.pow(k) % n).collect();
            if let Some(p) = q.path_from_arrows(word) {
                groups.entry((p.source(), p.target())).or_default().push(p);
            }
        }
    }
    let groups: Vec<Vec<Path>> = groups.into_values().collect();
    let mut relations = Vec::new();
    if !groups.is_empty() {
        for (g, mask, coeffs) in rels {
            let group = &groups[*g as usize % groups.len()];
            let mut rel = Element::zero();
            for (k, p) in group.iter().take(4).enumerate() {
                if mask >> k & 1 == 1 {
                    let c = if coeffs[k] == 0 { 1 } else { coeffs[k] };
                    rel.add_term(p.clone(), c);
                }
            }
            if rel.is_zero() {
                rel.add_term(group[0].clone(), 1);
            }
            relations.push(rel);
        }
    }
    Presentation::new("random", q, relations, field).ok()
}

fn times(row: &[i64], v: &[i64]) -> i64 {
    row.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Kernel soundness and shift invariance: `M*g = 0` for every kernel basis
/// vector, every box solution lies in the kernel lattice, and
/// `M*(g + s_d) = 0` for every shift `d`.
pub fn kernel_shift_invariance(p: &Presentation, d: &[i64]) -> Result<(), TestCaseError> {
    let q = p.quiver();
    let m = homogeneity_matrix(p).matrix;
    let rows: Vec<Vec<i64>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let lattice = grading_lattice(p);
    let d: Vec<i64> = d.iter().copied().cycle().take(q.num_vertices()).collect();
    let kernel: Vec<Vec<i64>> = lattice.kernel_basis.iter().map(|g| g.degrees().to_vec()).collect();
    for g in &lattice.kernel_basis {
        prop_assert!(rows.iter().all(|r| times(r, g.degrees()) == 0));
        let shifted = apply_shift(q, g, &d);
        prop_assert!(rows.iter().all(|r| times(r, shifted.degrees()) == 0));
        if q.num_vertices() == 1 {
            prop_assert_eq!(&shifted, g);
        }
    }
    let span = IntegerSpan::new(&kernel);
    for v in box_kernel(&rows, q.num_arrows(), 3) {
        prop_assert!(span.contains(&v), "{:?} not in the kernel lattice", v);
    }
    Ok(())
}

/// Serializing and parsing again gives back the same presentation.
pub fn parser_round_trip(p: &Presentation) -> Result<(), TestCaseError> {
    let text = serialize(p);
    let back = parse_presentation(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(&back, p);
    Ok(())
}
