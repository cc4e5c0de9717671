//! Test-side oracles, written without the library's algebra, gradings or
//! linear-algebra code.

#![allow(dead_code, clippy::needless_range_loop)]

pub mod props;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Word = Vec<u8>;

/// Monomial rewriting on words over a one-vertex quiver: each rule sends a
/// word to another word or to zero. Rules are tried in order at the leftmost
/// position where one applies.
pub struct MonomialRewriter {
    pub rules: Vec<(Word, Option<Word>)>,
}

impl MonomialRewriter {
    /// `a = 0`, `b = 1`: `aa -> bab`, `bb -> aba`, `baba -> abab`, and the
    /// words `aab`, `abb`, `baa`, `bba`, `ababa`, `babab` sent to zero. Each
    /// of the zero rules follows by hand from the first two: for example
    /// `aab = babb = baaba`, so `aab` lies in every power of the radical.
    pub fn q1e2() -> Self {
        MonomialRewriter {
            rules: vec![
                (vec![0, 0, 1], None),
                (vec![0, 1, 1], None),
                (vec![1, 0, 0], None),
                (vec![1, 1, 0], None),
                (vec![1, 0, 1, 0, 1], None),
                (vec![0, 0], Some(vec![1, 0, 1])),
                (vec![1, 1], Some(vec![0, 1, 0])),
                (vec![1, 0, 1, 0], Some(vec![0, 1, 0, 1])),
                (vec![0, 1, 0, 1, 0], None),
            ],
        }
    }

    /// `aa -> 0`, `bb -> 0`, `baba -> abab`.
    pub fn two_loop2() -> Self {
        MonomialRewriter {
            rules: vec![
                (vec![0, 0], None),
                (vec![1, 1], None),
                (vec![1, 0, 1, 0], Some(vec![0, 1, 0, 1])),
            ],
        }
    }

    /// `x^n -> 0`.
    pub fn truncated_poly(n: usize) -> Self {
        MonomialRewriter { rules: vec![(vec![0; n], None)] }
    }

    pub fn reduce(&self, w: &[u8]) -> Option<Word> {
        let mut w = w.to_vec();
        for _ in 0..10_000 {
            let hit = (0..w.len()).find_map(|i| {
                self.rules
                    .iter()
                    .find(|(lhs, _)| w[i..].starts_with(lhs))
                    .map(|(lhs, rhs)| (i, lhs.len(), rhs))
            });
            match hit {
                None => return Some(w),
                Some((_, _, None)) => return None,
                Some((i, len, Some(rhs))) => {
                    let mut next = w[..i].to_vec();
                    next.extend_from_slice(rhs);
                    next.extend_from_slice(&w[i + len..]);
                    w = next;
                }
            }
        }
        panic!("rewriting did not terminate");
    }

    pub fn is_irreducible(&self, w: &[u8]) -> bool {
        (0..w.len()).all(|i| self.rules.iter().all(|(lhs, _)| !w[i..].starts_with(lhs)))
    }
}

/// All words of length `<= max_len` over `letters` letters, shortest first.
pub fn words(letters: u8, max_len: usize) -> Vec<Word> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..letters {
                let mut x: Word = w.clone();
                x.push(l);
                next.push(x);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

pub fn word_name(w: &[u8], names: &[&str]) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter().map(|&l| names[l as usize]).collect::<Vec<_>>().join("*")
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Row-reduces in place and returns the rank.
pub fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for i in rank + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] / &pivot;
            for j in c..cols {
                let d = &f * &rows[rank][j];
                rows[i][j] -= d;
            }
        }
        rank += 1;
    }
    rank
}

pub fn rational_det(m: &[Vec<i64>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let d = &f * &a[c][j];
                a[i][j] -= d;
            }
        }
    }
    det
}

/// The unique rational `x` with `columns * x = v`, assuming the columns are
/// independent; `None` if there is none.
pub fn rational_coordinates(columns: &[Vec<i64>], v: &[i64]) -> Option<Vec<BigRational>> {
    let n = v.len();
    let k = columns.len();
    let mut rows: Vec<Vec<BigRational>> =
        (0..n).map(|i| columns.iter().map(|c| q(c[i])).chain([q(v[i])]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..=k {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if c == k {
            return None;
        }
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=k {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut x = vec![BigRational::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = rows[row][k].clone();
    }
    Some(x)
}

/// Membership in the integer span of independent columns. A nonsingular
/// square block of rows is inverted once; coordinates are then read off
/// that block and checked against the full vector.
pub struct IntegerSpan {
    columns: Vec<Vec<i64>>,
    block: Vec<usize>,
    scaled: Vec<Vec<i128>>,
    det: i128,
}

impl IntegerSpan {
    pub fn new(columns: &[Vec<i64>]) -> Self {
        let k = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        let mut block = Vec::new();
        for i in 0..n {
            let mut rows: Vec<Vec<BigRational>> =
                block.iter().chain([&i]).map(|&r| columns.iter().map(|c| q(c[r])).collect()).collect();
            if rational_rank(std::mem::take(&mut rows)) > block.len() {
                block.push(i);
            }
        }
        assert_eq!(block.len(), k, "columns are not independent");
        let sub: Vec<Vec<i64>> = columns.iter().map(|c| block.iter().map(|&r| c[r]).collect()).collect();
        let det = rational_det(&sub);
        let scaled = (0..k)
            .map(|j| {
                let unit: Vec<i64> = (0..k).map(|i| i64::from(i == j)).collect();
                let x = rational_coordinates(&sub, &unit).expect("block is nonsingular");
                x.iter().map(|c| i128::try_from((c * &det).to_integer()).unwrap()).collect()
            })
            .collect();
        let det = i128::try_from(det.to_integer()).unwrap();
        IntegerSpan { columns: columns.to_vec(), block, scaled, det }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let k = self.columns.len();
        let mut x = Vec::with_capacity(k);
        for c in 0..k {
            let acc: i128 = self.block.iter().enumerate().map(|(j, &r)| self.scaled[j][c] * v[r] as i128).sum();
            if acc % self.det != 0 {
                return false;
            }
            x.push(acc / self.det);
        }
        (0..v.len()).all(|i| self.columns.iter().zip(&x).map(|(col, xc)| xc * col[i] as i128).sum::<i128>() == v[i] as i128)
    }
}

/// Whether `v` is an integer combination of the independent `columns`.
pub fn in_integer_span(columns: &[Vec<i64>], v: &[i64]) -> bool {
    rational_coordinates(columns, v).is_some_and(|x| x.iter().all(|c| c.is_integer()))
}

/// Every `v` in `[-bound, bound]^cols` with `m * v = 0`. An odometer runs
/// over all coordinates but one pivot column, keeping `m * v` up to date;
/// the pivot coordinate is then forced.
pub fn box_kernel(m: &[Vec<i64>], cols: usize, bound: i64) -> Vec<Vec<i64>> {
    let Some((row, solve)) = (0..cols).rev().find_map(|j| m.iter().position(|r| r[j] != 0).map(|i| (i, j))) else {
        return odometer(cols, bound).collect();
    };
    let free: Vec<usize> = (0..cols).filter(|&j| j != solve).collect();
    let mut v = vec![0; cols];
    for &j in &free {
        v[j] = -bound;
    }
    let mut mv: Vec<i64> = m.iter().map(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
    let pivot = m[row][solve];
    let mut found = Vec::new();
    loop {
        if mv[row] % pivot == 0 {
            let t = -mv[row] / pivot;
            if t.abs() <= bound && m.iter().zip(&mv).all(|(r, p)| p + r[solve] * t == 0) {
                v[solve] = t;
                found.push(v.clone());
                v[solve] = 0;
            }
        }
        let mut k = 0;
        loop {
            let Some(&j) = free.get(k) else {
                return found;
            };
            let step = if v[j] < bound { 1 } else { -2 * bound };
            v[j] += step;
            for (acc, r) in mv.iter_mut().zip(m) {
                *acc += step * r[j];
            }
            if step == 1 {
                break;
            }
            k += 1;
        }
    }
}

/// All vectors in `[-bound, bound]^len`.
pub fn odometer(len: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut next = Some(vec![-bound; len]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut v = current.clone();
        for x in v.iter_mut() {
            if *x < bound {
                *x += 1;
                next = Some(v);
                break;
            }
            *x = -bound;
        }
        Some(current)
    })
}

/// Dimension of `k<letters>/I` computed from the span of all products
/// `u * rel * w` inside the words of length `<= n`, with words longer than
/// `n` dropped. Exact once `n` is at least the Loewy length minus one and
/// the words of length `n + 1` lie in the ideal.
pub fn span_dimension(relations: &[Vec<(Word, i64)>], letters: u8, n: usize) -> usize {
    let all = words(letters, n);
    let index: std::collections::HashMap<&Word, usize> = all.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rows = Vec::new();
    for rel in relations {
        let min = rel.iter().map(|(w, _)| w.len()).min().unwrap();
        for u in all.iter().filter(|u| u.len() + min <= n) {
            for w in all.iter().filter(|w| u.len() + min + w.len() <= n) {
                let mut row = vec![BigRational::zero(); all.len()];
                let mut nonzero = false;
                for (p, c) in rel {
                    let word: Word = u.iter().chain(p).chain(w).copied().collect();
                    if let Some(&i) = index.get(&word) {
                        row[i] += q(*c);
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    all.len() - rational_rank(rows)
}

fn alternating(first: u8, len: usize) -> Word {
    (0..len).map(|i| if i % 2 == 0 { first } else { 1 - first }).collect()
}

/// The relations of `q1e(r)` as words, `a = 0`, `b = 1`.
pub fn q1e_relations(r: usize) -> Vec<Vec<(Word, i64)>> {
    vec![
        vec![(vec![0, 0], 1), (alternating(1, 2 * r - 1), -1)],
        vec![(vec![1, 1], 1), (alternating(0, 2 * r - 1), -1)],
        vec![(alternating(0, 2 * r), 1), (alternating(1, 2 * r), -1)],
        vec![(alternating(0, 2 * r + 1), 1)],
    ]
}

pub fn two_loop_relations(r: usize) -> Vec<Vec<(Word, i64)>> {
    vec![
        vec![(vec![0, 0], 1)],
        vec![(vec![1, 1], 1)],
        vec![(alternating(0, 2 * r), 1), (alternating(1, 2 * r), -1)],
    ]
}

/// A file relative to the workspace root.
pub fn read_repo_file(path: &str) -> String {
    let path = format!("{}/../../{path}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn rational_is_unit(x: &BigRational) -> bool {
    x.abs() == BigRational::one()
}
