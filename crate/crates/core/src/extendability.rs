//! Which finite subsets of V or P(V) have every permutation induced by the
//! general linear (resp. projective) group.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{coefficients, rank_of_rows, ForcedMap, Matrix, Vector};
use crate::projective::{normalize_in_place, ProjPoint, ProjectiveSpace};

/// Upper bound on scalar assignments tried by the projective solver.
pub const SCALAR_SEARCH_LIMIT: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "m")]
pub enum SubsetClassLinear {
    Independent,
    /// {x₁, …, x_m, −(x₁+⋯+x_m)} with x₁, …, x_m independent.
    IndependentPlusNegSum(usize),
    NotFullyExtendable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "m")]
pub enum SubsetClassProjective {
    Independent,
    /// m + 1 points spanning an m-dimensional space, any m of them independent.
    Simplex(usize),
    /// {⟨x⟩, ⟨y⟩, ⟨x+y⟩, ⟨x−y⟩} in characteristic 3.
    Harmonic,
    NotFullyExtendable,
}

/// Outcome of testing every transposition of a subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranspositionReport {
    pub fully_extendable: bool,
    pub failing_transposition: Option<(usize, usize)>,
    pub extensions: Vec<((usize, usize), Matrix)>,
}

fn check_permutation(s: &[usize], len: usize) -> Result<()> {
    if s.len() != len {
        return Err(Error::DimensionMismatch { expected: len, found: s.len() });
    }
    let mut seen = vec![false; len];
    for &j in s {
        if j >= len || std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidSubset(format!("{s:?} is not a permutation of 0..{len}")));
        }
    }
    Ok(())
}

fn check_vectors(xs: &[Vector]) -> Result<Field> {
    if xs.len() < 2 {
        return Err(Error::InvalidSubset(format!("need at least 2 elements, got {}", xs.len())));
    }
    let field = xs[0].field().clone();
    let dim = xs[0].dim();
    for x in xs {
        if x.field() != &field {
            return Err(Error::FieldMismatch { expected: field.to_string(), found: x.field().to_string() });
        }
        if x.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: x.dim() });
        }
    }
    let distinct: BTreeSet<&[u8]> = xs.iter().map(Vector::coords).collect();
    if distinct.len() != xs.len() {
        return Err(Error::InvalidSubset("repeated element".into()));
    }
    Ok(field)
}

fn check_points(space: &ProjectiveSpace, xs: &[ProjPoint]) -> Result<()> {
    if xs.len() < 2 {
        return Err(Error::InvalidSubset(format!("need at least 2 elements, got {}", xs.len())));
    }
    for p in xs {
        space.index_of(p)?;
    }
    let distinct: BTreeSet<&ProjPoint> = xs.iter().collect();
    if distinct.len() != xs.len() {
        return Err(Error::InvalidSubset("repeated point".into()));
    }
    Ok(())
}

fn transpositions(len: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..len).flat_map(move |i| (i + 1..len).map(move |j| (i, j)))
}

fn transposition(len: usize, i: usize, j: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..len).collect();
    s.swap(i, j);
    s
}

/// An invertible u with u(x_i) = x_{s[i]}, if one exists.
pub fn extend_permutation_linear(xs: &[Vector], s: &[usize]) -> Result<Option<Matrix>> {
    let field = check_vectors(xs)?;
    check_permutation(s, xs.len())?;
    let n = xs[0].dim();
    let mut forced = ForcedMap::new(&field, n, n);
    for (x, &j) in xs.iter().zip(s) {
        if !forced.push(x.coords(), xs[j].coords()) {
            return Ok(None);
        }
    }
    Ok(forced.complete())
}

pub fn transposition_report_linear(xs: &[Vector]) -> Result<TranspositionReport> {
    check_vectors(xs)?;
    let mut extensions = Vec::new();
    for (i, j) in transpositions(xs.len()) {
        match extend_permutation_linear(xs, &transposition(xs.len(), i, j))? {
            Some(u) => extensions.push(((i, j), u)),
            None => {
                return Ok(TranspositionReport {
                    fully_extendable: false,
                    failing_transposition: Some((i, j)),
                    extensions,
                })
            }
        }
    }
    Ok(TranspositionReport { fully_extendable: true, failing_transposition: None, extensions })
}

/// Every permutation of X extends to GL(V). Transpositions generate the
/// symmetric group and extensions compose, so only those are tried.
pub fn fully_extendable_linear(xs: &[Vector]) -> Result<bool> {
    Ok(transposition_report_linear(xs)?.fully_extendable)
}

/// Structural classification of a subset of V.
pub fn classify_linear_subset(xs: &[Vector]) -> Result<SubsetClassLinear> {
    let field = check_vectors(xs)?;
    let n = xs[0].dim();
    if xs.iter().any(Vector::is_zero) {
        return Ok(SubsetClassLinear::NotFullyExtendable);
    }
    let rank = rank_of_rows(&field, xs.iter().map(|x| x.coords().to_vec()).collect(), n);
    if rank == xs.len() {
        return Ok(SubsetClassLinear::Independent);
    }
    let sum = xs.iter().skip(1).fold(xs[0].clone(), |acc, x| acc.add(x));
    if xs.len() == rank + 1 && sum.is_zero() {
        Ok(SubsetClassLinear::IndependentPlusNegSum(rank))
    } else {
        Ok(SubsetClassLinear::NotFullyExtendable)
    }
}

/// An invertible matrix u with ⟨u s⟩ = ⟨t⟩ for every pair of non-zero
/// representatives (s, t) in `pairs`, if one exists.
///
/// A lexicographically greedy maximal independent family among the sources
/// fixes the unknowns: one non-zero scalar per family member, the first set
/// to 1. Every scalar assignment is tried against the remaining pairs.
pub fn solve_projective(field: &Field, n: usize, pairs: &[(Vec<u8>, Vec<u8>)]) -> Result<Option<Matrix>> {
    for (s, t) in pairs {
        if s.len() != n || t.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.len().max(t.len()) });
        }
        if s.iter().all(|&c| c == 0) || t.iter().all(|&c| c == 0) {
            return Err(Error::ZeroVector);
        }
    }
    let mut basis: Vec<usize> = Vec::new();
    for (i, (s, _)) in pairs.iter().enumerate() {
        let mut rows: Vec<Vec<u8>> = basis.iter().map(|&b| pairs[b].0.clone()).collect();
        rows.push(s.clone());
        if rank_of_rows(field, rows, n) == basis.len() + 1 {
            basis.push(i);
        }
    }
    let src: Vec<Vec<u8>> = basis.iter().map(|&b| pairs[b].0.clone()).collect();
    let dst: Vec<Vec<u8>> = basis.iter().map(|&b| pairs[b].1.clone()).collect();
    if rank_of_rows(field, dst.clone(), n) < dst.len() {
        return Ok(None);
    }
    let m = basis.len();
    let dependents: Vec<(Vec<u8>, &Vec<u8>)> = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| !basis.contains(i))
        .map(|(_, (s, t))| (coefficients(field, &src, s).expect("source lies in the span of the family"), t))
        .collect();

    let q1 = field.order() as u128 - 1;
    let count = q1.checked_pow(m.saturating_sub(1) as u32).unwrap_or(u128::MAX);
    if count > SCALAR_SEARCH_LIMIT {
        return Err(Error::TooLarge {
            what: "projective scalar assignments".into(),
            count,
            limit: SCALAR_SEARCH_LIMIT,
        });
    }
    let nonzero: Vec<u8> = field.nonzero_values().collect();
    let mut lambda = vec![1u8; m];
    let mut digits = vec![0usize; m];
    let mut image = vec![0u8; n];
    let mut target = vec![0u8; n];
    for _ in 0..count.max(1) {
        let consistent = dependents.iter().all(|(c, t)| {
            image.fill(0);
            for (j, &cj) in c.iter().enumerate() {
                let a = field.mul(cj, lambda[j]);
                crate::linalg::axpy(field, &mut image, a, &dst[j]);
            }
            if !normalize_in_place(field, &mut image) {
                return false;
            }
            target.copy_from_slice(t);
            normalize_in_place(field, &mut target);
            image == target
        });
        if consistent {
            let mut forced = ForcedMap::new(field, n, n);
            for j in 0..m {
                let mut t = dst[j].clone();
                crate::linalg::scale_in_place(field, &mut t, lambda[j]);
                forced.push(&src[j], &t);
            }
            return Ok(forced.complete());
        }
        for j in 1..m {
            digits[j] += 1;
            if digits[j] < nonzero.len() {
                lambda[j] = nonzero[digits[j]];
                break;
            }
            digits[j] = 0;
            lambda[j] = nonzero[0];
        }
    }
    Ok(None)
}

/// A GL representative u with π(u)(P_i) = P_{s[i]}, if one exists.
pub fn extend_permutation_projective(space: &ProjectiveSpace, xs: &[ProjPoint], s: &[usize]) -> Result<Option<Matrix>> {
    check_points(space, xs)?;
    check_permutation(s, xs.len())?;
    let pairs: Vec<(Vec<u8>, Vec<u8>)> =
        xs.iter().zip(s).map(|(p, &j)| (p.rep().to_vec(), xs[j].rep().to_vec())).collect();
    solve_projective(space.field(), space.dim(), &pairs)
}

pub fn transposition_report_projective(space: &ProjectiveSpace, xs: &[ProjPoint]) -> Result<TranspositionReport> {
    check_points(space, xs)?;
    let mut extensions = Vec::new();
    for (i, j) in transpositions(xs.len()) {
        match extend_permutation_projective(space, xs, &transposition(xs.len(), i, j))? {
            Some(u) => extensions.push(((i, j), u)),
            None => {
                return Ok(TranspositionReport {
                    fully_extendable: false,
                    failing_transposition: Some((i, j)),
                    extensions,
                })
            }
        }
    }
    Ok(TranspositionReport { fully_extendable: true, failing_transposition: None, extensions })
}

pub fn fully_extendable_projective(space: &ProjectiveSpace, xs: &[ProjPoint]) -> Result<bool> {
    Ok(transposition_report_projective(space, xs)?.fully_extendable)
}

fn harmonic_completion(space: &ProjectiveSpace, x: &[u8], y: &[u8], c: u8) -> Option<[usize; 2]> {
    let f = space.field();
    let mut plus = x.to_vec();
    crate::linalg::axpy(f, &mut plus, c, y);
    let mut minus = x.to_vec();
    crate::linalg::axpy(f, &mut minus, f.neg(c), y);
    let a = space.index_of_vector(&plus)?;
    let b = space.index_of_vector(&minus)?;
    (a != b).then_some([a, b])
}

fn is_harmonic(space: &ProjectiveSpace, xs: &[ProjPoint]) -> bool {
    if xs.len() != 4 {
        return false;
    }
    let idx: BTreeSet<usize> = xs.iter().map(|p| space.index_raw(p.rep())).collect();
    let f = space.field();
    (0..4).any(|i| {
        (0..4).filter(|&j| j != i).any(|j| {
            f.nonzero_values().any(|c| {
                harmonic_completion(space, xs[i].rep(), xs[j].rep(), c).is_some_and(|[a, b]| {
                    let candidate: BTreeSet<usize> =
                        [space.index_raw(xs[i].rep()), space.index_raw(xs[j].rep()), a, b].into();
                    candidate == idx
                })
            })
        })
    })
}

/// Structural classification of a subset of P(V).
pub fn classify_projective_subset(space: &ProjectiveSpace, xs: &[ProjPoint]) -> Result<SubsetClassProjective> {
    check_points(space, xs)?;
    let f = space.field();
    let n = space.dim();
    let reps: Vec<Vec<u8>> = xs.iter().map(|p| p.rep().to_vec()).collect();
    let rank = rank_of_rows(f, reps.clone(), n);
    if rank == xs.len() {
        return Ok(SubsetClassProjective::Independent);
    }
    if xs.len() == rank + 1 {
        let every_m_subset_independent = (0..xs.len()).all(|skip| {
            let rows = reps.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, r)| r.clone()).collect();
            rank_of_rows(f, rows, n) == rank
        });
        if every_m_subset_independent {
            return Ok(SubsetClassProjective::Simplex(rank));
        }
    }
    if f.characteristic() == 3 && rank == 2 && is_harmonic(space, xs) {
        return Ok(SubsetClassProjective::Harmonic);
    }
    Ok(SubsetClassProjective::NotFullyExtendable)
}

/// Every harmonic subset {⟨x⟩, ⟨y⟩, ⟨x+y⟩, ⟨x−y⟩} of the space, as sorted
/// point-index lists in increasing order.
pub fn harmonic_subset_indices(space: &ProjectiveSpace) -> Vec<Vec<usize>> {
    let mut found = BTreeSet::new();
    let points: Vec<ProjPoint> = space.points().collect();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for c in space.field().nonzero_values() {
                if let Some([a, b]) = harmonic_completion(space, points[i].rep(), points[j].rep(), c) {
                    let set: BTreeSet<usize> = [i, j, a, b].into();
                    if set.len() == 4 {
                        found.insert(set.into_iter().collect::<Vec<_>>());
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

pub fn harmonic_subsets(space: &ProjectiveSpace) -> Vec<Vec<ProjPoint>> {
    harmonic_subset_indices(space).into_iter().map(|s| s.into_iter().map(|i| space.point(i)).collect()).collect()
}
