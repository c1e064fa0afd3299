//! Vectors, matrices and subspaces over a [`Field`], plus GL(n, q).
//!
//! Matrices act on column vectors. Vector indices put the first coordinate in
//! the most significant position, so index order is lexicographic order.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::Field;

/// Hard cap on the number of group elements any enumeration will produce.
pub const GROUP_ENUMERATION_LIMIT: u128 = 10_000_000;

/// The coordinate space F^n.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorSpace {
    field: Field,
    dim: usize,
}

impl fmt::Debug for VectorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VectorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.field, self.dim)
    }
}

impl std::str::FromStr for VectorSpace {
    type Err = Error;

    /// `GF(2)^3`, `GF(2^2)^4`, ...
    fn from_str(s: &str) -> Result<VectorSpace> {
        let s = s.trim();
        let (f, n) = s
            .rsplit_once('^')
            .filter(|(f, _)| f.ends_with(')'))
            .ok_or_else(|| Error::Parse(format!("invalid space spec {s:?}, expected GF(q)^n")))?;
        let field: Field = f.parse()?;
        let dim: usize = n.trim().parse().map_err(|_| Error::Parse(format!("invalid dimension in {s:?}")))?;
        Ok(VectorSpace::new(&field, dim))
    }
}

impl VectorSpace {
    pub fn new(field: &Field, dim: usize) -> VectorSpace {
        VectorSpace { field: field.clone(), dim }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// q^n, or `None` when it does not fit in a usize.
    pub fn checked_size(&self) -> Option<usize> {
        self.field.order().checked_pow(self.dim as u32)
    }

    /// q^n. Panics when the space is too large to index.
    pub fn size(&self) -> usize {
        self.checked_size().expect("vector space too large to enumerate")
    }

    pub fn decode(&self, mut index: usize, out: &mut [u8]) {
        let q = self.field.order();
        for c in out.iter_mut().rev() {
            *c = (index % q) as u8;
            index /= q;
        }
    }

    pub fn encode(&self, coords: &[u8]) -> usize {
        let q = self.field.order();
        coords.iter().fold(0usize, |acc, &c| acc * q + c as usize)
    }

    pub fn vector(&self, index: usize) -> Vector {
        let mut coords = vec![0u8; self.dim];
        self.decode(index, &mut coords);
        Vector { field: self.field.clone(), coords }
    }

    pub fn index_of(&self, v: &Vector) -> Result<usize> {
        self.check(v)?;
        Ok(self.encode(&v.coords))
    }

    pub fn check(&self, v: &Vector) -> Result<()> {
        if v.field != self.field {
            return Err(Error::FieldMismatch { expected: self.field.to_string(), found: v.field.to_string() });
        }
        if v.coords.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.coords.len() });
        }
        Ok(())
    }

    /// All vectors in index order.
    pub fn vectors(&self) -> impl Iterator<Item = Vector> + '_ {
        (0..self.size()).map(|i| self.vector(i))
    }

    pub fn zero(&self) -> Vector {
        Vector { field: self.field.clone(), coords: vec![0; self.dim] }
    }

    /// e_{i+1} (zero-based `i`).
    pub fn unit(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v.coords[i] = 1;
        v
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    field: Field,
    coords: Vec<u8>,
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Vector {
    pub fn new(field: &Field, coords: Vec<u8>) -> Result<Vector> {
        if let Some(&bad) = coords.iter().find(|&&c| !field.contains(c as u64)) {
            return Err(Error::ValueOutOfRange { value: bad as u64, field: field.to_string() });
        }
        Ok(Vector { field: field.clone(), coords })
    }

    pub(crate) fn from_raw(field: &Field, coords: Vec<u8>) -> Vector {
        Vector { field: field.clone(), coords }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u8> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.coords.len(), other.coords.len());
        let f = &self.field;
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| f.add(a, b)).collect();
        Vector { field: f.clone(), coords }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Vector {
        let f = &self.field;
        Vector { field: f.clone(), coords: self.coords.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn scale(&self, a: u8) -> Vector {
        let f = &self.field;
        Vector { field: f.clone(), coords: self.coords.iter().map(|&c| f.mul(a, c)).collect() }
    }
}

// Raw row helpers shared by the row-reduction code.

#[inline]
pub(crate) fn axpy(field: &Field, y: &mut [u8], a: u8, x: &[u8]) {
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = field.add(*yi, field.mul(a, xi));
    }
}

#[inline]
pub(crate) fn scale_in_place(field: &Field, y: &mut [u8], a: u8) {
    for yi in y.iter_mut() {
        *yi = field.mul(a, *yi);
    }
}

/// Reduced row echelon form of `rows` (each of length `cols`), zero rows
/// dropped. Returns the rows and their pivot columns, sorted by pivot.
pub(crate) fn rref(field: &Field, mut rows: Vec<Vec<u8>>, cols: usize) -> (Vec<Vec<u8>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]);
        scale_in_place(field, &mut rows[r], inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let a = field.neg(row[c]);
                axpy(field, row, a, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Coefficients of `v` in the independent family `family`, if `v` lies in its span.
pub(crate) fn coefficients(field: &Field, family: &[Vec<u8>], v: &[u8]) -> Option<Vec<u8>> {
    let m = family.len();
    let rows: Vec<Vec<u8>> =
        (0..v.len()).map(|r| family.iter().map(|b| b[r]).chain(std::iter::once(v[r])).collect()).collect();
    let (reduced, pivots) = rref(field, rows, m + 1);
    if pivots.last() == Some(&m) {
        return None;
    }
    Some((0..m).map(|j| reduced[j][m]).collect())
}

pub(crate) fn rank_of_rows(field: &Field, rows: Vec<Vec<u8>>, cols: usize) -> usize {
    rref(field, rows, cols).1.len()
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<u8>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if let Some(&bad) = data.iter().find(|&&c| !field.contains(c as u64)) {
            return Err(Error::ValueOutOfRange { value: bad as u64, field: field.to_string() });
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u8>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
        }
        Matrix::new(field, rows.len(), cols, rows.concat())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, dim: usize, columns: &[Vec<u8>]) -> Result<Matrix> {
        if let Some(c) = columns.iter().find(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
        }
        let mut m = Matrix::zero(field, dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Matrix::new(field, dim, columns.len(), m.data)
    }

    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// I + a·E_ij.
    pub fn transvection(field: &Field, n: usize, i: usize, j: usize, a: u8) -> Matrix {
        assert!(i != j && i < n && j < n);
        let mut m = Matrix::identity(field, n);
        m.set(i, j, a);
        m
    }

    pub fn diagonal(field: &Field, diag: &[u8]) -> Matrix {
        let mut m = Matrix::zero(field, diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Permutation matrix sending e_j to e_{perm[j]}.
    pub fn permutation(field: &Field, perm: &[usize]) -> Matrix {
        let mut m = Matrix::zero(field, perm.len(), perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u8>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// `self · x` on raw coordinates.
    #[inline]
    pub fn mul_raw(&self, x: &[u8], out: &mut [u8]) {
        debug_assert_eq!(x.len(), self.cols);
        let f = &self.field;
        for (i, o) in out.iter_mut().enumerate().take(self.rows) {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            *o = row.iter().zip(x).fold(0u8, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
        }
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.field != self.field {
            return Err(Error::FieldMismatch { expected: self.field.to_string(), found: x.field.to_string() });
        }
        if x.dim() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.dim() });
        }
        let mut out = vec![0u8; self.rows];
        self.mul_raw(&x.coords, &mut out);
        Ok(Vector { field: self.field.clone(), coords: out })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { expected: self.field.to_string(), found: other.field.to_string() });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let f = &self.field;
        let mut m = Matrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(m.get(i, j), f.mul(a, other.get(k, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(m)
    }

    pub fn scale(&self, a: u8) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&c| f.mul(a, c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.field, self.row_vecs(), self.cols)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let f = &self.field;
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| u8::from(i == j)));
                r
            })
            .collect();
        let (red, pivots) = rref(f, rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let data = red.iter().flat_map(|r| r[n..].iter().copied()).collect();
        Some(Matrix { field: f.clone(), rows: n, cols: n, data })
    }

    /// First non-zero entry in reading order.
    pub fn leading_entry(&self) -> Option<u8> {
        self.data.iter().copied().find(|&c| c != 0)
    }
}

/// A subspace of F^n kept in reduced row echelon form, so that equal
/// subspaces compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace{:?}", self.basis)
    }
}

impl Subspace {
    pub fn from_raw(field: &Field, ambient: usize, vectors: Vec<Vec<u8>>) -> Subspace {
        let (basis, pivots) = rref(field, vectors, ambient);
        Subspace { field: field.clone(), ambient, basis, pivots }
    }

    pub fn zero(space: &VectorSpace) -> Subspace {
        Subspace { field: space.field.clone(), ambient: space.dim, basis: vec![], pivots: vec![] }
    }

    pub fn whole(space: &VectorSpace) -> Subspace {
        Subspace::from_raw(&space.field, space.dim, (0..space.dim).map(|i| space.unit(i).coords).collect())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn basis_raw(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.basis.iter().map(|b| Vector::from_raw(&self.field, b.clone())).collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u8]) -> Option<Vec<u8>> {
        let coords: Vec<u8> = self.pivots.iter().map(|&p| v[p]).collect();
        let mut rebuilt = vec![0u8; self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            axpy(&self.field, &mut rebuilt, *c, b);
        }
        (rebuilt == v).then_some(coords)
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Unit vectors at the non-pivot columns: a complement basis.
    pub fn complement_basis(&self) -> Vec<Vec<u8>> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| {
                let mut e = vec![0u8; self.ambient];
                e[c] = 1;
                e
            })
            .collect()
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::from_raw(&self.field, self.ambient, rows)
    }

    /// All q^dim elements.
    pub fn elements(&self) -> Vec<Vec<u8>> {
        let q = self.field.order();
        let d = self.dim();
        let total = q.pow(d as u32);
        let mut out = Vec::with_capacity(total);
        let mut coeffs = vec![0u8; d];
        for idx in 0..total {
            let mut t = idx;
            for c in coeffs.iter_mut().rev() {
                *c = (t % q) as u8;
                t /= q;
            }
            let mut v = vec![0u8; self.ambient];
            for (c, b) in coeffs.iter().zip(&self.basis) {
                axpy(&self.field, &mut v, *c, b);
            }
            out.push(v);
        }
        out
    }
}

/// Row rank of a matrix.
pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

/// Canonical span of `vs` inside `space`.
pub fn span(space: &VectorSpace, vs: &[Vector]) -> Result<Subspace> {
    for v in vs {
        space.check(v)?;
    }
    Ok(Subspace::from_raw(&space.field, space.dim, vs.iter().map(|v| v.coords.clone()).collect()))
}

/// True iff the vectors are linearly independent (the empty list is).
pub fn is_independent(vs: &[Vector]) -> bool {
    let Some(first) = vs.first() else {
        return true;
    };
    rank_of_rows(&first.field, vs.iter().map(|v| v.coords.clone()).collect(), first.dim()) == vs.len()
}

/// Every subspace of `space`, grouped by dimension, found by closing the
/// zero subspace under joins with single vectors.
pub fn all_subspaces(space: &VectorSpace) -> Vec<Subspace> {
    use std::collections::HashSet;
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut layer = vec![Subspace::zero(space)];
    seen.insert(layer[0].clone());
    let vectors: Vec<Subspace> = space
        .vectors()
        .filter(|v| !v.is_zero())
        .map(|v| Subspace::from_raw(&space.field, space.dim, vec![v.coords]))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    let mut out = layer.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for s in &layer {
            for line in &vectors {
                if s.contains_subspace(line) {
                    continue;
                }
                let j = s.join(line);
                if seen.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        next.sort_by(|a, b| a.basis.cmp(&b.basis));
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A partially specified linear map, accumulated from (source, target) pairs.
///
/// Rows are kept in echelon form on the source side; each row is a valid pair
/// (a linear combination of the inserted pairs).
#[derive(Clone, Debug)]
pub struct ForcedMap {
    field: Field,
    src_dim: usize,
    dst_dim: usize,
    rows: Vec<(Vec<u8>, Vec<u8>)>,
    pivots: Vec<usize>,
}

impl ForcedMap {
    pub fn new(field: &Field, src_dim: usize, dst_dim: usize) -> ForcedMap {
        ForcedMap { field: field.clone(), src_dim, dst_dim, rows: vec![], pivots: vec![] }
    }

    /// Adds the constraint `s ↦ t`; returns false if it contradicts the
    /// constraints seen so far.
    pub fn push(&mut self, s: &[u8], t: &[u8]) -> bool {
        let f = &self.field;
        let mut s = s.to_vec();
        let mut t = t.to_vec();
        for ((rs, rt), &p) in self.rows.iter().zip(&self.pivots) {
            let c = s[p];
            if c != 0 {
                let a = f.neg(c);
                axpy(f, &mut s, a, rs);
                axpy(f, &mut t, a, rt);
            }
        }
        match s.iter().position(|&c| c != 0) {
            None => t.iter().all(|&c| c == 0),
            Some(p) => {
                let inv = f.inv(s[p]);
                scale_in_place(f, &mut s, inv);
                scale_in_place(f, &mut t, inv);
                self.rows.push((s, t));
                self.pivots.push(p);
                true
            }
        }
    }

    /// Dimension of the span of the sources.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Whether the forced map is injective on the span of the sources.
    pub fn is_injective(&self) -> bool {
        rank_of_rows(&self.field, self.rows.iter().map(|r| r.1.clone()).collect(), self.dst_dim) == self.rows.len()
    }

    pub fn pairs(&self) -> &[(Vec<u8>, Vec<u8>)] {
        &self.rows
    }

    /// The image of `s` under the forced map, if `s` lies in the source span.
    pub fn image_of(&self, s: &[u8]) -> Option<Vec<u8>> {
        let f = &self.field;
        let mut s = s.to_vec();
        let mut t = vec![0u8; self.dst_dim];
        for ((rs, rt), &p) in self.rows.iter().zip(&self.pivots) {
            let c = s[p];
            if c != 0 {
                axpy(f, &mut s, f.neg(c), rs);
                axpy(f, &mut t, c, rt);
            }
        }
        s.iter().all(|&c| c == 0).then_some(t)
    }

    /// Extends to an automorphism when `src_dim == dst_dim`: a complement of
    /// the source span (unit vectors at non-pivot columns) goes, in order, to
    /// the analogous complement of the image span.
    pub fn complete(&self) -> Option<Matrix> {
        if self.src_dim != self.dst_dim || !self.is_injective() {
            return None;
        }
        let n = self.src_dim;
        let f = &self.field;
        let src_span = Subspace::from_raw(f, n, self.rows.iter().map(|r| r.0.clone()).collect());
        let dst_span = Subspace::from_raw(f, n, self.rows.iter().map(|r| r.1.clone()).collect());
        let mut src_cols: Vec<Vec<u8>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let mut dst_cols: Vec<Vec<u8>> = self.rows.iter().map(|r| r.1.clone()).collect();
        src_cols.extend(src_span.complement_basis());
        dst_cols.extend(dst_span.complement_basis());
        let s = Matrix::from_columns(f, n, &src_cols).ok()?;
        let t = Matrix::from_columns(f, n, &dst_cols).ok()?;
        t.mul(&s.inverse()?).ok()
    }
}

/// An invertible matrix sending every source to its target, if one exists.
pub fn extend_to_automorphism(space: &VectorSpace, pairs: &[(Vector, Vector)]) -> Result<Option<Matrix>> {
    let mut forced = ForcedMap::new(&space.field, space.dim, space.dim);
    for (s, t) in pairs {
        space.check(s)?;
        space.check(t)?;
        if !forced.push(&s.coords, &t.coords) {
            return Ok(None);
        }
    }
    Ok(forced.complete())
}

/// |GL(n, q)| = Π (q^n − q^i).
pub fn gl_order(n: usize, q: usize) -> u128 {
    let qn = (q as u128).pow(n as u32);
    (0..n).map(|i| qn - (q as u128).pow(i as u32)).product()
}

/// Transvections I + E_ij for i ≠ j, then diag(ζ, 1, .., 1) for a primitive
/// root ζ when q > 2.
pub fn gl_generators(n: usize, field: &Field) -> Vec<Matrix> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gens.push(Matrix::transvection(field, n, i, j, 1));
            }
        }
    }
    if field.order() > 2 && n > 0 {
        let mut d = vec![1u8; n];
        d[0] = field.generator();
        gens.push(Matrix::diagonal(field, &d));
    }
    gens
}

/// Lexicographic stream of GL(n, q): rows are chosen in index order, each
/// outside the span of the rows before it.
#[derive(Clone, Debug)]
pub struct GlIter {
    space: VectorSpace,
    // chosen row index per depth; `None` once exhausted
    choice: Option<Vec<usize>>,
    // span membership bitmap per depth (span of the first d rows)
    spans: Vec<Vec<bool>>,
    started: bool,
    remaining: u128,
}

impl GlIter {
    fn new(n: usize, field: &Field) -> GlIter {
        let space = VectorSpace::new(field, n);
        let size = space.size();
        let mut zero = vec![false; size];
        zero[0] = true;
        GlIter {
            spans: vec![zero],
            space,
            choice: Some(Vec::new()),
            started: false,
            remaining: gl_order(n, field.order()),
        }
    }

    fn push_span(&mut self, row: usize) {
        let sp = &self.space;
        let f = sp.field();
        let prev = self.spans.last().unwrap();
        let mut next = prev.clone();
        let mut r = vec![0u8; sp.dim()];
        sp.decode(row, &mut r);
        let mut v = vec![0u8; sp.dim()];
        for (idx, &inside) in prev.iter().enumerate() {
            if !inside {
                continue;
            }
            for c in f.nonzero_values() {
                sp.decode(idx, &mut v);
                axpy(f, &mut v, c, &r);
                next[sp.encode(&v)] = true;
            }
        }
        self.spans.push(next);
    }

    fn next_free(&self, from: usize) -> Option<usize> {
        let span = self.spans.last().unwrap();
        (from..span.len()).find(|&i| !span[i])
    }

    /// Fills rows from the current depth to n with the smallest choices.
    fn fill(&mut self) -> bool {
        let n = self.space.dim();
        while self.choice.as_ref().unwrap().len() < n {
            match self.next_free(0) {
                Some(r) => {
                    self.choice.as_mut().unwrap().push(r);
                    self.push_span(r);
                }
                None => return false,
            }
        }
        true
    }

    fn advance(&mut self) -> bool {
        loop {
            let Some(last) = self.choice.as_mut().unwrap().pop() else {
                return false;
            };
            self.spans.pop();
            if let Some(r) = self.next_free(last + 1) {
                self.choice.as_mut().unwrap().push(r);
                self.push_span(r);
                return self.fill();
            }
        }
    }

    fn current(&self) -> Matrix {
        let sp = &self.space;
        let n = sp.dim();
        let mut data = vec![0u8; n * n];
        for (i, &r) in self.choice.as_ref().unwrap().iter().enumerate() {
            sp.decode(r, &mut data[i * n..(i + 1) * n]);
        }
        Matrix { field: sp.field().clone(), rows: n, cols: n, data }
    }
}

impl Iterator for GlIter {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        self.choice.as_ref()?;
        let ok = if !self.started {
            self.started = true;
            self.fill()
        } else {
            self.advance()
        };
        if ok {
            self.remaining -= 1;
            Some(self.current())
        } else {
            self.choice = None;
            None
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining.min(usize::MAX as u128) as usize;
        (r, Some(r))
    }
}

/// Every invertible n×n matrix in lexicographic (row-major) order.
pub fn enumerate_gl(n: usize, field: &Field) -> Result<GlIter> {
    let order = gl_order(n, field.order());
    if order > GROUP_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: format!("GL({n}, {})", field.order()),
            count: order,
            limit: GROUP_ENUMERATION_LIMIT,
        });
    }
    Ok(GlIter::new(n, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn gf(p: u32, k: u32) -> Field {
        Field::new(p, k).unwrap()
    }

    fn v(f: &Field, c: &[u8]) -> Vector {
        Vector::new(f, c.to_vec()).unwrap()
    }

    /// Leibniz-formula determinant, independent of row reduction.
    fn det(m: &Matrix) -> u8 {
        let n = m.rows();
        let f = m.field();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0u8;
        fn rec(k: usize, perm: &mut Vec<usize>, m: &Matrix, total: &mut u8) {
            let n = perm.len();
            let f = m.field();
            if k == n {
                let inversions =
                    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
                let mut prod = 1u8;
                for (i, &p) in perm.iter().enumerate() {
                    prod = f.mul(prod, m.get(i, p));
                }
                if inversions % 2 == 1 {
                    prod = f.neg(prod);
                }
                *total = f.add(*total, prod);
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                rec(k + 1, perm, m, total);
                perm.swap(k, i);
            }
        }
        rec(0, &mut perm, m, &mut total);
        let _ = f;
        total
    }

    fn closure(gens: &[Matrix], n: usize, f: &Field) -> HashSet<Matrix> {
        let id = Matrix::identity(f, n);
        let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(m) = frontier.pop() {
            for g in gens {
                let p = m.mul(g).unwrap();
                if seen.insert(p.clone()) {
                    frontier.push(p);
                }
            }
        }
        seen
    }

    #[test]
    fn rank_examples() {
        let f2 = gf(2, 1);
        assert_eq!(rank(&Matrix::identity(&f2, 3)), 3);
        let f3 = gf(3, 1);
        assert_eq!(rank(&Matrix::from_rows(&f3, &[vec![1, 1], vec![2, 2]]).unwrap()), 1);
        // [[1,2],[2,3]] over GF(4): 2·(1,2) = (2,3), so the determinant vanishes.
        let f4 = gf(2, 2);
        let m = Matrix::from_rows(&f4, &[vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(det(&m), 0);
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn rank_agrees_with_determinant() {
        for f in [gf(2, 1), gf(3, 1), gf(2, 2)] {
            for m in enumerate_gl(2, &f).unwrap() {
                assert_ne!(det(&m), 0);
            }
            let sp = VectorSpace::new(&f, 4);
            for i in 0..sp.size() {
                let m = Matrix::new(&f, 2, 2, sp.vector(i).into_coords()).unwrap();
                assert_eq!(m.rank() == 2, det(&m) != 0);
            }
        }
    }

    #[test]
    fn span_examples() {
        let f2 = gf(2, 1);
        let s3 = VectorSpace::new(&f2, 3);
        let s = span(&s3, &[v(&f2, &[1, 0, 0]), v(&f2, &[0, 1, 0])]).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.basis_raw(), &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(span(&s3, &[]).unwrap().dim(), 0);
        let f3 = gf(3, 1);
        let s2 = VectorSpace::new(&f3, 2);
        let s = span(&s2, &[v(&f3, &[1, 1]), v(&f3, &[2, 2])]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis_raw(), &[vec![1, 1]]);
    }

    #[test]
    fn independence_examples() {
        let f2 = gf(2, 1);
        assert!(is_independent(&[v(&f2, &[1, 0]), v(&f2, &[0, 1])]));
        assert!(!is_independent(&[v(&f2, &[1, 0]), v(&f2, &[1, 0])]));
        let f3 = gf(3, 1);
        assert!(!is_independent(&[v(&f3, &[1, 2]), v(&f3, &[2, 1])]));
        assert!(is_independent(&[]));
        assert!(!is_independent(&[v(&f3, &[0, 0])]));
    }

    #[test]
    fn generators_close_to_gl() {
        let cases = [(2, gf(2, 1), 6usize), (3, gf(2, 1), 168), (2, gf(3, 1), 48)];
        for (n, f, order) in cases {
            let gens = gl_generators(n, &f);
            assert!(gens.iter().all(Matrix::is_invertible));
            let c = closure(&gens, n, &f);
            assert_eq!(c.len(), order);
            let all: HashSet<Matrix> = enumerate_gl(n, &f).unwrap().collect();
            assert_eq!(c, all);
        }
        assert_eq!(gl_generators(2, &gf(2, 1)).len(), 2);
        assert_eq!(gl_generators(3, &gf(2, 1)).len(), 6);
        assert_eq!(gl_generators(2, &gf(3, 1)).len(), 3);
        // n ≤ 3, q ≤ 3 also includes GF(3)^3 and the 1-dimensional groups
        for (n, f) in [(3, gf(3, 1)), (1, gf(3, 1)), (1, gf(2, 1)), (2, gf(2, 2))] {
            let c = closure(&gl_generators(n, &f), n, &f);
            assert_eq!(c.len() as u128, gl_order(n, f.order()));
        }
    }

    #[test]
    fn enumerate_gl_counts_and_order() {
        let f3 = gf(3, 1);
        let one: Vec<Matrix> = enumerate_gl(1, &f3).unwrap().collect();
        assert_eq!(one.len(), 2);
        assert_eq!(one[0].data(), &[1]);
        assert_eq!(one[1].data(), &[2]);

        let f2 = gf(2, 1);
        let all2: Vec<Matrix> = enumerate_gl(2, &f2).unwrap().collect();
        assert_eq!(all2.len(), 6);
        let filtered = (0..16)
            .filter(|&i| {
                Matrix::new(&f2, 2, 2, VectorSpace::new(&f2, 4).vector(i).into_coords()).unwrap().is_invertible()
            })
            .count();
        assert_eq!(filtered, 6);
        let all3: Vec<Matrix> = enumerate_gl(3, &f2).unwrap().collect();
        assert_eq!(all3.len(), 168);
        let mut sorted = all3.clone();
        sorted.sort_by(|a, b| a.data().cmp(b.data()));
        assert_eq!(sorted, all3, "lexicographic order");
    }

    #[test]
    fn enumerate_gl_matches_formula() {
        for (p, k) in crate::gf::supported_fields() {
            let f = gf(p, k);
            for n in 1..=4 {
                let order = gl_order(n, f.order());
                if order > 100_000 {
                    continue;
                }
                assert_eq!(enumerate_gl(n, &f).unwrap().count() as u128, order, "GL({n},{})", f.order());
            }
        }
        assert!(matches!(enumerate_gl(4, &gf(3, 1)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn gl_iter_is_partitionable() {
        let f = gf(3, 1);
        let it = enumerate_gl(2, &f).unwrap();
        let mut a = it.clone();
        let first: Vec<Matrix> = a.by_ref().take(10).collect();
        let rest: Vec<Matrix> = a.collect();
        let all: Vec<Matrix> = it.collect();
        assert_eq!([first, rest].concat(), all);
    }

    #[test]
    fn extend_examples() {
        let f2 = gf(2, 1);
        let s3 = VectorSpace::new(&f2, 3);
        let (e1, e2, e3) = (s3.unit(0), s3.unit(1), s3.unit(2));
        let m = extend_to_automorphism(&s3, &[(e1.clone(), e2.clone()), (e2.clone(), e1.clone())]).unwrap().unwrap();
        assert_eq!(m, Matrix::permutation(&f2, &[1, 0, 2]));
        assert_eq!(m.apply(&e3).unwrap(), e3);

        let s2 = VectorSpace::new(&f2, 2);
        let (a, b) = (s2.unit(0), s2.unit(1));
        let pairs = [(a.clone(), a.clone()), (a.add(&b), a.clone())];
        assert_eq!(extend_to_automorphism(&s2, &pairs).unwrap(), None);

        let f3 = gf(3, 1);
        let s = VectorSpace::new(&f3, 2);
        let pairs = [
            (v(&f3, &[1, 0]), v(&f3, &[1, 1])),
            (v(&f3, &[0, 1]), v(&f3, &[0, 1])),
            (v(&f3, &[1, 1]), v(&f3, &[1, 0])),
        ];
        assert_eq!(extend_to_automorphism(&s, &pairs).unwrap(), None);
        // brute force over GL(2,3) agrees
        let brute = enumerate_gl(2, &f3).unwrap().any(|u| pairs.iter().all(|(x, y)| u.apply(x).unwrap() == *y));
        assert!(!brute);

        let bad = [(v(&f3, &[1, 0]), v(&f2, &[1, 0]))];
        assert!(extend_to_automorphism(&s, &bad).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = gf(2, 2);
        for m in enumerate_gl(2, &f).unwrap() {
            let inv = m.inverse().unwrap();
            assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f, 2));
        }
        let sing = Matrix::from_rows(&f, &[vec![1, 2], vec![2, 3]]).unwrap();
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn subspace_counts() {
        // Gaussian binomials: GF(2)^3 has 1+7+7+1 subspaces, GF(3)^3 has 1+13+13+1.
        assert_eq!(all_subspaces(&VectorSpace::new(&gf(2, 1), 3)).len(), 16);
        assert_eq!(all_subspaces(&VectorSpace::new(&gf(3, 1), 3)).len(), 28);
        assert_eq!(all_subspaces(&VectorSpace::new(&gf(2, 2), 2)).len(), 7);
    }

    #[test]
    fn space_parsing() {
        let s: VectorSpace = "GF(2)^3".parse().unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.field().order(), 2);
        let s: VectorSpace = "GF(2^2)^4".parse().unwrap();
        assert_eq!((s.field().order(), s.dim()), (4, 4));
        assert!("GF(2)".parse::<VectorSpace>().is_err());
        assert!("GF(6)^2".parse::<VectorSpace>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix(f: Field, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
            let q = f.order() as u8;
            proptest::collection::vec(0..q, rows * cols).prop_map(move |d| Matrix::new(&f, rows, cols, d).unwrap())
        }

        proptest! {
            #[test]
            fn rank_of_product_bounded(
                a in small_matrix(Field::new(3, 1).unwrap(), 3, 4),
                b in small_matrix(Field::new(3, 1).unwrap(), 4, 2),
            ) {
                let ab = a.mul(&b).unwrap();
                prop_assert!(ab.rank() <= a.rank().min(b.rank()));
            }

            #[test]
            fn span_is_order_independent(
                data in proptest::collection::vec(proptest::collection::vec(0u8..4, 3), 0..6),
                seed in any::<u64>(),
            ) {
                let f = Field::new(2, 2).unwrap();
                let sp = VectorSpace::new(&f, 3);
                let vs: Vec<Vector> = data.iter().map(|c| Vector::new(&f, c.clone()).unwrap()).collect();
                let mut shuffled = vs.clone();
                let len = shuffled.len();
                if len > 1 {
                    for i in 0..len {
                        let j = ((seed >> (i % 32)) as usize + i * 7) % len;
                        shuffled.swap(i, j);
                    }
                }
                let a = span(&sp, &vs).unwrap();
                prop_assert_eq!(&a, &span(&sp, &shuffled).unwrap());
                prop_assert_eq!(&a, &span(&sp, &a.basis()).unwrap());
            }

            #[test]
            fn extension_satisfies_pairs(
                src in proptest::collection::vec(0usize..27, 1..4),
                u_idx in 0usize..11232,
            ) {
                let f = Field::new(3, 1).unwrap();
                let sp = VectorSpace::new(&f, 3);
                let u = enumerate_gl(3, &f).unwrap().nth(u_idx).unwrap();
                let pairs: Vec<(Vector, Vector)> = src
                    .iter()
                    .map(|&i| { let x = sp.vector(i); let y = u.apply(&x).unwrap(); (x, y) })
                    .collect();
                let m = extend_to_automorphism(&sp, &pairs).unwrap().unwrap();
                prop_assert_eq!(m.rank(), 3);
                for (x, y) in &pairs {
                    prop_assert_eq!(&m.apply(x).unwrap(), y);
                }
            }
        }
    }
}
