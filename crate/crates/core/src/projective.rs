//! The projective space P(F^n): points, lines and the PGL action.
//!
//! A point is stored by its normalized representative (leftmost non-zero
//! coordinate equal to 1). Points are ordered first by the position of that
//! leading 1, then lexicographically by the remaining coordinates, and a
//! point serializes as its index in this order.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{enumerate_gl, scale_in_place, GlIter, Matrix, Vector, VectorSpace};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    rep: Vec<u8>,
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, c) in self.rep.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ">")
    }
}

impl ProjPoint {
    pub fn rep(&self) -> &[u8] {
        &self.rep
    }

    pub fn rep_vector(&self, field: &Field) -> Vector {
        Vector::from_raw(field, self.rep.clone())
    }
}

/// Scales `coords` in place so that the leftmost non-zero entry is 1.
/// Returns false for the zero vector.
#[inline]
pub(crate) fn normalize_in_place(field: &Field, coords: &mut [u8]) -> bool {
    match coords.iter().find(|&&c| c != 0) {
        None => false,
        Some(&lead) => {
            if lead != 1 {
                let inv = field.inv(lead);
                scale_in_place(field, coords, inv);
            }
            true
        }
    }
}

/// The point ⟨v⟩.
pub fn normalize(v: &Vector) -> Result<ProjPoint> {
    let mut rep = v.coords().to_vec();
    if !normalize_in_place(v.field(), &mut rep) {
        return Err(Error::ZeroVector);
    }
    Ok(ProjPoint { rep })
}

#[derive(Clone, PartialEq, Eq)]
pub struct ProjectiveSpace {
    space: VectorSpace,
}

impl fmt::Debug for ProjectiveSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({})", self.space)
    }
}

impl ProjectiveSpace {
    pub fn new(field: &Field, n: usize) -> ProjectiveSpace {
        ProjectiveSpace { space: VectorSpace::new(field, n) }
    }

    pub fn of(space: &VectorSpace) -> ProjectiveSpace {
        ProjectiveSpace { space: space.clone() }
    }

    pub fn vector_space(&self) -> &VectorSpace {
        &self.space
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// (q^n − 1)/(q − 1).
    pub fn len(&self) -> usize {
        let q = self.field().order();
        (0..self.dim()).map(|i| q.pow(i as u32)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    /// Index of a normalized, non-zero coordinate vector.
    pub fn index_raw(&self, rep: &[u8]) -> usize {
        let q = self.field().order();
        let n = self.dim();
        let lead = rep.iter().position(|&c| c != 0).expect("zero vector has no point index");
        debug_assert_eq!(rep[lead], 1);
        let offset: usize = (0..lead).map(|j| q.pow((n - 1 - j) as u32)).sum();
        offset + rep[lead + 1..].iter().fold(0usize, |acc, &c| acc * q + c as usize)
    }

    /// Index of the point spanned by an arbitrary non-zero vector.
    pub fn index_of_vector(&self, coords: &[u8]) -> Option<usize> {
        let mut rep = coords.to_vec();
        normalize_in_place(self.field(), &mut rep).then(|| self.index_raw(&rep))
    }

    pub fn index_of(&self, p: &ProjPoint) -> Result<usize> {
        if p.rep.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.rep.len() });
        }
        Ok(self.index_raw(&p.rep))
    }

    pub fn point_raw(&self, mut index: usize, out: &mut [u8]) {
        let q = self.field().order();
        let n = self.dim();
        out.fill(0);
        for lead in 0..n {
            let block = q.pow((n - 1 - lead) as u32);
            if index < block {
                out[lead] = 1;
                for c in out[lead + 1..].iter_mut().rev() {
                    *c = (index % q) as u8;
                    index /= q;
                }
                return;
            }
            index -= block;
        }
        panic!("point index out of range");
    }

    pub fn point(&self, index: usize) -> ProjPoint {
        let mut rep = vec![0u8; self.dim()];
        self.point_raw(index, &mut rep);
        ProjPoint { rep }
    }

    /// All points in canonical order.
    pub fn points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Indices of the q + 1 points on the line through points `a` and `b`,
    /// sorted.
    pub fn line_indices(&self, a: usize, b: usize) -> Vec<usize> {
        let f = self.field().clone();
        let n = self.dim();
        let mut pa = vec![0u8; n];
        let mut pb = vec![0u8; n];
        self.point_raw(a, &mut pa);
        self.point_raw(b, &mut pb);
        let mut out = vec![a];
        let mut v = vec![0u8; n];
        // ⟨c·a + b⟩ for every c, which together with ⟨a⟩ covers the line
        for c in f.values() {
            for i in 0..n {
                v[i] = f.add(f.mul(c, pa[i]), pb[i]);
            }
            out.push(self.index_of_vector(&v).expect("distinct points span a line"));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Every line as a sorted list of point indices, each line once.
    pub fn lines(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let line = self.line_indices(a, b);
                // keep only when (a, b) are the two smallest points on the line
                if line[0] == a && line[1] == b {
                    out.push(line);
                }
            }
        }
        out
    }
}

/// All points of P(F^n) in canonical order.
pub fn proj_points(field: &Field, n: usize) -> ProjectiveSpace {
    ProjectiveSpace::new(field, n)
}

/// Image of a point under the projectivity induced by `u`.
pub fn pgl_action(u: &Matrix, p: &ProjPoint) -> Result<ProjPoint> {
    if !u.is_square() || u.cols() != p.rep.len() {
        return Err(Error::DimensionMismatch { expected: u.cols(), found: p.rep.len() });
    }
    if !u.is_invertible() {
        return Err(Error::Singular);
    }
    let mut out = vec![0u8; u.rows()];
    u.mul_raw(&p.rep, &mut out);
    normalize_in_place(u.field(), &mut out);
    Ok(ProjPoint { rep: out })
}

/// The q + 1 points of the line through `p` and `q`, in canonical order.
pub fn line_through(space: &ProjectiveSpace, p: &ProjPoint, q: &ProjPoint) -> Result<Vec<ProjPoint>> {
    if p == q {
        return Err(Error::EqualPoints);
    }
    let a = space.index_of(p)?;
    let b = space.index_of(q)?;
    Ok(space.line_indices(a, b).into_iter().map(|i| space.point(i)).collect())
}

/// GL representatives of PGL(n, q): the invertible matrices whose first
/// non-zero entry in reading order is 1, in lexicographic order.
pub fn enumerate_pgl(field: &Field, n: usize) -> Result<PglIter> {
    Ok(PglIter { inner: enumerate_gl(n, field)? })
}

#[derive(Clone, Debug)]
pub struct PglIter {
    inner: GlIter,
}

impl Iterator for PglIter {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        self.inner.by_ref().find(|m| m.leading_entry() == Some(1))
    }
}

/// Permutation of point indices induced by an invertible matrix.
pub fn point_permutation(space: &ProjectiveSpace, u: &Matrix) -> Vec<usize> {
    let n = space.dim();
    let mut rep = vec![0u8; n];
    let mut img = vec![0u8; n];
    (0..space.len())
        .map(|i| {
            space.point_raw(i, &mut rep);
            u.mul_raw(&rep, &mut img);
            space.index_of_vector(&img).expect("invertible matrices fix no non-zero vector to zero")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gl_order;

    fn gf(p: u32, k: u32) -> Field {
        Field::new(p, k).unwrap()
    }

    fn pt(f: &Field, c: &[u8]) -> ProjPoint {
        normalize(&Vector::new(f, c.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn point_counts() {
        assert_eq!(proj_points(&gf(2, 1), 3).len(), 7);
        assert_eq!(proj_points(&gf(3, 1), 3).len(), 13);
        let line = proj_points(&gf(3, 1), 2);
        let pts: Vec<Vec<u8>> = line.points().map(|p| p.rep().to_vec()).collect();
        assert_eq!(pts, vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![0, 1]]);
    }

    #[test]
    fn count_formula_and_index_roundtrip() {
        for (p, k) in crate::gf::supported_fields() {
            let f = gf(p, k);
            for n in 2..=3 {
                let sp = proj_points(&f, n);
                let q = f.order();
                assert_eq!(sp.len(), (q.pow(n as u32) - 1) / (q - 1));
                if sp.len() > 1000 {
                    continue;
                }
                for (i, point) in sp.points().enumerate() {
                    assert_eq!(sp.index_of(&point).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let f3 = gf(3, 1);
        assert_eq!(pt(&f3, &[0, 2, 1]).rep(), &[0, 1, 2]);
        assert_eq!(pt(&f3, &[1, 0, 0]).rep(), &[1, 0, 0]);
        let f4 = gf(2, 2);
        assert_eq!(pt(&f4, &[2, 3]).rep(), &[1, 2]);
        assert_eq!(normalize(&Vector::new(&f4, vec![0, 0]).unwrap()), Err(Error::ZeroVector));
    }

    #[test]
    fn pgl_action_examples() {
        let f3 = gf(3, 1);
        let p = pt(&f3, &[1, 2]);
        assert_eq!(pgl_action(&Matrix::identity(&f3, 2), &p).unwrap(), p);
        let swap = Matrix::permutation(&f3, &[1, 0]);
        assert_eq!(pgl_action(&swap, &p).unwrap().rep(), &[1, 2]);
        let d = Matrix::diagonal(&f3, &[2, 1]);
        assert_eq!(pgl_action(&d, &pt(&f3, &[1, 1])).unwrap().rep(), &[1, 2]);
        let sing = Matrix::diagonal(&f3, &[0, 1]);
        assert_eq!(pgl_action(&sing, &p), Err(Error::Singular));
    }

    #[test]
    fn line_examples() {
        let f2 = gf(2, 1);
        let sp = proj_points(&f2, 3);
        let l = line_through(&sp, &pt(&f2, &[1, 0, 0]), &pt(&f2, &[0, 1, 0])).unwrap();
        let mut reps: Vec<Vec<u8>> = l.iter().map(|p| p.rep().to_vec()).collect();
        reps.sort();
        assert_eq!(reps, vec![vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 0]]);

        let f3 = gf(3, 1);
        let sp = proj_points(&f3, 2);
        let l = line_through(&sp, &pt(&f3, &[1, 1]), &pt(&f3, &[0, 1])).unwrap();
        assert_eq!(l.len(), 4);

        let f4 = gf(2, 2);
        let sp = proj_points(&f4, 3);
        assert_eq!(line_through(&sp, &pt(&f4, &[1, 0, 0]), &pt(&f4, &[0, 1, 0])).unwrap().len(), 5);
        let p = pt(&f4, &[1, 0, 0]);
        assert_eq!(line_through(&sp, &p, &p), Err(Error::EqualPoints));
    }

    #[test]
    fn lines_incidence() {
        for (f, n) in [(gf(2, 1), 3), (gf(3, 1), 3), (gf(2, 2), 3), (gf(2, 1), 4)] {
            let sp = proj_points(&f, n);
            let lines = sp.lines();
            assert!(lines.iter().all(|l| l.len() == f.order() + 1));
            // two distinct points lie on exactly one line
            for a in 0..sp.len() {
                for b in a + 1..sp.len() {
                    let c = lines.iter().filter(|l| l.contains(&a) && l.contains(&b)).count();
                    assert_eq!(c, 1);
                }
            }
        }
        assert_eq!(proj_points(&gf(2, 1), 3).lines().len(), 7);
        assert_eq!(proj_points(&gf(3, 1), 3).lines().len(), 13);
    }

    #[test]
    fn pgl_counts() {
        assert_eq!(enumerate_pgl(&gf(2, 1), 3).unwrap().count(), 168);
        assert_eq!(enumerate_pgl(&gf(3, 1), 2).unwrap().count(), 24);
        assert_eq!(enumerate_pgl(&gf(5, 1), 2).unwrap().count(), 120);
        assert_eq!(enumerate_pgl(&gf(2, 2), 2).unwrap().count() as u128, gl_order(2, 4) / 3);
    }

    #[test]
    fn action_is_a_group_action_and_ignores_scalars() {
        let f = gf(3, 1);
        let sp = proj_points(&f, 2);
        let gl: Vec<Matrix> = enumerate_gl(2, &f).unwrap().collect();
        for u in gl.iter().step_by(5) {
            for v in gl.iter().step_by(7) {
                let uv = u.mul(v).unwrap();
                for p in sp.points() {
                    let lhs = pgl_action(&uv, &p).unwrap();
                    let rhs = pgl_action(u, &pgl_action(v, &p).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                    assert_eq!(pgl_action(&u.scale(2), &p).unwrap(), pgl_action(u, &p).unwrap());
                }
            }
        }
    }

    #[test]
    fn pgl_representatives_are_distinct_actions() {
        let f = gf(3, 1);
        let sp = proj_points(&f, 2);
        let mut perms: Vec<Vec<usize>> = enumerate_pgl(&f, 2).unwrap().map(|m| point_permutation(&sp, &m)).collect();
        perms.sort();
        perms.dedup();
        // PGL(2,3) ≅ S4 acts faithfully on the 4 points
        assert_eq!(perms.len(), 24);
    }
}
