//! Arbitrary maps V → V′ and P(V) → P(V′) stored as dense tables.

use crate::error::{Error, Result};
use crate::linalg::{Subspace, Vector, VectorSpace};
use crate::projective::{ProjPoint, ProjectiveSpace};

/// Largest domain (number of vectors or points) a table may have.
pub const TABLE_LIMIT: usize = 1 << 22;

/// A function V → V′ given by the image of every vector, indexed by the
/// vector's integer encoding.
#[derive(Clone, PartialEq, Eq)]
pub struct MappingTable {
    domain: VectorSpace,
    codomain: VectorSpace,
    data: Vec<u8>,
}

impl std::fmt::Debug for MappingTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MappingTable({} -> {}, ", self.domain, self.codomain)?;
        f.debug_list().entries(self.data.chunks(self.codomain.dim().max(1))).finish()?;
        write!(f, ")")
    }
}

fn domain_size(space: &VectorSpace) -> Result<usize> {
    match space.checked_size() {
        Some(s) if s <= TABLE_LIMIT => Ok(s),
        _ => Err(Error::TooLarge {
            what: format!("table over {space}"),
            count: (space.field().order() as u128).saturating_pow(space.dim() as u32),
            limit: TABLE_LIMIT as u128,
        }),
    }
}

impl MappingTable {
    pub fn new(domain: &VectorSpace, codomain: &VectorSpace, images: &[Vector]) -> Result<MappingTable> {
        let size = domain_size(domain)?;
        if images.len() != size {
            return Err(Error::DimensionMismatch { expected: size, found: images.len() });
        }
        let mut data = Vec::with_capacity(size * codomain.dim());
        for v in images {
            codomain.check(v)?;
            data.extend_from_slice(v.coords());
        }
        Ok(MappingTable { domain: domain.clone(), codomain: codomain.clone(), data })
    }

    /// Flat row-major image data, `codomain.dim()` entries per domain vector.
    pub fn from_raw(domain: &VectorSpace, codomain: &VectorSpace, data: Vec<u8>) -> Result<MappingTable> {
        let size = domain_size(domain)?;
        if data.len() != size * codomain.dim() {
            return Err(Error::DimensionMismatch { expected: size * codomain.dim(), found: data.len() });
        }
        if let Some(&bad) = data.iter().find(|&&c| !codomain.field().contains(c as u64)) {
            return Err(Error::ValueOutOfRange { value: bad as u64, field: codomain.field().to_string() });
        }
        Ok(MappingTable { domain: domain.clone(), codomain: codomain.clone(), data })
    }

    pub fn from_fn(
        domain: &VectorSpace,
        codomain: &VectorSpace,
        mut f: impl FnMut(&[u8]) -> Vec<u8>,
    ) -> Result<MappingTable> {
        let size = domain_size(domain)?;
        let mut data = Vec::with_capacity(size * codomain.dim());
        let mut x = vec![0u8; domain.dim()];
        for i in 0..size {
            domain.decode(i, &mut x);
            let y = f(&x);
            if y.len() != codomain.dim() {
                return Err(Error::DimensionMismatch { expected: codomain.dim(), found: y.len() });
            }
            data.extend_from_slice(&y);
        }
        MappingTable::from_raw(domain, codomain, data)
    }

    pub fn domain(&self) -> &VectorSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &VectorSpace {
        &self.codomain
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.codomain.dim().max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn raw(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn image_raw(&self, index: usize) -> &[u8] {
        let d = self.codomain.dim();
        &self.data[index * d..(index + 1) * d]
    }

    pub fn image(&self, x: &Vector) -> Result<Vector> {
        let i = self.domain.index_of(x)?;
        Ok(Vector::from_raw(self.codomain.field(), self.image_raw(i).to_vec()))
    }

    pub fn images(&self) -> std::slice::Chunks<'_, u8> {
        self.data.chunks(self.codomain.dim())
    }

    /// Constant on V ∖ {0}.
    pub fn is_trivial(&self) -> bool {
        let first = self.image_raw(1.min(self.len() - 1));
        (1..self.len()).all(|i| self.image_raw(i) == first)
    }

    /// V_g, the span of the whole image.
    pub fn image_span(&self) -> Subspace {
        Subspace::from_raw(self.codomain.field(), self.codomain.dim(), self.images().map(<[u8]>::to_vec).collect())
    }

    /// S_g, the span of g(S).
    pub fn span_of_image_of(&self, s: &Subspace) -> Subspace {
        let rows = s.elements().iter().map(|x| self.image_raw(self.domain.encode(x)).to_vec()).collect();
        Subspace::from_raw(self.codomain.field(), self.codomain.dim(), rows)
    }
}

/// A function P(V) → P(V′) given by the image index of every point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointMap {
    domain: ProjectiveSpace,
    codomain: ProjectiveSpace,
    table: Vec<usize>,
}

impl PointMap {
    pub fn new(domain: &ProjectiveSpace, codomain: &ProjectiveSpace, table: Vec<usize>) -> Result<PointMap> {
        if domain.len() > TABLE_LIMIT {
            return Err(Error::TooLarge {
                what: format!("{domain:?}"),
                count: domain.len() as u128,
                limit: TABLE_LIMIT as u128,
            });
        }
        if table.len() != domain.len() {
            return Err(Error::DimensionMismatch { expected: domain.len(), found: table.len() });
        }
        if let Some(&bad) = table.iter().find(|&&i| i >= codomain.len()) {
            return Err(Error::ValueOutOfRange { value: bad as u64, field: format!("{codomain:?}") });
        }
        Ok(PointMap { domain: domain.clone(), codomain: codomain.clone(), table })
    }

    pub fn domain(&self) -> &ProjectiveSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &ProjectiveSpace {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn image_index(&self, point: usize) -> usize {
        self.table[point]
    }

    pub fn image(&self, p: &ProjPoint) -> Result<ProjPoint> {
        Ok(self.codomain.point(self.table[self.domain.index_of(p)?]))
    }

    pub fn is_constant(&self) -> bool {
        self.table.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        self.table.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
    }

    /// V_f, the span of the image points.
    pub fn image_span(&self) -> Subspace {
        let rows = self.table.iter().map(|&i| self.codomain.point(i).rep().to_vec()).collect();
        Subspace::from_raw(self.codomain.field(), self.codomain.dim(), rows)
    }

    /// S_f, the span of f(P(S)).
    pub fn span_of_image_of(&self, s: &Subspace) -> Subspace {
        let rows = s
            .elements()
            .iter()
            .filter_map(|x| self.domain.index_of_vector(x))
            .map(|p| self.codomain.point(self.table[p]).rep().to_vec())
            .collect();
        Subspace::from_raw(self.codomain.field(), self.codomain.dim(), rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    #[test]
    fn constant_table_is_trivial() {
        let f = Field::new(2, 1).unwrap();
        let v = VectorSpace::new(&f, 3);
        let g =
            MappingTable::from_fn(&v, &v, |x| if x.iter().any(|&c| c != 0) { vec![1, 0, 0] } else { vec![0, 1, 0] })
                .unwrap();
        assert!(g.is_trivial());
        assert_eq!(g.image_span().dim(), 2);
        let id = MappingTable::from_fn(&v, &v, <[u8]>::to_vec).unwrap();
        assert!(!id.is_trivial());
        assert_eq!(id.image_span().dim(), 3);
        assert_eq!(id.image(&v.unit(1)).unwrap(), v.unit(1));
    }

    #[test]
    fn table_validation() {
        let f = Field::new(2, 1).unwrap();
        let v = VectorSpace::new(&f, 2);
        assert!(MappingTable::from_raw(&v, &v, vec![0; 7]).is_err());
        assert!(MappingTable::from_raw(&v, &v, vec![2; 8]).is_err());
        let p = ProjectiveSpace::of(&v);
        assert!(PointMap::new(&p, &p, vec![0, 1]).is_err());
        assert!(PointMap::new(&p, &p, vec![0, 1, 3]).is_err());
        let m = PointMap::new(&p, &p, vec![0, 0, 0]).unwrap();
        assert!(m.is_constant());
        assert!(!m.is_injective());
    }
}
