//! Semilinear maps l(x) = M·σ(x) and the projective maps they induce.

use crate::error::{Error, Result};
use crate::gf::{enumerate_homs, FieldElement, FieldHom};
use crate::linalg::{rank_of_rows, Matrix, Vector, VectorSpace};
use crate::maps::{MappingTable, PointMap};
use crate::projective::ProjectiveSpace;

/// Upper bound on the k-subsets visited by the definitional embedding check.
pub const SUBSET_LIMIT: u128 = 50_000_000;

/// A σ-semilinear map F^n → F′^n′. Column i of the matrix is l(e_i); σ is
/// applied to the coordinates before the matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemilinearMap {
    sigma: FieldHom,
    matrix: Matrix,
}

impl SemilinearMap {
    pub fn new(sigma: FieldHom, matrix: Matrix) -> Result<SemilinearMap> {
        if matrix.field() != sigma.target() {
            return Err(Error::FieldMismatch {
                expected: sigma.target().to_string(),
                found: matrix.field().to_string(),
            });
        }
        Ok(SemilinearMap { sigma, matrix })
    }

    pub fn linear(matrix: Matrix) -> SemilinearMap {
        SemilinearMap { sigma: FieldHom::identity(matrix.field()), matrix }
    }

    pub fn sigma(&self) -> &FieldHom {
        &self.sigma
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn domain(&self) -> VectorSpace {
        VectorSpace::new(self.sigma.source(), self.matrix.cols())
    }

    pub fn codomain(&self) -> VectorSpace {
        VectorSpace::new(self.sigma.target(), self.matrix.rows())
    }

    #[inline]
    pub fn apply_raw(&self, x: &[u8], twisted: &mut [u8], out: &mut [u8]) {
        for (t, &c) in twisted.iter_mut().zip(x) {
            *t = self.sigma.apply_raw(c);
        }
        self.matrix.mul_raw(twisted, out);
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        self.domain().check(x)?;
        let mut twisted = vec![0u8; x.dim()];
        let mut out = vec![0u8; self.matrix.rows()];
        self.apply_raw(x.coords(), &mut twisted, &mut out);
        Ok(Vector::from_raw(self.sigma.target(), out))
    }

    /// a·l, semilinear over b ↦ aσ(b)a⁻¹ (σ itself, the field being commutative).
    pub fn scale(&self, a: u8) -> SemilinearMap {
        SemilinearMap { sigma: self.sigma.conjugate(a.max(1)), matrix: self.matrix.scale(a) }
    }

    /// u′ ∘ l for a linear map u′ of the codomain.
    pub fn then_linear(&self, u: &Matrix) -> Result<SemilinearMap> {
        SemilinearMap::new(self.sigma.clone(), u.mul(&self.matrix)?)
    }

    /// l ∘ u for a linear map u of the domain: matrix M·σ(u).
    pub fn after_linear(&self, u: &Matrix) -> Result<SemilinearMap> {
        if u.field() != self.sigma.source() {
            return Err(Error::FieldMismatch {
                expected: self.sigma.source().to_string(),
                found: u.field().to_string(),
            });
        }
        let twisted: Vec<u8> = u.data().iter().map(|&c| self.sigma.apply_raw(c)).collect();
        let tu = Matrix::new(self.sigma.target(), u.rows(), u.cols(), twisted)?;
        SemilinearMap::new(self.sigma.clone(), self.matrix.mul(&tu)?)
    }

    /// The full value table of l.
    pub fn to_table(&self) -> Result<MappingTable> {
        let mut twisted = vec![0u8; self.matrix.cols()];
        MappingTable::from_fn(&self.domain(), &self.codomain(), |x| {
            let mut out = vec![0u8; self.matrix.rows()];
            self.apply_raw(x, &mut twisted, &mut out);
            out
        })
    }

    /// No non-zero vector maps to zero (checked over the whole domain).
    pub fn is_injective(&self) -> bool {
        if self.matrix.rank() == self.matrix.cols() {
            return true;
        }
        let dom = self.domain();
        let mut x = vec![0u8; dom.dim()];
        let mut tw = vec![0u8; dom.dim()];
        let mut out = vec![0u8; self.matrix.rows()];
        (1..dom.size()).all(|i| {
            dom.decode(i, &mut x);
            self.apply_raw(&x, &mut tw, &mut out);
            out.iter().any(|&c| c != 0)
        })
    }

    /// Injective and independent k-sets go to independent k-sets.
    ///
    /// Full column rank settles it; otherwise falls back to
    /// [`SemilinearMap::is_k_embedding_exhaustive`].
    pub fn is_k_embedding(&self, k: usize) -> Result<bool> {
        let n = self.matrix.cols();
        if k == 0 || k > n {
            return Err(Error::DimensionMismatch { expected: n, found: k });
        }
        if self.matrix.rank() == n {
            return Ok(true);
        }
        self.is_k_embedding_exhaustive(k)
    }

    /// The definition, checked over every independent k-subset of the domain.
    pub fn is_k_embedding_exhaustive(&self, k: usize) -> Result<bool> {
        let n = self.matrix.cols();
        if k == 0 || k > n {
            return Err(Error::DimensionMismatch { expected: n, found: k });
        }
        let dom = self.domain();
        let size = dom.size();
        let subsets = binomial(size as u128 - 1, k as u128);
        if subsets > SUBSET_LIMIT {
            return Err(Error::TooLarge { what: format!("{k}-subsets of {dom}"), count: subsets, limit: SUBSET_LIMIT });
        }
        if !self.is_injective() {
            return Ok(false);
        }
        let table = self.to_table()?;
        let src: Vec<Vec<u8>> = (0..size).map(|i| dom.vector(i).into_coords()).collect();
        let mut chosen = Vec::with_capacity(k);
        Ok(independent_subsets_preserved(&src, &table, dom.field(), self.sigma.target(), k, 1, &mut chosen))
    }

    pub fn is_strong_embedding(&self) -> bool {
        self.matrix.rank() == self.matrix.cols()
    }

    /// π(l): ⟨x⟩ ↦ ⟨l(x)⟩.
    pub fn induced_projective(&self) -> Result<PointMap> {
        if !self.is_injective() {
            return Err(Error::NotInjective);
        }
        let dom = ProjectiveSpace::of(&self.domain());
        let cod = ProjectiveSpace::of(&self.codomain());
        let n = dom.dim();
        let mut rep = vec![0u8; n];
        let mut tw = vec![0u8; n];
        let mut out = vec![0u8; cod.dim()];
        let table = (0..dom.len())
            .map(|i| {
                dom.point_raw(i, &mut rep);
                self.apply_raw(&rep, &mut tw, &mut out);
                cod.index_of_vector(&out).expect("injective map sends non-zero vectors to non-zero vectors")
            })
            .collect();
        PointMap::new(&dom, &cod, table)
    }

    /// Recognizes a table that is itself semilinear: g(x) = M·σ(x) for the
    /// matrix of columns g(e_i) and some homomorphism σ.
    pub fn from_table(g: &MappingTable) -> Option<SemilinearMap> {
        let dom = g.domain();
        let cod = g.codomain();
        let columns: Vec<Vec<u8>> =
            (0..dom.dim()).map(|i| g.image_raw(dom.encode(dom.unit(i).coords())).to_vec()).collect();
        let matrix = Matrix::from_columns(cod.field(), cod.dim(), &columns).ok()?;
        enumerate_homs(dom.field(), cod.field()).into_iter().find_map(|sigma| {
            let l = SemilinearMap { sigma, matrix: matrix.clone() };
            (l.to_table().ok()? == *g).then_some(l)
        })
    }
}

fn independent_subsets_preserved(
    src: &[Vec<u8>],
    table: &MappingTable,
    src_field: &crate::gf::Field,
    dst_field: &crate::gf::Field,
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == k {
        let imgs = chosen.iter().map(|&i| table.image_raw(i).to_vec()).collect();
        return rank_of_rows(dst_field, imgs, table.codomain().dim()) == k;
    }
    for i in start..src.len() {
        chosen.push(i);
        let rows: Vec<Vec<u8>> = chosen.iter().map(|&j| src[j].clone()).collect();
        let independent = rank_of_rows(src_field, rows, src[0].len()) == chosen.len();
        let ok = !independent || independent_subsets_preserved(src, table, src_field, dst_field, k, i + 1, chosen);
        chosen.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// The non-zero scalar a with g = a·l everywhere, if there is one.
pub fn scalar_multiple_of(g: &MappingTable, l: &SemilinearMap) -> Option<FieldElement> {
    if *g.domain() != l.domain() || *g.codomain() != l.codomain() {
        return None;
    }
    let f = l.codomain().field().clone();
    let lt = l.to_table().ok()?;
    let mut scalar = None;
    for i in 0..g.len() {
        let (gx, lx) = (g.image_raw(i), lt.image_raw(i));
        if let Some(j) = lx.iter().position(|&c| c != 0) {
            let a = f.div(gx[j], lx[j]);
            if a == 0 {
                return None;
            }
            scalar = Some(a);
            break;
        }
    }
    let a = scalar?;
    let all = (0..g.len()).all(|i| g.image_raw(i).iter().zip(lt.image_raw(i)).all(|(&x, &y)| x == f.mul(a, y)));
    all.then(|| f.element(a).expect("field value"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::linalg::enumerate_gl;

    fn gf(p: u32, k: u32) -> Field {
        Field::new(p, k).unwrap()
    }

    fn embedding(src: &Field, dst: &Field) -> FieldHom {
        enumerate_homs(src, dst).remove(0)
    }

    #[test]
    fn apply_examples() {
        let f3 = gf(3, 1);
        let l = SemilinearMap::linear(Matrix::identity(&f3, 3));
        let x = Vector::new(&f3, vec![1, 2, 0]).unwrap();
        assert_eq!(l.apply(&x).unwrap(), x);

        let f4 = gf(2, 2);
        let l = SemilinearMap::new(FieldHom::frobenius(&f4, 1), Matrix::identity(&f4, 3)).unwrap();
        let x = Vector::new(&f4, vec![2, 3, 0]).unwrap();
        assert_eq!(l.apply(&x).unwrap().coords(), &[3, 2, 0]);

        let f2 = gf(2, 1);
        let l = SemilinearMap::new(embedding(&f2, &f4), Matrix::identity(&f4, 3)).unwrap();
        let x = Vector::new(&f2, vec![1, 1, 0]).unwrap();
        let y = l.apply(&x).unwrap();
        assert_eq!(y.coords(), &[1, 1, 0]);
        assert_eq!(y.field(), &f4);
        assert!(l.apply(&Vector::new(&f4, vec![1, 1, 0]).unwrap()).is_err());
    }

    #[test]
    fn semilinearity_holds_exhaustively() {
        let f4 = gf(2, 2);
        let f16 = gf(2, 4);
        let u = Matrix::from_rows(&f16, &[vec![1, 5, 0], vec![7, 0, 3], vec![0, 2, 11]]).unwrap();
        assert!(u.is_invertible());
        for sigma in enumerate_homs(&f4, &f16) {
            let l = SemilinearMap::new(sigma.clone(), u.clone()).unwrap();
            let dom = l.domain();
            for x in dom.vectors() {
                for y in dom.vectors().step_by(3) {
                    assert_eq!(l.apply(&x.add(&y)).unwrap(), l.apply(&x).unwrap().add(&l.apply(&y).unwrap()));
                }
                for a in f4.values() {
                    assert_eq!(l.apply(&x.scale(a)).unwrap(), l.apply(&x).unwrap().scale(sigma.apply_raw(a)));
                }
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let f2 = gf(2, 1);
        let id = SemilinearMap::linear(Matrix::identity(&f2, 3));
        assert!(id.is_k_embedding(3).unwrap());
        assert!(id.is_k_embedding_exhaustive(3).unwrap());
        assert!(id.is_strong_embedding());

        let m = Matrix::from_columns(&f2, 3, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]).unwrap();
        let l = SemilinearMap::linear(m);
        assert!(!l.is_injective());
        assert!(!l.is_k_embedding(3).unwrap());
        assert!(!l.is_strong_embedding());

        let f4 = gf(2, 2);
        let l = SemilinearMap::new(embedding(&f2, &f4), Matrix::identity(&f4, 3)).unwrap();
        assert!(l.is_k_embedding_exhaustive(3).unwrap());
        assert!(l.is_strong_embedding());
        assert!(l.is_k_embedding(0).is_err());
    }

    #[test]
    fn independent_triples_of_gf2_cubed() {
        // 7·6·4/3! independent triples
        let f2 = gf(2, 1);
        let dom = VectorSpace::new(&f2, 3);
        let vs: Vec<Vector> = dom.vectors().collect();
        let mut count = 0;
        for a in 0..8 {
            for b in a + 1..8 {
                for c in b + 1..8 {
                    if crate::linalg::is_independent(&[vs[a].clone(), vs[b].clone(), vs[c].clone()]) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 28);
    }

    #[test]
    fn non_strong_injection_over_extension() {
        // x ↦ x1 + ω x2 is injective GF(2)^2 → GF(4)^1 but not a 2-embedding
        let f2 = gf(2, 1);
        let f4 = gf(2, 2);
        let m = Matrix::from_rows(&f4, &[vec![1, 2]]).unwrap();
        let l = SemilinearMap::new(embedding(&f2, &f4), m).unwrap();
        assert!(l.is_injective());
        assert!(l.is_k_embedding(1).unwrap());
        assert!(!l.is_k_embedding(2).unwrap());
        assert!(!l.is_strong_embedding());
    }

    #[test]
    fn strong_iff_full_rank_agrees_with_definition() {
        let f2 = gf(2, 1);
        // every 3x3 matrix over GF(2)
        let sp9 = VectorSpace::new(&f2, 9);
        for i in 0..sp9.size() {
            let m = Matrix::new(&f2, 3, 3, sp9.vector(i).into_coords()).unwrap();
            let l = SemilinearMap::linear(m);
            assert_eq!(l.is_strong_embedding(), l.is_k_embedding_exhaustive(3).unwrap());
        }
        // 4x3 matrices over GF(4) with Frobenius twist, sampled
        let f4 = gf(2, 2);
        let sp12 = VectorSpace::new(&f4, 12);
        for i in (0..sp12.size()).step_by(104_729) {
            let m = Matrix::new(&f4, 4, 3, sp12.vector(i).into_coords()).unwrap();
            let l = SemilinearMap::new(FieldHom::frobenius(&f4, 1), m).unwrap();
            assert_eq!(l.is_strong_embedding(), l.is_k_embedding_exhaustive(3).unwrap());
        }
    }

    #[test]
    fn induced_projective_examples() {
        let f2 = gf(2, 1);
        let id = SemilinearMap::linear(Matrix::identity(&f2, 3));
        let p = id.induced_projective().unwrap();
        assert_eq!(p.table(), &(0..7).collect::<Vec<_>>());

        let f3 = gf(3, 1);
        let d = SemilinearMap::linear(Matrix::diagonal(&f3, &[1, 2]));
        // points in order <1,0>, <1,1>, <1,2>, <0,1>
        assert_eq!(d.induced_projective().unwrap().table(), &[0, 2, 1, 3]);

        let f4 = gf(2, 2);
        let u = enumerate_gl(3, &f4).unwrap().nth(777).unwrap();
        let l = SemilinearMap::new(FieldHom::frobenius(&f4, 1), u).unwrap();
        let base = l.induced_projective().unwrap();
        for a in f4.nonzero_values() {
            assert_eq!(l.scale(a).induced_projective().unwrap(), base);
        }

        let sing = SemilinearMap::linear(Matrix::diagonal(&f3, &[1, 0]));
        assert_eq!(sing.induced_projective(), Err(Error::NotInjective));
    }

    #[test]
    fn line_goes_into_a_line() {
        let f4 = gf(2, 2);
        let u = enumerate_gl(3, &f4).unwrap().nth(4242).unwrap();
        let l = SemilinearMap::new(FieldHom::frobenius(&f4, 1), u).unwrap();
        let f = l.induced_projective().unwrap();
        let dom = f.domain().clone();
        for line in dom.lines() {
            let rows = line.iter().map(|&i| f.codomain().point(f.image_index(i)).rep().to_vec()).collect();
            assert!(rank_of_rows(&f4, rows, 3) <= 2);
        }
    }

    #[test]
    fn scalar_multiple_examples() {
        let f4 = gf(2, 2);
        let u = enumerate_gl(3, &f4).unwrap().nth(99).unwrap();
        let l = SemilinearMap::new(FieldHom::frobenius(&f4, 1), u).unwrap();
        let g = l.to_table().unwrap();
        assert_eq!(scalar_multiple_of(&g, &l).unwrap().value(), 1);
        let g2 = l.scale(2).to_table().unwrap();
        assert_eq!(scalar_multiple_of(&g2, &l).unwrap().value(), 2);

        let mut raw = g.raw().to_vec();
        raw[0] = 1;
        let bad = MappingTable::from_raw(g.domain(), g.codomain(), raw).unwrap();
        assert!(scalar_multiple_of(&bad, &l).is_none());
    }

    #[test]
    fn from_table_recovers_sigma() {
        let f4 = gf(2, 2);
        let u = enumerate_gl(3, &f4).unwrap().nth(31337).unwrap();
        for sigma in enumerate_homs(&f4, &f4) {
            let l = SemilinearMap::new(sigma, u.clone()).unwrap();
            assert_eq!(SemilinearMap::from_table(&l.to_table().unwrap()), Some(l));
        }
        let f2 = gf(2, 1);
        let v = VectorSpace::new(&f2, 2);
        let g = MappingTable::from_fn(&v, &v, |x| vec![x[0] * x[1], 0]).unwrap();
        assert_eq!(SemilinearMap::from_table(&g), None);
    }

    #[test]
    fn composition_with_linear_maps() {
        let f4 = gf(2, 2);
        let gl: Vec<Matrix> = enumerate_gl(2, &f4).unwrap().step_by(17).collect();
        let l = SemilinearMap::new(FieldHom::frobenius(&f4, 1), gl[1].clone()).unwrap();
        let dom = l.domain();
        for u in &gl {
            let lu = l.after_linear(u).unwrap();
            let ul = l.then_linear(u).unwrap();
            for x in dom.vectors() {
                assert_eq!(lu.apply(&x).unwrap(), l.apply(&u.apply(&x).unwrap()).unwrap());
                assert_eq!(ul.apply(&x).unwrap(), u.apply(&l.apply(&x).unwrap()).unwrap());
            }
        }
    }
}
