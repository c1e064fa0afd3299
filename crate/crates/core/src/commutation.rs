//! Deciding whether a map commutes with the general linear (or projective)
//! group, and the structure such maps are forced to have.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extendability::solve_projective;
use crate::gf::{Field, FieldElement};
use crate::linalg::{
    all_subspaces, enumerate_gl, gl_generators, rank_of_rows, ForcedMap, Matrix, Subspace, Vector, VectorSpace,
};
use crate::maps::{MappingTable, PointMap};
use crate::projective::{enumerate_pgl, point_permutation, ProjectiveSpace};
use crate::reconstruct::{reconstruct_semilinear, ReconstructFailure};
use crate::semilinear::{scalar_multiple_of, SemilinearMap, SUBSET_LIMIT};

/// Largest number of tables the exhaustive sweep will visit.
pub const EXHAUSTIVE_TABLE_LIMIT: u128 = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckMode {
    /// Only a generating set of GL(V); sound because partners compose.
    Generators,
    /// Every element of GL(V) (resp. PGL(V)).
    Exhaustive,
}

impl CheckMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckMode::Generators => "generators",
            CheckMode::Exhaustive => "exhaustive",
        }
    }
}

/// How a non-trivial GL-mapping with small image span was matched to a
/// strong semilinear embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongEmbeddingVerdict {
    pub holds: bool,
    /// a with g = a·l.
    pub scalar: Option<FieldElement>,
    pub map: Option<SemilinearMap>,
    pub method: &'static str,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlMappingReport {
    pub is_gl_mapping: bool,
    pub trivial: bool,
    pub dim_vg: usize,
    pub domain_dim: usize,
    pub mode: CheckMode,
    pub checked: usize,
    /// An element of GL(V) with no partner in GL(V′).
    pub witness_failure: Option<Matrix>,
    pub strong_embedding: Option<StrongEmbeddingVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PglMappingReport {
    pub is_pgl_mapping: bool,
    pub constant: bool,
    pub dim_vf: usize,
    pub domain_dim: usize,
    pub mode: CheckMode,
    pub checked: usize,
    /// A GL representative of an element of PGL(V) with no partner.
    pub witness_failure: Option<Matrix>,
    pub induced: Option<std::result::Result<SemilinearMap, ReconstructFailure>>,
}

/// perm[i] is the index of u(x_i), where x_i is the vector with index i.
pub fn domain_permutation(space: &VectorSpace, u: &Matrix) -> Vec<usize> {
    let mut x = vec![0u8; space.dim()];
    let mut y = vec![0u8; space.dim()];
    (0..space.size())
        .map(|i| {
            space.decode(i, &mut x);
            u.mul_raw(&x, &mut y);
            space.encode(&y)
        })
        .collect()
}

/// A basis of V_g chosen greedily among the images, and the coordinates of
/// every image in that basis. Buffers are reused between tables.
#[derive(Clone, Debug, Default)]
pub struct ImageRelations {
    basis: Vec<usize>,
    coeffs: Vec<u8>,
    echelon: Vec<u8>,
    combos: Vec<u8>,
    pivots: Vec<usize>,
    v: Vec<u8>,
    combo: Vec<u8>,
    target: Vec<u8>,
    d: usize,
}

impl ImageRelations {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Recomputes the relations for `images` (row-major, `d` entries each).
    pub fn compute(&mut self, field: &Field, images: &[u8], d: usize) {
        let count = images.len() / d.max(1);
        self.d = d;
        self.basis.clear();
        self.pivots.clear();
        self.coeffs.clear();
        self.coeffs.resize(count * d, 0);
        self.echelon.resize(d * d, 0);
        self.combos.resize(d * d, 0);
        self.v.resize(d, 0);
        self.combo.resize(d, 0);
        self.target.resize(d, 0);
        for i in 0..count {
            self.v.copy_from_slice(&images[i * d..(i + 1) * d]);
            self.combo.fill(0);
            for (k, &p) in self.pivots.iter().enumerate() {
                let c = self.v[p];
                if c != 0 {
                    let a = field.neg(c);
                    for t in 0..d {
                        self.v[t] = field.add(self.v[t], field.mul(a, self.echelon[k * d + t]));
                        self.combo[t] = field.add(self.combo[t], field.mul(a, self.combos[k * d + t]));
                    }
                }
            }
            let out = &mut self.coeffs[i * d..(i + 1) * d];
            match self.v.iter().position(|&c| c != 0) {
                Some(p) => {
                    let r = self.basis.len();
                    let inv = field.inv(self.v[p]);
                    self.combo[r] = field.add(self.combo[r], 1);
                    for t in 0..d {
                        self.echelon[r * d + t] = field.mul(inv, self.v[t]);
                        self.combos[r * d + t] = field.mul(inv, self.combo[t]);
                    }
                    self.pivots.push(p);
                    self.basis.push(i);
                    out[r] = 1;
                }
                None => {
                    for (o, &c) in out.iter_mut().zip(&self.combo[..d]) {
                        *o = field.neg(c);
                    }
                }
            }
        }
    }

    /// Whether x_i ↦ images[perm[i]] is compatible with a linear map on V_g,
    /// i.e. whether some u′ satisfies g∘u = u′∘g for the u behind `perm`.
    pub fn admits_partner(&mut self, field: &Field, images: &[u8], perm: &[u32]) -> bool {
        let d = self.d;
        let r = self.basis.len();
        for i in 0..perm.len() {
            let c = &self.coeffs[i * d..i * d + r];
            self.target.fill(0);
            for (j, &cj) in c.iter().enumerate() {
                if cj != 0 {
                    let src = perm[self.basis[j]] as usize * d;
                    for t in 0..d {
                        self.target[t] = field.add(self.target[t], field.mul(cj, images[src + t]));
                    }
                }
            }
            let img = perm[i] as usize;
            if self.target[..] != images[img * d..(img + 1) * d] {
                return false;
            }
        }
        true
    }
}

fn compact_permutation(space: &VectorSpace, u: &Matrix) -> Vec<u32> {
    domain_permutation(space, u).into_iter().map(|i| i as u32).collect()
}

fn group_permutations(space: &VectorSpace, mode: CheckMode) -> Result<Vec<Vec<u32>>> {
    let field = space.field();
    Ok(match mode {
        CheckMode::Generators => {
            gl_generators(space.dim(), field).iter().map(|u| compact_permutation(space, u)).collect()
        }
        CheckMode::Exhaustive => enumerate_gl(space.dim(), field)?.map(|u| compact_permutation(space, &u)).collect(),
    })
}

fn is_trivial_raw(images: &[u8], d: usize) -> bool {
    let count = images.len() / d.max(1);
    count <= 2 || (2..count).all(|i| images[i * d..(i + 1) * d] == images[d..2 * d])
}

/// Matches g to a strong semilinear embedding up to a scalar. With n ≥ 3 the
/// induced point map is reconstructed and compared; below that g itself is
/// tested for semilinearity.
pub fn strong_embedding_verdict(g: &MappingTable) -> StrongEmbeddingVerdict {
    let dom = g.domain();
    let n = dom.dim();
    let fail = |method, msg: String| StrongEmbeddingVerdict {
        holds: false,
        scalar: None,
        map: None,
        method,
        failure: Some(msg),
    };
    if n >= 3 {
        let pdom = ProjectiveSpace::of(dom);
        let pcod = ProjectiveSpace::of(g.codomain());
        let mut table = Vec::with_capacity(pdom.len());
        for p in 0..pdom.len() {
            let x = pdom.point(p);
            match pcod.index_of_vector(g.image_raw(dom.encode(x.rep()))) {
                Some(i) => table.push(i),
                None => return fail("projective", format!("non-zero vector {:?} maps to zero", x.rep())),
            }
        }
        let f = PointMap::new(&pdom, &pcod, table).expect("indices come from the codomain");
        match reconstruct_semilinear(&f) {
            Err(e) => fail("projective", e.to_string()),
            Ok(l) => match scalar_multiple_of(g, &l) {
                None => fail("projective", "not a scalar multiple of the reconstructed map".into()),
                Some(a) => StrongEmbeddingVerdict {
                    holds: l.is_strong_embedding(),
                    scalar: Some(a),
                    map: Some(l),
                    method: "projective",
                    failure: None,
                },
            },
        }
    } else {
        match SemilinearMap::from_table(g) {
            None => fail("direct", "not semilinear".into()),
            Some(l) => StrongEmbeddingVerdict {
                holds: l.is_strong_embedding(),
                scalar: Some(g.codomain().field().one()),
                map: Some(l),
                method: "direct",
                failure: None,
            },
        }
    }
}

/// Precomputed action of GL(V) (or of its generators) on the vectors of V,
/// reusable across many tables with the same domain.
#[derive(Clone, Debug)]
pub struct GlChecker {
    domain: VectorSpace,
    mode: CheckMode,
    group: Vec<Vec<u32>>,
}

impl GlChecker {
    pub fn new(domain: &VectorSpace, mode: CheckMode) -> Result<GlChecker> {
        Ok(GlChecker { domain: domain.clone(), mode, group: group_permutations(domain, mode)? })
    }

    pub fn mode(&self) -> CheckMode {
        self.mode
    }

    /// The k-th group element in checking order.
    fn element(&self, k: usize) -> Matrix {
        let (n, field) = (self.domain.dim(), self.domain.field());
        match self.mode {
            CheckMode::Generators => gl_generators(n, field).swap_remove(k),
            CheckMode::Exhaustive => enumerate_gl(n, field).expect("enumerated before").nth(k).expect("index in range"),
        }
    }

    /// Decides whether every u in the checked set has a partner u′ in GL(V′)
    /// with g∘u = u′∘g.
    pub fn check(&self, g: &MappingTable) -> Result<GlMappingReport> {
        if *g.domain() != self.domain {
            return Err(Error::DimensionMismatch { expected: self.domain.dim(), found: g.domain().dim() });
        }
        let field = g.codomain().field();
        let mut rel = ImageRelations::default();
        rel.compute(field, g.raw(), g.codomain().dim());
        let witness_failure =
            self.group.iter().position(|perm| !rel.admits_partner(field, g.raw(), perm)).map(|k| self.element(k));
        let is_gl_mapping = witness_failure.is_none();
        let trivial = g.is_trivial();
        let n = self.domain.dim();
        let strong_embedding = (is_gl_mapping && !trivial && rel.dim() <= n).then(|| strong_embedding_verdict(g));
        Ok(GlMappingReport {
            is_gl_mapping,
            trivial,
            dim_vg: rel.dim(),
            domain_dim: n,
            mode: self.mode,
            checked: self.group.len(),
            witness_failure,
            strong_embedding,
        })
    }
}

/// Decides whether every u in GL(V) (or in a generating set) has a partner
/// u′ in GL(V′) with g∘u = u′∘g.
pub fn check_gl_mapping(g: &MappingTable, mode: CheckMode) -> Result<GlMappingReport> {
    GlChecker::new(g.domain(), mode)?.check(g)
}

fn forced_partner(g: &MappingTable, u: &Matrix) -> Option<ForcedMap> {
    let dom = g.domain();
    if u.rows() != dom.dim() || u.cols() != dom.dim() || u.field() != dom.field() || !u.is_invertible() {
        return None;
    }
    let d = g.codomain().dim();
    let mut forced = ForcedMap::new(g.codomain().field(), d, d);
    let perm = domain_permutation(dom, u);
    (0..g.len()).all(|i| forced.push(g.image_raw(i), g.image_raw(perm[i]))).then_some(forced)
}

/// A full partner u′ ∈ GL(V′) with g∘u = u′∘g, if one exists.
pub fn gl_partner(g: &MappingTable, u: &Matrix) -> Option<Matrix> {
    forced_partner(g, u)?.complete()
}

/// The automorphism ū of V_g with g∘u = ū∘g, written in the reduced
/// echelon basis of V_g.
pub fn induced_automorphism(g: &MappingTable, u: &Matrix) -> Option<Matrix> {
    let forced = forced_partner(g, u)?;
    let vg = g.image_span();
    let r = vg.dim();
    let columns: Vec<Vec<u8>> =
        vg.basis_raw().iter().map(|b| vg.coordinates(&forced.image_of(b)?)).collect::<Option<_>>()?;
    let m = Matrix::from_columns(g.codomain().field(), r, &columns).ok()?;
    m.is_invertible().then_some(m)
}

/// overline(uv) = ū·v̄ for every pair.
pub fn induced_hom_is_homomorphism(g: &MappingTable, pairs: &[(Matrix, Matrix)]) -> bool {
    pairs.iter().all(|(u, v)| {
        let (Some(ub), Some(vb)) = (induced_automorphism(g, u), induced_automorphism(g, v)) else {
            return false;
        };
        let Ok(uv) = u.mul(v) else { return false };
        match (induced_automorphism(g, &uv), ub.mul(&vb)) {
            (Some(lhs), Ok(rhs)) => lhs == rhs,
            _ => false,
        }
    })
}

fn pgl_pairs(f: &PointMap, perm: &[usize]) -> Vec<(Vec<u8>, Vec<u8>)> {
    let distinct: BTreeSet<(usize, usize)> =
        (0..perm.len()).map(|p| (f.image_index(p), f.image_index(perm[p]))).collect();
    distinct
        .into_iter()
        .map(|(a, b)| (f.codomain().point(a).rep().to_vec(), f.codomain().point(b).rep().to_vec()))
        .collect()
}

/// Decides whether every h in PGL(V) (or in a generating set) has a partner
/// h′ in PGL(V′) with f∘h = h′∘f.
pub fn check_pgl_mapping(f: &PointMap, mode: CheckMode) -> Result<PglMappingReport> {
    let dom = f.domain();
    let cod = f.codomain();
    let mats: Vec<Matrix> = match mode {
        CheckMode::Generators => gl_generators(dom.dim(), dom.field()),
        CheckMode::Exhaustive => enumerate_pgl(dom.field(), dom.dim())?.collect(),
    };
    let mut witness_failure = None;
    for h in &mats {
        let pairs = pgl_pairs(f, &point_permutation(dom, h));
        if solve_projective(cod.field(), cod.dim(), &pairs)?.is_none() {
            witness_failure = Some(h.clone());
            break;
        }
    }
    let is_pgl_mapping = witness_failure.is_none();
    let constant = f.is_constant();
    let dim_vf = f.image_span().dim();
    let n = dom.dim();
    let induced = (is_pgl_mapping && !constant && dim_vf <= n).then(|| reconstruct_semilinear(f));
    Ok(PglMappingReport {
        is_pgl_mapping,
        constant,
        dim_vf,
        domain_dim: n,
        mode,
        checked: mats.len(),
        witness_failure,
        induced,
    })
}

/// g(x) = l(x) for x ≠ 0 and g(0) = y, with y outside the span of the image of l.
pub fn adjoin_zero_image(l: &SemilinearMap, y: &Vector) -> Result<MappingTable> {
    let cod = l.codomain();
    cod.check(y)?;
    let vl = Subspace::from_raw(cod.field(), cod.dim(), l.matrix().columns());
    if vl.contains(y.coords()) {
        return Err(Error::YInImage);
    }
    let table = l.to_table()?;
    let mut raw = table.raw().to_vec();
    raw[..cod.dim()].copy_from_slice(y.coords());
    MappingTable::from_raw(&l.domain(), &cod, raw)
}

/// The bijection sending the vector with index i to the unit vector e_i of a
/// codomain whose dimension is |V|.
pub fn basis_bijection(domain: &VectorSpace, codomain: &VectorSpace) -> Result<MappingTable> {
    let size = domain.checked_size().ok_or_else(|| Error::TooLarge {
        what: format!("{domain}"),
        count: u128::MAX,
        limit: usize::MAX as u128,
    })?;
    if codomain.dim() != size {
        return Err(Error::DimensionMismatch { expected: size, found: codomain.dim() });
    }
    let mut raw = vec![0u8; size * size];
    for i in 0..size {
        raw[i * size + i] = 1;
    }
    MappingTable::from_raw(domain, codomain, raw)
}

/// The bijection sending point i of P(V) to ⟨e_i⟩ in a codomain of dimension
/// at least |P(V)|.
pub fn independent_point_bijection(domain: &ProjectiveSpace, codomain: &VectorSpace) -> Result<PointMap> {
    if codomain.dim() < domain.len() {
        return Err(Error::DimensionMismatch { expected: domain.len(), found: codomain.dim() });
    }
    let pcod = ProjectiveSpace::of(codomain);
    let table = (0..domain.len())
        .map(|i| pcod.index_of_vector(codomain.unit(i).coords()).expect("unit vector is non-zero"))
        .collect();
    PointMap::new(domain, &pcod, table)
}

/// A property a certified GL- or PGL-mapping failed to have.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct InvariantViolation {
    pub invariant: &'static str,
    pub detail: String,
}

fn violation(invariant: &'static str, detail: String) -> InvariantViolation {
    InvariantViolation { invariant, detail }
}

/// Checks the structural consequences of g being a GL-mapping. The caller is
/// expected to have certified g with [`check_gl_mapping`].
pub fn gl_mapping_invariants(g: &MappingTable) -> Result<Vec<InvariantViolation>> {
    let dom = g.domain();
    let field = dom.field();
    let cod_field = g.codomain().field();
    let n = dom.dim();
    let size = g.len();
    let mut out = Vec::new();
    let trivial = g.is_trivial();
    let vg = g.image_span();

    if !trivial {
        'pairs: for i in 1..size {
            for j in i + 1..size {
                let independent =
                    rank_of_rows(field, vec![dom.vector(i).into_coords(), dom.vector(j).into_coords()], n) == 2;
                if independent && g.image_raw(i) == g.image_raw(j) {
                    out.push(violation("distinct-images-on-independent-pairs", format!("vectors {i} and {j}")));
                    break 'pairs;
                }
            }
        }
    }

    for u in gl_generators(n, field) {
        let Some(forced) = forced_partner(g, &u) else {
            out.push(violation("fixed-vectors-map-to-fixed-vectors", format!("no partner for {u:?}")));
            continue;
        };
        let perm = domain_permutation(dom, &u);
        let fixed_images: Vec<Vec<u8>> = (0..size).filter(|&i| perm[i] == i).map(|i| g.image_raw(i).to_vec()).collect();
        let span = Subspace::from_raw(cod_field, g.codomain().dim(), fixed_images);
        for b in span.basis_raw() {
            if forced.image_of(b).as_deref() != Some(b.as_slice()) {
                out.push(violation("fixed-vectors-map-to-fixed-vectors", format!("{b:?} moved under {u:?}")));
            }
        }
    }

    if trivial || vg.dim() > n || n < 3 {
        return Ok(out);
    }

    if let Some(i) = (1..size).find(|&i| g.image_raw(i).iter().all(|&c| c == 0)) {
        out.push(violation("nonvanishing", format!("vector {i} maps to zero")));
    }
    let subsets = binomial(size as u128 - 1, n as u128 - 1);
    if subsets > SUBSET_LIMIT {
        return Err(Error::TooLarge { what: "independent (n-1)-subsets".into(), count: subsets, limit: SUBSET_LIMIT });
    }
    let mut chosen = Vec::with_capacity(n - 1);
    if let Some(bad) = first_dependent_image(g, n - 1, 1, &mut chosen) {
        out.push(violation("codimension-one-independence", format!("vectors {bad:?}")));
    }
    if vg.dim() != n {
        out.push(violation("image-dimension", format!("dim V_g = {} but n = {n}", vg.dim())));
    }
    for s in all_subspaces(dom) {
        let sg = g.span_of_image_of(&s);
        if sg.dim() != s.dim() {
            out.push(violation("subspace-dimension", format!("{s:?} spans {} after mapping", sg.dim())));
            break;
        }
    }
    if g.image_raw(0).iter().any(|&c| c != 0) {
        out.push(violation("zero-fixed", format!("g(0) = {:?}", g.image_raw(0))));
    }
    Ok(out)
}

fn first_dependent_image(g: &MappingTable, k: usize, start: usize, chosen: &mut Vec<usize>) -> Option<Vec<usize>> {
    let dom = g.domain();
    if chosen.len() == k {
        let rows = chosen.iter().map(|&i| g.image_raw(i).to_vec()).collect();
        return (rank_of_rows(g.codomain().field(), rows, g.codomain().dim()) < k).then(|| chosen.clone());
    }
    for i in start..g.len() {
        chosen.push(i);
        let rows = chosen.iter().map(|&j| dom.vector(j).into_coords()).collect();
        let found = if rank_of_rows(dom.field(), rows, dom.dim()) == chosen.len() {
            first_dependent_image(g, k, i + 1, chosen)
        } else {
            None
        };
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Consequences of f being a PGL-mapping: a non-constant one is injective.
pub fn pgl_mapping_invariants(f: &PointMap) -> Vec<InvariantViolation> {
    if f.is_constant() || f.is_injective() {
        return vec![];
    }
    let mut seen = std::collections::HashMap::new();
    let pair = f
        .table()
        .iter()
        .enumerate()
        .find_map(|(p, &img)| seen.insert(img, p).map(|q| (q, p)))
        .expect("a non-injective table has a repeated value");
    vec![violation("injective", format!("points {} and {} share an image", pair.0, pair.1))]
}

/// Aggregate result of sweeping tables V → V′.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub domain: VectorSpace,
    pub codomain: VectorSpace,
    pub sampled: bool,
    pub seed: Option<u64>,
    pub tables_examined: u64,
    pub trivial_gl: u64,
    pub nontrivial_gl_dim_le_n: u64,
    pub strong_embeddings: u64,
    /// Table indices of the non-trivial GL-mappings with dim V_g ≤ n.
    pub found: Vec<u64>,
}

impl SearchReport {
    /// The domain has dimension below 3, where the structure theory does not apply.
    pub fn exploratory(&self) -> bool {
        self.domain.dim() < 3
    }
}

/// Number of tables V → V′, or None past `u128`.
pub fn table_count(domain: &VectorSpace, codomain: &VectorSpace) -> Option<u128> {
    let cs = codomain.checked_size()? as u128;
    let n = domain.checked_size()?;
    cs.checked_pow(u32::try_from(n).ok()?)
}

/// The table whose i-th image is digit i of `index` in base |V′|.
pub fn table_from_index(domain: &VectorSpace, codomain: &VectorSpace, mut index: u64) -> Result<MappingTable> {
    let cs = codomain.size() as u64;
    let d = codomain.dim();
    let mut raw = vec![0u8; domain.size() * d];
    for chunk in raw.chunks_mut(d) {
        codomain.decode((index % cs) as usize, chunk);
        index /= cs;
    }
    MappingTable::from_raw(domain, codomain, raw)
}

pub fn table_index(g: &MappingTable) -> u64 {
    let cs = g.codomain().size() as u64;
    g.images().rev().fold(0u64, |acc, y| acc * cs + g.codomain().encode(y) as u64)
}

struct Sweeper {
    field: Field,
    n: usize,
    d: usize,
    cod_vectors: Vec<Vec<u8>>,
    perms: Vec<Vec<u32>>,
}

#[derive(Default)]
struct Partial {
    examined: u64,
    trivial_gl: u64,
    found: Vec<u64>,
}

impl Sweeper {
    fn new(domain: &VectorSpace, codomain: &VectorSpace) -> Sweeper {
        Sweeper {
            field: codomain.field().clone(),
            n: domain.dim(),
            d: codomain.dim(),
            cod_vectors: (0..codomain.size()).map(|i| codomain.vector(i).into_coords()).collect(),
            perms: group_permutations(domain, CheckMode::Generators).expect("generators need no enumeration"),
        }
    }

    fn visit(&self, digits: &[usize], images: &mut [u8], rel: &mut ImageRelations, acc: &mut Partial, index: u64) {
        let d = self.d;
        for (chunk, &c) in images.chunks_mut(d).zip(digits) {
            chunk.copy_from_slice(&self.cod_vectors[c]);
        }
        acc.examined += 1;
        rel.compute(&self.field, images, d);
        if rel.dim() > self.n {
            return;
        }
        let trivial = is_trivial_raw(images, d);
        if !self.perms.iter().all(|p| rel.admits_partner(&self.field, images, p)) {
            return;
        }
        if trivial {
            acc.trivial_gl += 1;
        } else {
            acc.found.push(index);
        }
    }

    fn run_range(&self, start: u64, end: u64, entries: usize, base: usize) -> Partial {
        let mut acc = Partial::default();
        let mut rel = ImageRelations::default();
        let mut images = vec![0u8; entries * self.d];
        let mut digits = vec![0usize; entries];
        let mut rest = start;
        for digit in digits.iter_mut() {
            *digit = (rest % base as u64) as usize;
            rest /= base as u64;
        }
        for index in start..end {
            self.visit(&digits, &mut images, &mut rel, &mut acc, index);
            for digit in digits.iter_mut() {
                *digit += 1;
                if *digit < base {
                    break;
                }
                *digit = 0;
            }
        }
        acc
    }
}

fn with_threads<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::Io(e.to_string()))?;
    Ok(pool.install(job))
}

fn finish(
    domain: &VectorSpace,
    codomain: &VectorSpace,
    sampled: bool,
    seed: Option<u64>,
    parts: Vec<Partial>,
) -> Result<SearchReport> {
    let mut report = SearchReport {
        domain: domain.clone(),
        codomain: codomain.clone(),
        sampled,
        seed,
        tables_examined: 0,
        trivial_gl: 0,
        nontrivial_gl_dim_le_n: 0,
        strong_embeddings: 0,
        found: vec![],
    };
    for p in parts {
        report.tables_examined += p.examined;
        report.trivial_gl += p.trivial_gl;
        report.found.extend(p.found);
    }
    report.nontrivial_gl_dim_le_n = report.found.len() as u64;
    for &index in &report.found {
        let g = table_from_index(domain, codomain, index)?;
        if strong_embedding_verdict(&g).holds {
            report.strong_embeddings += 1;
        }
    }
    Ok(report)
}

/// Visits every table V → V′, counting trivial GL-mappings and the
/// non-trivial ones with dim V_g ≤ n, and matching the latter to strong
/// semilinear embeddings. `threads == 0` uses the default pool size; the
/// report does not depend on it.
pub fn exhaustive_gl_search(domain: &VectorSpace, codomain: &VectorSpace, threads: usize) -> Result<SearchReport> {
    let total = table_count(domain, codomain).unwrap_or(u128::MAX);
    if total > EXHAUSTIVE_TABLE_LIMIT {
        return Err(Error::TooLarge {
            what: format!("tables {domain} -> {codomain}"),
            count: total,
            limit: EXHAUSTIVE_TABLE_LIMIT,
        });
    }
    let total = total as u64;
    let sweeper = Sweeper::new(domain, codomain);
    let entries = domain.size();
    let base = codomain.size();
    const CHUNK: u64 = 1 << 16;
    let chunks = total.div_ceil(CHUNK);
    let parts = with_threads(threads, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| sweeper.run_range(c * CHUNK, ((c + 1) * CHUNK).min(total), entries, base))
            .collect::<Vec<_>>()
    })?;
    finish(domain, codomain, false, None, parts)
}

/// Like [`exhaustive_gl_search`] over `samples` uniformly random tables.
/// Sample k is drawn from a ChaCha stream fixed by `seed` and k's block, so
/// the result is independent of the thread count.
pub fn sampled_gl_search(
    domain: &VectorSpace,
    codomain: &VectorSpace,
    samples: u64,
    seed: u64,
    threads: usize,
) -> Result<SearchReport> {
    let sweeper = Sweeper::new(domain, codomain);
    let entries = domain.checked_size().filter(|&s| s <= crate::maps::TABLE_LIMIT).ok_or_else(|| Error::TooLarge {
        what: format!("tables over {domain}"),
        count: u128::MAX,
        limit: crate::maps::TABLE_LIMIT as u128,
    })?;
    let base = codomain.checked_size().ok_or_else(|| Error::TooLarge {
        what: format!("{codomain}"),
        count: u128::MAX,
        limit: usize::MAX as u128,
    })?;
    const BLOCK: u64 = 4096;
    let blocks = samples.div_ceil(BLOCK);
    let parts = with_threads(threads, || {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(b);
                let mut acc = Partial::default();
                let mut rel = ImageRelations::default();
                let mut images = vec![0u8; entries * sweeper.d];
                let mut digits = vec![0usize; entries];
                for _ in b * BLOCK..((b + 1) * BLOCK).min(samples) {
                    digits.iter_mut().for_each(|x| *x = rng.random_range(0..base));
                    let index =
                        digits.iter().rev().fold(0u64, |a, &x| a.wrapping_mul(base as u64).wrapping_add(x as u64));
                    sweeper.visit(&digits, &mut images, &mut rel, &mut acc, index);
                }
                acc
            })
            .collect::<Vec<_>>()
    })?;
    finish(domain, codomain, true, Some(seed), parts)
}

/// A uniformly random table V → V′.
pub fn random_table(domain: &VectorSpace, codomain: &VectorSpace, rng: &mut impl Rng) -> Result<MappingTable> {
    let d = codomain.dim();
    let q = codomain.field().order() as u8;
    let raw = (0..domain.size() * d).map(|_| rng.random_range(0..q)).collect();
    MappingTable::from_raw(domain, codomain, raw)
}
