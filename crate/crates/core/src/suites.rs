//! Named verification suites producing deterministic JSON reports.

use std::collections::HashSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::commutation::{
    adjoin_zero_image, basis_bijection, check_pgl_mapping, domain_permutation, exhaustive_gl_search,
    gl_mapping_invariants, independent_point_bijection, pgl_mapping_invariants, random_table, table_from_index,
    CheckMode, GlChecker,
};
use crate::error::{Error, Result};
use crate::extendability::{
    classify_linear_subset, classify_projective_subset, extend_permutation_projective, fully_extendable_linear,
    fully_extendable_projective, harmonic_subset_indices, transposition_report_projective, SubsetClassLinear,
    SubsetClassProjective,
};
use crate::gf::{enumerate_homs, Field};
use crate::io::{search_report_to_json, ARTIFACT_VERSION};
use crate::linalg::{enumerate_gl, gl_order, Matrix, Vector, VectorSpace};
use crate::maps::{MappingTable, PointMap};
use crate::projective::{enumerate_pgl, normalize, point_permutation, ProjPoint, ProjectiveSpace};
use crate::reconstruct::reconstruct_semilinear;
use crate::semilinear::{scalar_multiple_of, SemilinearMap};

pub const SUITES: &[&str] = &[
    "linear-subsets",
    "projective-subsets",
    "harmonic",
    "exhaustive-gl",
    "constructions",
    "ftpg-roundtrip",
    "invariants",
    "converse",
    "mode-agreement",
];

/// Largest subset size the subset sweeps accept.
pub const MAX_SUBSET_SIZE: usize = 6;
/// Largest sample count accepted by sampled suites.
pub const MAX_SAMPLES: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Worker threads for partitionable sweeps; 0 picks the default.
    pub threads: usize,
    pub seed: u64,
    /// Record wall time in the report (makes it run-dependent).
    pub timing: bool,
    /// Upper subset size for the subset sweeps, replacing the per-space preset.
    pub max_size: Option<usize>,
    /// Sample count for sampled suites, replacing the preset.
    pub samples: Option<u64>,
    /// Spaces for `exhaustive-gl`, replacing GF(2)^3 → GF(2)^3.
    pub domain: Option<VectorSpace>,
    pub codomain: Option<VectorSpace>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { threads: 0, seed: 1, timing: true, max_size: None, samples: None, domain: None, codomain: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub seed: u64,
    pub cases: Vec<CaseResult>,
    pub wall_time_ms: Option<u128>,
}

impl SuiteReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "suite": self.suite,
            "artifact_version": ARTIFACT_VERSION,
            "seed": self.seed,
            "passed": self.passed,
            "cases": self.cases.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        });
        if let Some(ms) = self.wall_time_ms {
            v["wall_time_ms"] = json!(ms);
        }
        v
    }
}

fn case(name: impl Into<String>, passed: bool, detail: Value) -> CaseResult {
    CaseResult { name: name.into(), passed, detail }
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    if let Some(k) = config.max_size {
        if !(2..=MAX_SUBSET_SIZE).contains(&k) {
            return Err(Error::GuardExceeded(format!("max_size must lie in 2..={MAX_SUBSET_SIZE}, got {k}")));
        }
    }
    if let Some(s) = config.samples {
        if s > MAX_SAMPLES {
            return Err(Error::GuardExceeded(format!("samples must be at most {MAX_SAMPLES}, got {s}")));
        }
    }
    let start = Instant::now();
    let cases = match name {
        "linear-subsets" => linear_subsets(config)?,
        "projective-subsets" => projective_subsets(config)?,
        "harmonic" => harmonic()?,
        "exhaustive-gl" => exhaustive(config)?,
        "constructions" => constructions()?,
        "ftpg-roundtrip" => ftpg_roundtrip(config)?,
        "invariants" => invariants(config)?,
        "converse" => converse(config)?,
        "mode-agreement" => mode_agreement(config)?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        passed: cases.iter().all(|c| c.passed),
        seed: config.seed,
        cases,
        wall_time_ms: config.timing.then(|| start.elapsed().as_millis()),
    })
}

fn gf(p: u32, k: u32) -> Field {
    Field::new(p, k).expect("supported field")
}

/// Index subsets of 0..len with sizes in `lo..=hi`, in increasing bitmask order.
pub fn subsets(len: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    (1u64..(1u64 << len))
        .filter(|m| (lo..=hi).contains(&(m.count_ones() as usize)))
        .map(|m| (0..len).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Whether the setwise stabilizer of `subset` induces every permutation of it.
fn induces_full_symmetric_group(perms: &[Vec<usize>], subset: &[usize]) -> bool {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let target = factorial(subset.len());
    for p in perms {
        let image: Option<Vec<usize>> = subset.iter().map(|&x| subset.iter().position(|&y| y == p[x])).collect();
        if let Some(img) = image {
            seen.insert(img);
            if seen.len() == target {
                return true;
            }
        }
    }
    false
}

fn linear_subsets(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    for (field, n, hi) in [(gf(2, 1), 2, 3), (gf(2, 1), 3, 5), (gf(3, 1), 2, 4)] {
        let space = VectorSpace::new(&field, n);
        let hi = config.max_size.unwrap_or(hi);
        let vectors: Vec<Vector> = space.vectors().collect();
        let perms: Vec<Vec<usize>> = enumerate_gl(n, &field)?.map(|u| domain_permutation(&space, &u)).collect();
        let mut checked = 0;
        let mut disagreements = Vec::new();
        for subset in subsets(vectors.len(), 2, hi) {
            let xs: Vec<Vector> = subset.iter().map(|&i| vectors[i].clone()).collect();
            let class = classify_linear_subset(&xs)?;
            let solver = fully_extendable_linear(&xs)?;
            let group = induces_full_symmetric_group(&perms, &subset);
            checked += 1;
            if (class != SubsetClassLinear::NotFullyExtendable) != solver || solver != group {
                disagreements
                    .push(json!({ "subset": subset, "class": format!("{class:?}"), "solver": solver, "group": group }));
            }
        }
        cases.push(case(
            format!("{space} sizes 2..={hi}"),
            disagreements.is_empty(),
            json!({ "subsets": checked, "disagreements": disagreements }),
        ));
    }
    Ok(cases)
}

fn projective_subsets(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    let hi = config.max_size.unwrap_or(5);
    let mut harmonic_outside_char3 = 0;
    for (field, n) in [(gf(3, 1), 2), (gf(2, 1), 3), (gf(3, 1), 3), (gf(5, 1), 2)] {
        let space = ProjectiveSpace::new(&field, n);
        let points: Vec<ProjPoint> = space.points().collect();
        let perms: Vec<Vec<usize>> = enumerate_pgl(&field, n)?.map(|u| point_permutation(&space, &u)).collect();
        let mut checked = 0;
        let mut harmonic = 0;
        let mut disagreements = Vec::new();
        for subset in subsets(points.len(), 2, hi) {
            let xs: Vec<ProjPoint> = subset.iter().map(|&i| points[i].clone()).collect();
            let class = classify_projective_subset(&space, &xs)?;
            let solver = fully_extendable_projective(&space, &xs)?;
            let group = induces_full_symmetric_group(&perms, &subset);
            checked += 1;
            if class == SubsetClassProjective::Harmonic {
                harmonic += 1;
                if field.characteristic() != 3 {
                    harmonic_outside_char3 += 1;
                }
            }
            if (class != SubsetClassProjective::NotFullyExtendable) != solver || solver != group {
                disagreements
                    .push(json!({ "subset": subset, "class": format!("{class:?}"), "solver": solver, "group": group }));
            }
        }
        cases.push(case(
            format!("PG({}, {}) sizes 2..={hi}", n - 1, field.order()),
            disagreements.is_empty(),
            json!({ "subsets": checked, "harmonic": harmonic, "disagreements": disagreements }),
        ));
    }
    cases.push(case(
        "harmonic class only in characteristic 3",
        harmonic_outside_char3 == 0,
        json!({ "harmonic_outside_char3": harmonic_outside_char3 }),
    ));
    Ok(cases)
}

fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn harmonic() -> Result<Vec<CaseResult>> {
    let f3 = gf(3, 1);
    let line = ProjectiveSpace::new(&f3, 2);
    let points: Vec<ProjPoint> = line.points().collect();
    let perms = all_permutations(4);
    let mut extendable = 0;
    for s in &perms {
        if extend_permutation_projective(&line, &points, s)?.is_some() {
            extendable += 1;
        }
    }
    let f5 = gf(5, 1);
    let line5 = ProjectiveSpace::new(&f5, 2);
    let quad: Vec<ProjPoint> = [[1u8, 0], [0, 1], [1, 1], [1, 4]]
        .iter()
        .map(|r| normalize(&Vector::new(&f5, r.to_vec()).expect("valid coordinates")).expect("non-zero"))
        .collect();
    let report = transposition_report_projective(&line5, &quad)?;
    Ok(vec![
        case(
            "PG(1, 3) all permutations extend",
            extendable == perms.len(),
            json!({ "extendable": extendable, "permutations": perms.len() }),
        ),
        case(
            "PG(1, 5) harmonic-shaped quadruple has a failing transposition",
            report.failing_transposition.is_some(),
            json!({ "failing_transposition": report.failing_transposition }),
        ),
    ])
}

fn exhaustive(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let preset: VectorSpace = VectorSpace::new(&gf(2, 1), 3);
    let domain = config.domain.clone().unwrap_or_else(|| preset.clone());
    let codomain = config.codomain.clone().unwrap_or_else(|| preset.clone());
    let report = exhaustive_gl_search(&domain, &codomain, config.threads)?;
    let mut passed = report.exploratory() || report.strong_embeddings == report.nontrivial_gl_dim_le_n;
    let mut detail = search_report_to_json(&report);
    if domain == codomain && domain.field().degree() == 1 && domain.dim() >= 2 {
        let expected_nontrivial = gl_order(domain.dim(), domain.field().order()) as u64;
        let expected_trivial = (codomain.size() as u64).pow(2);
        passed &= report.nontrivial_gl_dim_le_n == expected_nontrivial && report.trivial_gl == expected_trivial;
        detail["expected_nontrivial"] = json!(expected_nontrivial);
        detail["expected_trivial"] = json!(expected_trivial);
    }
    Ok(vec![case(format!("{domain} -> {codomain}"), passed, detail)])
}

fn embedding_into(src: &Field, dst: &Field, n: usize, m: usize, rng: &mut ChaCha8Rng) -> SemilinearMap {
    let homs = enumerate_homs(src, dst);
    let sigma = homs[rng.random_range(0..homs.len())].clone();
    SemilinearMap::new(sigma, random_full_rank(dst, m, n, rng)).expect("matching fields")
}

/// A uniformly random m × n matrix of rank n.
pub fn random_full_rank(field: &Field, m: usize, n: usize, rng: &mut impl Rng) -> Matrix {
    let q = field.order() as u8;
    loop {
        let data = (0..m * n).map(|_| rng.random_range(0..q)).collect();
        let a = Matrix::new(field, m, n, data).expect("shape matches data");
        if a.rank() == n {
            return a;
        }
    }
}

fn standard_embedding(field: &Field, n: usize, m: usize) -> Matrix {
    let cols: Vec<Vec<u8>> = (0..n).map(|i| VectorSpace::new(field, m).unit(i).into_coords()).collect();
    Matrix::from_columns(field, m, &cols).expect("unit columns")
}

/// A named map with the dimension its image should span.
pub type Labelled<T> = (String, T, usize);

/// The mapping tables and point maps built from the fixed constructions.
pub struct Constructions {
    pub tables: Vec<Labelled<MappingTable>>,
    pub points: Vec<Labelled<PointMap>>,
}

pub fn construction_maps() -> Result<Constructions> {
    let f2 = gf(2, 1);
    let f4 = gf(2, 2);
    let mut tables = Vec::new();
    let l = SemilinearMap::linear(standard_embedding(&f2, 3, 4));
    tables.push((
        "zero sent outside the image, GF(2)^3 -> GF(2)^4".to_string(),
        adjoin_zero_image(&l, &VectorSpace::new(&f2, 4).unit(3))?,
        4,
    ));
    let l = SemilinearMap::new(enumerate_homs(&f2, &f4).remove(0), standard_embedding(&f4, 3, 4))?;
    tables.push((
        "zero sent outside the image, GF(2)^3 -> GF(4)^4".to_string(),
        adjoin_zero_image(&l, &VectorSpace::new(&f4, 4).unit(3))?,
        4,
    ));
    for n in [2, 3] {
        let v = VectorSpace::new(&f2, n);
        let size = v.size();
        tables.push((
            format!("vectors onto a basis, {v} -> GF(2)^{size}"),
            basis_bijection(&v, &VectorSpace::new(&f2, size))?,
            size,
        ));
    }
    let mut points = Vec::new();
    for n in [2, 3] {
        let p = ProjectiveSpace::new(&f2, n);
        let count = p.len();
        points.push((
            format!("points onto independent points, PG({}, 2) -> GF(2)^{count}", n - 1),
            independent_point_bijection(&p, &VectorSpace::new(&f2, count))?,
            count,
        ));
    }
    Ok(Constructions { tables, points })
}

fn constructions() -> Result<Vec<CaseResult>> {
    let Constructions { tables, points } = construction_maps()?;
    let mut cases = Vec::new();
    for (name, g, expected_dim) in tables {
        let gen = GlChecker::new(g.domain(), CheckMode::Generators)?.check(&g)?;
        let exh = GlChecker::new(g.domain(), CheckMode::Exhaustive)?.check(&g)?;
        cases.push(case(
            name,
            gen.is_gl_mapping && exh.is_gl_mapping && gen.dim_vg == expected_dim,
            json!({ "is_gl_generators": gen.is_gl_mapping, "is_gl_exhaustive": exh.is_gl_mapping, "dim_vg": gen.dim_vg, "expected_dim_vg": expected_dim }),
        ));
    }
    for (name, f, expected_dim) in points {
        let gen = check_pgl_mapping(&f, CheckMode::Generators)?;
        let exh = check_pgl_mapping(&f, CheckMode::Exhaustive)?;
        cases.push(case(
            name,
            gen.is_pgl_mapping && exh.is_pgl_mapping && gen.dim_vf == expected_dim,
            json!({ "is_pgl_generators": gen.is_pgl_mapping, "is_pgl_exhaustive": exh.is_pgl_mapping, "dim_vf": gen.dim_vf, "expected_dim_vf": expected_dim }),
        ));
    }
    Ok(cases)
}

/// Field pairs (source, target) for the embedding-based suites.
pub fn embedding_field_pairs() -> Vec<(Field, Field)> {
    vec![(gf(2, 1), gf(2, 1)), (gf(2, 1), gf(2, 2)), (gf(2, 2), gf(2, 2)), (gf(3, 1), gf(3, 2))]
}

fn ftpg_roundtrip(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let samples = config.samples.unwrap_or(120);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let pairs = embedding_field_pairs();
    let mut ok = 0;
    let mut failures = Vec::new();
    for k in 0..samples {
        let (src, dst) = &pairs[k as usize % pairs.len()];
        let l = embedding_into(src, dst, 3, 3, &mut rng);
        let recovered = reconstruct_semilinear(&l.induced_projective()?);
        match recovered.as_ref().ok().and_then(|r| scalar_multiple_of(&r.to_table().ok()?, &l)) {
            Some(_) => ok += 1,
            None => failures.push(json!({ "sample": k, "error": recovered.err().map(|e| e.to_string()) })),
        }
    }
    let mut certified = 0;
    let mut kinds = std::collections::BTreeMap::<String, u64>::new();
    let corrupted = 20;
    for k in 0..corrupted {
        let (src, dst) = &pairs[k % pairs.len()];
        let l = embedding_into(src, dst, 3, 3, &mut rng);
        let f = l.induced_projective()?;
        let p = rng.random_range(0..f.domain().len());
        let shift = rng.random_range(1..f.codomain().len());
        let mut table = f.table().to_vec();
        table[p] = (table[p] + shift) % f.codomain().len();
        let g = PointMap::new(f.domain(), f.codomain(), table)?;
        if let Err(e) = reconstruct_semilinear(&g) {
            certified += 1;
            let kind = serde_json::to_value(&e).expect("serializable")["kind"].as_str().unwrap_or("").to_string();
            *kinds.entry(kind).or_default() += 1;
        }
    }
    Ok(vec![
        case(
            "round trips recover a scalar multiple",
            ok == samples,
            json!({ "samples": samples, "recovered": ok, "failures": failures }),
        ),
        case(
            "perturbed point maps are rejected with a certificate",
            certified == corrupted,
            json!({ "corrupted": corrupted, "certified": certified, "kinds": kinds }),
        ),
    ])
}

/// Strong embeddings for the converse check: every GL(3, 2) element plus
/// seeded samples for the other field pairs.
pub fn converse_embeddings(rng: &mut ChaCha8Rng, per_pair: usize) -> Vec<SemilinearMap> {
    let f2 = gf(2, 1);
    let mut out: Vec<SemilinearMap> = enumerate_gl(3, &f2).expect("small group").map(SemilinearMap::linear).collect();
    let f4 = gf(2, 2);
    for _ in 0..per_pair {
        out.push(embedding_into(&f2, &f4, 3, 3, rng));
    }
    for sigma in enumerate_homs(&f4, &f4) {
        for _ in 0..per_pair {
            out.push(SemilinearMap::new(sigma.clone(), random_full_rank(&f4, 3, 3, rng)).expect("matching fields"));
        }
    }
    let (f3, f9) = (gf(3, 1), gf(3, 2));
    for _ in 0..per_pair {
        out.push(embedding_into(&f3, &f9, 3, 3, rng));
    }
    out
}

fn converse(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let per_pair = config.samples.unwrap_or(10) as usize;
    let maps = converse_embeddings(&mut rng, per_pair);
    let mut checkers: Vec<(VectorSpace, GlChecker, GlChecker)> = Vec::new();
    let mut by_pair = std::collections::BTreeMap::<String, (u64, u64)>::new();
    for l in &maps {
        let dom = l.domain();
        if !checkers.iter().any(|(d, _, _)| *d == dom) {
            checkers.push((
                dom.clone(),
                GlChecker::new(&dom, CheckMode::Generators)?,
                GlChecker::new(&dom, CheckMode::Exhaustive)?,
            ));
        }
        let (_, gen, exh) = checkers.iter().find(|(d, _, _)| *d == dom).expect("inserted above");
        let g = l.to_table()?;
        let pass = gen.check(&g)?.is_gl_mapping && exh.check(&g)?.is_gl_mapping;
        let key = format!("{} -> {}, sigma generator image {}", dom, l.codomain(), l.sigma().generator_image());
        let entry = by_pair.entry(key).or_default();
        entry.0 += 1;
        entry.1 += pass as u64;
    }
    Ok(by_pair
        .into_iter()
        .map(|(k, (total, passed))| {
            case(k, total == passed, json!({ "embeddings": total, "gl_in_both_modes": passed }))
        })
        .collect())
}

fn mode_agreement(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    let v2 = VectorSpace::new(&gf(2, 1), 2);
    let (gen, exh) = (GlChecker::new(&v2, CheckMode::Generators)?, GlChecker::new(&v2, CheckMode::Exhaustive)?);
    let mut disagreements = Vec::new();
    let mut gl = 0;
    for i in 0..256 {
        let g = table_from_index(&v2, &v2, i)?;
        let (a, b) = (gen.check(&g)?.is_gl_mapping, exh.check(&g)?.is_gl_mapping);
        gl += a as u64;
        if a != b {
            disagreements.push(i);
        }
    }
    cases.push(case(
        "all tables GF(2)^2 -> GF(2)^2",
        disagreements.is_empty(),
        json!({ "tables": 256, "gl_mappings": gl, "disagreements": disagreements }),
    ));

    let v3 = VectorSpace::new(&gf(2, 1), 3);
    let (gen, exh) = (GlChecker::new(&v3, CheckMode::Generators)?, GlChecker::new(&v3, CheckMode::Exhaustive)?);
    let samples = config.samples.unwrap_or(10_000);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut disagreements = Vec::new();
    let mut gl = 0;
    for k in 0..samples {
        let g = random_table(&v3, &v3, &mut rng)?;
        let (a, b) = (gen.check(&g)?.is_gl_mapping, exh.check(&g)?.is_gl_mapping);
        gl += a as u64;
        if a != b {
            disagreements.push(k);
        }
    }
    cases.push(case(
        "random tables GF(2)^3 -> GF(2)^3",
        disagreements.is_empty(),
        json!({ "tables": samples, "gl_mappings": gl, "disagreements": disagreements }),
    ));

    // Linear tables, trivial tables and one-entry perturbations of the linear ones.
    let mut structured = trivial_tables(&v3)?;
    for u in enumerate_gl(3, v3.field())? {
        let g = SemilinearMap::linear(u).to_table()?;
        let x = rng.random_range(0..g.len());
        let mut raw = g.raw().to_vec();
        raw[x * 3 + rng.random_range(0..3)] ^= 1;
        structured.push(MappingTable::from_raw(&v3, &v3, raw)?);
        structured.push(g);
    }
    let mut disagreements = Vec::new();
    let mut gl = 0;
    for (k, g) in structured.iter().enumerate() {
        let (a, b) = (gen.check(g)?.is_gl_mapping, exh.check(g)?.is_gl_mapping);
        gl += a as u64;
        if a != b {
            disagreements.push(k);
        }
    }
    cases.push(case(
        "structured tables GF(2)^3 -> GF(2)^3",
        disagreements.is_empty(),
        json!({ "tables": structured.len(), "gl_mappings": gl, "disagreements": disagreements }),
    ));
    Ok(cases)
}

/// Every trivial table V → V: constant c off zero, d at zero.
fn trivial_tables(v: &VectorSpace) -> Result<Vec<MappingTable>> {
    let mut out = Vec::new();
    for d in 0..v.size() {
        for c in 0..v.size() {
            let (dv, cv) = (v.vector(d), v.vector(c));
            out.push(MappingTable::from_fn(v, v, |x| {
                if x.iter().all(|&a| a == 0) {
                    dv.coords().to_vec()
                } else {
                    cv.coords().to_vec()
                }
            })?);
        }
    }
    Ok(out)
}

fn invariants(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    let v3 = VectorSpace::new(&gf(2, 1), 3);
    let gen = GlChecker::new(&v3, CheckMode::Generators)?;

    let sweep = exhaustive_gl_search(&v3, &v3, config.threads)?;
    let mut certified: Vec<(String, MappingTable)> = Vec::new();
    for &i in &sweep.found {
        certified.push((format!("sweep table {i}"), table_from_index(&v3, &v3, i)?));
    }
    for (k, g) in trivial_tables(&v3)?.into_iter().enumerate() {
        if gen.check(&g)?.is_gl_mapping {
            certified.push((format!("trivial table {k}"), g));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for (k, l) in converse_embeddings(&mut rng, 3).into_iter().enumerate().filter(|(k, _)| *k >= 168) {
        certified.push((format!("embedding {k}"), l.to_table()?));
    }
    let Constructions { tables, points } = construction_maps()?;
    for (name, g, _) in tables {
        certified.push((name, g));
    }

    let mut violations = Vec::new();
    for (name, g) in &certified {
        for v in gl_mapping_invariants(g)? {
            violations.push(json!({ "map": name, "invariant": v.invariant, "detail": v.detail }));
        }
    }
    cases.push(case(
        "GL-mapping invariants",
        violations.is_empty() && sweep.found.len() == 168,
        json!({ "maps": certified.len(), "violations": violations }),
    ));

    let mut pgl_maps: Vec<(String, PointMap)> = points.into_iter().map(|(n, f, _)| (n, f)).collect();
    let f4 = gf(2, 2);
    for (k, sigma) in enumerate_homs(&f4, &f4).into_iter().enumerate() {
        let l = SemilinearMap::new(sigma, random_full_rank(&f4, 3, 3, &mut rng))?;
        pgl_maps.push((format!("induced map {k} over GF(4)"), l.induced_projective()?));
    }
    let mut pgl_violations = Vec::new();
    for (name, f) in &pgl_maps {
        if !check_pgl_mapping(f, CheckMode::Generators)?.is_pgl_mapping {
            pgl_violations.push(json!({ "map": name, "invariant": "certified", "detail": "not a PGL-mapping" }));
        }
        for v in pgl_mapping_invariants(f) {
            pgl_violations.push(json!({ "map": name, "invariant": v.invariant, "detail": v.detail }));
        }
    }
    cases.push(case(
        "PGL-mapping invariants",
        pgl_violations.is_empty(),
        json!({ "maps": pgl_maps.len(), "violations": pgl_violations }),
    ));

    for (field, n) in [(gf(3, 1), 2), (gf(3, 1), 3)] {
        let space = ProjectiveSpace::new(&field, n);
        let hs = harmonic_subset_indices(&space);
        let mut bad = Vec::new();
        for (i, a) in hs.iter().enumerate() {
            for b in &hs[i + 1..] {
                if a.iter().filter(|x| b.contains(x)).count() >= 3 {
                    bad.push(json!([a, b]));
                }
            }
        }
        cases.push(case(
            format!("harmonic subsets of PG({}, 3) meet in at most two points", n - 1),
            bad.is_empty(),
            json!({ "harmonic_subsets": hs.len(), "violations": bad }),
        ));
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteConfig {
        SuiteConfig { timing: false, ..SuiteConfig::default() }
    }

    #[test]
    fn unknown_suite_and_guards() {
        assert_eq!(run_suite("nope", &quick()), Err(Error::UnknownSuite("nope".into())));
        let big = SuiteConfig { max_size: Some(9), ..quick() };
        assert!(matches!(run_suite("linear-subsets", &big), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn harmonic_suite_passes() {
        let r = run_suite("harmonic", &quick()).unwrap();
        assert!(r.passed);
        assert_eq!(r.cases[0].detail["extendable"], 24);
    }

    #[test]
    fn linear_subset_suite_passes() {
        let r = run_suite("linear-subsets", &quick()).unwrap();
        assert!(r.passed, "{:?}", r.to_json());
        assert_eq!(r.cases[1].detail["subsets"], 210);
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = SuiteConfig { samples: Some(12), ..quick() };
        let a = run_suite("ftpg-roundtrip", &cfg).unwrap();
        let b = run_suite("ftpg-roundtrip", &cfg).unwrap();
        assert!(a.passed);
        assert_eq!(crate::io::to_pretty(&a.to_json()), crate::io::to_pretty(&b.to_json()));
        assert!(a.to_json().get("wall_time_ms").is_none());
    }

    #[test]
    fn permutations_are_complete() {
        let p = all_permutations(4);
        assert_eq!(p.len(), 24);
        assert_eq!(p.iter().collect::<HashSet<_>>().len(), 24);
    }
}
