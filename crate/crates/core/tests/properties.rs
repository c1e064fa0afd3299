use proptest::prelude::*;

use semilin::commutation::{check_gl_mapping, check_pgl_mapping, CheckMode, GlChecker};
use semilin::extendability::{extend_permutation_linear, fully_extendable_linear};
use semilin::gf::{enumerate_homs, Field};
use semilin::linalg::{Matrix, Vector, VectorSpace};
use semilin::maps::MappingTable;
use semilin::projective::{pgl_action, ProjectiveSpace};
use semilin::reconstruct::reconstruct_semilinear;
use semilin::semilinear::{scalar_multiple_of, SemilinearMap};

fn field_pair() -> impl Strategy<Value = (Field, Field)> {
    prop_oneof![
        Just((Field::new(2, 1).unwrap(), Field::new(2, 1).unwrap())),
        Just((Field::new(2, 1).unwrap(), Field::new(2, 2).unwrap())),
        Just((Field::new(2, 2).unwrap(), Field::new(2, 2).unwrap())),
        Just((Field::new(3, 1).unwrap(), Field::new(3, 2).unwrap())),
        Just((Field::new(2, 2).unwrap(), Field::new(2, 4).unwrap())),
    ]
}

fn matrix(f: Field, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    let q = f.order() as u8;
    proptest::collection::vec(0..q, rows * cols).prop_map(move |d| Matrix::new(&f, rows, cols, d).unwrap())
}

/// A semilinear map F^3 → K^3 with arbitrary σ and matrix.
fn semilinear() -> impl Strategy<Value = SemilinearMap> {
    field_pair().prop_flat_map(|(src, dst)| {
        let homs = enumerate_homs(&src, &dst);
        (0..homs.len(), matrix(dst, 3, 3)).prop_map(move |(k, m)| SemilinearMap::new(homs[k].clone(), m).unwrap())
    })
}

fn strong_embedding() -> impl Strategy<Value = SemilinearMap> {
    semilinear().prop_filter("full rank", |l| l.matrix().rank() == 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semilinear_maps_are_additive_and_twisted((l, a, x, y) in semilinear().prop_flat_map(|l| {
        let q = l.domain().field().order() as u8;
        (Just(l), 0..q, proptest::collection::vec(0..q, 3), proptest::collection::vec(0..q, 3))
    })) {
        let f = l.domain().field().clone();
        let (x, y) = (Vector::new(&f, x).unwrap(), Vector::new(&f, y).unwrap());
        let lx = l.apply(&x).unwrap();
        prop_assert_eq!(l.apply(&x.add(&y)).unwrap(), lx.add(&l.apply(&y).unwrap()));
        prop_assert_eq!(l.apply(&x.scale(a)).unwrap(), lx.scale(l.sigma().apply_raw(a)));
    }

    #[test]
    fn strong_iff_full_rank(l in semilinear()) {
        prop_assert_eq!(l.is_strong_embedding(), l.matrix().rank() == 3);
        prop_assert_eq!(l.is_strong_embedding(), l.is_k_embedding_exhaustive(3).unwrap());
    }

    #[test]
    fn lines_go_into_lines(l in strong_embedding()) {
        let f = l.induced_projective().unwrap();
        let cod = f.codomain();
        for line in f.domain().lines() {
            let images: Vec<usize> = line.iter().map(|&p| f.image_index(p)).collect();
            let target = cod.line_indices(images[0], images[1]);
            prop_assert!(images.iter().all(|i| target.contains(i)));
        }
    }

    #[test]
    fn reconstruction_recovers_sigma_and_scalar(l in strong_embedding()) {
        let r = reconstruct_semilinear(&l.induced_projective().unwrap()).unwrap();
        prop_assert_eq!(r.sigma(), l.sigma());
        prop_assert!(scalar_multiple_of(&r.to_table().unwrap(), &l).is_some());
    }

    #[test]
    fn strong_embeddings_are_gl_mappings(l in strong_embedding()) {
        let g = l.to_table().unwrap();
        let r = check_gl_mapping(&g, CheckMode::Generators).unwrap();
        prop_assert!(r.is_gl_mapping);
        prop_assert_eq!(r.dim_vg, 3);
        prop_assert!(r.strong_embedding.unwrap().holds);
    }

    #[test]
    fn induced_point_maps_are_pgl_mappings(l in strong_embedding()) {
        let r = check_pgl_mapping(&l.induced_projective().unwrap(), CheckMode::Generators).unwrap();
        prop_assert!(r.is_pgl_mapping);
        prop_assert!(matches!(r.induced, Some(Ok(_))));
    }

    #[test]
    fn projective_action_composes_and_ignores_scalars(
        u in matrix(Field::new(3, 1).unwrap(), 3, 3).prop_filter("invertible", |m| m.rank() == 3),
        v in matrix(Field::new(3, 1).unwrap(), 3, 3).prop_filter("invertible", |m| m.rank() == 3),
        p in 0usize..13,
    ) {
        let space = ProjectiveSpace::new(&Field::new(3, 1).unwrap(), 3);
        let p = space.point(p);
        let uv = u.mul(&v).unwrap();
        prop_assert_eq!(pgl_action(&uv, &p).unwrap(), pgl_action(&u, &pgl_action(&v, &p).unwrap()).unwrap());
        prop_assert_eq!(pgl_action(&u.scale(2), &p).unwrap(), pgl_action(&u, &p).unwrap());
    }

    #[test]
    fn gl_modes_agree_on_random_gf3_plane_tables(raw in proptest::collection::vec(0u8..3, 18)) {
        let v = VectorSpace::new(&Field::new(3, 1).unwrap(), 2);
        let g = MappingTable::from_raw(&v, &v, raw).unwrap();
        let a = GlChecker::new(&v, CheckMode::Generators).unwrap().check(&g).unwrap();
        let b = GlChecker::new(&v, CheckMode::Exhaustive).unwrap().check(&g).unwrap();
        prop_assert_eq!(a.is_gl_mapping, b.is_gl_mapping);
    }

    #[test]
    fn three_cycles_extend_when_transpositions_do(idx in proptest::sample::subsequence((1usize..27).collect::<Vec<_>>(), 3)) {
        let f = Field::new(3, 1).unwrap();
        let sp = VectorSpace::new(&f, 3);
        let xs: Vec<Vector> = idx.iter().map(|&i| sp.vector(i)).collect();
        if fully_extendable_linear(&xs).unwrap() {
            prop_assert!(extend_permutation_linear(&xs, &[1, 2, 0]).unwrap().is_some());
            prop_assert!(extend_permutation_linear(&xs, &[2, 0, 1]).unwrap().is_some());
        }
    }
}
