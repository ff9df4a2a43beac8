use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use opcat::category::{Category, Functor};
use opcat::cobordism::{factor_via_gos, phi, Cobordism};
use opcat::finsetcats::{FinMap, FinSetCat, GradedSurjection};
use opcat::graphcats::random_tree;
use opcat::halfedge::{canonical_form, is_isomorphic, GenusGraph};
use opcat::modulelab::nerve::{project, NerveCat, Projection, TableSemigroup};
use opcat::operads::{EnumerableOperad, GraphFamily, Operad, Perm, TableFamily, TableOperad};

fn fin_map(n: usize, m: usize) -> impl Strategy<Value = FinMap> {
    prop::collection::vec(1..=m, n).prop_map(move |t| FinMap::new(m, t).unwrap())
}

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn pick<T: Clone>(xs: &[T], seed: usize) -> T {
    xs[seed % xs.len()].clone()
}

fn by_hand(h: &FinMap, f: &FinMap) -> Vec<usize> {
    (1..=f.n).map(|i| h.table[f.table[i - 1] - 1]).collect()
}

proptest! {
    #[test]
    fn fin_map_composition(f in fin_map(4, 3), g in fin_map(3, 5), h in fin_map(5, 2)) {
        let gf = FinMap::compose(&g, &f).unwrap();
        prop_assert_eq!(&gf.table, &by_hand(&g, &f));
        let left = FinMap::compose(&h, &gf).unwrap();
        let right = FinMap::compose(&FinMap::compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(FinMap::compose(&FinMap::identity(3), &f).unwrap(), f.clone());
        prop_assert_eq!(FinMap::compose(&f, &FinMap::identity(4)).unwrap(), f);
    }

    #[test]
    fn perm_group_laws(a in perm(5), b in perm(5), c in perm(5)) {
        prop_assert_eq!(a.after(&b).after(&c), a.after(&b.after(&c)));
        prop_assert!(a.after(&a.inverse()).is_identity());
        prop_assert!(a.inverse().after(&a).is_identity());
        prop_assert_eq!(Perm::from_one_line(&a.one_line()).unwrap(), a);
    }

    #[test]
    fn graded_composition_sums_gradings(
        n in 1usize..6,
        seeds in prop::array::uniform3(0usize..10_000),
        max in 0u32..3,
    ) {
        let m = 1 + seeds[0] % n;
        let l = 1 + seeds[1] % m;
        let f = pick(&GradedSurjection::all(n, m, max), seeds[0]);
        let h = pick(&GradedSurjection::all(m, l, max), seeds[1]);
        let k = pick(&GradedSurjection::all(l, 1, max), seeds[2]);
        let hf = GradedSurjection::compose(&h, &f).unwrap();
        prop_assert!(hf.map.is_min_fiber_ordered());
        prop_assert_eq!(hf.total_grading(), h.total_grading() + f.total_grading());
        for i in 1..=l {
            let extra: u32 = h.map.fiber(i).iter().map(|&j| f.grading[j - 1]).sum();
            prop_assert_eq!(hf.grading[i - 1], h.grading[i - 1] + extra);
        }
        let left = GradedSurjection::compose(&k, &hf).unwrap();
        let right = GradedSurjection::compose(&GradedSurjection::compose(&k, &h).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn cobordism_euler_is_additive(
        dims in prop::array::uniform3(0usize..3),
        seeds in prop::array::uniform2(0usize..10_000),
    ) {
        let f = pick(&Cobordism::all(dims[0], dims[1], 1), seeds[0]);
        let h = pick(&Cobordism::all(dims[1], dims[2], 1), seeds[1]);
        let hf = Cobordism::compose(&h, &f).unwrap();
        prop_assert_eq!(hf.euler(), h.euler() + f.euler());
        prop_assert_eq!(Cobordism::compose(&Cobordism::identity(dims[1]), &f).unwrap(), f.clone());
        let j = Cobordism::from_json(&hf.to_json()).unwrap();
        prop_assert_eq!(j, hf);
    }

    #[test]
    fn phi_reverses_composition(n in 1usize..5, seeds in prop::array::uniform2(0usize..10_000)) {
        let m = 1 + seeds[0] % n;
        let l = 1 + seeds[1] % m;
        let f = pick(&GradedSurjection::all(n, m, 1), seeds[0]);
        let h = pick(&GradedSurjection::all(m, l, 1), seeds[1]);
        let hf = GradedSurjection::compose(&h, &f).unwrap();
        prop_assert_eq!(phi(&hf), Cobordism::compose(&phi(&f), &phi(&h)).unwrap());
    }

    #[test]
    fn nc_cobordisms_factor(n in 0usize..3, m in 1usize..4, seed in 0usize..10_000) {
        let all: Vec<Cobordism> = Cobordism::all(n, m, 2).into_iter().filter(Cobordism::is_nc).collect();
        let f = pick(&all, seed);
        let fac = factor_via_gos(&f).unwrap();
        prop_assert_eq!(Cobordism::compose(&phi(&fac.graded), &fac.splitter).unwrap(), f);
    }

    #[test]
    fn u_as_sequential_and_equivariant(
        arities in prop::array::uniform3(0usize..4),
        seeds in prop::array::uniform3(0usize..10_000),
        i in 0usize..4,
        j in 0usize..4,
    ) {
        let op = TableOperad::new(TableFamily::UAs);
        let [a, b, c] = arities;
        prop_assume!(a > 0 && b > 0);
        let (i, j) = (1 + i % a, 1 + j % b);
        let p = pick(&op.operations(&(), a), seeds[0]);
        let q = pick(&op.operations(&(), b), seeds[1]);
        let r = pick(&op.operations(&(), c), seeds[2]);
        let pq = op.compose_at(&p, i, &q).unwrap();
        prop_assert_eq!(op.arity(&pq), a + b - 1);
        let left = op.compose_at(&pq, i + j - 1, &r).unwrap();
        let right = op.compose_at(&p, i, &op.compose_at(&q, j, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(op.compose_at(&p, i, &op.identity(&())).unwrap(), p.clone());
        let s = Perm::all(a);
        let sigma = pick(&s, seeds[2]);
        let tau = pick(&s, seeds[0] + seeds[1]);
        let twice = op.sym_act(&op.sym_act(&p, &sigma).unwrap(), &tau).unwrap();
        prop_assert_eq!(twice, op.sym_act(&p, &tau.after(&sigma)).unwrap());
    }

    #[test]
    fn canonical_form_ignores_vertex_order(leaves in 1usize..5, vertices in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_tree(&mut rng, GraphFamily::SOp, leaves, vertices);
        let order: Vec<usize> = (0..g.vertex_count()).rev().collect();
        let h = g.reorder_vertices(&order);
        prop_assert!(is_isomorphic(&g, &h));
        prop_assert_eq!(canonical_form(&g).0, canonical_form(&h).0);
        let back = GenusGraph::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn nerve_projection_is_a_functor(x in prop::collection::vec(0usize..2, 1..4), seed in any::<u64>()) {
        let cat = NerveCat { semigroup: TableSemigroup::cyclic(2), max_len: 12 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = cat.random_from(&mut rng, &x, 2);
        let g = cat.random_from(&mut rng, &f.target, 2);
        prop_assert!(cat.is_valid(&f) && cat.is_valid(&g));
        let gf = cat.compose(&g, &f).unwrap();
        prop_assert!(cat.is_valid(&gf));
        prop_assert_eq!(project(&gf), FinMap::compose(&project(&g), &project(&f)).unwrap());
        let pf = project(&f);
        prop_assert!(pf.is_injective() && pf.is_order_preserving() && pf.is_endpoint_preserving());
        let id = <Projection as Functor<NerveCat<TableSemigroup>, FinSetCat>>::mor(&Projection, &cat.identity(&x));
        prop_assert_eq!(id, FinMap::identity(x.len() + 1));
    }
}
