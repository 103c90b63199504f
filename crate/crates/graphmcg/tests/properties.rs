//! Property tests for the algebraic and topological laws of the library.

use graphmcg::algprops::RElContext;
use graphmcg::cech::{BasisFamily, RawFn};
use graphmcg::classify::classify_coarse;
use graphmcg::endspace::{Address, EndPoint, EndSpaceExpr, Mark, MarkFilter};
use graphmcg::freegroup::{
    corank_of_free_factor, subgroup_rank, FoldedGraph, FreeWord, GenId, Letter,
    WindowedSubstitution,
};
use graphmcg::graphmodel::{
    descriptor_from_wedge, wedge_decomposition, GraphDescriptor, Rank, WedgeMultiplicities,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn mark(loops: bool) -> Mark {
    if loops {
        Mark::Loops
    } else {
        Mark::Plain
    }
}

/// Valid expressions only: a plain-limit sequence never covers a marked
/// body.
fn expr_strategy() -> impl Strategy<Value = EndSpaceExpr> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(|m| EndSpaceExpr::pt(mark(m))),
        any::<bool>().prop_map(|m| EndSpaceExpr::cantor(mark(m))),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..=3).prop_map(EndSpaceExpr::sum),
            (inner, any::<bool>()).prop_map(|(body, m)| {
                let limit = if body.contains_marked() { Mark::Loops } else { mark(m) };
                EndSpaceExpr::seq(body, limit)
            }),
        ]
    })
}

fn word_strategy(gens: i64, max_len: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((1..=gens, any::<bool>()), 0..=max_len).prop_map(|letters| {
        FreeWord::from_letters(
            letters
                .into_iter()
                .map(|(i, inv)| Letter::new(GenId::x(i), inv)),
        )
    })
}

/// Substitutions assembled from swaps, right multiplications and a shift.
fn subst_strategy() -> impl Strategy<Value = WindowedSubstitution> {
    prop::collection::vec((0..3u8, 1..=4i64, 1..=4i64, -2..=2i64), 0..4).prop_map(|moves| {
        let mut s = WindowedSubstitution::identity();
        for (kind, i, j, k) in moves {
            let step = match kind {
                0 if i != j => WindowedSubstitution::swap(GenId::x(i), GenId::x(j)),
                1 if i != j => WindowedSubstitution::identity().with_image(
                    GenId::x(i),
                    FreeWord::generator(GenId::x(i)).mul(&FreeWord::generator(GenId::x(j))),
                ),
                2 if k != 0 => WindowedSubstitution::shift(0, k),
                _ => WindowedSubstitution::identity(),
            };
            s = s.compose(&step);
        }
        s
    })
}

proptest! {
    #[test]
    fn cardinality_adds_over_sums(x in expr_strategy(), y in expr_strategy()) {
        let sum = EndSpaceExpr::sum(vec![x.clone(), y.clone()]);
        for filter in [MarkFilter::All, MarkFilter::Marked, MarkFilter::Unmarked] {
            let expected = match (x.cardinality(filter), y.cardinality(filter)) {
                (graphmcg::endspace::Cardinality::Finite(a), graphmcg::endspace::Cardinality::Finite(b)) =>
                    graphmcg::endspace::Cardinality::Finite(a + b),
                (a, b) => std::cmp::max_by_key(a, b, |c| match c {
                    graphmcg::endspace::Cardinality::Finite(_) => 0,
                    graphmcg::endspace::Cardinality::CountablyInfinite => 1,
                    graphmcg::endspace::Cardinality::Uncountable => 2,
                }),
            };
            prop_assert_eq!(sum.cardinality(filter), expected);
        }
    }

    #[test]
    fn accumulation_is_monotone_under_sums(x in expr_strategy(), y in expr_strategy()) {
        let sum = EndSpaceExpr::sum(vec![x.clone(), y.clone()]);
        prop_assert_eq!(
            sum.has_accumulation_point_in_unmarked(),
            x.has_accumulation_point_in_unmarked() || y.has_accumulation_point_in_unmarked()
        );
    }

    #[test]
    fn children_partition_their_cylinder(expr in expr_strategy(), bits in prop::collection::vec(any::<bool>(), 0..4)) {
        let cylinder = Address(bits);
        prop_assume!(!expr.cylinder_is_empty(&cylinder));
        let children = expr.cylinder_children(&cylinder);
        prop_assert!(!children.is_empty());
        // sample points from subcylinders two levels deeper
        let mut samples: Vec<EndPoint> = Vec::new();
        for extra in 0..4u64 {
            let mut address = cylinder.clone();
            address.0.push(extra & 1 == 1);
            address.0.push(extra & 2 == 2);
            if let Some(p) = expr.member_point(&address, false) {
                samples.push(p);
            }
            if let Some(p) = expr.member_point(&address, true) {
                samples.push(p);
            }
        }
        prop_assert!(!samples.is_empty());
        for p in &samples {
            let containing: Vec<_> = children.iter().filter(|c| expr.member_of(p, c)).collect();
            prop_assert_eq!(containing.len(), 1, "point {} not in exactly one child", p);
        }
    }

    #[test]
    fn decomposition_respects_cylinder_partitions(expr in expr_strategy(), bits in prop::collection::vec(any::<bool>(), 0..4)) {
        let cylinder = Address(bits);
        prop_assume!(!expr.cylinder_is_empty(&cylinder));
        let basis = BasisFamily::new(&expr, 6);
        let whole = basis.decompose(&cylinder).unwrap();
        let mut parts = graphmcg::cech::LocallyConstantFn::zero(expr.clone());
        for child in expr.cylinder_children(&cylinder) {
            parts = parts.add(&basis.decompose(&child).unwrap()).unwrap();
        }
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn evaluation_is_additive(
        expr in expr_strategy(),
        terms_a in prop::collection::vec((prop::collection::vec(any::<bool>(), 0..4), -5..=5i64), 0..4),
        terms_b in prop::collection::vec((prop::collection::vec(any::<bool>(), 0..4), -5..=5i64), 0..4),
    ) {
        let f = RawFn::new(expr.clone(), terms_a.into_iter().map(|(b, c)| (Address(b), c)).collect());
        let g = RawFn::new(expr.clone(), terms_b.into_iter().map(|(b, c)| (Address(b), c)).collect());
        let sum = f.add(&g).unwrap();
        for greedy in [false, true] {
            let p = expr.member_point(&Address::empty(), greedy).unwrap();
            prop_assert_eq!(
                sum.evaluate(&p).unwrap(),
                f.evaluate(&p).unwrap() + g.evaluate(&p).unwrap()
            );
        }
    }

    #[test]
    fn apply_distributes_over_multiplication(
        f in subst_strategy(),
        u in word_strategy(4, 6),
        v in word_strategy(4, 6),
    ) {
        prop_assert_eq!(f.apply(&u.mul(&v)), f.apply(&u).mul(&f.apply(&v)));
    }

    #[test]
    fn composition_is_associative_extensionally(
        f in subst_strategy(),
        g in subst_strategy(),
        h in subst_strategy(),
    ) {
        let left = f.compose(&g).compose(&h);
        let right = f.compose(&g.compose(&h));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn wedge_round_trips_characteristic_data(
        loops in 0..3u64, rays in 0..4u64, lochness in 0..3u64, millipedes in 0..3u64,
    ) {
        let m = WedgeMultiplicities { loops, rays, lochness, millipedes };
        prop_assume!(m.monsters() > 0 || rays > 0);
        prop_assume!(m.monsters() > 0 || loops > 0 || rays > 0);
        let g = descriptor_from_wedge(m).unwrap();
        let d = wedge_decomposition(&g).unwrap();
        let rebuilt = descriptor_from_wedge(d.raw).unwrap();
        prop_assert_eq!(rebuilt.characteristic_triple(), g.characteristic_triple());
        prop_assert_eq!(classify_coarse(&rebuilt).class, classify_coarse(&g).class);
        let canonical = descriptor_from_wedge(d.canonical).unwrap();
        prop_assert_eq!(canonical.characteristic_triple(), g.characteristic_triple());
    }
}

#[test]
fn folding_is_confluent_over_insertion_order() {
    let mut rng = StdRng::seed_from_u64(0xF01D);
    for _ in 0..200 {
        let count = rng.random_range(1..=5);
        let mut words = Vec::new();
        for _ in 0..count {
            let len = rng.random_range(1..=6);
            let letters = (0..len).map(|_| {
                Letter::new(GenId::x(rng.random_range(1..=3)), rng.random_bool(0.5))
            });
            let w = FreeWord::from_letters(letters);
            if !w.is_empty() {
                words.push(w);
            }
        }
        if words.is_empty() {
            continue;
        }
        let reference = FoldedGraph::fold(&words).canonical_form();
        let mut shuffled = words.clone();
        shuffled.shuffle(&mut rng);
        assert_eq!(FoldedGraph::fold(&shuffled).canonical_form(), reference);
    }
}

#[test]
fn nielsen_moves_preserve_subgroup_rank() {
    let mut rng = StdRng::seed_from_u64(0x0413);
    for _ in 0..60 {
        let k = rng.random_range(1..=6usize);
        let mut words: Vec<FreeWord> = (1..=k as i64).map(|i| FreeWord::generator(GenId::x(i))).collect();
        for _ in 0..rng.random_range(1..=8) {
            let i = rng.random_range(0..k);
            match rng.random_range(0..3) {
                0 => words[i] = words[i].inverse(),
                1 => {
                    let j = rng.random_range(0..k);
                    if i != j {
                        words[i] = words[i].mul(&words[j]);
                    }
                }
                _ => {
                    let j = rng.random_range(0..k);
                    words.swap(i, j);
                }
            }
        }
        if words.iter().any(|w| w.is_empty()) {
            continue; // a move collapsed a generator; skip the degenerate tuple
        }
        assert_eq!(subgroup_rank(&words), k as u64, "perturbed basis {words:?}");
    }
}

#[test]
fn corank_of_a_generator_subset_is_the_count_difference() {
    let mut rng = StdRng::seed_from_u64(0xC0);
    for _ in 0..50 {
        let n = rng.random_range(1..=8usize);
        let ambient: Vec<GenId> = (0..n as i64).map(GenId::x).collect();
        let subset: Vec<FreeWord> = ambient
            .iter()
            .filter(|_| rng.random_bool(0.5))
            .map(|&g| FreeWord::generator(g))
            .collect();
        let corank = corank_of_free_factor(&ambient, &subset).unwrap();
        assert_eq!(corank, (n - subset.len()) as u64);
    }
}

#[test]
fn locally_constant_map_group_axioms() {
    let ctx = RElContext::new(EndSpaceExpr::cantor(Mark::Plain), 3);
    let mut rng = StdRng::seed_from_u64(0xA1);
    let random_element = |rng: &mut StdRng, ctx: &RElContext| {
        // addresses starting with a one-bit never touch the all-zeros base
        let mut cells = Vec::new();
        for _ in 0..rng.random_range(1..=3) {
            let width = rng.random_range(1..=3usize);
            let mut bits = vec![true];
            for _ in 1..width {
                bits.push(rng.random_bool(0.5));
            }
            let len = rng.random_range(1..=4);
            let letters = (0..len).map(|_| {
                Letter::new(GenId::x(rng.random_range(1..=3)), rng.random_bool(0.5))
            });
            cells.push((Address(bits), FreeWord::from_letters(letters)));
        }
        ctx.element(cells).unwrap()
    };
    for _ in 0..100 {
        let a = random_element(&mut rng, &ctx);
        let b = random_element(&mut rng, &ctx);
        let c = random_element(&mut rng, &ctx);
        let ab_c = ctx.multiply(&ctx.multiply(&a, &b).unwrap(), &c).unwrap();
        let a_bc = ctx.multiply(&a, &ctx.multiply(&b, &c).unwrap()).unwrap();
        assert_eq!(ab_c, a_bc);
        assert_eq!(ctx.multiply(&a, &ctx.identity()).unwrap(), a);
        assert_eq!(ctx.multiply(&ctx.identity(), &a).unwrap(), a);
        assert_eq!(ctx.multiply(&a, &ctx.invert(&a)).unwrap(), ctx.identity());
    }
}

#[test]
fn forgetful_restriction_is_a_homomorphism_on_small_subsets() {
    let ctx = RElContext::new(EndSpaceExpr::cantor(Mark::Plain), 3);
    let mut rng = StdRng::seed_from_u64(0xA2);
    let ends_pool: Vec<EndPoint> = vec![
        ctx.base().clone(),
        EndPoint::constant(true),
        EndPoint::new(vec![true], vec![false]).unwrap(),
        EndPoint::new(vec![true, true, false], vec![true, false]).unwrap(),
    ];
    for _ in 0..60 {
        let take = rng.random_range(1..=ends_pool.len());
        let ends = &ends_pool[..take];
        let a = element_on_ones(&ctx, &mut rng);
        let b = element_on_ones(&ctx, &mut rng);
        let fa = ctx.forgetful(&a, ends).unwrap();
        let fb = ctx.forgetful(&b, ends).unwrap();
        let fab = ctx.forgetful(&ctx.multiply(&a, &b).unwrap(), ends).unwrap();
        assert_eq!(fa.multiply(&fb).unwrap(), fab);
    }
}

fn element_on_ones(ctx: &RElContext, rng: &mut StdRng) -> graphmcg::algprops::REl {
    let mut cells = Vec::new();
    for _ in 0..rng.random_range(1..=3) {
        let width = rng.random_range(1..=3usize);
        let mut bits = vec![true];
        for _ in 1..width {
            bits.push(rng.random_bool(0.5));
        }
        let len = rng.random_range(0..=4);
        let letters =
            (0..len).map(|_| Letter::new(GenId::x(rng.random_range(1..=3)), rng.random_bool(0.5)));
        cells.push((Address(bits), FreeWord::from_letters(letters)));
    }
    ctx.element(cells).unwrap()
}

#[test]
fn absent_witness_means_cellwise_commuting() {
    let ctx = RElContext::new(EndSpaceExpr::cantor(Mark::Plain), 3);
    let mut rng = StdRng::seed_from_u64(0xA3);
    let mut none_count = 0;
    for _ in 0..200 {
        let a = element_on_ones(&ctx, &mut rng);
        let b = element_on_ones(&ctx, &mut rng);
        match ctx.find_noncommuting_end(&a, &b) {
            Some(witness) => {
                let u = ctx.evaluate(&a, &witness).unwrap();
                let v = ctx.evaluate(&b, &witness).unwrap();
                assert_ne!(u.mul(&v), v.mul(&u));
            }
            None => {
                none_count += 1;
                for (leaf, u) in a.cells() {
                    let p = ctx.expr().member_point(&leaf, false).unwrap();
                    let v = ctx.evaluate(&b, &p).unwrap();
                    assert_eq!(u.mul(&v), v.mul(u), "cell {leaf} not abelian");
                }
            }
        }
    }
    assert!(none_count > 0, "expected some commuting pairs in the sample");
}

#[test]
fn residual_finiteness_and_tits_alternative_coincide_on_random_descriptors() {
    let mut rng = StdRng::seed_from_u64(0xA4);
    for _ in 0..100 {
        let marked = rng.random_bool(0.5);
        let ends = if marked {
            EndSpaceExpr::sum(vec![EndSpaceExpr::pt(Mark::Loops), EndSpaceExpr::cantor(Mark::Plain)])
        } else {
            EndSpaceExpr::cantor(Mark::Plain)
        };
        let rank = if marked { Rank::Infinite } else { Rank::Finite(rng.random_range(0..5)) };
        let g = GraphDescriptor::new(rank, ends).unwrap();
        assert_eq!(
            graphmcg::algprops::is_residually_finite(&g),
            graphmcg::algprops::satisfies_tits_alternative_pmap(&g)
        );
    }
}
