use geomodal::bisim::{
    compare_equivalences, greatest_lambda_bisim, greatest_lambda_bisim_within, is_am_bisim, is_lambda_bisim,
    modal_equiv_relation, search_am_transition, AmBounds, AmOutcome, Relation,
};
use geomodal::coalgfun::{is_model_morphism, random_model, random_space, GeomModel, TopFunctor};
use geomodal::finspace::{continuous_maps, FinSpace};
use geomodal::logic::{is_normal, normal_form, random_formula, theory_quotient, truth_set, Formula, Signature};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn signature(k: usize) -> Signature {
    match k % 4 {
        0 => Signature::builtin(TopFunctor::Vietoris),
        1 => Signature::builtin(TopFunctor::Dkh),
        2 => Signature::builtin(TopFunctor::Trivial),
        _ => Signature::select(TopFunctor::Vietoris, &["box"]).unwrap(),
    }
}

fn model(rng: &mut ChaCha8Rng, sig: &Signature, max: usize) -> GeomModel {
    loop {
        let n = rng.gen_range(1..=max);
        let discrete = rng.gen_bool(0.3) || *sig.functor() == TopFunctor::Dkh && n > 2;
        let x = random_space(rng, n, discrete);
        if let Ok(m) = random_model(rng, &x, sig.functor(), &["p", "q"]) {
            return m;
        }
    }
}

fn letters() -> Vec<String> {
    vec!["p".into(), "q".into()]
}

fn sub_relation(rng: &mut ChaCha8Rng, left: usize, right: usize) -> Relation {
    let mut s = Relation::empty(left, right);
    for x in 0..left {
        for y in 0..right {
            if rng.gen_bool(0.6) {
                s.insert(x, y);
            }
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn opens_are_closed_under_union_and_intersection(seed in any::<u64>(), n in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_space(&mut rng, n, false);
        let opens = x.opens();
        prop_assert!(opens.contains(&x.full()));
        for &a in &opens {
            for &b in &opens {
                prop_assert!(x.is_open(a | b));
                prop_assert!(x.is_open(a & b));
            }
        }
    }

    #[test]
    fn composites_of_continuous_maps_are_continuous(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spaces: Vec<FinSpace> = (0..3).map(|_| {
            let n = rng.gen_range(1..=3);
            random_space(&mut rng, n, false)
        }).collect();
        let fs = continuous_maps(&spaces[0], &spaces[1]);
        let gs = continuous_maps(&spaces[1], &spaces[2]);
        let f = &fs[rng.gen_range(0..fs.len())];
        let g = &gs[rng.gen_range(0..gs.len())];
        prop_assert!(f.then(g).unwrap().is_continuous());
    }

    #[test]
    fn printed_formulas_parse_back(seed in any::<u64>(), k in 0usize..4, depth in 0usize..4) {
        let sig = signature(k);
        let phi = random_formula(&mut ChaCha8Rng::seed_from_u64(seed), &sig, &letters(), depth);
        let back = Formula::parse(&phi.to_string(), &sig).unwrap();
        prop_assert_eq!(back, phi);
    }

    #[test]
    fn normal_forms_keep_truth_sets(seed in any::<u64>(), k in 0usize..4) {
        let sig = signature(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = model(&mut rng, &sig, 3);
        let phi = random_formula(&mut rng, &sig, &letters(), 3);
        let nf = normal_form(&phi, &sig).unwrap();
        prop_assert!(is_normal(&nf));
        prop_assert_eq!(truth_set(&m, &nf, &sig).unwrap(), truth_set(&m, &phi, &sig).unwrap());
    }

    #[test]
    fn theory_maps_preserve_truth(seed in any::<u64>(), k in 0usize..4) {
        let sig = signature(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, m2) = (model(&mut rng, &sig, 3), model(&mut rng, &sig, 3));
        let Ok(q) = theory_quotient(&[&m, &m2], &sig) else { return Ok(()) };
        let Some(z) = q.model.as_ref() else { return Ok(()) };
        for (k, src) in [&m, &m2].into_iter().enumerate() {
            prop_assert!(is_model_morphism(&q.maps[k], src, z).unwrap());
            for _ in 0..5 {
                let phi = random_formula(&mut rng, &sig, &letters(), 3);
                let there = truth_set(z, &phi, &sig).unwrap();
                prop_assert_eq!(truth_set(src, &phi, &sig).unwrap(), q.maps[k].preimage(there));
            }
        }
    }

    #[test]
    fn lambda_bisimilarity_refines_modal_equivalence(seed in any::<u64>(), k in 0usize..4) {
        let sig = signature(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, m2) = (model(&mut rng, &sig, 3), model(&mut rng, &sig, 3));
        let gfp = greatest_lambda_bisim(&m, &m2, &sig).unwrap();
        prop_assert!(is_lambda_bisim(&gfp, &m, &m2, &sig).unwrap().is_none());
        prop_assert!(gfp.is_subset(&modal_equiv_relation(&m, &m2, &sig).unwrap()));
    }

    #[test]
    fn bisimulations_are_closed_under_union_and_below_the_fixpoint(seed in any::<u64>(), k in 0usize..4) {
        let sig = signature(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, m2) = (model(&mut rng, &sig, 3), model(&mut rng, &sig, 3));
        let gfp = greatest_lambda_bisim(&m, &m2, &sig).unwrap();
        let (l, r) = (gfp.left_len(), gfp.right_len());
        let a = greatest_lambda_bisim_within(&sub_relation(&mut rng, l, r), &m, &m2, &sig).unwrap();
        let b = greatest_lambda_bisim_within(&sub_relation(&mut rng, l, r), &m, &m2, &sig).unwrap();
        prop_assert!(is_lambda_bisim(&a.union(&b), &m, &m2, &sig).unwrap().is_none());
        prop_assert!(a.is_subset(&gfp) && b.is_subset(&gfp));
    }

    #[test]
    fn transitions_found_are_verified_and_lambda(seed in any::<u64>(), k in 0usize..2) {
        // the monotone signatures only
        let sig = signature(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, m2) = (model(&mut rng, &sig, 2), model(&mut rng, &sig, 2));
        let b = sub_relation(&mut rng, m.space().len(), m2.space().len());
        if let AmOutcome::Found(beta) = search_am_transition(&b, &m, &m2, AmBounds::default()).unwrap() {
            prop_assert!(is_am_bisim(&b, &beta, &m, &m2).unwrap());
            prop_assert!(is_lambda_bisim(&b, &m, &m2, &sig).unwrap().is_none());
        }
    }

    #[test]
    fn comparisons_are_deterministic(seed in any::<u64>(), k in 0usize..4) {
        let sig = signature(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, m2) = (model(&mut rng, &sig, 2), model(&mut rng, &sig, 2));
        let a = compare_equivalences(&m, &m2, &sig, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = compare_equivalences(&m, &m2, &sig, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
        prop_assert!(a.ok(), "{a:?}");
    }
}
