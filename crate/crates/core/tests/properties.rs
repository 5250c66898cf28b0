use choicekit_core::assessment::{AssessmentFamily, Membership, DEFAULT_SELECTION_LIMIT as LIMIT};
use choicekit_core::choice::ChoiceModel;
use choicekit_core::cone::ProperCone;
use choicekit_core::geometry::{conic_feasible, sup_ray_parameter, RayBound};
use choicekit_core::oracle::{closure_witnesses, fm_conic_feasible};
use choicekit_core::rules::{d_compatible, OptionSet, Rule, RuleSet};
use choicekit_core::{assessment, Rational, Vector};
use proptest::collection::vec;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    vec(rational(), dim).prop_map(|c| Vector::new(c).unwrap())
}

fn nonzero_vector(dim: usize) -> impl Strategy<Value = Vector> {
    vector(dim).prop_filter("nonzero", |v| !v.is_zero())
}

fn cone_in(dim: usize) -> impl Strategy<Value = ProperCone> {
    vec(nonzero_vector(dim), 0..=4).prop_filter_map("blunt", move |g| ProperCone::new(dim, g).ok())
}

fn dim_and<T: std::fmt::Debug, S: Strategy<Value = T>>(f: impl Fn(usize) -> S + Clone) -> impl Strategy<Value = (usize, T)> {
    (1usize..=3).prop_flat_map(move |d| (Just(d), f(d)))
}

fn family(dim: usize) -> impl Strategy<Value = AssessmentFamily> {
    vec(vec(nonzero_vector(dim), 1..=2), 0..=3)
        .prop_filter_map("consistent", move |b| {
            let f = AssessmentFamily::new(dim, b).ok()?;
            f.is_consistent(LIMIT).unwrap().then_some(f)
        })
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn fm_agrees_with_simplex((_, (g, t)) in dim_and(|d| (vec(vector(d), 0..=5), vector(d)))) {
        prop_assert_eq!(fm_conic_feasible(&g, &t).unwrap(), conic_feasible(&g, &t).unwrap());
    }

    #[test]
    fn membership_ignores_generator_scale_and_order(
        (_, (c, u, scales)) in dim_and(|d| (cone_in(d), vector(d), vec(1i64..=7, 4)))
    ) {
        let mut rescaled: Vec<Vector> = c.generators().iter().zip(&scales)
            .map(|(g, s)| g.scale(&q(*s, 3))).collect();
        rescaled.reverse();
        let other = ProperCone::new(c.dim(), rescaled).unwrap();
        prop_assert_eq!(c.contains(&u).unwrap(), other.contains(&u).unwrap());
    }

    #[test]
    fn dominance_is_membership_of_difference((_, (c, u, v)) in dim_and(|d| (cone_in(d), vector(d), vector(d)))) {
        prop_assert_eq!(c.dominates(&u, &v).unwrap(), c.contains(&(&u - &v)).unwrap());
        if c.dominates(&u, &v).unwrap() {
            prop_assert!(!c.dominates(&v, &u).unwrap());
        }
    }

    #[test]
    fn choice_commutes_with_translation(
        (_, (c, a, w)) in dim_and(|d| (cone_in(d), vec(vector(d), 1..=5), vector(d)))
    ) {
        let chosen = c.choose(&a).unwrap();
        prop_assert!(!chosen.is_empty());
        prop_assert!(chosen.iter().all(|x| a.contains(x)));
        let moved: Vec<Vector> = a.iter().map(|x| x + &w).collect();
        let mut expected: Vec<Vector> = chosen.iter().map(|x| x + &w).collect();
        expected.sort();
        prop_assert_eq!(c.choose(&moved).unwrap(), expected);
    }

    #[test]
    fn sup_ray_parameter_is_attained_and_tight(
        (_, (c, base, dir)) in dim_and(|d| (cone_in(d), vector(d), nonzero_vector(d)))
    ) {
        if let RayBound::Bounded(hi) = sup_ray_parameter(c.generators(), &base, &dir).unwrap() {
            prop_assert!(conic_feasible(c.generators(), &base.add_scaled(&hi, &dir)).unwrap());
            let beyond = hi + q(1, 1000);
            prop_assert!(!conic_feasible(c.generators(), &base.add_scaled(&beyond, &dir)).unwrap());
        }
    }

    #[test]
    fn single_cone_family_satisfies_pk_axioms(
        (_, (c, sets)) in dim_and(|d| (cone_in(d), vec(vec(vector(d), 1..=3), 1..=4)))
    ) {
        let sample: Vec<OptionSet> = sets.into_iter().map(|s| OptionSet::finite(s).unwrap()).collect();
        let report = assessment::check_pk_axioms(&c, &sample, &[q(1, 2), q(2, 1)]).unwrap();
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn closure_witnesses_are_members((_, (f, extras)) in dim_and(|d| (family(d), vec(vector(d), 0..=2)))) {
        let ext = f.natural_extension(LIMIT).unwrap();
        for w in closure_witnesses(&f, &[q(1, 2), q(1, 1), q(2, 1)], &extras, LIMIT).unwrap() {
            prop_assert!(ext.membership(&OptionSet::Finite(w.clone())).unwrap().is_member(), "{:?}", w);
        }
    }

    #[test]
    fn refutations_carry_checkable_certificates((_, (f, s)) in dim_and(|d| (family(d), vec(vector(d), 1..=3)))) {
        let ext = f.natural_extension(LIMIT).unwrap();
        let set = OptionSet::finite(s.clone()).unwrap();
        if let Membership::NonMember { certificate } = ext.membership(&set).unwrap() {
            prop_assert!(f.basis().is_empty() || ext.cones().contains(&certificate));
            for p in &s {
                let inside = !p.is_zero() && fm_conic_feasible(certificate.generators(), p).unwrap();
                prop_assert!(!inside);
            }
        }
    }

    #[test]
    fn assessment_choice_matches_its_representation(
        (_, (f, a)) in dim_and(|d| (family(d), vec(vector(d), 1..=4)))
    ) {
        let model = ChoiceModel::from_assessment(&f, LIMIT).unwrap();
        let cones = ChoiceModel::from_cones(model.represent()).unwrap();
        prop_assert_eq!(model.choose(&a).unwrap(), cones.choose(&a).unwrap());
    }

    #[test]
    fn monotonification_preserves_compatibility(
        (d, (c, premises, conclusions, extras)) in dim_and(|d| (
            cone_in(d),
            vec(vec(vector(d), 1..=2), 1..=3),
            vec(proptest::option::of(vec(vector(d), 1..=2)), 3),
            vec(vec(vector(d), 1..=2), 1..=3),
        ))
    ) {
        let rules: Vec<Rule> = premises.into_iter().zip(conclusions)
            .map(|(p, c)| Rule::new(
                vec![OptionSet::finite(p).unwrap()],
                c.map(|c| OptionSet::finite(c).unwrap()),
            ))
            .collect();
        let rules = RuleSet::new(d, rules).unwrap();
        let mut grown = rules.clone();
        grown.extend(rules.monotonified(&extras).unwrap()).unwrap();
        prop_assert_eq!(
            d_compatible(&c, &rules).unwrap().is_compatible(),
            d_compatible(&c, &grown).unwrap().is_compatible()
        );
    }
}
