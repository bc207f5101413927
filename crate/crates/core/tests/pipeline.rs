use geomcode_core::analysis::{
    alpha_profiles, check_gpg_axioms, check_strongly_regular, feasibility_check, spectrum, PointGraph,
};
use geomcode_core::gf2::{brouwer_predict, dimension_and_rate, RankKind};
use geomcode_core::metrics::{incidence_bounds, six_cycles, Girth};
use geomcode_core::{build_conic_structure, build_hyperbolic_structure, FieldSpec, SrpgParams};
use proptest::prelude::*;

fn run(ic: &geomcode_core::IncidenceStructure) -> (SrpgParams, u64, u64) {
    let gpg = check_gpg_axioms(ic).unwrap();
    let srg = check_strongly_regular(ic).unwrap();
    let params = SrpgParams::new(&gpg, &srg);
    let spec = spectrum(&params).unwrap();
    let graph = PointGraph::new(ic).unwrap();
    let pred = brouwer_predict(&spec, params.t);
    assert_eq!(pred.kind, RankKind::Exact);
    assert_eq!(pred.value as usize, ic.matrix.gram2().rank2());
    let cycles = six_cycles(ic, &graph, &params).unwrap();
    assert_eq!(cycles.girth, Girth::Finite(6));
    assert_eq!(cycles.formula, cycles.enumerated);
    let bounds = incidence_bounds(&graph, &params, &spec).unwrap();
    assert!(bounds.effective >= 1);
    (params, cycles.enumerated, dimension_and_rate(&ic.matrix).dimension as u64)
}

#[test]
fn conic_pipeline() {
    let ic = build_conic_structure(&FieldSpec::prime(7).unwrap()).unwrap();
    let (params, cycles, dim) = run(&ic);
    assert_eq!((params.v, params.k, params.lambda, params.mu), (36, 20, 10, 12));
    assert_eq!((params.s, params.t), (4, 4));
    assert_eq!(cycles, 840);
    assert_eq!(dim, 0);
    assert!(feasibility_check(&params).all_pass());
}

#[test]
fn hyperbolic_pipeline() {
    let ic = build_hyperbolic_structure(&FieldSpec::prime(3).unwrap()).unwrap();
    let (params, cycles, dim) = run(&ic);
    assert_eq!(cycles, 16848);
    assert_eq!(dim, 567);
    assert!(feasibility_check(&params).all_pass());
    let profile = alpha_profiles(&ic, &params).unwrap();
    assert_eq!(profile.lambda_from_profile(params.s), Some(27));
    assert_eq!(profile.mu_from_profile(), Some(30));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_operations_are_consistent(
        (p, k) in prop_oneof![Just((3u32, 1u32)), Just((5, 1)), Just((3, 2)), Just((5, 2)), Just((3, 3))],
        a in any::<u32>(),
        b in any::<u32>(),
        c in any::<u32>(),
    ) {
        let f = FieldSpec::new(p, k, None).unwrap();
        let q = f.order();
        let (a, b, c) = (f.element(a % q).unwrap(), f.element(b % q).unwrap(), f.element(c % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
    }
}
