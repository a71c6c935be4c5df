use proptest::prelude::*;

use qotto::complex2::{eig_hermitian2, exp_neg_i_h, Hermitian2, Matrix2, Unitary2, C64};
use qotto::propagator::transition_probability;
use qotto::thermo::{
    cycle_energetics, efficiency_exceeds_adiabatic, energetics_from_states, friction_closed_form,
    friction_from_divergence, negative_friction_window, relative_entropy, CycleInputs,
    DivergencePrefactor, Stroke,
};
use qotto::tls::{
    exponent_from_population, gibbs_population, gibbs_state, Axis, CycleFrequencies, Population,
};

fn hermitian() -> impl Strategy<Value = Hermitian2> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
        .prop_map(|(a, re, im, d)| Hermitian2::from_parts(a, C64::new(re, im), d))
}

fn unitary() -> impl Strategy<Value = Unitary2> {
    (hermitian(), -3.0..3.0f64).prop_map(|(h, s)| exp_neg_i_h(&h, s))
}

fn population() -> impl Strategy<Value = Population> {
    (1e-4..1.0 - 1e-4f64).prop_map(|p| Population::new(p).unwrap())
}

fn freqs() -> impl Strategy<Value = CycleFrequencies> {
    (0.5..5.0f64, 1.01..3.0f64).prop_map(|(nu_c, r)| CycleFrequencies::new(nu_c, nu_c * r).unwrap())
}

proptest! {
    #[test]
    fn exp_forward_backward_is_identity(h in hermitian(), s in -4.0..4.0f64) {
        let prod = *exp_neg_i_h(&h, s).matrix() * *exp_neg_i_h(&h, -s).matrix();
        prop_assert!(prod.max_abs_diff(&Matrix2::identity()) <= 1e-10);
    }

    #[test]
    fn exp_has_unit_determinant_modulus(h in hermitian(), s in -4.0..4.0f64) {
        let u = exp_neg_i_h(&h, s);
        prop_assert!((u.matrix().det().norm() - 1.0).abs() <= 1e-10);
        prop_assert!(u.defect() <= 1e-12);
    }

    #[test]
    fn eigen_reconstruction(h in hermitian()) {
        let e = eig_hermitian2(&h);
        let v = *e.vectors.matrix();
        let d = Matrix2::from_real(e.values[0], 0.0, 0.0, e.values[1]);
        prop_assert!((v * d * v.adjoint()).max_abs_diff(h.matrix()) <= 1e-10);
        prop_assert!(e.vectors.defect() <= 1e-12);
        prop_assert!(e.values[0] <= e.values[1]);
    }

    #[test]
    fn population_exponent_round_trip(p in 1e-6..1.0 - 1e-6f64) {
        let u = exponent_from_population(Population::new(p).unwrap());
        prop_assert!((gibbs_population(u) - p).abs() <= 1e-14);
        // Negative temperature exactly when the population is inverted.
        prop_assert_eq!(u.signum(), (1.0 - 2.0 * p).signum());
    }

    #[test]
    fn xi_two_forms_agree(u in unitary()) {
        let m = u.matrix();
        let a = m.sandwich(&Axis::Y.excited(), &Axis::X.ground()).norm_sqr();
        let b = m.sandwich(&Axis::Y.ground(), &Axis::X.excited()).norm_sqr();
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!((transition_probability(&u).unwrap() - a).abs() == 0.0);
    }

    #[test]
    fn first_law_and_decomposition(
        f in freqs(), p_c in population(), p_h in population(), xi in 0.0..=0.5f64
    ) {
        let e = cycle_energetics(&CycleInputs::new(f, p_c, p_h, xi).unwrap());
        prop_assert!(e.first_law_residual().abs() <= 1e-12);
        prop_assert!((e.w_net - e.w_ad - e.w_fric).abs() <= 1e-12);
        prop_assert!((e.w_net - e.w_exp - e.w_comp).abs() <= 1e-12);
        prop_assert_eq!(e.eta.is_some(), e.mode.is_engine());
    }

    #[test]
    fn closed_forms_match_state_traces(
        u in unitary(), p_c in population(), p_h in population()
    ) {
        let f = CycleFrequencies::reference();
        let xi = transition_probability(&u).unwrap();
        prop_assume!(xi <= 0.5);
        let closed = cycle_energetics(&CycleInputs::new(f, p_c, p_h, xi).unwrap());
        let traced = energetics_from_states(p_c, p_h, &u, &f).unwrap();
        for (a, b) in [
            (closed.w_exp, traced.w_exp), (closed.w_comp, traced.w_comp),
            (closed.q_c, traced.q_c), (closed.q_h, traced.q_h),
            (closed.w_ad, traced.w_ad), (closed.w_fric, traced.w_fric),
        ] {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn positive_temperatures_never_have_negative_friction(
        f in freqs(), p_c in 1e-4..0.5f64, p_h in 1e-4..0.5f64, xi in 0.0..=0.5f64
    ) {
        let inputs = CycleInputs::new(
            f, Population::new(p_c).unwrap(), Population::new(p_h).unwrap(), xi,
        ).unwrap();
        prop_assert!(cycle_energetics(&inputs).w_fric >= 0.0);
    }

    #[test]
    fn friction_sign_matches_window(
        f in freqs(), p_c in 1e-4..0.5f64, p_h in 0.5..1.0f64, xi in 1e-6..=0.5f64
    ) {
        let w = negative_friction_window(p_h, &f).unwrap();
        // Skip points numerically on the boundary.
        prop_assume!((p_c - w.lower).abs() > 1e-12);
        let inputs = CycleInputs::new(
            f, Population::new(p_c).unwrap(), Population::new(p_h).unwrap(), xi,
        ).unwrap();
        let e = cycle_energetics(&inputs);
        prop_assert_eq!(e.w_fric < 0.0, w.contains(p_c));
        prop_assert_eq!(e.w_fric < 0.0, inputs.friction_sign_factor() < 0.0);
    }

    #[test]
    fn divergence_route_matches_closed_form(
        u in unitary(), p in population(), f in freqs()
    ) {
        prop_assume!((p.get() - 0.5).abs() > 1e-6);
        let xi = transition_probability(&u).unwrap();
        for stroke in [Stroke::Expansion, Stroke::Compression] {
            let t = friction_from_divergence(p, DivergencePrefactor::FinalFrequency, &u, stroke, &f).unwrap();
            prop_assert!(t.divergence.unwrap() >= -1e-12);
            prop_assert!((t.work - friction_closed_form(p, xi, stroke, &f)).abs() <= 1e-10);
        }
    }

    #[test]
    fn relative_entropy_non_negative(a in population(), b in population(), swap in any::<bool>()) {
        let (ax, bx) = if swap { (Axis::X, Axis::Y) } else { (Axis::Y, Axis::X) };
        let d = relative_entropy(&gibbs_state(a, ax), &gibbs_state(b, bx));
        prop_assert!(d >= -1e-12);
    }

    #[test]
    fn efficiency_rises_with_xi_above_adiabatic(
        f in freqs(), p_c in 1e-3..0.499f64, p_h in 0.501..0.999f64,
        xi_a in 0.0..=0.5f64, xi_b in 0.0..=0.5f64
    ) {
        let (p_c, p_h) = (Population::new(p_c).unwrap(), Population::new(p_h).unwrap());
        prop_assume!(efficiency_exceeds_adiabatic(p_c, p_h));
        let (lo, hi) = if xi_a < xi_b { (xi_a, xi_b) } else { (xi_b, xi_a) };
        prop_assume!(hi - lo > 1e-9);
        let e_lo = cycle_energetics(&CycleInputs::new(f, p_c, p_h, lo).unwrap());
        let e_hi = cycle_energetics(&CycleInputs::new(f, p_c, p_h, hi).unwrap());
        if let (Some(a), Some(b)) = (e_lo.eta, e_hi.eta) {
            prop_assert!(b > a, "eta({lo}) = {a}, eta({hi}) = {b}");
            if hi > 0.0 {
                prop_assert!(b > f.adiabatic_efficiency());
            }
        }
    }
}
