use discrete_pw::band::BandParameters;
use discrete_pw::lattice::{
    contour_integral, discrete_exponential, extend_layer, holomorphicity_residual,
    max_holomorphicity_residual, phi, DiscreteContour, GridFunction, LatticePoint, Window,
};
use discrete_pw::sampling::inequalities::wirtinger_check;
use discrete_pw::sampling::{
    beurling_lower_density, gaps, interpolate_t, is_two_progression, necessary_for_gaps,
    sufficient_for_gaps, SamplingSet,
};
use discrete_pw::spectral::{kernel, project, KernelQuery};
use num_complex::Complex64;
use proptest::prelude::*;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Frequencies at least 0.05 away from the poles ±π/2.
fn admissible_t() -> impl Strategy<Value = f64> {
    prop_oneof![-1.52f64..1.52, 1.62f64..4.66]
}

fn complex(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| Complex64::new(re, im))
}

fn exp_combination(terms: &[(f64, Complex64)], window: Window) -> GridFunction {
    GridFunction::from_fn(window, |p| {
        terms
            .iter()
            .map(|&(t, a)| a * discrete_exponential(t, p).unwrap())
            .sum()
    })
    .unwrap()
}

proptest! {
    #[test]
    fn phi_satisfies_its_defining_recursion(t in admissible_t(), n in -64i64..64) {
        let e = Complex64::from_polar(1.0, t);
        let lhs = phi(t, n + 1).unwrap() * (e + I);
        let rhs = phi(t, n).unwrap() * (Complex64::new(1.0, 0.0) + I * e);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(rhs.norm()).max(1.0));
    }

    #[test]
    fn sampled_exponential_has_zero_residual(t in admissible_t(), m in -40i64..40, n in -8i64..8) {
        let w = Window::new(m, m + 1, n, n + 1).unwrap();
        let f = GridFunction::from_fn(w, |p| discrete_exponential(t, p).unwrap()).unwrap();
        let r = holomorphicity_residual(&f, LatticePoint::new(m, n)).unwrap();
        prop_assert!(r.norm() <= 1e-12 * f.sup_norm().max(1.0));
    }

    #[test]
    fn extended_layer_is_entire_with_its_input(
        below in prop::collection::vec(complex(1e3), 1..24),
        anchor in complex(1e3),
    ) {
        let out = extend_layer(&below, anchor).unwrap();
        let w = Window::new(0, below.len() as i64 - 1, 0, 1).unwrap();
        let stacked = GridFunction::from_layers(w, vec![below.clone(), out]).unwrap();
        if below.len() >= 2 {
            prop_assert!(max_holomorphicity_residual(&stacked).unwrap() <= 1e-12 * stacked.sup_norm().max(1.0));
        }
    }

    #[test]
    fn layer_round_trip_for_exponential_sums(
        terms in prop::collection::vec((admissible_t(), complex(1.0)), 1..5),
        n in -6i64..6,
    ) {
        let w = Window::new(0, 32, n - 1, n).unwrap();
        let f = exp_combination(&terms, w);
        let out = extend_layer(f.layer(n - 1).unwrap(), f.at(0, n).unwrap()).unwrap();
        let want = f.layer(n).unwrap();
        let scale = f.sup_norm().max(1e-300);
        for (x, y) in out.iter().zip(want) {
            prop_assert!((x - y).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn closed_contours_integrate_entire_pairs_to_zero(
        f_terms in prop::collection::vec((admissible_t(), complex(1.0)), 1..4),
        g_terms in prop::collection::vec((admissible_t(), complex(1.0)), 1..4),
        m0 in -5i64..5, n0 in -4i64..4, wd in 1i64..6, ht in 1i64..6,
    ) {
        let w = Window::new(m0, m0 + wd, n0, n0 + ht).unwrap();
        let gamma = DiscreteContour::rectangle(m0, n0, m0 + wd, n0 + ht).unwrap();
        let f = exp_combination(&f_terms, w);
        let g = exp_combination(&g_terms, w);
        let sf = f.sup_on(gamma.vertices()).unwrap();
        let sg = g.sup_on(gamma.vertices()).unwrap();
        let v = contour_integral(&f, &g, &gamma).unwrap();
        prop_assert!(v.norm() <= 1e-10 * (sf * sg).max(1e-300));
    }

    #[test]
    fn wirtinger_bound_holds(values in prop::collection::vec(complex(10.0), 2..64)) {
        let mut s = vec![Complex64::new(0.0, 0.0)];
        s.extend(values);
        s.push(Complex64::new(0.0, 0.0));
        prop_assert!(wirtinger_check(&s).unwrap().ok);
    }

    #[test]
    fn sufficient_implies_necessary(de in 1i64..20, dodd in 1i64..20, alpha in 0.01f64..1.56) {
        let b = BandParameters::new(alpha).unwrap();
        let (de, dodd) = (2 * de, 2 * dodd);
        if sufficient_for_gaps(de, dodd, &b) {
            prop_assert!(necessary_for_gaps(de, dodd, &b));
        }
    }

    #[test]
    fn random_sets_keep_invariants(seed in any::<u64>(), de in 1i64..5, dodd in 1i64..5, lo in -50i64..0, span in 10i64..120) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let s = SamplingSet::random_gaps(&mut rng, lo, lo + span, 2 * de, 2 * dodd).unwrap();
        prop_assert!(s.delta_e() % 2 == 0 && s.delta_o() % 2 == 0);
        prop_assert!(s.delta_e() <= 2 * de && s.delta_o() <= 2 * dodd);
        let again = gaps(s.lambda(), lo, lo + span).unwrap();
        prop_assert_eq!(&again, &s);
        // T reproduces the samples exactly on Λ
        let samples: Vec<Complex64> = s.lambda().iter().map(|&m| Complex64::new((m as f64).cos(), m as f64)).collect();
        let t = interpolate_t(&samples, &s).unwrap();
        for (&m, v) in s.lambda().iter().zip(&samples) {
            prop_assert_eq!(t[(m - lo) as usize], *v);
        }
    }

    #[test]
    fn progression_density_is_consistent(k_e in 1i64..5, k_o in 1i64..5, r_max in 8i64..60) {
        let (de, dodd) = (2 * k_e, 2 * k_o);
        let period = de * dodd;
        // window edges chosen on both progressions so that the set is a two-progression
        let lo = -period * 20;
        let hi = period * 20 + 1;
        let s = SamplingSet::two_progression(lo, hi, de, dodd).unwrap();
        prop_assert!(is_two_progression(&s));
        if 2 * r_max <= (hi - lo) / 2 {
            let d = beurling_lower_density(&s, r_max).unwrap().density;
            let target = 1.0 / de as f64 + 1.0 / dodd as f64;
            prop_assert!((d - target).abs() <= 2.0 / (2 * r_max + 1) as f64 + 1.0 / r_max as f64);
        }
    }

    #[test]
    fn kernel_is_real_and_symmetric_at_height_zero(m in -50i64..50, u in -50i64..50, alpha in 0.1f64..1.4) {
        let b = BandParameters::new(alpha).unwrap();
        let a = kernel(KernelQuery::new(LatticePoint::new(m, 0), LatticePoint::new(u, 0)), &b, 1024).unwrap();
        let z = kernel(KernelQuery::new(LatticePoint::new(u, 0), LatticePoint::new(m, 0)), &b, 1024).unwrap();
        prop_assert!((a - z.conj()).norm() <= 1e-12);
        prop_assert!(a.im.abs() <= 1e-12);
    }

    #[test]
    fn periodic_projection_is_idempotent_and_nonexpansive(
        g in prop::collection::vec(complex(5.0), 64),
        alpha in 0.1f64..1.4,
    ) {
        let b = BandParameters::new(alpha).unwrap();
        let w = Window::period(64, 0, 0).unwrap();
        let p1 = project(&g, w, &b, 64).unwrap();
        let p2 = project(p1.layer0(), w, &b, 64).unwrap();
        let d: f64 = p1.layer0().iter().zip(p2.layer0()).map(|(a, z)| (a - z).norm_sqr()).sum::<f64>().sqrt();
        let gn: f64 = g.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(d <= 1e-10 * p1.layer0_norm().max(1e-300));
        prop_assert!(p1.layer0_norm() <= gn * (1.0 + 1e-10));
    }
}

#[test]
fn reflected_function_stays_entire() {
    // G(m,n) = (−1)^{m+n} F(−m,n) for F = e_{0.7}
    let w = Window::new(-6, 6, -6, 6).unwrap();
    let g = GridFunction::from_fn(w, |p| {
        let s = if (p.m + p.n).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        discrete_exponential(0.7, LatticePoint::new(-p.m, p.n)).unwrap() * s
    })
    .unwrap();
    assert!(max_holomorphicity_residual(&g).unwrap() < 1e-12 * g.sup_norm());
}
