use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use obfol::foliation::FoliatedSurface;
use obfol::freegroup::{FreeWord, Gen, Letter};
use obfol::mapclass::{catalog_names, compose, MappingClass};
use obfol::morita::{k_of_word, pullback_k, rep_word};
use obfol::movie::{compile, parse_movie, random_movie, RandomMovie};
use obfol::slcalc::{braid_homology, c_value, from_normal_form, normal_form, residual_is_zero, solve_a};
use obfol::surface::{rel_from_rho_prime_coords, rho_prime_coords, RelClass, SurfaceSig};

fn sig_strategy() -> impl Strategy<Value = SurfaceSig> {
    (0u32..=2, 1u32..=3).prop_map(|(g, r)| SurfaceSig::new(g, r).unwrap())
}

fn word_for(sig: SurfaceSig) -> impl Strategy<Value = Vec<(String, i64)>> {
    let names = catalog_names(sig);
    let n = names.len().max(1);
    prop::collection::vec((0..n, prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2)]), 0..5)
        .prop_map(move |v| v.into_iter().filter(|_| !names.is_empty()).map(|(i, p)| (names[i].clone(), p)).collect())
}

fn class(sig: SurfaceSig, w: &[(String, i64)]) -> MappingClass {
    let w: Vec<(&str, i64)> = w.iter().map(|(n, p)| (n.as_str(), *p)).collect();
    MappingClass::from_catalog(sig, &w).unwrap()
}

fn coords_for(sig: SurfaceSig) -> impl Strategy<Value = RelClass> {
    prop::collection::vec(-4i64..=4, sig.rank()).prop_map(move |x| rel_from_rho_prime_coords(sig, &x).unwrap())
}

fn free_word(genus: u32) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((1..=genus, any::<bool>(), any::<bool>()), 0..8).prop_map(|v| {
        FreeWord::from_letters(v.into_iter().map(|(i, alpha, inv)| Letter::new(if alpha { Gen::Alpha(i) } else { Gen::Beta(i) }, inv)))
    })
}

/// Σ_i α_i(u) β_i(v), exponent sums in the free basis.
fn cross_form(genus: u32, u: &FreeWord, v: &FreeWord) -> i64 {
    (1..=genus).map(|i| u.exponent_sum(Gen::Alpha(i)) * v.exponent_sum(Gen::Beta(i))).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_words_invert(u in free_word(3), v in free_word(3)) {
        prop_assert!(u.mul(&u.inverse()).is_empty());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
        let (au, av, auv) = (u.abelianize(3), v.abelianize(3), u.mul(&v).abelianize(3));
        prop_assert_eq!(auv, au.iter().zip(&av).map(|(x, y)| x + y).collect::<Vec<_>>());
        prop_assert_eq!(u.to_string().parse::<FreeWord>().unwrap(), u);
    }

    #[test]
    fn monodromies_are_symplectic_and_invertible((sig, w) in sig_strategy().prop_flat_map(|s| (Just(s), word_for(s)))) {
        let phi = class(sig, &w);
        prop_assert!(phi.preserves_form().unwrap());
        prop_assert!(phi.filled_matches_homology().unwrap());
        let id = compose(&phi.inverse().unwrap(), &phi).unwrap();
        let one = MappingClass::identity(sig);
        prop_assert_eq!(id.abs_matrix(), one.abs_matrix());
        prop_assert!(id.filled_image().is_identity());
    }

    #[test]
    fn k_is_crossed(
        (sig, w1, w2, a) in (1u32..=2, 1u32..=2)
            .prop_map(|(g, r)| SurfaceSig::new(g, r).unwrap())
            .prop_flat_map(|s| (Just(s), word_for(s), word_for(s), coords_for(s)))
    ) {
        let (phi, psi) = (class(sig, &w1), class(sig, &w2));
        let lhs = pullback_k(&compose(&psi, &phi).unwrap(), &a).unwrap();
        let rhs = pullback_k(&phi, &a).unwrap() + pullback_k(&psi, &phi.act_rel(&a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn k_defect_is_the_pushed_cross_form(
        (sig, w, x, y) in (1u32..=2).prop_map(|g| SurfaceSig::new(g, 1).unwrap())
            .prop_flat_map(|s| (Just(s), word_for(s), coords_for(s), coords_for(s)))
    ) {
        let phi = class(sig, &w);
        let g = sig.genus;
        let (wx, wy) = (rep_word(&x), rep_word(&y));
        let f = phi.filled_image();
        let defect = pullback_k(&phi, &x.add(&y).unwrap()).unwrap() - pullback_k(&phi, &x).unwrap() - pullback_k(&phi, &y).unwrap();
        prop_assert_eq!(defect, cross_form(g, &f.apply(&wx), &f.apply(&wy)) - cross_form(g, &wx, &wy));
    }

    #[test]
    fn k_ignores_inserted_commutators(
        (sig, w, a, u, v, cut) in (1u32..=2).prop_map(|g| SurfaceSig::new(g, 1).unwrap())
            .prop_flat_map(|s| (Just(s), word_for(s), coords_for(s), free_word(s.genus), free_word(s.genus), 0usize..16))
    ) {
        let phi = class(sig, &w);
        let base = rep_word(&a);
        let letters = base.letters();
        let cut = cut.min(letters.len());
        let spliced = FreeWord::from_letters(letters[..cut].iter().copied())
            .mul(&FreeWord::commutator(&u, &v))
            .mul(&FreeWord::from_letters(letters[cut..].iter().copied()));
        prop_assert_eq!(k_of_word(&phi, &spliced).unwrap(), k_of_word(&phi, &base).unwrap());
    }

    #[test]
    fn c_is_a_crossed_homomorphism(
        (sig, w1, w2, a, b) in sig_strategy().prop_flat_map(|s| (Just(s), word_for(s), word_for(s), coords_for(s), coords_for(s)))
    ) {
        let (phi, psi) = (class(sig, &w1), class(sig, &w2));
        prop_assert_eq!(
            c_value(&phi, &a.add(&b).unwrap()).unwrap(),
            c_value(&phi, &a).unwrap() + c_value(&phi, &b).unwrap()
        );
        prop_assert_eq!(
            c_value(&compose(&psi, &phi).unwrap(), &a).unwrap(),
            c_value(&phi, &a).unwrap() + c_value(&psi, &phi.act_rel(&a).unwrap()).unwrap()
        );
    }

    #[test]
    fn normal_form_round_trips((sig, a) in sig_strategy().prop_flat_map(|s| (Just(s), coords_for(s)))) {
        prop_assert_eq!(from_normal_form(sig, &normal_form(&a)).unwrap(), a.clone());
        prop_assert_eq!(rel_from_rho_prime_coords(sig, &rho_prime_coords(&a)).unwrap(), a);
    }

    #[test]
    fn solutions_have_zero_residual(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = SurfaceSig::new(rand::Rng::gen_range(&mut rng, 0..=2), rand::Rng::gen_range(&mut rng, 1..=3)).unwrap();
        let phi = obfol::props::random_class(&mut rng, s, 0..=4).unwrap();
        let b = obfol::props::random_braid(&mut rng, s, 1..=3, 0..=6, 0.5).unwrap();
        if let Ok(sol) = solve_a(&b, &phi) {
            let bc = braid_homology(&b).unwrap();
            prop_assert!(residual_is_zero(&phi, &sol.a, &bc).unwrap());
            for k in &sol.kernel {
                prop_assert!(residual_is_zero(&phi, &sol.a.add(k).unwrap(), &bc).unwrap());
            }
        }
    }

    #[test]
    fn movies_round_trip_and_reverse(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_movie(&mut rng, RandomMovie::default());
        prop_assert_eq!(parse_movie(&m.to_script()).unwrap(), m.clone());
        if let Ok(fs) = compile(&m) {
            let json = fs.to_json();
            prop_assert_eq!(FoliatedSurface::from_json(&json).unwrap(), fs.clone());
            let rev = compile(&m.reversed().unwrap()).unwrap();
            let (c, r) = (fs.counts().unwrap(), rev.counts().unwrap());
            prop_assert_eq!((r.e_plus, r.e_minus, r.h_plus, r.h_minus), (c.e_plus, c.e_minus, c.h_minus, c.h_plus));
            prop_assert_eq!(fs.euler_char().unwrap(), rev.euler_char().unwrap());
        }
    }
}
