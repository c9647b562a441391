use arccoord::hexagon::{t_length, HexTriple};
use arccoord::poisson::{casimir_residual, poisson_bivector};
use arccoord::sample::{random_lengths, random_maximal_ribbon, random_relabeling, random_signature};
use arccoord::spine::solve_widths_on;
use arccoord::strebel::{build_flat_surface, WeightedRibbonGraph};
use arccoord::{find_spine, flip, Dart, MaximalCoordinates, NewtonOptions, SpineOptions, SurfaceFile};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn surface(seed: u64, max_g: usize, max_n: usize) -> MaximalCoordinates {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = random_signature(&mut rng, max_g, max_n);
    let r = random_maximal_ribbon(&mut rng, sig);
    let a = random_lengths(&mut rng, r.n_arcs(), 0.2, 4.0);
    MaximalCoordinates::new(r, a).unwrap()
}

fn flippable(m: &MaximalCoordinates) -> Vec<usize> {
    (0..m.ribbon().n_arcs())
        .filter(|&k| !m.hexagon(Dart::forward(k)).contains(&Dart::backward(k)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn t_is_an_involution(a in 1e-3f64..40.0) {
        let back = t_length(t_length(a).unwrap()).unwrap();
        prop_assert!((back - a).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn hexagon_widths_sum_to_half_perimeter(a in 0.05f64..15.0, b in 0.05f64..15.0, c in 0.05f64..15.0) {
        let h = HexTriple::new(a, b, c).unwrap();
        let w: f64 = h.oriented_widths().iter().sum();
        let d: f64 = h.boundary_segments().iter().sum();
        prop_assert!((w - 0.5 * d).abs() <= 1e-10 * d.max(1.0));
    }

    #[test]
    fn boundary_lengths_are_positive_and_match_widths(seed in any::<u64>()) {
        let m = surface(seed, 3, 4);
        let p = m.boundary_lengths();
        prop_assert!(p.iter().all(|&x| x > 0.0));
        let total: f64 = p.iter().sum();
        prop_assert!((total - 2.0 * m.all_widths().total()).abs() <= 1e-9 * total);
    }

    #[test]
    fn flips_preserve_boundary_and_negate_width(seed in any::<u64>()) {
        let m = surface(seed, 2, 3);
        let arcs = flippable(&m);
        let k = arcs[(seed % arcs.len() as u64) as usize];
        let (f, mv) = flip(&m, k).unwrap();
        for (x, y) in m.boundary_lengths().iter().zip(f.boundary_lengths()) {
            prop_assert!((x - y).abs() <= 1e-8 * x);
        }
        prop_assert!((f.widths()[k] + m.widths()[k]).abs() <= 1e-8 * m.widths()[k].abs().max(1.0));
        prop_assert_eq!(mv.arc, k);
    }

    #[test]
    fn spines_have_nonnegative_weights_and_same_boundary(seed in any::<u64>()) {
        let m = surface(seed, 2, 3);
        let s = find_spine(&m, &SpineOptions::default()).unwrap();
        prop_assert!(s.spine.weights().iter().all(|&w| w > 0.0));
        prop_assert!(s.maximal.widths().iter().all(|&w| w >= -1e-10));
        let (p, q) = (m.boundary_lengths(), s.spine.boundary_lengths());
        for (x, y) in p.iter().zip(&q) {
            prop_assert!((x - y).abs() <= 1e-8 * x);
        }
    }

    #[test]
    fn width_map_inverts_on_spinal_systems(seed in any::<u64>()) {
        let m = surface(seed, 2, 2);
        let s = find_spine(&m, &SpineOptions::default()).unwrap();
        let target: Vec<f64> = s.maximal.widths().iter().map(|&w| w.max(0.0)).collect();
        let back = solve_widths_on(s.maximal.ribbon(), &target, &NewtonOptions::default()).unwrap();
        for (x, y) in back.widths().iter().zip(&target) {
            prop_assert!((x - y).abs() <= 1e-6);
        }
        for (x, y) in back.a_lengths().iter().zip(s.maximal.a_lengths()) {
            prop_assert!((x - y).abs() <= 1e-6 * y.max(1.0));
        }
    }

    #[test]
    fn relabeling_permutes_widths(seed in any::<u64>()) {
        let m = surface(seed, 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let (perm, rev) = random_relabeling(&mut rng, m.ribbon().n_arcs());
        let r = m.ribbon().relabel(&perm, &rev).unwrap();
        let mut a = vec![0.0; perm.len()];
        for (k, &j) in perm.iter().enumerate() {
            a[j] = m.a_lengths()[k];
        }
        let n = MaximalCoordinates::new(r, a).unwrap();
        let (w, v) = (m.widths(), n.widths());
        for (k, &j) in perm.iter().enumerate() {
            prop_assert!((w[k] - v[j]).abs() <= 1e-12 * w[k].abs().max(1.0));
        }
    }

    #[test]
    fn poisson_is_antisymmetric_with_boundary_casimirs(seed in any::<u64>()) {
        let m = surface(seed, 1, 3);
        let eta = poisson_bivector(&m).unwrap();
        prop_assert!(eta.antisymmetry_defect() <= 1e-14);
        for k in 0..m.boundary_lengths().len() {
            prop_assert!(casimir_residual(&m, k).unwrap() <= 1e-5);
        }
    }

    #[test]
    fn strebel_circumferences_are_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = random_signature(&mut rng, 2, 3);
        let r = random_maximal_ribbon(&mut rng, sig);
        let w: Vec<Ratio<i64>> = (0..r.n_arcs())
            .map(|_| Ratio::new(rng.random_range(1..30), rng.random_range(1..9)))
            .collect();
        let c = build_flat_surface(&WeightedRibbonGraph::new(&r, w.clone()).unwrap()).unwrap();
        let total: Ratio<i64> = c.circumferences().into_iter().sum();
        prop_assert_eq!(total, w.iter().sum::<Ratio<i64>>() * 2);
        prop_assert!(c.zero_orders().is_consistent());
        prop_assert!(c.quadratic_residues().iter().all(|&q| q < 0.0));
    }

    #[test]
    fn surface_files_round_trip(seed in any::<u64>()) {
        let m = surface(seed, 3, 4);
        let text = serde_json::to_string(&SurfaceFile::from_coordinates(&m)).unwrap();
        let back: SurfaceFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.coordinates().unwrap(), m);
    }
}
