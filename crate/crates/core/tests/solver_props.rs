mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tailspec::families::{family_charpoly, family_spectrum, sinh_ratio, Phi};
use tailspec::graph::{delete_vertices, FamilySpec, Graph};
use tailspec::numerics::sym_eigenvalues;
use tailspec::poly::charpoly;
use tailspec::tail::{discrete_spectrum, full_spectrum_report, green_free, schur_complement_matrix};

use common::random_connected_graph;

fn anchored_graph(seed: u64, n: usize, p: f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_connected_graph(&mut rng, n, p);
    let anchor = 1 + (seed as usize % n);
    g.with_anchor(anchor).unwrap()
}

/// Moves the anchor one step down the tail: the new vertex joins the old
/// anchor and takes its role. The coupled operator is the same.
fn extend_tail(g: &Graph) -> Graph {
    let a = g.anchor().unwrap();
    let n = g.n() + 1;
    let edges = g.edges().chain([(a, n)]);
    Graph::new(n, edges, Some(n)).unwrap()
}

fn kappa_strategy(min: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(min..=5u32, 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_solve_the_tail_equation(seed in any::<u64>(), n in 1usize..8, p in 0.0f64..0.7) {
        let g = anchored_graph(seed, n, p);
        let report = discrete_spectrum(&g).unwrap();
        let norm = report.diagnostics.charpoly.norm1();
        for e in &report.eigenvalues {
            prop_assert!(e.x.abs() < 1.0 && e.x != 0.0);
            prop_assert!(e.lambda.abs() > 2.0);
            prop_assert!(e.residual <= 1e-8 * (1.0 + norm), "{:?}", e);
            // C₁₁(λ) is singular at every eigenvalue
            let c = schur_complement_matrix(&g, e.lambda).unwrap();
            let ev = sym_eigenvalues(&c).unwrap();
            let smallest = ev.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
            prop_assert!(smallest <= 1e-8 * (1.0 + e.lambda.abs()), "{} {}", e.lambda, smallest);
        }
        // ordered by x
        prop_assert!(report.eigenvalues.windows(2).all(|w| w[0].x <= w[1].x));
    }

    #[test]
    fn trees_have_symmetric_discrete_spectrum(seed in any::<u64>(), n in 1usize..10) {
        let g = anchored_graph(seed, n, 0.0);
        let l = full_spectrum_report(&g).unwrap().lambdas();
        let mut mirrored: Vec<f64> = l.iter().map(|v| -v).collect();
        mirrored.reverse();
        prop_assert_eq!(l.len(), mirrored.len());
        for (a, b) in l.iter().zip(&mirrored) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn spectrum_is_invariant_under_tail_extension(seed in any::<u64>(), n in 1usize..7, p in 0.0f64..0.7) {
        let g = anchored_graph(seed, n, p);
        let a = full_spectrum_report(&g).unwrap().lambdas();
        let b = full_spectrum_report(&extend_tail(&g)).unwrap().lambdas();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10, "{} vs {}", x, y);
        }
    }

    #[test]
    fn free_green_function_is_symmetric(z in -0.99f64..0.99, i in 1usize..30, j in 1usize..30) {
        prop_assume!(z.abs() > 1e-3);
        let a = green_free(z, i, j).unwrap();
        let b = green_free(z, j, i).unwrap();
        prop_assert!((a - b).abs() <= 1e-15 * (1.0 + a.abs()));
    }

    #[test]
    fn star_family_matches_generic_solver(kappa in kappa_strategy(1)) {
        family_agrees(FamilySpec::star(&kappa).unwrap())?;
    }

    #[test]
    fn flower_family_matches_generic_solver(kappa in kappa_strategy(2)) {
        family_agrees(FamilySpec::flower(&kappa).unwrap())?;
    }

    #[test]
    fn phi_is_strictly_decreasing(kappa in kappa_strategy(2), t in 1e-4f64..10.0, dt in 1e-3f64..1.0) {
        for phi in [Phi::Star(&kappa), Phi::FlowerAbove(&kappa), Phi::FlowerBelow(&kappa)] {
            let (a, b) = (phi.eval(t), phi.eval(t + dt));
            prop_assert!(a > b || (a - b).abs() <= 1e-15 * a.abs(), "{:?} at {}", phi, t);
        }
    }

    #[test]
    fn stable_sinh_ratio_matches_naive(a in 1u32..8, extra in 1u32..4, t in 1e-3f64..20.0) {
        let (a, b) = (a as f64, (a + extra) as f64);
        let naive = (a * t).sinh() / (b * t).sinh();
        let stable = sinh_ratio(a, b, t);
        prop_assert!((naive - stable).abs() <= 1e-12 * naive.abs().max(1e-300), "{} {}", naive, stable);
    }
}

fn family_agrees(spec: FamilySpec) -> Result<(), TestCaseError> {
    let family = family_spectrum(&spec, 1e-14).unwrap().lambdas();
    let generic = full_spectrum_report(&spec.build().unwrap()).unwrap().lambdas();
    prop_assert_eq!(family.len(), generic.len(), "{:?}", spec);
    for (a, b) in family.iter().zip(&generic) {
        prop_assert!((a - b).abs() <= 1e-10, "{:?}: {} vs {}", spec, a, b);
    }
    Ok(())
}

#[test]
fn family_charpolys_match_determinants() {
    let mut specs = Vec::new();
    for a in 1..=6u32 {
        for b in 1..=6u32 {
            specs.push(FamilySpec::star(&[a, b]).unwrap());
            if a + b <= 11 {
                specs.push(FamilySpec::star(&[a, b, 12 - a - b]).unwrap());
            }
            if a >= 2 && b >= 2 {
                specs.push(FamilySpec::flower(&[a, b]).unwrap());
                if a + b <= 10 {
                    specs.push(FamilySpec::flower(&[a, b, 12 - a - b]).unwrap());
                }
            }
        }
    }
    specs.push(FamilySpec::star(&[12]).unwrap());
    specs.push(FamilySpec::flower(&[11]).unwrap());
    for spec in specs {
        let g = spec.build().unwrap();
        let (p, pv) = family_charpoly(&spec).unwrap();
        assert_eq!(p, charpoly(&g), "{spec:?}");
        let root = g.anchor().unwrap();
        assert_eq!(pv, charpoly(&delete_vertices(&g, &[root]).unwrap()), "{spec:?}");
    }
}

#[test]
fn phi_survives_large_t() {
    let kappa = [3u32, 5, 9];
    for phi in [Phi::Star(&kappa), Phi::FlowerAbove(&kappa), Phi::FlowerBelow(&kappa)] {
        let v = phi.eval(500.0);
        assert!(v.is_finite() && v >= 0.0 && v < 1e-100, "{phi:?}: {v}");
        assert!(phi.eval(1e-9).is_finite());
        assert!((phi.eval(1e-9) - phi.zero_limit()).abs() < 1e-8);
    }
}
