use nohiding_lab::nohiding::{default_psi, run_point, Variant};
use nohiding_lab::tomo::{estimate_expectations, exact_expectations, Shots};

#[test]
fn shot_estimates_are_unbiased() {
    let rho = default_psi().to_density();
    let exact = exact_expectations(&rho);
    let seeds = 1000u64;
    let bound = 4.0 * (1.0 / (seeds as f64 * 1024.0)).sqrt();
    let mut sums = std::collections::BTreeMap::new();
    for seed in 0..seeds {
        for (label, v) in estimate_expectations(&rho, Shots::Count(1024), seed).unwrap() {
            *sums.entry(label).or_insert(0.0) += v;
        }
    }
    for (label, sum) in sums {
        let mean = sum / seeds as f64;
        assert!((mean - exact[&label]).abs() < bound, "{label}: {mean} vs {}", exact[&label]);
    }
}

#[test]
fn weak_bleaching_gives_some_nonphysical_tomograms() {
    for p in [0.0, 0.024471742] {
        let negative = (0..200)
            .filter(|&seed| {
                run_point(Variant::Eq2, p, Shots::Count(1024), seed)
                    .unwrap()
                    .tomography
                    .raw_min_eigenvalue
                    < 0.0
            })
            .count();
        assert!(negative > 0, "p = {p}");
    }
}
