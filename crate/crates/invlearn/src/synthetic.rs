//! Seeded data generators: a diet fixture with many foods and small random
//! polytopes.

use invlearn_core::diet::{build_diet_instance, DietConfig, FoodTable, NutrientBound, NutrientBounds};
use invlearn_core::fixtures::{sample_bounds, SAMPLE_NUTRIENTS};
use invlearn_core::model::{LinearConstraint, Sense};
use invlearn_core::{ForwardInstance, ObservationSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rows that carry a preference in the generated diet.
pub const DIET_PREFERRED: [&str; 4] = ["Sodium (mg) lower", "Sat. Fat (mg) lower", "Cholesterol (mg) lower", "Fiber (g) upper"];

#[derive(Clone, Debug)]
pub struct SyntheticDiet {
    pub foods: FoodTable,
    pub bounds: NutrientBounds,
    pub observations: ObservationSet,
    /// Servings whose totals sit at the bound midpoints.
    pub reference: Vec<f64>,
    pub instance: ForwardInstance,
}

/// Diet with `n_foods` foods over the eleven reference nutrients and their
/// bounds. Nutrient columns are scaled so that a random serving vector in
/// `[0.2, 3]` hits every bound midpoint, which keeps the region full
/// dimensional. Observations perturb that vector multiplicatively.
pub fn synthetic_diet(seed: u64, n_foods: usize, n_obs: usize) -> SyntheticDiet {
    let mut r = rng(seed);
    let caffeinated: Vec<bool> = (0..n_foods).map(|f| f % 6 == 0).collect();
    let reference: Vec<f64> = (0..n_foods).map(|_| r.random_range(0.2..3.0)).collect();
    let base = sample_bounds();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(SAMPLE_NUTRIENTS.len());
    for (i, b) in base.as_slice().iter().enumerate() {
        let caffeine = i + 1 == SAMPLE_NUTRIENTS.len();
        let mut col: Vec<f64> = (0..n_foods)
            .map(|f| {
                if caffeine && !caffeinated[f] {
                    0.0
                } else {
                    let u: f64 = r.random_range(0.05..1.0);
                    u * u
                }
            })
            .collect();
        let total: f64 = col.iter().zip(&reference).map(|(v, s)| v * s).sum();
        let scale = 0.5 * (b.lower + b.upper) / total;
        for v in &mut col {
            *v = round4(*v * scale);
        }
        cols.push(col);
    }
    let values: Vec<Vec<f64>> = (0..n_foods).map(|f| cols.iter().map(|c| c[f]).collect()).collect();
    let names: Vec<String> = (0..n_foods).map(|f| format!("Food {:02}", f + 1)).collect();
    let foods = FoodTable::new(names, SAMPLE_NUTRIENTS.iter().map(|s| String::from(*s)).collect(), values)
        .expect("generated table is well formed");
    let bounds = NutrientBounds::new(
        base.as_slice()
            .iter()
            .map(|b| NutrientBound {
                lower_preferred: DIET_PREFERRED.contains(&format!("{} lower", b.nutrient).as_str()),
                upper_preferred: DIET_PREFERRED.contains(&format!("{} upper", b.nutrient).as_str()),
                ..b.clone()
            })
            .collect(),
    )
    .expect("bounds are well formed");
    let rows = (0..n_obs)
        .map(|_| reference.iter().map(|s| round4(s * r.random_range(0.4..1.8))).collect())
        .collect();
    let observations = ObservationSet::new(n_foods, rows).expect("well formed");
    let instance = build_diet_instance(&foods, &bounds, &DietConfig::default()).expect("generated diet is consistent");
    SyntheticDiet { foods, bounds, observations, reference, instance }
}

fn round4(v: f64) -> f64 {
    (v * 1e4).round() / 1e4
}

/// Polytope inside `[0, 10]^n` with `m1` relevant rows slack at the box
/// centre plus trivial box rows.
pub fn random_instance(r: &mut ChaCha8Rng, n: usize, m1: usize) -> ForwardInstance {
    let mut rows = Vec::with_capacity(m1 + 2 * n);
    for j in 0..m1 {
        let a: Vec<f64> = loop {
            let a: Vec<f64> = (0..n).map(|_| r.random_range(-10i32..=10) as f64 / 4.0).collect();
            if a.iter().any(|v| *v != 0.0) {
                break a;
            }
        };
        let b = a.iter().sum::<f64>() * 5.0 + r.random_range(0.5..4.0);
        if r.random_bool(0.5) {
            rows.push(LinearConstraint::relevant(format!("r{j}"), a, Sense::Le, b));
        } else {
            rows.push(LinearConstraint::relevant(format!("r{j}"), a.iter().map(|v| -v).collect(), Sense::Ge, -b));
        }
    }
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        rows.push(LinearConstraint::trivial(format!("lo{i}"), e.clone(), Sense::Ge, 0.0));
        rows.push(LinearConstraint::trivial(format!("hi{i}"), e, Sense::Le, 10.0));
    }
    ForwardInstance::with_dimension(n, rows).expect("generated instance is well formed")
}

/// Observations on a quarter grid over `[0, 10]^n`.
pub fn random_observations(r: &mut ChaCha8Rng, n: usize, k: usize) -> ObservationSet {
    let rows = (0..k).map(|_| (0..n).map(|_| (r.random_range(0.0..10.0f64) * 4.0).round() / 4.0).collect()).collect();
    ObservationSet::new(n, rows).expect("well formed")
}

/// Observations scattered around `centre` with the given spread.
pub fn observation_cloud(r: &mut ChaCha8Rng, centre: &[f64], spread: f64, k: usize) -> ObservationSet {
    let rows = (0..k).map(|_| centre.iter().map(|c| c + r.random_range(-spread..spread)).collect()).collect();
    ObservationSet::new(centre.len(), rows).expect("well formed")
}
