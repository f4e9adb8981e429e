//! Small reference instances used by tests, docs and the CLI demo data.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::diet::{FoodTable, NutrientBound, NutrientBounds};
use crate::model::{ForwardInstance, LinearConstraint, ObservationSet, Sense};

/// The two-variable polytope with relevant rows `G1..G5`, trivial rows
/// `G6, G7` and `G3` preferred.
pub fn toy_instance() -> ForwardInstance {
    let r = LinearConstraint::relevant;
    let t = LinearConstraint::trivial;
    ForwardInstance::new(
        vec![String::from("x1"), String::from("x2")],
        vec![
            r("G1", vec![-1.0, 1.0], Sense::Le, 10.0),
            r("G2", vec![-0.5, 1.0], Sense::Le, 11.0),
            r("G3", vec![0.5, 1.0], Sense::Le, 16.0).with_preferred(true),
            r("G4", vec![1.0, 1.0], Sense::Le, 20.0),
            r("G5", vec![1.0, 0.0], Sense::Le, 10.0),
            t("G6", vec![1.0, 0.0], Sense::Ge, 0.0),
            t("G7", vec![0.0, 1.0], Sense::Ge, 0.0),
        ],
    )
    .expect("example instance is well formed")
}

/// Three observations around the `x1 = 10` edge of [`toy_instance`].
pub fn toy_observations() -> ObservationSet {
    ObservationSet::new(2, vec![vec![9.0, 9.0], vec![11.0, 9.0], vec![10.0, 8.0]]).expect("well formed")
}

pub const SAMPLE_FOODS: [&str; 3] = ["Milk", "Stew", "Bread"];

pub const SAMPLE_NUTRIENTS: [&str; 11] = [
    "Energy (kcal)",
    "Carbohydrate (g)",
    "Protein (g)",
    "Total Fat (g)",
    "Total Sugars (g)",
    "Fiber (g)",
    "Sat. Fat (mg)",
    "Cholesterol (mg)",
    "Iron (mg)",
    "Sodium (mg)",
    "Caffeine (mg)",
];

// nutrient, lower, upper, lower relevant, upper relevant, milk, stew, bread
#[rustfmt::skip]
const SAMPLE: [(f64, f64, bool, bool, [f64; 3]); 11] = [
    (1575.1, 2013.2, true,  true,  [180.4, 378.6, 112.8]),
    (223.7,  254.2,  true,  false, [23.9, 35.6, 12.1]),
    (51.8,   89.2,   false, true,  [4.1, 18.8, 1.1]),
    (59.7,   78.2,   true,  false, [7.9, 18.0, 6.6]),
    (117.0,  144.6,  true,  false, [16.6, 7.3, 6.4]),
    (36.7,   39.3,   false, true,  [1.0, 2.6, 0.3]),
    (11.4,   16.6,   true,  false, [4.8, 8.1, 3.1]),
    (24.4,   120.6,  true,  false, [28.0, 54.7, 1.1]),
    (9.7,    12.5,   false, true,  [0.5, 3.1, 0.3]),
    (1376.2, 1693.0, true,  false, [98.8, 878.9, 76.1]),
    (0.0,    80.0,   true,  true,  [0.0, 0.0, 0.0]),
];

/// Per-serving nutrients of the three sample foods.
pub fn sample_foods() -> FoodTable {
    let nutrients: Vec<String> = SAMPLE_NUTRIENTS.iter().map(|s| String::from(*s)).collect();
    let foods = SAMPLE_FOODS.iter().map(|s| String::from(*s)).collect();
    let values = (0..3).map(|f| SAMPLE.iter().map(|row| row.4[f]).collect()).collect();
    FoodTable::new(foods, nutrients, values).expect("table is well formed")
}

/// Daily nutrient bounds with the sample relevance flags and no preferences.
pub fn sample_bounds() -> NutrientBounds {
    NutrientBounds::new(
        SAMPLE_NUTRIENTS
            .iter()
            .zip(SAMPLE.iter())
            .map(|(name, &(lower, upper, lower_relevant, upper_relevant, _))| NutrientBound {
                nutrient: String::from(*name),
                lower,
                upper,
                lower_relevant,
                upper_relevant,
                lower_preferred: false,
                upper_preferred: false,
            })
            .collect(),
    )
    .expect("bounds are well formed")
}
