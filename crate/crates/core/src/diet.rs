//! Diet recommendation data: foods with per-serving nutrients, daily
//! nutrient bounds, and the forward instance they define over servings.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{ConstraintKind, ForwardInstance, LinearConstraint, ModelError, Sense};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DietError {
    #[error("nutrient `{0}` has no column in the food table")]
    MissingNutrient(String),
    #[error("nutrient `{nutrient}` is in `{table}` in the food table but `{bounds}` in the bounds")]
    UnitMismatch { nutrient: String, table: String, bounds: String },
    #[error("malformed diet data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Splits `"Sodium (mg)"` into `("Sodium", "mg")`; the unit is empty when absent.
pub fn split_unit(name: &str) -> (&str, &str) {
    let t = name.trim();
    if let (Some(open), true) = (t.rfind('('), t.ends_with(')')) {
        (t[..open].trim_end(), &t[open + 1..t.len() - 1])
    } else {
        (t, "")
    }
}

/// Per-serving nutrient content, one row per food.
#[derive(Clone, Debug, PartialEq)]
pub struct FoodTable {
    foods: Vec<String>,
    nutrients: Vec<String>,
    values: Vec<Vec<f64>>,
}

impl FoodTable {
    pub fn new(foods: Vec<String>, nutrients: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self, DietError> {
        if foods.is_empty() {
            return Err(DietError::Malformed(String::from("food table has no foods")));
        }
        if values.len() != foods.len() {
            return Err(DietError::Malformed(format!("{} foods but {} value rows", foods.len(), values.len())));
        }
        unique(&foods, "food")?;
        unique(&nutrients, "nutrient")?;
        for (f, row) in foods.iter().zip(&values) {
            if row.len() != nutrients.len() {
                return Err(DietError::Malformed(format!("food `{f}` has {} values", row.len())));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(DietError::Malformed(format!("food `{f}` has invalid nutrient value {v}")));
            }
        }
        Ok(Self { foods, nutrients, values })
    }

    pub fn foods(&self) -> &[String] {
        &self.foods
    }

    pub fn nutrients(&self) -> &[String] {
        &self.nutrients
    }

    /// `values()[food][nutrient]`.
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Column of `nutrient` matched on its name without unit.
    fn column(&self, nutrient: &str) -> Result<usize, DietError> {
        let (base, unit) = split_unit(nutrient);
        let i = self
            .nutrients
            .iter()
            .position(|n| split_unit(n).0 == base)
            .ok_or_else(|| DietError::MissingNutrient(String::from(nutrient)))?;
        let table_unit = split_unit(&self.nutrients[i]).1;
        if table_unit != unit {
            return Err(DietError::UnitMismatch {
                nutrient: String::from(base),
                table: String::from(table_unit),
                bounds: String::from(unit),
            });
        }
        Ok(i)
    }
}

fn unique(names: &[String], what: &str) -> Result<(), DietError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(DietError::Malformed(format!("duplicate {what} `{n}`")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct NutrientBound {
    pub nutrient: String,
    pub lower: f64,
    pub upper: f64,
    pub lower_relevant: bool,
    pub upper_relevant: bool,
    pub lower_preferred: bool,
    pub upper_preferred: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NutrientBounds {
    bounds: Vec<NutrientBound>,
}

impl NutrientBounds {
    pub fn new(bounds: Vec<NutrientBound>) -> Result<Self, DietError> {
        let names: Vec<String> = bounds.iter().map(|b| b.nutrient.clone()).collect();
        unique(&names, "nutrient")?;
        for b in &bounds {
            if !b.lower.is_finite() || !b.upper.is_finite() || b.lower > b.upper {
                return Err(DietError::Malformed(format!("bounds of `{}` are not an interval", b.nutrient)));
            }
            if (b.lower_preferred && !b.lower_relevant) || (b.upper_preferred && !b.upper_relevant) {
                return Err(DietError::Malformed(format!("`{}` is preferred on a non-relevant side", b.nutrient)));
            }
        }
        Ok(Self { bounds })
    }

    pub fn as_slice(&self) -> &[NutrientBound] {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn relevant_count(&self) -> usize {
        self.bounds.iter().map(|b| b.lower_relevant as usize + b.upper_relevant as usize).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DietConfig {
    /// Servings per food per day.
    pub serving_cap: f64,
}

impl Default for DietConfig {
    fn default() -> Self {
        Self { serving_cap: 8.0 }
    }
}

pub fn lower_row_name(nutrient: &str) -> String {
    format!("{nutrient} lower")
}

pub fn upper_row_name(nutrient: &str) -> String {
    format!("{nutrient} upper")
}

/// Two rows per nutrient (`>=` lower, `<=` upper, relevance from the flags)
/// followed by two trivial box rows per food.
pub fn build_diet_instance(
    foods: &FoodTable,
    bounds: &NutrientBounds,
    cfg: &DietConfig,
) -> Result<ForwardInstance, DietError> {
    if !(cfg.serving_cap > 0.0) || !cfg.serving_cap.is_finite() {
        return Err(DietError::Malformed(format!("serving cap {} must be positive", cfg.serving_cap)));
    }
    let mut rows = Vec::with_capacity(2 * bounds.len() + 2 * foods.foods.len());
    for b in &bounds.bounds {
        let col = foods.column(&b.nutrient)?;
        let coeffs: Vec<f64> = foods.values.iter().map(|r| r[col]).collect();
        let kind = |rel: bool| if rel { ConstraintKind::Relevant } else { ConstraintKind::Trivial };
        rows.push(LinearConstraint {
            name: lower_row_name(&b.nutrient),
            coeffs: coeffs.clone(),
            sense: Sense::Ge,
            rhs: b.lower,
            kind: kind(b.lower_relevant),
            preferred: b.lower_preferred,
        });
        rows.push(LinearConstraint {
            name: upper_row_name(&b.nutrient),
            coeffs,
            sense: Sense::Le,
            rhs: b.upper,
            kind: kind(b.upper_relevant),
            preferred: b.upper_preferred,
        });
    }
    let n = foods.foods.len();
    for (i, f) in foods.foods.iter().enumerate() {
        let mut e = alloc::vec![0.0; n];
        e[i] = 1.0;
        rows.push(LinearConstraint::trivial(format!("{f} min"), e.clone(), Sense::Ge, 0.0));
        rows.push(LinearConstraint::trivial(format!("{f} max"), e, Sense::Le, cfg.serving_cap));
    }
    Ok(ForwardInstance::new(foods.foods.clone(), rows)?)
}

/// Inverse of [`build_diet_instance`] for instances it produced.
pub fn tables_from_instance(inst: &ForwardInstance) -> Result<(FoodTable, NutrientBounds, DietConfig), DietError> {
    let rows = inst.constraints();
    let n = inst.dim();
    if rows.len() < 2 * n || !(rows.len() - 2 * n).is_multiple_of(2) {
        return Err(DietError::Malformed(String::from("instance does not have the diet layout")));
    }
    let nut_rows = rows.len() - 2 * n;
    let mut nutrients = Vec::new();
    let mut bounds = Vec::new();
    for pair in rows[..nut_rows].chunks(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        let name = lo
            .name
            .strip_suffix(" lower")
            .ok_or_else(|| DietError::Malformed(format!("unexpected row `{}`", lo.name)))?;
        if hi.name != upper_row_name(name) || lo.sense != Sense::Ge || hi.sense != Sense::Le || lo.coeffs != hi.coeffs {
            return Err(DietError::Malformed(format!("rows of `{name}` do not pair up")));
        }
        nutrients.push(String::from(name));
        bounds.push(NutrientBound {
            nutrient: String::from(name),
            lower: lo.rhs,
            upper: hi.rhs,
            lower_relevant: lo.is_relevant(),
            upper_relevant: hi.is_relevant(),
            lower_preferred: lo.preferred,
            upper_preferred: hi.preferred,
        });
    }
    let values = (0..n).map(|f| rows[..nut_rows].iter().step_by(2).map(|r| r.coeffs[f]).collect()).collect();
    let cap = rows[nut_rows + 1].rhs;
    Ok((
        FoodTable::new(inst.variables().to_vec(), nutrients, values)?,
        NutrientBounds::new(bounds)?,
        DietConfig { serving_cap: cap },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundSide {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundViolation {
    pub nutrient: String,
    pub side: BoundSide,
    pub bound: f64,
    pub total: f64,
    /// How far the total is past the bound, always positive.
    pub margin: f64,
    pub relevant: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DietEvaluation {
    /// `(nutrient, total)` in bounds order.
    pub totals: Vec<(String, f64)>,
    pub violations: Vec<BoundViolation>,
}

/// Nutrient totals of a serving vector and the bounds they break.
pub fn evaluate_diet(foods: &FoodTable, bounds: &NutrientBounds, servings: &[f64]) -> Result<DietEvaluation, DietError> {
    if servings.len() != foods.foods.len() {
        return Err(DietError::Malformed(format!(
            "{} servings for {} foods",
            servings.len(),
            foods.foods.len()
        )));
    }
    let mut totals = Vec::with_capacity(bounds.len());
    let mut violations = Vec::new();
    for b in &bounds.bounds {
        let col = foods.column(&b.nutrient)?;
        let total: f64 = foods.values.iter().zip(servings).map(|(r, s)| r[col] * s).sum();
        let tol = 1e-9 * (1.0 + b.lower.abs().max(b.upper.abs()));
        if total < b.lower - tol {
            violations.push(BoundViolation {
                nutrient: b.nutrient.clone(),
                side: BoundSide::Lower,
                bound: b.lower,
                total,
                margin: b.lower - total,
                relevant: b.lower_relevant,
            });
        }
        if total > b.upper + tol {
            violations.push(BoundViolation {
                nutrient: b.nutrient.clone(),
                side: BoundSide::Upper,
                bound: b.upper,
                total,
                margin: total - b.upper,
                relevant: b.upper_relevant,
            });
        }
        totals.push((b.nutrient.clone(), total));
    }
    Ok(DietEvaluation { totals, violations })
}
