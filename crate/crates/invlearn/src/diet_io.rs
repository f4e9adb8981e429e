//! CSV files for diet problems.
//!
//! `foods.csv`: `food,<nutrient>,...`, one row per food.
//! `bounds.csv`: `nutrient,lower,upper,lower_relevant,upper_relevant,lower_preferred,upper_preferred`
//! with `0`/`1` flags.

use invlearn_core::diet::{FoodTable, NutrientBound, NutrientBounds};

use crate::formats::FormatError;

const BOUNDS_HEADER: [&str; 7] =
    ["nutrient", "lower", "upper", "lower_relevant", "upper_relevant", "lower_preferred", "upper_preferred"];

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn number(s: &str, what: &str) -> Result<f64, FormatError> {
    s.parse::<f64>().map_err(|_| FormatError::Malformed(format!("{what}: `{s}` is not a number")))
}

fn flag(s: &str, what: &str) -> Result<bool, FormatError> {
    match s {
        "1" | "true" => Ok(true),
        "0" | "false" | "" => Ok(false),
        _ => Err(FormatError::Malformed(format!("{what}: `{s}` is not a 0/1 flag"))),
    }
}

pub fn parse_foods(text: &str) -> Result<FoodTable, FormatError> {
    let mut rdr = reader(text);
    let header: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    if header.first().map(String::as_str) != Some("food") {
        return Err(FormatError::Malformed(String::from("foods CSV must start with a `food` column")));
    }
    let nutrients = header[1..].to_vec();
    let (mut foods, mut values) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        let food = rec.get(0).unwrap_or_default().to_string();
        let row = rec
            .iter()
            .skip(1)
            .zip(&nutrients)
            .map(|(v, n)| number(v, &format!("{food} / {n}")))
            .collect::<Result<Vec<_>, _>>()?;
        foods.push(food);
        values.push(row);
    }
    Ok(FoodTable::new(foods, nutrients, values)?)
}

pub fn foods_csv(t: &FoodTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::from("food")];
    header.extend(t.nutrients().iter().cloned());
    w.write_record(&header).expect("in-memory write");
    for (f, row) in t.foods().iter().zip(t.values()) {
        let mut rec = vec![f.clone()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn parse_bounds(text: &str) -> Result<NutrientBounds, FormatError> {
    let mut rdr = reader(text);
    let header: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    if header != BOUNDS_HEADER {
        return Err(FormatError::Malformed(format!("bounds CSV header must be `{}`", BOUNDS_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let f = |i: usize| rec.get(i).unwrap_or_default();
        let name = f(0).to_string();
        out.push(NutrientBound {
            lower: number(f(1), &name)?,
            upper: number(f(2), &name)?,
            lower_relevant: flag(f(3), &name)?,
            upper_relevant: flag(f(4), &name)?,
            lower_preferred: flag(f(5), &name)?,
            upper_preferred: flag(f(6), &name)?,
            nutrient: name,
        });
    }
    Ok(NutrientBounds::new(out)?)
}

pub fn bounds_csv(b: &NutrientBounds) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(BOUNDS_HEADER).expect("in-memory write");
    let bit = |x: bool| String::from(if x { "1" } else { "0" });
    for nb in b.as_slice() {
        w.write_record([
            nb.nutrient.clone(),
            nb.lower.to_string(),
            nb.upper.to_string(),
            bit(nb.lower_relevant),
            bit(nb.upper_relevant),
            bit(nb.lower_preferred),
            bit(nb.upper_preferred),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
