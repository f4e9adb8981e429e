//! Diet report: CSV tables and an SVG chart built from a frontier.

use std::fmt::Write as _;

use invlearn_core::diet::{evaluate_diet, BoundSide, FoodTable, NutrientBounds};
use invlearn_core::model::observation_stats;
use invlearn_core::{ForwardInstance, ObservationSet, ENGINE_VERSION};
use serde::{Deserialize, Serialize};

use crate::formats::{to_json, FrontierDoc};
use crate::pipeline::Failure;

pub const REPORT_PERCENTILES: [f64; 5] = [10.0, 25.0, 50.0, 75.0, 90.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub engine_version: String,
    pub mode: String,
    pub foods: usize,
    pub observations: usize,
    pub points: usize,
    pub solved: usize,
    pub errors: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct DietReport {
    /// File name and contents, in write order.
    pub files: Vec<(String, String)>,
    pub metadata: ReportMetadata,
}

impl DietReport {
    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }

    pub fn write_to(&self, dir: &std::path::Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, body) in &self.files {
            std::fs::write(dir.join(name), body)?;
        }
        Ok(())
    }
}

fn csv_text(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn diet_report(
    inst: &ForwardInstance,
    foods: &FoodTable,
    bounds: &NutrientBounds,
    obs: &ObservationSet,
    frontier: &FrontierDoc,
) -> Result<DietReport, Failure> {
    if inst.dim() != foods.foods().len() {
        return Err(Failure::invalid("food table does not match the instance"));
    }
    let mut errors = Vec::new();
    let solved: Vec<_> = frontier.points.iter().filter_map(|pt| pt.solution.as_ref().map(|s| (pt.p, s))).collect();

    let mut rows = vec![std::iter::once(String::from("food")).chain(solved.iter().map(|(p, _)| format!("p={p}"))).collect()];
    for (i, f) in foods.foods().iter().enumerate() {
        let mut r = vec![f.clone()];
        r.extend(solved.iter().map(|(_, s)| s.z[i].to_string()));
        rows.push(r);
    }
    let servings = csv_text(rows);

    let mut rows = vec![["p", "nutrient", "total", "lower", "upper", "status"].map(String::from).to_vec()];
    for (p, s) in &solved {
        let ev = evaluate_diet(foods, bounds, &s.z).map_err(|e| Failure::invalid(e.to_string()))?;
        for ((name, total), b) in ev.totals.iter().zip(bounds.as_slice()) {
            let status = match ev.violations.iter().find(|v| &v.nutrient == name) {
                Some(v) if v.side == BoundSide::Lower => "below",
                Some(_) => "above",
                None => "ok",
            };
            rows.push(vec![
                p.to_string(),
                name.clone(),
                total.to_string(),
                b.lower.to_string(),
                b.upper.to_string(),
                String::from(status),
            ]);
        }
    }
    let nutrients = csv_text(rows);

    let stats = match observation_stats(obs, &REPORT_PERCENTILES) {
        Ok(t) => Some(t),
        Err(e) => {
            errors.push(format!("EMPTY_SET: {e}"));
            None
        }
    };
    let mut rows = vec![std::iter::once(String::from("food"))
        .chain(REPORT_PERCENTILES.iter().map(|q| format!("p{q}")))
        .collect::<Vec<_>>()];
    if let Some(t) = &stats {
        for (f, v) in foods.foods().iter().zip(&t.values) {
            let mut r = vec![f.clone()];
            r.extend(v.iter().map(|x| x.to_string()));
            rows.push(r);
        }
    }
    let percentiles = csv_text(rows);

    let preferred: Vec<&str> = inst.preferred().into_iter().map(|j| inst.relevant(j).name.as_str()).collect();
    let k = obs.len().max(1) as f64;
    let mut rows = vec![[
        "p",
        "status",
        "distance",
        "avg_distance",
        "binding_relevant",
        "binding_trivial",
        "preferred_relevant",
    ]
    .map(String::from)
    .to_vec()];
    for pt in &frontier.points {
        match &pt.solution {
            Some(s) => rows.push(vec![
                pt.p.to_string(),
                pt.status.clone(),
                s.distance.to_string(),
                (s.distance / k).to_string(),
                s.tight.len().to_string(),
                s.tight_trivial.len().to_string(),
                s.tight.iter().filter(|t| preferred.contains(&t.as_str())).count().to_string(),
            ]),
            None => rows.push(vec![pt.p.to_string(), pt.status.clone(), String::new(), String::new(), String::new(), String::new(), String::new()]),
        }
    }
    let bindings = csv_text(rows);

    let chart = svg_chart(foods, stats.as_ref().map(|t| t.values.as_slice()), &solved);
    let metadata = ReportMetadata {
        engine_version: String::from(ENGINE_VERSION),
        mode: frontier.mode.clone(),
        foods: foods.foods().len(),
        observations: obs.len(),
        points: frontier.points.len(),
        solved: solved.len(),
        errors,
    };
    let files = vec![
        (String::from("servings.csv"), servings),
        (String::from("nutrients.csv"), nutrients),
        (String::from("percentiles.csv"), percentiles),
        (String::from("bindings.csv"), bindings),
        (String::from("chart.svg"), chart),
        (String::from("metadata.json"), to_json(&metadata)),
    ];
    Ok(DietReport { files, metadata })
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Box per food (10/25/50/75/90 of the observations) with frontier servings
/// as dots.
fn svg_chart(foods: &FoodTable, boxes: Option<&[Vec<f64>]>, solved: &[(usize, &crate::formats::SolutionDoc)]) -> String {
    let n = foods.foods().len();
    let slot = 24.0;
    let (left, top, h) = (50.0, 20.0, 300.0);
    let width = left + slot * n as f64 + 140.0;
    let height = top + h + 120.0;
    let ymax = boxes
        .into_iter()
        .flatten()
        .flatten()
        .chain(solved.iter().flat_map(|(_, s)| s.z.iter()))
        .fold(1.0f64, |a, b| a.max(*b))
        * 1.05;
    let y = |v: f64| top + h - v / ymax * h;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="10">"#);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{:.1}" stroke="black"/>"#, top + h);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#, top + h, left + slot * n as f64, top + h);
    for t in 0..=4 {
        let v = ymax * t as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.2}</text>"#, left - 4.0, y(v) + 3.0);
    }
    for (i, name) in foods.foods().iter().enumerate() {
        let cx = left + slot * (i as f64 + 0.5);
        if let Some(b) = boxes.map(|b| &b[i]) {
            let _ = writeln!(s, r#"<line x1="{cx:.1}" y1="{:.1}" x2="{cx:.1}" y2="{:.1}" stroke="gray"/>"#, y(b[0]), y(b[4]));
            let _ = writeln!(
                s,
                r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="lightgray" stroke="gray"/>"#,
                cx - slot * 0.3,
                y(b[3]),
                slot * 0.6,
                (y(b[1]) - y(b[3])).max(0.5)
            );
            let _ = writeln!(s, r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#, cx - slot * 0.3, y(b[2]), cx + slot * 0.3, y(b[2]));
        }
        for (k, (_, sol)) in solved.iter().enumerate() {
            let _ = writeln!(s, r#"<circle cx="{cx:.1}" cy="{:.1}" r="2.5" fill="{}"/>"#, y(sol.z[i]), PALETTE[k % PALETTE.len()]);
        }
        let _ = writeln!(
            s,
            r#"<text x="{cx:.1}" y="{:.1}" transform="rotate(60 {cx:.1} {:.1})">{}</text>"#,
            top + h + 10.0,
            top + h + 10.0,
            escape(name)
        );
    }
    for (k, (p, _)) in solved.iter().enumerate() {
        let lx = left + slot * n as f64 + 20.0;
        let ly = top + 14.0 * k as f64;
        let _ = writeln!(s, r#"<circle cx="{lx:.1}" cy="{ly:.1}" r="3" fill="{}"/>"#, PALETTE[k % PALETTE.len()]);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">p = {p}</text>"#, lx + 8.0, ly + 3.0);
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
