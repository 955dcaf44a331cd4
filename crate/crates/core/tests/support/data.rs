//! Synthetic datasets for integration tests.

#![allow(dead_code)]

use mll_core::dataset::{Attribute, AttributeSchema, Cell, MultiLabelDataset};
use mll_core::learners::TrainedLearner;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `k` labels that depend noisily on a nominal `f` and a numeric `x`, with a
/// few missing `f` values.
pub fn random_dataset(k: usize, n: usize, seed: u64) -> MultiLabelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attrs: Vec<Attribute> = (0..k)
        .map(|j| Attribute::binary_label(format!("l{j}")))
        .collect();
    attrs.push(Attribute::nominal("f", ["a", "b", "c"]));
    attrs.push(Attribute::numeric("x"));
    let schema = AttributeSchema::new(attrs, (0..k).collect()).unwrap();
    let rows = (0..n)
        .map(|_| {
            let f: u32 = rng.gen_range(0..3);
            let x: f64 = rng.gen_range(0.0..10.0);
            let mut row: Vec<Cell> = (0..k)
                .map(|j| {
                    let p = if j as u32 % 3 == f { 0.8 } else { 0.2 } * (0.5 + x / 20.0);
                    Cell::Category(rng.gen_bool(p) as u32)
                })
                .collect();
            row.push(if rng.gen_bool(0.05) {
                Cell::Missing
            } else {
                Cell::Category(f)
            });
            row.push(Cell::Numeric(x));
            row
        })
        .collect();
    MultiLabelDataset::from_rows("random", schema, rows).unwrap()
}

/// One binary label `y` placed first, then the given features.
pub fn binary_dataset(features: Vec<Attribute>, rows: Vec<(Vec<Cell>, bool)>) -> MultiLabelDataset {
    let mut attrs = vec![Attribute::binary_label("y")];
    attrs.extend(features);
    let schema = AttributeSchema::new(attrs, vec![0]).unwrap();
    let rows = rows
        .into_iter()
        .map(|(mut f, y)| {
            f.insert(0, Cell::Category(y as u32));
            f
        })
        .collect();
    MultiLabelDataset::from_rows("synthetic", schema, rows).unwrap()
}

/// Noise-free depth-two tree: y = if x0 { x1 } else { x2 }; x3 is irrelevant.
pub fn tree_concept(n: usize, seed: u64) -> MultiLabelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            let x: Vec<u32> = (0..4).map(|_| rng.gen_range(0..2)).collect();
            let y = if x[0] == 1 { x[1] == 1 } else { x[2] == 1 };
            (x.into_iter().map(Cell::Category).collect(), y)
        })
        .collect();
    binary_dataset(
        (0..4)
            .map(|i| Attribute::nominal(format!("x{i}"), ["0", "1"]))
            .collect(),
        rows,
    )
}

/// Number of rules generating [`rule_concept`].
pub const RULE_CONCEPT_RULES: usize = 3;

/// y = (a ∧ b) ∨ (c = 2 ∧ x > 5) ∨ (¬d ∧ ¬e ∧ f).
pub fn rule_concept(n: usize, seed: u64) -> MultiLabelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            let a: u32 = rng.gen_range(0..2);
            let b: u32 = rng.gen_range(0..2);
            let c: u32 = rng.gen_range(0..3);
            let d: u32 = rng.gen_range(0..2);
            let e: u32 = rng.gen_range(0..2);
            let f: u32 = rng.gen_range(0..2);
            let x: f64 = rng.gen_range(0.0..10.0);
            let y = (a == 1 && b == 1) || (c == 2 && x > 5.0) || (d == 0 && e == 0 && f == 1);
            let mut cells: Vec<Cell> = [a, b, c, d, e, f].into_iter().map(Cell::Category).collect();
            cells.push(Cell::Numeric(x));
            (cells, y)
        })
        .collect();
    let mut attrs: Vec<Attribute> = ["a", "b", "d", "e", "f"]
        .iter()
        .map(|n| Attribute::nominal(*n, ["0", "1"]))
        .collect();
    attrs.insert(2, Attribute::nominal("c", ["0", "1", "2"]));
    attrs.push(Attribute::numeric("x"));
    binary_dataset(attrs, rows)
}

/// Accuracy of a single-label model on label 0.
pub fn accuracy(model: &TrainedLearner, ds: &MultiLabelDataset) -> f64 {
    let correct = (0..ds.len())
        .filter(|&i| model.predict(ds.instance(i).values()).unwrap() == ds.label(i, 0) as u32)
        .count();
    correct as f64 / ds.len() as f64
}

const RACE_WEIGHTS: [f64; 5] = [0.76, 0.19, 0.02, 0.006, 0.015];
const DRUGS: usize = 23;

/// Stand-in with the shape of the preprocessed diabetes table: seven labels
/// (five races, two genders, exactly one of each per row), then 44 features
/// with the same kinds and rough cardinalities as the real columns. Features
/// depend weakly on the labels. Used only for timing, never for accuracy.
pub fn diabetes_like(n: usize, seed: u64) -> MultiLabelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attrs: Vec<Attribute> = [
        "Caucasian",
        "AfricanAmerican",
        "Hispanic",
        "Asian",
        "Other",
        "Male",
        "Female",
    ]
    .iter()
    .map(|l| Attribute::binary_label(*l))
    .collect();
    let ages: Vec<String> = (0..10)
        .map(|d| format!("[{}-{})", d * 10, d * 10 + 10))
        .collect();
    attrs.push(Attribute::nominal("age", ages));
    let numeric = [
        "admission_type_id",
        "discharge_disposition_id",
        "admission_source_id",
        "time_in_hospital",
        "num_lab_procedures",
        "num_procedures",
        "num_medications",
        "number_outpatient",
        "number_emergency",
        "number_inpatient",
        "number_diagnoses",
    ];
    attrs.extend(numeric.iter().map(|c| Attribute::numeric(*c)));
    attrs.push(Attribute::nominal(
        "medical_specialty",
        (0..73).map(|i| format!("spec{i}")),
    ));
    for d in ["diag_1", "diag_2", "diag_3"] {
        attrs.push(Attribute::nominal(
            d,
            (0..700).map(|i| format!("{}.{}", 1 + i / 10, i % 10)),
        ));
    }
    attrs.push(Attribute::nominal(
        "max_glu_serum",
        ["None", "Norm", ">200", ">300"],
    ));
    attrs.push(Attribute::nominal(
        "A1Cresult",
        ["None", "Norm", ">7", ">8"],
    ));
    for i in 0..DRUGS {
        attrs.push(Attribute::nominal(
            format!("drug{i}"),
            ["No", "Steady", "Up", "Down"],
        ));
    }
    attrs.push(Attribute::nominal("change", ["No", "Ch"]));
    attrs.push(Attribute::nominal("diabetesMed", ["No", "Yes"]));
    attrs.push(Attribute::nominal("readmitted", ["NO", ">30", "<30"]));
    let schema = AttributeSchema::new(attrs, (0..7).collect()).unwrap();

    let total: f64 = RACE_WEIGHTS.iter().sum();
    let rows = (0..n)
        .map(|_| {
            let mut u = rng.gen::<f64>() * total;
            let race = RACE_WEIGHTS
                .iter()
                .position(|w| {
                    u -= w;
                    u < 0.0
                })
                .unwrap_or(0);
            let male = rng.gen_bool(0.46);
            let mut row: Vec<Cell> = (0..5).map(|r| Cell::Category((r == race) as u32)).collect();
            row.push(Cell::Category(male as u32));
            row.push(Cell::Category(!male as u32));
            let shift = race as f64 * 0.3 + if male { 0.5 } else { 0.0 };
            let age = (rng.gen_range(3.0..10.0) - shift * 0.5).clamp(0.0, 9.0) as u32;
            row.push(Cell::Category(age));
            for (i, _) in numeric.iter().enumerate() {
                let base: f64 = rng.gen_range(0.0..(5.0 + 10.0 * i as f64));
                row.push(Cell::Numeric((base + shift * i as f64).round()));
            }
            row.push(if rng.gen_bool(0.49) {
                Cell::Category(72)
            } else {
                Cell::Category(rng.gen_range(0..72))
            });
            for _ in 0..3 {
                let code = (rng.gen_range(0..700) + if male { 13 } else { 0 }) % 700;
                row.push(if rng.gen_bool(0.01) {
                    Cell::Missing
                } else {
                    Cell::Category(code)
                });
            }
            for _ in 0..2 {
                row.push(Cell::Category(if rng.gen_bool(0.8) {
                    0
                } else {
                    rng.gen_range(1..4)
                }));
            }
            for i in 0..DRUGS {
                let p = if i < 4 { 0.3 } else { 0.03 };
                row.push(Cell::Category(if rng.gen_bool(p) {
                    rng.gen_range(1..4)
                } else {
                    0
                }));
            }
            row.push(Cell::Category(rng.gen_range(0..2)));
            row.push(Cell::Category(rng.gen_bool(0.77) as u32));
            row.push(Cell::Category(rng.gen_range(0..3)));
            row
        })
        .collect();
    MultiLabelDataset::from_rows("diabetes_like", schema, rows).unwrap()
}
