//! Synthetic report corpus with planted structure, for demos and end-to-end
//! verification without real data.
//!
//! The generator plants four disjoint vocabulary themes across 40 unique
//! descriptions and 600 records, and records the ground truth it used, so a
//! pipeline run can be scored against it.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ingest::{DateValue, InitiatedBy, Location, ReportRecord, TriState};
use crate::rng::{derive_seed, seeded_rng, stream};

pub const NUM_THEMES: usize = 4;
pub const UNIQUE_DESCRIPTIONS: usize = 40;
pub const TOTAL_RECORDS: usize = 600;

/// Planted per-theme record totals (sums to [`TOTAL_RECORDS`]).
pub const THEME_RECORD_COUNTS: [usize; NUM_THEMES] = [220, 180, 120, 80];

const THEME_VOCAB: [[&str; 12]; NUM_THEMES] = [
    [
        "perception", "camera", "lidar", "radar", "detection", "object", "misclassified",
        "obstacle", "occlusion", "glare", "fog", "shadow",
    ],
    [
        "planning", "trajectory", "route", "merge", "yield", "hesitation", "overshoot",
        "corridor", "gap", "curb", "swerve", "replan",
    ],
    [
        "hardware", "sensor", "compute", "overheating", "voltage", "restart", "firmware",
        "fault", "connector", "latency", "watchdog", "battery",
    ],
    [
        "prediction", "pedestrian", "cyclist", "intent", "crossing", "anticipated", "oncoming",
        "cutin", "stalled", "jaywalking", "bus", "scooter",
    ],
];

const MANUFACTURERS: [&str; 5] = [
    "Acme Autonomy",
    "Borealis Motors",
    "Cardinal Robotics",
    "Delta Drive",
    "Everline AV",
];

/// Generated corpus plus the ground truth it was built from.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub records: Vec<ReportRecord>,
    /// Theme of each unique description, keyed by the (trimmed) text.
    pub theme_of_text: BTreeMap<String, usize>,
    /// Planted record totals per theme.
    pub theme_record_counts: Vec<usize>,
}

impl Fixture {
    /// Theme labels aligned with a unique-description table's ids, given the
    /// texts in first-occurrence order.
    pub fn themes_for_texts<'a, I: IntoIterator<Item = &'a str>>(&self, texts: I) -> Vec<usize> {
        texts
            .into_iter()
            .map(|t| self.theme_of_text[t.trim()])
            .collect()
    }
}

/// Generate the 600-record fixture deterministically from a seed.
pub fn generate(seed: u64) -> Fixture {
    let mut rng = seeded_rng(derive_seed(seed, stream::FIXTURE));

    // 10 distinct descriptions per theme. Every description contains all 12
    // theme words with small random counts, so documents within a theme are
    // near-identical bags and themes are far apart.
    let mut theme_of_text = BTreeMap::new();
    let mut descriptions: Vec<(String, usize)> = Vec::new(); // (text, theme)
    for (theme, vocab) in THEME_VOCAB.iter().enumerate() {
        let mut produced = 0;
        while produced < UNIQUE_DESCRIPTIONS / NUM_THEMES {
            let mut tokens: Vec<&str> = Vec::new();
            for word in vocab {
                let copies = rng.gen_range(2..=3);
                for _ in 0..copies {
                    tokens.push(word);
                }
            }
            tokens.shuffle(&mut rng);
            let text = format!("Auto mode exited after {} event.", tokens.join(" "));
            if theme_of_text.contains_key(&text) {
                continue; // extremely unlikely; redraw
            }
            theme_of_text.insert(text.clone(), theme);
            descriptions.push((text, theme));
            produced += 1;
        }
    }

    // Spread each theme's record budget over its 10 descriptions: one record
    // each, remainder at random.
    let mut description_totals = vec![1usize; descriptions.len()];
    for theme in 0..NUM_THEMES {
        let members: Vec<usize> = descriptions
            .iter()
            .enumerate()
            .filter(|(_, (_, t))| *t == theme)
            .map(|(i, _)| i)
            .collect();
        let mut remaining = THEME_RECORD_COUNTS[theme] - members.len();
        while remaining > 0 {
            let pick = members[rng.gen_range(0..members.len())];
            description_totals[pick] += 1;
            remaining -= 1;
        }
    }

    let mut slots: Vec<usize> = description_totals
        .iter()
        .enumerate()
        .flat_map(|(idx, &count)| std::iter::repeat(idx).take(count))
        .collect();
    slots.shuffle(&mut rng);

    let locations = [
        Location::Interstate,
        Location::Freeway,
        Location::Highway,
        Location::RuralRoad,
        Location::Street,
        Location::ParkingFacility,
    ];
    let initiators = [
        InitiatedBy::AvSystem,
        InitiatedBy::TestDriver,
        InitiatedBy::RemoteOperator,
        InitiatedBy::Passenger,
    ];

    let records = slots
        .iter()
        .enumerate()
        .map(|(row, &description_idx)| {
            let (text, theme) = &descriptions[description_idx];
            let month = rng.gen_range(1..=12u32);
            let day = rng.gen_range(1..=28u32);
            ReportRecord {
                manufacturer: MANUFACTURERS[*theme % MANUFACTURERS.len()].to_string(),
                permit_number: format!("SYN-{:03}", theme + 1),
                date: DateValue::parse(&format!("2023-{month:02}-{day:02}")),
                vin: format!("SYNTHVIN{row:08}"),
                operates_driverless: if rng.gen_bool(0.2) {
                    TriState::Yes
                } else {
                    TriState::No
                },
                driver_present: TriState::Yes,
                initiated_by: initiators[rng.gen_range(0..initiators.len())].clone(),
                location: locations[rng.gen_range(0..locations.len())].clone(),
                description: text.clone(),
                source_file: "fixture".to_string(),
                source_row: row + 1,
            }
        })
        .collect();

    Fixture {
        records,
        theme_of_text,
        theme_record_counts: THEME_RECORD_COUNTS.to_vec(),
    }
}
