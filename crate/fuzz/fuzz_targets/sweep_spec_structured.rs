//! Builds spec files line by line from structured input so that most
//! inputs get past the tokenizer and exercise the validation rules.

#![no_main]

use arbitrary::Arbitrary;
use holonomy_core::comparator::SweepSpec;
use libfuzzer_sys::fuzz_target;

#[derive(Arbitrary, Debug)]
enum Line {
    Scenario(u8),
    Grid { param: u8, min: f64, max: f64, count: u16 },
    Fixed { param: u8, value: f64 },
    KList(Vec<u8>),
    Comment(String),
    Raw(String),
}

const PARAMS: [&str; 7] = ["r", "theta1", "theta2", "phibar", "xi", "inv_temp", "bogus"];
const SCENARIOS: [&str; 4] = ["triangle", "circle", "gibbs", "square"];

fn render(line: &Line) -> String {
    match line {
        Line::Scenario(s) => format!("scenario = {}", SCENARIOS[*s as usize % SCENARIOS.len()]),
        Line::Grid { param, min, max, count } => {
            format!("grid.{} = {min}, {max}, {count}", PARAMS[*param as usize % PARAMS.len()])
        }
        Line::Fixed { param, value } => format!("fixed.{} = {value}", PARAMS[*param as usize % PARAMS.len()]),
        Line::KList(ks) => {
            let ks: Vec<String> = ks.iter().take(16).map(|k| k.to_string()).collect();
            format!("k_list = {}", ks.join(", "))
        }
        Line::Comment(c) => format!("# {}", c.replace(['\n', '\r'], " ")),
        Line::Raw(s) => s.replace(['\n', '\r'], " "),
    }
}

fuzz_target!(|lines: Vec<Line>| {
    let text: String = lines.iter().take(32).map(|l| render(l) + "\n").collect();
    if let Ok(spec) = SweepSpec::parse(&text) {
        assert_eq!(SweepSpec::parse(&spec.to_string()).expect("printed spec parses"), spec);
    }
});
