//! Golden-file pins for the shipped default experiment config: the CSV output
//! must stay byte-identical run over run and release over release.

use fla::report::{
    experiment_bounds, parse_config, report_emit, serialize_config, ExperimentConfig,
};

const GOLDEN_CONFIG: &str = include_str!("golden/default-config.json");
const GOLDEN_REPORT: &str = include_str!("golden/default-report.csv");

#[test]
fn shipped_config_matches_the_builtin_default() {
    let shipped = parse_config(GOLDEN_CONFIG).unwrap();
    assert_eq!(
        serialize_config(&shipped),
        serialize_config(&ExperimentConfig::default_config())
    );
}

#[test]
fn default_report_csv_matches_the_golden_file() {
    let report = experiment_bounds(&ExperimentConfig::default_config()).unwrap();
    let csv = report_emit(&report, "csv").unwrap();
    assert_eq!(csv, GOLDEN_REPORT);
}

#[test]
fn golden_report_has_no_failures() {
    for line in GOLDEN_REPORT.lines().skip(1) {
        assert!(line.ends_with(",pass"), "{line}");
    }
}

#[test]
fn text_table_of_the_default_report_carries_the_same_numbers() {
    let report = experiment_bounds(&ExperimentConfig::default_config()).unwrap();
    let text = report_emit(&report, "text-table").unwrap();
    for line in GOLDEN_REPORT.lines().skip(1) {
        for field in line.split(',') {
            assert!(
                text.contains(field),
                "field {field:?} missing from the text table"
            );
        }
    }
}
