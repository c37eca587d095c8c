//! End-to-end walkthroughs: a full search run inspected amplitude by
//! amplitude, a user-supplied problem file taken through depth and
//! prediction, and a run that begins by measuring the setting register.

use tsow_core::algorithms::{build_grover, run_extended, run_relativized};
use tsow_core::bits::BitString;
use tsow_core::complexity::classical_depth;
use tsow_core::oracle::OracleProblem;
use tsow_core::rule::predict;
use tsow_core::symmetry::SharingMode;

/// The one-query search on four drawers ends in the solved form
/// `sum_b |b>|b> / 2`: exactly four surviving amplitudes, each `1/2` up to
/// the norm budget, sitting where the argument digits copy the setting.
#[test]
fn search_run_dumps_the_solved_superposition() {
    let algo = build_grover(2).unwrap();
    let run = run_relativized(&algo).unwrap();
    assert_eq!(run.queries, 1);
    assert!(run.canonical_ok);

    let lines = run.output.dump_lines();
    assert_eq!(lines.len(), 4, "exactly one surviving amplitude per setting");
    for (b, line) in (0u32..4).zip(&lines) {
        let mut fields = line.split('\t');
        let bits = fields.next().unwrap();
        let re: f64 = fields.next().unwrap().parse().unwrap();
        let im: f64 = fields.next().unwrap().parse().unwrap();
        assert_eq!(fields.next(), None, "a dump line has exactly three fields");

        let index = u32::from_str_radix(bits, 2).unwrap();
        assert_eq!(index, b << 2 | b, "amplitude sits at |b>|b>");
        assert!((re - 0.5).abs() < 1e-9, "setting {b}: re {re}");
        assert!(im.abs() < 1e-9, "setting {b}: im {im}");
    }
}

/// A problem description fed in as JSON goes through the same machinery as
/// the built-in families: the oracle that reveals one digit per query needs
/// two queries cold and one after a valid share.
#[test]
fn supplied_problem_file_flows_through_depth_and_prediction() {
    let problem = OracleProblem::from_json_str(
        r#"{
            "name": "digit-reveal",
            "setting_width": 2,
            "encoding": "compact",
            "settings": ["00", "01", "10", "11"],
            "domain": ["0", "1"],
            "answers": {
                "00": ["0", "0"],
                "01": ["0", "1"],
                "10": ["1", "0"],
                "11": ["1", "1"]
            },
            "solutions": { "00": "00", "01": "01", "10": "10", "11": "11" }
        }"#,
    )
    .unwrap();
    assert_eq!(classical_depth(&problem).unwrap(), 2, "one digit per query, two digits");

    for mode in [SharingMode::Coordinate, SharingMode::Linear] {
        let report = predict(&problem, mode, false).unwrap();
        assert_eq!(report.predicted, Some(1), "a share leaves a two-setting cell");
        for s in &report.per_setting {
            assert!(s.agree, "every advanced cell of {} costs the same", s.setting);
            assert_eq!(s.predicted, Some(1));
        }
    }
}

/// Measuring the setting register first collapses the superposed input onto
/// one branch with probability 1/|sigma|; the run then solves that branch
/// with certainty and leaves the other blocks empty.
#[test]
fn measured_setting_branch_runs_to_certainty() {
    let algo = build_grover(2).unwrap();
    let b = BitString::parse("10", Some(2)).unwrap();
    let run = run_extended(&algo, &b).unwrap();

    assert_eq!(run.setting, b);
    assert!((run.setting_probability - 0.25).abs() < 1e-12);
    assert_eq!(run.queries, 1);
    assert_eq!(run.solution, b, "the drawer index is its own solution");
    assert!((run.success - 1.0).abs() < 1e-9);

    for other in 0u32..4 {
        let mass = run.output.block_mass(other);
        if other == b.value() {
            assert!((mass - 1.0).abs() < 1e-9);
        } else {
            assert!(mass < 1e-18, "foreign setting block kept mass {mass}");
        }
    }
}
