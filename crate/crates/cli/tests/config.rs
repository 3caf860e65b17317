use phasefluct_cli::{ConfigError, Overrides, RawConfig, TimeGrid, TimeScale};
use phasefluct_core::{FormalismChoice, ProcessKind};

const MINIMAL: &str = r#"
process = "fwm"
alpha_sq = [1.0]
theta = [0.0]
g = 1.0
t = [0.01]
"#;

fn field_of(src: &str) -> String {
    let err = RawConfig::from_toml_str(src).and_then(RawConfig::into_sweep_config).unwrap_err();
    err.field().unwrap_or_else(|| panic!("not a validation error: {err}")).to_string()
}

#[test]
fn minimal_config_gets_defaults() {
    let c = RawConfig::from_toml_str(MINIMAL).unwrap().into_sweep_config().unwrap();
    assert_eq!(c.process, ProcessKind::Fwm);
    assert_eq!(c.formalism, FormalismChoice::Bp);
    assert_eq!(c.cutoffs_for(1.0), vec![23, 7, 7]);
    assert_eq!(c.t, TimeGrid::Values(vec![0.01]));
    assert_eq!(c.tolerances.accuracy, 1e-10);
    assert_eq!(c.tolerances.leakage, 1e-8);
    assert!(c.output.is_none());
}

#[test]
fn zero_count_names_field() {
    let src = "process = \"fwm\"\n[t]\nmin = 0.001\nmax = 0.1\ncount = 0\n";
    assert_eq!(field_of(src), "t.count");
}

#[test]
fn unknown_process_names_field() {
    assert_eq!(field_of(&MINIMAL.replace("fwm", "fivewave")), "process");
}

#[test]
fn other_validation_fields() {
    assert_eq!(field_of("process = \"shg\"\n[t]\nmin = 0.1\nmax = 0.01\ncount = 3\n"), "t.max");
    assert_eq!(field_of("process = \"shg\"\n[t]\nmin = 0.0\nmax = 0.1\ncount = 3\nscale = \"log\"\n"), "t.min");
    assert_eq!(field_of("process = \"shg\"\nt = 0.1\nalpha_sq = []\n"), "alpha_sq");
    assert_eq!(field_of("process = \"shg\"\nt = 0.1\ncutoffs = [5, 5, 5]\n"), "cutoffs");
    assert_eq!(field_of("process = \"shg\"\nt = 0.1\nformalism = \"pb\"\n"), "formalism");
    assert_eq!(field_of("process = \"shg\"\n"), "t");
    assert_eq!(field_of("process = \"shg\"\nt = 0.1\n[tolerances]\nleakage = -1.0\n"), "tolerances.leakage");
    assert_eq!(field_of("process = \"shg\"\nt = 0.1\n[coefficients.qwm]\nwitness = 1.0\n"), "coefficients.qwm");
}

#[test]
fn parse_errors_carry_position() {
    let err = RawConfig::from_toml_str("process = \"fwm\"\ng = = 1\n").unwrap_err();
    match err {
        ConfigError::Parse { line, .. } => assert_eq!(line, 2),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn log_grid_is_geometric() {
    let src = "process = \"fwm\"\n[t]\nmin = 1e-3\nmax = 1e-1\ncount = 5\nscale = \"log\"\n";
    let c = RawConfig::from_toml_str(src).unwrap().into_sweep_config().unwrap();
    assert!(matches!(c.t, TimeGrid::Range { scale: TimeScale::Log, count: 5, .. }));
    let pts = c.t.points();
    assert_eq!(pts.len(), 5);
    for w in pts.windows(2) {
        assert!((w[1] / w[0] - 10f64.sqrt()).abs() < 1e-12);
    }
    assert!((pts[0] - 1e-3).abs() < 1e-18 && (pts[4] - 1e-1).abs() < 1e-15);
}

#[test]
fn flags_override_file() {
    let merged = RawConfig::from_toml_str(MINIMAL)
        .unwrap()
        .merge(Overrides {
            process: Some("shg".into()),
            alpha_sq: Some(vec![2.0, 3.0]),
            t_min: Some(0.0),
            t_max: Some(0.02),
            t_count: Some(3),
            ..Default::default()
        })
        .into_sweep_config()
        .unwrap();
    assert_eq!(merged.process, ProcessKind::Shg);
    assert_eq!(merged.alpha_sq, vec![2.0, 3.0]);
    assert_eq!(merged.theta, vec![0.0]);
    assert_eq!(merged.t.points(), vec![0.0, 0.01, 0.02]);
}

#[test]
fn coefficient_overrides_patch_printed_values() {
    let src = format!("{MINIMAL}\n[coefficients.fwm]\nwitness = 2.0\n");
    let c = RawConfig::from_toml_str(&src).unwrap().into_sweep_config().unwrap();
    let k = c.coefficients_for(ProcessKind::Fwm);
    assert_eq!(k.witness, 2.0);
    assert_eq!(k.u_numerator, 12.0);
    assert_eq!(c.coefficients_for(ProcessKind::Shg).witness, 2.0);
}
