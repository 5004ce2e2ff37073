use chernoff_cli::format::sig_figs;
use chernoff_cli::{run, Cli, Exit};
use clap::Parser;
use proptest::prelude::*;

proptest! {
    /// The printed value is the double rounded to the nearest `digits`-figure decimal.
    #[test]
    fn printed_value_is_nearest(x in 1e-8f64..1e8, digits in 1usize..=10) {
        let s = sig_figs(x, digits);
        let back: f64 = s.parse().unwrap();
        let exp = x.abs().log10().floor() as i32;
        let half_unit = 0.5 * 10f64.powi(exp - digits as i32 + 1);
        // Allow for the decade boundary and the rounding of `back` itself.
        prop_assert!((back - x).abs() <= half_unit * (1.0 + 1e-9) + 4.0 * f64::EPSILON * x, "{x} -> {s}");
        let figures = s.trim_start_matches('-').split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).collect::<String>();
        let figures = figures.trim_start_matches('0');
        prop_assert!(figures.len() <= digits.max(1) + 1, "{s}");
    }

    #[test]
    fn negation_is_symmetric(x in 1e-6f64..1e6, digits in 1usize..=8) {
        prop_assert_eq!(sig_figs(-x, digits), format!("-{}", sig_figs(x, digits)));
    }
}

#[test]
fn run_in_process_matches_text_layout() {
    let cli = Cli::try_parse_from(["chernoff", "table", "ci", "--gamma", "5.421e-20"]).unwrap();
    let mut buf = Vec::new();
    assert_eq!(run(cli, &mut buf).unwrap(), Exit::Ok);
    let text = String::from_utf8(buf).unwrap();
    let last: Vec<&str> = text.lines().last().unwrap().split_whitespace().collect();
    assert_eq!(last, ["5.421e-20", "0.7933", "0.5156", "0.8013", "0.5176"]);
}

#[test]
fn in_process_infeasible_status() {
    let cli =
        Cli::try_parse_from(["chernoff", "table", "tail", "--gamma", "0.05", "--mu", "1"]).unwrap();
    let mut buf = Vec::new();
    assert_eq!(run(cli, &mut buf).unwrap(), Exit::Infeasible);
    assert!(String::from_utf8(buf).unwrap().contains("infeasible"));
}
