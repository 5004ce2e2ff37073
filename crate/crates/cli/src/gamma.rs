//! Parsing of tail probabilities given as decimals or powers.

use std::fmt;

/// A tail probability kept in log form, with the text it was written as.
#[derive(Debug, Clone, PartialEq)]
pub struct Gamma {
    pub label: String,
    pub log_gamma: f64,
}

impl Gamma {
    pub fn from_log(log_gamma: f64) -> Result<Self, String> {
        if log_gamma.is_nan() || log_gamma >= 0.0 || log_gamma.is_infinite() {
            return Err(format!(
                "log γ must be negative and finite, got {log_gamma}"
            ));
        }
        Ok(Gamma {
            label: format_log_label(log_gamma),
            log_gamma,
        })
    }

    pub fn value(&self) -> f64 {
        self.log_gamma.exp()
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn format_log_label(log_gamma: f64) -> String {
    let g = log_gamma.exp();
    if g > 0.0 {
        format!("{g:.3e}")
    } else {
        format!("exp({log_gamma})")
    }
}

/// Parses `"0.05"`, `"5.421e-20"` or `"2^-64"`. Powers stay in log space,
/// so `2^-2000` is accepted even though it underflows a double.
pub fn parse_gamma(text: &str) -> Result<Gamma, String> {
    let text = text.trim();
    let log_gamma = if let Some((base, exp)) = text.split_once('^') {
        let base: f64 = base
            .trim()
            .parse()
            .map_err(|_| format!("bad base in '{text}'"))?;
        let exp: f64 = exp
            .trim()
            .parse()
            .map_err(|_| format!("bad exponent in '{text}'"))?;
        if base.is_nan() || base <= 0.0 || !base.is_finite() || !exp.is_finite() {
            return Err(format!("'{text}' is not a valid power"));
        }
        exp * base.ln()
    } else {
        let g: f64 = text
            .parse()
            .map_err(|_| format!("'{text}' is not a number"))?;
        if !(g > 0.0 && g < 1.0) {
            return Err(format!("γ must lie strictly between 0 and 1, got {text}"));
        }
        g.ln()
    };
    if log_gamma.is_nan() || log_gamma >= 0.0 || log_gamma.is_infinite() {
        return Err(format!("γ must lie strictly between 0 and 1, got {text}"));
    }
    Ok(Gamma {
        label: text.to_string(),
        log_gamma,
    })
}

/// Comma-separated list; an empty string is an empty list.
pub fn parse_gamma_list(text: &str) -> Result<Vec<Gamma>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_gamma).collect()
}
