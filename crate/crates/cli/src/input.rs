//! Numeric sample input: one value per line, optionally under a header.

use crate::CliError;

fn is_missing(token: &str) -> bool {
    ["na", "nan", "null"].iter().any(|m| token.eq_ignore_ascii_case(m))
}

/// Parses newline-separated decimals. Blank lines are skipped and a
/// non-numeric first line is taken as a column header. `NA`, `NaN` and
/// `null` are missing values: skipped with `drop_missing`, an error otherwise.
pub fn parse_values(text: &str, drop_missing: bool) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let token = raw.trim();
        let token = token
            .strip_prefix('"')
            .and_then(|t| t.strip_suffix('"'))
            .map_or(token, str::trim);
        if token.is_empty() {
            continue;
        }
        let first = !seen_content;
        seen_content = true;
        if is_missing(token) {
            if drop_missing {
                continue;
            }
            return Err(CliError::Usage(format!(
                "line {line}: missing value '{token}' (use --drop-missing to skip)"
            )));
        }
        match token.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => {
                return Err(CliError::Usage(format!("line {line}: non-finite value '{token}'")));
            }
            Err(_) if first => {}
            Err(_) => {
                return Err(CliError::Usage(format!("line {line}: cannot parse '{token}' as a number")));
            }
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn message(r: Result<Vec<f64>, CliError>) -> String {
        r.unwrap_err().to_string()
    }

    #[test]
    fn plain_lines() {
        assert_eq!(parse_values("1\n2\n\n3.5\n", false).unwrap(), vec![1.0, 2.0, 3.5]);
        assert_eq!(parse_values("1\r\n-2e3\r\n", false).unwrap(), vec![1.0, -2000.0]);
    }

    #[test]
    fn header_only_on_first_content_line() {
        assert_eq!(parse_values("\nvalue\n1\n2\n", false).unwrap(), vec![1.0, 2.0]);
        assert_eq!(parse_values("\"x\"\n\"4\"\n", false).unwrap(), vec![4.0]);
        let err = message(parse_values("1\n2\nabc\n", false));
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn missing_values() {
        assert!(message(parse_values("1\nNA\n2\n", false)).contains("line 2"));
        assert_eq!(parse_values("1\nNA\nnan\nnull\n2\n", true).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn rejects_infinities() {
        assert!(message(parse_values("1\ninf\n", true)).contains("line 2"));
    }
}
