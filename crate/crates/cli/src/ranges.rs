//! `a..b` inclusive ranges and comma lists of sample sizes.

use robust_scale::fitting::FitWindow;

/// Parses e.g. `2..20`, `5,10,50` or `2..10,100`. Result is sorted and
/// deduplicated.
pub fn parse_n_list(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse_n(a)?, parse_n(b)?);
                if a > b {
                    return Err(format!("empty range '{part}'"));
                }
                out.extend(a..=b);
            }
            None => out.push(parse_n(part)?),
        }
    }
    if out.is_empty() && !text.trim().is_empty() {
        return Err(format!("no sample sizes in '{text}'"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn parse_window(text: &str) -> Result<FitWindow, String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("expected MIN..MAX, got '{text}'"))?;
    let (a, b) = (parse_n(a)?, parse_n(b)?);
    if a > b {
        return Err(format!("empty window '{text}'"));
    }
    Ok(FitWindow::new(a, b))
}

fn parse_n(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("invalid sample size '{}'", s.trim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_n_list("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_n_list("10,3,3,4..5").unwrap(), vec![3, 4, 5, 10]);
        assert_eq!(parse_n_list("7").unwrap(), vec![7]);
        assert_eq!(parse_n_list("").unwrap(), Vec::<usize>::new());
        assert!(parse_n_list("5..2").is_err());
        assert!(parse_n_list("a..3").is_err());
        assert!(parse_n_list("1.5").is_err());
        assert!(parse_n_list(",").is_err());
    }

    #[test]
    fn windows() {
        assert_eq!(parse_window("101..1000").unwrap(), FitWindow::new(101, 1000));
        assert!(parse_window("1000").is_err());
        assert!(parse_window("9..3").is_err());
    }
}
