//! Built-in lifetime datasets and plain-text loading.

use std::path::Path;

use crate::error::{Error, Result};
use crate::estimation::Sample;

/// Survival times (46 patients) from a melanoma study of the Central
/// Oncology Group, as listed by Ahmad (1999).
const MELANOMA_46: [f64; 46] = [
    13.0, 14.0, 19.0, 19.0, 20.0, 21.0, 23.0, 23.0, 25.0, 26.0, 26.0, 27.0, 27.0, 31.0, 32.0, 34.0, 34.0, 37.0, 38.0,
    38.0, 46.0, 46.0, 50.0, 53.0, 54.0, 57.0, 58.0, 59.0, 60.0, 65.0, 65.0, 66.0, 70.0, 85.0, 90.0, 98.0, 102.0, 103.0,
    110.0, 118.0, 124.0, 130.0, 136.0, 138.0, 141.0, 234.0,
];

/// Service times of a single component, Table 1 of Langseth and Lindqvist
/// (2005).
const SERVICE_86: [f64; 86] = [
    220.0, 233.0, 234.0, 240.0, 265.0, 270.0, 273.0, 279.0, 285.0, 287.0, 294.0, 295.0, 300.0, 325.0, 328.0, 333.0,
    365.0, 368.0, 369.0, 381.0, 417.0, 418.0, 429.0, 460.0, 470.0, 474.0, 475.0, 476.0, 508.0, 522.0, 523.0, 535.0,
    542.0, 570.0, 580.0, 604.0, 612.0, 613.0, 614.0, 615.0, 634.0, 636.0, 637.0, 638.0, 651.0, 657.0, 660.0, 666.0,
    668.0, 680.0, 681.0, 684.0, 691.0, 693.0, 705.0, 717.0, 834.0, 837.0, 841.0, 843.0, 845.0, 875.0, 972.0, 1037.0,
    1084.0, 1091.0, 1109.0, 1117.0, 1197.0, 1258.0, 1269.0, 1297.0, 1309.0, 1322.0, 1346.0, 1349.0, 1359.0, 1363.0,
    1448.0, 1476.0, 1481.0, 1557.0, 1606.0, 1610.0, 1642.0, 1659.0,
];

pub const BUILTIN_NAMES: [&str; 2] = ["melanoma_46", "service_86"];

#[derive(Debug, Clone, PartialEq)]
pub struct NamedDataset {
    pub name: String,
    pub sample: Sample,
    pub source: String,
}

pub fn builtin(name: &str) -> Result<NamedDataset> {
    let (values, source): (&[f64], &str) = match name {
        "melanoma_46" => (
            &MELANOMA_46,
            "Central Oncology Group melanoma survival times, via Ahmad (1999)",
        ),
        "service_86" => (
            &SERVICE_86,
            "component service times, Langseth and Lindqvist (2005), Table 1",
        ),
        other => {
            return Err(Error::Unknown {
                kind: "dataset",
                name: other.to_string(),
            })
        }
    };
    Ok(NamedDataset {
        name: name.to_string(),
        sample: Sample::new(values.to_vec())?,
        source: source.to_string(),
    })
}

/// Parses numbers separated by whitespace, commas or semicolons.
///
/// With `skip_header`, a first nonblank line that does not parse as numbers
/// is treated as a column header and ignored.
pub fn parse_str(text: &str, skip_header: bool) -> Result<Sample> {
    let mut values = Vec::new();
    let mut seen_content = false;
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line
            .split(|ch: char| ch.is_whitespace() || ch == ',' || ch == ';')
            .filter(|tok| !tok.is_empty())
            .collect();
        if tokens.is_empty() {
            continue;
        }
        let first_line = !seen_content;
        seen_content = true;
        let parsed: std::result::Result<Vec<f64>, &str> =
            tokens.iter().map(|tok| tok.parse::<f64>().map_err(|_| *tok)).collect();
        match parsed {
            Ok(vals) => values.extend(vals),
            Err(_) if skip_header && first_line => continue,
            Err(token) => {
                return Err(Error::Parse {
                    line: idx + 1,
                    token: token.to_string(),
                })
            }
        }
    }
    Sample::new(values)
}

/// Reads a dataset file; `.csv` files may carry a one-line header.
pub fn load(path: impl AsRef<Path>) -> Result<NamedDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let is_csv = path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    let sample = parse_str(&text, is_csv)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "data".to_string());
    Ok(NamedDataset {
        name,
        sample,
        source: path.display().to_string(),
    })
}

/// One value per line, shortest round-trip representation.
pub fn to_text(sample: &Sample) -> String {
    let mut out = String::with_capacity(sample.len() * 8);
    for v in sample.values() {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_shapes_and_checksums() {
        let m = builtin("melanoma_46").unwrap();
        let v = m.sample.values();
        assert_eq!((v.len(), v[0], v[45]), (46, 13.0, 234.0));
        assert_eq!(v.iter().sum::<f64>(), 2885.0);

        let s = builtin("service_86").unwrap();
        let v = s.sample.values();
        assert_eq!((v.len(), v[0], v[85]), (86, 220.0, 1659.0));
        assert_eq!(v.iter().sum::<f64>(), 64132.0);
    }

    #[test]
    fn listings_are_already_sorted() {
        assert!(MELANOMA_46.windows(2).all(|w| w[0] <= w[1]));
        assert!(SERVICE_86.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn melanoma_keeps_duplicates() {
        let m = builtin("melanoma_46").unwrap();
        assert_eq!(m.sample.values().iter().filter(|&&x| x == 19.0).count(), 2);
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(builtin("iris"), Err(Error::Unknown { .. })));
    }

    #[test]
    fn parse_mixed_separators() {
        let s = parse_str("3 1\n2, 5;4\n\n# trailing comment\n", false).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn parse_errors_name_line_and_token() {
        let err = parse_str("1 2\n3 abc\n", false).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                token: "abc".into()
            }
        );
        assert!(matches!(parse_str("5", false), Err(Error::Validation(_))));
        assert!(matches!(parse_str("1 2 0", false), Err(Error::Validation(_))));
        assert!(matches!(parse_str("1 2 -4", false), Err(Error::Validation(_))));
    }

    #[test]
    fn header_only_skipped_when_allowed() {
        assert!(parse_str("time\n1\n2\n3\n", false).is_err());
        let s = parse_str("time\n1\n2\n3\n", true).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
        assert!(parse_str("1\ntime\n2\n3\n", true).is_err());
    }

    #[test]
    fn text_round_trip() {
        for name in BUILTIN_NAMES {
            let d = builtin(name).unwrap();
            let back = parse_str(&to_text(&d.sample), false).unwrap();
            assert_eq!(back, d.sample);
        }
    }
}
