use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use csv::{ReaderBuilder, Trim};

use super::Dataset;
use crate::error::{Error, Result};

/// Which CSV column holds ground-truth labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruthColumn {
    First,
    Last,
    Index(usize),
}

impl TruthColumn {
    fn resolve(self, width: usize) -> Result<usize> {
        match self {
            TruthColumn::First => Ok(0),
            TruthColumn::Last => Ok(width - 1),
            TruthColumn::Index(i) if i < width => Ok(i),
            TruthColumn::Index(i) => Err(Error::TruthColumnOutOfRange { index: i, width }),
        }
    }
}

impl FromStr for TruthColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "first" => Ok(TruthColumn::First),
            "last" => Ok(TruthColumn::Last),
            other => other.parse::<usize>().map(TruthColumn::Index).map_err(|_| Error::TruthSelector(s.to_string())),
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>, truth: Option<TruthColumn>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_csv(file, truth)
}

fn parse_cell(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses comma-separated numeric rows.
///
/// A first row with any unparseable feature cell is taken to be a header.
/// Truth cells may hold arbitrary text; distinct values are mapped to
/// `0..k` in order of first appearance, except the literal `-1` which is
/// kept as the noise label.
pub fn parse_csv<R: Read>(reader: R, truth: Option<TruthColumn>) -> Result<Dataset> {
    let mut rdr = ReaderBuilder::new().has_headers(false).flexible(true).trim(Trim::All).from_reader(reader);

    let mut width = None;
    let mut truth_col = None;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut label_ids: HashMap<String, i64> = HashMap::new();

    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let first = width.is_none();
        let w = *width.get_or_insert(record.len());
        if first {
            if let Some(sel) = truth {
                if w < 2 {
                    return Err(Error::TruthColumnOutOfRange {
                        index: match sel {
                            TruthColumn::Index(i) => i,
                            _ => 0,
                        },
                        width: w,
                    });
                }
                truth_col = Some(sel.resolve(w)?);
            }
            let is_header =
                record.iter().enumerate().any(|(c, cell)| Some(c) != truth_col && parse_cell(cell).is_none());
            if is_header {
                continue;
            }
        }
        if record.len() != w {
            return Err(Error::Ragged { row: line + 1, expected: w, found: record.len() });
        }
        for (c, cell) in record.iter().enumerate() {
            if Some(c) == truth_col {
                let id = if cell == "-1" {
                    -1
                } else {
                    let next = label_ids.len() as i64;
                    *label_ids.entry(cell.to_string()).or_insert(next)
                };
                labels.push(id);
            } else {
                let v = parse_cell(cell).ok_or_else(|| Error::Parse {
                    row: line + 1,
                    column: c,
                    cell: cell.to_string(),
                })?;
                points.push(v);
            }
        }
    }

    let w = width.ok_or(Error::Empty)?;
    let dim = if truth_col.is_some() { w - 1 } else { w };
    if points.is_empty() {
        return Err(Error::Empty);
    }
    Dataset::new(points, dim, truth_col.map(|_| labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_numeric() {
        let d = parse_csv("1,2\n3,4\n5,6\n".as_bytes(), None).unwrap();
        assert_eq!((d.n(), d.dim()), (3, 2));
        assert!(d.truth().is_none());
        assert_eq!(d.row(2), &[5.0, 6.0]);
    }

    #[test]
    fn header_is_skipped() {
        let d = parse_csv("x,y\n1,2\n3,4\n".as_bytes(), None).unwrap();
        assert_eq!(d.n(), 2);
    }

    #[test]
    fn truth_column_text_labels() {
        let src = "a,b,class\n1,2,dog\n3,4,cat\n5,6,dog\n7,8,-1\n";
        let d = parse_csv(src.as_bytes(), Some(TruthColumn::Last)).unwrap();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.truth(), Some(&[0, 1, 0, -1][..]));

        let d = parse_csv("7,1,2\n9,3,4\n".as_bytes(), Some(TruthColumn::First)).unwrap();
        assert_eq!(d.truth(), Some(&[0, 1][..]));
        assert_eq!(d.row(1), &[3.0, 4.0]);

        let d = parse_csv("1,5,2\n3,5,4\n".as_bytes(), Some(TruthColumn::Index(1))).unwrap();
        assert_eq!(d.truth(), Some(&[0, 0][..]));
        assert_eq!(d.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_csv("".as_bytes(), None), Err(Error::Empty)));
        assert!(matches!(parse_csv("a,b\n".as_bytes(), None), Err(Error::Empty)));
        assert!(matches!(parse_csv("1,2\n3\n".as_bytes(), None), Err(Error::Ragged { row: 2, expected: 2, found: 1 })));
        assert!(matches!(parse_csv("1,2\n3,zz\n".as_bytes(), None), Err(Error::Parse { row: 2, column: 1, .. })));
        assert!(matches!(
            parse_csv("1,2\n".as_bytes(), Some(TruthColumn::Index(5))),
            Err(Error::TruthColumnOutOfRange { index: 5, width: 2 })
        ));
        // a lone non-finite first row reads as a header
        assert!(matches!(parse_csv("1,nan\n".as_bytes(), None), Err(Error::Empty)));
        assert!(matches!(parse_csv("1,2\n3,inf\n".as_bytes(), None), Err(Error::Parse { .. })));
    }

    #[test]
    fn selector_syntax() {
        assert_eq!("last".parse::<TruthColumn>().unwrap(), TruthColumn::Last);
        assert_eq!("first".parse::<TruthColumn>().unwrap(), TruthColumn::First);
        assert_eq!("3".parse::<TruthColumn>().unwrap(), TruthColumn::Index(3));
        assert!("-2".parse::<TruthColumn>().is_err());
        assert!("middle".parse::<TruthColumn>().is_err());
    }

    #[test]
    fn iris_file() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/iris.csv");
        let d = load_csv(path, Some(TruthColumn::Last)).unwrap();
        assert_eq!((d.n(), d.dim()), (150, 4));
        let mut classes: Vec<i64> = d.truth().unwrap().to_vec();
        classes.sort_unstable();
        classes.dedup();
        assert_eq!(classes, vec![0, 1, 2]);
    }
}
