//! Samples, query points and result files.
//!
//! CSV is the interchange format: comma separator, '.' decimal, an optional
//! header row (detected when the first row is not numeric), missing entries
//! written as empty fields or "NA".  Floats are serialized with 17
//! significant digits so a write/load round trip is bit exact.

use crate::error::{DepthError, Result};
use std::fmt::Write as _;
use std::path::Path;

/// Immutable n x d sample with ids, an optional missing-value mask and an
/// optional ordinal dissimilarity matrix.
#[derive(Debug, Clone)]
pub struct Dataset {
    n: usize,
    d: usize,
    points: Vec<f64>,
    ids: Vec<String>,
    missing: Option<Vec<bool>>,
    dissimilarity: Option<Vec<f64>>,
}

impl Dataset {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::from_rows_with_ids(rows, ids)
    }

    pub fn from_rows_with_ids(rows: Vec<Vec<f64>>, ids: Vec<String>) -> Result<Self> {
        if rows.is_empty() {
            return Err(DepthError::data("empty dataset"));
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(DepthError::data("zero-dimensional dataset"));
        }
        if ids.len() != rows.len() {
            return Err(DepthError::data("id count does not match row count"));
        }
        let mut points = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(DepthError::Parse {
                    row: i,
                    col: row.len(),
                    msg: format!("inconsistent row width: expected {d}"),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(DepthError::Parse {
                        row: i,
                        col: j,
                        msg: "non-finite value".into(),
                    });
                }
                points.push(v);
            }
        }
        Ok(Dataset {
            n: rows.len(),
            d,
            points,
            ids,
            missing: None,
            dissimilarity: None,
        })
    }

    /// Build with a missing-value mask; masked entries carry a placeholder 0.
    pub fn from_masked_rows(rows: Vec<Vec<Option<f64>>>, ids: Option<Vec<String>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(DepthError::data("empty dataset"));
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(DepthError::data("zero-dimensional dataset"));
        }
        let n = rows.len();
        let ids = ids.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        let mut points = Vec::with_capacity(n * d);
        let mut mask = vec![false; n * d];
        let mut any_missing = false;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(DepthError::Parse {
                    row: i,
                    col: row.len(),
                    msg: format!("inconsistent row width: expected {d}"),
                });
            }
            for (j, v) in row.iter().enumerate() {
                match v {
                    Some(x) if x.is_finite() => points.push(*x),
                    Some(_) => {
                        return Err(DepthError::Parse {
                            row: i,
                            col: j,
                            msg: "non-finite value".into(),
                        })
                    }
                    None => {
                        points.push(0.0);
                        mask[i * d + j] = true;
                        any_missing = true;
                    }
                }
            }
        }
        Ok(Dataset {
            n,
            d,
            points,
            ids,
            missing: any_missing.then_some(mask),
            dissimilarity: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.n).map(move |i| self.row(i))
    }

    pub fn row_refs(&self) -> Vec<&[f64]> {
        self.rows().collect()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn has_missing(&self) -> bool {
        self.missing.is_some()
    }

    pub fn is_missing(&self, i: usize, j: usize) -> bool {
        self.missing
            .as_ref()
            .map(|m| m[i * self.d + j])
            .unwrap_or(false)
    }

    /// Guard for operations that cannot handle masked entries.
    pub fn require_complete(&self, op: &str) -> Result<()> {
        if self.has_missing() {
            Err(DepthError::Unsupported(format!(
                "{op} does not accept datasets with missing values"
            )))
        } else {
            Ok(())
        }
    }

    pub fn dissimilarity(&self) -> Option<&[f64]> {
        self.dissimilarity.as_deref()
    }

    pub fn dissimilarity_at(&self, i: usize, j: usize) -> f64 {
        self.dissimilarity.as_ref().expect("no dissimilarity")[i * self.n + j]
    }

    /// Attach a validated dissimilarity matrix (symmetric, zero diagonal,
    /// positive off-diagonal entries).
    pub fn with_dissimilarity(mut self, matrix: Vec<Vec<f64>>) -> Result<Self> {
        validate_dissimilarity(&matrix, self.n)?;
        let mut flat = Vec::with_capacity(self.n * self.n);
        for row in &matrix {
            flat.extend_from_slice(row);
        }
        self.dissimilarity = Some(flat);
        Ok(self)
    }

    /// Bounding-box diagonal: the scale used for relative tolerances.
    pub fn diameter(&self) -> f64 {
        let mut lo = vec![f64::INFINITY; self.d];
        let mut hi = vec![f64::NEG_INFINITY; self.d];
        for i in 0..self.n {
            for j in 0..self.d {
                if self.is_missing(i, j) {
                    continue;
                }
                let v = self.points[i * self.d + j];
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        lo.iter()
            .zip(&hi)
            .map(|(a, b)| if b > a { (b - a) * (b - a) } else { 0.0 })
            .sum::<f64>()
            .sqrt()
    }

    /// New dataset keeping the selected row indices (order preserved).
    pub fn subset(&self, keep: &[usize]) -> Result<Dataset> {
        let rows: Vec<Vec<f64>> = keep.iter().map(|&i| self.row(i).to_vec()).collect();
        let ids = keep.iter().map(|&i| self.ids[i].clone()).collect();
        let mut out = Dataset::from_rows_with_ids(rows, ids)?;
        if let Some(mask) = &self.missing {
            let mut sub = vec![false; keep.len() * self.d];
            let mut any = false;
            for (r, &i) in keep.iter().enumerate() {
                for j in 0..self.d {
                    sub[r * self.d + j] = mask[i * self.d + j];
                    any |= mask[i * self.d + j];
                }
            }
            out.missing = any.then_some(sub);
        }
        Ok(out)
    }

    /// Replace the point matrix, keeping ids (used by whitening).
    pub fn with_points(&self, rows: Vec<Vec<f64>>) -> Result<Dataset> {
        Dataset::from_rows_with_ids(rows, self.ids.clone())
    }
}

fn validate_dissimilarity(matrix: &[Vec<f64>], n: usize) -> Result<()> {
    if matrix.len() != n {
        return Err(DepthError::data(format!(
            "dissimilarity matrix has {} rows, dataset has {n}",
            matrix.len()
        )));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(DepthError::data("dissimilarity matrix not square"));
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(DepthError::data("non-finite dissimilarity"));
            }
            if v < 0.0 {
                return Err(DepthError::data(format!(
                    "negative dissimilarity at ({i},{j})"
                )));
            }
            if i == j && v != 0.0 {
                return Err(DepthError::data(format!("nonzero diagonal at ({i},{i})")));
            }
            if i != j && v == 0.0 {
                return Err(DepthError::data(format!(
                    "zero dissimilarity between distinct items ({i},{j})"
                )));
            }
            if (v - matrix[j][i]).abs() > 1e-12 {
                return Err(DepthError::data(format!(
                    "asymmetric dissimilarity at ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

/// A query point; coordinates may individually be missing.
#[derive(Debug, Clone)]
pub struct QueryPoint {
    pub coords: Vec<Option<f64>>,
}

impl QueryPoint {
    pub fn complete(coords: Vec<f64>) -> Self {
        QueryPoint {
            coords: coords.into_iter().map(Some).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_complete(&self) -> bool {
        self.coords.iter().all(|c| c.is_some())
    }

    pub fn dense(&self) -> Result<Vec<f64>> {
        self.coords
            .iter()
            .map(|c| c.ok_or_else(|| DepthError::data("query point has missing coordinates")))
            .collect()
    }

    pub fn observed_axes(&self) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|_| i))
            .collect()
    }
}

/// One depth evaluation, as written to result CSV files.
#[derive(Debug, Clone)]
pub struct DepthResult {
    pub point_id: String,
    pub notion: String,
    pub method: String,
    pub value: f64,
    pub elapsed_ns: u64,
}

/// A central region: either a planar convex polygon or a set of sample
/// indices at depth >= alpha.
#[derive(Debug, Clone)]
pub enum Region {
    Polygon2d {
        /// CCW vertex cycle; a single vertex encodes a degenerate region.
        vertices: Vec<[f64; 2]>,
        alpha: f64,
        notion: String,
    },
    MemberSet {
        members: Vec<usize>,
        alpha: f64,
        notion: String,
    },
    Empty {
        alpha: f64,
        notion: String,
    },
}

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_cell(cell: &str, row: usize, col: usize) -> Result<Option<f64>> {
    let t = cell.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("na") || t.eq_ignore_ascii_case("nan") {
        return Ok(None);
    }
    t.parse::<f64>()
        .map(Some)
        .map_err(|_| DepthError::Parse {
            row,
            col,
            msg: format!("non-numeric cell '{t}'"),
        })
}

fn row_is_numeric(cells: &[&str]) -> bool {
    cells.iter().all(|c| {
        let t = c.trim();
        t.is_empty()
            || t.eq_ignore_ascii_case("na")
            || t.eq_ignore_ascii_case("nan")
            || t.parse::<f64>().is_ok()
    })
}

/// Load a sample from CSV or JSON.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| DepthError::io(path, e))?;
    if path.extension().map(|e| e == "json").unwrap_or(false) {
        load_dataset_json(&text)
    } else {
        load_dataset_csv(&text)
    }
}

pub fn load_dataset_csv(text: &str) -> Result<Dataset> {
    let mut rows: Vec<Vec<Option<f64>>> = Vec::new();
    let mut lines = text
        .lines()
        .map(str::trim_end)
        .filter(|l| !l.trim().is_empty())
        .peekable();
    // Header detection: a first row with any non-numeric cell is a header.
    if let Some(first) = lines.peek() {
        let cells: Vec<&str> = first.split(',').collect();
        if !row_is_numeric(&cells) {
            lines.next();
        }
    }
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        let mut row = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            row.push(parse_cell(cell, i, j)?);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DepthError::data("empty dataset"));
    }
    Dataset::from_masked_rows(rows, None)
}

fn load_dataset_json(text: &str) -> Result<Dataset> {
    #[derive(serde::Deserialize)]
    struct JsonDataset {
        points: Vec<Vec<Option<f64>>>,
        #[serde(default)]
        ids: Option<Vec<String>>,
    }
    let parsed: JsonDataset =
        serde_json::from_str(text).map_err(|e| DepthError::data(format!("bad JSON: {e}")))?;
    if parsed.points.is_empty() {
        return Err(DepthError::data("empty dataset"));
    }
    Dataset::from_masked_rows(parsed.points, parsed.ids)
}

/// Load an n x n dissimilarity matrix from CSV (numbers only, no header).
pub fn load_dissimilarity(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path).map_err(|e| DepthError::io(path, e))?;
    let mut matrix: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text
        .lines()
        .map(str::trim_end)
        .filter(|l| !l.trim().is_empty())
        .enumerate()
    {
        let mut row = Vec::new();
        for (j, cell) in line.split(',').enumerate() {
            match parse_cell(cell, i, j)? {
                Some(v) => row.push(v),
                None => {
                    return Err(DepthError::Parse {
                        row: i,
                        col: j,
                        msg: "missing entry in dissimilarity matrix".into(),
                    })
                }
            }
        }
        matrix.push(row);
    }
    let n = matrix.len();
    validate_dissimilarity(&matrix, n)?;
    Ok(matrix)
}

/// Serialize a dataset to CSV (no header; masked entries become NA).
pub fn dataset_to_csv(data: &Dataset) -> String {
    let mut out = String::new();
    for i in 0..data.n() {
        for j in 0..data.dim() {
            if j > 0 {
                out.push(',');
            }
            if data.is_missing(i, j) {
                out.push_str("NA");
            } else {
                let _ = write!(out, "{}", format_float(data.row(i)[j]));
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_dataset(data: &Dataset, path: &Path) -> Result<()> {
    std::fs::write(path, dataset_to_csv(data)).map_err(|e| DepthError::io(path, e))
}

pub fn results_to_csv(results: &[DepthResult]) -> Result<String> {
    if results.is_empty() {
        return Err(DepthError::data("no results to write"));
    }
    let mut out = String::from("point_id,notion,method,value,elapsed_ns\n");
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.point_id,
            r.notion,
            r.method,
            format_float(r.value),
            r.elapsed_ns
        );
    }
    Ok(out)
}

pub fn write_results(results: &[DepthResult], path: &Path) -> Result<()> {
    std::fs::write(path, results_to_csv(results)?).map_err(|e| DepthError::io(path, e))
}

pub fn region_to_csv(region: &Region) -> String {
    let mut out = String::new();
    match region {
        Region::Polygon2d { vertices, .. } => {
            out.push_str("vertex_index,x,y\n");
            for (i, v) in vertices.iter().enumerate() {
                let _ = writeln!(out, "{i},{},{}", format_float(v[0]), format_float(v[1]));
            }
        }
        Region::MemberSet { members, .. } => {
            out.push_str("member_index\n");
            for m in members {
                let _ = writeln!(out, "{m}");
            }
        }
        Region::Empty { .. } => {
            out.push_str("vertex_index,x,y\n");
        }
    }
    out
}

pub fn write_region(region: &Region, path: &Path) -> Result<()> {
    std::fs::write(path, region_to_csv(region)).map_err(|e| DepthError::io(path, e))
}
