//! Desk-scale reproduction of the computational studies: per-notion timing
//! curves over (n, d) grids, the random-Tukey-depth accuracy study (exact-hit
//! rates and error quartiles), and the invariance test matrix.  All output is
//! plot-ready CSV.

use crate::approx::ApproxConfig;
use crate::dataset::Dataset;
use crate::depth::halfspace::{halfspace_count, halfspace_count_rotating, random_tukey_counts_all};
use crate::depth::onion::onion_layers;
use crate::error::{DepthError, Result};
use crate::notion::{build_notion, NotionParams};
use crate::rng::RandomSource;
use crate::scatter::moment_scatter;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::time::Instant;

/// Grid and budget of a computational study.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ExperimentPlan {
    #[serde(default = "default_notions")]
    pub notions: Vec<String>,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_queries")]
    pub queries: usize,
    #[serde(default = "default_directions")]
    pub directions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_timeout")]
    pub cell_timeout_secs: f64,
}

/// The nine notions with exact engines timed in the comparison study
/// (skeleton at beta = 2 is the Euclidean lens depth).
fn default_notions() -> Vec<String> {
    [
        "mahalanobis",
        "lp",
        "spatial",
        "zonoid",
        "halfspace",
        "simplicial",
        "oja",
        "skeleton",
        "onion",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn default_dims() -> Vec<usize> {
    vec![2, 3, 4, 5]
}

fn default_sizes() -> Vec<usize> {
    vec![50, 100, 200, 400, 700, 1000]
}

fn default_replicates() -> usize {
    30
}

fn default_queries() -> usize {
    25
}

fn default_directions() -> usize {
    crate::approx::DEFAULT_DIRECTIONS
}

fn default_timeout() -> f64 {
    60.0
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        ExperimentPlan {
            notions: default_notions(),
            dims: default_dims(),
            sizes: default_sizes(),
            replicates: default_replicates(),
            queries: default_queries(),
            directions: default_directions(),
            seed: 0,
            cell_timeout_secs: default_timeout(),
        }
    }
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.notions.is_empty()
            || self.dims.is_empty()
            || self.sizes.is_empty()
            || self.replicates == 0
            || self.queries == 0
            || self.directions == 0
        {
            return Err(DepthError::data("experiment plan fields must be positive"));
        }
        if self.dims.iter().any(|&d| d == 0) {
            return Err(DepthError::data("dims must be >= 1"));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let plan: ExperimentPlan =
            serde_json::from_str(text).map_err(|e| DepthError::data(format!("bad plan: {e}")))?;
        plan.validate()?;
        Ok(plan)
    }
}

pub fn standard_normal_dataset(n: usize, d: usize, rng: &mut RandomSource) -> Dataset {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| rng.gaussian_vec(d)).collect();
    Dataset::from_rows(rows).expect("n >= 1")
}

#[derive(Debug, Clone)]
pub struct TimingRow {
    pub notion: String,
    pub d: usize,
    pub n: usize,
    pub mean_time_ns: f64,
    pub sd_time_ns: f64,
    pub evals: usize,
    pub censored: bool,
}

/// Coarse operation-count estimate for pre-censoring hopeless cells.
fn work_estimate(notion: &str, n: usize, d: usize) -> f64 {
    let nf = n as f64;
    let df = d as f64;
    let choose = |k: usize| -> f64 {
        let mut v = 1.0;
        for i in 0..k {
            v *= (n.saturating_sub(i)) as f64 / (i + 1) as f64;
        }
        v
    };
    match notion {
        "mahalanobis" | "lp" | "spatial" => nf * df + df * df * df,
        "zonoid" => 250.0 * nf * (df + 1.0) * (df + 1.0),
        "halfspace" => match d {
            1 => nf,
            2 => 4.0 * nf * nf,
            _ => choose(d - 1) * (nf * df + df * df * df),
        },
        "simplicial" => match d {
            1 => nf,
            2 => 30.0 * nf * nf.log2().max(1.0),
            _ => choose(d + 1) * (df + 1.0).powi(3),
        },
        "oja" => choose(d) * df * df * df,
        "skeleton" => nf * nf * df,
        "onion" => match d {
            1 | 2 => 40.0 * nf * nf.log2().max(1.0),
            _ => nf * nf * nf * (df + 1.0) * (df + 1.0),
        },
        _ => nf * nf,
    }
}

/// Calibration constant: operations per second assumed by the pre-censor.
const OPS_PER_SEC: f64 = 2e8;

/// Timing study over the plan grid.  Per query point the wall time is the
/// median of three repeats; a cell stops early (censored) when its budget is
/// exhausted, and hopeless cells are censored without running.
pub fn run_timing(plan: &ExperimentPlan) -> Result<Vec<TimingRow>> {
    plan.validate()?;
    let mut out = Vec::new();
    for notion_name in &plan.notions {
        let params = NotionParams::default();
        for &d in &plan.dims {
            for &n in &plan.sizes {
                let row = time_cell(plan, notion_name, &params, d, n)?;
                out.push(row);
            }
        }
    }
    Ok(out)
}

fn time_cell(
    plan: &ExperimentPlan,
    notion_name: &str,
    params: &NotionParams,
    d: usize,
    n: usize,
) -> Result<TimingRow> {
    let budget = plan.cell_timeout_secs;
    let estimate_secs =
        work_estimate(notion_name, n, d) / OPS_PER_SEC * (plan.replicates * plan.queries) as f64;
    let mut row = TimingRow {
        notion: notion_name.to_string(),
        d,
        n,
        mean_time_ns: f64::NAN,
        sd_time_ns: f64::NAN,
        evals: 0,
        censored: false,
    };
    if estimate_secs > 20.0 * budget {
        row.censored = true;
        return Ok(row);
    }
    let notion = build_notion(notion_name, params)?;

    let start = Instant::now();
    let mut samples_ns: Vec<f64> = Vec::new();
    let mut censored = false;
    'reps: for rep in 0..plan.replicates {
        let mut rng = RandomSource::with_stream(
            plan.seed,
            cell_stream(notion_name, d, n, rep as u64),
        );
        let data = standard_normal_dataset(n, d, &mut rng);
        let queries = plan.queries.min(n);
        for q in 0..queries {
            if start.elapsed().as_secs_f64() > budget {
                censored = true;
                break 'reps;
            }
            let y = data.row(q).to_vec();
            // Median of three repeats per query point.
            let mut times = [0.0f64; 3];
            for t in times.iter_mut() {
                let t0 = Instant::now();
                let value = notion.exact(&y, &data)?;
                std::hint::black_box(value.value);
                *t = t0.elapsed().as_nanos() as f64;
            }
            times.sort_by(|a, b| a.partial_cmp(b).unwrap());
            samples_ns.push(times[1]);
        }
    }
    row.evals = samples_ns.len();
    row.censored = censored || samples_ns.len() < plan.replicates * plan.queries.min(n);
    if !samples_ns.is_empty() {
        let mean = samples_ns.iter().sum::<f64>() / samples_ns.len() as f64;
        let var = samples_ns
            .iter()
            .map(|t| (t - mean) * (t - mean))
            .sum::<f64>()
            / samples_ns.len() as f64;
        row.mean_time_ns = mean;
        row.sd_time_ns = var.sqrt();
    }
    Ok(row)
}

fn cell_stream(notion: &str, d: usize, n: usize, rep: u64) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in notion
        .bytes()
        .chain(d.to_le_bytes())
        .chain(n.to_le_bytes())
        .chain(rep.to_le_bytes())
    {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn timing_to_csv(rows: &[TimingRow]) -> String {
    let mut out = String::from("notion,d,n,mean_time_ns,sd_time_ns,evals,censored\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.notion, r.d, r.n, r.mean_time_ns, r.sd_time_ns, r.evals, r.censored
        );
    }
    out
}

#[derive(Debug, Clone)]
pub struct RtdRow {
    pub d: usize,
    pub n: usize,
    pub points: usize,
    pub hit_rate: f64,
    /// Quartiles of the absolute error rtd - exact (present in full mode).
    pub abs_err: Option<[f64; 3]>,
    /// Quartiles of the relative error over points with positive exact depth.
    pub rel_err: Option<[f64; 3]>,
}

/// Accuracy of the random Tukey depth at k directions: for every sample
/// point, compare against the exact depth with respect to the remaining
/// sample.  `hit_only` skips the error quartiles, allowing the exact search
/// to stop as soon as it certifies a value below the RTD bound.
/// `points_cap` restricts each replicate to a random subset of query points
/// (the full sample when None), for grids where the exact reference is
/// expensive.
pub fn run_rtd_accuracy(
    dims: &[usize],
    sizes: &[usize],
    replicates: usize,
    directions: usize,
    seed: u64,
    hit_only: bool,
    points_cap: Option<usize>,
) -> Result<Vec<RtdRow>> {
    let mut out = Vec::new();
    for &d in dims {
        for &n in sizes {
            if n < 2 {
                return Err(DepthError::data("rtd study needs n >= 2"));
            }
            let mut hits = 0usize;
            let mut points = 0usize;
            let mut abs_errs: Vec<f64> = Vec::new();
            let mut rel_errs: Vec<f64> = Vec::new();
            for rep in 0..replicates {
                let mut rng =
                    RandomSource::with_stream(seed, cell_stream("rtd", d, n, rep as u64));
                let data = standard_normal_dataset(n, d, &mut rng);
                let cfg = ApproxConfig::new(
                    directions,
                    seed ^ cell_stream("rtd-dirs", d, n, rep as u64),
                );
                let rtd = random_tukey_counts_all(&data, &cfg)?;
                let rows = data.row_refs();
                let queries: Vec<usize> = match points_cap {
                    None => (0..n).collect(),
                    Some(cap) if cap >= n => (0..n).collect(),
                    Some(cap) => {
                        let mut idx: Vec<usize> = (0..n).collect();
                        rng.shuffle(&mut idx);
                        idx.truncate(cap);
                        idx
                    }
                };
                let results: Vec<(usize, bool, usize)> = queries
                    .par_iter()
                    .map(|&i| {
                        let rest: Vec<&[f64]> = (0..n)
                            .filter(|&j| j != i)
                            .map(|j| rows[j])
                            .collect();
                        let (rtd_count, _) = rtd[i];
                        let (known, count) = exact_count_for_study(
                            data.row(i),
                            &rest,
                            d,
                            hit_only.then_some(rtd_count),
                            seed ^ (i as u64),
                        );
                        (i, known, count)
                    })
                    .collect();
                for &(i, exact_known, exact_count) in results.iter() {
                    let (rtd_count, n_ref) = rtd[i];
                    points += 1;
                    if exact_known {
                        if exact_count == rtd_count {
                            hits += 1;
                        }
                        if !hit_only {
                            let abs =
                                (rtd_count as f64 - exact_count as f64) / n_ref as f64;
                            abs_errs.push(abs);
                            if exact_count > 0 {
                                rel_errs.push(
                                    (rtd_count as f64 - exact_count as f64)
                                        / exact_count as f64,
                                );
                            }
                        }
                    }
                    // else: certified miss (exact < rtd); not a hit.
                }
            }
            out.push(RtdRow {
                d,
                n,
                points,
                hit_rate: hits as f64 / points as f64,
                abs_err: (!hit_only).then(|| quartiles(&mut abs_errs)),
                rel_err: (!hit_only && !rel_errs.is_empty())
                    .then(|| quartiles(&mut rel_errs)),
            });
        }
    }
    Ok(out)
}

/// Exact leave-one-out count.  With a cutoff, returns (false, 0) as soon as
/// the running minimum certifies exact < cutoff; otherwise (true, count).
fn exact_count_for_study(
    y: &[f64],
    rest: &[&[f64]],
    d: usize,
    cutoff: Option<usize>,
    shuffle_seed: u64,
) -> (bool, usize) {
    if d <= 2 {
        let (c, _) = halfspace_count(y, rest);
        return (true, c);
    }
    match halfspace_count_rotating(y, rest, cutoff, shuffle_seed) {
        Some((c, _)) => (true, c),
        None => (false, 0),
    }
}

fn quartiles(values: &mut [f64]) -> [f64; 3] {
    if values.is_empty() {
        return [f64::NAN; 3];
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pick = |q: f64| -> f64 {
        let pos = q * (values.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        if lo == hi {
            values[lo]
        } else {
            values[lo] + (pos - lo as f64) * (values[hi] - values[lo])
        }
    };
    [pick(0.25), pick(0.5), pick(0.75)]
}

pub fn rtd_to_csv(rows: &[RtdRow]) -> String {
    let mut out = String::from(
        "d,n,points,hit_rate,abs_q1,abs_med,abs_q3,rel_q1,rel_med,rel_q3\n",
    );
    for r in rows {
        let abs = r.abs_err.unwrap_or([f64::NAN; 3]);
        let rel = r.rel_err.unwrap_or([f64::NAN; 3]);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.d, r.n, r.points, r.hit_rate, abs[0], abs[1], abs[2], rel[0], rel[1], rel[2]
        );
    }
    out
}

#[derive(Debug, Clone)]
pub struct InvarianceCell {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub max_deviation: f64,
}

#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub cells: Vec<InvarianceCell>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.failures == 0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("cell,trials,failures,max_deviation\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                c.name, c.trials, c.failures, c.max_deviation
            );
        }
        out
    }
}

/// The invariance matrix: exact equality for combinatorial counts, 1e-9
/// relative tolerance for continuous values, whitened upgrades for the
/// rigid-body notions, plus anti-tests confirming that the plain variants
/// do change under volume-changing affine maps.
pub fn run_invariance_suite(seed: u64, trials: usize) -> Result<InvarianceReport> {
    let mut cells = Vec::new();

    // Affine invariance, exact equality of rational values.
    for name in ["halfspace", "simplicial", "onion"] {
        cells.push(affine_cell(name, seed, trials, true, false)?);
    }
    // Affine invariance within tolerance (continuous values).
    for name in ["mahalanobis", "zonoid"] {
        cells.push(affine_cell(name, seed, trials, false, false)?);
    }
    // Whitened upgrades: affine invariance after moment whitening.
    for name in ["oja", "spatial", "lp", "skeleton"] {
        cells.push(affine_cell(name, seed, trials, false, true)?);
    }
    // Rigid-body + uniform scaling for the scale-homogeneous notions.
    for name in ["spatial", "skeleton"] {
        cells.push(rigid_cell(name, seed, trials, true)?);
    }
    // The additive "1 +" in the L_p and Oja definitions breaks value
    // invariance under pure rescaling, so those are checked value-exactly
    // under translation + orthogonal maps and rank-exactly under scaling.
    for name in ["lp", "oja"] {
        cells.push(rigid_cell(name, seed, trials, false)?);
        cells.push(scale_ranking_cell(name, seed, trials)?);
    }
    // Anti-tests: plain metric notions must react to a shear.
    for name in ["oja", "spatial"] {
        cells.push(affine_variant_cell(name, seed, trials)?);
    }
    // Combinatorial invariance: hull vertex moved radially outward.
    cells.push(combinatorial_cell(seed, trials)?);

    Ok(InvarianceReport { cells })
}

fn random_affine(rng: &mut RandomSource, d: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    loop {
        let a: Vec<Vec<f64>> = (0..d).map(|_| rng.gaussian_vec(d)).collect();
        let m = crate::matrix::SquareMatrix::from_rows(&a).unwrap();
        if m.determinant().abs() > 0.2 {
            let b = rng.gaussian_vec(d);
            return (a, b);
        }
    }
}

fn random_rigid(rng: &mut RandomSource, d: usize, with_scale: bool) -> (Vec<Vec<f64>>, Vec<f64>) {
    // Orthogonal matrix from Gram-Schmidt, optionally times a uniform scale.
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < d {
        let mut v = rng.gaussian_vec(d);
        for c in &cols {
            let dot: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let scale = if with_scale {
        0.5 + 1.5 * rng.next_f64()
    } else {
        1.0
    };
    let a: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| scale * cols[j][i]).collect())
        .collect();
    let b = rng.gaussian_vec(d);
    (a, b)
}

fn apply_map(a: &[Vec<f64>], b: &[f64], x: &[f64]) -> Vec<f64> {
    let d = b.len();
    (0..d)
        .map(|i| {
            a[i].iter().zip(x).map(|(c, v)| c * v).sum::<f64>() + b[i]
        })
        .collect()
}

fn notion_for(name: &str, data: &Dataset, whitened: bool) -> Result<Box<dyn crate::notion::DepthNotion>> {
    let mut params = NotionParams::default();
    if whitened {
        params.scatter = Some(std::sync::Arc::new(moment_scatter(data)?));
    }
    build_notion(name, &params)
}

fn affine_cell(
    name: &str,
    seed: u64,
    trials: usize,
    exact: bool,
    whitened: bool,
) -> Result<InvarianceCell> {
    let mut rng = RandomSource::with_stream(seed, cell_stream("affine", 0, 0, 0) ^ hash_name(name));
    let mut failures = 0;
    let mut max_dev = 0.0f64;
    for _ in 0..trials {
        let d = 2 + rng.next_index(2); // 2 or 3
        let n = 12 + rng.next_index(10);
        let data = standard_normal_dataset(n, d, &mut rng);
        let y = rng.gaussian_vec(d);
        let (a, b) = random_affine(&mut rng, d);
        let mapped_rows: Vec<Vec<f64>> = data.rows().map(|r| apply_map(&a, &b, r)).collect();
        let mapped = Dataset::from_rows(mapped_rows)?;
        let y2 = apply_map(&a, &b, &y);

        let n1 = notion_for(name, &data, whitened)?;
        let n2 = notion_for(name, &mapped, whitened)?;
        let v1 = n1.exact(&y, &data)?;
        let v2 = n2.exact(&y2, &mapped)?;
        let dev = (v1.value - v2.value).abs() / v1.value.abs().max(1e-12);
        max_dev = max_dev.max(dev);
        let ok = if exact {
            v1.value == v2.value && v1.raw_layer == v2.raw_layer
        } else {
            dev <= 1e-9
        };
        if !ok {
            failures += 1;
        }
    }
    Ok(InvarianceCell {
        name: format!(
            "affine/{}{}",
            name,
            if whitened { "+whitened" } else { "" }
        ),
        trials,
        failures,
        max_deviation: max_dev,
    })
}

fn rigid_cell(name: &str, seed: u64, trials: usize, with_scale: bool) -> Result<InvarianceCell> {
    let mut rng = RandomSource::with_stream(seed, cell_stream("rigid", 0, 0, 0) ^ hash_name(name));
    let mut failures = 0;
    let mut max_dev = 0.0f64;
    for _ in 0..trials {
        let d = 2 + rng.next_index(2);
        let n = 12 + rng.next_index(10);
        let data = standard_normal_dataset(n, d, &mut rng);
        let y = rng.gaussian_vec(d);
        let (a, b) = random_rigid(&mut rng, d, with_scale);
        let mapped_rows: Vec<Vec<f64>> = data.rows().map(|r| apply_map(&a, &b, r)).collect();
        let mapped = Dataset::from_rows(mapped_rows)?;
        let y2 = apply_map(&a, &b, &y);
        let notion = notion_for(name, &data, false)?;
        let v1 = notion.exact(&y, &data)?;
        let v2 = notion.exact(&y2, &mapped)?;
        let dev = (v1.value - v2.value).abs() / v1.value.abs().max(1e-12);
        max_dev = max_dev.max(dev);
        if dev > 1e-9 {
            failures += 1;
        }
    }
    Ok(InvarianceCell {
        name: format!(
            "{}/{name}",
            if with_scale { "rigid+scale" } else { "rigid" }
        ),
        trials,
        failures,
        max_deviation: max_dev,
    })
}

/// Uniform rescaling changes L_p and Oja values but must preserve the
/// depth ordering of the sample points exactly.
fn scale_ranking_cell(name: &str, seed: u64, trials: usize) -> Result<InvarianceCell> {
    let mut rng =
        RandomSource::with_stream(seed, cell_stream("scalerank", 0, 0, 0) ^ hash_name(name));
    let mut failures = 0;
    for _ in 0..trials {
        let d = 2;
        let n = 12;
        let data = standard_normal_dataset(n, d, &mut rng);
        let lambda = 0.25 + 3.0 * rng.next_f64();
        let scaled_rows: Vec<Vec<f64>> = data
            .rows()
            .map(|r| r.iter().map(|v| lambda * v).collect())
            .collect();
        let scaled = Dataset::from_rows(scaled_rows)?;
        let notion = notion_for(name, &data, false)?;
        let mut before: Vec<(usize, f64)> = Vec::new();
        let mut after: Vec<(usize, f64)> = Vec::new();
        for i in 0..n {
            before.push((i, notion.exact(data.row(i), &data)?.value));
            after.push((i, notion.exact(scaled.row(i), &scaled)?.value));
        }
        let order = |mut v: Vec<(usize, f64)>| -> Vec<usize> {
            v.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
            v.into_iter().map(|(i, _)| i).collect()
        };
        if order(before) != order(after) {
            failures += 1;
        }
    }
    Ok(InvarianceCell {
        name: format!("scale-ranking/{name}"),
        trials,
        failures,
        max_deviation: 0.0,
    })
}

/// Plain metric notions must NOT be invariant under a shear: count trials
/// where the value moved by more than 1e-6.
fn affine_variant_cell(name: &str, seed: u64, trials: usize) -> Result<InvarianceCell> {
    let mut rng =
        RandomSource::with_stream(seed, cell_stream("variant", 0, 0, 0) ^ hash_name(name));
    let mut failures = 0;
    let mut max_dev = 0.0f64;
    for _ in 0..trials {
        let d = 2;
        let n = 15;
        let data = standard_normal_dataset(n, d, &mut rng);
        let y = rng.gaussian_vec(d);
        // A fixed shear with determinant 3.
        let a = vec![vec![1.0, 1.5], vec![0.0, 3.0]];
        let b = vec![0.3, -0.7];
        let mapped_rows: Vec<Vec<f64>> = data.rows().map(|r| apply_map(&a, &b, r)).collect();
        let mapped = Dataset::from_rows(mapped_rows)?;
        let y2 = apply_map(&a, &b, &y);
        let notion = notion_for(name, &data, false)?;
        let v1 = notion.exact(&y, &data)?;
        let v2 = notion.exact(&y2, &mapped)?;
        let dev = (v1.value - v2.value).abs();
        max_dev = max_dev.max(dev);
        if dev <= 1e-6 {
            failures += 1; // suspiciously invariant
        }
    }
    Ok(InvarianceCell {
        name: format!("affine-variant/{name}"),
        trials,
        failures,
        max_deviation: max_dev,
    })
}

/// Move a hull vertex radially outward from the centroid without crossing
/// any line through two other sample points; the halfspace and simplicial
/// counts and onion layer indices of every other point must not change.
fn combinatorial_cell(seed: u64, trials: usize) -> Result<InvarianceCell> {
    let mut rng = RandomSource::with_stream(seed, cell_stream("comb", 0, 0, 0));
    let mut failures = 0;
    for _ in 0..trials {
        let n = 12 + rng.next_index(8);
        let data = standard_normal_dataset(n, 2, &mut rng);
        let rows: Vec<Vec<f64>> = data.rows().map(|r| r.to_vec()).collect();
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let hull = crate::geom::convex_hull_2d(&refs);
        let v = hull.vertices[rng.next_index(hull.vertices.len())];

        let mut centroid = [0.0f64; 2];
        for r in &rows {
            centroid[0] += r[0] / n as f64;
            centroid[1] += r[1] / n as f64;
        }
        let dir = [rows[v][0] - centroid[0], rows[v][1] - centroid[1]];
        let mut step = 2.0;
        let moved = loop {
            let cand = vec![rows[v][0] + step * dir[0], rows[v][1] + step * dir[1]];
            if !segment_crosses_any_line(&rows, v, &cand) {
                break cand;
            }
            step *= 0.5;
            if step < 1e-6 {
                break rows[v].clone();
            }
        };
        let mut moved_rows = rows.clone();
        moved_rows[v] = moved;
        let moved_data = Dataset::from_rows(moved_rows.clone())?;

        let before = per_point_combinatorial(&data)?;
        let after = per_point_combinatorial(&moved_data)?;
        for i in 0..n {
            if i == v {
                continue;
            }
            if before[i] != after[i] {
                failures += 1;
                break;
            }
        }
    }
    Ok(InvarianceCell {
        name: "combinatorial/halfspace+simplicial+onion".to_string(),
        trials,
        failures,
        max_deviation: 0.0,
    })
}

fn segment_crosses_any_line(rows: &[Vec<f64>], v: usize, cand: &[f64]) -> bool {
    let orient = |a: &[f64], b: &[f64], c: &[f64]| -> f64 {
        (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    };
    let n = rows.len();
    for i in 0..n {
        if i == v {
            continue;
        }
        for j in (i + 1)..n {
            if j == v {
                continue;
            }
            let s1 = orient(&rows[i], &rows[j], &rows[v]);
            let s2 = orient(&rows[i], &rows[j], cand);
            if s1 == 0.0 || s2 == 0.0 || (s1 > 0.0) != (s2 > 0.0) {
                return true;
            }
        }
    }
    false
}

/// (halfspace count, simplicial count, onion layer) of each sample point.
fn per_point_combinatorial(data: &Dataset) -> Result<Vec<(usize, u128, usize)>> {
    let rows = data.row_refs();
    let layers = onion_layers(data)?;
    let mut layer_of = vec![0usize; data.n()];
    for (j, layer) in layers.iter().enumerate() {
        for &i in layer {
            layer_of[i] = j + 1;
        }
    }
    (0..data.n())
        .map(|i| {
            let (hc, _) = halfspace_count(rows[i], &rows);
            let (sc, _) = crate::depth::simplicial::simplicial_count(rows[i], &rows)?;
            Ok((hc, sc, layer_of[i]))
        })
        .collect()
}

fn hash_name(name: &str) -> u64 {
    let mut h: u64 = 1469598103934665603;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(1099511628211);
    }
    h
}
