//! Statistics for comparing search costs: descriptives, Friedman with the
//! Nemenyi post-hoc, Kruskal-Wallis, Brown-Forsythe variance homogeneity,
//! Cohen's d and ordinary least squares.

pub mod dist;

use serde::Serialize;
use thiserror::Error;

use dist::{chi_square_sf, f_sf, studentized_range_sf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("empty input")]
    EmptyInput,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("pooled standard deviation is zero")]
    ZeroVariance,
    #[error("x values are constant")]
    ConstantX,
}

fn degenerate(msg: impl Into<String>) -> StatsError {
    StatsError::DegenerateInput(msg.into())
}

fn check_finite(values: &[f64]) -> Result<(), StatsError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(degenerate("non-finite value"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Descriptive {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation; 0 when `n == 1`.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Sample variance (n − 1 denominator).
pub fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

pub fn descriptive(values: &[f64]) -> Result<Descriptive, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    check_finite(values)?;
    let n = values.len();
    Ok(Descriptive {
        n,
        mean: mean(values),
        median: median(values),
        std: if n > 1 { variance(values).sqrt() } else { 0.0 },
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// 1-based ranks with ties given their average rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j share rank (i+1 + j) / 2
        let r = (i + 1 + j) as f64 / 2.0;
        for &o in &order[i..j] {
            ranks[o] = r;
        }
        i = j;
    }
    ranks
}

/// Σ (t³ − t) over tie groups.
fn tie_sum(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut total = 0.0;
    let mut i = 0;
    while i < v.len() {
        let mut j = i + 1;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        total += t * t * t - t;
        i = j;
    }
    total
}

/// Subjects × treatments, complete cases only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedMatrix {
    rows: Vec<Vec<f64>>,
    columns: usize,
}

impl PairedMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, StatsError> {
        let columns = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != columns) {
            return Err(degenerate("rows have different lengths"));
        }
        for r in &rows {
            check_finite(r)?;
        }
        Ok(Self { rows, columns })
    }

    pub fn subjects(&self) -> usize {
        self.rows.len()
    }

    pub fn treatments(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    fn check_shape(&self) -> Result<(), StatsError> {
        if self.columns < 2 {
            return Err(degenerate("need at least two treatments"));
        }
        if self.rows.len() < 2 {
            return Err(degenerate("need at least two subjects"));
        }
        Ok(())
    }

    /// Column sums of within-row midranks.
    fn rank_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.columns];
        for row in &self.rows {
            for (s, r) in sums.iter_mut().zip(midranks(row)) {
                *s += r;
            }
        }
        sums
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestReport {
    pub statistic: f64,
    pub p_value: f64,
    /// Cohen's f for Friedman; absent where not defined.
    pub effect_size: Option<f64>,
    pub df: Option<f64>,
    pub df2: Option<f64>,
    /// Subjects (paired tests) or total observations (group tests).
    pub n: usize,
    /// Treatments or groups.
    pub k: usize,
}

/// Friedman's rank test with the tie correction.
///
/// Effect size is Cohen's f from Kendall's W = χ² / (n(k − 1)),
/// f = √(W / (1 − W)); it is absent when W = 1.
pub fn friedman_test(m: &PairedMatrix) -> Result<TestReport, StatsError> {
    m.check_shape()?;
    let n = m.subjects() as f64;
    let k = m.treatments() as f64;
    let sums = m.rank_sums();
    let ties: f64 = m.rows().iter().map(|r| tie_sum(r)).sum();
    let correction = 1.0 - ties / (n * (k * k * k - k));
    let raw =
        12.0 / (n * k * (k + 1.0)) * sums.iter().map(|r| r * r).sum::<f64>() - 3.0 * n * (k + 1.0);
    let statistic = if correction <= 0.0 {
        0.0
    } else {
        (raw / correction).max(0.0)
    };
    let w = statistic / (n * (k - 1.0));
    let effect_size = (w < 1.0).then(|| (w / (1.0 - w)).sqrt());
    Ok(TestReport {
        statistic,
        p_value: chi_square_sf(statistic, k - 1.0),
        effect_size,
        df: Some(k - 1.0),
        df2: None,
        n: m.subjects(),
        k: m.treatments(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NemenyiPair {
    pub a: usize,
    pub b: usize,
    /// Mean rank of `a` minus mean rank of `b`.
    pub mean_rank_diff: f64,
    /// Studentized range statistic `|ΔR̄| / √(k(k+1) / (12n))`.
    pub q: f64,
    pub p_value: f64,
    /// Pooled-standard-deviation Cohen's d of the raw columns.
    pub cohens_d: Option<f64>,
}

/// Nemenyi post-hoc comparisons for every treatment pair `a < b`.
pub fn nemenyi_posthoc(m: &PairedMatrix) -> Result<Vec<NemenyiPair>, StatsError> {
    m.check_shape()?;
    let n = m.subjects() as f64;
    let k = m.treatments();
    let mean_ranks: Vec<f64> = m.rank_sums().into_iter().map(|s| s / n).collect();
    let se = (k as f64 * (k as f64 + 1.0) / (12.0 * n)).sqrt();
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            let diff = mean_ranks[a] - mean_ranks[b];
            let q = diff.abs() / se;
            out.push(NemenyiPair {
                a,
                b,
                mean_rank_diff: diff,
                q,
                p_value: studentized_range_sf(q, k),
                cohens_d: cohens_d(&m.column(a), &m.column(b)).ok(),
            });
        }
    }
    Ok(out)
}

fn check_groups(groups: &[Vec<f64>], min_size: usize) -> Result<(), StatsError> {
    if groups.len() < 2 {
        return Err(degenerate("need at least two groups"));
    }
    if groups.iter().any(|g| g.len() < min_size) {
        return Err(degenerate(format!(
            "every group needs at least {min_size} values"
        )));
    }
    for g in groups {
        check_finite(g)?;
    }
    Ok(())
}

/// Kruskal-Wallis H with the tie correction.
pub fn kruskal_wallis(groups: &[Vec<f64>]) -> Result<TestReport, StatsError> {
    check_groups(groups, 1)?;
    let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
    let total = pooled.len() as f64;
    let ranks = midranks(&pooled);
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        sum += r * r / g.len() as f64;
        offset += g.len();
    }
    let raw = 12.0 / (total * (total + 1.0)) * sum - 3.0 * (total + 1.0);
    let correction = 1.0 - tie_sum(&pooled) / (total * total * total - total);
    let statistic = if correction <= 0.0 {
        0.0
    } else {
        (raw / correction).max(0.0)
    };
    let df = (groups.len() - 1) as f64;
    Ok(TestReport {
        statistic,
        p_value: chi_square_sf(statistic, df),
        effect_size: None,
        df: Some(df),
        df2: None,
        n: pooled.len(),
        k: groups.len(),
    })
}

/// Brown-Forsythe test: one-way ANOVA on absolute deviations from each
/// group's median.
pub fn variance_homogeneity(groups: &[Vec<f64>]) -> Result<TestReport, StatsError> {
    check_groups(groups, 2)?;
    let deviations: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| {
            let med = median(g);
            g.iter().map(|v| (v - med).abs()).collect()
        })
        .collect();
    let total: usize = groups.iter().map(Vec::len).sum();
    let g = groups.len() as f64;
    let grand = deviations.iter().flatten().sum::<f64>() / total as f64;
    let mut between = 0.0;
    let mut within = 0.0;
    for z in &deviations {
        let zm = mean(z);
        between += z.len() as f64 * (zm - grand) * (zm - grand);
        within += z.iter().map(|v| (v - zm) * (v - zm)).sum::<f64>();
    }
    let (d1, d2) = (g - 1.0, total as f64 - g);
    let statistic = if within == 0.0 {
        if between == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (between / d1) / (within / d2)
    };
    Ok(TestReport {
        statistic,
        p_value: f_sf(statistic, d1, d2),
        effect_size: None,
        df: Some(d1),
        df2: Some(d2),
        n: total,
        k: groups.len(),
    })
}

/// `(mean a − mean b) / pooled sample std`.
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(degenerate("both samples need at least two values"));
    }
    check_finite(a)?;
    check_finite(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let pooled = (((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / (na + nb - 2.0)).sqrt();
    if pooled == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((mean(a) - mean(b)) / pooled)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n: usize,
}

/// Ordinary least squares `y = slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit, StatsError> {
    if x.len() != y.len() {
        return Err(degenerate("x and y differ in length"));
    }
    if x.len() < 2 {
        return Err(degenerate("need at least two points"));
    }
    check_finite(x)?;
    check_finite(y)?;
    if x.iter().all(|&v| v == x[0]) {
        return Err(StatsError::ConstantX);
    }
    let (mx, my) = (mean(x), mean(y));
    if y.iter().all(|&v| v == y[0]) {
        return Ok(LinearFit {
            slope: 0.0,
            intercept: y[0],
            r_squared: 1.0,
            n: x.len(),
        });
    }
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let e = b - (slope * a + intercept);
            e * e
        })
        .sum();
    let ss_tot: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    Ok(LinearFit {
        slope,
        intercept,
        r_squared: 1.0 - ss_res / ss_tot,
        n: x.len(),
    })
}
