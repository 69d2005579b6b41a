use std::collections::BTreeMap;

use statrs::function::gamma::ln_gamma;

use crate::{Error, Result};

struct Contingency {
    n: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    /// Nonzero cells `(row, col, count)`.
    cells: Vec<(usize, usize, usize)>,
}

fn dense(labels: &[usize]) -> Vec<usize> {
    let mut ids = BTreeMap::new();
    labels
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(*l).or_insert(next)
        })
        .collect()
}

fn contingency(a: &[usize], b: &[usize]) -> Result<Contingency> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    if a.is_empty() {
        return Err(Error::InvalidParams("labelings must be non-empty".into()));
    }
    let (da, db) = (dense(a), dense(b));
    let mut rows = vec![0; da.iter().max().unwrap() + 1];
    let mut cols = vec![0; db.iter().max().unwrap() + 1];
    let mut table = BTreeMap::new();
    for (&i, &j) in da.iter().zip(&db) {
        rows[i] += 1;
        cols[j] += 1;
        *table.entry((i, j)).or_insert(0) += 1;
    }
    let cells = table.into_iter().map(|((i, j), c)| (i, j, c)).collect();
    Ok(Contingency { n: a.len(), rows, cols, cells })
}

impl Contingency {
    /// The two labelings induce the same partition.
    fn same_partition(&self) -> bool {
        self.cells.len() == self.rows.len() && self.cells.len() == self.cols.len()
    }
}

/// Order-independent sum.
fn sorted_sum(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

fn pairs(x: usize) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

fn entropy(sizes: &[usize], n: usize) -> f64 {
    let n = n as f64;
    -sorted_sum(
        sizes
            .iter()
            .filter(|&&s| s > 0)
            .map(|&s| {
                let p = s as f64 / n;
                p * p.ln()
            })
            .collect(),
    )
}

/// Adjusted Rand index. Identical partitions score 1; otherwise a zero
/// denominator scores 0.
pub fn adjusted_rand(a: &[usize], b: &[usize]) -> Result<f64> {
    let t = contingency(a, b)?;
    if t.same_partition() {
        return Ok(1.0);
    }
    let index = sorted_sum(t.cells.iter().map(|c| pairs(c.2)).collect());
    let sa: f64 = t.rows.iter().map(|&x| pairs(x)).sum();
    let sb: f64 = t.cols.iter().map(|&x| pairs(x)).sum();
    // both sides scaled by the total pair count
    let total = pairs(t.n);
    let denom = 0.5 * (sa + sb) * total - sa * sb;
    if denom == 0.0 || !denom.is_finite() {
        return Ok(0.0);
    }
    Ok((index * total - sa * sb) / denom)
}

/// Homogeneity, completeness and their harmonic mean, in that order.
pub fn homogeneity_completeness_v(truth: &[usize], pred: &[usize]) -> Result<(f64, f64, f64)> {
    let t = contingency(truth, pred)?;
    let n = t.n as f64;
    let h_truth = entropy(&t.rows, t.n);
    let h_pred = entropy(&t.cols, t.n);
    let cond = |given: &[usize], pick: fn(&(usize, usize, usize)) -> usize| {
        -sorted_sum(
            t.cells
                .iter()
                .map(|c| {
                    let nij = c.2 as f64;
                    nij / n * (nij / given[pick(c)] as f64).ln()
                })
                .collect(),
        )
    };
    let h_truth_given_pred = cond(&t.cols, |c| c.1);
    let h_pred_given_truth = cond(&t.rows, |c| c.0);
    let h = if h_truth == 0.0 { 1.0 } else { 1.0 - h_truth_given_pred / h_truth };
    let c = if h_pred == 0.0 { 1.0 } else { 1.0 - h_pred_given_truth / h_pred };
    let v = if h + c == 0.0 { 0.0 } else { 2.0 * h * c / (h + c) };
    Ok((h, c, v))
}

pub fn v_measure(truth: &[usize], pred: &[usize]) -> Result<f64> {
    Ok(homogeneity_completeness_v(truth, pred)?.2)
}

/// Mutual information in nats.
pub fn mutual_info(a: &[usize], b: &[usize]) -> Result<f64> {
    let t = contingency(a, b)?;
    Ok(mi(&t))
}

fn mi(t: &Contingency) -> f64 {
    let n = t.n as f64;
    sorted_sum(
        t.cells
            .iter()
            .map(|&(i, j, c)| {
                let nij = c as f64;
                nij / n * (n * nij / (t.rows[i] as f64 * t.cols[j] as f64)).ln()
            })
            .collect(),
    )
}

fn ln_fact(x: usize) -> f64 {
    ln_gamma(x as f64 + 1.0)
}

/// Expected mutual information under the permutation model with the given
/// cluster sizes.
fn expected_mi(t: &Contingency) -> f64 {
    let n = t.n;
    let nf = n as f64;
    let mut terms = Vec::new();
    for &ai in &t.rows {
        for &bj in &t.cols {
            let (u, v) = (ai.min(bj), ai.max(bj));
            let fixed = ln_fact(u) + ln_fact(v) + ln_fact(n - u) + ln_fact(n - v) - ln_fact(n);
            let lo = (u + v).saturating_sub(n).max(1);
            for nij in lo..=u {
                let x = nij as f64;
                let log_p = fixed - ln_fact(nij) - ln_fact(u - nij) - ln_fact(v - nij) - ln_fact(n + nij - u - v);
                terms.push(x / nf * (nf * x / (u as f64 * v as f64)).ln() * log_p.exp());
            }
        }
    }
    sorted_sum(terms)
}

/// Adjusted mutual information with the arithmetic-mean normalizer and the
/// exact expected mutual information. Identical partitions score 1;
/// otherwise a zero denominator scores 0.
pub fn adjusted_mutual_info(truth: &[usize], pred: &[usize]) -> Result<f64> {
    let t = contingency(truth, pred)?;
    if t.same_partition() {
        return Ok(1.0);
    }
    let mi = mi(&t);
    let emi = expected_mi(&t);
    let mean_h = 0.5 * (entropy(&t.rows, t.n) + entropy(&t.cols, t.n));
    let denom = mean_h - emi;
    if denom == 0.0 || !denom.is_finite() {
        return Ok(0.0);
    }
    Ok((mi - emi) / denom)
}
