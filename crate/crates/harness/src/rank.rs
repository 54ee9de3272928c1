//! Per-metric averages, ranks and best/second/third counts.
//!
//! Displayed ranks use competition ranking: tied averages share the better
//! rank and the following rank is skipped (1, 2, 2, 4). Awards are exactly
//! one best, one second and one third per metric; among tied averages the
//! algorithm listed first wins the higher award.

use std::cmp::Ordering;

use mefb_core::Orientation;

use crate::error::{HarnessError, Result};
use crate::score::{MetricInfo, ScoreMatrix};

pub const AWARDS: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct MetricRanking {
    pub metric: MetricInfo,
    /// Mean over non-missing cells, `None` when every cell is missing.
    pub averages: Vec<Option<f64>>,
    /// Number of missing cells per algorithm.
    pub missing: Vec<usize>,
    /// Competition rank (1-based) per algorithm.
    pub ranks: Vec<Option<usize>>,
    /// Award position (0 = best, 1 = second, 2 = third) per algorithm.
    pub awards: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankingTable {
    pub algorithms: Vec<String>,
    pub pair_count: usize,
    pub metrics: Vec<MetricRanking>,
    /// (best, second, third) per algorithm.
    pub counts: Vec<[usize; AWARDS]>,
    /// Mean fusion seconds per pair, when timed.
    pub timing: Vec<Option<f64>>,
}

/// Orders `x` before `y` when `x` is the better value.
fn better_first(orientation: Orientation, x: f64, y: f64) -> Ordering {
    match orientation {
        Orientation::HigherBetter => y.total_cmp(&x),
        Orientation::LowerBetter => x.total_cmp(&y),
    }
}

pub fn rank(scores: &ScoreMatrix) -> Result<RankingTable> {
    let na = scores.algorithms().len();
    let np = scores.pairs().len();
    let nm = scores.metrics().len();
    if na == 0 || np == 0 || nm == 0 {
        return Err(HarnessError::EmptyMatrix);
    }
    let mut any_value = false;
    let mut counts = vec![[0usize; AWARDS]; na];
    let mut metrics = Vec::with_capacity(nm);
    for (m, info) in scores.metrics().iter().enumerate() {
        let mut averages = Vec::with_capacity(na);
        let mut missing = Vec::with_capacity(na);
        for a in 0..na {
            let values: Vec<f64> = (0..np).filter_map(|p| scores.cell(a, p, m).value()).collect();
            missing.push(np - values.len());
            averages.push(if values.is_empty() {
                None
            } else {
                any_value = true;
                Some(values.iter().sum::<f64>() / values.len() as f64)
            });
        }
        let mut order: Vec<usize> = (0..na).filter(|&a| averages[a].is_some()).collect();
        order.sort_by(|&x, &y| {
            better_first(info.orientation, averages[x].unwrap(), averages[y].unwrap()).then(x.cmp(&y))
        });
        let mut ranks = vec![None; na];
        let mut awards = vec![None; na];
        for (pos, &a) in order.iter().enumerate() {
            let tied_with_prev = pos > 0 && averages[order[pos - 1]] == averages[a];
            ranks[a] = Some(if tied_with_prev { ranks[order[pos - 1]].unwrap() } else { pos + 1 });
            if pos < AWARDS {
                awards[a] = Some(pos);
                counts[a][pos] += 1;
            }
        }
        metrics.push(MetricRanking {
            metric: info.clone(),
            averages,
            missing,
            ranks,
            awards,
        });
    }
    if !any_value {
        return Err(HarnessError::EmptyMatrix);
    }
    let timing = (0..na)
        .map(|a| {
            let t: Vec<f64> = (0..np).filter_map(|p| scores.timing(a, p)).collect();
            (!t.is_empty()).then(|| t.iter().sum::<f64>() / t.len() as f64)
        })
        .collect();
    Ok(RankingTable {
        algorithms: scores.algorithms().to_vec(),
        pair_count: np,
        metrics,
        counts,
        timing,
    })
}
