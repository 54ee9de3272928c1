#![allow(dead_code)]

use std::fs;
use std::path::Path;

use mefb_core::synthetic::exposure_pair;
use mefb_core::ColorImage;

/// Writes `input/<id>/A.png` and `B.png` from a synthetic exposure pair.
pub fn write_pair(root: &Path, id: &str, size: usize, seed: u64) -> (ColorImage, ColorImage) {
    let dir = root.join("input").join(id);
    fs::create_dir_all(&dir).unwrap();
    let (a, b) = exposure_pair(size, size, seed);
    a.save_png(dir.join("A.png")).unwrap();
    b.save_png(dir.join("B.png")).unwrap();
    (a, b)
}

pub fn write_fused(root: &Path, algorithm: &str, pair: &str, img: &ColorImage) {
    let dir = root.join("fused").join(algorithm);
    fs::create_dir_all(&dir).unwrap();
    img.save_png(dir.join(format!("{pair}.png"))).unwrap();
}

/// Dataset of `n` pairs named `p0..` with fused images for two algorithms:
/// `copy_a` (the under-exposed source) and `mean` (pixel average).
pub fn fixture(root: &Path, n: usize, size: usize) {
    for i in 0..n {
        let id = format!("p{i}");
        let (a, b) = write_pair(root, &id, size, 100 + i as u64);
        write_fused(root, "copy_a", &id, &a);
        let mean: Vec<u8> = a
            .data()
            .iter()
            .zip(b.data())
            .map(|(&x, &y)| ((x as u16 + y as u16) / 2) as u8)
            .collect();
        write_fused(root, "mean", &id, &ColorImage::new(size, size, mean).unwrap());
    }
}

use mefb_core::Orientation;
use mefb_harness::{Cell, MetricInfo, MissingReason, ScoreMatrix};
use rand::Rng;

/// Random matrix over coarse values (frequent ties) with ~15% missing cells.
pub fn random_matrix(rng: &mut impl Rng, algs: usize, pairs: usize, metrics: usize) -> ScoreMatrix {
    let infos = (0..metrics)
        .map(|m| MetricInfo {
            name: format!("M{m}"),
            orientation: if rng.gen_bool(0.5) {
                Orientation::HigherBetter
            } else {
                Orientation::LowerBetter
            },
        })
        .collect();
    let cells = (0..algs * pairs * metrics)
        .map(|_| {
            if rng.gen_bool(0.15) {
                Cell::Missing(MissingReason::Degenerate("injected".into()))
            } else {
                Cell::Value(rng.gen_range(0..4) as f64 * 0.5)
            }
        })
        .collect();
    ScoreMatrix::new(
        (0..algs).map(|a| format!("alg{a}")).collect(),
        (0..pairs).map(|p| format!("pair{p}")).collect(),
        infos,
        cells,
    )
    .unwrap()
}

/// Ranking by counting: rank = 1 + number of strictly better averages;
/// award position = number of algorithms better, or tied and listed earlier.
pub struct OracleRanking {
    pub averages: Vec<Vec<Option<f64>>>,
    pub ranks: Vec<Vec<Option<usize>>>,
    pub awards: Vec<Vec<Option<usize>>>,
    pub counts: Vec<[usize; 3]>,
}

pub fn oracle_rank(s: &ScoreMatrix) -> OracleRanking {
    let (na, np, nm) = (s.algorithms().len(), s.pairs().len(), s.metrics().len());
    let mut out = OracleRanking {
        averages: vec![],
        ranks: vec![],
        awards: vec![],
        counts: vec![[0; 3]; na],
    };
    for m in 0..nm {
        let avg: Vec<Option<f64>> = (0..na)
            .map(|a| {
                let mut sum = 0.0;
                let mut n = 0;
                for p in 0..np {
                    if let Cell::Value(v) = s.cell(a, p, m) {
                        sum += v;
                        n += 1;
                    }
                }
                (n > 0).then(|| sum / n as f64)
            })
            .collect();
        let better = |x: f64, y: f64| match s.metrics()[m].orientation {
            Orientation::HigherBetter => x > y,
            Orientation::LowerBetter => x < y,
        };
        let mut ranks = vec![None; na];
        let mut awards = vec![None; na];
        for a in 0..na {
            let Some(va) = avg[a] else { continue };
            let mut strictly = 0;
            let mut ahead = 0;
            for o in 0..na {
                let Some(vo) = avg[o] else { continue };
                if better(vo, va) {
                    strictly += 1;
                    ahead += 1;
                } else if vo == va && o < a {
                    ahead += 1;
                }
            }
            ranks[a] = Some(strictly + 1);
            if ahead < 3 {
                awards[a] = Some(ahead);
                out.counts[a][ahead] += 1;
            }
        }
        out.averages.push(avg);
        out.ranks.push(ranks);
        out.awards.push(awards);
    }
    out
}
