use alloc::vec::Vec;

use crate::domains::ConvexDomain;
use crate::error::{Error, Result};
use crate::metric::{distance_with, DistanceInterval, DistanceOptions};
use crate::point::CPoint;

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceRow {
    pub n: u64,
    pub pair_index: usize,
    pub k_n: DistanceInterval,
    pub k_target: DistanceInterval,
    /// `|K_n - K|` between interval midpoints.
    pub gap: f64,
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// `(n, max gap over pairs)` in the order given.
    pub max_gap: Vec<(u64, f64)>,
    /// Whether the max gaps strictly decrease along the list.
    pub decreasing: bool,
}

/// Gaps `|K_{D_n}(x, y) - K_D(x, y)|` over test pairs for each listed `D_n`.
pub fn convergence_check(
    domains: &[(u64, ConvexDomain)],
    target: &ConvexDomain,
    pairs: &[(CPoint, CPoint)],
    opts: &DistanceOptions,
) -> Result<ConvergenceTable> {
    let mut targets = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        targets.push(distance_with(target, x, y, opts)?);
    }
    let mut rows = Vec::new();
    let mut max_gap = Vec::new();
    for (n, dn) in domains {
        let mut worst = 0.0_f64;
        for (i, (x, y)) in pairs.iter().enumerate() {
            if !(dn.contains(x)? && dn.contains(y)?) {
                return Err(Error::PairOutside { n: *n, pair: i });
            }
            let k_n = distance_with(dn, x, y, opts)?;
            let gap = (k_n.mid() - targets[i].mid()).abs();
            worst = worst.max(gap);
            rows.push(ConvergenceRow { n: *n, pair_index: i, k_n, k_target: targets[i].clone(), gap });
        }
        max_gap.push((*n, worst));
    }
    let decreasing = max_gap.windows(2).all(|w| w[1].1 < w[0].1);
    Ok(ConvergenceTable { rows, max_gap, decreasing })
}
