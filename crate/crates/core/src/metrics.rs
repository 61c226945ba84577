// SPDX-License-Identifier: Apache-2.0

//! Agreement between two clusterings: NMI, AMI and ARI.
//!
//! Nodes a clustering leaves unassigned are scored as singletons. Entropies
//! use natural logs and NMI/AMI normalize by the arithmetic mean of the two
//! entropies.

use std::collections::HashMap;

use serde::Serialize;

use crate::cluster::Clustering;
use crate::error::{Error, Result};

/// Normalization used by [`nmi`] and [`ami`], reported alongside scores.
pub const NORMALIZATION: &str = "arithmetic";

/// Sparse contingency table of two labelings of the same items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTable {
    /// Nonzero cells as `(row, column, count)`.
    pub cells: Vec<(usize, usize, u64)>,
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
    pub total: u64,
}

impl ContingencyTable {
    pub fn from_labels(u: &[u32], v: &[u32]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::InvalidArgument(format!(
                "labelings cover {} and {} items",
                u.len(),
                v.len()
            )));
        }
        let mut row_of = HashMap::new();
        let mut col_of = HashMap::new();
        let mut counts: HashMap<(usize, usize), u64> = HashMap::new();
        for (&a, &b) in u.iter().zip(v) {
            let next = row_of.len();
            let i = *row_of.entry(a).or_insert(next);
            let next = col_of.len();
            let j = *col_of.entry(b).or_insert(next);
            *counts.entry((i, j)).or_default() += 1;
        }
        let mut cells: Vec<_> = counts.into_iter().map(|((i, j), c)| (i, j, c)).collect();
        cells.sort_unstable();
        Self::from_cells(row_of.len(), col_of.len(), cells)
    }

    /// Table from explicit cell counts; all-zero rows and columns are
    /// dropped.
    pub fn from_dense(matrix: &[Vec<u64>]) -> Result<Self> {
        let ncols = matrix.first().map_or(0, |r| r.len());
        if matrix.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidArgument("ragged contingency matrix".into()));
        }
        let cells = matrix
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().filter(|(_, &c)| c > 0).map(move |(j, &c)| (i, j, c)))
            .collect();
        let t = Self::from_cells(matrix.len(), ncols, cells)?;
        Ok(t.compact())
    }

    fn from_cells(nrows: usize, ncols: usize, cells: Vec<(usize, usize, u64)>) -> Result<Self> {
        let mut rows = vec![0; nrows];
        let mut cols = vec![0; ncols];
        for &(i, j, c) in &cells {
            rows[i] += c;
            cols[j] += c;
        }
        let total = rows.iter().sum();
        Ok(ContingencyTable {
            cells,
            rows,
            cols,
            total,
        })
    }

    fn compact(self) -> Self {
        let remap = |m: &[u64]| {
            let mut next = 0;
            m.iter()
                .map(|&x| {
                    let id = next;
                    if x > 0 {
                        next += 1;
                    }
                    id
                })
                .collect::<Vec<_>>()
        };
        let (ri, ci) = (remap(&self.rows), remap(&self.cols));
        let cells = self.cells.iter().map(|&(i, j, c)| (ri[i], ci[j], c)).collect();
        let nr = self.rows.iter().filter(|&&x| x > 0).count();
        let nc = self.cols.iter().filter(|&&x| x > 0).count();
        Self::from_cells(nr, nc, cells).expect("cells in range")
    }

    /// Swap the roles of the two labelings.
    pub fn transposed(&self) -> Self {
        ContingencyTable {
            cells: self.cells.iter().map(|&(i, j, c)| (j, i, c)).collect(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            total: self.total,
        }
    }
}

fn entropy(marginal: &[u64], total: u64) -> f64 {
    let n = total as f64;
    -marginal
        .iter()
        .filter(|&&a| a > 0)
        .map(|&a| {
            let p = a as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

fn mutual_information(t: &ContingencyTable) -> f64 {
    let n = t.total as f64;
    let mi: f64 = t
        .cells
        .iter()
        .map(|&(i, j, c)| {
            let c = c as f64;
            c / n * (n * c / (t.rows[i] as f64 * t.cols[j] as f64)).ln()
        })
        .sum();
    mi.max(0.0)
}

/// Expected mutual information of two labelings with the table's marginals
/// under random permutation.
pub fn expected_mutual_information(t: &ContingencyTable) -> f64 {
    let n = t.total as usize;
    let nf = n as f64;
    let mut lnfact = vec![0.0f64; n + 1];
    for k in 1..=n {
        lnfact[k] = lnfact[k - 1] + (k as f64).ln();
    }
    let mut emi = 0.0;
    for &a in &t.rows {
        let a = a as usize;
        for &b in &t.cols {
            let b = b as usize;
            let lo = (a + b).saturating_sub(n).max(1);
            let hi = a.min(b);
            let fixed = lnfact[a] + lnfact[b] + lnfact[n - a] + lnfact[n - b] - lnfact[n];
            for k in lo..=hi {
                let kf = k as f64;
                let ln_p = fixed
                    - lnfact[k]
                    - lnfact[a - k]
                    - lnfact[b - k]
                    - lnfact[n + k - a - b];
                emi += kf / nf * (nf * kf / (a as f64 * b as f64)).ln() * ln_p.exp();
            }
        }
    }
    emi
}

fn tables(u: &Clustering, v: &Clustering) -> Result<ContingencyTable> {
    if u.node_count() != v.node_count() {
        return Err(Error::InvalidArgument(format!(
            "clusterings cover {} and {} nodes",
            u.node_count(),
            v.node_count()
        )));
    }
    if u.node_count() == 0 {
        return Err(Error::InvalidArgument("clusterings over no nodes".into()));
    }
    ContingencyTable::from_labels(&u.materialized_labels(), &v.materialized_labels())
}

/// The labelings are the same partition up to renaming (this covers the
/// 0/0 cases: both single-cluster, or both all singletons).
fn same_partition(t: &ContingencyTable) -> bool {
    t.cells.len() == t.rows.len() && t.cells.len() == t.cols.len()
}

pub fn nmi_table(t: &ContingencyTable) -> f64 {
    if same_partition(t) {
        return 1.0;
    }
    let mi = mutual_information(t);
    if mi == 0.0 {
        return 0.0;
    }
    let norm = 0.5 * (entropy(&t.rows, t.total) + entropy(&t.cols, t.total));
    (mi / norm.max(f64::EPSILON)).min(1.0)
}

pub fn ami_table(t: &ContingencyTable) -> f64 {
    if same_partition(t) {
        return 1.0;
    }
    let mi = mutual_information(t);
    let emi = expected_mutual_information(t);
    let norm = 0.5 * (entropy(&t.rows, t.total) + entropy(&t.cols, t.total));
    let mut den = norm - emi;
    den = if den < 0.0 { den.min(-f64::EPSILON) } else { den.max(f64::EPSILON) };
    (mi - emi) / den
}

pub fn ari_table(t: &ContingencyTable) -> Result<f64> {
    if t.total < 2 {
        return Err(Error::InvalidArgument("ARI needs at least two items".into()));
    }
    // ordered pair counts
    let n = t.total as i128;
    let sq: i128 = t.cells.iter().map(|&(_, _, c)| (c as i128) * (c as i128)).sum();
    let rows_sq: i128 = t.rows.iter().map(|&a| (a as i128) * (a as i128)).sum();
    let cols_sq: i128 = t.cols.iter().map(|&b| (b as i128) * (b as i128)).sum();
    let tp = sq - n;
    let fp = cols_sq - sq;
    let fn_ = rows_sq - sq;
    let tn = n * n - fp - fn_ - sq;
    if fp == 0 && fn_ == 0 {
        return Ok(1.0);
    }
    let num = 2.0 * ((tp * tn - fn_ * fp) as f64);
    let den = ((tp + fn_) * (fn_ + tn) + (tp + fp) * (fp + tn)) as f64;
    Ok(num / den)
}

/// Normalized mutual information.
pub fn nmi(u: &Clustering, v: &Clustering) -> Result<f64> {
    Ok(nmi_table(&tables(u, v)?))
}

/// Adjusted mutual information.
pub fn ami(u: &Clustering, v: &Clustering) -> Result<f64> {
    Ok(ami_table(&tables(u, v)?))
}

/// Adjusted Rand index.
pub fn ari(u: &Clustering, v: &Clustering) -> Result<f64> {
    ari_table(&tables(u, v)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Agreement {
    pub nmi: f64,
    pub ami: f64,
    pub ari: f64,
    pub n_nodes: usize,
    pub normalization: &'static str,
}

/// All three scores from one contingency table.
pub fn agreement(u: &Clustering, v: &Clustering) -> Result<Agreement> {
    let t = tables(u, v)?;
    Ok(Agreement {
        nmi: nmi_table(&t),
        ami: ami_table(&t),
        ari: ari_table(&t)?,
        n_nodes: u.node_count(),
        normalization: NORMALIZATION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeSet;

    fn clustering(n: usize, sets: &[&[u32]]) -> Clustering {
        Clustering::from_sets(n, sets.iter().map(|s| NodeSet::from_unsorted(s.to_vec())).collect())
            .unwrap()
    }

    #[test]
    fn crossed_four_nodes() {
        let u = clustering(4, &[&[0, 1], &[2, 3]]);
        let v = clustering(4, &[&[0, 2], &[1, 3]]);
        assert_eq!(nmi(&u, &v).unwrap(), 0.0);
        // sum C(n_ij,2) = 0, expected index 2/3, max index 2
        assert_eq!(ari(&u, &v).unwrap(), -0.5);
    }

    #[test]
    fn identity_and_trivial() {
        let u = clustering(6, &[&[0, 1, 2], &[3, 4]]);
        assert_eq!(nmi(&u, &u).unwrap(), 1.0);
        assert_eq!(ami(&u, &u).unwrap(), 1.0);
        assert_eq!(ari(&u, &u).unwrap(), 1.0);
        let one = clustering(6, &[&[0, 1, 2, 3, 4, 5]]);
        let singles = Clustering::new(6);
        assert_eq!(nmi(&one, &singles).unwrap(), 0.0);
        assert_eq!(ari(&one, &singles).unwrap(), 0.0);
        assert_eq!(ami(&one, &singles).unwrap(), 0.0);
        assert_eq!(nmi(&singles, &singles).unwrap(), 1.0);
        assert_eq!(ami(&one, &one).unwrap(), 1.0);
    }

    #[test]
    fn errors() {
        assert!(nmi(&Clustering::new(3), &Clustering::new(4)).is_err());
        assert!(ari(&Clustering::new(1), &Clustering::new(1)).is_err());
        assert!(nmi(&Clustering::new(0), &Clustering::new(0)).is_err());
    }

    #[test]
    fn dense_tables_drop_empty_margins() {
        let t = ContingencyTable::from_dense(&[vec![2, 0, 0], vec![0, 0, 3]]).unwrap();
        assert_eq!((t.rows.len(), t.cols.len(), t.total), (2, 2, 5));
        assert_eq!(nmi_table(&t), 1.0);
    }

    #[test]
    fn emi_matches_small_enumeration() {
        // all 4!/(2!2!) = 6 arrangements of labels {0,0,1,1} against a
        // fixed {0,0,1,1}: MI averages to the exact EMI
        let fixed = [0u32, 0, 1, 1];
        let perms: [[u32; 4]; 6] = [
            [0, 0, 1, 1],
            [0, 1, 0, 1],
            [0, 1, 1, 0],
            [1, 0, 0, 1],
            [1, 0, 1, 0],
            [1, 1, 0, 0],
        ];
        let mean: f64 = perms
            .iter()
            .map(|p| mutual_information(&ContingencyTable::from_labels(&fixed, p).unwrap()))
            .sum::<f64>()
            / 6.0;
        let t = ContingencyTable::from_labels(&fixed, &fixed).unwrap();
        assert!((expected_mutual_information(&t) - mean).abs() < 1e-12);
    }
}
