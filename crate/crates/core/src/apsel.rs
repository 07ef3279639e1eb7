//! Per-UE serving AP sets from large-scale fading.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sysmodel::linear_to_db;

/// Full network (every AP serves every UE) or scalable selection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    #[default]
    Full,
    Scalable,
}

impl SelectionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SelectionMode::Full => "full",
            SelectionMode::Scalable => "scalable",
        }
    }
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SelectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(SelectionMode::Full),
            "scalable" => Ok(SelectionMode::Scalable),
            other => Err(Error::InvalidArgument(format!("unknown selection mode {other:?}"))),
        }
    }
}

/// Which APs serve which UEs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionMap {
    /// For each UE, its serving APs; the master AP comes first, the rest in
    /// ascending index order.
    pub serving: Vec<Vec<usize>>,
    /// For each AP, the UEs it serves in ascending order.
    pub served: Vec<Vec<usize>>,
    mask: DMatrix<bool>,
}

impl SelectionMap {
    pub fn ues(&self) -> usize {
        self.mask.nrows()
    }

    pub fn aps(&self) -> usize {
        self.mask.ncols()
    }

    /// `true` iff `D_kl = I_N`.
    pub fn is_served(&self, k: usize, l: usize) -> bool {
        self.mask[(k, l)]
    }

    pub fn master(&self, k: usize) -> usize {
        self.serving[k][0]
    }

    /// The diagonal selection matrix `D_kl`, either `I_N` or `0_N`.
    pub fn d_matrix(&self, k: usize, l: usize, antennas: usize) -> DMatrix<f64> {
        if self.is_served(k, l) {
            DMatrix::identity(antennas, antennas)
        } else {
            DMatrix::zeros(antennas, antennas)
        }
    }

    /// `K × L` 0/1 matrix.
    pub fn to_matrix(&self) -> DMatrix<u8> {
        self.mask.map(u8::from)
    }

    /// One line per UE, e.g. `1 0 1 1`.
    pub fn dump(&self) -> String {
        (0..self.ues())
            .map(|k| {
                (0..self.aps())
                    .map(|l| if self.is_served(k, l) { "1" } else { "0" })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Builds the serving sets from `beta` (`K × L`, linear scale).
///
/// In scalable mode each UE's master AP is the one with the largest
/// coefficient (lowest index on ties), and AP `l` also serves UE `k` when
/// `β_kl[dB] ≥ β_master[dB] + beta_th_db`.
pub fn select_aps(beta: &DMatrix<f64>, beta_th_db: f64, mode: SelectionMode) -> Result<SelectionMap> {
    if beta.iter().any(|b| !(*b > 0.0)) {
        return Err(Error::InvalidArgument("large-scale coefficients must be positive".into()));
    }
    if !(beta_th_db <= 0.0) {
        return Err(Error::InvalidArgument(format!("beta_th must be <= 0 dB, got {beta_th_db}")));
    }
    let (ues, aps) = beta.shape();
    let mut mask = DMatrix::from_element(ues, aps, false);
    let mut serving = Vec::with_capacity(ues);
    for k in 0..ues {
        let db: Vec<f64> = (0..aps).map(|l| linear_to_db(beta[(k, l)])).collect();
        let master = (0..aps).fold(0, |best, l| if db[l] > db[best] { l } else { best });
        let mut set = vec![master];
        for l in (0..aps).filter(|&l| l != master) {
            let keep = match mode {
                SelectionMode::Full => true,
                SelectionMode::Scalable => db[l] >= db[master] + beta_th_db,
            };
            if keep {
                set.push(l);
            }
        }
        for &l in &set {
            mask[(k, l)] = true;
        }
        serving.push(set);
    }
    let served = (0..aps).map(|l| (0..ues).filter(|&k| mask[(k, l)]).collect()).collect();
    Ok(SelectionMap { serving, served, mask })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysmodel::db_to_linear;

    fn beta_db(k: usize, l: usize, values: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(k, l, values).map(db_to_linear)
    }

    #[test]
    fn full_mode_serves_everyone() {
        let beta = beta_db(2, 3, &[-60.0, -120.0, -90.0, -100.0, -70.0, -80.0]);
        let sel = select_aps(&beta, -40.0, SelectionMode::Full).unwrap();
        assert!((0..2).all(|k| (0..3).all(|l| sel.is_served(k, l))));
        assert_eq!(sel.d_matrix(1, 2, 4), DMatrix::identity(4, 4));
        assert_eq!(sel.master(0), 0);
        assert_eq!(sel.master(1), 1);
        assert_eq!(sel.serving[1], vec![1, 0, 2]);
    }

    #[test]
    fn threshold_boundary_is_inclusive() {
        let sel = select_aps(&beta_db(1, 2, &[-60.0, -100.0]), -40.0, SelectionMode::Scalable).unwrap();
        assert_eq!(sel.serving[0], vec![0, 1]);
        let sel = select_aps(&beta_db(1, 2, &[-60.0, -100.1]), -40.0, SelectionMode::Scalable).unwrap();
        assert_eq!(sel.serving[0], vec![0]);
        assert_eq!(sel.d_matrix(0, 1, 2), DMatrix::zeros(2, 2));
        assert!(sel.served[1].is_empty());
    }

    #[test]
    fn ties_pick_lowest_index() {
        let sel = select_aps(&beta_db(1, 3, &[-80.0, -70.0, -70.0]), -5.0, SelectionMode::Scalable).unwrap();
        assert_eq!(sel.master(0), 1);
        assert_eq!(sel.serving[0], vec![1, 2]);
    }

    #[test]
    fn dump_format() {
        let sel = select_aps(&beta_db(2, 2, &[-60.0, -110.0, -90.0, -80.0]), -20.0, SelectionMode::Scalable)
            .unwrap();
        assert_eq!(sel.dump(), "1 0\n1 1");
        assert_eq!(sel.to_matrix(), DMatrix::from_row_slice(2, 2, &[1u8, 0, 1, 1]));
    }

    #[test]
    fn rejects_non_positive_beta() {
        let beta = DMatrix::from_row_slice(1, 2, &[1e-9, 0.0]);
        assert!(select_aps(&beta, -40.0, SelectionMode::Full).is_err());
    }
}
