//! Exact Dirac thresholds `m_d(k, n)` at desk scale, the conjectured
//! limiting density, and the space and parity barrier constructions.

mod barriers;
mod sweep;

pub use barriers::{parity_barrier, space_barrier, Barrier, PmFreeProof};
pub use sweep::{exact_dirac_threshold, exact_dirac_threshold_unpruned, SWEEP_EDGE_LIMIT};

use crate::combin::binom;
use crate::error::{Error, Result};
use crate::hypercore::{khg, Hypergraph};
use num_rational::Ratio;
use std::path::Path;

/// `max{1/2, 1 - ((k-1)/k)^(k-d)}`.
pub fn conjectured_density(d: usize, k: usize) -> Result<Ratio<u64>> {
    if d == 0 || d >= k {
        return Err(Error::Size(format!("need 1 <= d < k, got d={d}, k={k}")));
    }
    let e = (k - d) as u32;
    let den = (k as u64)
        .checked_pow(e)
        .ok_or_else(|| Error::Capacity(format!("{k}^{e} overflows")))?;
    let num = den - (k as u64 - 1).pow(e);
    Ok(Ratio::new(num, den).max(Ratio::new(1, 2)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdRecord {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub m_value: u64,
    /// A PM-free graph with minimum d-degree `m_value - 1`.
    pub extremal_witness: Hypergraph,
    pub graphs_enumerated: u64,
}

impl ThresholdRecord {
    /// `m_d(k, n) / C(n-d, k-d)`.
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(
            self.m_value,
            binom((self.n - self.d) as u64, (self.k - self.d) as u64),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sandwich {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// `1 + max δ_d` over the barrier constructions that exist at this size.
    pub lower: u64,
    /// The exact threshold, when the sweep is within capacity.
    pub exact: Option<u64>,
    /// `exact / C(n-d, k-d)` when known.
    pub ratio: Option<Ratio<u64>>,
    /// Why the exact value is missing.
    pub upper_unavailable: Option<String>,
}

impl Sandwich {
    /// `lower <= exact` (vacuous when the exact value is missing).
    pub fn consistent(&self) -> bool {
        self.exact.is_none_or(|m| self.lower <= m)
    }

    pub fn tight(&self) -> bool {
        self.exact == Some(self.lower)
    }
}

pub fn verify_threshold_sandwich(n: usize, k: usize, d: usize) -> Result<Sandwich> {
    let mut lower = 0u64;
    for b in [space_barrier(n, k, d), parity_barrier(n, k, d)] {
        match b {
            Ok(b) => lower = lower.max(b.min_degree.value + 1),
            Err(Error::Size(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let (exact, ratio, upper_unavailable) = match exact_dirac_threshold(n, k, d) {
        Ok(r) => (Some(r.m_value), Some(r.ratio()), None),
        Err(Error::Capacity(msg)) => (None, None, Some(msg)),
        Err(e) => return Err(e),
    };
    Ok(Sandwich {
        n,
        k,
        d,
        lower,
        exact,
        ratio,
        upper_unavailable,
    })
}

pub const MDK_CSV_HEADER: [&str; 8] = [
    "n",
    "k",
    "d",
    "m",
    "ratio",
    "witness_file",
    "graphs_enumerated",
    "seconds",
];

/// Appends one row to the `mdk` results table, writing the header first if
/// the file is new or empty. `seconds` is written as `-` when absent.
pub fn append_mdk_csv(
    path: impl AsRef<Path>,
    rec: &ThresholdRecord,
    witness_file: Option<&str>,
    seconds: Option<f64>,
) -> Result<()> {
    let path = path.as_ref();
    let fresh = std::fs::metadata(path)
        .map(|m| m.len() == 0)
        .unwrap_or(true);
    let file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    let mut w = csv::Writer::from_writer(file);
    if fresh {
        w.write_record(MDK_CSV_HEADER)?;
    }
    let ratio = rec.ratio();
    w.write_record([
        rec.n.to_string(),
        rec.k.to_string(),
        rec.d.to_string(),
        rec.m_value.to_string(),
        format!("{}/{}", ratio.numer(), ratio.denom()),
        witness_file.unwrap_or("-").to_string(),
        rec.graphs_enumerated.to_string(),
        seconds.map_or("-".to_string(), |s| format!("{s:.3}")),
    ])?;
    w.flush()?;
    Ok(())
}

/// Writes the extremal witness as `.khg`.
pub fn write_witness(rec: &ThresholdRecord, path: impl AsRef<Path>) -> Result<()> {
    khg::write_path(&rec.extremal_witness, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchpower::find_perfect_matching;

    #[test]
    fn density_formula() {
        assert_eq!(conjectured_density(2, 3).unwrap(), Ratio::new(1, 2));
        assert_eq!(conjectured_density(1, 3).unwrap(), Ratio::new(5, 9));
        assert_eq!(conjectured_density(1, 2).unwrap(), Ratio::new(1, 2));
        assert_eq!(conjectured_density(1, 4).unwrap(), Ratio::new(37, 64));
        assert!(conjectured_density(3, 3).is_err());
    }

    #[test]
    fn sandwich_examples() {
        let s = verify_threshold_sandwich(6, 2, 1).unwrap();
        assert!(s.tight());
        assert_eq!(s.lower, 3);
        let s = verify_threshold_sandwich(12, 3, 1).unwrap();
        assert!(s.exact.is_none() && s.upper_unavailable.is_some());
        assert!(s.lower > 1);
    }

    #[test]
    fn witness_is_extremal() {
        let r = exact_dirac_threshold(6, 3, 2).unwrap();
        assert!(!find_perfect_matching(&r.extremal_witness, u64::MAX).is_perfect());
        assert_eq!(
            r.extremal_witness.min_d_degree(2).unwrap().value + 1,
            r.m_value
        );
        assert!(verify_threshold_sandwich(6, 3, 2).unwrap().consistent());
    }

    #[test]
    fn csv_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("mdk.csv");
        let r = exact_dirac_threshold(4, 2, 1).unwrap();
        append_mdk_csv(&p, &r, None, None).unwrap();
        append_mdk_csv(&p, &r, Some("w.khg"), None).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text, "n,k,d,m,ratio,witness_file,graphs_enumerated,seconds\n4,2,1,2,2/3,-,64,-\n4,2,1,2,2/3,w.khg,64,-\n");
    }
}
