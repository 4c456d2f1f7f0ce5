//! One row of experiment output.

use serde::Serialize;

/// Column names, in order, for CSV output.
pub const CSV_HEADER: &str =
    "command,n,p_or_mu,delta,seed,edges_G,edges_H,connected,is_tree,max_stretch,ecc_bound,probes_max,probes_mean,wall_ms";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub n: u64,
    pub p_or_mu: f64,
    pub delta: Option<f64>,
    pub seed: u64,
    #[serde(rename = "edges_G")]
    pub edges_g: u64,
    #[serde(rename = "edges_H")]
    pub edges_h: u64,
    pub connected: bool,
    pub is_tree: bool,
    pub max_stretch: Option<f64>,
    pub ecc_bound: Option<u32>,
    pub probes_max: u64,
    pub probes_mean: f64,
    /// Filled only when timing is requested; left empty so output stays reproducible.
    pub wall_ms: Option<u64>,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl RunRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.command,
            self.n,
            self.p_or_mu,
            opt(&self.delta),
            self.seed,
            self.edges_g,
            self.edges_h,
            self.connected,
            self.is_tree,
            opt(&self.max_stretch),
            opt(&self.ecc_bound),
            self.probes_max,
            self.probes_mean,
            opt(&self.wall_ms),
        )
    }

    /// `edges_H <= edges_G` and `probes_mean <= probes_max`.
    pub fn is_consistent(&self) -> bool {
        self.edges_h <= self.edges_g && self.probes_mean <= self.probes_max as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_row_matches_header_width() {
        let r = RunRecord {
            command: "er-spanner".into(),
            n: 10,
            p_or_mu: 0.5,
            delta: Some(0.7),
            seed: 3,
            edges_g: 20,
            edges_h: 9,
            connected: true,
            is_tree: true,
            max_stretch: None,
            ecc_bound: Some(4),
            probes_max: 3,
            probes_mean: 1.5,
            wall_ms: None,
        };
        let row = r.to_csv_row();
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert_eq!(row, "er-spanner,10,0.5,0.7,3,20,9,true,true,,4,3,1.5,");
        assert!(r.is_consistent());
    }
}
