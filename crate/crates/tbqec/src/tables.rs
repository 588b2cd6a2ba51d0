//! Published code tables bundled as repository data, used by the
//! `reproduce-tables` command and the acceptance suite.

use std::sync::OnceLock;

use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
pub struct TableRow {
    pub name: String,
    pub weight: usize,
    pub spec: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Whether d is verifiable by exhaustive enumeration at desk scale
    /// (per-component kernel dimension small enough); otherwise d is checked
    /// as a randomized upper-bound match.
    pub d_exact: bool,
    /// Qualifying layout tuple [i, j, g, h, mu, lambda] when toric.
    pub toric: Option<[usize; 6]>,
    /// "yes" when a thickness-2 split is known, "unknown" otherwise.
    pub biplanar: String,
    pub components: usize,
    /// Published pseudo-threshold.
    pub p0: f64,
}

static TABLE: OnceLock<Vec<TableRow>> = OnceLock::new();

/// All rows of the bundled code table, weights 4 through 7.
pub fn code_table() -> &'static [TableRow] {
    TABLE.get_or_init(|| {
        serde_json::from_str(include_str!("../data/code_table.json"))
            .expect("bundled table data is valid")
    })
}

pub fn row(name: &str) -> &'static TableRow {
    code_table()
        .iter()
        .find(|r| r.name == name)
        .unwrap_or_else(|| panic!("no table row named {name}"))
}
