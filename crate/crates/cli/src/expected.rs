//! Reference values the reproduction pipeline compares its computed results
//! against. Loaded from a JSON file; the comparisons never feed values back
//! into the computation.

use crate::CliError;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

#[derive(Deserialize)]
pub struct ExpectedValues {
    pub version: u32,
    #[serde(default)]
    pub description: Option<String>,
    pub rank3: Option<Rank3Expected>,
    pub rank4: Option<Rank4Expected>,
}

/// Claims for rank 3, asserted for both the determinant-one automorphism
/// and outer automorphism groups.
#[derive(Deserialize)]
pub struct Rank3Expected {
    pub proper_indices: Vec<usize>,
    /// index -> set of core quotient orders occurring at that index.
    pub core_orders_by_index: BTreeMap<String, Vec<u64>>,
    pub simple_core_orders: Vec<u64>,
    pub nonsimple_core: NonsimpleCore,
    /// Free rank of the abelianization of the nonsimple core in the outer
    /// automorphism case.
    pub outer_core_abelianization_free_rank: usize,
    pub screening_survivors: Vec<String>,
}

#[derive(Deserialize)]
pub struct NonsimpleCore {
    pub order: u64,
    pub normal_subgroup_order: u64,
    pub conjugation_quotient_order: u64,
}

#[derive(Deserialize)]
pub struct Rank4Expected {
    pub aut_proper_indices: Vec<usize>,
    pub out_proper_indices: Vec<usize>,
    /// Core quotient orders for the automorphism case.
    pub aut_core_orders_by_index: BTreeMap<String, Vec<u64>>,
    pub simple_core_identification: String,
    pub nonsimple_core_order: u64,
    pub screening_survivors: Vec<String>,
    /// (source, target) pairs where no embedding exists.
    pub embeddings_absent: Vec<(String, String)>,
}

pub fn load_expected(path: &Path) -> Result<ExpectedValues, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read expected values {}: {}", path.display(), e))
    })?;
    let v: ExpectedValues = serde_json::from_str(&text)?;
    if v.version != 1 {
        return Err(CliError::Config(format!(
            "unsupported expected-values version {}",
            v.version
        )));
    }
    Ok(v)
}

/// Parse the string keys of an index map, sorted.
pub fn index_keys(m: &BTreeMap<String, Vec<u64>>) -> Result<Vec<(usize, Vec<u64>)>, CliError> {
    let mut out = Vec::new();
    for (k, v) in m {
        let idx: usize = k
            .parse()
            .map_err(|_| CliError::Config(format!("bad index key {:?}", k)))?;
        let mut orders = v.clone();
        orders.sort_unstable();
        orders.dedup();
        out.push((idx, orders));
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_version() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        fs::write(&p, r#"{"version": 99, "rank3": null, "rank4": null}"#).unwrap();
        assert!(load_expected(&p).is_err());
    }

    #[test]
    fn index_keys_parse_and_sort() {
        let mut m = BTreeMap::new();
        m.insert("13".to_string(), vec![5616]);
        m.insert("8".to_string(), vec![1344, 168, 168]);
        let keys = index_keys(&m).unwrap();
        assert_eq!(keys, vec![(8, vec![168, 1344]), (13, vec![5616])]);
    }
}
