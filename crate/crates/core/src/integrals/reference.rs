//! Reference-energy tables (CSV).
//!
//! Columns: `species,basis,geometry,method,total_energy,correlation_energy`.
//! The geometry column is kept as text so that `0.7400` and `0.74` compare by
//! value through [`ReferenceTable::get`] while the file round-trips verbatim.

use super::IntegralError;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub species: String,
    pub basis: String,
    pub geometry: String,
    pub method: String,
    pub total_energy: f64,
    pub correlation_energy: Option<f64>,
}

impl ReferenceRow {
    pub fn geometry_value(&self) -> Option<f64> {
        self.geometry.trim().parse().ok()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceTable {
    pub rows: Vec<ReferenceRow>,
}

const GEOMETRY_MATCH: f64 = 1e-9;

impl ReferenceTable {
    pub fn from_rows(rows: Vec<ReferenceRow>) -> Result<Self, IntegralError> {
        let mut keys = HashSet::new();
        for (k, row) in rows.iter().enumerate() {
            let geom = row
                .geometry_value()
                .map(|g| format!("{g:.9}"))
                .unwrap_or_else(|| row.geometry.clone());
            let key = (row.species.clone(), row.basis.clone(), geom, row.method.clone());
            if !keys.insert(key) {
                return Err(IntegralError::Consistency {
                    line: k + 2,
                    msg: format!(
                        "duplicate key ({}, {}, {}, {})",
                        row.species, row.basis, row.geometry, row.method
                    ),
                });
            }
        }
        Ok(Self { rows })
    }

    pub fn parse(text: &str) -> Result<Self, IntegralError> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let rows = reader.deserialize().collect::<Result<Vec<ReferenceRow>, _>>()?;
        Self::from_rows(rows)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IntegralError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_csv(&self) -> Result<String, IntegralError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            writer.serialize(row)?;
        }
        let bytes = writer.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn get(&self, species: &str, basis: &str, geometry: f64, method: &str) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| {
            r.species == species
                && r.basis == basis
                && r.method == method
                && r.geometry_value()
                    .is_some_and(|g| (g - geometry).abs() < GEOMETRY_MATCH)
        })
    }

    pub fn total(&self, species: &str, basis: &str, geometry: f64, method: &str) -> Option<f64> {
        self.get(species, basis, geometry, method).map(|r| r.total_energy)
    }

    /// Rows matching `species`, `basis` and `method`, in file order.
    pub fn series<'a>(
        &'a self,
        species: &'a str,
        basis: &'a str,
        method: &'a str,
    ) -> impl Iterator<Item = &'a ReferenceRow> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.species == species && r.basis == basis && r.method == method)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "species,basis,geometry,method,total_energy,correlation_energy\n\
H2,6-31G,0.7400,rhf,-1.1,\n\
H2,6-31G,0.7400,fci,-1.15,-0.05\n";

    #[test]
    fn parse_and_query() {
        let t = ReferenceTable::parse(TEXT).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0].correlation_energy, None);
        assert_eq!(t.total("H2", "6-31G", 0.74, "fci"), Some(-1.15));
        assert_eq!(t.series("H2", "6-31G", "rhf").count(), 1);
        assert_eq!(ReferenceTable::parse(&t.to_csv().unwrap()).unwrap(), t);
    }

    #[test]
    fn duplicate_keys_rejected() {
        let text = format!("{TEXT}H2,6-31G,0.74,rhf,-1.1,\n");
        assert!(matches!(
            ReferenceTable::parse(&text),
            Err(IntegralError::Consistency { line: 4, .. })
        ));
    }
}
