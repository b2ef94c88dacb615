// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use super::SimError;

pub const REGION_COUNT: usize = 16;

/// Region id in `1..=16`.
pub type RegionId = u8;

/// Display names, indexed by `id - 1`.
pub const REGION_NAMES: [&str; REGION_COUNT] = [
    "North America",
    "Central America",
    "Caribbean",
    "Northern South America",
    "Southern South America",
    "Western Europe",
    "Northern Europe",
    "Southern Europe",
    "Eastern Europe",
    "North Africa and Middle East",
    "West and Central Africa",
    "East and Southern Africa",
    "South and Central Asia",
    "East Asia",
    "Southeast Asia",
    "Oceania",
];

const BUNDLED: &str = include_str!("../../data/regions.tsv");

/// Country name to world region.
#[derive(Debug, Clone, Default)]
pub struct RegionTable {
    regions: HashMap<String, RegionId>,
}

impl RegionTable {
    /// The table shipped with the crate, keyed by OpenFlights country names.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled region table is valid")
    }

    /// Parse `country<TAB>region` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, SimError> {
        let mut table = RegionTable::default();
        table.merge(text)?;
        Ok(table)
    }

    /// Merge entries from `text`, replacing existing countries.
    pub fn merge(&mut self, text: &str) -> Result<(), SimError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| SimError::RegionTable { line: i + 1, message };
            let (country, id) = line.rsplit_once('\t').ok_or_else(|| bad("expected country<TAB>region".into()))?;
            let id: RegionId = id.trim().parse().map_err(|_| bad(format!("region {id:?} is not an integer")))?;
            if !(1..=REGION_COUNT as RegionId).contains(&id) {
                return Err(bad(format!("region {id} outside 1..={REGION_COUNT}")));
            }
            self.regions.insert(country.trim().to_string(), id);
        }
        Ok(())
    }

    pub fn insert(&mut self, country: &str, id: RegionId) {
        assert!((1..=REGION_COUNT as RegionId).contains(&id), "region id out of range");
        self.regions.insert(country.to_string(), id);
    }

    pub fn region_of(&self, country: &str) -> Option<RegionId> {
        self.regions.get(country).copied()
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_covers_all_regions() {
        let t = RegionTable::bundled();
        let mut seen = [false; REGION_COUNT];
        for id in t.regions.values() {
            seen[*id as usize - 1] = true;
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(t.region_of("United States"), Some(1));
        assert_eq!(t.region_of("Congo (Kinshasa)"), Some(11));
        assert_eq!(t.region_of("Atlantis"), None);
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = RegionTable::parse("# c\nFoo\t3\nBar\t17\n").unwrap_err();
        assert!(matches!(err, SimError::RegionTable { line: 3, .. }));
        assert!(RegionTable::parse("Foo 3\n").is_err());
    }
}
