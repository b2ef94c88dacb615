// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use super::{RouteRecord, WanError};

/// Capacity assumed for equipment codes missing from the seat table.
pub const DEFAULT_SEAT_CAPACITY: u32 = 150;

const BUNDLED: &str = include_str!("../../data/seats.tsv");

/// Seats per IATA aircraft code.
#[derive(Debug, Clone)]
pub struct SeatTable {
    seats: HashMap<String, u32>,
    default_capacity: u32,
}

impl SeatTable {
    /// The table shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled seat table is valid")
    }

    /// Parse `code<TAB>seats` lines. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, WanError> {
        let mut table = SeatTable { seats: HashMap::new(), default_capacity: DEFAULT_SEAT_CAPACITY };
        table.merge(text)?;
        Ok(table)
    }

    /// Merge entries from `text`, replacing existing codes.
    pub fn merge(&mut self, text: &str) -> Result<(), WanError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let (Some(code), Some(seats), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(WanError::SeatTable { line: i + 1, message: "expected code<TAB>seats".into() });
            };
            let seats: u32 = seats.trim().parse().map_err(|_| WanError::SeatTable {
                line: i + 1,
                message: format!("seat count {seats:?} is not a positive integer"),
            })?;
            if seats == 0 {
                return Err(WanError::SeatTable { line: i + 1, message: "seat count must be positive".into() });
            }
            self.seats.insert(code.trim().to_string(), seats);
        }
        Ok(())
    }

    pub fn with_default_capacity(mut self, seats: u32) -> Self {
        assert!(seats > 0, "default capacity must be positive");
        self.default_capacity = seats;
        self
    }

    pub fn default_capacity(&self) -> u32 {
        self.default_capacity
    }

    pub fn get(&self, code: &str) -> Option<u32> {
        self.seats.get(code).copied()
    }

    pub fn len(&self) -> usize {
        self.seats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seats.is_empty()
    }
}

/// Seat capacity carried by one route: the sum over its listed equipment,
/// with unknown codes counted at the default capacity. A route without
/// equipment counts as one default aircraft.
pub fn resolve_route_weight(route: &RouteRecord, seats: &SeatTable) -> f64 {
    if route.aircraft.is_empty() {
        return f64::from(seats.default_capacity);
    }
    route
        .aircraft
        .iter()
        .map(|c| f64::from(seats.get(c).unwrap_or(seats.default_capacity)))
        .sum()
}
