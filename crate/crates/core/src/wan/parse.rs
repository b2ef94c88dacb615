// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use csv::{ReaderBuilder, StringRecord};
use serde::{Deserialize, Serialize};

use super::WanError;

const NULL_MARKER: &str = "\\N";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AirportRecord {
    pub iata: String,
    pub icao: Option<String>,
    pub name: String,
    pub city: String,
    pub country: String,
    pub latitude: f64,
    pub longitude: f64,
}

/// A per-line problem found while parsing. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct AirportTable {
    pub records: Vec<AirportRecord>,
    /// Lines skipped because the IATA field was empty or `\N`.
    pub skipped_placeholder: usize,
    pub diagnostics: Vec<Diagnostic>,
    index: HashMap<String, usize>,
}

impl AirportTable {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, iata: &str) -> Option<&AirportRecord> {
        self.index.get(iata).map(|&i| &self.records[i])
    }

    pub fn contains(&self, iata: &str) -> bool {
        self.index.contains_key(iata)
    }

    /// Build a table directly from records. Later duplicates of an IATA code
    /// are ignored.
    pub fn from_records(records: impl IntoIterator<Item = AirportRecord>) -> Self {
        let mut table = AirportTable::default();
        for r in records {
            if !table.index.contains_key(&r.iata) {
                table.index.insert(r.iata.clone(), table.records.len());
                table.records.push(r);
            }
        }
        table
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteRecord {
    pub source: String,
    pub destination: String,
    /// IATA equipment codes. May be empty when the source row has no
    /// equipment; weight resolution then falls back to one default aircraft.
    pub aircraft: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct RouteTable {
    pub routes: Vec<RouteRecord>,
    /// Routes whose source or destination is not in the airport table.
    pub dropped_unresolved: usize,
    /// Routes whose source equals destination.
    pub dropped_self: usize,
    pub diagnostics: Vec<Diagnostic>,
}

fn is_iata(code: &str) -> bool {
    code.len() == 3 && code.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit())
}

fn null_to_option(s: &str) -> Option<String> {
    let s = s.trim();
    if s.is_empty() || s == NULL_MARKER {
        None
    } else {
        Some(s.to_string())
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .escape(Some(b'\\'))
        .from_reader(text.as_bytes())
}

fn line_of(record: &StringRecord, fallback: u64) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(fallback)
}

/// Parse an OpenFlights `airports.dat` dump.
///
/// Field layout (0-based): 1 name, 2 city, 3 country, 4 IATA, 5 ICAO,
/// 6 latitude, 7 longitude. Rows without an IATA code are skipped and
/// counted; rows that cannot be interpreted produce a [`Diagnostic`].
pub fn parse_airports(text: &str) -> Result<AirportTable, WanError> {
    let mut table = AirportTable::default();
    let mut malformed = 0usize;
    let mut rdr = reader(text);
    let mut record = StringRecord::new();
    let mut ordinal = 0u64;
    loop {
        ordinal += 1;
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                malformed += 1;
                let line = e.position().map(|p| p.line()).unwrap_or(ordinal);
                table.diagnostics.push(Diagnostic { line, message: format!("unreadable row: {e}") });
                continue;
            }
        }
        let line = line_of(&record, ordinal);
        if record.len() < 8 {
            malformed += 1;
            table.diagnostics.push(Diagnostic {
                line,
                message: format!("expected at least 8 fields, found {}", record.len()),
            });
            continue;
        }
        let iata = record[4].trim();
        if iata.is_empty() || iata == NULL_MARKER {
            table.skipped_placeholder += 1;
            continue;
        }
        if !is_iata(iata) {
            malformed += 1;
            table.diagnostics.push(Diagnostic { line, message: format!("invalid IATA code {iata:?}") });
            continue;
        }
        let coords = (record[6].trim().parse::<f64>(), record[7].trim().parse::<f64>());
        let (latitude, longitude) = match coords {
            (Ok(lat), Ok(lon)) => (lat, lon),
            _ => {
                malformed += 1;
                table.diagnostics.push(Diagnostic {
                    line,
                    message: format!("unparseable coordinates {:?}, {:?}", &record[6], &record[7]),
                });
                continue;
            }
        };
        if !(-90.0..=90.0).contains(&latitude) || !(-180.0..=180.0).contains(&longitude) {
            malformed += 1;
            table.diagnostics.push(Diagnostic {
                line,
                message: format!("coordinates out of bounds: latitude {latitude}, longitude {longitude}"),
            });
            continue;
        }
        if table.contains(iata) {
            table.diagnostics.push(Diagnostic { line, message: format!("duplicate IATA code {iata}, keeping first") });
            continue;
        }
        let rec = AirportRecord {
            iata: iata.to_string(),
            icao: null_to_option(&record[5]),
            name: record[1].trim().to_string(),
            city: record[2].trim().to_string(),
            country: record[3].trim().to_string(),
            latitude,
            longitude,
        };
        table.index.insert(rec.iata.clone(), table.records.len());
        table.records.push(rec);
    }
    if table.records.is_empty() {
        return Err(WanError::NoAirports { skipped: table.skipped_placeholder, malformed });
    }
    Ok(table)
}

/// Parse an OpenFlights `routes.dat` dump against a parsed airport table.
///
/// Fields (0-based): 2 source IATA, 4 destination IATA, 8 equipment codes
/// separated by whitespace. Routes whose endpoints are not in `airports`
/// are dropped, counted and reported.
pub fn parse_routes(text: &str, airports: &AirportTable) -> Result<RouteTable, WanError> {
    let mut table = RouteTable::default();
    let mut rdr = reader(text);
    let mut record = StringRecord::new();
    let mut ordinal = 0u64;
    loop {
        ordinal += 1;
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(ordinal);
                table.diagnostics.push(Diagnostic { line, message: format!("unreadable row: {e}") });
                continue;
            }
        }
        let line = line_of(&record, ordinal);
        if record.len() < 9 {
            table.diagnostics.push(Diagnostic {
                line,
                message: format!("expected 9 fields, found {}", record.len()),
            });
            continue;
        }
        let source = record[2].trim();
        let destination = record[4].trim();
        let missing: Vec<&str> = [source, destination].into_iter().filter(|c| !airports.contains(c)).collect();
        if !missing.is_empty() {
            table.dropped_unresolved += 1;
            table.diagnostics.push(Diagnostic {
                line,
                message: format!("unresolvable endpoint(s) {}", missing.join(", ")),
            });
            continue;
        }
        if source == destination {
            table.dropped_self += 1;
            table.diagnostics.push(Diagnostic { line, message: format!("route {source}->{destination} is a self-loop") });
            continue;
        }
        let equipment = record[8].trim();
        let aircraft = if equipment == NULL_MARKER {
            Vec::new()
        } else {
            equipment.split_whitespace().map(str::to_string).collect()
        };
        table.routes.push(RouteRecord {
            source: source.to_string(),
            destination: destination.to_string(),
            aircraft,
        });
    }
    Ok(table)
}
