//! Asset register CSV and fleet summary exports.

use std::collections::HashSet;
use std::io::{Read, Write};

use chrono::NaiveDate;
use itfleet_core::fleet::FleetSummary;
use itfleet_core::AssetRecord;

use crate::error::{Error, Result};

pub const ASSET_HEADER: [&str; 5] = ["asset_id", "voltage_kv", "commission_date", "failure_date", "manufacturer"];

const DATE_FORMAT: &str = "%Y-%m-%d";

/// Parses an ISO `YYYY-MM-DD` date, rejecting non-canonical spellings so
/// that re-serialising reproduces the input.
pub fn parse_date(s: &str) -> Option<NaiveDate> {
    let d = NaiveDate::parse_from_str(s, DATE_FORMAT).ok()?;
    (format_date(d) == s).then_some(d)
}

pub fn format_date(d: NaiveDate) -> String {
    d.format(DATE_FORMAT).to_string()
}

/// Reads an asset register. Rows keep their input order; errors name the
/// data row (counted from 1, header excluded). An empty input is an empty
/// fleet.
pub fn parse_asset_csv(source: impl Read, file: &str) -> Result<Vec<AssetRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(source);
    let mut records = reader.records();
    let row_err = |row: usize, message: String| Error::Row { file: file.to_string(), row, message };

    match records.next() {
        None => return Ok(Vec::new()),
        Some(header) => {
            let header = header.map_err(|e| Error::Document { file: file.into(), message: e.to_string() })?;
            if header.iter().ne(ASSET_HEADER) {
                return Err(Error::Document {
                    file: file.into(),
                    message: format!("header must be `{}`", ASSET_HEADER.join(",")),
                });
            }
        }
    }

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, rec) in records.enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| row_err(row, e.to_string()))?;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let asset_id = field(0);
        let voltage_kv: u16 = field(1)
            .parse()
            .ok()
            .filter(|v: &u16| v.to_string() == field(1))
            .ok_or_else(|| row_err(row, format!("malformed voltage '{}'", field(1))))?;
        let commission_date =
            parse_date(field(2)).ok_or_else(|| row_err(row, format!("malformed commission_date '{}'", field(2))))?;
        let failure_date = match field(3) {
            "" => None,
            s => Some(parse_date(s).ok_or_else(|| row_err(row, format!("malformed failure_date '{s}'")))?),
        };
        let manufacturer = match field(4) {
            "" => None,
            s => Some(s.to_string()),
        };
        let record = AssetRecord::new(asset_id, voltage_kv, commission_date, failure_date, manufacturer)
            .map_err(|e| row_err(row, e.to_string()))?;
        if !seen.insert(record.asset_id.clone()) {
            return Err(row_err(row, format!("duplicate asset_id '{asset_id}'")));
        }
        out.push(record);
    }
    Ok(out)
}

pub fn write_asset_csv(assets: &[AssetRecord], sink: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(ASSET_HEADER)?;
    for a in assets {
        w.write_record([
            a.asset_id.as_str(),
            &a.voltage_kv.to_string(),
            &format_date(a.commission_date),
            &a.failure_date.map(format_date).unwrap_or_default(),
            a.manufacturer.as_deref().unwrap_or(""),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Flat CSV form of a fleet summary: one `family` row per voltage family
/// followed by one `age` row per histogram bucket.
pub fn write_summary_csv(summary: &FleetSummary, sink: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["section", "key", "total", "events", "censored"])?;
    for c in &summary.classes {
        w.write_record([
            "family",
            c.voltage_class.label(),
            &c.total.to_string(),
            &c.events.to_string(),
            &c.censored.to_string(),
        ])?;
    }
    for b in &summary.age_histogram {
        w.write_record(["age", &b.start_years.to_string(), &b.count.to_string(), "", ""])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use itfleet_core::VoltageClass;

    const HEADER: &str = "asset_id,voltage_kv,commission_date,failure_date,manufacturer\n";

    fn parse(body: &str) -> Result<Vec<AssetRecord>> {
        parse_asset_csv(format!("{HEADER}{body}").as_bytes(), "assets.csv")
    }

    #[test]
    fn rows_map_to_records() {
        let a = parse("A1,110,2000-01-01,2010-01-01,M3\nA2,380,1990-06-15,,\n").unwrap();
        assert_eq!(a[0].failure_date, NaiveDate::from_ymd_opt(2010, 1, 1));
        assert_eq!(a[0].manufacturer.as_deref(), Some("M3"));
        assert_eq!(a[1].voltage_class(), VoltageClass::V220And380);
        assert_eq!((a[1].failure_date, a[1].manufacturer.as_deref()), (None, None));
    }

    #[test]
    fn errors_carry_row_and_reason() {
        let e = parse("A1,110,2000-01-01,,\nA3,110,2010-01-01,2005-01-01,\n").unwrap_err().to_string();
        assert!(e.contains("row 2") && e.contains("failure before commission"), "{e}");
        let e = parse("A1,66,2000-01-01,,\n").unwrap_err().to_string();
        assert!(e.contains("row 1") && e.contains("unknown voltage"), "{e}");
        let e = parse("A1,110,2000-13-01,,\n").unwrap_err().to_string();
        assert!(e.contains("malformed commission_date"), "{e}");
        let e = parse("A1,110,2000-1-1,,\n").unwrap_err().to_string();
        assert!(e.contains("malformed commission_date"), "{e}");
        let e = parse("A1,110,2000-01-01,,\nA1,150,2001-01-01,,\n").unwrap_err().to_string();
        assert!(e.contains("row 2") && e.contains("duplicate asset_id"), "{e}");
        assert!(parse_asset_csv("id,kv\n".as_bytes(), "x").is_err());
    }

    #[test]
    fn empty_inputs() {
        assert!(parse_asset_csv(&b""[..], "x").unwrap().is_empty());
        assert!(parse("").unwrap().is_empty());
    }

    #[test]
    fn round_trip_is_exact() {
        let text = format!("{HEADER}A1,110,2000-01-01,2010-01-01,M3\nA2,380,1990-06-15,,\n\"B,3\",150,1975-02-28,,\"Maker, Inc\"\n");
        let parsed = parse_asset_csv(text.as_bytes(), "x").unwrap();
        let mut out = Vec::new();
        write_asset_csv(&parsed, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }
}
