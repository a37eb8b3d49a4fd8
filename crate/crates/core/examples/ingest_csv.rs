// Loading a station file with local timestamps and missing readings.

use windcast::io::ingest::{format_timestamp, read_csv, ColumnRef, IngestSchema, TimestampFormat};
use windcast::{GapPolicy, Quality};

const STATION: &str = "\
date;speed_ms;dir
2004-05-09 23:50;3.1;180
2004-05-10 00:00;4.0;185
2004-05-10 00:10;NA;190
2004-05-10 00:20;;190
2004-05-10 00:30;5.5;200
2004-05-10 00:40;5.9;210
";

pub fn run() -> windcast::Result<()> {
    let schema = IngestSchema {
        timestamp_column: ColumnRef::Name("date".into()),
        value_column: ColumnRef::Name("speed_ms".into()),
        timestamp_format: TimestampFormat::Custom("%Y-%m-%d %H:%M".into()),
        delimiter: ';',
        utc_offset_minutes: -420,
        ..IngestSchema::default()
    };
    let x = read_csv(STATION.as_bytes(), &schema, &GapPolicy::default())?;
    println!("record starts at local midnight: {}", format_timestamp(x.origin(), -420));
    for (i, (v, q)) in x.values().iter().zip(x.quality()).enumerate() {
        let flag = if *q == Quality::Interpolated { " (interpolated)" } else { "" };
        println!("{}  {v:.2}{flag}", format_timestamp(x.timestamp(i), -420));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> windcast::Result<()> {
    run()
}
