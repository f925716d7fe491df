//! Analytic detection curves alongside empirical rates.

/// Survival probability per key bit under the measurement attack, as
/// reported for the naive attack.
pub const MEASUREMENT_SURVIVAL: f64 = 21.0 / 32.0;

pub fn measurement_detection(t: u32) -> f64 {
    1.0 - MEASUREMENT_SURVIVAL.powi(t as i32)
}

pub fn modification_detection(m: u32) -> f64 {
    1.0 - 0.5f64.powi(m as i32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub k: u32,
    pub measurement: f64,
    /// Empirical naive-attack detection among trials with `k` candidate key
    /// bits, with its sample count.
    pub measurement_empirical: Option<(f64, u64)>,
    pub modification: f64,
    pub modification_empirical: Option<(f64, u64)>,
}

/// Analytic rows for `k = 0..=max`.
pub fn detection_curves(max: u32) -> Vec<CurveRow> {
    (0..=max)
        .map(|k| CurveRow {
            k,
            measurement: measurement_detection(k),
            measurement_empirical: None,
            modification: modification_detection(k),
            modification_empirical: None,
        })
        .collect()
}

pub fn write_curves<W: std::io::Write>(rows: &[CurveRow], sink: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    w.write_record([
        "k",
        "measurement_analytic",
        "measurement_empirical",
        "measurement_samples",
        "modification_analytic",
        "modification_empirical",
        "modification_samples",
    ])?;
    let emp = |e: Option<(f64, u64)>| match e {
        Some((rate, n)) => (format!("{rate:.6}"), n.to_string()),
        None => (String::new(), String::new()),
    };
    for r in rows {
        let (me, ms) = emp(r.measurement_empirical);
        let (de, ds) = emp(r.modification_empirical);
        w.write_record([
            r.k.to_string(),
            format!("{:.6}", r.measurement),
            me,
            ms,
            format!("{:.6}", r.modification),
            de,
            ds,
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_values() {
        assert!((measurement_detection(1) - 0.34375).abs() < 1e-12);
        assert_eq!(measurement_detection(0), 0.0);
        assert_eq!(modification_detection(1), 0.5);
        assert_eq!(modification_detection(4), 0.9375);
        let rows = detection_curves(3);
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].k, 0);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_curves(&detection_curves(1), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2], "1,0.343750,,,0.500000,,");
    }
}
