//! Benchmark rows: one per formula and pipeline, written as CSV.

use std::io::Write;

use ltlf_core::pipeline::Pipeline;
use ltlf_core::Ltlf;

use crate::check::{par_map, run_pipeline, Fault, Outcome};
use crate::config::Settings;

pub const HEADER: [&str; 9] = [
    "formula",
    "pipeline",
    "variation",
    "quantified",
    "clauses",
    "intermediate_states",
    "final_states",
    "final_transitions",
    "millis",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub formula: String,
    pub pipeline: String,
    pub variation: String,
    pub outcome: Outcome,
    pub millis: u128,
}

impl BenchRow {
    fn record(&self) -> Vec<String> {
        let mut r = vec![self.formula.clone(), self.pipeline.clone(), self.variation.clone()];
        match &self.outcome {
            Outcome::Done(s) => {
                r.extend(
                    [s.quantified, s.clauses, s.intermediate_states, s.final_states, s.final_transitions]
                        .map(|v| v.to_string()),
                );
                r.push(self.millis.to_string());
            }
            Outcome::Timeout => r.extend((0..6).map(|_| "TIMEOUT".to_string())),
            Outcome::Failed(_) => r.extend((0..6).map(|_| "FAILED".to_string())),
        }
        r
    }
}

/// Runs every pipeline on every formula; rows sorted by formula, pipeline
/// and variation.
pub fn bench(formulas: &[Ltlf], settings: &Settings) -> Vec<BenchRow> {
    let per_formula = par_map(formulas, settings.workers, |_, f| {
        Pipeline::all()
            .into_iter()
            .map(|p| {
                let (run, _) = run_pipeline(f, p, settings, Fault::default());
                BenchRow {
                    formula: f.to_string(),
                    pipeline: p.name().to_string(),
                    variation: p.variation(),
                    outcome: run.outcome,
                    millis: run.elapsed.as_millis(),
                }
            })
            .collect::<Vec<_>>()
    });
    let mut rows: Vec<BenchRow> = per_formula.into_iter().flatten().collect();
    rows.sort_by(|a, b| (&a.formula, &a.pipeline, &a.variation).cmp(&(&b.formula, &b.pipeline, &b.variation)));
    rows
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{pattern, Pattern};
    use std::time::Duration;

    #[test]
    fn conj_f_rows() {
        let rows = bench(&[pattern(Pattern::ConjF, 2)], &Settings::default());
        assert_eq!(rows.len(), 9);
        assert!(rows.windows(2).all(|w| (&w[0].pipeline, &w[0].variation) <= (&w[1].pipeline, &w[1].variation)));
        for r in &rows {
            let Outcome::Done(s) = &r.outcome else { panic!("{r:?}") };
            assert_eq!(s.final_states, 4);
        }
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("formula,pipeline,variation,quantified,"));
        assert_eq!(text.lines().count(), 10);
    }

    #[test]
    fn timeouts_are_rows() {
        let settings = Settings { timeout: Some(Duration::ZERO), ..Settings::default() };
        let rows = bench(&[pattern(Pattern::UNest, 2)], &settings);
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(|r| r.outcome == Outcome::Timeout));
        assert!(rows[0].record().contains(&"TIMEOUT".to_string()));
    }
}
