//! Structured-text reports emitted by the command-line tool: a stable,
//! machine-parseable key/value header followed by a payload section.

use crate::bounds::{BoundKind, BoundsReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub graph_summary: String,
    pub seed: u64,
    pub elapsed_ms: u128,
    pub payload: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: impl Into<String>, graph_summary: impl Into<String>, seed: u64) -> Report {
        Report {
            command: command.into(),
            graph_summary: graph_summary.into(),
            seed,
            elapsed_ms: 0,
            payload: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.payload.push((key.into(), value.to_string()));
    }

    pub fn push_bounds(&mut self, b: &BoundsReport) {
        self.push("interval-lower", format!("{:.6}", b.interval.0));
        self.push("interval-upper", format!("{:.6}", b.interval.1));
        for e in &b.entries {
            let kind = match e.kind {
                BoundKind::Lower => "lower",
                BoundKind::Upper => "upper",
            };
            self.push(
                format!("bound.{}.{kind}", e.name),
                format!("{:.6}", e.value),
            );
            if let Some(w) = &e.witness {
                self.push(format!("witness.{}", e.name), w);
            }
        }
        for s in &b.skipped {
            self.push(format!("skipped.{}", s.name), &s.reason);
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("rdss-report {SCHEMA_VERSION}\n"));
        out.push_str(&format!("version: {}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("graph: {}\n", self.graph_summary));
        out.push_str(&format!("seed: {}\n", self.seed));
        out.push_str(&format!("elapsed-ms: {}\n", self.elapsed_ms));
        out.push_str("---\n");
        for (k, v) in &self.payload {
            out.push_str(&format!("{k}: {v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Caps;
    use crate::graph::Graph;

    #[test]
    fn report_layout_is_stable() {
        let mut r = Report::new("bounds", "n=5 m=5 undirected", 42);
        r.push("answer", 7);
        let text = r.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "rdss-report 1");
        assert!(lines[1].starts_with("version: "));
        assert_eq!(lines[2], "command: bounds");
        assert_eq!(lines[4], "seed: 42");
        assert_eq!(lines[6], "---");
        assert_eq!(lines[7], "answer: 7");
    }

    #[test]
    fn bounds_payload_round() {
        let b = crate::bounds::bounds_report(&Graph::cycle(5), 2, &Caps::default()).unwrap();
        let mut r = Report::new("bounds", "n=5", 0);
        r.push_bounds(&b);
        let text = r.to_text();
        assert!(text.contains("interval-lower: 2.000000"));
        assert!(text.contains("interval-upper: 3.000000"));
        assert!(text.contains("bound.matching.lower: 2.000000"));
        assert!(text.contains("witness.matching: "));
    }

    #[test]
    fn deterministic_given_inputs() {
        let make = || {
            let b = crate::bounds::bounds_report(&Graph::cycle(4), 2, &Caps::default()).unwrap();
            let mut r = Report::new("bounds", "n=4", 99);
            r.push_bounds(&b);
            r.to_text()
        };
        assert_eq!(make(), make());
    }
}
