use std::fmt::Write as _;

use serde::Serialize;

/// Outcome of one command: `key: value` lines, or JSON.
///
/// Text layout, one entry per line in this order: `command`, `seed` (if
/// any), `status`, every detail entry in insertion order, `round_costs` (if
/// any), `final_cost` (if any), `wall_time_ms`. Costs use six decimals.
/// Everything but `wall_time_ms` is a function of the inputs and seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub seed: Option<u64>,
    pub status: String,
    pub details: Vec<(String, String)>,
    pub round_costs: Vec<f64>,
    pub final_cost: Option<f64>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn new(command: impl Into<String>, status: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            seed: None,
            status: status.into(),
            details: Vec::new(),
            round_costs: Vec::new(),
            final_cost: None,
            wall_time_ms: 0.0,
        }
    }

    pub fn detail(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.details.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.details.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        let _ = writeln!(out, "status: {}", self.status);
        for (k, v) in &self.details {
            let _ = writeln!(out, "{k}: {v}");
        }
        if !self.round_costs.is_empty() {
            let costs: Vec<String> = self.round_costs.iter().map(|c| format!("{c:.6}")).collect();
            let _ = writeln!(out, "round_costs: {}", costs.join(" "));
        }
        if let Some(c) = self.final_cost {
            let _ = writeln!(out, "final_cost: {c:.6}");
        }
        let _ = writeln!(out, "wall_time_ms: {:.3}", self.wall_time_ms);
        out
    }

    /// Same content as an object; details become string-valued members.
    pub fn to_json(&self) -> String {
        let mut obj = serde_json::Map::new();
        obj.insert("command".into(), self.command.clone().into());
        if let Some(seed) = self.seed {
            obj.insert("seed".into(), seed.into());
        }
        obj.insert("status".into(), self.status.clone().into());
        let details: serde_json::Map<String, serde_json::Value> =
            self.details.iter().map(|(k, v)| (k.clone(), v.clone().into())).collect();
        obj.insert("details".into(), details.into());
        obj.insert("round_costs".into(), self.round_costs.clone().into());
        if let Some(c) = self.final_cost {
            obj.insert("final_cost".into(), c.into());
        }
        obj.insert("wall_time_ms".into(), self.wall_time_ms.into());
        serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("plain values serialize")
    }
}
