//! Plain-text and CSV renderings of a [`FitReport`].

use std::fmt::Write;

use super::FitReport;

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| x.to_string())
}

impl FitReport {
    pub fn to_text(&self) -> String {
        let (a, b) = self.evaluation_years();
        let bc = &self.boundary;
        let mut s = String::new();
        let _ = writeln!(s, "model:");
        for line in self.fitted.to_string().lines() {
            let _ = writeln!(s, "  {line}");
        }
        let _ = writeln!(s, "evaluation years: {a}-{b} ({} points)", b - a + 1);
        if let Some(y) = self.break_year {
            let _ = writeln!(s, "break after: {y}");
        }
        let _ = writeln!(
            s,
            "objective: {} = {}",
            self.objective, self.objective_value
        );
        let _ = writeln!(s, "r_squared: {}", self.r_squared);
        let _ = writeln!(s, "rms_dynamic: {}", self.rms_dynamic);
        let _ = writeln!(s, "rms_cumulative: {}", self.rms_cumulative);
        let _ = writeln!(s, "rmsfe: {}", opt(self.rmsfe));
        let _ = writeln!(
            s,
            "boundary: P0 = {} at {}, P1 = {} at {}, LF0 = {}, LF1 = {}",
            bc.p0,
            bc.start_year,
            bc.p1,
            bc.end_year,
            opt(bc.lf0),
            opt(bc.lf1)
        );
        s
    }

    /// `section,name,year,value` rows: coefficients, statistics, then both
    /// residual series.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("section,name,year,value\n");
        for (i, seg) in self.fitted.segments.iter().enumerate() {
            let mut row = |name: &str, v: String| {
                let _ = writeln!(s, "coefficient,segment{i}.{name},,{v}");
            };
            row("lf_coeff", seg.lf_coeff.to_string());
            row("lf_lag", seg.lf_lag.to_string());
            if let Some(c) = seg.ue_coeff {
                row("ue_coeff", c.to_string());
            }
            if let Some(l) = seg.ue_lag {
                row("ue_lag", l.to_string());
            }
            row("intercept", seg.intercept.to_string());
            if let Some(y) = seg.valid_from {
                row("valid_from", y.to_string());
            }
            if let Some(y) = seg.valid_to {
                row("valid_to", y.to_string());
            }
        }
        let stats = [
            ("objective", Some(self.objective_value)),
            ("r_squared", Some(self.r_squared)),
            ("rms_dynamic", Some(self.rms_dynamic)),
            ("rms_cumulative", Some(self.rms_cumulative)),
            ("rmsfe", self.rmsfe),
            ("p0", Some(self.boundary.p0)),
            ("p1", Some(self.boundary.p1)),
            ("lf0", self.boundary.lf0),
            ("lf1", self.boundary.lf1),
        ];
        for (name, v) in stats {
            if let Some(v) = v {
                let _ = writeln!(s, "statistic,{name},,{v}");
            }
        }
        for (name, series) in [
            ("dynamic", &self.residual_dynamic),
            ("cumulative", &self.residual_cumulative),
        ] {
            for (y, v) in series.iter() {
                let _ = writeln!(s, "residual,{name},{y},{v}");
            }
        }
        s
    }
}
