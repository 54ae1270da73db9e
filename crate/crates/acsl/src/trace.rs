use std::fmt::Write as _;
use std::path::Path;

use acsl_core::solver::IterationRecord;
use acsl_core::SolverState;

use crate::error::Result;
use crate::matrix_io::write_text;

pub const TRACE_HEADER: &str = "iteration,objective,components,alpha";

/// One row per recorded iteration, the initial state included.
pub fn format_trace(history: &[IterationRecord]) -> String {
    let mut out = String::with_capacity(40 * (history.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in history {
        writeln!(
            out,
            "{},{:.16e},{},{:.16e}",
            r.iteration, r.objective, r.components, r.alpha
        )
        .expect("writing to a String");
    }
    out
}

pub fn emit_trace(state: &SolverState, path: &Path) -> Result<()> {
    write_text(path, &format_trace(&state.history))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_in_order() {
        let history = vec![
            IterationRecord {
                iteration: 0,
                objective: 2.5,
                components: 1,
                alpha: 1.0,
            },
            IterationRecord {
                iteration: 1,
                objective: 2.0,
                components: 2,
                alpha: 2.0,
            },
        ];
        let text = format_trace(&history);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("1,2.0000000000000000e0,2,"));
    }
}
