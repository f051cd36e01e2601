//! Statement language, session state and script running for the `symcas`
//! command-line tool.

pub mod render;
pub mod session;
pub mod table;

pub use session::{Diagnostic, Options, OutputMode, Session, Value};

/// Transcript of a script run and the number of failed statements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptRun {
    pub transcript: String,
    pub diagnostics: Vec<String>,
}

impl ScriptRun {
    pub fn ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// Runs every line of `text` in order. Stops at the first error unless
/// `keep_going` is set.
pub fn run_script(session: &mut Session, text: &str, keep_going: bool) -> ScriptRun {
    let mut transcript = String::new();
    let mut diagnostics = Vec::new();
    for (n, line) in text.lines().enumerate() {
        match session.run_statement(line) {
            Ok(out) if out.is_empty() => {}
            Ok(out) => {
                transcript.push_str(&out);
                transcript.push('\n');
            }
            Err(d) => {
                diagnostics.push(format!("line {}: {}", n + 1, d.render(line)));
                if !keep_going {
                    break;
                }
            }
        }
    }
    ScriptRun { transcript, diagnostics }
}
