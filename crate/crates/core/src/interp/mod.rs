//! Sandboxed execution of MiniImp programs against test suites.
//!
//! Execution is deterministic and bounded by a step budget: every executed
//! statement and every loop iteration costs one step. Runtime faults are
//! reported as outcomes, never as engine errors.

mod compile;
mod exec;
mod value;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{Ast, NodeId};

pub use compile::Compiled;
pub use value::Value;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuntimeErrorKind {
    DivByZero,
    IndexOutOfBounds,
    UninitializedRead,
    TypeMismatch,
    /// Output, string or array growth beyond the sandbox limits.
    ResourceLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Pass,
    WrongOutput,
    RuntimeError(RuntimeErrorKind),
    Timeout,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::RuntimeError(k) => write!(f, "RuntimeError({k:?})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub name: String,
    #[serde(default)]
    pub args: Vec<Value>,
    pub expected_output: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_return: Option<Value>,
}

/// How captured output is compared with the expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMatch {
    Exact,
    /// Trailing whitespace on each line and trailing blank lines are ignored.
    #[default]
    TrimTrailing,
}

impl OutputMatch {
    pub fn matches(self, actual: &str, expected: &str) -> bool {
        match self {
            OutputMatch::Exact => actual == expected,
            OutputMatch::TrimTrailing => normalize(actual) == normalize(expected),
        }
    }
}

fn normalize(text: &str) -> String {
    let lines: Vec<&str> = text.lines().map(str::trim_end).collect();
    let keep = lines.iter().rposition(|l| !l.is_empty()).map_or(0, |i| i + 1);
    lines[..keep].join("\n")
}

/// A test-suite document: `{entry, tests: [{name, args, expected_output, expected_return?}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestSuite {
    pub entry: String,
    pub tests: Vec<TestCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default)]
    pub output_match: OutputMatch,
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("cannot read test suite")]
    Io(#[from] std::io::Error),
    #[error("malformed test suite")]
    Json(#[from] serde_json::Error),
    #[error("test suite has no tests")]
    Empty,
}

impl TestSuite {
    pub fn from_json(text: &str) -> Result<TestSuite, SuiteError> {
        let suite: TestSuite = serde_json::from_str(text)?;
        if suite.tests.is_empty() {
            return Err(SuiteError::Empty);
        }
        Ok(suite)
    }

    pub fn load(path: &Path) -> Result<TestSuite, SuiteError> {
        TestSuite::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite serializes")
    }

    pub fn budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub status: Status,
    pub output: String,
    pub returned: Option<Value>,
    pub steps_used: u64,
    /// Node ids of statements, control predicates and blocks executed at least once.
    pub reached: BTreeSet<NodeId>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl Compiled {
    fn judge(&self, t: &TestCase, budget: u64, matching: OutputMatch) -> (Status, exec::Run) {
        let run = exec::run(self, &t.args, budget);
        let status = match &run.halt {
            Some(exec::Halt::Timeout) => Status::Timeout,
            Some(exec::Halt::Error(k)) => Status::RuntimeError(*k),
            None => {
                let output_ok = matching.matches(&run.output, &t.expected_output);
                let return_ok = t
                    .expected_return
                    .as_ref()
                    .is_none_or(|want| run.returned.as_ref() == Some(want));
                if output_ok && return_ok {
                    Status::Pass
                } else {
                    Status::WrongOutput
                }
            }
        };
        (status, run)
    }

    pub fn execute(&self, t: &TestCase, budget: u64, matching: OutputMatch) -> RunOutcome {
        let (status, run) = self.judge(t, budget, matching);
        let reached = run
            .reached
            .iter()
            .zip(&self.cov_ids)
            .filter_map(|(hit, id)| hit.then_some(*id))
            .collect();
        RunOutcome {
            status,
            output: run.output,
            returned: run.returned,
            steps_used: run.steps,
            reached,
        }
    }

    /// True iff every test passes; stops at the first failure.
    pub fn passes(&self, suite: &TestSuite) -> bool {
        suite
            .tests
            .iter()
            .all(|t| self.judge(t, suite.budget(), suite.output_match).0 == Status::Pass)
    }

    /// Index of a failing test, or `None` if all pass. Test `first` runs
    /// before the others.
    pub fn first_failure(&self, suite: &TestSuite, first: usize) -> Option<usize> {
        let n = suite.tests.len();
        (0..n)
            .map(|i| (first + i) % n)
            .find(|&i| self.judge(&suite.tests[i], suite.budget(), suite.output_match).0 != Status::Pass)
    }
}

pub fn execute(p: &Ast, t: &TestCase, budget: u64) -> RunOutcome {
    Compiled::new(p).execute(t, budget, OutputMatch::default())
}

pub fn run_tests(p: &Ast, suite: &TestSuite) -> (bool, Vec<RunOutcome>) {
    let compiled = Compiled::new(p);
    let outcomes: Vec<RunOutcome> = suite
        .tests
        .iter()
        .map(|t| compiled.execute(t, suite.budget(), suite.output_match))
        .collect();
    (outcomes.iter().all(RunOutcome::passed), outcomes)
}

pub fn passes(p: &Ast, suite: &TestSuite) -> bool {
    Compiled::new(p).passes(suite)
}

/// Union of the reached sets over the whole suite.
pub fn coverage(p: &Ast, suite: &TestSuite) -> BTreeSet<NodeId> {
    let compiled = Compiled::new(p);
    suite
        .tests
        .iter()
        .flat_map(|t| compiled.execute(t, suite.budget(), suite.output_match).reached)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, Kind};

    fn case(expected: &str) -> TestCase {
        TestCase {
            name: "t".into(),
            args: Vec::new(),
            expected_output: expected.into(),
            expected_return: None,
        }
    }

    fn run(src: &str, expected: &str) -> RunOutcome {
        execute(&parse(src).unwrap(), &case(expected), DEFAULT_BUDGET)
    }

    #[test]
    fn print_passes() {
        assert_eq!(run("print(\"X\");", "X").status, Status::Pass);
    }

    #[test]
    fn infinite_loop_times_out() {
        let out = run("while (true) { }", "");
        assert_eq!(out.status, Status::Timeout);
        assert_eq!(out.steps_used, DEFAULT_BUDGET);
    }

    #[test]
    fn division_by_zero() {
        let out = run("var x = 1 / 0;", "");
        assert_eq!(out.status, Status::RuntimeError(RuntimeErrorKind::DivByZero));
    }

    #[test]
    fn runtime_error_kinds() {
        let k = |src| match run(src, "").status {
            Status::RuntimeError(k) => k,
            other => panic!("{other:?}"),
        };
        assert_eq!(k("var a = array(2); a[2] = 1;"), RuntimeErrorKind::IndexOutOfBounds);
        assert_eq!(k("var a; print(a);"), RuntimeErrorKind::UninitializedRead);
        assert_eq!(k("print(y);"), RuntimeErrorKind::UninitializedRead);
        assert_eq!(k("var b = 1 < \"x\";"), RuntimeErrorKind::TypeMismatch);
        assert_eq!(k("if (1) { }"), RuntimeErrorKind::TypeMismatch);
        assert_eq!(k("nosuch(1);"), RuntimeErrorKind::TypeMismatch);
        assert_eq!(k("var x = 5 % 0;"), RuntimeErrorKind::DivByZero);
    }

    #[test]
    fn empty_body_with_empty_output_passes() {
        let ast = parse("func main() { }").unwrap();
        let (all, outcomes) = run_tests(
            &ast,
            &TestSuite {
                entry: "main".into(),
                tests: vec![case("")],
                budget: None,
                output_match: OutputMatch::default(),
            },
        );
        assert!(all);
        assert_eq!(outcomes.len(), 1);
    }

    #[test]
    fn canonical_print_forms_and_concatenation() {
        let src = r#"var a = array(3); a[1] = 7; print(a); print(true); print("n=" + 4); print(-3 + 10 / 3);"#;
        let out = run(src, "");
        assert_eq!(out.output, "[0, 7, 0]\ntrue\nn=4\n0\n");
    }

    #[test]
    fn params_bind_and_return_is_checked() {
        let ast = parse("func add(a: int, b: int) { return a + b; }").unwrap();
        let mut t = case("");
        t.args = vec![Value::Int(2), Value::Int(3)];
        t.expected_return = Some(Value::Int(5));
        assert!(execute(&ast, &t, 100).passed());
        t.expected_return = Some(Value::Int(6));
        assert_eq!(execute(&ast, &t, 100).status, Status::WrongOutput);
        t.args = vec![Value::Int(2), Value::Str("x".into())];
        assert_eq!(
            execute(&ast, &t, 100).status,
            Status::RuntimeError(RuntimeErrorKind::TypeMismatch)
        );
    }

    #[test]
    fn trailing_whitespace_is_normalized() {
        let src = "print(\"ab  \");";
        assert!(run(src, "ab\n\n").passed());
        let ast = parse(src).unwrap();
        let c = Compiled::new(&ast);
        assert_eq!(
            c.execute(&case("ab\n"), 10, OutputMatch::Exact).status,
            Status::WrongOutput
        );
    }

    #[test]
    fn straight_line_covers_every_statement() {
        let ast = parse("x = 1; y = x; print(y);").unwrap();
        let reached = run_tests(
            &ast,
            &TestSuite {
                entry: String::new(),
                tests: vec![case("1")],
                budget: None,
                output_match: OutputMatch::default(),
            },
        )
        .1
        .remove(0)
        .reached;
        for s in &ast.root.children {
            assert!(reached.contains(&s.id));
        }
    }

    #[test]
    fn dead_branch_is_not_covered() {
        let ast = parse("if (false) { print(1); } print(2);").unwrap();
        let suite = TestSuite {
            entry: String::new(),
            tests: vec![case("2")],
            budget: None,
            output_match: OutputMatch::default(),
        };
        let cov = coverage(&ast, &suite);
        let dead = ast.root.preorder().find(|n| n.kind() == Kind::Print).unwrap();
        assert!(!cov.contains(&dead.id));
        let cond = &ast.root.children[0].children[0];
        assert!(cov.contains(&cond.id));
    }

    #[test]
    fn budget_boundary() {
        let ast = parse("var i = 0; while (i < 3) { i += 1; }").unwrap();
        let out = execute(&ast, &case(""), DEFAULT_BUDGET);
        assert!(out.passed());
        let exact = execute(&ast, &case(""), out.steps_used);
        assert!(exact.passed());
        let short = execute(&ast, &case(""), out.steps_used - 1);
        assert_eq!(short.status, Status::Timeout);
    }
}
