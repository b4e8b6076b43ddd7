//! Turning a minimal fix set into feedback for the student.
//!
//! Levels are cumulative: (1) the number of changes, (2) their line numbers,
//! (3) the statement at fault, (4) the sub-expression at fault, (5) the new
//! code.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lang::{expr_to_string, simple_to_string, Kind, Node};
use crate::repair::{Fix, FixKind, MinimalFixSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FeedbackLevel(u8);

impl FeedbackLevel {
    pub const MIN: FeedbackLevel = FeedbackLevel(1);
    pub const MAX: FeedbackLevel = FeedbackLevel(5);

    pub fn new(level: u8) -> Option<FeedbackLevel> {
        (1..=5).contains(&level).then_some(FeedbackLevel(level))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl Default for FeedbackLevel {
    fn default() -> Self {
        FeedbackLevel::MAX
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackItem {
    pub line: u32,
    pub kind: FixKind,
    /// The statement or header item at fault; empty for insertions.
    pub original: String,
    pub replacement: Option<String>,
    /// Narrowest differing fragments, for modifications.
    #[serde(skip)]
    pub focus: Option<(String, String)>,
    #[serde(skip)]
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feedback {
    pub level: FeedbackLevel,
    pub change_count: usize,
    pub header: String,
    pub items: Vec<FeedbackItem>,
}

#[derive(Serialize)]
struct JsonFeedback<'a> {
    change_count: usize,
    items: Vec<JsonItem<'a>>,
}

#[derive(Serialize)]
struct JsonItem<'a> {
    line: u32,
    kind: FixKind,
    original: &'a str,
    replacement: Option<&'a str>,
}

impl Feedback {
    /// `{change_count, items: [{line, kind, original, replacement}]}`, with
    /// every detail regardless of level.
    pub fn to_json(&self) -> String {
        let doc = JsonFeedback {
            change_count: self.change_count,
            items: self
                .items
                .iter()
                .map(|i| JsonItem {
                    line: i.line,
                    kind: i.kind,
                    original: &i.original,
                    replacement: i.replacement.as_deref(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("feedback serializes")
    }
}

impl fmt::Display for Feedback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header)?;
        if self.level.get() >= 2 {
            for item in &self.items {
                writeln!(f, "- {}", item.message)?;
            }
        }
        Ok(())
    }
}

fn fragment(n: &Node) -> String {
    if n.kind().is_expr() {
        expr_to_string(n)
    } else {
        simple_to_string(n)
    }
}

/// A replacement that is itself an operation reads better in parentheses.
fn wrapped(n: &Node) -> String {
    match n.kind() {
        Kind::BinOp(_) | Kind::UnOp(_) => format!("({})", expr_to_string(n)),
        _ => fragment(n),
    }
}

/// Descends while exactly one child differs, returning the narrowest pair.
fn localize<'a>(mut a: &'a Node, mut b: &'a Node) -> (&'a Node, &'a Node) {
    while a.label == b.label && a.children.len() == b.children.len() {
        let mut differing = a.children.iter().zip(&b.children).filter(|(x, y)| !x.same_tree(y));
        match (differing.next(), differing.next()) {
            (Some((x, y)), None) => {
                a = x;
                b = y;
            }
            _ => break,
        }
    }
    (a, b)
}

fn item(fix: &Fix, level: u8) -> FeedbackItem {
    let line = fix.line;
    let original = fix.original.as_ref().map(fragment).unwrap_or_default();
    let replacement = fix.replacement.as_ref().map(fragment);
    let mut focus = None;
    let message = match fix.kind {
        FixKind::Insertion => match level {
            ..=4 => format!("A statement is missing at line {line}"),
            _ => format!("At line {line}, add {}", replacement.as_deref().unwrap_or_default()),
        },
        FixKind::Deletion => match level {
            ..=2 => format!("Line {line} needs a change"),
            _ => format!("On line {line}, remove {original}"),
        },
        FixKind::Modification => {
            let (e, c) = (
                fix.original.as_ref().expect("modification has S_e"),
                fix.replacement.as_ref().expect("modification has S_c"),
            );
            let (sub_e, sub_c) = localize(e, c);
            let whole = std::ptr::eq(sub_e, e);
            focus = Some((fragment(sub_e), wrapped(sub_c)));
            match level {
                ..=2 => format!("Line {line} needs a change"),
                _ if e.kind() == Kind::Epsilon => match level {
                    ..=4 => format!("A loop header part is missing on line {line}"),
                    _ => format!("On line {line}, add {} to the loop header", fragment(c)),
                },
                3 => format!("Check {original} on line {line}"),
                4 if whole => format!("On line {line}, rewrite {original}"),
                4 => format!("In {original} on line {line}, change {}", fragment(sub_e)),
                _ if whole => format!("On line {line}, replace {original} with {}", fragment(c)),
                _ => format!(
                    "In {original} on line {line}, change {} to {}",
                    fragment(sub_e),
                    wrapped(sub_c)
                ),
            }
        }
    };
    FeedbackItem {
        line,
        kind: fix.kind,
        original,
        replacement,
        focus,
        message,
    }
}

/// One item per fix, in source order.
pub fn translate(fm: &MinimalFixSet, level: FeedbackLevel) -> Feedback {
    let mut fixes: Vec<&Fix> = fm.fixes.iter().collect();
    fixes.sort_by_key(|f| (f.line, f.anchor));
    let n = fixes.len();
    Feedback {
        level,
        change_count: n,
        header: format!("The program requires {n} change{}", if n == 1 { "" } else { "s" }),
        items: fixes.into_iter().map(|f| item(f, level.get())).collect(),
    }
}
