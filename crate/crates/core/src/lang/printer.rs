use super::ast::{Ast, Kind, Node};

const INDENT: &str = "    ";

pub fn pretty_print(ast: &Ast) -> String {
    let mut out = String::new();
    match ast.entry() {
        Some(func) => print_func(func, &mut out),
        None => {
            for stmt in &ast.root.children {
                print_stmt(stmt, 0, &mut out);
            }
        }
    }
    out
}

fn print_func(func: &Node, out: &mut String) {
    let params: Vec<String> = func
        .children
        .iter()
        .filter(|c| c.kind() == Kind::Param)
        .map(|p| {
            let name = p.children[0].payload().unwrap_or_default();
            match p.payload() {
                Some(ty) => format!("{name}: {ty}"),
                None => name.to_owned(),
            }
        })
        .collect();
    out.push_str(&format!(
        "func {}({}) ",
        func.payload().unwrap_or_default(),
        params.join(", ")
    ));
    print_block(func.children.last().expect("function body"), 0, out);
    out.push('\n');
}

fn print_block(block: &Node, depth: usize, out: &mut String) {
    out.push_str("{\n");
    for stmt in &block.children {
        print_stmt(stmt, depth + 1, out);
    }
    out.push_str(&INDENT.repeat(depth));
    out.push('}');
}

fn print_stmt(stmt: &Node, depth: usize, out: &mut String) {
    out.push_str(&INDENT.repeat(depth));
    match stmt.kind() {
        Kind::If => print_if(stmt, depth, out),
        Kind::While => {
            out.push_str(&format!("while ({}) ", expr_to_string(&stmt.children[0])));
            print_block(&stmt.children[1], depth, out);
        }
        Kind::For => {
            out.push_str(&format!(
                "for ({}; {}; {}) ",
                header_part(&stmt.children[0]),
                header_part(&stmt.children[1]),
                header_part(&stmt.children[2]),
            ));
            print_block(&stmt.children[3], depth, out);
        }
        Kind::Block => print_block(stmt, depth, out),
        _ => {
            out.push_str(&simple_to_string(stmt));
            out.push(';');
        }
    }
    out.push('\n');
}

fn print_if(stmt: &Node, depth: usize, out: &mut String) {
    out.push_str(&format!("if ({}) ", expr_to_string(&stmt.children[0])));
    print_block(&stmt.children[1], depth, out);
    if let Some(els) = stmt.children.get(2) {
        out.push_str(" else ");
        let inner = &els.children[0];
        if inner.kind() == Kind::If {
            print_if(inner, depth, out);
        } else {
            print_block(inner, depth, out);
        }
    }
}

fn header_part(n: &Node) -> String {
    match n.kind() {
        Kind::Epsilon => String::new(),
        Kind::Decl | Kind::Assign => simple_to_string(n),
        _ => expr_to_string(n),
    }
}

/// Renders a non-control statement (or a control header item) without the
/// trailing semicolon, as used in feedback messages.
pub fn simple_to_string(stmt: &Node) -> String {
    match stmt.kind() {
        Kind::Decl => match stmt.children.get(1) {
            Some(init) => format!("var {} = {}", expr_to_string(&stmt.children[0]), expr_to_string(init)),
            None => format!("var {}", expr_to_string(&stmt.children[0])),
        },
        Kind::Assign => format!(
            "{} {} {}",
            expr_to_string(&stmt.children[0]),
            stmt.payload().unwrap_or("="),
            expr_to_string(&stmt.children[1])
        ),
        Kind::Return => match stmt.children.first() {
            Some(v) => format!("return {}", expr_to_string(v)),
            None => "return".to_owned(),
        },
        Kind::Print => format!("print({})", expr_to_string(&stmt.children[0])),
        Kind::Epsilon => String::new(),
        Kind::If => format!("if ({})", expr_to_string(&stmt.children[0])),
        Kind::While => format!("while ({})", expr_to_string(&stmt.children[0])),
        Kind::For => format!(
            "for ({}; {}; {})",
            header_part(&stmt.children[0]),
            header_part(&stmt.children[1]),
            header_part(&stmt.children[2])
        ),
        _ => expr_to_string(stmt),
    }
}

pub fn expr_to_string(e: &Node) -> String {
    let mut out = String::new();
    write_expr(e, &mut out);
    out
}

fn prec(e: &Node) -> u8 {
    match e.kind() {
        Kind::BinOp(op) => op.precedence(),
        Kind::UnOp(_) => 7,
        _ => 8,
    }
}

fn write_expr(e: &Node, out: &mut String) {
    match e.kind() {
        Kind::Var | Kind::IntLit | Kind::BoolLit => out.push_str(e.payload().unwrap_or_default()),
        Kind::StrLit => write_str_lit(e.payload().unwrap_or_default(), out),
        Kind::Index => {
            write_expr(&e.children[0], out);
            out.push('[');
            write_expr(&e.children[1], out);
            out.push(']');
        }
        Kind::Call => {
            out.push_str(e.payload().unwrap_or_default());
            out.push('(');
            for (i, arg) in e.children.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(arg, out);
            }
            out.push(')');
        }
        Kind::UnOp(op) => {
            out.push_str(op.symbol());
            let operand = &e.children[0];
            // `- -x` would lex fine, but `-(-x)` reads better.
            if prec(operand) < 7 || operand.kind() == Kind::UnOp(super::ast::UnOp::Neg) {
                out.push('(');
                write_expr(operand, out);
                out.push(')');
            } else {
                write_expr(operand, out);
            }
        }
        Kind::BinOp(op) => {
            let p = op.precedence();
            let (lhs, rhs) = (&e.children[0], &e.children[1]);
            write_operand(lhs, prec(lhs) < p, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_operand(rhs, prec(rhs) <= p, out);
        }
        Kind::Epsilon => {}
        other => out.push_str(&format!("<{other}>")),
    }
}

fn write_operand(e: &Node, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write_expr(e, out);
        out.push(')');
    } else {
        write_expr(e, out);
    }
}

fn write_str_lit(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    #[test]
    fn prints_minimal_assignment() {
        let ast = parse("x=1;").unwrap();
        assert_eq!(pretty_print(&ast), "x = 1;\n");
    }

    #[test]
    fn keeps_needed_parentheses_only() {
        let ast = parse("x = (a - (b - c)) * ((d)) + -(e + f);").unwrap();
        assert_eq!(pretty_print(&ast), "x = (a - (b - c)) * d + -(e + f);\n");
    }

    #[test]
    fn nested_blocks_indent_and_reparse() {
        let src = "func f(n:int){for(var i=0;i<n;i+=1){if(i%2==0){while(false){print(\"a\\n\");}}else if(i>3){print(i);}else{}}}";
        let ast = parse(src).unwrap();
        let text = pretty_print(&ast);
        assert!(text.contains("\n            while (false) {\n"));
        assert!(text.contains("} else if (i > 3) {"));
        let again = parse(&text).unwrap();
        assert!(again.same_tree(&ast));
        assert_eq!(pretty_print(&again), text);
    }

    #[test]
    fn empty_for_header_round_trips() {
        let ast = parse("for (;;) { }").unwrap();
        let text = pretty_print(&ast);
        assert_eq!(text, "for (; ; ) {\n}\n");
        assert!(parse(&text).unwrap().same_tree(&ast));
    }
}
