use super::compile::{AssignOp, Body, Builtin, Compiled, Expr, Stmt, StmtKind, Target};
use super::value::Value;
use super::RuntimeErrorKind;
use crate::lang::{BinOp, UnOp};

const MAX_TEXT: usize = 1 << 20;
const MAX_ARRAY: i64 = 1 << 20;

pub(crate) enum Halt {
    Error(RuntimeErrorKind),
    Timeout,
}

type Exec<T> = Result<T, Halt>;

fn mismatch<T>() -> Exec<T> {
    Err(Halt::Error(RuntimeErrorKind::TypeMismatch))
}

enum Flow {
    Next,
    Return(Option<Value>),
}

pub(crate) struct Run {
    pub halt: Option<Halt>,
    pub output: String,
    pub steps: u64,
    pub returned: Option<Value>,
    pub reached: Vec<bool>,
}

pub(crate) fn run(program: &Compiled, args: &[Value], budget: u64) -> Run {
    let mut m = Machine {
        env: vec![None; program.slots],
        out: String::new(),
        steps: 0,
        budget,
        reached: vec![false; program.cov_ids.len()],
    };
    m.reached[program.root_cov as usize] = true;
    let result = m.start(program, args);
    let (halt, returned) = match result {
        Ok(ret) => (None, ret),
        Err(h) => (Some(h), None),
    };
    Run {
        halt,
        output: m.out,
        steps: m.steps,
        returned,
        reached: m.reached,
    }
}

struct Machine {
    env: Vec<Option<Value>>,
    out: String,
    steps: u64,
    budget: u64,
    reached: Vec<bool>,
}

fn type_matches(ty: Option<&str>, v: &Value) -> bool {
    match ty {
        None => true,
        Some(t) => t == v.type_name(),
    }
}

impl Machine {
    fn start(&mut self, program: &Compiled, args: &[Value]) -> Exec<Option<Value>> {
        if !program.params.is_empty() || !args.is_empty() {
            if program.params.len() != args.len() {
                return mismatch();
            }
            for (p, a) in program.params.iter().zip(args) {
                if !type_matches(p.ty.as_deref(), a) {
                    return mismatch();
                }
                self.env[p.slot as usize] = Some(a.clone());
            }
        }
        match self.body(&program.body)? {
            Flow::Next => Ok(None),
            Flow::Return(v) => Ok(v),
        }
    }

    fn tick(&mut self) -> Exec<()> {
        if self.steps >= self.budget {
            return Err(Halt::Timeout);
        }
        self.steps += 1;
        Ok(())
    }

    fn mark(&mut self, cov: u32) {
        self.reached[cov as usize] = true;
    }

    fn body(&mut self, body: &Body) -> Exec<Flow> {
        self.mark(body.cov);
        if let Some(e) = body.else_cov {
            self.mark(e);
        }
        for stmt in &body.stmts {
            if let Flow::Return(v) = self.stmt(stmt)? {
                return Ok(Flow::Return(v));
            }
        }
        Ok(Flow::Next)
    }

    fn cond(&mut self, e: &Expr, cov: u32) -> Exec<bool> {
        self.mark(cov);
        match self.eval(e)? {
            Value::Bool(b) => Ok(b),
            _ => mismatch(),
        }
    }

    fn stmt(&mut self, stmt: &Stmt) -> Exec<Flow> {
        self.tick()?;
        self.mark(stmt.cov);
        match &stmt.kind {
            StmtKind::Decl(slot, init) => {
                let v = match init {
                    Some(e) => Some(self.eval(e)?),
                    None => None,
                };
                self.env[*slot as usize] = v;
            }
            StmtKind::Assign(target, op, value) => self.assign(target, *op, value)?,
            StmtKind::If {
                cond,
                cond_cov,
                then,
                els,
            } => {
                if self.cond(cond, *cond_cov)? {
                    return self.body(then);
                } else if let Some(els) = els {
                    return self.body(els);
                }
            }
            StmtKind::While { cond, cond_cov, body } => {
                while self.cond(cond, *cond_cov)? {
                    if let Flow::Return(v) = self.body(body)? {
                        return Ok(Flow::Return(v));
                    }
                    self.tick()?;
                }
            }
            StmtKind::For {
                init,
                cond,
                update,
                omitted,
                body,
            } => {
                for c in omitted {
                    self.mark(*c);
                }
                if let Some(init) = init {
                    self.stmt(init)?;
                }
                loop {
                    if let Some((c, cov)) = cond {
                        if !self.cond(c, *cov)? {
                            break;
                        }
                    }
                    if let Flow::Return(v) = self.body(body)? {
                        return Ok(Flow::Return(v));
                    }
                    match update {
                        Some(u) => {
                            self.stmt(u)?;
                        }
                        None => self.tick()?,
                    }
                }
            }
            StmtKind::Return(value) => {
                let v = match value {
                    Some(e) => Some(self.eval(e)?),
                    None => None,
                };
                return Ok(Flow::Return(v));
            }
            StmtKind::Print(e) => {
                let v = self.eval(e)?;
                let text = v.to_string();
                if self.out.len() + text.len() + 1 > MAX_TEXT {
                    return Err(Halt::Error(RuntimeErrorKind::ResourceLimit));
                }
                self.out.push_str(&text);
                self.out.push('\n');
            }
            StmtKind::Eval(e) => {
                self.eval(e)?;
            }
            StmtKind::Block(b) => return self.body(b),
        }
        Ok(Flow::Next)
    }

    fn read(&self, slot: u32) -> Exec<&Value> {
        self.env[slot as usize]
            .as_ref()
            .ok_or(Halt::Error(RuntimeErrorKind::UninitializedRead))
    }

    fn assign(&mut self, target: &Target, op: AssignOp, value: &Expr) -> Exec<()> {
        let rhs = self.eval(value)?;
        match target {
            Target::Var(slot) => {
                let new = match op {
                    AssignOp::Set => rhs,
                    AssignOp::Add => add(self.read(*slot)?.clone(), rhs)?,
                    AssignOp::Sub => arith(BinOp::Sub, self.read(*slot)?, &rhs)?,
                    AssignOp::Mul => arith(BinOp::Mul, self.read(*slot)?, &rhs)?,
                };
                self.env[*slot as usize] = Some(new);
            }
            Target::Index(slot, idx) => {
                let i = match self.eval(idx)? {
                    Value::Int(i) => i,
                    _ => return mismatch(),
                };
                let rhs = match rhs {
                    Value::Int(v) => v,
                    _ => return mismatch(),
                };
                let arr = match self.env[*slot as usize].as_mut() {
                    None => return Err(Halt::Error(RuntimeErrorKind::UninitializedRead)),
                    Some(Value::Array(a)) => a,
                    Some(_) => return mismatch(),
                };
                let cell = usize::try_from(i)
                    .ok()
                    .and_then(|i| arr.get_mut(i))
                    .ok_or(Halt::Error(RuntimeErrorKind::IndexOutOfBounds))?;
                *cell = match op {
                    AssignOp::Set => rhs,
                    AssignOp::Add => cell.wrapping_add(rhs),
                    AssignOp::Sub => cell.wrapping_sub(rhs),
                    AssignOp::Mul => cell.wrapping_mul(rhs),
                };
            }
        }
        Ok(())
    }

    fn eval(&mut self, e: &Expr) -> Exec<Value> {
        match e {
            Expr::Lit(v) => Ok(v.clone()),
            Expr::Var(slot) => self.read(*slot).cloned(),
            Expr::Index(slot, idx) => {
                let i = match self.eval(idx)? {
                    Value::Int(i) => i,
                    _ => return mismatch(),
                };
                match self.read(*slot)? {
                    Value::Array(a) => usize::try_from(i)
                        .ok()
                        .and_then(|i| a.get(i))
                        .map(|v| Value::Int(*v))
                        .ok_or(Halt::Error(RuntimeErrorKind::IndexOutOfBounds)),
                    _ => mismatch(),
                }
            }
            Expr::Bin(BinOp::And, l, r) => match self.eval(l)? {
                Value::Bool(false) => Ok(Value::Bool(false)),
                Value::Bool(true) => match self.eval(r)? {
                    b @ Value::Bool(_) => Ok(b),
                    _ => mismatch(),
                },
                _ => mismatch(),
            },
            Expr::Bin(BinOp::Or, l, r) => match self.eval(l)? {
                Value::Bool(true) => Ok(Value::Bool(true)),
                Value::Bool(false) => match self.eval(r)? {
                    b @ Value::Bool(_) => Ok(b),
                    _ => mismatch(),
                },
                _ => mismatch(),
            },
            Expr::Bin(op, l, r) => {
                let a = self.eval(l)?;
                let b = self.eval(r)?;
                binary(*op, a, b)
            }
            Expr::Un(UnOp::Not, x) => match self.eval(x)? {
                Value::Bool(b) => Ok(Value::Bool(!b)),
                _ => mismatch(),
            },
            Expr::Un(UnOp::Neg, x) => match self.eval(x)? {
                Value::Int(v) => Ok(Value::Int(v.wrapping_neg())),
                _ => mismatch(),
            },
            Expr::Call(builtin, args) => {
                let vals = args.iter().map(|a| self.eval(a)).collect::<Exec<Vec<_>>>()?;
                call(*builtin, vals)
            }
            Expr::Invalid => mismatch(),
        }
    }
}

fn add(a: Value, b: Value) -> Exec<Value> {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => Ok(Value::Int(x.wrapping_add(y))),
        (a @ Value::Str(_), b) | (a, b @ Value::Str(_)) => {
            let mut s = match a {
                Value::Str(s) => s,
                other => other.to_string(),
            };
            s.push_str(&b.to_string());
            if s.len() > MAX_TEXT {
                return Err(Halt::Error(RuntimeErrorKind::ResourceLimit));
            }
            Ok(Value::Str(s))
        }
        _ => mismatch(),
    }
}

fn arith(op: BinOp, a: &Value, b: &Value) -> Exec<Value> {
    let (x, y) = match (a, b) {
        (Value::Int(x), Value::Int(y)) => (*x, *y),
        _ => return mismatch(),
    };
    let v = match op {
        BinOp::Add => x.wrapping_add(y),
        BinOp::Sub => x.wrapping_sub(y),
        BinOp::Mul => x.wrapping_mul(y),
        BinOp::Div | BinOp::Mod if y == 0 => return Err(Halt::Error(RuntimeErrorKind::DivByZero)),
        BinOp::Div => x.wrapping_div(y),
        BinOp::Mod => x.wrapping_rem(y),
        _ => unreachable!("not an arithmetic operator"),
    };
    Ok(Value::Int(v))
}

fn binary(op: BinOp, a: Value, b: Value) -> Exec<Value> {
    use std::cmp::Ordering;
    match op {
        BinOp::Add => add(a, b),
        BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Mod => arith(op, &a, &b),
        BinOp::Eq | BinOp::Ne => {
            if std::mem::discriminant(&a) != std::mem::discriminant(&b) {
                return mismatch();
            }
            Ok(Value::Bool((a == b) == (op == BinOp::Eq)))
        }
        BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
            let ord: Ordering = match (&a, &b) {
                (Value::Int(x), Value::Int(y)) => x.cmp(y),
                (Value::Str(x), Value::Str(y)) => x.cmp(y),
                _ => return mismatch(),
            };
            let r = match op {
                BinOp::Lt => ord.is_lt(),
                BinOp::Le => ord.is_le(),
                BinOp::Gt => ord.is_gt(),
                _ => ord.is_ge(),
            };
            Ok(Value::Bool(r))
        }
        BinOp::And | BinOp::Or => unreachable!("short-circuit operators handled by eval"),
    }
}

fn call(builtin: Builtin, args: Vec<Value>) -> Exec<Value> {
    match (builtin, args.as_slice()) {
        (Builtin::Len, [Value::Array(a)]) => Ok(Value::Int(a.len() as i64)),
        (Builtin::Len, [Value::Str(s)]) => Ok(Value::Int(s.chars().count() as i64)),
        (Builtin::Array, [Value::Int(n)]) => {
            if *n < 0 {
                Err(Halt::Error(RuntimeErrorKind::IndexOutOfBounds))
            } else if *n > MAX_ARRAY {
                Err(Halt::Error(RuntimeErrorKind::ResourceLimit))
            } else {
                Ok(Value::Array(vec![0; *n as usize]))
            }
        }
        (Builtin::Abs, [Value::Int(v)]) => Ok(Value::Int(v.wrapping_abs())),
        (Builtin::Min, [Value::Int(a), Value::Int(b)]) => Ok(Value::Int(*a.min(b))),
        (Builtin::Max, [Value::Int(a), Value::Int(b)]) => Ok(Value::Int(*a.max(b))),
        _ => mismatch(),
    }
}
