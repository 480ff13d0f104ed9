//! OpenQASM 2.0 subset reader and writer.
//!
//! Accepted programs declare one quantum register and apply gates from
//! [`GateKind`]. Angles are `<float>`, `pi`, `<float>*pi`, each optionally
//! negated and divided by an integer literal.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::ir::{Circuit, Gate, GateKind};

/// A parse failure with the 1-based position where it was detected.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct QasmError {
    pub line: usize,
    pub column: usize,
    pub kind: QasmErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QasmErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("unsupported statement `{0}`")]
    Unsupported(String),
    #[error("operand {register}[{index}] out of range (register size {size})")]
    OperandOutOfRange {
        register: String,
        index: usize,
        size: usize,
    },
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("no qreg declared before first gate")]
    MissingQreg,
    #[error("second qreg declaration (only one register is supported)")]
    DuplicateQreg,
    #[error("malformed angle expression: {0}")]
    MalformedAngle(String),
    #[error("unsupported OpenQASM version {0}")]
    Version(String),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Number(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, QasmError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, msg: String| QasmError {
        line,
        column,
        kind: QasmErrorKind::Syntax(msg),
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit()
            || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit))
        {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                } else {
                    return Err(err(l0, c0 + (j - start), "malformed exponent".into()));
                }
            }
            Tok::Number(chars[start..i].iter().collect())
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if chars.get(i) != Some(&'"') {
                return Err(err(l0, c0, "unterminated string".into()));
            }
            i += 1;
            Tok::Str(chars[start + 1..i - 1].iter().collect())
        } else if ";,[]()*/-+".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(err(l0, c0, format!("unexpected character `{c}`")));
        };
        col += i - start;
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(at: &Spanned, kind: QasmErrorKind) -> Result<T, QasmError> {
        Err(QasmError {
            line: at.line,
            column: at.column,
            kind,
        })
    }

    fn expect_sym(&mut self, c: char) -> Result<(), QasmError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Self::fail(
                &t,
                QasmErrorKind::Syntax(format!("expected `{c}`, found {}", t.tok)),
            )
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Spanned), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t)),
            other => Self::fail(
                &t,
                QasmErrorKind::Syntax(format!("expected identifier, found {other}")),
            ),
        }
    }

    fn expect_uint(&mut self) -> Result<(usize, Spanned), QasmError> {
        let t = self.next();
        if let Tok::Number(s) = &t.tok {
            if let Ok(v) = s.parse::<usize>() {
                return Ok((v, t));
            }
        }
        Self::fail(
            &t,
            QasmErrorKind::Syntax(format!("expected integer, found {}", t.tok)),
        )
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn angle(&mut self) -> Result<f64, QasmError> {
        let start = self.peek().clone();
        let malformed = |t: &Spanned, msg: &str| -> Result<f64, QasmError> {
            Self::fail(t, QasmErrorKind::MalformedAngle(msg.to_string()))
        };
        let sign = if self.eat_sym('-') { -1.0 } else { 1.0 };
        let t = self.next();
        let mut value = match &t.tok {
            Tok::Ident(s) if s == "pi" => PI,
            Tok::Number(s) => {
                let v: f64 = match s.parse() {
                    Ok(v) => v,
                    Err(_) => return malformed(&t, "bad number"),
                };
                if self.eat_sym('*') {
                    let p = self.next();
                    if !matches!(&p.tok, Tok::Ident(s) if s == "pi") {
                        return malformed(&p, "expected `pi` after `*`");
                    }
                    v * PI
                } else {
                    v
                }
            }
            _ => return malformed(&t, "expected number or `pi`"),
        };
        if self.eat_sym('/') {
            let d = self.next();
            let divisor = match &d.tok {
                Tok::Number(s) => s.parse::<u64>().ok().filter(|&v| v != 0),
                _ => None,
            };
            match divisor {
                Some(v) => value /= v as f64,
                None => return malformed(&d, "divisor must be a nonzero integer literal"),
            }
        }
        if self.peek().tok != Tok::Sym(')') {
            let t = self.peek().clone();
            return malformed(&t, "unexpected trailing tokens");
        }
        let value = sign * value;
        if !value.is_finite() {
            return malformed(&start, "angle is not finite");
        }
        Ok(value)
    }
}

/// Parses an OpenQASM 2.0 program in the supported subset.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };

    let (head, at) = p.expect_ident()?;
    if head != "OPENQASM" {
        return Parser::fail(
            &at,
            QasmErrorKind::Syntax("program must start with `OPENQASM 2.0;`".into()),
        );
    }
    let v = p.next();
    match &v.tok {
        Tok::Number(s) if s == "2.0" => {}
        Tok::Number(s) => return Parser::fail(&v, QasmErrorKind::Version(s.clone())),
        other => {
            return Parser::fail(
                &v,
                QasmErrorKind::Syntax(format!("expected version, found {other}")),
            )
        }
    }
    p.expect_sym(';')?;

    let mut register: Option<(String, Circuit)> = None;
    loop {
        let t = p.peek().clone();
        let word = match &t.tok {
            Tok::Eof => break,
            Tok::Ident(w) => w.clone(),
            other => {
                return Parser::fail(
                    &t,
                    QasmErrorKind::Syntax(format!("expected statement, found {other}")),
                )
            }
        };
        p.next();
        match word.as_str() {
            "include" => {
                let f = p.next();
                match &f.tok {
                    Tok::Str(s) if s == "qelib1.inc" => {}
                    Tok::Str(s) => {
                        return Parser::fail(
                            &f,
                            QasmErrorKind::Unsupported(format!("include \"{s}\"")),
                        )
                    }
                    other => {
                        return Parser::fail(
                            &f,
                            QasmErrorKind::Syntax(format!("expected file name, found {other}")),
                        )
                    }
                }
                p.expect_sym(';')?;
            }
            "qreg" => {
                if register.is_some() {
                    return Parser::fail(&t, QasmErrorKind::DuplicateQreg);
                }
                let (name, _) = p.expect_ident()?;
                p.expect_sym('[')?;
                let (size, _) = p.expect_uint()?;
                p.expect_sym(']')?;
                p.expect_sym(';')?;
                register = Some((name, Circuit::new(size)));
            }
            "creg" | "measure" | "barrier" | "reset" | "gate" | "opaque" | "if" => {
                return Parser::fail(&t, QasmErrorKind::Unsupported(word));
            }
            _ => {
                let Some(kind) = GateKind::from_name(&word) else {
                    return Parser::fail(&t, QasmErrorKind::UnknownGate(word));
                };
                let angle = if kind.has_angle() {
                    p.expect_sym('(')?;
                    let a = p.angle()?;
                    p.expect_sym(')')?;
                    Some(a)
                } else {
                    if p.peek().tok == Tok::Sym('(') {
                        let at = p.peek().clone();
                        return Parser::fail(
                            &at,
                            QasmErrorKind::Syntax(format!("gate `{word}` takes no parameters")),
                        );
                    }
                    None
                };
                let Some((reg_name, circuit)) = register.as_mut() else {
                    return Parser::fail(&t, QasmErrorKind::MissingQreg);
                };
                let mut qubits = Vec::with_capacity(2);
                loop {
                    let (name, at) = p.expect_ident()?;
                    if name != *reg_name {
                        return Parser::fail(&at, QasmErrorKind::UnknownRegister(name));
                    }
                    p.expect_sym('[')?;
                    let (index, at) = p.expect_uint()?;
                    p.expect_sym(']')?;
                    if index >= circuit.num_qubits() {
                        return Parser::fail(
                            &at,
                            QasmErrorKind::OperandOutOfRange {
                                register: name,
                                index,
                                size: circuit.num_qubits(),
                            },
                        );
                    }
                    qubits.push(index);
                    if !p.eat_sym(',') {
                        break;
                    }
                }
                p.expect_sym(';')?;
                let gate = Gate::new(kind, &qubits, angle).map_err(|e| QasmError {
                    line: t.line,
                    column: t.column,
                    kind: QasmErrorKind::InvalidGate(e.to_string()),
                })?;
                circuit
                    .push(gate)
                    .expect("operands checked against register size");
            }
        }
    }

    match register {
        Some((_, circuit)) => Ok(circuit),
        None => {
            let end = p.peek().clone();
            Parser::fail(&end, QasmErrorKind::MissingQreg)
        }
    }
}

/// Writes `circuit` as OpenQASM 2.0 over a register named `q`.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", circuit.num_qubits());
    for g in circuit.gates() {
        out.push_str(g.kind().name());
        if let Some(theta) = g.angle() {
            let _ = write!(out, "({theta:.16e})");
        }
        let operands: Vec<String> = g.qubits().iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, " {};", operands.join(","));
    }
    out
}
