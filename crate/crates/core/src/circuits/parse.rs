//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 3          # header, must come first
//! h 0
//! u3 1.5707963267948966 0 0 2
//! cx 0 1
//! ```
//!
//! Comments run from `#` to end of line; blank lines are ignored. Angles are
//! decimal radians.

use std::fmt::Write as _;

use thiserror::Error;

use super::circuit::Circuit;
use super::gate::{Gate, GateKind};
use super::CircuitError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("missing `qubits N` header")]
    MissingHeader,
    #[error("duplicate `qubits` header")]
    DuplicateHeader,
    #[error("unknown mnemonic `{0}`")]
    UnknownMnemonic(String),
    #[error("`{mnemonic}` expects {expected} operand(s), found {found}")]
    Arity {
        mnemonic: String,
        expected: usize,
        found: usize,
    },
    #[error("malformed qubit index `{0}`")]
    MalformedIndex(String),
    #[error("index out of range: qubit {qubit} on a {num_qubits}-qubit register")]
    IndexOutOfRange { qubit: usize, num_qubits: usize },
    #[error("qubit {0} repeated")]
    RepeatedQubit(usize),
    #[error("malformed angle literal `{0}`")]
    MalformedAngle(String),
}

/// Parse failure with 1-based line and column of the offending token.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in code.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &code[s..i],
                    column: code[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &code[s..],
            column: code[..s].chars().count() + 1,
        });
    }
    out
}

fn parse_index(tok: &Token<'_>, line: usize) -> Result<usize, ParseError> {
    tok.text.parse::<usize>().map_err(|_| ParseError {
        line,
        column: tok.column,
        kind: ParseErrorKind::MalformedIndex(tok.text.to_string()),
    })
}

fn parse_angle(tok: &Token<'_>, line: usize) -> Result<f64, ParseError> {
    let malformed = || ParseError {
        line,
        column: tok.column,
        kind: ParseErrorKind::MalformedAngle(tok.text.to_string()),
    };
    let looks_decimal = tok
        .text
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    if !looks_decimal {
        return Err(malformed());
    }
    match tok.text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(malformed()),
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = tokenize(raw);
        let Some(head) = toks.first() else { continue };
        let err = |column: usize, kind: ParseErrorKind| ParseError { line, column, kind };
        let mnemonic = head.text.to_ascii_lowercase();

        if mnemonic == "qubits" {
            if circuit.is_some() {
                return Err(err(head.column, ParseErrorKind::DuplicateHeader));
            }
            if toks.len() != 2 {
                return Err(err(
                    head.column,
                    ParseErrorKind::Arity {
                        mnemonic,
                        expected: 1,
                        found: toks.len() - 1,
                    },
                ));
            }
            circuit = Some(Circuit::new(parse_index(&toks[1], line)?));
            continue;
        }
        let Some(c) = circuit.as_mut() else {
            return Err(err(head.column, ParseErrorKind::MissingHeader));
        };

        let (angles, qubits) = match mnemonic.as_str() {
            "h" | "x" | "y" | "z" | "s" | "t" => (0, 1),
            "u3" => (3, 1),
            "cx" | "ch" | "swap" => (0, 2),
            _ => return Err(err(head.column, ParseErrorKind::UnknownMnemonic(head.text.to_string()))),
        };
        let operands = &toks[1..];
        if operands.len() != angles + qubits {
            return Err(err(
                head.column,
                ParseErrorKind::Arity {
                    mnemonic,
                    expected: angles + qubits,
                    found: operands.len(),
                },
            ));
        }
        let angle_vals = operands[..angles]
            .iter()
            .map(|t| parse_angle(t, line))
            .collect::<Result<Vec<_>, _>>()?;
        let mut targets = Vec::with_capacity(qubits);
        for tok in &operands[angles..] {
            let q = parse_index(tok, line)?;
            if q >= c.num_qubits() {
                return Err(err(
                    tok.column,
                    ParseErrorKind::IndexOutOfRange {
                        qubit: q,
                        num_qubits: c.num_qubits(),
                    },
                ));
            }
            if targets.contains(&q) {
                return Err(err(tok.column, ParseErrorKind::RepeatedQubit(q)));
            }
            targets.push(q);
        }
        let kind = match mnemonic.as_str() {
            "h" => GateKind::H,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "s" => GateKind::S,
            "t" => GateKind::T,
            "u3" => GateKind::U3 {
                theta: angle_vals[0],
                phi: angle_vals[1],
                lambda: angle_vals[2],
            },
            "cx" => GateKind::Cnot,
            "ch" => GateKind::Ch,
            _ => GateKind::Swap,
        };
        c.push(Gate { kind, targets })
            .expect("operands were validated above");
    }
    circuit.ok_or(ParseError {
        line: last_line.max(1),
        column: 1,
        kind: ParseErrorKind::MissingHeader,
    })
}

/// Inverse of [`parse_circuit`]. Angles use the shortest round-trip decimal
/// representation. `Unitary` payloads have no text form.
pub fn render_circuit(circuit: &Circuit) -> Result<String, CircuitError> {
    let mut out = format!("qubits {}\n", circuit.num_qubits());
    for g in circuit.gates() {
        match &g.kind {
            GateKind::Unitary(_) => return Err(CircuitError::Unrenderable("unitary")),
            GateKind::U3 { theta, phi, lambda } => {
                let _ = writeln!(out, "u3 {theta:?} {phi:?} {lambda:?} {}", g.targets[0]);
            }
            k => {
                out.push_str(k.mnemonic());
                for q in &g.targets {
                    let _ = write!(out, " {q}");
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_hadamard() {
        let c = parse_circuit("qubits 1\nh 0").unwrap();
        assert_eq!(c.num_qubits(), 1);
        assert_eq!(c.gates(), &[Gate::h(0)]);
    }

    #[test]
    fn controlled_order() {
        let c = parse_circuit("qubits 3\ncx 0 1\nch 2 1").unwrap();
        assert_eq!(c.gates(), &[Gate::cnot(0, 1), Gate::ch(2, 1)]);
    }

    #[test]
    fn out_of_range_reports_line() {
        let e = parse_circuit("qubits 2\ncx 0 2").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.column, 6);
        assert!(e.to_string().contains("index out of range"), "{e}");
    }

    #[test]
    fn comments_and_blanks() {
        let c = parse_circuit("# prep\n\nqubits 2 # two\n  x 1   # flip\n\n").unwrap();
        assert_eq!(c.gates(), &[Gate::x(1)]);
    }

    #[test]
    fn malformed_angle_column() {
        let e = parse_circuit("qubits 1\nu3 0.5 pi 0 0").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        assert!(matches!(e.kind, ParseErrorKind::MalformedAngle(_)));
    }

    #[test]
    fn header_required() {
        assert!(matches!(parse_circuit("h 0").unwrap_err().kind, ParseErrorKind::MissingHeader));
        assert!(matches!(parse_circuit("").unwrap_err().kind, ParseErrorKind::MissingHeader));
    }

    #[test]
    fn render_round_trip() {
        let text = "qubits 3\nh 0\nu3 0.1 -2.5 3.141592653589793 2\ncx 2 0\nswap 1 2\nch 0 1\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(render_circuit(&c).unwrap(), text);
    }
}
