//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 3
//! allow freeform        # optional, admits gates with |A| != |B|
//! G H RZ(pi/4) @ 1      # G or J with two blocks
//! FSWAP @ 2,3
//! X @ 1
//! ```

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use super::{validate_gate, CircuitIr, GateApp, GateOp, OneQubitGate, TwoQubitGate};
use crate::error::Error;
use crate::linalg::{Tolerances, MAX_QUBITS};

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    MissingHeader,
    UnknownGate(String),
    BadAngle(String),
    PositionOutOfRange { pos: usize, n_qubits: usize },
    NonNearestNeighbour { first: usize, second: usize },
    DeterminantMismatch { det_a: Complex64, det_b: Complex64 },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::MissingHeader => write!(f, "expected `qubits N` as the first line"),
            ParseErrorKind::UnknownGate(name) => write!(f, "unknown gate `{name}`"),
            ParseErrorKind::BadAngle(text) => write!(f, "cannot read angle `{text}`"),
            ParseErrorKind::PositionOutOfRange { pos, n_qubits } => {
                write!(f, "wire {pos} out of range for {n_qubits} qubits")
            }
            ParseErrorKind::NonNearestNeighbour { first, second } => {
                write!(f, "two-qubit gates need adjacent wires, got {first},{second}")
            }
            ParseErrorKind::DeterminantMismatch { det_a, det_b } => write!(
                f,
                "determinant mismatch: |A| = {:.6}{:+.6}i, |B| = {:.6}{:+.6}i (add `allow freeform` to accept)",
                det_a.re, det_a.im, det_b.re, det_b.im
            ),
        }
    }
}

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

impl std::error::Error for ParseError {}

/// Reads a decimal angle or `[-][M*]pi[/K]`, in radians.
pub fn parse_angle(text: &str) -> Option<f64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = t.to_ascii_lowercase();
    if !lower.contains("pi") {
        return t.parse::<f64>().ok().filter(|v| v.is_finite());
    }
    let (sign, rest) = match lower.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, lower.as_str()),
    };
    let (mult, rest) = match rest.split_once('*') {
        Some((m, r)) => (m.parse::<f64>().ok()?, r),
        None => (1.0, rest),
    };
    let rest = rest.strip_prefix("pi")?;
    let div = match rest.strip_prefix('/') {
        Some(k) => k.parse::<f64>().ok().filter(|&k| k != 0.0)?,
        None if rest.is_empty() => 1.0,
        None => return None,
    };
    let v = sign * mult * PI / div;
    v.is_finite().then_some(v)
}

struct Token {
    name: String,
    param: Option<(String, usize)>,
    column: usize,
}

struct LineCtx {
    line: usize,
}

impl LineCtx {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column,
            kind,
        }
    }

    fn syntax(&self, column: usize, msg: impl Into<String>) -> ParseError {
        self.err(column, ParseErrorKind::Syntax(msg.into()))
    }
}

/// Splits `NAME`, `NAME(param)` words; `offset` is the 0-based column of `text`.
fn tokenize(ctx: &LineCtx, text: &str, offset: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if !(chars[i].is_ascii_alphabetic() || chars[i] == '_') {
            return Err(ctx.syntax(offset + i + 1, format!("unexpected `{}`", chars[i])));
        }
        while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
            i += 1;
        }
        let name: String = chars[start..i].iter().collect();
        let mut j = i;
        while j < chars.len() && chars[j].is_whitespace() {
            j += 1;
        }
        let mut param = None;
        if j < chars.len() && chars[j] == '(' {
            let open = j;
            let close = chars[open..]
                .iter()
                .position(|&c| c == ')')
                .map(|p| open + p)
                .ok_or_else(|| ctx.syntax(offset + open + 1, "unclosed `(`"))?;
            param = Some((chars[open + 1..close].iter().collect(), offset + open + 2));
            i = close + 1;
        }
        tokens.push(Token {
            name,
            param,
            column: offset + start + 1,
        });
    }
    Ok(tokens)
}

fn angle_of(ctx: &LineCtx, tok: &Token) -> Result<f64, ParseError> {
    let (text, column) = tok
        .param
        .as_ref()
        .ok_or_else(|| ctx.syntax(tok.column, format!("`{}` needs an angle", tok.name)))?;
    parse_angle(text).ok_or_else(|| ctx.err(*column, ParseErrorKind::BadAngle(text.trim().to_string())))
}

fn no_param(ctx: &LineCtx, tok: &Token) -> Result<(), ParseError> {
    match &tok.param {
        Some((_, column)) => Err(ctx.syntax(*column, format!("`{}` takes no parameter", tok.name))),
        None => Ok(()),
    }
}

fn block_of(ctx: &LineCtx, tok: &Token) -> Result<OneQubitGate, ParseError> {
    let upper = tok.name.to_ascii_uppercase();
    let fixed = |g| no_param(ctx, tok).map(|_| g);
    match upper.as_str() {
        "I" => fixed(OneQubitGate::I),
        "X" => fixed(OneQubitGate::X),
        "Y" => fixed(OneQubitGate::Y),
        "Z" => fixed(OneQubitGate::Z),
        "H" => fixed(OneQubitGate::H),
        "P" => angle_of(ctx, tok).map(OneQubitGate::P),
        "RX" => angle_of(ctx, tok).map(OneQubitGate::Rx),
        "RY" => angle_of(ctx, tok).map(OneQubitGate::Ry),
        "RZ" => angle_of(ctx, tok).map(OneQubitGate::Rz),
        _ => Err(ctx.err(tok.column, ParseErrorKind::UnknownGate(tok.name.clone()))),
    }
}

fn gate_op(ctx: &LineCtx, tokens: &[Token], at_column: usize) -> Result<GateOp, ParseError> {
    let head = tokens
        .first()
        .ok_or_else(|| ctx.syntax(at_column, "missing gate name before `@`"))?;
    let upper = head.name.to_ascii_uppercase();
    let arity = |k: usize| -> Result<(), ParseError> {
        if tokens.len() != k + 1 {
            let column = tokens.get(k + 1).map_or(head.column, |t| t.column);
            return Err(ctx.syntax(
                column,
                format!("`{upper}` takes {k} block(s), found {}", tokens.len() - 1),
            ));
        }
        Ok(())
    };
    match upper.as_str() {
        "G" | "J" => {
            no_param(ctx, head)?;
            arity(2)?;
            let (a, b) = (block_of(ctx, &tokens[1])?, block_of(ctx, &tokens[2])?);
            Ok(if upper == "G" { GateOp::G(a, b) } else { GateOp::J(a, b) })
        }
        "X" => no_param(ctx, head).and(arity(0)).map(|_| GateOp::X),
        "FSWAP" | "GHH" | "SWAP" | "CZ" => {
            no_param(ctx, head)?;
            arity(0)?;
            Ok(GateOp::Named(match upper.as_str() {
                "FSWAP" => TwoQubitGate::Fswap,
                "GHH" => TwoQubitGate::Ghh,
                "SWAP" => TwoQubitGate::Swap,
                _ => TwoQubitGate::Cz,
            }))
        }
        "CPHASE" => {
            arity(0)?;
            angle_of(ctx, head).map(|t| GateOp::Named(TwoQubitGate::Cphase(t)))
        }
        _ => Err(ctx.err(head.column, ParseErrorKind::UnknownGate(head.name.clone()))),
    }
}

/// Wire list after `@`: one index, or two comma/space separated indices.
fn positions(ctx: &LineCtx, text: &str, offset: usize) -> Result<Vec<usize>, ParseError> {
    let mut out = Vec::new();
    let mut column = offset;
    for piece in text.split(|c: char| c == ',' || c.is_whitespace()) {
        if !piece.is_empty() {
            let value = piece
                .parse::<usize>()
                .map_err(|_| ctx.syntax(column + 1, format!("expected a wire index, found `{piece}`")))?;
            out.push(value);
        }
        column += piece.chars().count() + 1;
    }
    if out.is_empty() || out.len() > 2 {
        return Err(ctx.syntax(offset + 1, "expected `@ k` or `@ k,k+1`"));
    }
    Ok(out)
}

fn parse_header(ctx: &LineCtx, body: &str, column: usize) -> Result<usize, ParseError> {
    let mut words = body.split_whitespace();
    if !words.next().is_some_and(|w| w.eq_ignore_ascii_case("qubits")) {
        return Err(ctx.err(column, ParseErrorKind::MissingHeader));
    }
    let n = words
        .next()
        .and_then(|w| w.parse::<usize>().ok())
        .filter(|&n| (1..=MAX_QUBITS).contains(&n))
        .ok_or_else(|| ctx.syntax(column, format!("qubit count must be 1..={MAX_QUBITS}")))?;
    if words.next().is_some() {
        return Err(ctx.syntax(column, "trailing text after qubit count"));
    }
    Ok(n)
}

pub fn parse_circuit(text: &str) -> Result<CircuitIr, ParseError> {
    let tol = Tolerances::default();
    let mut n_qubits = None;
    let mut freeform = false;
    let mut gates = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let ctx = LineCtx { line: idx + 1 };
        last_line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let indent = body.chars().take_while(|c| c.is_whitespace()).count();
        let column = indent + 1;
        let Some(n) = n_qubits else {
            n_qubits = Some(parse_header(&ctx, body, column)?);
            continue;
        };
        let words: Vec<&str> = body.split_whitespace().collect();
        if words.len() == 2
            && words[0].eq_ignore_ascii_case("allow")
            && words[1].eq_ignore_ascii_case("freeform")
        {
            if !gates.is_empty() {
                return Err(ctx.syntax(column, "`allow freeform` must precede the gates"));
            }
            freeform = true;
            continue;
        }
        let Some(at) = body.find('@') else {
            return Err(ctx.syntax(column, "missing `@ position`"));
        };
        let at_column = body[..at].chars().count() + 1;
        let tokens = tokenize(&ctx, &body[..at], 0)?;
        let op = gate_op(&ctx, &tokens, at_column)?;
        let pos = positions(&ctx, &body[at + 1..], at_column)?;
        let app = GateApp::new(op, pos[0]);
        let width = app.width();
        if pos.len() == 2 {
            if width == 1 {
                return Err(ctx.syntax(at_column, "one-qubit gate takes a single wire"));
            }
            if pos[1] != pos[0] + 1 {
                return Err(ctx.err(
                    at_column,
                    ParseErrorKind::NonNearestNeighbour {
                        first: pos[0],
                        second: pos[1],
                    },
                ));
            }
        }
        let head_column = tokens[0].column;
        match validate_gate(&app, n, freeform, &tol) {
            Ok(()) => gates.push(app),
            Err(Error::WireOutOfRange { .. }) => {
                return Err(ctx.err(
                    at_column,
                    ParseErrorKind::PositionOutOfRange {
                        pos: pos[0] + width - 1,
                        n_qubits: n,
                    },
                ))
            }
            Err(Error::DeterminantMismatch { det_a, det_b }) => {
                return Err(ctx.err(head_column, ParseErrorKind::DeterminantMismatch { det_a, det_b }))
            }
            Err(other) => return Err(ctx.syntax(head_column, other.to_string())),
        }
    }
    let n = n_qubits.ok_or(ParseError {
        line: last_line.max(1),
        column: 1,
        kind: ParseErrorKind::MissingHeader,
    })?;
    Ok(CircuitIr::new(n, freeform, gates).expect("gates validated line by line"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::circuit_to_operator;

    #[test]
    fn single_gate() {
        let c = parse_circuit("qubits 2\nG H H @ 1").unwrap();
        assert_eq!(c.gates(), &[GateApp::new(GateOp::G(OneQubitGate::H, OneQubitGate::H), 1)]);
    }

    #[test]
    fn swap_is_rejected_with_determinants() {
        let err = parse_circuit("qubits 2\nG I X @ 1").unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));
        match err.kind {
            ParseErrorKind::DeterminantMismatch { det_a, det_b } => {
                assert!((det_a - 1.0).norm() < 1e-15);
                assert!((det_b + 1.0).norm() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("determinant mismatch"));
        let err = parse_circuit("qubits 2\nswap @ 1").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::DeterminantMismatch { .. }));
        assert!(parse_circuit("qubits 2\nallow freeform\nG I X @ 1").is_ok());
    }

    #[test]
    fn generalised_generator() {
        let c = parse_circuit("qubits 3\nFSWAP @ 2\nX @ 1").unwrap();
        assert_eq!(c.gates().len(), 2);
        assert_eq!(c.gates()[1], GateApp::new(GateOp::X, 1));
    }

    #[test]
    fn comments_case_and_pair_positions() {
        let text = "# header comment\n  QUBITS 3  \n\nfswap @ 2,3 # trailing\ng rz(pi/4) rx(-3*pi/4) @ 1 2\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.gates()[0], GateApp::new(GateOp::Named(TwoQubitGate::Fswap), 2));
        assert_eq!(
            c.gates()[1].op,
            GateOp::G(OneQubitGate::Rz(PI / 4.0), OneQubitGate::Rx(-3.0 * PI / 4.0))
        );
    }

    #[test]
    fn error_locations() {
        let err = parse_circuit("qubits 3\nFSWAP @ 1,3").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.kind, ParseErrorKind::NonNearestNeighbour { first: 1, second: 3 });
        let err = parse_circuit("qubits 3\nG H H @ 3").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::PositionOutOfRange { pos: 4, n_qubits: 3 });
        let err = parse_circuit("qubits 2\nG H FOO @ 1").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        assert_eq!(err.kind, ParseErrorKind::UnknownGate("FOO".into()));
        let err = parse_circuit("qubits 2\nG H RZ(abc) @ 1").unwrap_err();
        assert_eq!(err.column, 8);
        assert_eq!(err.kind, ParseErrorKind::BadAngle("abc".into()));
        let err = parse_circuit("G H H @ 1").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingHeader);
        let err = parse_circuit("qubits 2\nG H H 1").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        let err = parse_circuit("qubits 2\nG H @ 1").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        let err = parse_circuit("qubits 2\nX @ 1\nallow freeform").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(parse_circuit("").is_err());
    }

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5"), Some(0.5));
        assert_eq!(parse_angle("pi"), Some(PI));
        assert_eq!(parse_angle("-pi/2"), Some(-PI / 2.0));
        assert_eq!(parse_angle("3*pi/4"), Some(3.0 * PI / 4.0));
        assert_eq!(parse_angle("PI/8"), Some(PI / 8.0));
        assert_eq!(parse_angle("pi/0"), None);
        assert_eq!(parse_angle("inf"), None);
        assert_eq!(parse_angle("pie"), None);
    }

    #[test]
    fn canonical_form_is_stable() {
        let c = parse_circuit("qubits 2\nallow freeform\ncphase(pi/3) @ 1\nj x x @ 1").unwrap();
        let text = c.to_text();
        assert_eq!(text, format!("qubits 2\nallow freeform\nCPHASE({}) @ 1\nJ X X @ 1\n", PI / 3.0));
        let again = parse_circuit(&text).unwrap();
        assert_eq!(again.to_text(), text);
        assert_eq!(circuit_to_operator(&again), circuit_to_operator(&c));
    }
}
