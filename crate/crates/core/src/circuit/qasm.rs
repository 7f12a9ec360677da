//! Line-oriented text format.
//!
//! ```text
//! qubits 3
//! // stage0/dense
//! ry(1.5707963267948966e0) q[0];
//! cx q[0], q[1];
//! ```
//!
//! Angles are written with 17 significant digits, so `parse_qasm(emit_qasm(c))`
//! reproduces `c` exactly. `ccx`, `mcx` and `givens` are only written when
//! macros are allowed.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use num_complex::Complex64;

use super::{Circuit, Gate, QubitId};
use crate::{Error, Result};

fn angle(out: &mut String, xs: &[f64]) {
    out.push('(');
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{x:.16e}");
    }
    out.push(')');
}

fn operands(out: &mut String, qs: impl Iterator<Item = QubitId>) {
    for (i, q) in qs.enumerate() {
        out.push_str(if i == 0 { " " } else { ", " });
        let _ = write!(out, "q[{}]", q.0);
    }
    out.push_str(";\n");
}

/// Serializes `circ`, one gate per line, labels as `//` comments.
pub fn emit_qasm(circ: &Circuit, allow_macros: bool) -> Result<String> {
    let mut out = format!("qubits {}\n", circ.qubit_count());
    let labels = circ.labels();
    for (i, g) in circ.gates().iter().enumerate() {
        if let Some(tag) = labels.get(&i) {
            let _ = writeln!(out, "// {tag}");
        }
        if !allow_macros && !g.is_elementary() {
            return Err(Error::UnsupportedGate(g.name()));
        }
        out.push_str(g.name());
        match g {
            Gate::Ry { theta, .. } | Gate::Rz { theta, .. } | Gate::Phase { theta, .. } => angle(&mut out, &[*theta]),
            Gate::U1q { matrix, .. } => {
                let parts: Vec<f64> = matrix.iter().flat_map(|z| [z.re, z.im]).collect();
                angle(&mut out, &parts);
            }
            Gate::Givens { theta, phi, .. } => angle(&mut out, &[*theta, *phi]),
            _ => {}
        }
        operands(&mut out, g.operands());
    }
    if let Some(tag) = labels.get(&circ.len()) {
        let _ = writeln!(out, "// {tag}");
    }
    Ok(out)
}

fn parse_err(line: usize, message: impl ToString) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

fn parse_gate(line: usize, text: &str) -> Result<Gate> {
    let body = text
        .strip_suffix(';')
        .ok_or_else(|| parse_err(line, "missing `;`"))?;
    let (head, rest) = match body.find(')') {
        Some(close) if body.starts_with(|c: char| c.is_ascii_alphabetic()) && body[..close].contains('(') => {
            body.split_at(close + 1)
        }
        _ => body.split_once(' ').ok_or_else(|| parse_err(line, "missing operands"))?,
    };
    let (name, params) = match head.split_once('(') {
        Some((name, args)) => {
            let args = args.trim_end_matches(')');
            let params = args
                .split(',')
                .map(|a| a.trim().parse::<f64>().map_err(|e| parse_err(line, e)))
                .collect::<Result<Vec<f64>>>()?;
            (name, params)
        }
        None => (head, Vec::new()),
    };
    let qs = rest
        .split(',')
        .map(|q| {
            let q = q.trim();
            q.strip_prefix("q[")
                .and_then(|q| q.strip_suffix(']'))
                .and_then(|q| q.parse::<usize>().ok())
                .map(QubitId)
                .ok_or_else(|| parse_err(line, format!("bad operand `{q}`")))
        })
        .collect::<Result<Vec<QubitId>>>()?;
    let arity = |p: usize, q: usize| {
        if params.len() == p && (qs.len() == q || q == 0) {
            Ok(())
        } else {
            Err(parse_err(line, format!("`{name}` takes {p} parameters and {q} operands")))
        }
    };
    Ok(match name {
        "x" => {
            arity(0, 1)?;
            Gate::X(qs[0])
        }
        "ry" => {
            arity(1, 1)?;
            Gate::ry(params[0], qs[0])
        }
        "rz" => {
            arity(1, 1)?;
            Gate::rz(params[0], qs[0])
        }
        "p" => {
            arity(1, 1)?;
            Gate::phase(params[0], qs[0])
        }
        "u" => {
            arity(8, 1)?;
            let z = |i: usize| Complex64::new(params[2 * i], params[2 * i + 1]);
            Gate::U1q {
                matrix: [z(0), z(1), z(2), z(3)],
                target: qs[0],
            }
        }
        "cx" => {
            arity(0, 2)?;
            Gate::cnot(qs[0], qs[1])
        }
        "ccx" => {
            arity(0, 3)?;
            Gate::toffoli(qs[0], qs[1], qs[2])
        }
        "mcx" => {
            arity(0, 0)?;
            if qs.len() < 2 {
                return Err(parse_err(line, "`mcx` needs a control and a target"));
            }
            let (target, controls) = qs.split_last().unwrap();
            Gate::mcx(controls.to_vec(), *target)
        }
        "givens" => {
            arity(2, 2)?;
            Gate::givens(params[0], params[1], qs[0], qs[1])
        }
        other => return Err(parse_err(line, format!("unknown gate `{other}`"))),
    })
}

/// Parses the output of [`emit_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let width = loop {
        match lines.next() {
            Some((_, "")) => continue,
            Some((no, l)) => {
                break l
                    .strip_prefix("qubits ")
                    .and_then(|w| w.trim().parse::<usize>().ok())
                    .ok_or_else(|| parse_err(no, "expected `qubits N` header"))?
            }
            None => return Err(parse_err(0, "empty input")),
        }
    };
    let mut circ = Circuit::new(width);
    for (no, l) in lines {
        if l.is_empty() {
            continue;
        }
        if let Some(tag) = l.strip_prefix("//") {
            circ.label(tag.trim());
            continue;
        }
        circ.append(parse_gate(no, l)?).map_err(|e| parse_err(no, e))?;
    }
    Ok(circ)
}
