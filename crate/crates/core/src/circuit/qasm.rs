//! OpenQASM 2.0 export, plus a reader for exactly the subset we write.

use std::fmt::Write;

use super::{Circuit, Gate};
use crate::{Error, Result};

const HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

/// `%.17g`: 17 significant digits, trailing zeros trimmed.
pub fn format_angle(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-5..17).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn to_qasm(c: &Circuit) -> String {
    let mut out = String::from(HEADER);
    writeln!(out, "qreg q[{}];", c.n_qubits()).unwrap();
    for g in c.gates() {
        match *g {
            Gate::PauliX { qubit } => writeln!(out, "x q[{qubit}];"),
            Gate::Hadamard { qubit } => writeln!(out, "h q[{qubit}];"),
            Gate::RotX { qubit, angle } => writeln!(out, "rx({}) q[{qubit}];", format_angle(angle)),
            Gate::RotZ { qubit, angle } => writeln!(out, "rz({}) q[{qubit}];", format_angle(angle)),
            Gate::CNot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
        }
        .unwrap();
    }
    out
}

fn qubit_arg(s: &str, line: usize) -> Result<usize> {
    let err = || Error::Qasm {
        line,
        msg: format!("expected q[<index>], got {s:?}"),
    };
    let inner = s
        .trim()
        .strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(err)?;
    inner.parse().map_err(|_| err())
}

/// Parse QASM produced by [`to_qasm`]. Comments and blank lines are skipped;
/// anything outside the `x h rx rz cx` subset is an error.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split("//").next().unwrap().trim();
        if line.is_empty() || line.starts_with("OPENQASM") || line.starts_with("include") {
            continue;
        }
        let stmt = line.strip_suffix(';').ok_or_else(|| Error::Qasm {
            line: line_no,
            msg: "missing ';'".into(),
        })?;
        if let Some(rest) = stmt.strip_prefix("qreg ") {
            let n = qubit_arg(rest, line_no)?;
            circuit = Some(Circuit::new(n));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| Error::Qasm {
            line: line_no,
            msg: "gate before qreg declaration".into(),
        })?;
        let (head, args) = stmt.split_once(' ').ok_or_else(|| Error::Qasm {
            line: line_no,
            msg: format!("malformed statement {stmt:?}"),
        })?;
        let (name, param) = match head.split_once('(') {
            Some((n, p)) => {
                let p = p.strip_suffix(')').ok_or_else(|| Error::Qasm {
                    line: line_no,
                    msg: format!("unclosed parameter in {head:?}"),
                })?;
                let v: f64 = p.parse().map_err(|_| Error::Qasm {
                    line: line_no,
                    msg: format!("bad angle {p:?}"),
                })?;
                (n, Some(v))
            }
            None => (head, None),
        };
        let qubits: Vec<usize> = args
            .split(',')
            .map(|a| qubit_arg(a, line_no))
            .collect::<Result<_>>()?;
        let gate = match (name, param, qubits.as_slice()) {
            ("x", None, &[q]) => Gate::PauliX { qubit: q },
            ("h", None, &[q]) => Gate::Hadamard { qubit: q },
            ("rx", Some(a), &[q]) => Gate::RotX { qubit: q, angle: a },
            ("rz", Some(a), &[q]) => Gate::RotZ { qubit: q, angle: a },
            ("cx", None, &[c, t]) => Gate::CNot {
                control: c,
                target: t,
            },
            _ => {
                return Err(Error::Qasm {
                    line: line_no,
                    msg: format!("unsupported statement {stmt:?}"),
                })
            }
        };
        c.push(gate).map_err(|e| Error::Qasm {
            line: line_no,
            msg: e.to_string(),
        })?;
    }
    circuit.ok_or(Error::Qasm {
        line: 0,
        msg: "no qreg declaration".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_circuit() {
        let q = to_qasm(&Circuit::new(2));
        assert_eq!(q, "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\n");
    }

    #[test]
    fn single_cx() {
        let mut c = Circuit::new(2);
        c.cx(0, 1).unwrap();
        let q = to_qasm(&c);
        assert_eq!(q.lines().filter(|l| *l == "cx q[0],q[1];").count(), 1);
    }

    #[test]
    fn angle_formatting() {
        let mut c = Circuit::new(1);
        c.rz(0, PI).unwrap();
        assert!(to_qasm(&c).contains("rz(3.1415926535897931) q[0];"));
        assert_eq!(format_angle(0.5), "0.5");
        assert_eq!(format_angle(-PI / 8.0), "-0.39269908169872414");
        assert_eq!(format_angle(1e-7), "9.9999999999999995e-08");
        assert_eq!(format_angle(0.0), "0");
    }

    #[test]
    fn angles_round_trip_exactly() {
        for &a in &[PI, -PI / 8.0, 1e-9, 123.456, 2.0f64.sqrt(), -1e20, 0.1] {
            assert_eq!(format_angle(a).parse::<f64>().unwrap(), a);
        }
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = parse_qasm("OPENQASM 2.0;\nqreg q[1];\nccx q[0];\n").unwrap_err();
        assert!(matches!(err, Error::Qasm { line: 3, .. }));
        assert!(parse_qasm("x q[0];").is_err());
    }
}
