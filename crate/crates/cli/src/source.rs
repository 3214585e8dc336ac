//! Turning `--gate`, `--circuit` and `--matrix` into an operator.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use mgh_core::circuits::gates::{build_cnz, build_f, fswap_between, Pattern};
use mgh_core::majorana::jw_majorana;
use mgh_core::{circuit_to_operator, parse_circuit, Operator};

#[derive(Debug, Clone, Args)]
pub struct GateSource {
    /// Named gate: SWAP, CZ, CPHASE(pi/4), F(1,*,1), CNZ(3), MAJORANA(2),
    /// FSWAP(1,3), I, or any gate line of the circuit format such as `G H H`
    #[arg(long, group = "source")]
    pub gate: Option<String>,

    /// Qubit count for gates that need one
    #[arg(short = 'n', long = "qubits")]
    pub qubits: Option<usize>,

    /// Circuit file in the line format
    #[arg(long, group = "source")]
    pub circuit: Option<PathBuf>,

    /// Matrix JSON file `{"n": n, "re": [[..]], "im": [[..]]}`
    #[arg(long, group = "source")]
    pub matrix: Option<PathBuf>,
}

pub struct Resolved {
    pub label: String,
    pub op: Operator,
}

pub fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

impl GateSource {
    pub fn resolve(&self) -> Result<Resolved, String> {
        if let Some(spec) = &self.gate {
            let op = gate_from_spec(spec, self.qubits)?;
            return Ok(Resolved {
                label: spec.clone(),
                op,
            });
        }
        if let Some(path) = &self.circuit {
            let c = parse_circuit(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
            return Ok(Resolved {
                label: path.display().to_string(),
                op: circuit_to_operator(&c),
            });
        }
        if let Some(path) = &self.matrix {
            let op: Operator = serde_json::from_str(&read(path)?)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            return Ok(Resolved {
                label: path.display().to_string(),
                op,
            });
        }
        Err("give one of --gate, --circuit or --matrix".into())
    }
}

/// `NAME(args)` split into the upper-cased name and the raw argument text.
fn split_call(spec: &str) -> (String, Option<&str>) {
    match (spec.find('('), spec.strip_suffix(')')) {
        (Some(open), Some(body)) => (spec[..open].trim().to_ascii_uppercase(), Some(&body[open + 1..])),
        _ => (spec.trim().to_ascii_uppercase(), None),
    }
}

fn need_qubits(name: &str, qubits: Option<usize>) -> Result<usize, String> {
    qubits.ok_or_else(|| format!("{name} needs -n"))
}

fn int_args(name: &str, args: &str) -> Result<Vec<usize>, String> {
    args.split(',')
        .map(|a| a.trim().parse::<usize>().map_err(|_| format!("{name}: bad integer `{}`", a.trim())))
        .collect()
}

fn check_width(op: Operator, qubits: Option<usize>) -> Result<Operator, String> {
    match qubits {
        Some(n) if n != op.n_qubits() => Err(format!(
            "gate acts on {} qubits but -n {n} was given",
            op.n_qubits()
        )),
        _ => Ok(op),
    }
}

pub fn gate_from_spec(spec: &str, qubits: Option<usize>) -> Result<Operator, String> {
    let (name, args) = split_call(spec);
    let op = match (name.as_str(), args) {
        ("F", Some(pattern)) => {
            let y: Pattern = pattern.parse().map_err(|e| format!("{e}"))?;
            build_f(&y).map_err(|e| e.to_string())?
        }
        ("CNZ", Some(a)) => {
            let n = int_args("CNZ", a)?;
            build_cnz(n[0]).map_err(|e| e.to_string())?
        }
        ("MAJORANA", Some(a)) => {
            let n = need_qubits("MAJORANA", qubits)?;
            jw_majorana(n, int_args("MAJORANA", a)?[0]).map_err(|e| e.to_string())?
        }
        ("FSWAP", Some(a)) => {
            let n = need_qubits("FSWAP(i,j)", qubits)?;
            match int_args("FSWAP", a)?[..] {
                [i, j] => fswap_between(i, j, n).map_err(|e| e.to_string())?,
                _ => return Err("FSWAP(i,j) takes two wires".into()),
            }
        }
        ("I", None) => Operator::identity(qubits.unwrap_or(2)),
        _ => {
            let n = qubits.unwrap_or(2);
            let text = format!("qubits {n}\nallow freeform\n{spec} @ 1\n");
            let c = parse_circuit(&text).map_err(|e| format!("gate `{spec}`: {}", e.kind))?;
            circuit_to_operator(&c)
        }
    };
    check_width(op, qubits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mgh_core::circuits::gates::{cphase, swap};

    #[test]
    fn named_and_parametrised() {
        assert_eq!(gate_from_spec("swap", None).unwrap(), swap());
        let c = gate_from_spec("CPHASE(pi/4)", None).unwrap();
        assert!(c.max_diff(&cphase(std::f64::consts::FRAC_PI_4)) < 1e-15);
        assert_eq!(gate_from_spec("F(1,*,1)", None).unwrap().n_qubits(), 3);
        assert_eq!(gate_from_spec("CNZ(4)", None).unwrap().n_qubits(), 4);
        assert_eq!(gate_from_spec("MAJORANA(3)", Some(2)).unwrap(), jw_majorana(2, 3).unwrap());
        assert_eq!(gate_from_spec("FSWAP(1,3)", Some(3)).unwrap().n_qubits(), 3);
        assert_eq!(gate_from_spec("G H H", None).unwrap().n_qubits(), 2);
    }

    #[test]
    fn bad_specs() {
        assert!(gate_from_spec("MAJORANA(3)", None).is_err());
        assert!(gate_from_spec("F(1,*,1)", Some(2)).is_err());
        assert!(gate_from_spec("TOFFOLI", None).is_err());
        assert!(gate_from_spec("CNZ(x)", None).is_err());
    }
}
