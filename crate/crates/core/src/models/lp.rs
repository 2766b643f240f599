//! CPLEX LP text export and a reader for the files this module writes.
//!
//! The `Bounds` section lists every variable in model order, which is what
//! lets the reader restore the exact variable order. Header comments carry
//! the model metadata.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::{Constraint, MilpModel, ModelKind, ModelMeta, Sense, VarKind, VarRole, Variable};

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, terms: &[(usize, f64)], vars: &[Variable]) {
    if terms.is_empty() {
        out.push_str(" 0");
        return;
    }
    for (k, &(v, c)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n  ");
        }
        let name = &vars[v].name;
        if k == 0 {
            let _ = write!(out, " {c} {name}");
        } else if c < 0.0 {
            let _ = write!(out, " - {} {name}", -c);
        } else {
            let _ = write!(out, " + {c} {name}");
        }
    }
}

/// Renders `model` as LP text. Output is a pure function of the model.
pub fn export_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    let meta = &model.meta;
    out.push_str("\\ opsw model\n");
    let _ = writeln!(out, "\\ kind: {}", meta.kind.tag());
    if let Some(theta) = meta.kind.theta() {
        let _ = writeln!(out, "\\ theta: {theta}");
    }
    if let ModelKind::StaticSequential { relaxed, .. } = meta.kind {
        let _ = writeln!(out, "\\ relaxed: {relaxed}");
    }
    match meta.alpha {
        Some(alpha) => {
            let _ = writeln!(out, "\\ alpha: {alpha}");
        }
        None => out.push_str("\\ alpha: none\n"),
    }
    let _ = writeln!(out, "\\ length_limit: {}", meta.length_limit);
    let _ = writeln!(out, "\\ instance: {}", meta.instance);

    out.push_str("Maximize\n obj:");
    write_terms(&mut out, &model.objective, &model.variables);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        write_terms(&mut out, &c.terms, &model.variables);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), c.rhs);
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        if v.lower == v.upper {
            let _ = writeln!(out, " {} = {}", v.name, v.lower);
        } else {
            let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, v.upper);
        }
    }
    out.push_str("Binaries\n");
    let binaries: Vec<&str> =
        model.variables.iter().filter(|v| v.kind == VarKind::Binary).map(|v| v.name.as_str()).collect();
    for chunk in binaries.chunks(TERMS_PER_LINE) {
        let _ = writeln!(out, " {}", chunk.join(" "));
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Objective,
    Rows,
    Bounds,
    Binaries,
    End,
}

fn number(token: &str, line: usize) -> Result<f64> {
    token.parse().map_err(|_| Error::Parse { line, message: format!("expected a number, found {token:?}") })
}

fn sense(token: &str) -> Option<Sense> {
    match token {
        "<=" => Some(Sense::Le),
        "=" => Some(Sense::Eq),
        ">=" => Some(Sense::Ge),
        _ => None,
    }
}

/// `[sign] coef name` sequences; a lone `0` stands for no terms.
fn parse_terms(tokens: &[(usize, &str)], index: &HashMap<String, usize>) -> Result<Vec<(usize, f64)>> {
    if let [(_, "0")] = tokens {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut k = 0;
    while k < tokens.len() {
        let mut sign = 1.0;
        if k > 0 {
            let (line, tok) = tokens[k];
            sign = match tok {
                "+" => 1.0,
                "-" => -1.0,
                _ => return Err(Error::Parse { line, message: format!("expected + or -, found {tok:?}") }),
            };
            k += 1;
        }
        let (Some(&(line, coef)), Some(&(_, name))) = (tokens.get(k), tokens.get(k + 1)) else {
            let line = tokens.last().map_or(0, |t| t.0);
            return Err(Error::Parse { line, message: "truncated linear expression".into() });
        };
        let var = *index
            .get(name)
            .ok_or_else(|| Error::Parse { line, message: format!("unknown variable {name:?}") })?;
        terms.push((var, sign * number(coef, line)?));
        k += 2;
    }
    Ok(terms)
}

/// Reads LP text produced by [`export_lp`].
pub fn parse_lp(text: &str) -> Result<MilpModel> {
    let mut section = Section::Header;
    let mut header: HashMap<String, String> = HashMap::new();
    let mut objective: Vec<(usize, &str)> = Vec::new();
    let mut rows: Vec<(usize, &str)> = Vec::new();
    let mut variables: Vec<Variable> = Vec::new();
    let mut binaries: Vec<(usize, &str)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('\\') {
            if let Some((key, value)) = comment.split_once(':') {
                header.insert(key.trim().to_string(), value.trim().to_string());
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let next = match trimmed {
            "Maximize" => Some(Section::Objective),
            "Subject To" => Some(Section::Rows),
            "Bounds" => Some(Section::Bounds),
            "Binaries" => Some(Section::Binaries),
            "End" => Some(Section::End),
            _ => None,
        };
        if let Some(next) = next {
            section = next;
            continue;
        }
        let tokens = trimmed.split_whitespace().map(|t| (line, t));
        match section {
            Section::Objective => objective.extend(tokens),
            Section::Rows => rows.extend(tokens),
            Section::Binaries => binaries.extend(tokens),
            Section::Bounds => variables.push(parse_bound(trimmed, line)?),
            Section::Header | Section::End => {
                return Err(Error::Parse { line, message: format!("unexpected text {trimmed:?}") });
            }
        }
    }
    if section != Section::End {
        return Err(Error::Format("LP text has no End marker".into()));
    }
    if variables.is_empty() {
        return Err(Error::Format("LP text declares no variables".into()));
    }

    let index: HashMap<String, usize> = variables.iter().enumerate().map(|(i, v)| (v.name.clone(), i)).collect();
    for (line, name) in binaries {
        let v = *index.get(name).ok_or_else(|| Error::Parse { line, message: format!("unknown binary {name:?}") })?;
        variables[v].kind = VarKind::Binary;
    }

    let objective = match objective.split_first() {
        Some(((_, "obj:"), rest)) => parse_terms(rest, &index)?,
        Some(((line, tok), _)) => {
            return Err(Error::Parse { line: *line, message: format!("expected `obj:`, found {tok:?}") })
        }
        None => return Err(Error::Format("LP text has no objective".into())),
    };

    let mut constraints = Vec::new();
    let mut k = 0;
    while k < rows.len() {
        let (line, label) = rows[k];
        let name = label
            .strip_suffix(':')
            .ok_or_else(|| Error::Parse { line, message: format!("expected a row name, found {label:?}") })?;
        let start = k + 1;
        let end = (start..rows.len())
            .find(|&p| sense(rows[p].1).is_some())
            .ok_or_else(|| Error::Parse { line, message: format!("row {name} has no sense") })?;
        let terms = parse_terms(&rows[start..end], &index)?;
        let (rhs_line, rhs) =
            *rows.get(end + 1).ok_or_else(|| Error::Parse { line, message: format!("row {name} has no rhs") })?;
        constraints.push(Constraint {
            name: name.to_string(),
            terms,
            sense: sense(rows[end].1).expect("checked above"),
            rhs: number(rhs, rhs_line)?,
        });
        k = end + 2;
    }

    Ok(MilpModel { variables, constraints, objective, meta: parse_meta(&header)? })
}

fn parse_bound(text: &str, line: usize) -> Result<Variable> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let (name, lower, upper) = match tokens.as_slice() {
        [name, "=", value] => {
            let v = number(value, line)?;
            (*name, v, v)
        }
        [lo, "<=", name, "<=", hi] => (*name, number(lo, line)?, number(hi, line)?),
        _ => return Err(Error::Parse { line, message: format!("unsupported bound {text:?}") }),
    };
    Ok(Variable { name: name.to_string(), kind: VarKind::Continuous, lower, upper, role: VarRole::for_name(name) })
}

fn parse_meta(header: &HashMap<String, String>) -> Result<ModelMeta> {
    let get = |key: &str| header.get(key).ok_or_else(|| Error::Format(format!("LP header lacks `{key}`")));
    let float = |key: &str| -> Result<f64> {
        let text = get(key)?;
        text.parse().map_err(|_| Error::Format(format!("bad `{key}` value {text:?}")))
    };
    let theta = if header.contains_key("theta") { Some(float("theta")?) } else { None };
    let relaxed = header.get("relaxed").is_some_and(|r| r == "true");
    let kind = ModelKind::from_tag(get("kind")?, theta, relaxed)?;
    let alpha = match get("alpha")?.as_str() {
        "none" => None,
        _ => Some(float("alpha")?),
    };
    Ok(ModelMeta { kind, alpha, length_limit: float("length_limit")?, instance: get("instance")?.clone() })
}
