//! Line-oriented text formats for instances, matchings and X3C inputs.
//!
//! Instance grammar:
//!
//! ```text
//! MODEL HA|SM|SR
//! AGENTS n            (SM: AGENTS nU nW)
//! OBJECTS m           (HA only)
//! PREF <agent> : g ; g ; ...
//! ```
//!
//! Each group `g` is a comma-separated list of ids; `#` starts a comment.
//! Agents without a `PREF` line have an empty list.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Instance, Matching, ModelKind, PreferenceList};
use crate::x3c::X3cInstance;

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_id(tok: &str, line: usize) -> Result<usize> {
    let tok = tok.trim();
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(perr(line, format!("expected a non-negative integer, found {tok:?}")));
    }
    tok.parse().map_err(|_| perr(line, format!("integer {tok} out of range")))
}

fn parse_positive(tok: &str, line: usize, what: &str) -> Result<usize> {
    let v = parse_id(tok, line)?;
    if v == 0 {
        return Err(perr(line, format!("{what} must be positive")));
    }
    Ok(v)
}

fn expect_keyword<'a>(line: &'a str, keyword: &str, lineno: usize) -> Result<Vec<&'a str>> {
    let mut toks = line.split_whitespace();
    match toks.next() {
        Some(k) if k == keyword => Ok(toks.collect()),
        Some(k) => Err(perr(lineno, format!("expected {keyword}, found {k}"))),
        None => Err(perr(lineno, format!("expected {keyword}"))),
    }
}

fn parse_groups(body: &str, line: usize) -> Result<PreferenceList> {
    let body = body.trim();
    if body.is_empty() {
        return Ok(PreferenceList::default());
    }
    let mut groups = Vec::new();
    for g in body.split(';') {
        if g.trim().is_empty() {
            return Err(perr(line, "empty tie group"));
        }
        let ids = g.split(',').map(|t| parse_positive(t, line, "alternative id")).collect::<Result<Vec<_>>>()?;
        groups.push(ids);
    }
    Ok(PreferenceList::new(groups))
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text);

    let (ln, line) = lines.next().ok_or_else(|| perr(1, "missing MODEL line"))?;
    let args = expect_keyword(line, "MODEL", ln)?;
    let model = match args.as_slice() {
        [code] => ModelKind::from_code(code).ok_or_else(|| perr(ln, format!("unknown model {code}")))?,
        _ => return Err(perr(ln, "MODEL takes one of HA, SM, SR")),
    };

    let (ln, line) = lines.next().ok_or_else(|| perr(ln + 1, "missing AGENTS line"))?;
    let args = expect_keyword(line, "AGENTS", ln)?;
    let (n, side_split) = match (model, args.as_slice()) {
        (ModelKind::Marriage, [u, w]) => {
            let u = parse_id(u, ln)?;
            let w = parse_id(w, ln)?;
            (u + w, Some((u, w)))
        }
        (ModelKind::Marriage, _) => return Err(perr(ln, "AGENTS for SM takes two counts")),
        (_, [n]) => (parse_id(n, ln)?, None),
        _ => return Err(perr(ln, "AGENTS takes one count")),
    };

    let mut n_objects = 0;
    let mut pending = None;
    if model == ModelKind::HouseAllocation {
        let (ln, line) = lines.next().ok_or_else(|| perr(ln + 1, "missing OBJECTS line"))?;
        let args = expect_keyword(line, "OBJECTS", ln)?;
        match args.as_slice() {
            [m] => n_objects = parse_id(m, ln)?,
            _ => return Err(perr(ln, "OBJECTS takes one count")),
        }
    } else {
        pending = lines.next();
    }

    let mut prefs: Vec<Option<PreferenceList>> = vec![None; n];
    for (ln, line) in pending.into_iter().chain(lines) {
        let rest = line
            .strip_prefix("PREF")
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| perr(ln, format!("expected PREF line, found {line:?}")))?;
        let (agent, body) = rest.split_once(':').ok_or_else(|| perr(ln, "missing ':' in PREF line"))?;
        let agent = parse_positive(agent, ln, "agent id")?;
        if agent > n {
            return Err(perr(ln, format!("agent {agent} outside 1..={n}")));
        }
        if prefs[agent - 1].is_some() {
            return Err(perr(ln, format!("duplicate PREF line for agent {agent}")));
        }
        prefs[agent - 1] = Some(parse_groups(body, ln)?);
    }
    let prefs = prefs.into_iter().map(Option::unwrap_or_default).collect();
    let inst = Instance::from_parts_unchecked(model, n, side_split, n_objects, prefs);
    let violations = inst.validate();
    if violations.is_empty() {
        Ok(inst)
    } else {
        Err(Error::InvalidInstance(violations))
    }
}

/// Canonical text form; `parse_instance` inverts it.
pub fn write_instance(inst: &Instance) -> String {
    write_instance_with_names(inst, &[])
}

/// Canonical text form preceded by `# <id> <name>` comment lines; ids are
/// agent numbers or `o<j>` object labels.
pub fn write_instance_with_names(inst: &Instance, names: &[(String, String)]) -> String {
    let mut out = String::new();
    for (id, name) in names {
        let _ = writeln!(out, "# {id} {name}");
    }
    let _ = writeln!(out, "MODEL {}", inst.model().code());
    match inst.side_split() {
        Some((u, w)) => {
            let _ = writeln!(out, "AGENTS {u} {w}");
        }
        None => {
            let _ = writeln!(out, "AGENTS {}", inst.n_agents());
        }
    }
    if inst.model() == ModelKind::HouseAllocation {
        let _ = writeln!(out, "OBJECTS {}", inst.n_objects());
    }
    for i in inst.agents() {
        let groups: Vec<String> = inst
            .pref(i)
            .groups()
            .iter()
            .map(|g| g.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            .collect();
        if groups.is_empty() {
            let _ = writeln!(out, "PREF {i} :");
        } else {
            let _ = writeln!(out, "PREF {i} : {}", groups.join(" ; "));
        }
    }
    out
}

/// Parses `agent partner` lines (`o<j>` partners in HA, smaller id first otherwise).
pub fn parse_matching(text: &str, inst: &Instance) -> Result<Matching> {
    let mut m = Matching::empty(inst);
    for (ln, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = toks.as_slice() else {
            return Err(perr(ln, "expected two tokens: agent partner"));
        };
        let agent = parse_positive(a, ln, "agent id")?;
        let partner = if inst.model() == ModelKind::HouseAllocation {
            let id = b.strip_prefix('o').ok_or_else(|| perr(ln, format!("expected object o<j>, found {b}")))?;
            parse_positive(id, ln, "object id")?
        } else {
            let j = parse_positive(b, ln, "agent id")?;
            if j <= agent {
                return Err(perr(ln, "pairs must list the smaller id first"));
            }
            j
        };
        m.insert(inst, agent, partner).map_err(|e| perr(ln, e.to_string()))?;
    }
    m.validate(inst)?;
    Ok(m)
}

/// One pair per line in ascending order.
pub fn write_matching(inst: &Instance, m: &Matching) -> String {
    let mut out = String::new();
    for (i, j) in m.pairs() {
        let _ = writeln!(out, "{i} {}", inst.alt_label(j));
    }
    out
}

pub fn parse_x3c(text: &str) -> Result<X3cInstance> {
    let mut lines = content_lines(text);
    let (ln, first) = lines.next().ok_or_else(|| perr(1, "missing n̂ line"))?;
    let nhat = parse_positive(first, ln, "n̂")?;
    let mut triples = Vec::with_capacity(3 * nhat);
    let mut last = ln;
    for (ln, line) in lines {
        last = ln;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [a, b, c] = toks.as_slice() else {
            return Err(perr(ln, "expected three elements"));
        };
        triples.push([parse_id(a, ln)?, parse_id(b, ln)?, parse_id(c, ln)?]);
    }
    X3cInstance::new(nhat, triples).map_err(|e| match e {
        Error::InvalidX3c(msg) => perr(last, msg),
        other => other,
    })
}

pub fn write_x3c(x: &X3cInstance) -> String {
    let mut out = format!("{}\n", x.nhat());
    for t in x.triples() {
        let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
    }
    out
}
