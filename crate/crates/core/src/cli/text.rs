//! Text formats: origami files, group specifications, group elements and
//! voltage files.

use std::collections::HashSet;

use thiserror::Error;

use crate::cover::VoltageAssignment;
use crate::group::{Group, GroupElem, GroupError, GroupKind};
use crate::perm::{FinitePerm, SquareId};
use crate::surface::{builtin, Origami, ValidationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> TextError {
    TextError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl Into<String>) -> TextError {
    TextError::Semantic {
        line,
        message: message.into(),
    }
}

/// Cycles such as `(1,2)(3, 4 ,5)`, with 1-based columns for errors. An
/// empty string or `()` means no cycles.
fn parse_cycles(s: &str, line: usize, col0: usize) -> Result<Vec<Vec<u32>>, TextError> {
    let chars: Vec<char> = s.chars().collect();
    let mut cycles = Vec::new();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i == chars.len() {
            return Ok(cycles);
        }
        if chars[i] != '(' {
            return Err(parse_err(
                line,
                col0 + i,
                format!("expected '(' but found '{}'", chars[i]),
            ));
        }
        i += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut i);
            if i < chars.len() && chars[i] == ')' && cycle.is_empty() {
                i += 1;
                break;
            }
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(match chars.get(i) {
                    Some(c) => parse_err(
                        line,
                        col0 + i,
                        format!("expected a square number but found '{c}'"),
                    ),
                    None => parse_err(line, col0 + i, "unterminated cycle"),
                });
            }
            let digits: String = chars[start..i].iter().collect();
            let v: u32 = digits.parse().map_err(|_| {
                parse_err(line, col0 + start, format!("number {digits} is too large"))
            })?;
            cycle.push(v);
            skip_ws(&mut i);
            match chars.get(i) {
                Some(',') => i += 1,
                Some(')') => {
                    i += 1;
                    break;
                }
                Some(c) => {
                    return Err(parse_err(
                        line,
                        col0 + i,
                        format!("expected ',' or ')' but found '{c}'"),
                    ))
                }
                None => return Err(parse_err(line, col0 + i, "unterminated cycle")),
            }
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
    }
}

/// Builds a permutation of degree `n` from cycles, reporting zero,
/// out-of-range and repeated indices as semantic errors.
fn cycles_to_perm(cycles: &[Vec<u32>], n: usize, line: usize) -> Result<FinitePerm, TextError> {
    let mut seen = HashSet::new();
    for &v in cycles.iter().flatten() {
        if v == 0 {
            return Err(semantic(line, "square numbers start at 1"));
        }
        if v as usize > n {
            return Err(semantic(
                line,
                format!("square {v} is out of range 1..={n}"),
            ));
        }
        if !seen.insert(v) {
            return Err(semantic(line, format!("square {v} appears more than once")));
        }
    }
    FinitePerm::from_cycles(n, cycles).map_err(|e| semantic(line, e.to_string()))
}

enum Count {
    Finite(usize),
    Countable(String),
}

/// Parses an origami file.
///
/// ```text
/// n: 3
/// sigma: (1,2)
/// tau: (1,3)
/// ```
///
/// `n: countable <name>` selects a built-in countable origami. Lines may
/// be blank or start with `#`.
pub fn parse_origami_text(text: &str) -> Result<Origami, TextError> {
    let mut count: Option<(usize, Count)> = None;
    let mut sigma: Option<(usize, Vec<Vec<u32>>)> = None;
    let mut tau: Option<(usize, Vec<Vec<u32>>)> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - trimmed.len();
        let Some(colon) = trimmed.find(':') else {
            return Err(parse_err(line, indent + 1, "expected '<key>: <value>'"));
        };
        let key = trimmed[..colon].trim();
        let value = &trimmed[colon + 1..];
        let value_col = indent + colon + 2;
        let slot_taken = match key {
            "n" => count.is_some(),
            "sigma" => sigma.is_some(),
            "tau" => tau.is_some(),
            other => {
                return Err(parse_err(
                    line,
                    indent + 1,
                    format!("unknown key '{other}'"),
                ));
            }
        };
        if slot_taken {
            return Err(parse_err(
                line,
                indent + 1,
                format!("duplicate key '{key}'"),
            ));
        }
        match key {
            "n" => {
                let words: Vec<&str> = value.split_whitespace().collect();
                let c = match words.as_slice() {
                    [num] => Count::Finite(num.parse().map_err(|_| {
                        parse_err(
                            line,
                            value_col,
                            format!("expected a square count, found '{num}'"),
                        )
                    })?),
                    ["countable", name] => Count::Countable(name.to_string()),
                    _ => {
                        return Err(parse_err(
                            line,
                            value_col,
                            "expected '<count>' or 'countable <name>'",
                        ))
                    }
                };
                count = Some((line, c));
            }
            "sigma" => sigma = Some((line, parse_cycles(value, line, value_col)?)),
            _ => tau = Some((line, parse_cycles(value, line, value_col)?)),
        }
    }

    if let Some((line, Count::Countable(name))) = &count {
        if let Some((l, _)) = sigma.as_ref().or(tau.as_ref()) {
            return Err(semantic(
                *l,
                "a countable built-in origami takes no gluing lines",
            ));
        }
        return builtin(name)
            .ok_or_else(|| semantic(*line, format!("unknown built-in origami '{name}'")));
    }
    let (sigma_line, sigma) =
        sigma.ok_or_else(|| parse_err(last_line + 1, 1, "missing 'sigma:' line"))?;
    let (tau_line, tau) = tau.ok_or_else(|| parse_err(last_line + 1, 1, "missing 'tau:' line"))?;
    let n = match count {
        Some((line, Count::Finite(0))) => {
            return Err(semantic(line, "an origami needs at least one square"))
        }
        Some((_, Count::Finite(n))) => n,
        None => {
            // without n every square must be written out in both lines
            let max = sigma
                .iter()
                .chain(&tau)
                .flatten()
                .copied()
                .max()
                .unwrap_or(0) as usize;
            for (line, cycles) in [(sigma_line, &sigma), (tau_line, &tau)] {
                let present: HashSet<u32> = cycles.iter().flatten().copied().collect();
                if let Some(missing) = (1..=max as u32).find(|v| !present.contains(v)) {
                    return Err(semantic(
                        line,
                        format!("square {missing} is missing; fixed points may only be omitted when 'n:' is given"),
                    ));
                }
            }
            if max == 0 {
                return Err(semantic(sigma_line, "an origami needs at least one square"));
            }
            max
        }
        Some((_, Count::Countable(_))) => unreachable!("handled above"),
    };
    let s = cycles_to_perm(&sigma, n, sigma_line)?;
    let t = cycles_to_perm(&tau, n, tau_line)?;
    Ok(Origami::finite(s, t)?)
}

/// Inverse of [`parse_origami_text`].
pub fn render_origami_text(o: &Origami) -> String {
    if let Some((s, t)) = o.finite_perms() {
        return format!(
            "n: {}\nsigma: {}\ntau: {}\n",
            s.degree(),
            s.to_cycle_string(),
            t.to_cycle_string()
        );
    }
    match o.builtin_name() {
        Some(name) => format!("n: countable {name}\n"),
        None => "n: countable\n".to_string(),
    }
}

/// `perm: (1,2)(3,4); (1,3)`, `Z`, `Z^k`, `F_r` or `trivial`.
pub fn parse_group_spec(spec: &str) -> Result<Group, TextError> {
    let s = spec.trim();
    let err = |msg: &str| parse_err(1, 1, format!("{msg} in group specification '{s}'"));
    if s == "trivial" {
        return Ok(Group::trivial());
    }
    if s == "Z" {
        return Ok(Group::free_abelian(1)?);
    }
    if let Some(rank) = s.strip_prefix("Z^") {
        let rank: usize = rank.trim().parse().map_err(|_| err("bad rank"))?;
        return Ok(Group::free_abelian(rank)?);
    }
    if let Some(rank) = s.strip_prefix("F_") {
        let rank: usize = rank.trim().parse().map_err(|_| err("bad rank"))?;
        return Ok(Group::free(rank)?);
    }
    let Some(body) = s.strip_prefix("perm:") else {
        return Err(err("expected 'perm:', 'Z^k', 'F_r' or 'trivial'"));
    };
    let offset = spec.len() - spec.trim_start().len() + "perm:".len() + 1;
    let mut parsed = Vec::new();
    let mut col = offset;
    for part in body.split(';') {
        parsed.push(parse_cycles(part, 1, col)?);
        col += part.chars().count() + 1;
    }
    let degree = parsed
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .unwrap_or(1)
        .max(1) as usize;
    let gens = parsed
        .iter()
        .map(|c| cycles_to_perm(c, degree, 1))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Group::perm_group(gens)?)
}

/// Parses an element of `g`: cycle notation for permutation groups,
/// `(a,b,..)` or a bare integer for `Z^k`, and words such as `ab^-1a^2`
/// for free groups. `e` is the identity everywhere.
pub fn parse_group_elem(g: &Group, text: &str) -> Result<GroupElem, String> {
    let s = text.trim();
    if s == "e" {
        return Ok(g.identity());
    }
    let elem = match g.kind() {
        GroupKind::FinitePerm { degree } => {
            let cycles = parse_cycles(s, 1, 1).map_err(|e| e.to_string())?;
            let p = cycles_to_perm(&cycles, degree, 1).map_err(|e| e.to_string())?;
            GroupElem::Perm(p)
        }
        GroupKind::FreeAbelian { rank } => {
            let inner = s
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .unwrap_or(s);
            let v: Vec<i64> = inner
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("'{s}' is not an integer vector"))?;
            if v.len() != rank {
                return Err(format!(
                    "'{s}' has {} coordinates, expected {rank}",
                    v.len()
                ));
            }
            GroupElem::Vector(v)
        }
        GroupKind::Free { .. } => GroupElem::Word(parse_word(s)?),
    };
    g.normalize(&elem).map_err(|e| e.to_string())
}

fn parse_word(s: &str) -> Result<Vec<i32>, String> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut letters = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !c.is_ascii_lowercase() {
            return Err(format!("'{c}' is not a generator letter"));
        }
        let generator = (c as u8 - b'a') as i32 + 1;
        i += 1;
        let mut exp: i64 = 1;
        if chars.get(i) == Some(&'^') {
            i += 1;
            let start = i;
            if chars.get(i) == Some(&'-') {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            exp = digits
                .parse()
                .map_err(|_| format!("bad exponent '{digits}' in '{s}'"))?;
        }
        let letter = if exp < 0 { -generator } else { generator };
        for _ in 0..exp.unsigned_abs() {
            letters.push(letter);
        }
    }
    Ok(letters)
}

/// Parses lines `h <square> <element>` and `v <square> <element>`.
pub fn parse_voltages(g: &Group, text: &str) -> Result<VoltageAssignment, TextError> {
    let mut v = VoltageAssignment::new(g.clone());
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let col = raw.len() - raw.trim_start().len() + 1;
        let mut parts = trimmed.splitn(3, char::is_whitespace);
        let dir = parts.next().unwrap_or_default();
        if dir != "h" && dir != "v" {
            return Err(parse_err(
                line,
                col,
                format!("expected 'h' or 'v', found '{dir}'"),
            ));
        }
        let square = parts
            .next()
            .and_then(|x| x.parse::<u32>().ok())
            .and_then(SquareId::try_new)
            .ok_or_else(|| parse_err(line, col + 2, "expected a square number"))?;
        let elem_text = parts
            .next()
            .ok_or_else(|| parse_err(line, trimmed.len() + col, "missing group element"))?;
        let elem = parse_group_elem(g, elem_text).map_err(|m| semantic(line, m))?;
        if !seen.insert((dir, square)) {
            return Err(semantic(
                line,
                format!("duplicate voltage for {dir} {square}"),
            ));
        }
        if dir == "h" {
            v.set_h(square, elem)?;
        } else {
            v.set_v(square, elem)?;
        }
    }
    Ok(v)
}

/// Inverse of [`parse_voltages`]; horizontal lines first, by square.
pub fn render_voltages(v: &VoltageAssignment) -> String {
    let mut out = String::new();
    for (s, g) in v.horizontal() {
        out.push_str(&format!("h {s} {g}\n"));
    }
    for (s, g) in v.vertical() {
        out.push_str(&format!("v {s} {g}\n"));
    }
    out
}
