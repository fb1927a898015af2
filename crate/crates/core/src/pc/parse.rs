use super::{PcPresentation, Word};
use crate::error::{Error, Result};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

/// Parses the text form:
///
/// ```text
/// p 5
/// gen a 25
/// gen b 25
/// gen c 5
/// comm [a,b] = c
/// comm [a,c] = b^5
/// ```
///
/// Also `pow <g> = <word>` and `conj <g>^<h> = <word>`. Words are factors
/// `name`, `name^k` or `name^-k`, juxtaposed or separated by spaces or `*`;
/// `1` is the empty word. `#` starts a comment.
pub fn parse_presentation(text: &str) -> Result<PcPresentation> {
    let mut p = None;
    let mut pres = PcPresentation::default();
    let mut gens_closed = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let offset = body.len() - trimmed.len();
        let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest_col = offset + keyword.len() + 2;
        match keyword {
            "p" => {
                if p.is_some() {
                    return Err(syntax(line, offset + 1, "prime given twice"));
                }
                let v: u64 = rest.trim().parse().map_err(|_| syntax(line, rest_col, "expected a prime"))?;
                if !crate::engine::is_prime(v) {
                    return Err(syntax(line, rest_col, format!("{v} is not prime")));
                }
                p = Some(v);
                pres.p = v;
            }
            "gen" => {
                let p = p.ok_or_else(|| syntax(line, offset + 1, "`p` must come first"))?;
                if gens_closed {
                    return Err(Error::IllOrdered { line, message: "generators must precede relations".into() });
                }
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [name, order] = parts[..] else {
                    return Err(syntax(line, rest_col, "expected `gen <name> <relative order>`"));
                };
                if !is_identifier(name) {
                    return Err(syntax(line, rest_col, format!("bad generator name {name:?}")));
                }
                if pres.index(name).is_some() {
                    return Err(syntax(line, rest_col, format!("generator {name} declared twice")));
                }
                let order: u64 = order.parse().map_err(|_| syntax(line, rest_col, "expected a relative order"))?;
                let mut e = 0;
                let mut q = order;
                while q > 1 && q.is_multiple_of(p) {
                    q /= p;
                    e += 1;
                }
                if q != 1 || e == 0 {
                    return Err(syntax(line, rest_col, format!("relative order {order} is not a power of {p}")));
                }
                pres.push_generator(name, order as u32);
            }
            "pow" | "conj" | "comm" => {
                if p.is_none() {
                    return Err(syntax(line, offset + 1, "`p` must come first"));
                }
                gens_closed = true;
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| syntax(line, rest_col, "expected `=`"))?;
                let rhs_col = rest_col + lhs.len() + 1;
                let word = parse_word(&pres, rhs, line, rhs_col)?;
                let lhs = lhs.trim();
                match keyword {
                    "pow" => {
                        let i = gen_index(&pres, lhs, line, rest_col)?;
                        pres.set_power(i, word, line)?;
                    }
                    "conj" => {
                        let (x, y) = lhs.split_once('^').ok_or_else(|| syntax(line, rest_col, "expected `g^h`"))?;
                        let j = gen_index(&pres, x.trim(), line, rest_col)?;
                        let i = gen_index(&pres, y.trim(), line, rest_col)?;
                        pres.set_conjugate(j, i, word, line)?;
                    }
                    _ => {
                        let inner = lhs
                            .strip_prefix('[')
                            .and_then(|s| s.strip_suffix(']'))
                            .ok_or_else(|| syntax(line, rest_col, "expected `[g,h]`"))?;
                        let (x, y) = inner.split_once(',').ok_or_else(|| syntax(line, rest_col, "expected `[g,h]`"))?;
                        let x = gen_index(&pres, x.trim(), line, rest_col)?;
                        let y = gen_index(&pres, y.trim(), line, rest_col)?;
                        pres.set_commutator(x, y, word, line)?;
                    }
                }
            }
            other => return Err(syntax(line, offset + 1, format!("unknown keyword {other:?}"))),
        }
    }
    if p.is_none() {
        return Err(syntax(1, 1, "missing `p <prime>` line"));
    }
    Ok(pres)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn gen_index(pres: &PcPresentation, name: &str, line: usize, column: usize) -> Result<usize> {
    pres.index(name).ok_or_else(|| syntax(line, column, format!("unknown generator {name:?}")))
}

/// Parses a word; `column` is the 1-based column where `text` starts.
pub(crate) fn parse_word(pres: &PcPresentation, text: &str, line: usize, column: usize) -> Result<Word> {
    let bytes = text.as_bytes();
    let mut word = Vec::new();
    let mut i = 0;
    let mut saw_one = false;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() || c == '*' {
            i += 1;
            continue;
        }
        let col = column + i;
        if c == '1' && (i + 1 == bytes.len() || !(bytes[i + 1] as char).is_ascii_alphanumeric()) {
            saw_one = true;
            i += 1;
            continue;
        }
        if !(c.is_ascii_alphabetic() || c == '_') {
            return Err(syntax(line, col, format!("unexpected {c:?}")));
        }
        let start = i;
        while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
            i += 1;
        }
        let ident = &text[start..i];
        // Juxtaposed names: split greedily into the longest generator names.
        let mut names = Vec::new();
        let mut rest = ident;
        while !rest.is_empty() {
            let len = (1..=rest.len()).rev().find(|&l| pres.index(&rest[..l]).is_some()).ok_or_else(|| {
                syntax(line, col + (ident.len() - rest.len()), format!("unknown generator in {ident:?}"))
            })?;
            names.push(pres.index(&rest[..len]).expect("just matched"));
            rest = &rest[len..];
        }
        let mut exp = 1i64;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let estart = i;
            if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
                i += 1;
            }
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            exp = text[estart..i].parse().map_err(|_| syntax(line, column + estart, "expected an exponent"))?;
        }
        let last = names.pop().expect("identifier is nonempty");
        word.extend(names.into_iter().map(|g| (g, 1)));
        if exp != 0 {
            word.push((last, exp));
        }
    }
    if saw_one && !word.is_empty() {
        return Err(syntax(line, column, "`1` stands for the empty word and cannot be mixed with factors"));
    }
    if !saw_one && word.is_empty() {
        return Err(syntax(line, column, "empty word (write `1`)"));
    }
    Ok(word)
}
