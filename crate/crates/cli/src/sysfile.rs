//! Text format for quasilinear system definitions.
//!
//! One directive per line, `#` starts a comment, indices are 1-based:
//!
//! ```text
//! name saint-venant-1d
//! dim 1
//! vars eta u
//! flux 1 1 1 = u                      # A_1[1,1]
//! flux 1 1 2 = 1 + eta
//! symmetrizer hamiltonian UH 1 2 = u  # variant, domain predicate, row, col
//! factor 1 1 2 = 1                    # S_1^0[1,2]
//! predicate UH = 1 + eta - u^2
//! ```
//!
//! Entries that are not listed are zero. Polynomials use `+ - * ^`,
//! parentheses, decimal numbers and the declared variable names.

use std::fmt::Write as _;

use quasispec::poly::{Matrix, Poly, PolyMatrix};
use quasispec::systems::{Predicate, Symmetrizer};
use quasispec::{EnergyVariant, SystemDef};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

// ---------------------------------------------------------------------------
// Polynomial expressions

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
    line: usize,
    /// Column of `src[0]` in the original line (1-based).
    offset: usize,
}

impl<'a> ExprParser<'a> {
    fn col(&self) -> usize {
        self.offset + self.pos
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        err(self.line, self.col(), message)
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let n = self.vars.len();
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        debug_assert_eq!(acc.nvars(), n);
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected a non-negative integer exponent");
        }
        let e: u32 = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits").parse().map_err(|_| {
            ParseError { line: self.line, column: self.offset + start, message: "exponent too large".into() }
        })?;
        let mut out = Poly::constant(self.vars.len(), 1.0);
        for _ in 0..e {
            out = &out * &base;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let n = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.fail("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    let exp_sign =
                        (c == b'+' || c == b'-') && self.pos > start && matches!(self.src[self.pos - 1], b'e' | b'E');
                    if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match text.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(Poly::constant(n, v)),
                    _ => err(self.line, self.offset + start, format!("invalid number `{text}`")),
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(Poly::var(n, i)),
                    None => err(
                        self.line,
                        self.offset + start,
                        format!("unknown variable `{name}` (declared: {})", self.vars.join(", ")),
                    ),
                }
            }
            Some(c) => self.fail(format!("unexpected `{}`", c as char)),
            None => self.fail("unexpected end of expression"),
        }
    }
}

/// Parses a polynomial in `vars`; `column` is the 1-based position of `text` in its line.
pub fn parse_poly(text: &str, vars: &[String], line: usize, column: usize) -> Result<Poly, ParseError> {
    let mut p = ExprParser { src: text.as_bytes(), pos: 0, vars, line, offset: column };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.fail("unexpected trailing input");
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Documents

/// A whitespace-separated word with its 1-based column.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

struct Pending {
    line: usize,
    column: usize,
    kind: PendingKind,
    expr: String,
    expr_col: usize,
}

enum PendingKind {
    Flux { axis: usize, row: usize, col: usize },
    Sym { variant: EnergyVariant, domain: String, row: usize, col: usize },
    Factor { axis: usize, row: usize, col: usize },
    Predicate { name: String },
}

fn parse_index(
    word: Option<&(usize, &str)>,
    line: usize,
    fallback_col: usize,
    what: &str,
    max: usize,
) -> Result<usize, ParseError> {
    let Some(&(col, w)) = word else {
        return err(line, fallback_col, format!("missing {what}"));
    };
    match w.parse::<usize>() {
        Ok(i) if i >= 1 && i <= max => Ok(i - 1),
        _ => err(line, col, format!("{what} must be an integer in 1..={max}, got `{w}`")),
    }
}

/// Parses a system definition document.
pub fn parse_system(text: &str) -> Result<SystemDef, ParseError> {
    let mut name: Option<String> = None;
    let mut dim: Option<(usize, usize)> = None;
    let mut size: Option<(usize, usize, usize)> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut pending: Vec<Pending> = Vec::new();
    let mut last_line = 1;

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let (head, expr) = match content.find('=') {
            Some(i) => (&content[..i], Some((i + 2, &content[i + 1..]))),
            None => (content, None),
        };
        let w = words(head);
        let Some(&(kcol, keyword)) = w.first() else {
            if expr.is_some() {
                return err(line, 1, "expected a directive before `=`");
            }
            continue;
        };
        let need_header =
            |what: &str| ParseError { line, column: kcol, message: format!("`{keyword}` before `{what}`") };
        match keyword {
            "name" | "dim" | "size" | "vars" => {
                if let Some((c, _)) = expr {
                    return err(line, c - 1, format!("`{keyword}` takes no `=`"));
                }
                if w.len() < 2 {
                    return err(line, kcol + keyword.len(), format!("`{keyword}` needs a value"));
                }
                match keyword {
                    "name" => {
                        if w.len() != 2 {
                            return err(line, w[2].0, "system name must be a single word");
                        }
                        name = Some(w[1].1.to_string());
                    }
                    "dim" | "size" => {
                        if w.len() != 2 {
                            return err(line, w[2].0, "unexpected extra value");
                        }
                        let v: usize = w[1].1.parse().or_else(|_| err(line, w[1].0, "expected a positive integer"))?;
                        if keyword == "dim" {
                            if !(1..=2).contains(&v) {
                                return err(line, w[1].0, "dim must be 1 or 2");
                            }
                            dim = Some((v, line));
                        } else {
                            size = Some((v, line, w[1].0));
                        }
                    }
                    _ => {
                        let list: Vec<String> = w[1..].iter().map(|(_, s)| s.to_string()).collect();
                        for (i, (c, v)) in w[1..].iter().enumerate() {
                            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                            if !ok {
                                return err(line, *c, format!("invalid variable name `{v}`"));
                            }
                            if list[..i].contains(&v.to_string()) {
                                return err(line, *c, format!("duplicate variable `{v}`"));
                            }
                        }
                        vars = Some(list);
                    }
                }
            }
            "flux" | "symmetrizer" | "factor" | "predicate" => {
                let Some((ecol, etext)) = expr else {
                    return err(line, kcol + keyword.len(), format!("`{keyword}` needs `= <expression>`"));
                };
                let n = vars.as_ref().ok_or_else(|| need_header("vars"))?.len();
                let d = dim.ok_or_else(|| need_header("dim"))?.0;
                let end_col = kcol + keyword.len();
                let kind = match keyword {
                    "flux" | "factor" => {
                        if w.len() != 4 {
                            return err(
                                line,
                                end_col,
                                format!("`{keyword}` expects: {keyword} <axis> <row> <col> = ..."),
                            );
                        }
                        let axis = parse_index(w.get(1), line, end_col, "axis", d)?;
                        let row = parse_index(w.get(2), line, end_col, "row", n)?;
                        let col = parse_index(w.get(3), line, end_col, "column", n)?;
                        if keyword == "flux" {
                            PendingKind::Flux { axis, row, col }
                        } else {
                            PendingKind::Factor { axis, row, col }
                        }
                    }
                    "symmetrizer" => {
                        if w.len() != 5 {
                            return err(
                                line,
                                end_col,
                                "`symmetrizer` expects: symmetrizer <variant> <domain> <row> <col> = ...",
                            );
                        }
                        let variant = match w[1].1 {
                            "standard" => EnergyVariant::Standard,
                            "hamiltonian" => EnergyVariant::Hamiltonian,
                            other => {
                                return err(line, w[1].0, format!("unknown variant `{other}` (standard, hamiltonian)"))
                            }
                        };
                        let row = parse_index(w.get(3), line, end_col, "row", n)?;
                        let col = parse_index(w.get(4), line, end_col, "column", n)?;
                        PendingKind::Sym { variant, domain: w[2].1.to_string(), row, col }
                    }
                    _ => {
                        if w.len() != 2 {
                            return err(line, end_col, "`predicate` expects: predicate <NAME> = ...");
                        }
                        PendingKind::Predicate { name: w[1].1.to_string() }
                    }
                };
                pending.push(Pending { line, column: kcol, kind, expr: etext.to_string(), expr_col: ecol });
            }
            other => return err(line, kcol, format!("unknown directive `{other}`")),
        }
    }

    let name = name.ok_or(ParseError { line: last_line, column: 1, message: "missing `name`".into() })?;
    let (d, _) = dim.ok_or(ParseError { line: last_line, column: 1, message: "missing `dim`".into() })?;
    let vars = vars.ok_or(ParseError { line: last_line, column: 1, message: "missing `vars`".into() })?;
    let n = vars.len();
    if let Some((s, line, col)) = size {
        if s != n {
            return err(line, col, format!("size {s} does not match {n} declared variables"));
        }
    }

    let mut flux: Vec<PolyMatrix> = (0..d).map(|_| PolyMatrix::zeros(n, n)).collect();
    let mut syms: Vec<(EnergyVariant, String, PolyMatrix, usize, usize)> = Vec::new();
    let mut factors: Option<Vec<Matrix>> = None;
    let mut predicates: Vec<Predicate> = Vec::new();
    for p in pending {
        let poly = parse_poly(&p.expr, &vars, p.line, p.expr_col)?;
        match p.kind {
            PendingKind::Flux { axis, row, col } => flux[axis].set(row, col, poly),
            PendingKind::Sym { variant, domain, row, col } => {
                let idx = match syms.iter().position(|s| s.0 == variant) {
                    Some(i) => {
                        if syms[i].1 != domain {
                            return err(p.line, p.column, format!("{} symmetrizer domain changed", variant.as_str()));
                        }
                        i
                    }
                    None => {
                        syms.push((variant, domain, PolyMatrix::zeros(n, n), p.line, p.column));
                        syms.len() - 1
                    }
                };
                syms[idx].2.set(row, col, poly);
            }
            PendingKind::Factor { axis, row, col } => {
                if poly.degree() > 0 {
                    return err(p.line, p.expr_col, "factor entries must be constants");
                }
                let f = factors.get_or_insert_with(|| (0..d).map(|_| Matrix::zeros(n)).collect());
                f[axis].set(row, col, poly.constant_term());
            }
            PendingKind::Predicate { name } => {
                if predicates.iter().any(|q| q.name == name) {
                    return err(p.line, p.column, format!("duplicate predicate `{name}`"));
                }
                predicates.push(Predicate { name, poly });
            }
        }
    }
    for (variant, domain, _, line, column) in &syms {
        if !predicates.iter().any(|p| &p.name == domain) {
            return err(
                *line,
                *column,
                format!("{} symmetrizer refers to unknown predicate `{domain}`", variant.as_str()),
            );
        }
    }
    let symmetrizers =
        syms.into_iter().map(|(variant, domain, matrix, _, _)| Symmetrizer { variant, matrix, domain }).collect();
    SystemDef::new(name, d, vars, flux, symmetrizers, factors, predicates).map_err(|e| ParseError {
        line: last_line,
        column: 1,
        message: e.to_string(),
    })
}

/// Serializes `sys` in the format read by [`parse_system`].
pub fn write_system(sys: &SystemDef) -> String {
    let names: Vec<&str> = sys.var_names().iter().map(String::as_str).collect();
    let mut out = String::new();
    let _ = writeln!(out, "name {}", sys.name());
    let _ = writeln!(out, "dim {}", sys.dim());
    let _ = writeln!(out, "size {}", sys.size());
    let _ = writeln!(out, "vars {}", names.join(" "));
    let n = sys.size();
    for j in 0..sys.dim() {
        for r in 0..n {
            for c in 0..n {
                let p = sys.flux(j).get(r, c);
                if !p.is_zero() {
                    let _ = writeln!(out, "flux {} {} {} = {}", j + 1, r + 1, c + 1, p.display_with(&names));
                }
            }
        }
    }
    for s in sys.symmetrizers() {
        for r in 0..n {
            for c in 0..n {
                let p = s.matrix.get(r, c);
                if !p.is_zero() {
                    let _ = writeln!(
                        out,
                        "symmetrizer {} {} {} {} = {}",
                        s.variant.as_str(),
                        s.domain,
                        r + 1,
                        c + 1,
                        p.display_with(&names)
                    );
                }
            }
        }
    }
    if let Some(f) = sys.factorization() {
        for (j, m) in f.iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    let v = m.get(r, c);
                    if v != 0.0 {
                        let _ = writeln!(out, "factor {} {} {} = {v:?}", j + 1, r + 1, c + 1);
                    }
                }
            }
        }
    }
    for p in sys.predicates() {
        let _ = writeln!(out, "predicate {} = {}", p.name, p.poly.display_with(&names));
    }
    out
}
