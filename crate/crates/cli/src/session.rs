//! Session scripts: a line-oriented grammar for declaring one ring plus
//! modules, dualizer candidates, primes, and grade tables, followed by
//! commands. Parsing builds a printable AST; `print_session` followed by
//! `parse_session` is the identity on the AST.

use std::collections::HashMap;
use std::fmt;

/// Parse diagnostic: 1-based line and column plus what was expected there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: expected {}",
            self.line, self.col, self.expected
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Decl(Decl),
    Command(Command),
}

/// Polynomials are kept as source text; they are parsed against the ring
/// when the session runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Ring {
        name: String,
        p: u64,
        vars: Vec<String>,
        order: String,
        ideal: Vec<String>,
    },
    /// Rows are generators, columns are relations.
    Module {
        name: String,
        rows: Vec<Vec<String>>,
        degrees: Option<Vec<i64>>,
    },
    Dualizer {
        name: String,
        module: String,
    },
    Prime {
        name: String,
        gens: Vec<String>,
        inclusions: Vec<String>,
    },
    GradeFn {
        name: String,
        entries: Vec<(String, GradeValue)>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradeValue {
    Finite(usize),
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KindArg {
    Projective,
    Dualizer(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimesArg {
    All,
    Named(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeSyntax {
    Gen { index: usize },
    Free { twists: Vec<i64> },
    Syz { child: usize },
    Sum { child: usize, summand: String, complement: String },
    Ext {
        left: usize,
        right: usize,
        middle: String,
        incl: Vec<Vec<String>>,
        proj: Vec<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Semidual { module: String, bound: Option<usize> },
    Totref { module: String, dualizer: String, bound: Option<usize> },
    Gcdim { module: String, dualizer: String, bound: Option<usize> },
    Depth { module: String },
    Grade { gens: Vec<String> },
    Transpose { module: String, dualizer: String },
    TransposeSes { module: String, dualizer: String },
    Cosyzygy { module: String, dualizer: String },
    Ext { left: String, right: String, index: usize },
    Tor { left: String, right: String, index: usize },
    Hom { left: String, right: String },
    Resolution { module: String, bound: Option<usize> },
    Hilbert { module: String, lo: i64, hi: i64 },
    Dim { module: String },
    Iso { left: String, right: String },
    Phi { set: Vec<String>, kind: KindArg, primes: PrimesArg },
    Lambda { module: String, gradefn: String, kind: KindArg, primes: PrimesArg },
    Gcheck { gradefn: String, primes: PrimesArg },
    Witness {
        target: String,
        base: Vec<String>,
        nodes: Vec<NodeSyntax>,
        root: usize,
    },
    Wwords { dualizer: String, length: usize },
    Extvdim { module: String, family: Vec<String>, bound: Option<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NameKind {
    Ring,
    Module,
    Dualizer,
    Prime,
    GradeFn,
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    names: &'a HashMap<String, NameKind>,
}

impl<'a> Cursor<'a> {
    fn new(text: &str, line: usize, names: &'a HashMap<String, NameKind>) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, line, names }
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError { line: self.line, col: self.pos + 1, expected: expected.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat_char(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_char(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_char(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    /// Next identifier-shaped word without consuming it.
    fn peek_word(&mut self) -> Option<String> {
        self.skip_ws();
        let mut end = self.pos;
        while end < self.chars.len()
            && (self.chars[end].is_ascii_alphanumeric() || self.chars[end] == '_')
        {
            end += 1;
        }
        if end == self.pos || self.chars[self.pos].is_ascii_digit() {
            None
        } else {
            Some(self.chars[self.pos..end].iter().collect())
        }
    }

    fn word(&mut self) -> Result<String, ParseError> {
        match self.peek_word() {
            Some(w) => {
                self.pos += w.chars().count();
                Ok(w)
            }
            None => Err(self.error("a name")),
        }
    }

    fn eat_word(&mut self, kw: &str) -> bool {
        if self.peek_word().as_deref() == Some(kw) {
            self.pos += kw.chars().count();
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_word(kw) {
            Ok(())
        } else {
            Err(self.error(&format!("'{kw}'")))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("an integer"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("an integer")
        })
    }

    fn uint(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let v = self.int()?;
        if v < 0 {
            self.pos = start;
            return Err(self.error("a nonnegative integer"));
        }
        Ok(v as usize)
    }

    /// Raw text up to the matching `close`, with (), [], {} nesting
    /// respected; the opening delimiter must already be consumed.
    fn raw_until(&mut self, close: char) -> Result<String, ParseError> {
        let start = self.pos;
        let mut depth = 0usize;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if depth == 0 && c == close {
                let text: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                return Ok(text);
            }
            match c {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => {
                    if depth == 0 {
                        return Err(self.error(&format!("'{close}'")));
                    }
                    depth -= 1;
                }
                _ => {}
            }
            self.pos += 1;
        }
        Err(self.error(&format!("'{close}'")))
    }

    fn lookup(&self, name: &str) -> Option<NameKind> {
        self.names.get(name).copied()
    }

    /// A declared module name; dualizer names stand for their modules.
    fn module_ref(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let name = self.word().map_err(|_| self.error("a declared module name"))?;
        match self.lookup(&name) {
            Some(NameKind::Module) | Some(NameKind::Dualizer) => Ok(name),
            _ => {
                self.pos = start;
                Err(self.error("a declared module name"))
            }
        }
    }

    fn dualizer_ref(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let name = self.word().map_err(|_| self.error("a declared dualizer name"))?;
        if self.lookup(&name) == Some(NameKind::Dualizer) {
            Ok(name)
        } else {
            self.pos = start;
            Err(self.error("a declared dualizer name"))
        }
    }

    fn prime_ref(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let name = self.word().map_err(|_| self.error("a declared prime name"))?;
        if self.lookup(&name) == Some(NameKind::Prime) {
            Ok(name)
        } else {
            self.pos = start;
            Err(self.error("a declared prime name"))
        }
    }

    fn gradefn_ref(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let name = self.word().map_err(|_| self.error("a declared gradefn name"))?;
        if self.lookup(&name) == Some(NameKind::GradeFn) {
            Ok(name)
        } else {
            self.pos = start;
            Err(self.error("a declared gradefn name"))
        }
    }
}

/// Split on commas at nesting depth zero; entries are trimmed.
fn split_top_commas(text: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(current.trim().to_string());
                current.clear();
                continue;
            }
            _ => {}
        }
        current.push(c);
    }
    if !current.trim().is_empty() || !parts.is_empty() {
        parts.push(current.trim().to_string());
    }
    parts
}

fn poly_list(cur: &mut Cursor, inner: String) -> Result<Vec<String>, ParseError> {
    let parts = split_top_commas(&inner);
    if parts.is_empty() || parts.iter().any(|p| p.is_empty()) {
        return Err(cur.error("a polynomial"));
    }
    Ok(parts)
}

/// `[[p, q], [r, s]]`: rows of raw polynomial text, all the same length.
fn matrix(cur: &mut Cursor) -> Result<Vec<Vec<String>>, ParseError> {
    cur.expect_char('[')?;
    let mut rows = Vec::new();
    loop {
        cur.expect_char('[')?;
        let inner = cur.raw_until(']')?;
        if inner.trim().is_empty() {
            rows.push(Vec::new());
        } else {
            rows.push(poly_list(cur, inner)?);
        }
        if cur.eat_char(',') {
            continue;
        }
        cur.expect_char(']')?;
        break;
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(cur.error("matrix rows of equal length"));
    }
    Ok(rows)
}

fn int_list(cur: &mut Cursor) -> Result<Vec<i64>, ParseError> {
    cur.expect_char('[')?;
    let mut out = Vec::new();
    if cur.eat_char(']') {
        return Ok(out);
    }
    loop {
        out.push(cur.int()?);
        if cur.eat_char(',') {
            continue;
        }
        cur.expect_char(']')?;
        return Ok(out);
    }
}

fn module_set(cur: &mut Cursor) -> Result<Vec<String>, ParseError> {
    cur.expect_char('{')?;
    let mut out = vec![cur.module_ref()?];
    while cur.eat_char(',') {
        out.push(cur.module_ref()?);
    }
    cur.expect_char('}')?;
    Ok(out)
}

fn primes_arg(cur: &mut Cursor) -> Result<PrimesArg, ParseError> {
    if cur.eat_word("all") {
        return Ok(PrimesArg::All);
    }
    cur.expect_char('{')?;
    let mut out = vec![cur.prime_ref()?];
    while cur.eat_char(',') {
        out.push(cur.prime_ref()?);
    }
    cur.expect_char('}')?;
    Ok(PrimesArg::Named(out))
}

fn kind_arg(cur: &mut Cursor) -> Result<KindArg, ParseError> {
    if cur.eat_word("projective") {
        Ok(KindArg::Projective)
    } else if cur.eat_word("dualizer") {
        Ok(KindArg::Dualizer(cur.dualizer_ref()?))
    } else {
        Err(cur.error("'projective' or 'dualizer'"))
    }
}

fn opt_bound(cur: &mut Cursor) -> Result<Option<usize>, ParseError> {
    if cur.eat_word("bound") {
        Ok(Some(cur.uint()?))
    } else {
        Ok(None)
    }
}

fn witness_node(cur: &mut Cursor) -> Result<NodeSyntax, ParseError> {
    if cur.eat_word("gen") {
        Ok(NodeSyntax::Gen { index: cur.uint()? })
    } else if cur.eat_word("free") {
        Ok(NodeSyntax::Free { twists: int_list(cur)? })
    } else if cur.eat_word("syz") {
        Ok(NodeSyntax::Syz { child: cur.uint()? })
    } else if cur.eat_word("sum") {
        let child = cur.uint()?;
        cur.expect_word("summand")?;
        let summand = cur.module_ref()?;
        cur.expect_word("complement")?;
        let complement = cur.module_ref()?;
        Ok(NodeSyntax::Sum { child, summand, complement })
    } else if cur.eat_word("ext") {
        let left = cur.uint()?;
        let right = cur.uint()?;
        cur.expect_word("middle")?;
        let middle = cur.module_ref()?;
        cur.expect_word("incl")?;
        let incl = matrix(cur)?;
        cur.expect_word("proj")?;
        let proj = matrix(cur)?;
        Ok(NodeSyntax::Ext { left, right, middle, incl, proj })
    } else {
        Err(cur.error("a witness node ('gen', 'free', 'syz', 'sum', 'ext')"))
    }
}

fn ideal_clause(cur: &mut Cursor) -> Result<Vec<String>, ParseError> {
    cur.expect_word("ideal")?;
    cur.expect_char('(')?;
    let inner = cur.raw_until(')')?;
    poly_list(cur, inner)
}

fn parse_command(cur: &mut Cursor, head: &str) -> Result<Command, ParseError> {
    match head {
        "semidual" => Ok(Command::Semidual { module: cur.module_ref()?, bound: opt_bound(cur)? }),
        "totref" => {
            let module = cur.module_ref()?;
            cur.expect_word("dualizer")?;
            let dualizer = cur.dualizer_ref()?;
            Ok(Command::Totref { module, dualizer, bound: opt_bound(cur)? })
        }
        "gcdim" => {
            let module = cur.module_ref()?;
            cur.expect_word("dualizer")?;
            let dualizer = cur.dualizer_ref()?;
            Ok(Command::Gcdim { module, dualizer, bound: opt_bound(cur)? })
        }
        "depth" => Ok(Command::Depth { module: cur.module_ref()? }),
        "grade" => Ok(Command::Grade { gens: ideal_clause(cur)? }),
        "transpose" => {
            let module = cur.module_ref()?;
            cur.expect_word("dualizer")?;
            Ok(Command::Transpose { module, dualizer: cur.dualizer_ref()? })
        }
        "transpose_ses" => {
            let module = cur.module_ref()?;
            cur.expect_word("dualizer")?;
            Ok(Command::TransposeSes { module, dualizer: cur.dualizer_ref()? })
        }
        "cosyzygy" => {
            let module = cur.module_ref()?;
            cur.expect_word("dualizer")?;
            Ok(Command::Cosyzygy { module, dualizer: cur.dualizer_ref()? })
        }
        "ext" | "tor" => {
            let left = cur.module_ref()?;
            let right = cur.module_ref()?;
            cur.expect_word("index")?;
            let index = cur.uint()?;
            if head == "ext" {
                Ok(Command::Ext { left, right, index })
            } else {
                Ok(Command::Tor { left, right, index })
            }
        }
        "hom" => Ok(Command::Hom { left: cur.module_ref()?, right: cur.module_ref()? }),
        "resolution" => {
            Ok(Command::Resolution { module: cur.module_ref()?, bound: opt_bound(cur)? })
        }
        "hilbert" => {
            let module = cur.module_ref()?;
            cur.expect_word("from")?;
            let lo = cur.int()?;
            cur.expect_word("to")?;
            let hi = cur.int()?;
            Ok(Command::Hilbert { module, lo, hi })
        }
        "dim" => Ok(Command::Dim { module: cur.module_ref()? }),
        "iso" => Ok(Command::Iso { left: cur.module_ref()?, right: cur.module_ref()? }),
        "phi" => {
            cur.expect_word("set")?;
            let set = module_set(cur)?;
            cur.expect_word("kind")?;
            let kind = kind_arg(cur)?;
            cur.expect_word("primes")?;
            Ok(Command::Phi { set, kind, primes: primes_arg(cur)? })
        }
        "lambda" => {
            let module = cur.module_ref()?;
            cur.expect_word("gradefn")?;
            let gradefn = cur.gradefn_ref()?;
            cur.expect_word("kind")?;
            let kind = kind_arg(cur)?;
            cur.expect_word("primes")?;
            Ok(Command::Lambda { module, gradefn, kind, primes: primes_arg(cur)? })
        }
        "gcheck" => {
            cur.expect_word("gradefn")?;
            let gradefn = cur.gradefn_ref()?;
            cur.expect_word("primes")?;
            Ok(Command::Gcheck { gradefn, primes: primes_arg(cur)? })
        }
        "witness" => {
            cur.expect_word("target")?;
            let target = cur.module_ref()?;
            cur.expect_word("base")?;
            let base = module_set(cur)?;
            cur.expect_word("nodes")?;
            cur.expect_char('[')?;
            let mut nodes = vec![witness_node(cur)?];
            while cur.eat_char(';') {
                nodes.push(witness_node(cur)?);
            }
            cur.expect_char(']')?;
            cur.expect_word("root")?;
            let root = cur.uint()?;
            Ok(Command::Witness { target, base, nodes, root })
        }
        "wwords" => {
            cur.expect_word("dualizer")?;
            let dualizer = cur.dualizer_ref()?;
            cur.expect_word("length")?;
            Ok(Command::Wwords { dualizer, length: cur.uint()? })
        }
        "extvdim" => {
            let module = cur.module_ref()?;
            cur.expect_word("family")?;
            let family = module_set(cur)?;
            Ok(Command::Extvdim { module, family, bound: opt_bound(cur)? })
        }
        _ => Err(cur.error("a declaration or command")),
    }
}

const COMMAND_WORDS: &[&str] = &[
    "semidual", "totref", "gcdim", "depth", "grade", "transpose", "transpose_ses",
    "cosyzygy", "ext", "tor", "hom", "resolution", "hilbert", "dim", "iso", "phi",
    "lambda", "gcheck", "witness", "wwords", "extvdim",
];

/// Parse a whole script. Declarations must precede use; one ring per
/// session, declared before anything that needs it.
pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    let mut names: HashMap<String, NameKind> = HashMap::new();
    let mut items = Vec::new();
    let mut have_ring = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let stripped = match raw.find('#') {
            Some(h) => &raw[..h],
            None => raw,
        };
        if stripped.trim().is_empty() {
            continue;
        }
        // the cursor borrows the name table; stage any new name and insert
        // after the borrow ends
        let mut new_name: Option<(String, NameKind)> = None;
        let item = {
            let mut cur = Cursor::new(stripped, line_no, &names);
            let head = cur.word()?;
            let item = match head.as_str() {
                "ring" => {
                    if have_ring {
                        return Err(cur.error("no second ring (one ring per session)"));
                    }
                    let name = cur.word()?;
                    if cur.lookup(&name).is_some() {
                        return Err(cur.error("an undeclared name"));
                    }
                    cur.expect_char('=')?;
                    cur.expect_word("poly")?;
                    cur.expect_char('(')?;
                    let p = cur.uint()? as u64;
                    cur.expect_char(',')?;
                    cur.expect_char('[')?;
                    let mut vars = vec![cur.word()?];
                    while cur.eat_char(',') {
                        vars.push(cur.word()?);
                    }
                    cur.expect_char(']')?;
                    cur.expect_char(',')?;
                    let order = cur.word()?;
                    cur.expect_char(')')?;
                    let ideal = if cur.eat_char('/') {
                        ideal_clause(&mut cur)?
                    } else {
                        Vec::new()
                    };
                    new_name = Some((name.clone(), NameKind::Ring));
                    have_ring = true;
                    Item::Decl(Decl::Ring { name, p, vars, order, ideal })
                }
                "module" | "dualizer" | "prime" | "gradefn" => {
                    if !have_ring {
                        return Err(cur.error("a ring declaration first"));
                    }
                    let name = cur.word()?;
                    if cur.lookup(&name).is_some() {
                        return Err(cur.error("an undeclared name"));
                    }
                    cur.expect_char('=')?;
                    match head.as_str() {
                        "module" => {
                            cur.expect_word("coker")?;
                            let rows = matrix(&mut cur)?;
                            let degrees = if cur.eat_word("degrees") {
                                let d = int_list(&mut cur)?;
                                if d.len() != rows.len() {
                                    return Err(
                                        cur.error("one degree per matrix row")
                                    );
                                }
                                Some(d)
                            } else {
                                None
                            };
                            new_name = Some((name.clone(), NameKind::Module));
                            Item::Decl(Decl::Module { name, rows, degrees })
                        }
                        "dualizer" => {
                            let module = cur.module_ref()?;
                            new_name = Some((name.clone(), NameKind::Dualizer));
                            Item::Decl(Decl::Dualizer { name, module })
                        }
                        "prime" => {
                            let gens = ideal_clause(&mut cur)?;
                            let inclusions = if cur.eat_word("in") {
                                let mut incl = vec![cur.prime_ref()?];
                                while cur.eat_char(',') {
                                    incl.push(cur.prime_ref()?);
                                }
                                incl
                            } else {
                                Vec::new()
                            };
                            new_name = Some((name.clone(), NameKind::Prime));
                            Item::Decl(Decl::Prime { name, gens, inclusions })
                        }
                        _ => {
                            cur.expect_char('{')?;
                            let mut entries = Vec::new();
                            if !cur.eat_char('}') {
                                loop {
                                    let p = cur.prime_ref()?;
                                    if entries.iter().any(|(q, _)| *q == p) {
                                        return Err(cur.error("a distinct prime name"));
                                    }
                                    cur.expect_char(':')?;
                                    let v = if cur.eat_word("inf") {
                                        GradeValue::Infinity
                                    } else {
                                        GradeValue::Finite(cur.uint()?)
                                    };
                                    entries.push((p, v));
                                    if cur.eat_char(',') {
                                        continue;
                                    }
                                    cur.expect_char('}')?;
                                    break;
                                }
                            }
                            new_name = Some((name.clone(), NameKind::GradeFn));
                            Item::Decl(Decl::GradeFn { name, entries })
                        }
                    }
                }
                w if COMMAND_WORDS.contains(&w) => {
                    if !have_ring {
                        return Err(cur.error("a ring declaration first"));
                    }
                    Item::Command(parse_command(&mut cur, w)?)
                }
                _ => return Err(cur.error("a declaration or command")),
            };
            if !cur.at_end() {
                return Err(cur.error("end of line"));
            }
            item
        };
        if let Some((name, kind)) = new_name {
            names.insert(name, kind);
        }
        items.push(item);
    }
    Ok(Session { items })
}

fn print_matrix(rows: &[Vec<String>]) -> String {
    let body: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", body.join(", "))
}

fn print_kind(kind: &KindArg) -> String {
    match kind {
        KindArg::Projective => "projective".to_string(),
        KindArg::Dualizer(d) => format!("dualizer {d}"),
    }
}

fn print_primes(primes: &PrimesArg) -> String {
    match primes {
        PrimesArg::All => "all".to_string(),
        PrimesArg::Named(ps) => format!("{{{}}}", ps.join(", ")),
    }
}

fn print_set(set: &[String]) -> String {
    format!("{{{}}}", set.join(", "))
}

fn print_ints(ints: &[i64]) -> String {
    let body: Vec<String> = ints.iter().map(|v| v.to_string()).collect();
    format!("[{}]", body.join(", "))
}

fn print_bound(bound: &Option<usize>) -> String {
    match bound {
        Some(b) => format!(" bound {b}"),
        None => String::new(),
    }
}

fn print_node(node: &NodeSyntax) -> String {
    match node {
        NodeSyntax::Gen { index } => format!("gen {index}"),
        NodeSyntax::Free { twists } => format!("free {}", print_ints(twists)),
        NodeSyntax::Syz { child } => format!("syz {child}"),
        NodeSyntax::Sum { child, summand, complement } => {
            format!("sum {child} summand {summand} complement {complement}")
        }
        NodeSyntax::Ext { left, right, middle, incl, proj } => format!(
            "ext {left} {right} middle {middle} incl {} proj {}",
            print_matrix(incl),
            print_matrix(proj)
        ),
    }
}

/// Canonical single line for one command; used by the printer and by the
/// text report format.
pub fn print_command(c: &Command) -> String {
    match c {
        Command::Semidual { module, bound } => {
            format!("semidual {module}{}", print_bound(bound))
        }
        Command::Totref { module, dualizer, bound } => {
            format!("totref {module} dualizer {dualizer}{}", print_bound(bound))
        }
        Command::Gcdim { module, dualizer, bound } => {
            format!("gcdim {module} dualizer {dualizer}{}", print_bound(bound))
        }
        Command::Depth { module } => format!("depth {module}"),
        Command::Grade { gens } => format!("grade ideal({})", gens.join(", ")),
        Command::Transpose { module, dualizer } => {
            format!("transpose {module} dualizer {dualizer}")
        }
        Command::TransposeSes { module, dualizer } => {
            format!("transpose_ses {module} dualizer {dualizer}")
        }
        Command::Cosyzygy { module, dualizer } => {
            format!("cosyzygy {module} dualizer {dualizer}")
        }
        Command::Ext { left, right, index } => format!("ext {left} {right} index {index}"),
        Command::Tor { left, right, index } => format!("tor {left} {right} index {index}"),
        Command::Hom { left, right } => format!("hom {left} {right}"),
        Command::Resolution { module, bound } => {
            format!("resolution {module}{}", print_bound(bound))
        }
        Command::Hilbert { module, lo, hi } => format!("hilbert {module} from {lo} to {hi}"),
        Command::Dim { module } => format!("dim {module}"),
        Command::Iso { left, right } => format!("iso {left} {right}"),
        Command::Phi { set, kind, primes } => format!(
            "phi set {} kind {} primes {}",
            print_set(set),
            print_kind(kind),
            print_primes(primes)
        ),
        Command::Lambda { module, gradefn, kind, primes } => format!(
            "lambda {module} gradefn {gradefn} kind {} primes {}",
            print_kind(kind),
            print_primes(primes)
        ),
        Command::Gcheck { gradefn, primes } => {
            format!("gcheck gradefn {gradefn} primes {}", print_primes(primes))
        }
        Command::Witness { target, base, nodes, root } => {
            let body: Vec<String> = nodes.iter().map(print_node).collect();
            format!(
                "witness target {target} base {} nodes [{}] root {root}",
                print_set(base),
                body.join("; ")
            )
        }
        Command::Wwords { dualizer, length } => {
            format!("wwords dualizer {dualizer} length {length}")
        }
        Command::Extvdim { module, family, bound } => format!(
            "extvdim {module} family {}{}",
            print_set(family),
            print_bound(bound)
        ),
    }
}

fn print_decl(d: &Decl) -> String {
    match d {
        Decl::Ring { name, p, vars, order, ideal } => {
            let mut s = format!("ring {name} = poly({p}, [{}], {order})", vars.join(", "));
            if !ideal.is_empty() {
                s.push_str(&format!(" / ideal({})", ideal.join(", ")));
            }
            s
        }
        Decl::Module { name, rows, degrees } => {
            let mut s = format!("module {name} = coker {}", print_matrix(rows));
            if let Some(d) = degrees {
                s.push_str(&format!(" degrees {}", print_ints(d)));
            }
            s
        }
        Decl::Dualizer { name, module } => format!("dualizer {name} = {module}"),
        Decl::Prime { name, gens, inclusions } => {
            let mut s = format!("prime {name} = ideal({})", gens.join(", "));
            if !inclusions.is_empty() {
                s.push_str(&format!(" in {}", inclusions.join(", ")));
            }
            s
        }
        Decl::GradeFn { name, entries } => {
            if entries.is_empty() {
                return format!("gradefn {name} = {{ }}");
            }
            let body: Vec<String> = entries
                .iter()
                .map(|(p, v)| match v {
                    GradeValue::Finite(n) => format!("{p}: {n}"),
                    GradeValue::Infinity => format!("{p}: inf"),
                })
                .collect();
            format!("gradefn {name} = {{ {} }}", body.join(", "))
        }
    }
}

/// Canonical text for a session; `parse_session(print_session(s)) == s`.
pub fn print_session(s: &Session) -> String {
    let mut out = String::new();
    for item in &s.items {
        match item {
            Item::Decl(d) => out.push_str(&print_decl(d)),
            Item::Command(c) => out.push_str(&print_command(c)),
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "\
# cross with a dualizer and a prime chain
ring R = poly(101, [x, y], grevlex) / ideal(x*y)
module M = coker [[x, y]]
module Rfree = coker [[0]]
dualizer C = Rfree
prime px = ideal(x)
prime m = ideal(x, y) in px
gradefn f = { px: 0, m: 1 }
gcdim M dualizer C bound 20
phi set {M} kind projective primes all
";

    #[test]
    fn fixture_parses_and_round_trips() {
        let s = parse_session(FIXTURE).unwrap();
        assert_eq!(s.items.len(), 9);
        let printed = print_session(&s);
        let again = parse_session(&printed).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn ring_without_quotient_clause() {
        let s = parse_session("ring R = poly(101, [x], lex)\n").unwrap();
        match &s.items[0] {
            Item::Decl(Decl::Ring { ideal, order, .. }) => {
                assert!(ideal.is_empty());
                assert_eq!(order, "lex");
            }
            other => panic!("unexpected item {other:?}"),
        }
    }

    #[test]
    fn degrees_count_must_match_rows() {
        let text = "ring R = poly(101, [x, y], grevlex)\nmodule M = coker [[x],[y]] degrees [0]\n";
        let e = parse_session(text).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.expected.contains("one degree per matrix row"), "{e}");
    }

    #[test]
    fn ragged_matrix_rows_are_rejected() {
        let text = "ring R = poly(101, [x, y], grevlex)\nmodule M = coker [[x, y],[x]]\n";
        let e = parse_session(text).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.expected.contains("equal length"), "{e}");
    }

    #[test]
    fn second_ring_is_rejected() {
        let text = "ring R = poly(101, [x], lex)\nring S = poly(101, [y], lex)\n";
        let e = parse_session(text).unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn undeclared_names_are_rejected_with_position() {
        let text = "ring R = poly(101, [x], lex)\ndepth M\n";
        let e = parse_session(text).unwrap_err();
        assert_eq!((e.line, e.col), (2, 7));
        assert!(e.expected.contains("module"), "{e}");
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let text = "ring R = poly(101, [x], lex)\nmodule M = coker [[x]]\nmodule M = coker [[x]]\n";
        let e = parse_session(text).unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn declarations_require_a_ring_first() {
        let e = parse_session("module M = coker [[x]]\n").unwrap_err();
        assert!(e.expected.contains("ring declaration"), "{e}");
    }

    #[test]
    fn witness_command_with_every_node_form() {
        let text = "\
ring R = poly(101, [x, y], grevlex)
module k = coker [[x, y]]
module L = coker [[x]]
witness target k base {k, L} nodes [gen 0; free [0, -1]; syz 0; sum 2 summand L complement L; ext 0 1 middle L incl [[x]] proj [[1]]] root 0
";
        let s = parse_session(text).unwrap();
        let printed = print_session(&s);
        assert_eq!(parse_session(&printed).unwrap(), s);
        match &s.items[3] {
            Item::Command(Command::Witness { nodes, root, .. }) => {
                assert_eq!(nodes.len(), 5);
                assert_eq!(*root, 0);
                assert!(matches!(nodes[4], NodeSyntax::Ext { .. }));
            }
            other => panic!("unexpected item {other:?}"),
        }
    }

    #[test]
    fn polynomials_keep_their_inner_spacing() {
        let text = "ring R = poly(101, [x, y], grevlex) / ideal(x^2 + 3*y^2, x*y)\n";
        let s = parse_session(text).unwrap();
        match &s.items[0] {
            Item::Decl(Decl::Ring { ideal, .. }) => {
                assert_eq!(ideal, &["x^2 + 3*y^2", "x*y"]);
            }
            other => panic!("unexpected item {other:?}"),
        }
        assert_eq!(parse_session(&print_session(&s)).unwrap(), s);
    }

    #[test]
    fn trailing_garbage_is_an_error() {
        let e = parse_session("ring R = poly(101, [x], lex) extra\n").unwrap_err();
        assert!(e.expected.contains("end of line"), "{e}");
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let s = parse_session("\n# hello\nring R = poly(101, [x], lex)  # trailing\n\n").unwrap();
        assert_eq!(s.items.len(), 1);
    }
}
