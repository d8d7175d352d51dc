//! Plain-text notation for game forms.
//!
//! ```text
//! game   := number ['*' [nat]]          1, -3, 3/2, 1*, -1/2*2
//!         | '*' [nat]                   *, *2
//!         | '^' ['*'] | 'v' ['*']       up, up-star, down, down-star
//!         | '+-' game                   {G | -G}
//!         | 'tiny' '(' game ')'         {0 | {0 | -G}}
//!         | '(' game ')'
//!         | '{' list '|' list '}'
//! list   := [game {',' game}]
//! number := ['-'] nat ['/' nat]         denominator a power of two
//! ```
//!
//! Whitespace is ignored between tokens.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::game::{GameArena, GameId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

/// A dyadic rational `numerator / 2^exponent` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: i64,
    exponent: u32,
}

impl Dyadic {
    pub fn new(numerator: i64, exponent: u32) -> Self {
        let (mut numerator, mut exponent) = (numerator, exponent);
        while exponent > 0 && numerator % 2 == 0 {
            numerator /= 2;
            exponent -= 1;
        }
        Dyadic {
            numerator,
            exponent,
        }
    }

    pub fn integer(n: i64) -> Self {
        Dyadic {
            numerator: n,
            exponent: 0,
        }
    }

    pub fn numerator(self) -> i64 {
        self.numerator
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn is_integer(self) -> bool {
        self.exponent == 0
    }

    fn scaled(self, exponent: u32) -> i64 {
        self.numerator << (exponent - self.exponent)
    }

    fn midpoint(self, other: Dyadic) -> Dyadic {
        let e = self.exponent.max(other.exponent) + 1;
        Dyadic::new((self.scaled(e) + other.scaled(e)) / 2, e)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, 1u64 << self.exponent)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameExpr {
    Integer(i64),
    /// `numerator / 2^exponent` with odd numerator and `exponent >= 1`.
    Dyadic(i64, u32),
    Nimber(u32),
    /// A number plus a nimber, e.g. `1*` or `-1/2*2`.
    NumberNimber(Dyadic, u32),
    Up,
    UpStar,
    Down,
    DownStar,
    PlusMinus(Box<GameExpr>),
    Tiny(Box<GameExpr>),
    Braces(Vec<GameExpr>, Vec<GameExpr>),
}

impl GameExpr {
    fn from_number(d: Dyadic) -> GameExpr {
        if d.is_integer() {
            GameExpr::Integer(d.numerator)
        } else {
            GameExpr::Dyadic(d.numerator, d.exponent)
        }
    }
}

pub fn parse(text: &str) -> Result<GameExpr, ParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let expr = parser.game()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.into(),
        }
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

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", byte as char)))
        }
    }

    fn natural(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError {
                position: start,
                message: "number out of range".into(),
            })
    }

    fn optional_natural(&mut self) -> Result<Option<u64>, ParseError> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => self.natural().map(Some),
            _ => Ok(None),
        }
    }

    fn nimber_index(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let k = self.optional_natural()?.unwrap_or(1);
        u32::try_from(k).map_err(|_| ParseError {
            position: start,
            message: "nimber index out of range".into(),
        })
    }

    fn game(&mut self) -> Result<GameExpr, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'{') => self.braces(),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.game()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'*') => {
                self.pos += 1;
                Ok(GameExpr::Nimber(self.nimber_index()?))
            }
            Some(b'^') => {
                self.pos += 1;
                Ok(if self.eat(b'*') {
                    GameExpr::UpStar
                } else {
                    GameExpr::Up
                })
            }
            Some(b'v') => {
                self.pos += 1;
                Ok(if self.eat(b'*') {
                    GameExpr::DownStar
                } else {
                    GameExpr::Down
                })
            }
            Some(b'+') => {
                self.pos += 1;
                if self.src.get(self.pos) != Some(&b'-') {
                    return Err(self.error("expected '+-'"));
                }
                self.pos += 1;
                Ok(GameExpr::PlusMinus(Box::new(self.game()?)))
            }
            Some(b't') => {
                if !self.src[self.pos..].starts_with(b"tiny") {
                    return Err(self.error("unknown word; expected 'tiny'"));
                }
                self.pos += 4;
                self.expect(b'(')?;
                let inner = self.game()?;
                self.expect(b')')?;
                Ok(GameExpr::Tiny(Box::new(inner)))
            }
            Some(b'|') => Err(self.error("'|' outside braces")),
            Some(b) if b == b'-' || b.is_ascii_digit() => self.number_game(),
            Some(b) => Err(self.error(format!("unexpected character '{}'", b as char))),
        }
    }

    fn number_game(&mut self) -> Result<GameExpr, ParseError> {
        let start = self.pos;
        let negative = self.eat(b'-');
        let whole = self.natural()?;
        let mut exponent = 0u32;
        if self.eat(b'/') {
            let den_pos = self.pos;
            let den = self.natural()?;
            if den == 0 || !den.is_power_of_two() {
                return Err(ParseError {
                    position: den_pos,
                    message: format!("denominator {den} is not a power of two"),
                });
            }
            exponent = den.trailing_zeros();
        }
        let magnitude = i64::try_from(whole).map_err(|_| ParseError {
            position: start,
            message: "number out of range".into(),
        })?;
        let number = Dyadic::new(if negative { -magnitude } else { magnitude }, exponent);
        if self.eat(b'*') {
            let k = self.nimber_index()?;
            return Ok(match (number.numerator, k) {
                (_, 0) => GameExpr::from_number(number),
                (0, k) => GameExpr::Nimber(k),
                _ => GameExpr::NumberNimber(number, k),
            });
        }
        Ok(GameExpr::from_number(number))
    }

    fn braces(&mut self) -> Result<GameExpr, ParseError> {
        self.expect(b'{')?;
        let left = self.list(b'|')?;
        self.expect(b'|')?;
        let right = self.list(b'}')?;
        if self.peek() == Some(b'|') {
            return Err(self.error("nested '|' without braces"));
        }
        self.expect(b'}')?;
        Ok(GameExpr::Braces(left, right))
    }

    fn list(&mut self, terminator: u8) -> Result<Vec<GameExpr>, ParseError> {
        let mut items = Vec::new();
        if self.peek() == Some(terminator) {
            return Ok(items);
        }
        if self.peek() == Some(b'|') {
            return Err(self.error("nested '|' without braces"));
        }
        loop {
            items.push(self.game()?);
            if !self.eat(b',') {
                return Ok(items);
            }
        }
    }
}

/// Builds the canonical game denoted by `expr`.
pub fn elaborate(expr: &GameExpr, arena: &mut GameArena) -> GameId {
    match expr {
        GameExpr::Integer(n) => arena.integer(*n),
        GameExpr::Dyadic(p, k) => number(arena, Dyadic::new(*p, *k)),
        GameExpr::Nimber(k) => number_nimber(arena, Dyadic::integer(0), *k),
        GameExpr::NumberNimber(x, k) => number_nimber(arena, *x, *k),
        GameExpr::Up => {
            let zero = arena.zero();
            let star = number_nimber(arena, Dyadic::integer(0), 1);
            arena.canonicalize([zero], [star])
        }
        GameExpr::UpStar => {
            let zero = arena.zero();
            let star = number_nimber(arena, Dyadic::integer(0), 1);
            arena.canonicalize([zero, star], [zero])
        }
        GameExpr::Down => {
            let up = elaborate(&GameExpr::Up, arena);
            arena.negate(up)
        }
        GameExpr::DownStar => {
            let up_star = elaborate(&GameExpr::UpStar, arena);
            arena.negate(up_star)
        }
        GameExpr::PlusMinus(inner) => {
            let g = elaborate(inner, arena);
            let neg = arena.negate(g);
            arena.canonicalize([g], [neg])
        }
        GameExpr::Tiny(inner) => {
            let g = elaborate(inner, arena);
            let neg = arena.negate(g);
            let zero = arena.zero();
            let inner_form = arena.canonicalize([zero], [neg]);
            arena.canonicalize([zero], [inner_form])
        }
        GameExpr::Braces(left, right) => {
            let left: Vec<GameId> = left.iter().map(|e| elaborate(e, arena)).collect();
            let right: Vec<GameId> = right.iter().map(|e| elaborate(e, arena)).collect();
            arena.canonicalize(left, right)
        }
    }
}

/// Parses and elaborates in one step.
pub fn read_game(text: &str, arena: &mut GameArena) -> Result<GameId, ParseError> {
    parse(text).map(|e| elaborate(&e, arena))
}

fn number(arena: &mut GameArena, x: Dyadic) -> GameId {
    if x.is_integer() {
        return arena.integer(x.numerator);
    }
    let lower = number(arena, Dyadic::new(x.numerator - 1, x.exponent));
    let upper = number(arena, Dyadic::new(x.numerator + 1, x.exponent));
    arena.canonicalize([lower], [upper])
}

// x + *k is {x + *j (j < k) | x + *j (j < k)}: the number's own options are
// dominated once any nimber is added.
fn number_nimber(arena: &mut GameArena, x: Dyadic, k: u32) -> GameId {
    let mut parts = vec![number(arena, x)];
    for _ in 1..=k {
        let next = arena.canonicalize(parts.iter().copied(), parts.iter().copied());
        parts.push(next);
    }
    parts[k as usize]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Number(Dyadic),
    NumberNimber(Dyadic, u32),
    Up,
    UpStar,
    Down,
    DownStar,
    PlusMinus(GameId),
    General,
}

/// Prints canonical forms, memoizing the shape recognition of every visited
/// game.
pub struct Printer<'a> {
    arena: &'a GameArena,
    shapes: HashMap<GameId, Shape>,
    text: HashMap<GameId, String>,
}

impl<'a> Printer<'a> {
    pub fn new(arena: &'a GameArena) -> Self {
        Printer {
            arena,
            shapes: HashMap::new(),
            text: HashMap::new(),
        }
    }

    pub fn print(&mut self, g: GameId) -> String {
        if let Some(s) = self.text.get(&g) {
            return s.clone();
        }
        let s = match self.shape(g) {
            Shape::Number(x) => x.to_string(),
            Shape::NumberNimber(x, k) => {
                let base = if x.numerator == 0 {
                    String::new()
                } else {
                    x.to_string()
                };
                if k == 1 {
                    format!("{base}*")
                } else {
                    format!("{base}*{k}")
                }
            }
            Shape::Up => "^".into(),
            Shape::UpStar => "^*".into(),
            Shape::Down => "v".into(),
            Shape::DownStar => "v*".into(),
            Shape::PlusMinus(inner) => {
                let inner = self.print(inner);
                if inner.starts_with('-') || inner.starts_with('+') {
                    format!("+-({inner})")
                } else {
                    format!("+-{inner}")
                }
            }
            Shape::General => {
                let left = self.print_options(self.arena.left(g));
                let right = self.print_options(self.arena.right(g));
                format!("{{{}|{}}}", left.join(","), right.join(","))
            }
        };
        self.text.insert(g, s.clone());
        s
    }

    // Options are listed by birthday, then by printed text.
    fn print_options(&mut self, options: &[GameId]) -> Vec<String> {
        let mut keyed: Vec<(u32, String)> = options
            .iter()
            .map(|&o| (self.arena.birthday(o), self.print(o)))
            .collect();
        keyed.sort();
        keyed.into_iter().map(|(_, s)| s).collect()
    }

    fn shape(&mut self, g: GameId) -> Shape {
        if let Some(&s) = self.shapes.get(&g) {
            return s;
        }
        let s = self.recognize(g);
        self.shapes.insert(g, s);
        s
    }

    fn recognize(&mut self, g: GameId) -> Shape {
        let left = self.arena.left(g).to_vec();
        let right = self.arena.right(g).to_vec();
        let numbers = |p: &mut Self, ids: &[GameId]| -> Option<Vec<Dyadic>> {
            ids.iter()
                .map(|&o| match p.shape(o) {
                    Shape::Number(x) => Some(x),
                    _ => None,
                })
                .collect()
        };

        match (left.as_slice(), right.as_slice()) {
            ([], []) => return Shape::Number(Dyadic::integer(0)),
            ([l], []) => {
                if let Some([x]) = numbers(self, &[*l]).as_deref() {
                    if x.is_integer() && x.numerator >= 0 {
                        return Shape::Number(Dyadic::integer(x.numerator + 1));
                    }
                }
            }
            ([], [r]) => {
                if let Some([x]) = numbers(self, &[*r]).as_deref() {
                    if x.is_integer() && x.numerator <= 0 {
                        return Shape::Number(Dyadic::integer(x.numerator - 1));
                    }
                }
            }
            ([l], [r]) => {
                if let (Shape::Number(a), Shape::Number(b)) = (self.shape(*l), self.shape(*r)) {
                    let mid = a.midpoint(b);
                    let k = mid.exponent;
                    if k > 0
                        && Dyadic::new(mid.numerator - 1, k) == a
                        && Dyadic::new(mid.numerator + 1, k) == b
                    {
                        return Shape::Number(mid);
                    }
                }
            }
            _ => {}
        }

        if !left.is_empty() && left == right {
            if let Some(shape) = self.number_nimber_shape(&left) {
                return shape;
            }
        }

        let zero = self.arena.zero();
        let is_star =
            |p: &mut Self, o: GameId| p.shape(o) == Shape::NumberNimber(Dyadic::integer(0), 1);
        match (left.as_slice(), right.as_slice()) {
            ([l], [r]) if *l == zero && is_star(self, *r) => return Shape::Up,
            ([l], [r]) if *r == zero && is_star(self, *l) => return Shape::Down,
            ([a, b], [r]) if *r == zero && (*a == zero || *b == zero) => {
                let other = if *a == zero { *b } else { *a };
                if is_star(self, other) {
                    return Shape::UpStar;
                }
            }
            ([l], [a, b]) if *l == zero && (*a == zero || *b == zero) => {
                let other = if *a == zero { *b } else { *a };
                if is_star(self, other) {
                    return Shape::DownStar;
                }
            }
            _ => {}
        }

        if let ([l], [r]) = (left.as_slice(), right.as_slice()) {
            if is_negation(self.arena, *l, *r) {
                return Shape::PlusMinus(*l);
            }
        }
        Shape::General
    }

    // Left = right = {x, x*, ..., x*(k-1)} for one number x.
    fn number_nimber_shape(&mut self, options: &[GameId]) -> Option<Shape> {
        let mut base = None;
        let mut indices = Vec::with_capacity(options.len());
        for &o in options {
            let (x, j) = match self.shape(o) {
                Shape::Number(x) => (x, 0),
                Shape::NumberNimber(x, j) => (x, j),
                _ => return None,
            };
            if *base.get_or_insert(x) != x {
                return None;
            }
            indices.push(j);
        }
        indices.sort_unstable();
        let k = u32::try_from(indices.len()).ok()?;
        if indices.iter().copied().eq(0..k) {
            Some(Shape::NumberNimber(base?, k))
        } else {
            None
        }
    }
}

fn is_negation(arena: &GameArena, a: GameId, b: GameId) -> bool {
    let matches = |xs: &[GameId], ys: &[GameId]| {
        xs.len() == ys.len()
            && xs
                .iter()
                .all(|&x| ys.iter().any(|&y| is_negation(arena, x, y)))
    };
    matches(arena.left(a), arena.right(b)) && matches(arena.right(a), arena.left(b))
}

/// One-shot print of a single game.
pub fn print(arena: &GameArena, g: GameId) -> String {
    Printer::new(arena).print(g)
}
