//! Text format for games.
//!
//! ```text
//! # two players, two parallel links
//! players = 2
//! resource a costs = [0, 6] capacity = none
//! resource b costs = [0, 6]
//! structure = ep { par(arc(a), arc(b)) }
//! ```
//!
//! `structure` is one of
//! * `ep { EXPR }` with `EXPR := arc(<id>) | par(EXPR, EXPR) | ext(<id>, EXPR)`,
//! * `kuniform k = [k1, ..., kn]`,
//! * `explicit { player <i> = [ [ids], ... ] ... }` with players numbered from 1.
//!
//! Costs are integers, fractions `p/q` or decimals. `capacity` is optional and
//! defaults to `none` (uncapacitated). `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_rational::Rational64;

use super::{CongestionGame, CostFunction, EpNetwork, Resource, Structure};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut chars = content.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if "=[]{}(),/".contains(c) {
                out.push(Token { tok: Tok::Sym(c), line });
                chars.next();
            } else if c.is_alphanumeric() || c == '_' || c == '.' || c == '-' {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '.' || c == '-' {
                        word.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Word(word), line });
            } else {
                return Err(Error::Parse {
                    line,
                    message: format!("unexpected character '{c}'"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    last_line: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.last_line, |t| t.line)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect_sym(&mut self, c: char, context: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected '{c}' in {context}")),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self, context: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.err(format!("expected a name or number in {context}")),
        }
    }

    fn keyword(&mut self, kw: &str, context: &str) -> Result<()> {
        let line = self.line();
        let w = self.word(context)?;
        if w == kw {
            Ok(())
        } else {
            Err(Error::Parse {
                line,
                message: format!("expected '{kw}' in {context}, found '{w}'"),
            })
        }
    }

    fn integer(&mut self, context: &str) -> Result<usize> {
        let line = self.line();
        let w = self.word(context)?;
        w.parse().map_err(|_| Error::Parse {
            line,
            message: format!("expected a non-negative integer in {context}, found '{w}'"),
        })
    }

    fn rational(&mut self, context: &str) -> Result<Rational64> {
        let line = self.line();
        let numer = self.word(context)?;
        let value = parse_decimal(&numer).ok_or_else(|| Error::Parse {
            line,
            message: format!("invalid number '{numer}' in {context}"),
        })?;
        if self.eat_sym('/') {
            let line = self.line();
            let denom = self.word(context)?;
            let d = parse_decimal(&denom)
                .filter(|d| *d != Rational64::from_integer(0))
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("invalid denominator '{denom}' in {context}"),
                })?;
            return Ok(value / d);
        }
        Ok(value)
    }

    fn list<T>(&mut self, context: &str, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect_sym('[', context)?;
        let mut out = Vec::new();
        if self.eat_sym(']') {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat_sym(']') {
                return Ok(out);
            }
            self.expect_sym(',', context)?;
        }
    }
}

fn parse_decimal(w: &str) -> Option<Rational64> {
    let (int, frac) = match w.split_once('.') {
        Some((i, f)) => (i, f),
        None => (w, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let all_digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    let negative = int.starts_with('-');
    let int_digits = int.trim_start_matches('-');
    if !all_digits(int_digits) || !all_digits(frac) || frac.len() > 12 {
        return None;
    }
    let scale = 10i64.checked_pow(frac.len() as u32)?;
    let whole: i64 = if int_digits.is_empty() { 0 } else { int_digits.parse().ok()? };
    let fractional: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let magnitude = whole.checked_mul(scale)?.checked_add(fractional)?;
    let numer = if negative { -magnitude } else { magnitude };
    Some(Rational64::new(numer, scale))
}

struct ResourceDecl {
    name: String,
    costs: Vec<Rational64>,
    capacity: Option<usize>,
    line: usize,
}

/// Parses a game file.
pub fn parse_game(text: &str) -> Result<CongestionGame> {
    let tokens = tokenize(text)?;
    let last_line = tokens.last().map_or(1, |t| t.line);
    let mut p = Parser {
        tokens,
        pos: 0,
        last_line,
    };
    let mut players: Option<usize> = None;
    let mut decls: Vec<ResourceDecl> = Vec::new();
    let mut structure_start: Option<usize> = None;

    while p.peek().is_some() {
        let line = p.line();
        let key = p.word("statement")?;
        match key.as_str() {
            "players" => {
                if players.is_some() {
                    return p.err("'players' given twice");
                }
                p.expect_sym('=', "players")?;
                players = Some(p.integer("players")?);
            }
            "resource" => {
                let name = p.word("resource name")?;
                if decls.iter().any(|d| d.name == name) {
                    return Err(Error::Parse {
                        line,
                        message: format!("resource '{name}' declared twice"),
                    });
                }
                p.keyword("costs", "resource")?;
                p.expect_sym('=', "costs")?;
                let costs = p.list("costs", |p| p.rational("costs"))?;
                let mut capacity = None;
                if matches!(p.peek(), Some(Tok::Word(w)) if w == "capacity") {
                    p.pos += 1;
                    p.expect_sym('=', "capacity")?;
                    if matches!(p.peek(), Some(Tok::Word(w)) if w == "none") {
                        p.pos += 1;
                    } else {
                        capacity = Some(p.integer("capacity")?);
                    }
                }
                decls.push(ResourceDecl {
                    name,
                    costs,
                    capacity,
                    line,
                });
            }
            "structure" => {
                if structure_start.is_some() {
                    return p.err("'structure' given twice");
                }
                structure_start = Some(p.pos);
                // Resource names may be declared after the structure; skip
                // now and parse once all names are known.
                skip_structure(&mut p)?;
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown statement '{other}'"),
                })
            }
        }
    }

    let players = players.ok_or(Error::Parse {
        line: last_line,
        message: "missing 'players'".into(),
    })?;
    let start = structure_start.ok_or(Error::Parse {
        line: last_line,
        message: "missing 'structure'".into(),
    })?;
    if decls.is_empty() {
        return Err(Error::Parse {
            line: last_line,
            message: "no resources declared".into(),
        });
    }
    let ids: HashMap<String, usize> = decls
        .iter()
        .enumerate()
        .map(|(i, d)| (d.name.clone(), i))
        .collect();
    p.pos = start;
    let structure = parse_structure(&mut p, &ids, players)?;

    let mut resources = Vec::with_capacity(decls.len());
    for d in decls {
        let cost = CostFunction::new(d.costs, d.capacity).map_err(|e| Error::Parse {
            line: d.line,
            message: format!("resource '{}': {e}", d.name),
        })?;
        resources.push(Resource::new(d.name, cost));
    }
    CongestionGame::new(players, resources, structure)
}

fn skip_structure(p: &mut Parser) -> Result<()> {
    p.expect_sym('=', "structure")?;
    let kind = p.word("structure")?;
    match kind.as_str() {
        "ep" | "explicit" => {
            p.expect_sym('{', "structure")?;
            let mut depth = 1usize;
            while depth > 0 {
                match p.next() {
                    Some(Tok::Sym('{')) => depth += 1,
                    Some(Tok::Sym('}')) => depth -= 1,
                    Some(_) => {}
                    None => return p.err("unterminated '{' in structure"),
                }
            }
            Ok(())
        }
        "kuniform" => {
            p.keyword("k", "kuniform")?;
            p.expect_sym('=', "kuniform")?;
            p.list("k", |p| p.integer("k")).map(|_| ())
        }
        other => p.err(format!("unknown structure '{other}'")),
    }
}

fn resource_id(p: &mut Parser, ids: &HashMap<String, usize>, context: &str) -> Result<usize> {
    let line = p.line();
    let name = p.word(context)?;
    ids.get(&name).copied().ok_or(Error::Parse {
        line,
        message: format!("unknown resource '{name}' in {context}"),
    })
}

fn parse_structure(p: &mut Parser, ids: &HashMap<String, usize>, players: usize) -> Result<Structure> {
    p.expect_sym('=', "structure")?;
    let kind = p.word("structure")?;
    match kind.as_str() {
        "ep" => {
            p.expect_sym('{', "ep structure")?;
            let net = parse_ep(p, ids)?;
            p.expect_sym('}', "ep structure")?;
            Ok(Structure::Ep(net))
        }
        "kuniform" => {
            p.keyword("k", "kuniform")?;
            p.expect_sym('=', "kuniform")?;
            Ok(Structure::KUniform(p.list("k", |p| p.integer("k"))?))
        }
        "explicit" => {
            p.expect_sym('{', "explicit structure")?;
            let mut sets: Vec<Option<Vec<Vec<usize>>>> = vec![None; players];
            while !p.eat_sym('}') {
                let line = p.line();
                p.keyword("player", "explicit structure")?;
                let i = p.integer("player index")?;
                if i == 0 || i > players {
                    return Err(Error::Parse {
                        line,
                        message: format!("player index {i} outside 1..={players}"),
                    });
                }
                if sets[i - 1].is_some() {
                    return Err(Error::Parse {
                        line,
                        message: format!("player {i} listed twice"),
                    });
                }
                p.expect_sym('=', "player strategies")?;
                let strategies = p.list("player strategies", |p| {
                    p.list("strategy", |p| resource_id(p, ids, "strategy"))
                })?;
                sets[i - 1] = Some(strategies);
            }
            let line = p.line();
            let sets = sets
                .into_iter()
                .enumerate()
                .map(|(i, s)| {
                    s.ok_or(Error::Parse {
                        line,
                        message: format!("player {} has no strategy list", i + 1),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Structure::Explicit(sets))
        }
        other => p.err(format!("unknown structure '{other}'")),
    }
}

fn parse_ep(p: &mut Parser, ids: &HashMap<String, usize>) -> Result<EpNetwork> {
    let line = p.line();
    let head = p.word("ep expression")?;
    p.expect_sym('(', "ep expression")?;
    let net = match head.as_str() {
        "arc" => EpNetwork::arc(resource_id(p, ids, "arc")?),
        "par" => {
            let left = parse_ep(p, ids)?;
            p.expect_sym(',', "par")?;
            let right = parse_ep(p, ids)?;
            EpNetwork::parallel(left, right)
        }
        "ext" => {
            let arc = resource_id(p, ids, "ext")?;
            p.expect_sym(',', "ext")?;
            EpNetwork::series(arc, parse_ep(p, ids)?)
        }
        other => {
            return Err(Error::Parse {
                line,
                message: format!("expected arc, par or ext, found '{other}'"),
            })
        }
    };
    p.expect_sym(')', "ep expression")?;
    Ok(net)
}

/// Renders a game in the format accepted by [`parse_game`].
pub fn render_game(game: &CongestionGame) -> String {
    let names: Vec<&str> = game.resources().iter().map(|r| r.name.as_str()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "players = {}", game.players());
    for r in game.resources() {
        let costs: Vec<String> = r.cost.values().iter().map(|v| v.to_string()).collect();
        let cap = r.cost.capacity().map_or("none".to_string(), |u| u.to_string());
        let _ = writeln!(
            out,
            "resource {} costs = [{}] capacity = {cap}",
            r.name,
            costs.join(", ")
        );
    }
    match game.structure() {
        Structure::Ep(net) => {
            let _ = writeln!(out, "structure = ep {{ {} }}", render_ep(net, &names));
        }
        Structure::KUniform(k) => {
            let ks: Vec<String> = k.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "structure = kuniform k = [{}]", ks.join(", "));
        }
        Structure::Explicit(sets) => {
            let _ = writeln!(out, "structure = explicit {{");
            for (i, set) in sets.iter().enumerate() {
                let strategies: Vec<String> = set
                    .iter()
                    .map(|s| {
                        let ids: Vec<&str> = s.iter().map(|&e| names[e]).collect();
                        format!("[{}]", ids.join(", "))
                    })
                    .collect();
                let _ = writeln!(out, "  player {} = [{}]", i + 1, strategies.join(", "));
            }
            let _ = writeln!(out, "}}");
        }
    }
    out
}

fn render_ep(net: &EpNetwork, names: &[&str]) -> String {
    match net {
        EpNetwork::Arc(a) => format!("arc({})", names[*a]),
        EpNetwork::Parallel(l, r) => format!("par({}, {})", render_ep(l, names), render_ep(r, names)),
        EpNetwork::Series(a, rest) => format!("ext({}, {})", names[*a], render_ep(rest, names)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Extended;

    const EXAMPLE_ONE: &str = "\
# two players, two links
players = 2
resource a costs = [0, 6] capacity = none
resource b costs = [0, 6]
structure = ep { par(arc(a), arc(b)) }
";

    #[test]
    fn parses_example_one() {
        let g = parse_game(EXAMPLE_ONE).unwrap();
        assert_eq!(g.players(), 2);
        assert_eq!(g.paths().unwrap().len(), 2);
        assert_eq!(g.rosenthal_potential(&[2, 0]), Extended::from(6));
    }

    #[test]
    fn parses_rationals_capacities_and_kuniform() {
        let text = "players = 3\n\
                    resource x costs = [1/2, 0.75, 2] capacity = 2\n\
                    resource y costs = [0, 1, 1]\n\
                    resource z costs = [1, 1, 1]\n\
                    structure = kuniform k = [1, 2, 1]\n";
        let g = parse_game(text).unwrap();
        let x = &g.resources()[0].cost;
        assert_eq!(x.values()[0], Rational64::new(1, 2));
        assert_eq!(x.values()[1], Rational64::new(3, 4));
        assert_eq!(x.capacity(), Some(2));
        assert_eq!(g.k_uniform(), Some(&[1, 2, 1][..]));
    }

    #[test]
    fn parses_explicit_multiline() {
        let text = "players = 2\n\
                    structure = explicit {\n\
                      player 1 = [ [a1, b1], [a1, b2] ]\n\
                      player 2 = [ [a2, b1] ]\n\
                    }\n\
                    resource a1 costs = [0, 1]\n\
                    resource a2 costs = [0, 1]\n\
                    resource b1 costs = [0, 1]\n\
                    resource b2 costs = [0, 1]\n";
        let g = parse_game(text).unwrap();
        assert_eq!(g.num_strategies(0), 2);
        assert_eq!(g.strategy(1, 0).as_ref(), &[1, 2]);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let bad = "players = 2\nresource a costs = [0, x]\nstructure = ep { arc(a) }\n";
        match parse_game(bad) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("costs"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let unknown = "players = 1\nresource a costs = [0]\nstructure = ep { arc(b) }\n";
        assert!(matches!(parse_game(unknown), Err(Error::Parse { line: 3, .. })));
        let decreasing = "players = 2\nresource a costs = [3, 1]\nstructure = ep { arc(a) }\n";
        assert!(matches!(parse_game(decreasing), Err(Error::Parse { line: 2, .. })));
        assert!(parse_game("players = 1\n").is_err());
    }

    #[test]
    fn render_round_trips() {
        for text in [
            EXAMPLE_ONE,
            "players = 2\nresource a costs = [1, 2] capacity = 1\nresource b costs = [0, 3/2]\n\
             resource c costs = [0, 0]\nstructure = ep { par(ext(c, arc(a)), arc(b)) }\n",
            "players = 2\nresource a costs = [1, 2]\nresource b costs = [1, 2]\n\
             structure = explicit { player 1 = [[a], [a, b]] player 2 = [[b]] }\n",
        ] {
            let g = parse_game(text).unwrap();
            let again = parse_game(&render_game(&g)).unwrap();
            assert_eq!(render_game(&again), render_game(&g));
            assert_eq!(again.structure(), g.structure());
        }
    }
}
