//! Recursive-descent parser for the ASCII CAP grammar.
//!
//! ```text
//! config  := "0" | "nu" bind ("," bind)* "." config | config "||" config
//!          | "(" config ")" | term
//! term    := ident "|>" behavior | ident "<|" ident "(" args? ")"
//! behavior:= ident | "[" branch ("," branch)* "]"
//! branch  := ident "(" params? ")" "=" "zeta" "(" ident "," ident ")" "(" config ")"
//! ```
//!
//! `||` is right-associative and `nu` scopes to the end of the enclosing
//! group. Sites may carry explicit labels: `nu a^1`, `a |>^1 ...`,
//! `a <|^6 m(...)`, `m^2(x) = ...`, and `[^11 ...]` for an inline behavior
//! set passed as a message argument.

use std::collections::{BTreeSet, HashMap};

use super::ast::*;
use super::lexer::{tokenize, Pos, Token, TokenKind};
use super::ParseError;

/// Parse source text into an unlabeled (or partially annotated) term.
///
/// Identifiers are resolved against their binders, every message label
/// must be used with one arity throughout the term, and the term must be
/// closed.
pub fn parse(source: &str) -> Result<Term, ParseError> {
    let tokens = tokenize(source)?;
    let mut p = Parser { tokens, pos: 0, scope: Vec::new(), arities: HashMap::new() };
    let term = p.config()?;
    p.expect(TokenKind::Eof, "end of input")?;
    Ok(term)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    scope: Vec<(String, IdentKind)>,
    arities: HashMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn here(&self) -> Pos {
        self.tokens[self.pos].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        let pos = self.here();
        ParseError::Syntax {
            line: pos.line,
            col: pos.col,
            expected: expected.to_string(),
            found: self.peek().to_string(),
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<(), ParseError> {
        if self.eat(&kind) {
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        let pos = self.here();
        match self.peek().clone() {
            TokenKind::Ident(s) => {
                self.bump();
                Ok((s, pos))
            }
            _ => Err(self.error("identifier")),
        }
    }

    fn annotation(&mut self) -> Result<Option<u32>, ParseError> {
        if !self.eat(&TokenKind::Caret) {
            return Ok(None);
        }
        match *self.peek() {
            TokenKind::Nat(n) => {
                self.bump();
                Ok(Some(n))
            }
            _ => Err(self.error("label number after `^`")),
        }
    }

    fn resolve(&self, text: String, pos: Pos) -> Result<Ident, ParseError> {
        match self.scope.iter().rev().find(|(n, _)| *n == text) {
            Some((_, kind)) => Ok(Ident { text, kind: *kind }),
            None => Err(ParseError::Unbound { name: text, line: pos.line, col: pos.col }),
        }
    }

    fn check_arity(&mut self, label: &str, arity: usize, pos: Pos) -> Result<(), ParseError> {
        match self.arities.get(label) {
            Some(&expected) if expected != arity => Err(ParseError::ArityMismatch {
                label: label.to_string(),
                expected,
                found: arity,
                line: pos.line,
                col: pos.col,
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(label.to_string(), arity);
                Ok(())
            }
        }
    }

    fn config(&mut self) -> Result<Term, ParseError> {
        let left = self.unit()?;
        if self.eat(&TokenKind::ParOp) {
            let right = self.config()?;
            Ok(Term::par(left, right))
        } else {
            Ok(left)
        }
    }

    fn unit(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            TokenKind::Nat(0) => {
                self.bump();
                Ok(Term::Empty)
            }
            TokenKind::Nu => {
                self.bump();
                let mut binders = Vec::new();
                loop {
                    let (name, _) = self.ident()?;
                    let label = self.annotation()?.map(NameLabel);
                    binders.push((name, label));
                    if !self.eat(&TokenKind::Comma) {
                        break;
                    }
                }
                self.expect(TokenKind::Dot, "`.` after nu binders")?;
                let depth = self.scope.len();
                self.scope.extend(binders.iter().map(|(n, _)| (n.clone(), IdentKind::Name)));
                let body = self.config();
                self.scope.truncate(depth);
                let mut term = body?;
                for (name, label) in binders.into_iter().rev() {
                    term = Term::Restrict { name, label, body: Box::new(term) };
                }
                Ok(term)
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.config()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            TokenKind::Ident(_) => self.site(),
            _ => Err(self.error("configuration")),
        }
    }

    fn site(&mut self) -> Result<Term, ParseError> {
        let (addr, addr_pos) = self.ident()?;
        let address = self.resolve(addr, addr_pos)?;
        match self.peek() {
            TokenKind::ActorOp => {
                self.bump();
                let point = self.annotation()?.map(Point);
                let behavior = self.behavior(false)?;
                Ok(Term::Actor { address, point, behavior })
            }
            TokenKind::SendOp => {
                self.bump();
                let point = self.annotation()?.map(Point);
                let (label, label_pos) = self.ident()?;
                self.expect(TokenKind::LParen, "`(`")?;
                let mut args = Vec::new();
                if !self.eat(&TokenKind::RParen) {
                    loop {
                        args.push(self.behavior(true)?);
                        if !self.eat(&TokenKind::Comma) {
                            break;
                        }
                    }
                    self.expect(TokenKind::RParen, "`)` or `,`")?;
                }
                self.check_arity(&label, args.len(), label_pos)?;
                Ok(Term::Message { address, point, label, args })
            }
            _ => Err(self.error("`|>` or `<|`")),
        }
    }

    fn behavior(&mut self, as_argument: bool) -> Result<Behavior, ParseError> {
        match self.peek().clone() {
            TokenKind::Ident(name) => {
                let pos = self.here();
                self.bump();
                Ok(Behavior::Var(self.resolve(name, pos)?))
            }
            TokenKind::LBrack => {
                self.bump();
                let point = if as_argument { self.annotation()?.map(Point) } else { None };
                let mut branches: Vec<Branch> = Vec::new();
                if !self.eat(&TokenKind::RBrack) {
                    loop {
                        let pos = self.here();
                        let branch = self.branch()?;
                        if branches.iter().any(|b| b.label == branch.label) {
                            return Err(ParseError::DuplicateBranch {
                                label: branch.label,
                                line: pos.line,
                                col: pos.col,
                            });
                        }
                        branches.push(branch);
                        if !self.eat(&TokenKind::Comma) {
                            break;
                        }
                    }
                    self.expect(TokenKind::RBrack, "`]` or `,`")?;
                }
                Ok(Behavior::Set(BehaviorSet { point, branches }))
            }
            _ => Err(self.error("behavior (identifier or `[`)")),
        }
    }

    fn branch(&mut self) -> Result<Branch, ParseError> {
        let (label, label_pos) = self.ident()?;
        let point = self.annotation()?.map(Point);
        self.expect(TokenKind::LParen, "`(`")?;
        let mut formals = Vec::new();
        if !self.eat(&TokenKind::RParen) {
            loop {
                formals.push(self.ident()?);
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
            self.expect(TokenKind::RParen, "`)` or `,`")?;
        }
        self.expect(TokenKind::Equals, "`=`")?;
        self.expect(TokenKind::Zeta, "`zeta`")?;
        self.expect(TokenKind::LParen, "`(`")?;
        let self_addr = self.ident()?;
        self.expect(TokenKind::Comma, "`,`")?;
        let self_beh = self.ident()?;
        self.expect(TokenKind::RParen, "`)`")?;

        let mut seen = BTreeSet::new();
        for (name, pos) in [&self_addr, &self_beh].into_iter().chain(formals.iter()) {
            if !seen.insert(name.clone()) {
                return Err(ParseError::DuplicateBinder { name: name.clone(), line: pos.line, col: pos.col });
            }
        }
        self.check_arity(&label, formals.len(), label_pos)?;

        self.expect(TokenKind::LParen, "`(` before branch body")?;
        let depth = self.scope.len();
        self.scope.push((self_addr.0.clone(), IdentKind::Var));
        self.scope.push((self_beh.0.clone(), IdentKind::Var));
        self.scope.extend(formals.iter().map(|(n, _)| (n.clone(), IdentKind::Var)));
        let body = self.config();
        self.scope.truncate(depth);
        let body = body?;
        self.expect(TokenKind::RParen, "`)` after branch body")?;

        Ok(Branch {
            label,
            point,
            formals: formals.into_iter().map(|(n, _)| n).collect(),
            self_addr: self_addr.0,
            self_beh: self_beh.0,
            body,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty() {
        assert_eq!(parse("0").unwrap(), Term::Empty);
        assert_eq!(parse("  (0) ").unwrap(), Term::Empty);
    }

    #[test]
    fn nu_scopes_to_group_end() {
        let t = parse("nu a. a <| m() || a <| m()").unwrap();
        match t {
            Term::Restrict { body, .. } => assert!(matches!(*body, Term::Par(..))),
            other => panic!("unexpected {other:?}"),
        }
        // the second `a` is outside the group, hence unbound
        let err = parse("(nu a. a <| m()) || a <| m()").unwrap_err();
        assert!(matches!(err, ParseError::Unbound { ref name, .. } if name == "a"));
    }

    #[test]
    fn par_is_right_associative() {
        let t = parse("nu a. a <| m() || a <| n() || a <| o()").unwrap();
        let Term::Restrict { body, .. } = t else { panic!() };
        let Term::Par(l, r) = *body else { panic!() };
        assert!(matches!(*l, Term::Message { .. }));
        assert!(matches!(*r, Term::Par(..)));
    }

    #[test]
    fn unbound_formal() {
        let err = parse("nu a. a <| m(x)").unwrap_err();
        match err {
            ParseError::Unbound { name, line, col } => {
                assert_eq!(name, "x");
                assert_eq!((line, col), (1, 14));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn arity_mismatch_between_send_and_handler() {
        let err = parse("nu a. a |> [m(x) = zeta(e,s)(0)] || a <| m()").unwrap_err();
        assert!(matches!(err, ParseError::ArityMismatch { expected: 1, found: 0, .. }));
    }

    #[test]
    fn duplicate_branch_label() {
        let err = parse("nu a. a |> [m() = zeta(e,s)(0), m() = zeta(e,s)(0)]").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateBranch { .. }));
    }

    #[test]
    fn formal_clashing_with_self() {
        let err = parse("nu a. a |> [m(e) = zeta(e,s)(0)]").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateBinder { ref name, .. } if name == "e"));
    }

    #[test]
    fn syntax_error_position() {
        let err = parse("nu a.\n  a |> ").unwrap_err();
        match err {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn explicit_annotations() {
        let t = parse("nu a^3. a |>^7 [m^9() = zeta(e,s)(0)] || a <|^2 m()").unwrap();
        let Term::Restrict { label, body, .. } = t else { panic!() };
        assert_eq!(label, Some(NameLabel(3)));
        let Term::Par(l, r) = *body else { panic!() };
        let Term::Actor { point, behavior: Behavior::Set(set), .. } = *l else { panic!() };
        assert_eq!(point, Some(Point(7)));
        assert_eq!(set.branches[0].point, Some(Point(9)));
        let Term::Message { point, .. } = *r else { panic!() };
        assert_eq!(point, Some(Point(2)));
    }

    #[test]
    fn identifier_kinds_are_resolved() {
        let t = parse("nu a. a |> [m(x) = zeta(e,s)(x <| m(a))]").unwrap();
        let Term::Restrict { body, .. } = t else { panic!() };
        let Term::Actor { address, behavior: Behavior::Set(set), .. } = *body else { panic!() };
        assert_eq!(address.kind, IdentKind::Name);
        let Term::Message { address, args, .. } = &set.branches[0].body else { panic!() };
        assert_eq!(address.kind, IdentKind::Var);
        assert_eq!(args[0], Behavior::Var(Ident::name("a")));
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(parse("// nothing\n0 // here").unwrap(), Term::Empty);
    }
}
