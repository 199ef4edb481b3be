use std::fmt::Write;

use super::ast::*;

/// Render a term in the concrete grammar. With `with_labels`, every label
/// already present on the tree is printed as an explicit `^n` annotation,
/// so reparsing reproduces the labeled tree.
pub fn pretty(term: &Term, with_labels: bool) -> String {
    let mut out = String::new();
    Printer { out: &mut out, labels: with_labels }.term(term);
    out
}

struct Printer<'a> {
    out: &'a mut String,
    labels: bool,
}

impl Printer<'_> {
    fn ann(&mut self, n: Option<u32>) {
        if let (true, Some(n)) = (self.labels, n) {
            let _ = write!(self.out, "^{n}");
        }
    }

    fn term(&mut self, term: &Term) {
        match term {
            Term::Empty => self.out.push('0'),
            Term::Restrict { name, label, body } => {
                self.out.push_str("nu ");
                self.out.push_str(name);
                self.ann(label.map(|l| l.0));
                self.out.push_str(". ");
                self.term(body);
            }
            Term::Par(l, r) => {
                let wrap = matches!(**l, Term::Par(..) | Term::Restrict { .. });
                if wrap {
                    self.out.push('(');
                }
                self.term(l);
                if wrap {
                    self.out.push(')');
                }
                self.out.push_str(" || ");
                self.term(r);
            }
            Term::Actor { address, point, behavior } => {
                self.out.push_str(&address.text);
                self.out.push_str(" |>");
                self.ann(point.map(|p| p.0));
                self.out.push(' ');
                self.behavior(behavior, false);
            }
            Term::Message { address, point, label, args } => {
                self.out.push_str(&address.text);
                self.out.push_str(" <|");
                self.ann(point.map(|p| p.0));
                self.out.push(' ');
                self.out.push_str(label);
                self.out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    self.behavior(a, true);
                }
                self.out.push(')');
            }
        }
    }

    fn behavior(&mut self, b: &Behavior, as_argument: bool) {
        match b {
            Behavior::Var(id) => self.out.push_str(&id.text),
            Behavior::Set(set) => {
                self.out.push('[');
                if as_argument {
                    self.ann(set.point.map(|p| p.0));
                    if self.labels && set.point.is_some() {
                        self.out.push(' ');
                    }
                }
                for (i, br) in set.branches.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    self.out.push_str(&br.label);
                    self.ann(br.point.map(|p| p.0));
                    self.out.push('(');
                    self.out.push_str(&br.formals.join(", "));
                    let _ = write!(self.out, ") = zeta({}, {})(", br.self_addr, br.self_beh);
                    self.term(&br.body);
                    self.out.push(')');
                }
                self.out.push(']');
            }
        }
    }
}
