//! A small s-expression reader with line/column tracking. Atoms are bare
//! tokens; `;` starts a comment running to the end of the line.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SExpr {
    Atom(String, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s, _) => Some(s),
            SExpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::Atom(..) => None,
            SExpr::List(items, _) => Some(items),
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(s, _) => f.write_str(s),
            SExpr::List(items, _) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("{pos}: {msg}")]
pub struct SexprError {
    pub pos: Pos,
    pub msg: String,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

#[derive(Debug)]
enum Token {
    Open(Pos),
    Close(Pos),
    Atom(String, Pos),
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), pos: Pos { line: 1, col: 1 } }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn next_token(&mut self) -> Option<Token> {
        loop {
            let pos = self.pos;
            let c = *self.chars.peek()?;
            match c {
                ';' => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                c if c.is_whitespace() => {
                    self.bump();
                }
                '(' => {
                    self.bump();
                    return Some(Token::Open(pos));
                }
                ')' => {
                    self.bump();
                    return Some(Token::Close(pos));
                }
                _ => {
                    let mut atom = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                            break;
                        }
                        atom.push(c);
                        self.bump();
                    }
                    return Some(Token::Atom(atom, pos));
                }
            }
        }
    }
}

/// Parses a whole input into its top-level s-expressions.
pub fn parse_all(text: &str) -> Result<Vec<SExpr>, SexprError> {
    let mut lexer = Lexer::new(text);
    let mut stack: Vec<(Vec<SExpr>, Pos)> = Vec::new();
    let mut top = Vec::new();
    while let Some(token) = lexer.next_token() {
        match token {
            Token::Open(pos) => stack.push((Vec::new(), pos)),
            Token::Close(pos) => {
                let Some((items, open_pos)) = stack.pop() else {
                    return Err(SexprError { pos, msg: "unmatched ')'".into() });
                };
                let list = SExpr::List(items, open_pos);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => top.push(list),
                }
            }
            Token::Atom(s, pos) => {
                let atom = SExpr::Atom(s, pos);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(atom),
                    None => top.push(atom),
                }
            }
        }
    }
    if let Some((_, pos)) = stack.last() {
        return Err(SexprError { pos: *pos, msg: "unclosed '('".into() });
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_lists_with_positions() {
        let text = "; header\n(fun member (T SetT) Bool)\n(assert (member t a))";
        let exprs = parse_all(text).unwrap();
        assert_eq!(exprs.len(), 2);
        assert_eq!(exprs[0].pos(), Pos { line: 2, col: 1 });
        let items = exprs[1].as_list().unwrap();
        assert_eq!(items[0].as_atom(), Some("assert"));
        assert_eq!(items[1].pos(), Pos { line: 3, col: 9 });
        assert_eq!(exprs[1].to_string(), "(assert (member t a))");
    }

    #[test]
    fn reports_unbalanced_parens() {
        assert!(parse_all("(sort T").is_err());
        let err = parse_all("(sort T))").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 9 });
    }
}
