use super::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Equals,
    Plus,
    Minus,
    Slash,
    Semicolon,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Semicolon => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Whitespace is insignificant; `#` starts a comment that runs to the end
/// of the line.
pub(crate) fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Equals),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '/' => Some(Tok::Slash),
            ';' => Some(Tok::Semicolon),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, span });
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), span });
        } else if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push(Token { tok: Tok::Number(chars[start..i].iter().collect()), span });
        } else {
            return Err(Diagnostic::error(span, "syntax", format!("unexpected character `{c}`")));
        }
        col += i - start;
    }
    out.push(Token { tok: Tok::Eof, span: Span::new(line, col) });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        lex(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn lexes_listing_fragment() {
        assert_eq!(
            toks("conc[a, 0.5] # trailing\n"),
            vec![
                Tok::Ident("conc".into()),
                Tok::LBracket,
                Tok::Ident("a".into()),
                Tok::Comma,
                Tok::Number("0.5".into()),
                Tok::RBracket,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn tracks_positions() {
        let t = lex("crn =\n  {").unwrap();
        assert_eq!((t[2].span.line, t[2].span.col), (2, 3));
    }

    #[test]
    fn exponent_is_part_of_number() {
        assert_eq!(toks("1e-3"), vec![Tok::Number("1e-3".into()), Tok::Eof]);
        assert_eq!(toks("2e"), vec![Tok::Number("2".into()), Tok::Ident("e".into()), Tok::Eof]);
    }

    #[test]
    fn rejects_stray_characters() {
        let err = lex("crn = { $ }").unwrap_err();
        assert_eq!((err.line, err.col), (1, 9));
    }
}
