use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("line {line}: unterminated quoted token")]
    Unterminated { line: usize },
    #[error("line {line}: invalid escape in quoted token")]
    BadEscape { line: usize },
    #[error("line {line}: empty token")]
    EmptyToken { line: usize },
}

/// Reads a token sequence: whitespace-separated tokens (one per line works
/// too), double quotes for tokens containing whitespace, `#` at the start of
/// a token begins a comment. A `#` inside a token (`F:7(#11)`) is literal.
pub fn parse_sequence(text: &str) -> Result<Vec<String>, SequenceError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut chars = line.chars().peekable();
        loop {
            while chars.next_if(|c| c.is_whitespace()).is_some() {}
            match chars.peek() {
                None | Some('#') => break,
                Some('"') => {
                    chars.next();
                    let mut tok = String::new();
                    loop {
                        match chars.next() {
                            None => return Err(SequenceError::Unterminated { line: line_no }),
                            Some('"') => break,
                            Some('\\') => match chars.next() {
                                Some(c @ ('"' | '\\')) => tok.push(c),
                                _ => return Err(SequenceError::BadEscape { line: line_no }),
                            },
                            Some(c) => tok.push(c),
                        }
                    }
                    if tok.is_empty() {
                        return Err(SequenceError::EmptyToken { line: line_no });
                    }
                    out.push(tok);
                }
                Some(_) => {
                    let mut tok = String::new();
                    while let Some(c) = chars.next_if(|c| !c.is_whitespace()) {
                        tok.push(c);
                    }
                    out.push(tok);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_layouts() {
        let text = "# Blue Bossa, first bars\nC:min7\nF:min7 \"two words\"  F:7(#11) # tail\n\n";
        assert_eq!(
            parse_sequence(text).unwrap(),
            ["C:min7", "F:min7", "two words", "F:7(#11)"]
        );
        assert!(parse_sequence("").unwrap().is_empty());
        assert_eq!(
            parse_sequence("\"open"),
            Err(SequenceError::Unterminated { line: 1 })
        );
    }
}
