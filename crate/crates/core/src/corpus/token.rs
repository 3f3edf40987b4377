use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub const PERIOD: &str = "<period>";
pub const COMMA: &str = "<comma>";
pub const APOSTROPHE_S: &str = "<apostrophe-s>";
pub const NONE: &str = "<none>";

const SPECIALS: [&str; 4] = [PERIOD, COMMA, APOSTROPHE_S, NONE];

/// The 34 clue words, in lowercase normalized form.
pub const CLUE_WORDS: [&str; 34] = [
    "and", "now", "so", "like", "but", "or", "say", "well", "look", "see", "actually", "first",
    "also", "then", "further", "finally", "right", "because", "no", "although", "indeed", "ok",
    "however", "generally", "similarly", "basically", "second", "next", "yes", "since", "except",
    "therefore", "otherwise", "anyway",
];

pub fn is_clue_word(word: &str) -> bool {
    CLUE_WORDS.contains(&word)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenError {
    #[error("empty token")]
    Empty,
    #[error("token `{0}` contains whitespace")]
    Whitespace(String),
    #[error("unknown special symbol `{0}`")]
    UnknownSpecial(String),
    #[error("token `{0}` contains `}}`")]
    Brace(String),
}

/// A normalized word or punctuation symbol.
///
/// Tokens are cheap to clone; the text is shared.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(Arc<str>);

impl Token {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn period() -> Token {
        Token(Arc::from(PERIOD))
    }

    pub fn comma() -> Token {
        Token(Arc::from(COMMA))
    }

    pub fn none() -> Token {
        Token(Arc::from(NONE))
    }

    pub fn is_special(&self) -> bool {
        SPECIALS.contains(&self.as_str())
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Token {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::str::FromStr for Token {
    type Err = TokenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        normalize_token(s)
    }
}

/// Normalizes one raw context field.
///
/// ASCII letters are lowercased, `.`, `,` and `'s` become `<period>`,
/// `<comma>` and `<apostrophe-s>`. Inflection is kept as written.
pub fn normalize_token(raw: &str) -> Result<Token, TokenError> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(TokenError::Empty);
    }
    if trimmed.chars().any(char::is_whitespace) {
        return Err(TokenError::Whitespace(trimmed.to_string()));
    }
    let lower = trimmed.to_ascii_lowercase();
    let text = match lower.as_str() {
        "." => PERIOD,
        "," => COMMA,
        "'s" => APOSTROPHE_S,
        s if s.len() >= 2 && s.starts_with('<') && s.ends_with('>') => {
            if !SPECIALS.contains(&s) {
                return Err(TokenError::UnknownSpecial(trimmed.to_string()));
            }
            s
        }
        s => s,
    };
    if text.contains('}') {
        return Err(TokenError::Brace(trimmed.to_string()));
    }
    Ok(Token(Arc::from(text)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowercases_words() {
        assert_eq!(normalize_token("Now").unwrap().as_str(), "now");
        assert_eq!(normalize_token("OK").unwrap().as_str(), "ok");
        assert_eq!(normalize_token("  But ").unwrap().as_str(), "but");
    }

    #[test]
    fn punctuation_symbols() {
        assert_eq!(normalize_token(".").unwrap().as_str(), "<period>");
        assert_eq!(normalize_token(",").unwrap().as_str(), "<comma>");
        assert_eq!(normalize_token("'s").unwrap().as_str(), "<apostrophe-s>");
        assert_eq!(normalize_token("'S").unwrap().as_str(), "<apostrophe-s>");
        assert_eq!(normalize_token("<none>").unwrap().as_str(), "<none>");
        assert_eq!(normalize_token("<PERIOD>").unwrap().as_str(), "<period>");
    }

    #[test]
    fn inflection_is_kept() {
        let an = normalize_token("an").unwrap();
        assert_eq!(an.as_str(), "an");
        assert_ne!(an, normalize_token("a").unwrap());
        assert_eq!(normalize_token("Says").unwrap().as_str(), "says");
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(normalize_token("   "), Err(TokenError::Empty));
        assert!(matches!(normalize_token("two words"), Err(TokenError::Whitespace(_))));
        assert!(matches!(normalize_token("a\tb"), Err(TokenError::Whitespace(_))));
        assert!(matches!(normalize_token("<colon>"), Err(TokenError::UnknownSpecial(_))));
        assert!(matches!(normalize_token("<>"), Err(TokenError::UnknownSpecial(_))));
        assert!(matches!(normalize_token("a}"), Err(TokenError::Brace(_))));
    }

    #[test]
    fn non_ascii_passes_through() {
        assert_eq!(normalize_token("Édith").unwrap().as_str(), "Édith");
    }

    #[test]
    fn clue_word_list() {
        assert_eq!(CLUE_WORDS.len(), 34);
        let mut sorted = CLUE_WORDS.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 34);
        for w in CLUE_WORDS {
            assert_eq!(normalize_token(w).unwrap().as_str(), w);
        }
    }

    proptest! {
        #[test]
        fn idempotent(raw in "[ -~]{1,12}") {
            if let Ok(once) = normalize_token(&raw) {
                let twice = normalize_token(once.as_str()).unwrap();
                prop_assert_eq!(once, twice);
            }
        }

        #[test]
        fn output_has_no_ascii_uppercase_or_whitespace(raw in "[A-Za-z.,'<>-]{1,10}") {
            if let Ok(t) = normalize_token(&raw) {
                prop_assert!(!t.as_str().chars().any(|c| c.is_ascii_uppercase() || c.is_whitespace()));
                if t.as_str().starts_with('<') && t.as_str().ends_with('>') && t.as_str().len() >= 2 {
                    prop_assert!(t.is_special());
                }
            }
        }
    }
}
