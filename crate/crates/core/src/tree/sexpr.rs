//! Text form of a tree:
//!
//! ```text
//! tree    := leaf | node
//! leaf    := "(leaf " class ")"
//! node    := "(node " position " " arc { " " arc } " " default ")"
//! arc     := "(arc {" token { " " token } "} " tree ")"
//! default := "(default " tree ")"
//! ```
//!
//! The writer emits single spaces; the reader accepts any run of whitespace
//! between items.

use thiserror::Error;

use super::{Arc, DecisionTree, TokenSet};
use crate::corpus::{normalize_token, Position, SenseClass};

pub fn serialize_tree(tree: &DecisionTree) -> String {
    let mut out = String::new();
    write_tree(tree, &mut out);
    out
}

fn write_tree(tree: &DecisionTree, out: &mut String) {
    match tree {
        DecisionTree::Leaf(class) => {
            out.push_str("(leaf ");
            out.push_str(class.symbol());
            out.push(')');
        }
        DecisionTree::Node(node) => {
            out.push_str("(node ");
            out.push_str(&node.position.to_string());
            for arc in &node.arcs {
                out.push_str(" (arc ");
                out.push_str(&arc.tokens.to_string());
                out.push(' ');
                write_tree(&arc.child, out);
                out.push(')');
            }
            out.push_str(" (default ");
            write_tree(&node.default, out);
            out.push_str("))");
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("tree syntax error at byte {offset}: {message}")]
pub struct TreeParseError {
    pub offset: usize,
    pub message: String,
}

pub fn parse_tree(text: &str) -> Result<DecisionTree, TreeParseError> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    let tree = p.tree()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input after tree"));
    }
    Ok(tree)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> TreeParseError {
        TreeParseError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) -> usize {
        let rest = self.rest();
        let n = rest.len() - rest.trim_start().len();
        self.pos += n;
        n
    }

    fn require_ws(&mut self) -> Result<(), TreeParseError> {
        if self.skip_ws() == 0 {
            Err(self.error("expected whitespace"))
        } else {
            Ok(())
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), TreeParseError> {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.error(format!("expected `{lit}`")))
        }
    }

    /// A run of bytes up to whitespace or one of `stops`.
    fn atom(&mut self, stops: &[char]) -> &'a str {
        let rest = self.rest();
        let end = rest
            .find(|c: char| c.is_whitespace() || stops.contains(&c))
            .unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn tree(&mut self) -> Result<DecisionTree, TreeParseError> {
        if self.rest().starts_with("(leaf") {
            self.expect("(leaf")?;
            self.require_ws()?;
            let at = self.pos;
            let class = self.atom(&[')']);
            let class: SenseClass = class.parse().map_err(|e: crate::corpus::UnknownClass| {
                TreeParseError {
                    offset: at,
                    message: e.to_string(),
                }
            })?;
            self.skip_ws();
            self.expect(")")?;
            Ok(DecisionTree::Leaf(class))
        } else if self.rest().starts_with("(node") {
            self.expect("(node")?;
            self.require_ws()?;
            let at = self.pos;
            let position: Position = self.atom(&['(', ')']).parse().map_err(
                |e: crate::corpus::InvalidPosition| TreeParseError {
                    offset: at,
                    message: e.to_string(),
                },
            )?;
            let mut arcs = Vec::new();
            loop {
                self.require_ws()?;
                if self.rest().starts_with("(arc") {
                    arcs.push(self.arc()?);
                } else if self.rest().starts_with("(default") {
                    break;
                } else {
                    return Err(self.error("expected `(arc` or `(default`"));
                }
            }
            if arcs.is_empty() {
                return Err(self.error("node needs at least one arc before the default"));
            }
            self.expect("(default")?;
            self.require_ws()?;
            let default = self.tree()?;
            self.skip_ws();
            self.expect(")")?;
            self.skip_ws();
            self.expect(")")?;
            Ok(DecisionTree::node(position, arcs, default))
        } else {
            Err(self.error("expected `(leaf` or `(node`"))
        }
    }

    fn arc(&mut self) -> Result<Arc, TreeParseError> {
        self.expect("(arc")?;
        self.require_ws()?;
        self.expect("{")?;
        let mut tokens = TokenSet::default();
        loop {
            self.skip_ws();
            if self.rest().starts_with('}') {
                self.pos += 1;
                break;
            }
            if self.rest().is_empty() {
                return Err(self.error("unterminated token set"));
            }
            let at = self.pos;
            let raw = self.atom(&['}']);
            let token = normalize_token(raw).map_err(|e| TreeParseError {
                offset: at,
                message: e.to_string(),
            })?;
            if !tokens.insert(token) {
                return Err(TreeParseError {
                    offset: at,
                    message: format!("duplicate token `{raw}` in arc"),
                });
            }
        }
        if tokens.is_empty() {
            return Err(self.error("empty token set"));
        }
        self.require_ws()?;
        let child = self.tree()?;
        self.skip_ws();
        self.expect(")")?;
        Ok(Arc::new(tokens, child))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::hl_baseline_tree;

    const BASELINE: &str = "(node -1 (arc {<period> <comma>} (leaf D)) (default (leaf S)))";

    #[test]
    fn leaf_round_trip() {
        assert_eq!(parse_tree("(leaf D)").unwrap(), DecisionTree::Leaf(SenseClass::Discourse));
        assert_eq!(serialize_tree(&DecisionTree::Leaf(SenseClass::Sentential)), "(leaf S)");
    }

    #[test]
    fn baseline_text() {
        assert_eq!(serialize_tree(&hl_baseline_tree()), BASELINE);
        assert_eq!(parse_tree(BASELINE).unwrap(), hl_baseline_tree());
    }

    #[test]
    fn tolerant_whitespace_canonical_output() {
        let loose = "  (node  -1\n (arc { <period>  <comma> }\t(leaf D) ) (default (leaf S) ) )\n";
        let tree = parse_tree(loose).unwrap();
        assert_eq!(serialize_tree(&tree), BASELINE);
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_tree("(leaf X)").unwrap_err();
        assert_eq!(e.offset, 6);
        let e = parse_tree("(node 5 (arc {a} (leaf D)) (default (leaf S)))").unwrap_err();
        assert_eq!(e.offset, 6);
        let e = parse_tree("(node -1 (default (leaf S)))").unwrap_err();
        assert!(e.message.contains("at least one arc"));
        let e = parse_tree("(node -1 (arc {} (leaf D)) (default (leaf S)))").unwrap_err();
        assert!(e.message.contains("empty"));
        let e = parse_tree("(node -1 (arc {a a} (leaf D)) (default (leaf S)))").unwrap_err();
        assert!(e.message.contains("duplicate"));
        let e = parse_tree("(leaf D) (leaf S)").unwrap_err();
        assert_eq!(e.offset, 9);
        assert!(parse_tree("(node -1 (arc {a} (leaf D)) (default (leaf S))").is_err());
        assert!(parse_tree("(node -1 (arc {a (leaf D)) (default (leaf S)))").is_err());
        assert!(parse_tree("").is_err());
    }
}
