//! Lenient HTML tree builder: just enough structure for RDFa attribute
//! processing. Unmatched end tags are dropped and open elements are closed
//! at the end of the input or when an ancestor closes.

use crate::error::ParseError;
use crate::lex::Cursor;

#[derive(Debug, Clone)]
pub(crate) enum Node {
    Element(Element),
    Text(String),
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Element {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<Node>,
    pub line: usize,
    pub column: usize,
}

impl Element {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }

    /// Concatenated descendant text.
    pub fn text_content(&self) -> String {
        let mut out = String::new();
        fn walk(n: &[Node], out: &mut String) {
            for c in n {
                match c {
                    Node::Text(t) => out.push_str(t),
                    Node::Element(e) => walk(&e.children, out),
                }
            }
        }
        walk(&self.children, &mut out);
        out
    }
}

const VOID: &[&str] = &[
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param", "source",
    "track", "wbr",
];

const RAW_TEXT: &[&str] = &["script", "style"];

/// Parses HTML into a synthetic root element.
pub(crate) fn parse_html(text: &str) -> Result<Element, ParseError> {
    let mut cur = Cursor::new(text);
    let mut stack: Vec<Element> = vec![Element { name: "#root".into(), ..Default::default() }];
    let mut buf = String::new();

    fn flush(buf: &mut String, stack: &mut [Element]) {
        if !buf.is_empty() {
            let text = decode_entities(buf);
            stack.last_mut().unwrap().children.push(Node::Text(text));
            buf.clear();
        }
    }

    fn close_top(stack: &mut Vec<Element>) {
        let el = stack.pop().unwrap();
        stack.last_mut().unwrap().children.push(Node::Element(el));
    }

    while let Some(c) = cur.peek() {
        if c != '<' {
            buf.push(c);
            cur.bump();
            continue;
        }
        let start = cur.pos();
        if cur.eat_str("<!--") {
            flush(&mut buf, &mut stack);
            match cur.rest().find("-->") {
                Some(i) => cur.set_pos(cur.pos() + i + 3),
                None => return Err(cur.error_at(start, crate::error::ParseErrorKind::Syntax, "unterminated comment")),
            }
            continue;
        }
        if cur.eat_str("<!") || cur.eat_str("<?") {
            flush(&mut buf, &mut stack);
            match cur.rest().find('>') {
                Some(i) => cur.set_pos(cur.pos() + i + 1),
                None => return Err(cur.error_at(start, crate::error::ParseErrorKind::Syntax, "unterminated declaration")),
            }
            continue;
        }
        if cur.eat_str("</") {
            flush(&mut buf, &mut stack);
            let name = cur.take_while(|c| c.is_alphanumeric() || c == '-' || c == ':').to_ascii_lowercase();
            cur.take_while(|c| c != '>');
            if !cur.eat('>') {
                return Err(cur.error_at(start, crate::error::ParseErrorKind::Syntax, "unterminated end tag"));
            }
            if let Some(depth) = stack.iter().rposition(|e| e.name == name) {
                if depth > 0 {
                    while stack.len() > depth {
                        close_top(&mut stack);
                    }
                }
            }
            continue;
        }
        // start tag, or a literal '<' in text
        if !cur.peek_nth(1).is_some_and(|c| c.is_ascii_alphabetic()) {
            buf.push('<');
            cur.bump();
            continue;
        }
        flush(&mut buf, &mut stack);
        cur.bump();
        let name = cur.take_while(|c| c.is_alphanumeric() || c == '-' || c == ':').to_ascii_lowercase();
        let (line, column) = cur.line_col(start);
        let mut el = Element { name, line, column, ..Default::default() };
        let self_closing = parse_attrs(&mut cur, &mut el, start)?;
        if self_closing || VOID.contains(&el.name.as_str()) {
            stack.last_mut().unwrap().children.push(Node::Element(el));
        } else if RAW_TEXT.contains(&el.name.as_str()) {
            let close = format!("</{}", el.name);
            let rest = cur.rest().to_ascii_lowercase();
            let end = rest.find(&close).unwrap_or(rest.len());
            cur.set_pos(cur.pos() + end);
            if cur.eat_str(&close) || !cur.is_eof() {
                cur.take_while(|c| c != '>');
                cur.eat('>');
            }
            stack.last_mut().unwrap().children.push(Node::Element(el));
        } else {
            stack.push(el);
        }
    }
    flush(&mut buf, &mut stack);
    while stack.len() > 1 {
        close_top(&mut stack);
    }
    Ok(stack.pop().unwrap())
}

/// Parses attributes up to and including '>'; returns true for `/>`.
fn parse_attrs(cur: &mut Cursor, el: &mut Element, tag_start: usize) -> Result<bool, ParseError> {
    use crate::error::ParseErrorKind::Syntax;
    loop {
        cur.take_while(char::is_whitespace);
        match cur.peek() {
            None => return Err(cur.error_at(tag_start, Syntax, format!("unterminated <{}> tag", el.name))),
            Some('>') => {
                cur.bump();
                return Ok(false);
            }
            Some('/') => {
                cur.bump();
                cur.take_while(char::is_whitespace);
                if cur.eat('>') {
                    return Ok(true);
                }
                continue;
            }
            _ => {}
        }
        let name = cur
            .take_while(|c| !c.is_whitespace() && !matches!(c, '=' | '>' | '/' | '"' | '\''))
            .to_ascii_lowercase();
        if name.is_empty() {
            return Err(cur.error(format!("malformed attribute in <{}>", el.name)));
        }
        cur.take_while(char::is_whitespace);
        let value = if cur.eat('=') {
            cur.take_while(char::is_whitespace);
            match cur.peek() {
                Some(q @ ('"' | '\'')) => {
                    let vstart = cur.pos();
                    cur.bump();
                    let v = cur.take_while(|c| c != q).to_string();
                    if !cur.eat(q) {
                        return Err(cur.error_at(vstart, Syntax, "unterminated attribute value"));
                    }
                    v
                }
                _ => cur.take_while(|c| !c.is_whitespace() && c != '>').to_string(),
            }
        } else {
            String::new()
        };
        el.attrs.push((name, decode_entities(&value)));
    }
}

pub(crate) fn decode_entities(s: &str) -> String {
    if !s.contains('&') {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(i) = rest.find('&') {
        out.push_str(&rest[..i]);
        rest = &rest[i..];
        let end = rest.find(';').filter(|&e| e <= 10);
        let decoded = end.and_then(|e| {
            let ent = &rest[1..e];
            let c = match ent {
                "amp" => Some('&'),
                "lt" => Some('<'),
                "gt" => Some('>'),
                "quot" => Some('"'),
                "apos" => Some('\''),
                "nbsp" => Some('\u{a0}'),
                _ if ent.starts_with("#x") || ent.starts_with("#X") => {
                    u32::from_str_radix(&ent[2..], 16).ok().and_then(char::from_u32)
                }
                _ if ent.starts_with('#') => ent[1..].parse().ok().and_then(char::from_u32),
                _ => None,
            };
            c.map(|c| (c, e))
        });
        match decoded {
            Some((c, e)) => {
                out.push(c);
                rest = &rest[e + 1..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}
