//! Byte-deterministic JSON and CSV emission.
//!
//! Floats are always rendered with 17 significant digits through the same
//! formatter, field order is fixed by construction, and nothing depends on
//! locale or hashing, so identical inputs produce identical output bytes.

/// 17-significant-digit scientific rendering, '.' decimal separator.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Float(x) => out.push_str(&fmt_f64(*x)),
            Json::Str(s) => write_escaped(out, s),
            Json::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    item.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push(']');
            }
            Json::Object(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    write_escaped(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Complex value serialized as a {re, im} pair.
pub fn complex(re: f64, im: f64) -> Json {
    Json::Object(vec![("re", Json::Float(re)), ("im", Json::Float(im))])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_fixed_width() {
        assert_eq!(fmt_f64(2.0), "2.0000000000000000e0");
        assert_eq!(fmt_f64(-0.5), "-5.0000000000000000e-1");
        assert_eq!(fmt_f64(1e-8), "1.0000000000000000e-8");
    }

    #[test]
    fn object_rendering_is_stable() {
        let v = Json::Object(vec![
            ("schema", Json::Str("dkp_s3/1".into())),
            ("value", Json::Float(1.5)),
            ("flags", Json::Array(vec![Json::Bool(true), Json::Null])),
        ]);
        let a = v.render();
        let b = v.render();
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": \"dkp_s3/1\""));
        assert!(a.contains("1.5000000000000000e0"));
    }

    #[test]
    fn strings_are_escaped() {
        let v = Json::Str("a\"b\\c\n".into());
        assert_eq!(v.render(), "\"a\\\"b\\\\c\\n\"\n");
    }
}
