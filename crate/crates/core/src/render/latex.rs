use super::{part_heading, DOCUMENT_TITLE};
use crate::document::{AnswerValue, Datasheet};
use crate::schema::{Question, Schema, CRITERION_PART};

/// Escapes LaTeX specials; newlines become paragraph breaks.
pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '{' | '}' | '#' | '$' | '%' | '&' | '_' => {
                out.push('\\');
                out.push(c);
            }
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            '\n' => out.push_str("\\par "),
            '\r' => {}
            _ => out.push(c),
        }
    }
    out
}

fn render_question(out: &mut String, q: &Question, answer: Option<&AnswerValue>) {
    out.push_str(&format!("\\subsection*{{Q{}: {}}}\n", q.id, escape(&q.prompt)));
    if !q.help.is_empty() {
        out.push_str(&format!("{{\\small\\itshape {}}}\n\n", escape(&q.help)));
    }
    out.push_str("\\begin{answer}\n");
    if q.kind.is_choice() {
        out.push_str("\\begin{itemize}\n");
        for o in &q.options {
            let mark = if answer.is_some_and(|a| a.is_selected(&o.key)) { "[x]" } else { "[ ]" };
            out.push_str(&format!("\\item[{{{mark}}}] {}\n", escape(&o.label)));
        }
        out.push_str("\\end{itemize}\n");
        if let Some(other) = answer.and_then(AnswerValue::other_text) {
            out.push_str(&format!("Other details: {}\n", escape(other)));
        }
    } else {
        let text = match answer {
            None => String::new(),
            Some(AnswerValue::Integer(n)) => n.to_string(),
            Some(AnswerValue::Sentinel(s)) => escape(s.token()),
            Some(AnswerValue::Text(t)) => escape(t),
            Some(_) => unreachable!("text questions hold text answers"),
        };
        if text.is_empty() {
            out.push_str("\\mbox{}\n");
        } else {
            out.push_str(&text);
            out.push('\n');
        }
    }
    out.push_str("\\end{answer}\n\n");
}

pub fn render_latex(d: &Datasheet, s: &Schema) -> String {
    let mut out = String::from(
        "\\documentclass{article}\n\
         \\usepackage[utf8]{inputenc}\n\
         \\newenvironment{answer}{\\begin{quote}}{\\end{quote}}\n",
    );
    out.push_str(&format!("\\title{{{}}}\n\\date{{}}\n", escape(DOCUMENT_TITLE)));
    out.push_str("\\begin{document}\n\\maketitle\n\n");
    out.push_str(&format!("\\noindent schema\\_version: {}\n\n", escape(d.schema_version())));
    if let Some(p) = d.provenance() {
        out.push_str(&format!("\\section*{{Provenance}}\n{}\n\n", escape(p)));
    }
    for part in s.parts_in_order() {
        let blocks: Vec<(Option<u8>, &_)> = if part.id == CRITERION_PART {
            d.criteria().iter().map(|b| (Some(b.index()), b.answers())).collect()
        } else {
            vec![(None, d.fixed_answers())]
        };
        for (index, answers) in blocks {
            out.push_str(&format!("\\section*{{{}}}\n\n", escape(&part_heading(part.id, &part.title, index))));
            for q in &part.questions {
                render_question(&mut out, q, answers.get(&q.id));
            }
        }
    }
    out.push_str("\\end{document}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::builtin_schema;

    /// Checks brace balance, environment nesting and that every special
    /// character outside a command is escaped.
    fn check_grammar(tex: &str) -> Result<(), String> {
        let mut envs: Vec<String> = Vec::new();
        let mut depth = 0i64;
        let bytes: Vec<char> = tex.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                '\\' => {
                    let start = i + 1;
                    let mut j = start;
                    while j < bytes.len() && bytes[j].is_ascii_alphabetic() {
                        j += 1;
                    }
                    if j == start {
                        // Control symbol such as \% or \{.
                        i = start + 1;
                        continue;
                    }
                    let name: String = bytes[start..j].iter().collect();
                    if name == "begin" || name == "end" {
                        let close = bytes[j..].iter().position(|&c| c == '}').ok_or("unterminated env")?;
                        let env: String = bytes[j + 1..j + close].iter().collect();
                        if name == "begin" {
                            envs.push(env);
                        } else if envs.pop().as_deref() != Some(env.as_str()) {
                            return Err(format!("mismatched \\end{{{env}}}"));
                        }
                        i = j + close + 1;
                        continue;
                    }
                    i = j;
                    continue;
                }
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(format!("unbalanced brace at {i}"));
                    }
                }
                '#' | '$' | '%' | '&' | '_' | '~' | '^' => {
                    return Err(format!("unescaped `{c}` at {i}"));
                }
                _ => {}
            }
            i += 1;
        }
        if depth != 0 || !envs.is_empty() {
            return Err(format!("unclosed: depth {depth}, envs {envs:?}"));
        }
        Ok(())
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("50% & $5_x"), "50\\% \\& \\$5\\_x");
        assert_eq!(escape("a\\b{c}"), "a\\textbackslash{}b\\{c\\}");
        assert_eq!(escape("~^#"), "\\textasciitilde{}\\textasciicircum{}\\#");
        assert_eq!(escape("one\ntwo"), "one\\par two");
    }

    #[test]
    fn blank_and_adversarial_are_well_formed() {
        let s = builtin_schema();
        let blank = render_latex(&Datasheet::new_empty(s), s);
        check_grammar(&blank).unwrap();
        assert_eq!(blank.matches("\\subsection*{Q").count(), 45);

        let nasty = "\\end{document} {{ }} #$%&_~^ `code`\nline";
        let d = Datasheet::new_empty(s)
            .set_answer(s, &"1.3".parse().unwrap(), AnswerValue::text(nasty))
            .unwrap()
            .set_answer(s, &"3.1.2".parse().unwrap(), AnswerValue::choice("other").with_other_text(nasty))
            .unwrap()
            .with_provenance(Some(nasty.into()));
        let tex = render_latex(&d, s);
        check_grammar(&tex).unwrap();
        assert_eq!(tex.matches("\\end{document}").count(), 1);
        assert!(tex.contains("\\item[{[x]}] Other"));
    }

    #[test]
    fn grammar_checker_rejects_broken_output() {
        assert!(check_grammar("\\begin{a}x\\end{b}").is_err());
        assert!(check_grammar("{").is_err());
        assert!(check_grammar("50%").is_err());
        assert!(check_grammar("\\begin{a}\\{\\%\\end{a}").is_ok());
    }
}
