//! Plain-text export and import of presentations.
//!
//! The format is line oriented and round-trips exactly: a header with the
//! grading dimension, one letter per line in precedence order, then one rule
//! per line as `lhs -> [series] word + [series] word`. Series render in the
//! h-series syntax, words in the `a*b*c` syntax with `1` for the empty word.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::ncalg::poly::NCPoly;
use crate::ncalg::presentation::{Presentation, PresentationBuilder};
use crate::ncalg::word::{GenId, Word};

pub fn presentation_to_text(p: &Presentation) -> String {
    let mut out = format!("presentation grading_dim={}\n", p.grading_dim());
    out.push_str("letters:\n");
    for g in p.letters() {
        if g.grade.is_empty() {
            out.push_str(&format!("{}\n", g.name));
        } else {
            let grades =
                g.grade.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            out.push_str(&format!("{} {}\n", g.name, grades));
        }
    }
    out.push_str("rules:\n");
    for rule in p.rules() {
        out.push_str(&format!(
            "{} -> {}\n",
            p.word_string(&rule.lhs),
            p.poly_string(&rule.rhs)
        ));
    }
    out
}

fn parse_err(at: &str) -> Error {
    Error::Parse { at: at.to_string() }
}

fn parse_word_named(names: &HashMap<String, GenId>, s: &str) -> Result<Word> {
    let s = s.trim();
    if s == "1" {
        return Ok(Word::empty());
    }
    let mut ids = Vec::new();
    for part in s.split('*') {
        ids.push(*names.get(part.trim()).ok_or_else(|| parse_err(part))?);
    }
    Ok(Word::from_ids(ids))
}

fn parse_poly(names: &HashMap<String, GenId>, s: &str) -> Result<NCPoly> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("0 (order ") {
        let order = rest
            .strip_suffix(')')
            .and_then(|n| n.parse::<i32>().ok())
            .ok_or_else(|| parse_err(s))?;
        return Ok(NCPoly::zero(order));
    }
    let mut terms = Vec::new();
    for chunk in s.split(" + [") {
        let chunk = chunk.strip_prefix('[').unwrap_or(chunk);
        let (series, word) = chunk.rsplit_once("] ").ok_or_else(|| parse_err(chunk))?;
        let coeff: HSeries = series.parse()?;
        terms.push((parse_word_named(names, word)?, coeff));
    }
    Ok(NCPoly::from_terms(terms))
}

pub fn presentation_from_text(s: &str) -> Result<Presentation> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| parse_err("empty input"))?;
    let dim: usize = header
        .strip_prefix("presentation grading_dim=")
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| parse_err(header))?;
    if lines.next() != Some("letters:") {
        return Err(parse_err("expected letters:"));
    }
    let mut b = PresentationBuilder::new(dim);
    let mut names: HashMap<String, GenId> = HashMap::new();
    for line in lines.by_ref() {
        if line == "rules:" {
            break;
        }
        let (name, grades) = match line.split_once(' ') {
            Some((n, g)) => (n, g),
            None => (line, ""),
        };
        let grade = if dim == 0 {
            Vec::new()
        } else {
            grades
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| parse_err(line)))
                .collect::<Result<Vec<_>>>()?
        };
        let id = b.letter(name, grade);
        names.insert(name.to_string(), id);
    }
    for line in lines {
        let (lhs, rhs) = line.split_once(" -> ").ok_or_else(|| parse_err(line))?;
        b.rule(parse_word_named(&names, lhs)?, parse_poly(&names, rhs)?);
    }
    b.freeze()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hseries::rat;

    fn graded_example() -> Presentation {
        let mut b = PresentationBuilder::new(2);
        let e = b.letter("e", vec![1, -1]);
        let f = b.letter("f", vec![-1, 1]);
        let fe = Word::from_ids(vec![f, e]);
        let ef = Word::from_ids(vec![e, f]);
        let coeff = HSeries::one(8)
            .add(&HSeries::term(rat(1, 2), 1, 8))
            .add(&HSeries::term(rat(-1, 3), 3, 8));
        b.rule(fe, NCPoly::from_terms([(ef, coeff)]));
        b.freeze().unwrap()
    }

    #[test]
    fn text_round_trip_is_exact() {
        let p = graded_example();
        let text = presentation_to_text(&p);
        let back = presentation_from_text(&text).unwrap();
        assert_eq!(p, back);
        assert_eq!(text, presentation_to_text(&back));
    }

    #[test]
    fn zero_rhs_and_empty_words_survive() {
        let mut b = PresentationBuilder::new(0);
        let x = b.letter("x", vec![]);
        let xx = Word::from_ids(vec![x, x]);
        b.rule(xx.clone(), NCPoly::zero(6));
        b.rule(
            Word::from_ids(vec![x]),
            NCPoly::monomial(Word::empty(), HSeries::h(8)),
        );
        let p = b.freeze().unwrap();
        let back = presentation_from_text(&presentation_to_text(&p)).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(presentation_from_text("nonsense").is_err());
        assert!(presentation_from_text("presentation grading_dim=0\nletters:\nx\nrules:\nx*x > [1 + O(h^2)] 1").is_err());
    }
}
