use std::ops::Deref;

use serde_json::{Map, Value};

use crate::rdf::{SolutionMapping, Term, Variable};

/// An ordered result table. Unbound cells are rendered as NULL.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solutions {
    variables: Vec<Variable>,
    rows: Vec<SolutionMapping>,
}

impl Solutions {
    pub fn new(variables: Vec<Variable>, rows: Vec<SolutionMapping>) -> Self {
        Solutions { variables, rows }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn rows(&self) -> &[SolutionMapping] {
        &self.rows
    }

    pub fn cells(&self, row: usize) -> Vec<Option<&Term>> {
        self.variables.iter().map(|v| self.rows[row].get(v)).collect()
    }

    /// Space-aligned text table with a header row.
    pub fn to_table(&self) -> String {
        let header: Vec<String> = self.variables.iter().map(ToString::to_string).collect();
        let body: Vec<Vec<String>> = (0..self.rows.len())
            .map(|r| self.cells(r).into_iter().map(|c| c.map_or_else(|| "NULL".to_string(), ToString::to_string)).collect())
            .collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for row in &body {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> =
                cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&header);
        out.push_str(&(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  ") + "\n"));
        for row in &body {
            out.push_str(&line(row));
        }
        out
    }

    /// Tab-separated; unbound cells are empty.
    pub fn to_tsv(&self) -> String {
        let mut out = self.variables.iter().map(ToString::to_string).collect::<Vec<_>>().join("\t");
        out.push('\n');
        for r in 0..self.rows.len() {
            let cells: Vec<String> = self.cells(r).into_iter().map(|c| c.map(ToString::to_string).unwrap_or_default()).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }

    /// Array of objects keyed by variable name; unbound cells are `null`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows.len())
                .map(|r| {
                    let mut obj = Map::new();
                    for (v, cell) in self.variables.iter().zip(self.cells(r)) {
                        obj.insert(v.name().to_string(), cell.map_or(Value::Null, |t| Value::String(t.to_string())));
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

impl Deref for Solutions {
    type Target = [SolutionMapping];

    fn deref(&self) -> &Self::Target {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Literal;

    fn sample() -> Solutions {
        let vars = vec![Variable::new("friend"), Variable::new("name")];
        let rows = vec![
            [(Variable::new("friend"), Term::iri("https://bob.ex/#me")), (Variable::new("name"), Literal::simple("Bob").into())]
                .into_iter()
                .collect(),
            [(Variable::new("friend"), Term::iri("http://dbpedia.org/resource/Mickey_Mouse"))].into_iter().collect(),
        ];
        Solutions::new(vars, rows)
    }

    #[test]
    fn tsv_leaves_null_empty() {
        assert_eq!(
            sample().to_tsv(),
            "?friend\t?name\n<https://bob.ex/#me>\t\"Bob\"\n<http://dbpedia.org/resource/Mickey_Mouse>\t\n"
        );
    }

    #[test]
    fn json_uses_null() {
        let json = sample().to_json();
        assert_eq!(json[1]["name"], Value::Null);
        assert_eq!(json[0]["name"], Value::String("\"Bob\"".into()));
    }

    #[test]
    fn table_is_aligned() {
        let table = sample().to_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[3].ends_with("NULL"));
        let col = lines[0].find("?name").unwrap();
        assert_eq!(lines[2].find("\"Bob\"").unwrap(), col);
    }
}
