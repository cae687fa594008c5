//! DIMACS CNF reader.

use super::GenError;

/// Clauses of signed 1-based variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub variables: usize,
    pub clauses: Vec<Vec<i64>>,
}

pub fn parse_dimacs(text: &str) -> Result<Formula, GenError> {
    let fail = |line: usize, message: String| GenError::Dimacs { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if let Some(rest) = trimmed.strip_prefix('p') {
            if header.is_some() {
                return Err(fail(line, "second problem line".into()));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", v, c] => {
                    let v = v.parse().map_err(|_| fail(line, format!("bad variable count {v:?}")))?;
                    let c = c.parse().map_err(|_| fail(line, format!("bad clause count {c:?}")))?;
                    header = Some((v, c));
                }
                _ => return Err(fail(line, "expected `p cnf <vars> <clauses>`".into())),
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(fail(line, "clause before the problem line".into()));
        };
        for token in trimmed.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| fail(line, format!("bad literal {token:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(fail(line, format!("literal {lit} exceeds {vars} variables")));
            } else {
                current.push(lit);
            }
        }
    }
    let Some((variables, count)) = header else {
        return Err(fail(0, "missing problem line".into()));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(fail(0, format!("header announces {count} clauses, found {}", clauses.len())));
    }
    Ok(Formula { variables, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_small_file() {
        let f = parse_dimacs("c demo\np cnf 5 2\n1 2 3 0\n-1 4\n 5 0\n").unwrap();
        assert_eq!(f.variables, 5);
        assert_eq!(f.clauses, vec![vec![1, 2, 3], vec![-1, 4, 5]]);
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 3 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
    }
}
