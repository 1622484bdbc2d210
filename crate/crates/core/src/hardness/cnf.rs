use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::gadgets::{build_clause_gadget, build_variable_gadget, Builder, LabeledGadget};
use crate::error::{Error, Result};

/// Optional drawing order: for each variable (1-based, stored at index
/// `var - 1`) the clause indices (0-based) around it, and for each clause
/// the variables around it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rotation {
    pub var_order: Vec<Vec<usize>>,
    pub clause_order: Vec<Vec<usize>>,
}

/// A CNF formula with exactly three literals per clause, each on a distinct
/// variable. Literals are DIMACS style: `v` or `-v` with `v` in `1..=num_vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf13Instance {
    num_vars: usize,
    clauses: Vec<[i32; 3]>,
    rotation: Option<Rotation>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedFormula(msg.into())
}

impl Cnf13Instance {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        let mut out = Vec::with_capacity(clauses.len());
        for (c, lits) in clauses.iter().enumerate() {
            let lits: [i32; 3] = lits
                .as_slice()
                .try_into()
                .map_err(|_| malformed(format!("clause {c} has {} literals, expected 3", lits.len())))?;
            for (i, &l) in lits.iter().enumerate() {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(malformed(format!("clause {c} has literal {l} outside 1..={num_vars}")));
                }
                if lits[..i].iter().any(|&m| m.abs() == l.abs()) {
                    return Err(malformed(format!("clause {c} repeats variable {}", l.abs())));
                }
            }
            out.push(lits);
        }
        Ok(Cnf13Instance {
            num_vars,
            clauses: out,
            rotation: None,
        })
    }

    /// Attaches a drawing order after checking it lists exactly the
    /// incidences of the formula.
    pub fn with_rotation(mut self, rotation: Rotation) -> Result<Self> {
        if rotation.var_order.len() != self.num_vars || rotation.clause_order.len() != self.clauses.len() {
            return Err(malformed("rotation does not match the formula's size"));
        }
        for v in 1..=self.num_vars {
            let mut want = self.clauses_of(v);
            let mut got = rotation.var_order[v - 1].clone();
            want.sort_unstable();
            got.sort_unstable();
            if want != got {
                return Err(malformed(format!("rotation lists wrong clauses around variable {v}")));
            }
        }
        for (c, lits) in self.clauses.iter().enumerate() {
            let mut want: Vec<usize> = lits.iter().map(|l| l.unsigned_abs() as usize).collect();
            let mut got = rotation.clause_order[c].clone();
            want.sort_unstable();
            got.sort_unstable();
            if want != got {
                return Err(malformed(format!("rotation lists wrong variables around clause {c}")));
            }
        }
        self.rotation = Some(rotation);
        Ok(self)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    pub fn rotation(&self) -> Option<&Rotation> {
        self.rotation.as_ref()
    }

    fn clauses_of(&self, var: usize) -> Vec<usize> {
        (0..self.clauses.len())
            .filter(|&c| self.clauses[c].iter().any(|l| l.unsigned_abs() as usize == var))
            .collect()
    }

    fn literal(&self, clause: usize, var: usize) -> i32 {
        *self.clauses[clause]
            .iter()
            .find(|l| l.unsigned_abs() as usize == var)
            .expect("variable occurs in clause")
    }

    fn occurrence_order(&self, var: usize) -> Vec<usize> {
        match &self.rotation {
            Some(r) => r.var_order[var - 1].clone(),
            None => self.clauses_of(var),
        }
    }

    fn clause_vars(&self, clause: usize) -> Vec<usize> {
        match &self.rotation {
            Some(r) => r.clause_order[clause].clone(),
            None => self.clauses[clause].iter().map(|l| l.unsigned_abs() as usize).collect(),
        }
    }

    /// Whether `assign[v - 1]` makes exactly one literal true in every clause.
    pub fn is_exactly_one(&self, assign: &[bool]) -> bool {
        self.clauses.iter().all(|lits| {
            lits.iter()
                .filter(|&&l| assign[l.unsigned_abs() as usize - 1] == (l > 0))
                .count()
                == 1
        })
    }
}

/// Parses DIMACS text: `c` comment lines, a `p cnf V C` header, then
/// clauses terminated by `0`.
pub fn parse_dimacs(text: &str) -> Result<Cnf13Instance> {
    let err = |line: usize, message: String| Error::Parse {
        location: format!("line {line}"),
        message,
    };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(err(i + 1, "expected \"p cnf <vars> <clauses>\"".into()));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|e| err(i + 1, format!("{s:?}: {e}")));
            header = Some((num(parts[2])?, num(parts[3])?));
            continue;
        }
        if header.is_none() {
            return Err(err(i + 1, "clause before the problem line".into()));
        }
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|e| err(i + 1, format!("{tok:?}: {e}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let Some((vars, count)) = header else {
        return Err(err(0, "missing problem line".into()));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(malformed(format!("header promises {count} clauses, found {}", clauses.len())));
    }
    Cnf13Instance::new(vars, clauses)
}

/// Assignment (index `v - 1` for variable `v`) with exactly one true literal
/// per clause; the first in lexicographic order with true before false.
pub fn solve_1in3(inst: &Cnf13Instance) -> Result<Option<Vec<bool>>> {
    const LIMIT: usize = 24;
    if inst.num_vars > LIMIT {
        return Err(Error::TooLarge(format!(
            "{} variables exceed the brute-force bound of {LIMIT}",
            inst.num_vars
        )));
    }
    // Clauses become checkable once their largest variable is set.
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); inst.num_vars + 1];
    for (c, lits) in inst.clauses.iter().enumerate() {
        let last = lits.iter().map(|l| l.unsigned_abs() as usize).max().unwrap();
        due[last].push(c);
    }
    fn go(inst: &Cnf13Instance, due: &[Vec<usize>], assign: &mut Vec<bool>) -> bool {
        let var = assign.len();
        if var == inst.num_vars {
            return true;
        }
        for value in [true, false] {
            assign.push(value);
            let ok = due[var + 1].iter().all(|&c| {
                inst.clauses[c]
                    .iter()
                    .filter(|&&l| assign[l.unsigned_abs() as usize - 1] == (l > 0))
                    .count()
                    == 1
            });
            if ok && go(inst, due, assign) {
                return true;
            }
            assign.pop();
        }
        false
    }
    let mut assign = Vec::with_capacity(inst.num_vars);
    Ok(go(inst, &due, &mut assign).then_some(assign))
}

/// Builds the triangle-tiling instance of a formula: one clause gadget per
/// clause, one variable gadget per occurring variable, with each
/// occurrence's `h_k` ports identified with the clause's `a_{k+3}` (positive
/// literal) or `a_{7-k}` (negative literal) at the variable's position.
/// Ports are named `c{clause}.a{k}^{j}` and `x{var}.{port}`.
pub fn reduce_formula(inst: &Cnf13Instance) -> Result<LabeledGadget> {
    let d = build_clause_gadget();
    let mut b = Builder::default();
    let mut ports = BTreeMap::new();
    let mut clause_maps = Vec::with_capacity(inst.clauses.len());
    for c in 0..inst.clauses.len() {
        let map = b.add(&d.graph, &BTreeMap::new());
        for (name, &v) in &d.ports {
            ports.insert(format!("c{c}.{name}"), map[v]);
        }
        clause_maps.push(map);
    }
    for var in 1..=inst.num_vars {
        let occ = inst.occurrence_order(var);
        if occ.is_empty() {
            continue;
        }
        let polarity: Vec<bool> = occ.iter().map(|&c| inst.literal(c, var) > 0).collect();
        let x = build_variable_gadget(&polarity)?;
        let mut glue = BTreeMap::new();
        for (idx, &c) in occ.iter().enumerate() {
            let j = idx + 1;
            let pos = inst
                .clause_vars(c)
                .iter()
                .position(|&v| v == var)
                .expect("variable occurs in clause")
                + 1;
            for k in 1..=3 {
                let a = if polarity[idx] { k + 3 } else { 7 - k };
                let target = clause_maps[c][d.port(&format!("a{a}^{pos}"))];
                glue.insert(x.port(&format!("h{k}^{j}")), target);
            }
        }
        let map = b.add(&x.graph, &glue);
        for (name, &v) in &x.ports {
            ports.insert(format!("x{var}.{name}"), map[v]);
        }
    }
    Ok(LabeledGadget {
        graph: b.finish(),
        ports,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tiling::triangle_factor;
    use super::*;

    #[test]
    fn validation() {
        assert!(matches!(
            Cnf13Instance::new(3, vec![vec![1, 1, 2]]),
            Err(Error::MalformedFormula(_))
        ));
        assert!(matches!(
            Cnf13Instance::new(3, vec![vec![1, 2]]),
            Err(Error::MalformedFormula(_))
        ));
        assert!(Cnf13Instance::new(3, vec![vec![1, -2, 4]]).is_err());
    }

    #[test]
    fn dimacs() {
        let f = parse_dimacs("c hi\np cnf 4 2\n1 2 3 0\n-1 2\n 4 0\n").unwrap();
        assert_eq!(f.clauses(), &[[1, 2, 3], [-1, 2, 4]]);
        assert!(matches!(parse_dimacs("p cnf 3 1\n1 x 3 0\n"), Err(Error::Parse { .. })));
        assert!(parse_dimacs("p cnf 3 2\n1 2 3 0\n").is_err());
    }

    #[test]
    fn one_in_three() {
        let f = Cnf13Instance::new(3, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(solve_1in3(&f).unwrap(), Some(vec![true, false, false]));
        let f = Cnf13Instance::new(4, vec![vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
        assert_eq!(solve_1in3(&f).unwrap(), Some(vec![true, false, false, false]));
        let f = Cnf13Instance::new(3, vec![vec![1, 2, 3], vec![-1, -2, -3]]).unwrap();
        let brute = (0..8u32).any(|m| f.is_exactly_one(&[m & 1 != 0, m & 2 != 0, m & 4 != 0]));
        assert_eq!(solve_1in3(&f).unwrap().is_some(), brute);
        assert!(matches!(solve_1in3(&Cnf13Instance::new(25, vec![]).unwrap()), Err(Error::TooLarge(_))));
    }

    #[test]
    fn single_clause_reduction_has_factor() {
        let f = Cnf13Instance::new(3, vec![vec![1, 2, 3]]).unwrap();
        let g = reduce_formula(&f).unwrap();
        assert_eq!(g.graph.vertex_count(), 15 + 3 * 27);
        assert!(triangle_factor(&g.graph).is_some());
    }

    #[test]
    fn rotation_is_checked() {
        let f = Cnf13Instance::new(3, vec![vec![1, 2, 3]]).unwrap();
        let good = Rotation {
            var_order: vec![vec![0], vec![0], vec![0]],
            clause_order: vec![vec![3, 1, 2]],
        };
        let rotated = f.clone().with_rotation(good).unwrap();
        assert!(triangle_factor(&reduce_formula(&rotated).unwrap().graph).is_some());
        let bad = Rotation {
            var_order: vec![vec![0], vec![0], vec![0]],
            clause_order: vec![vec![1, 1, 2]],
        };
        assert!(f.with_rotation(bad).is_err());
    }
}
