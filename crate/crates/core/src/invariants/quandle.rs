//! Finite multi-quandles given by operation tables.

use std::fmt;

use thiserror::Error;

/// A binary operation table on `0..size`, with the index of its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuandleOp {
    pub name: String,
    /// `table[x * size + y]` is `x ▷ y`.
    pub table: Vec<usize>,
    pub inverse: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiQuandle {
    name: String,
    size: usize,
    ops: Vec<QuandleOp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QuandleError {
    #[error("quandle must have at least one element")]
    Empty,
    #[error("quandle must have at least one operation")]
    NoOps,
    #[error("operation `{op}` has {found} entries, expected {expected}")]
    TableShape { op: String, found: usize, expected: usize },
    #[error("operation `{op}` has entry {value} outside 0..{size}")]
    EntryRange { op: String, value: usize, size: usize },
    #[error("operation `{op}` names unknown inverse `{inverse}`")]
    UnknownInverse { op: String, inverse: String },
    #[error("duplicate operation name `{0}`")]
    DuplicateOp(String),
}

/// A failed axiom instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuandleViolation {
    Idempotence {
        op: String,
        x: usize,
    },
    Reversibility {
        op: String,
        y: usize,
    },
    Distributivity {
        op1: String,
        op2: String,
        x: usize,
        y: usize,
        z: usize,
    },
    InverseMismatch {
        op: String,
        x: usize,
        y: usize,
    },
    InverseNotMutual {
        op: String,
    },
}

impl fmt::Display for QuandleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuandleViolation::Idempotence { op, x } => {
                write!(f, "idempotence fails for `{op}` at x={x}")
            }
            QuandleViolation::Reversibility { op, y } => {
                write!(f, "right translation by y={y} under `{op}` is not a bijection")
            }
            QuandleViolation::Distributivity { op1, op2, x, y, z } => write!(
                f,
                "distributivity fails for `{op1}` over `{op2}` at (x,y,z)=({x},{y},{z})"
            ),
            QuandleViolation::InverseMismatch { op, x, y } => {
                write!(f, "declared inverse of `{op}` does not undo it at (x,y)=({x},{y})")
            }
            QuandleViolation::InverseNotMutual { op } => {
                write!(f, "inverse of the inverse of `{op}` is not `{op}`")
            }
        }
    }
}

impl MultiQuandle {
    /// Builds a quandle from `(name, table rows, inverse name)` triples.
    /// Only the shape is checked here; use [`validate_quandle`] for axioms.
    pub fn new(
        name: impl Into<String>,
        size: usize,
        ops: Vec<(String, Vec<Vec<usize>>, String)>,
    ) -> Result<Self, QuandleError> {
        if size == 0 {
            return Err(QuandleError::Empty);
        }
        if ops.is_empty() {
            return Err(QuandleError::NoOps);
        }
        let names: Vec<&String> = ops.iter().map(|(n, _, _)| n).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(QuandleError::DuplicateOp((*n).clone()));
            }
        }
        let mut built = Vec::with_capacity(ops.len());
        for (op_name, rows, inverse) in &ops {
            let found = rows.iter().map(Vec::len).sum::<usize>();
            if rows.len() != size || rows.iter().any(|r| r.len() != size) {
                return Err(QuandleError::TableShape {
                    op: op_name.clone(),
                    found,
                    expected: size * size,
                });
            }
            let table: Vec<usize> = rows.iter().flatten().copied().collect();
            if let Some(&value) = table.iter().find(|&&v| v >= size) {
                return Err(QuandleError::EntryRange {
                    op: op_name.clone(),
                    value,
                    size,
                });
            }
            let inv = names
                .iter()
                .position(|n| *n == inverse)
                .ok_or_else(|| QuandleError::UnknownInverse {
                    op: op_name.clone(),
                    inverse: inverse.clone(),
                })?;
            built.push(QuandleOp {
                name: op_name.clone(),
                table,
                inverse: inv,
            });
        }
        Ok(MultiQuandle {
            name: name.into(),
            size,
            ops: built,
        })
    }

    /// Single self-inverse operation from a closure.
    fn involutory(name: String, size: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let table = (0..size * size).map(|i| f(i / size, i % size)).collect();
        MultiQuandle {
            name,
            size,
            ops: vec![QuandleOp {
                name: "op".into(),
                table,
                inverse: 0,
            }],
        }
    }

    /// `x ▷ y = 2y − x mod n`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0);
        Self::involutory(format!("dihedral({n})"), n, |x, y| (2 * y + n - x % n) % n)
    }

    /// `x ▷ y = x`.
    pub fn trivial(n: usize) -> Self {
        assert!(n > 0);
        Self::involutory(format!("trivial({n})"), n, |x, _| x)
    }

    /// Alexander quandle on Z/n: `x ▷ y = t·x + (1 − t)·y`, `t` a unit mod n.
    pub fn alexander(n: usize, t: usize) -> Option<Self> {
        if n == 0 {
            return None;
        }
        let t = t % n;
        let t_inv = (0..n).find(|s| (s * t) % n == 1 % n)?;
        let op = |t: usize| {
            (0..n * n)
                .map(|i| {
                    let (x, y) = (i / n, i % n);
                    (t * x + (n + 1 - t) % n * y) % n
                })
                .collect::<Vec<_>>()
        };
        let forward = op(t);
        let backward = op(t_inv);
        let ops = if forward == backward {
            vec![QuandleOp {
                name: "op".into(),
                table: forward,
                inverse: 0,
            }]
        } else {
            vec![
                QuandleOp {
                    name: "op".into(),
                    table: forward,
                    inverse: 1,
                },
                QuandleOp {
                    name: "inv".into(),
                    table: backward,
                    inverse: 0,
                },
            ]
        };
        Some(MultiQuandle {
            name: format!("alexander({n},{t})"),
            size: n,
            ops,
        })
    }

    /// The four-element quandle `x ▷ y = ω·x + ω²·y` over GF(4).
    /// Its operation is not self-inverse.
    pub fn tetrahedral() -> Self {
        // GF(4) = {0, 1, w, w^2} encoded as 0, 1, 2, 3 with w^2 = w + 1.
        fn mul(a: usize, b: usize) -> usize {
            if a == 0 || b == 0 {
                return 0;
            }
            let log = |v: usize| [0, 0, 1, 2][v];
            let exp = [1, 2, 3];
            exp[(log(a) + log(b)) % 3]
        }
        let table = |a: usize, b: usize| (0..16).map(|i| mul(a, i / 4) ^ mul(b, i % 4)).collect::<Vec<_>>();
        MultiQuandle {
            name: "tetrahedral".into(),
            size: 4,
            ops: vec![
                QuandleOp {
                    name: "op".into(),
                    table: table(2, 3),
                    inverse: 1,
                },
                QuandleOp {
                    name: "inv".into(),
                    table: table(3, 2),
                    inverse: 0,
                },
            ],
        }
    }

    /// Parses `dihedral:N`, `trivial:N`, `alexander:N:T` or `tetrahedral`.
    pub fn builtin(spec: &str) -> Option<Self> {
        if spec == "tetrahedral" {
            return Some(Self::tetrahedral());
        }
        if let Some(rest) = spec.strip_prefix("alexander:") {
            let (n, t) = rest.split_once(':')?;
            let n: usize = n.parse().ok().filter(|&n| n > 1 && n <= 256)?;
            return Self::alexander(n, t.parse().ok()?);
        }
        let (kind, n) = spec.split_once(':')?;
        let n: usize = n.parse().ok().filter(|&n| n > 0 && n <= 256)?;
        match kind {
            "dihedral" => Some(Self::dihedral(n)),
            "trivial" => Some(Self::trivial(n)),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ops(&self) -> &[QuandleOp] {
        &self.ops
    }

    pub fn op_count(&self) -> usize {
        self.ops.len()
    }

    /// Operations an agent may be assigned: one per inverse pair. The
    /// partner of an assigned operation is used for negative interactions.
    pub fn assignable_ops(&self) -> Vec<usize> {
        (0..self.ops.len()).filter(|&i| i <= self.ops[i].inverse).collect()
    }

    #[inline]
    pub fn apply(&self, op: usize, x: usize, y: usize) -> usize {
        self.ops[op].table[x * self.size + y]
    }

    /// `x ▷ y` for a positive sign, `x ◁ y` (the registered inverse) otherwise.
    #[inline]
    pub fn apply_signed(&self, op: usize, positive: bool, x: usize, y: usize) -> usize {
        let o = if positive { op } else { self.ops[op].inverse };
        self.apply(o, x, y)
    }

    /// Returns a copy with one table entry replaced.
    pub fn with_entry(&self, op: usize, x: usize, y: usize, value: usize) -> Self {
        let mut q = self.clone();
        q.ops[op].table[x * self.size + y] = value;
        q.name = format!("{}*", self.name);
        q
    }
}

impl fmt::Display for MultiQuandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Exhaustive axiom check.
pub fn validate_quandle(q: &MultiQuandle) -> Vec<QuandleViolation> {
    let n = q.size;
    let mut out = Vec::new();
    for (i, op) in q.ops.iter().enumerate() {
        for x in 0..n {
            if q.apply(i, x, x) != x {
                out.push(QuandleViolation::Idempotence { op: op.name.clone(), x });
            }
        }
        for y in 0..n {
            let mut seen = vec![false; n];
            for x in 0..n {
                seen[q.apply(i, x, y)] = true;
            }
            if seen.iter().any(|s| !s) {
                out.push(QuandleViolation::Reversibility { op: op.name.clone(), y });
            }
        }
        if q.ops[op.inverse].inverse != i {
            out.push(QuandleViolation::InverseNotMutual { op: op.name.clone() });
        }
        'inv: for x in 0..n {
            for y in 0..n {
                if q.apply(op.inverse, q.apply(i, x, y), y) != x {
                    out.push(QuandleViolation::InverseMismatch {
                        op: op.name.clone(),
                        x,
                        y,
                    });
                    break 'inv;
                }
            }
        }
    }
    for a in 0..q.ops.len() {
        for b in 0..q.ops.len() {
            'pair: for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let lhs = q.apply(b, q.apply(a, x, y), z);
                        let rhs = q.apply(a, q.apply(b, x, z), q.apply(b, y, z));
                        if lhs != rhs {
                            out.push(QuandleViolation::Distributivity {
                                op1: q.ops[a].name.clone(),
                                op2: q.ops[b].name.clone(),
                                x,
                                y,
                                z,
                            });
                            break 'pair;
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for n in 1..10 {
            assert!(validate_quandle(&MultiQuandle::dihedral(n)).is_empty(), "{n}");
            assert!(validate_quandle(&MultiQuandle::trivial(n)).is_empty(), "{n}");
        }
        assert!(validate_quandle(&MultiQuandle::tetrahedral()).is_empty());
        let a = MultiQuandle::alexander(5, 2).unwrap();
        assert_eq!(a.op_count(), 2);
        assert_eq!(a.assignable_ops(), vec![0]);
        assert!(validate_quandle(&a).is_empty());
    }

    #[test]
    fn corrupted_dihedral_fails() {
        let q = MultiQuandle::dihedral(4);
        let bad = q.with_entry(0, 1, 2, (q.apply(0, 1, 2) + 1) % 4);
        assert!(!validate_quandle(&bad).is_empty());
    }

    #[test]
    fn tetrahedral_inverse_is_distinct() {
        let q = MultiQuandle::tetrahedral();
        assert_ne!(q.ops()[0].table, q.ops()[1].table);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(q.apply_signed(0, false, q.apply_signed(0, true, x, y), y), x);
            }
        }
    }

    #[test]
    fn shape_errors() {
        let bad = MultiQuandle::new("q", 2, vec![("a".into(), vec![vec![0, 1]], "a".into())]);
        assert!(matches!(bad, Err(QuandleError::TableShape { .. })));
        let bad = MultiQuandle::new("q", 1, vec![("a".into(), vec![vec![0]], "b".into())]);
        assert!(matches!(bad, Err(QuandleError::UnknownInverse { .. })));
    }

    #[test]
    fn builtin_specs() {
        assert_eq!(MultiQuandle::builtin("dihedral:5").unwrap().size(), 5);
        assert_eq!(MultiQuandle::builtin("trivial:3").unwrap().size(), 3);
        assert!(MultiQuandle::builtin("dihedral:0").is_none());
        assert!(MultiQuandle::builtin("cyclic:3").is_none());
        assert_eq!(MultiQuandle::builtin("alexander:5:2").unwrap().ops().len(), 2);
        assert!(MultiQuandle::builtin("alexander:4:2").is_none());
    }
}
