//! Latin squares built from orthogonal orthomorphisms, and a checker for them that works on
//! the symbol arrays alone.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::orthomorphism::PermutationMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare {
    order: usize,
    rows: Vec<Vec<u32>>,
}

impl LatinSquare {
    /// Wraps a square array of symbols, rejecting anything that is not Latin.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        if !is_latin(&rows) {
            return Err(Error::InvalidParameter(
                "array is not a Latin square".into(),
            ));
        }
        Ok(LatinSquare {
            order: rows.len(),
            rows,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// One row per line, symbols separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|s| {
                        s.parse::<u32>()
                            .map_err(|_| Error::MalformedRecord(format!("bad symbol {s:?}")))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }
}

/// Every row and column is a permutation of `0..n`.
pub fn is_latin(rows: &[Vec<u32>]) -> bool {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return false;
    }
    let perm = |it: &mut dyn Iterator<Item = u32>| {
        let mut seen = vec![false; n];
        for s in it {
            if s as usize >= n || std::mem::replace(&mut seen[s as usize], true) {
                return false;
            }
        }
        true
    };
    (0..n).all(|i| perm(&mut rows[i].iter().copied()))
        && (0..n).all(|j| perm(&mut rows.iter().map(|r| r[j])))
}

/// Superimposing the two squares yields every ordered pair exactly once.
pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> bool {
    let n = a.order;
    if b.order != n {
        return false;
    }
    let mut seen = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            let k = a.rows[i][j] as usize * n + b.rows[i][j] as usize;
            if std::mem::replace(&mut seen[k], true) {
                return false;
            }
        }
    }
    true
}

pub fn mutually_orthogonal(squares: &[LatinSquare]) -> bool {
    squares.iter().all(|s| is_latin(&s.rows))
        && (0..squares.len())
            .all(|i| (i + 1..squares.len()).all(|j| are_orthogonal(&squares[i], &squares[j])))
}

/// `L_0(x, y) = x + y` and `L_i(x, y) = theta_i(x) + y`, rows indexed by `x` and columns by
/// `y` in encoding order. The result is checked before it is returned.
pub fn mols_from_orthomorphisms(
    field: &FieldCtx,
    maps: &[PermutationMap],
) -> Result<Vec<LatinSquare>> {
    let square = |f: &dyn Fn(Elem) -> Elem| -> Vec<Vec<u32>> {
        field
            .elements()
            .map(|x| field.elements().map(|y| field.add(f(x), y).enc()).collect())
            .collect()
    };
    let mut out = vec![LatinSquare {
        order: field.order() as usize,
        rows: square(&|x| x),
    }];
    for m in maps {
        if m.table().len() != field.order() as usize {
            return Err(Error::LengthMismatch {
                got: m.table().len(),
                q: field.order(),
            });
        }
        out.push(LatinSquare {
            order: field.order() as usize,
            rows: square(&|x| m.get(x)),
        });
    }
    if !mutually_orthogonal(&out) {
        return Err(Error::NotOrthogonal);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthomorphism::CyclotomicMap;

    #[test]
    fn addition_table_alone() {
        let f = FieldCtx::new(9).unwrap();
        let sq = mols_from_orthomorphisms(&f, &[]).unwrap();
        assert_eq!(sq.len(), 1);
        assert!(is_latin(sq[0].rows()));
    }

    #[test]
    fn two_mols_of_order_5() {
        let f = FieldCtx::new(5).unwrap();
        let t = CyclotomicMap::linear(Elem(2)).to_table(&f);
        let sq = mols_from_orthomorphisms(&f, &[t]).unwrap();
        assert_eq!(sq.len(), 2);
        assert!(are_orthogonal(&sq[0], &sq[1]));
        let back = LatinSquare::from_text(&sq[1].to_text()).unwrap();
        assert_eq!(back, sq[1]);
    }

    #[test]
    fn non_orthomorphism_rejected() {
        let f = FieldCtx::new(5).unwrap();
        let t = CyclotomicMap::linear(Elem(1)).to_table(&f);
        assert_eq!(
            mols_from_orthomorphisms(&f, &[t]),
            Err(Error::NotOrthogonal)
        );
    }

    #[test]
    fn checker_rejects_broken_squares() {
        assert!(!is_latin(&[vec![0, 1], vec![0, 1]]));
        assert!(!is_latin(&[vec![0, 2], vec![2, 0]]));
        assert!(is_latin(&[vec![0, 1], vec![1, 0]]));
        let a = LatinSquare::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(!are_orthogonal(&a, &a));
    }
}
