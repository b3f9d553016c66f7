//! Fraction-free elimination for `A k = c` over ℚ[symbols], with
//! back-substitution in the fraction field.
//!
//! Pivots are chosen by simplicity (constants first, then low degree and few
//! terms), so rank is decided over the function field: a pivot that is a
//! nonzero polynomial counts as nonzero.

use std::collections::HashSet;

use super::poly::ParamPoly;
use super::rat::ParamRat;
use super::CoeffError;

/// Dense rectangular matrix of polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ParamPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self, CoeffError> {
        if rows == 0 || cols == 0 {
            return Err(CoeffError::Shape(format!("{rows}x{cols} matrix")));
        }
        Ok(PolyMatrix {
            rows,
            cols,
            data: vec![ParamPoly::zero(); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self, CoeffError> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, ParamPoly::one());
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<ParamPoly>>) -> Result<Self, CoeffError> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(CoeffError::Shape("ragged rows".into()));
        }
        let mut m = Self::zeros(rows.len(), cols)?;
        m.data = rows.into_iter().flatten().collect();
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ParamPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ParamPoly) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ParamPoly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(&ParamPoly) -> ParamPoly) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Unique,
    Underdetermined,
    Inconsistent,
}

/// Result of [`solve_linear`]. For an underdetermined system `solution` is
/// the particular solution with every free unknown set to zero.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub status: SolveStatus,
    pub rank: usize,
    pub nullity: usize,
    pub solution: Vec<ParamRat>,
    pub free_columns: Vec<usize>,
    pub nullspace: Vec<Vec<ParamRat>>,
    /// Original row indices whose reduced form reads `0 = nonzero`.
    pub inconsistent_rows: Vec<usize>,
}

fn pivot_cost(p: &ParamPoly) -> (u8, u32, usize) {
    (u8::from(!p.is_constant()), p.total_degree(), p.len())
}

/// Scales a row so its first nonzero entry has leading coefficient one.
fn normalize_row(row: &mut [ParamPoly]) {
    if let Some(first) = row.iter().find(|p| !p.is_zero()) {
        let lc = first.leading_coeff();
        if lc != num_traits::One::one() {
            let inv = lc.recip();
            for p in row.iter_mut() {
                *p = p.scale(&inv);
            }
        }
    }
}

/// Solves `a · x = c`.
pub fn solve_linear(a: &PolyMatrix, c: &[ParamPoly]) -> Result<LinearSolution, CoeffError> {
    if c.len() != a.rows() {
        return Err(CoeffError::Shape(format!(
            "{} equations but {} right-hand sides",
            a.rows(),
            c.len()
        )));
    }
    let n = a.cols();
    let rhs = n;

    // Augmented rows, content-normalized and de-duplicated.
    let mut seen = HashSet::new();
    let mut m: Vec<Vec<ParamPoly>> = Vec::new();
    let mut origin: Vec<usize> = Vec::new();
    for (i, ci) in c.iter().enumerate() {
        let mut row: Vec<ParamPoly> = a.row(i).to_vec();
        row.push(ci.clone());
        if row.iter().all(ParamPoly::is_zero) {
            continue;
        }
        normalize_row(&mut row);
        if seen.insert(row.clone()) {
            m.push(row);
            origin.push(i);
        }
    }

    let mut active: Vec<bool> = vec![true; n];
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = ParamPoly::one();
    let mut r = 0;
    while r < m.len() {
        let mut best: Option<((u8, u32, usize), usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(r) {
            for j in (0..n).filter(|&j| active[j]) {
                if row[j].is_zero() {
                    continue;
                }
                let cost = pivot_cost(&row[j]);
                if best.as_ref().is_none_or(|b| cost < b.0) {
                    best = Some((cost, i, j));
                }
            }
        }
        let Some((_, pi, pc)) = best else { break };
        m.swap(r, pi);
        origin.swap(r, pi);
        active[pc] = false;
        pivots.push(pc);
        let piv = m[r][pc].clone();
        let (head, tail) = m.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let factor = std::mem::take(&mut row[pc]);
            for j in (0..=rhs).filter(|&j| j == rhs || active[j]) {
                let mut v = &piv * &row[j];
                if !factor.is_zero() && !prow[j].is_zero() {
                    v -= &(&factor * &prow[j]);
                }
                row[j] = if prev.is_one() {
                    v
                } else {
                    v.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
        }
        prev = piv;
        r += 1;
    }
    let rank = pivots.len();

    let inconsistent_rows: Vec<usize> = (rank..m.len())
        .filter(|&i| !m[i][rhs].is_zero())
        .map(|i| origin[i])
        .collect();
    let free_columns: Vec<usize> = (0..n).filter(|&j| active[j]).collect();
    let nullity = free_columns.len();
    if !inconsistent_rows.is_empty() {
        return Ok(LinearSolution {
            status: SolveStatus::Inconsistent,
            rank,
            nullity,
            solution: Vec::new(),
            free_columns,
            nullspace: Vec::new(),
            inconsistent_rows,
        });
    }

    let back = |rhs_of: &dyn Fn(usize) -> ParamRat, fixed: &[(usize, ParamRat)]| -> Vec<ParamRat> {
        let mut x = vec![ParamRat::zero(); n];
        for (j, v) in fixed {
            x[*j] = v.clone();
        }
        for s in (0..rank).rev() {
            let pc = pivots[s];
            let mut acc = rhs_of(s);
            for (j, xj) in x.iter().enumerate() {
                if j != pc && !xj.is_zero() && !m[s][j].is_zero() {
                    acc = &acc - &xj.mul_poly(&m[s][j]);
                }
            }
            x[pc] = acc
                .checked_div(&ParamRat::from_poly(m[s][pc].clone()))
                .expect("pivot is nonzero");
        }
        x
    };

    let solution = back(&|s| ParamRat::from_poly(m[s][rhs].clone()), &[]);
    let nullspace = free_columns
        .iter()
        .map(|&f| back(&|_| ParamRat::zero(), &[(f, ParamRat::one())]))
        .collect();

    let out = LinearSolution {
        status: if nullity == 0 {
            SolveStatus::Unique
        } else {
            SolveStatus::Underdetermined
        },
        rank,
        nullity,
        solution,
        free_columns,
        nullspace,
        inconsistent_rows,
    };
    debug_assert!(residual(a, c, &out.solution).iter().all(ParamRat::is_zero));
    Ok(out)
}

/// `a · x − c`, entry by entry.
pub fn residual(a: &PolyMatrix, c: &[ParamPoly], x: &[ParamRat]) -> Vec<ParamRat> {
    (0..a.rows())
        .map(|i| {
            let mut acc = ParamRat::from_poly(-&c[i]);
            for (j, xj) in x.iter().enumerate() {
                let aij = a.get(i, j);
                if !aij.is_zero() && !xj.is_zero() {
                    acc = &acc + &xj.mul_poly(aij);
                }
            }
            acc
        })
        .collect()
}

/// True when `a · x = c` holds exactly.
pub fn verify_solution(a: &PolyMatrix, c: &[ParamPoly], x: &[ParamRat]) -> bool {
    x.len() == a.cols() && residual(a, c, x).iter().all(|r| r.numer().is_zero())
}

impl LinearSolution {
    pub fn is_unique(&self) -> bool {
        self.status == SolveStatus::Unique
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::symbol::Symbol;

    fn v(s: Symbol) -> ParamPoly {
        ParamPoly::var(s)
    }

    #[test]
    fn identity_system() {
        let a = PolyMatrix::identity(2).unwrap();
        let c = vec![v(Symbol::A), v(Symbol::H)];
        let s = solve_linear(&a, &c).unwrap();
        assert_eq!(s.status, SolveStatus::Unique);
        assert_eq!(s.nullity, 0);
        assert_eq!(
            s.solution,
            vec![ParamRat::var(Symbol::A), ParamRat::var(Symbol::H)]
        );
    }

    #[test]
    fn rank_deficient_system() {
        let a = PolyMatrix::from_rows(vec![
            vec![v(Symbol::H), ParamPoly::zero()],
            vec![ParamPoly::zero(), ParamPoly::zero()],
        ])
        .unwrap();
        let c = vec![ParamPoly::one(), ParamPoly::zero()];
        let s = solve_linear(&a, &c).unwrap();
        assert_eq!(s.status, SolveStatus::Underdetermined);
        assert_eq!((s.rank, s.nullity), (1, 1));
        assert_eq!(
            s.solution[0],
            ParamRat::one()
                .checked_div(&ParamRat::var(Symbol::H))
                .unwrap()
        );
        assert_eq!(s.free_columns, vec![1]);
        assert_eq!(s.nullspace, vec![vec![ParamRat::zero(), ParamRat::one()]]);
    }

    #[test]
    fn inconsistent_is_a_status() {
        let a = PolyMatrix::from_rows(vec![
            vec![v(Symbol::A)],
            vec![v(Symbol::A).scale(&crate::coeff::poly::int(2))],
        ])
        .unwrap();
        let c = vec![ParamPoly::one(), ParamPoly::zero()];
        let s = solve_linear(&a, &c).unwrap();
        assert_eq!(s.status, SolveStatus::Inconsistent);
        assert_eq!(s.inconsistent_rows.len(), 1);
    }

    #[test]
    fn symbolic_pivots_need_exact_division() {
        // [[a, b], [c, d]] x = [1, h]
        let a = PolyMatrix::from_rows(vec![
            vec![v(Symbol::A), v(Symbol::B)],
            vec![v(Symbol::C), v(Symbol::D)],
        ])
        .unwrap();
        let c = vec![ParamPoly::one(), v(Symbol::H)];
        let s = solve_linear(&a, &c).unwrap();
        assert!(s.is_unique());
        assert!(verify_solution(&a, &c, &s.solution));
        let det = &(&v(Symbol::A) * &v(Symbol::D)) - &(&v(Symbol::B) * &v(Symbol::C));
        let x0 =
            ParamRat::normalize(&v(Symbol::D) - &(&v(Symbol::B) * &v(Symbol::H)), det).unwrap();
        assert_eq!(s.solution[0], x0);
    }

    #[test]
    fn shape_errors() {
        assert!(PolyMatrix::zeros(0, 3).is_err());
        let a = PolyMatrix::identity(2).unwrap();
        assert!(solve_linear(&a, &[ParamPoly::one()]).is_err());
    }
}
