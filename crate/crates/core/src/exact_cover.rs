//! Exact cover by backtracking (Algorithm X, smallest column first).

use crate::error::{Error, Result};

/// Finds rows whose column sets partition `0..n_cols`. Rows are tried in
/// index order, so the first solution is deterministic. `budget` bounds the
/// number of search nodes; running out is a resource error.
pub fn exact_cover(n_cols: usize, rows: &[Vec<usize>], budget: u64) -> Result<Option<Vec<usize>>> {
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); n_cols];
    for (r, cols) in rows.iter().enumerate() {
        for &c in cols {
            if c >= n_cols {
                return Err(Error::Parameter(format!("column {c} out of range")));
            }
            col_rows[c].push(r);
        }
    }
    let mut state = State {
        rows,
        col_rows: &col_rows,
        covered: vec![false; n_cols],
        blocked: vec![0u32; rows.len()],
        chosen: Vec::new(),
        budget,
    };
    state.search()
}

struct State<'a> {
    rows: &'a [Vec<usize>],
    col_rows: &'a [Vec<usize>],
    covered: Vec<bool>,
    /// Number of covered columns each row touches; 0 means still usable.
    blocked: Vec<u32>,
    chosen: Vec<usize>,
    budget: u64,
}

impl State<'_> {
    fn search(&mut self) -> Result<Option<Vec<usize>>> {
        if self.budget == 0 {
            return Err(Error::Resource("exact cover search budget exhausted".into()));
        }
        self.budget -= 1;
        let mut best: Option<(usize, usize)> = None;
        for c in 0..self.covered.len() {
            if self.covered[c] {
                continue;
            }
            let n = self.col_rows[c].iter().filter(|&&r| self.blocked[r] == 0).count();
            if best.is_none_or(|(_, bn)| n < bn) {
                best = Some((c, n));
                if n == 0 {
                    break;
                }
            }
        }
        let Some((col, n)) = best else {
            return Ok(Some(self.chosen.clone()));
        };
        if n == 0 {
            return Ok(None);
        }
        let cands: Vec<usize> = self.col_rows[col]
            .iter()
            .copied()
            .filter(|&r| self.blocked[r] == 0)
            .collect();
        for r in cands {
            self.select(r, true);
            self.chosen.push(r);
            let res = self.search();
            self.chosen.pop();
            self.select(r, false);
            if let Some(sol) = res? {
                return Ok(Some(sol));
            }
        }
        Ok(None)
    }

    fn select(&mut self, r: usize, on: bool) {
        for &c in &self.rows[r] {
            self.covered[c] = on;
            for &other in &self.col_rows[c] {
                if on {
                    self.blocked[other] += 1;
                } else {
                    self.blocked[other] -= 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knuth_example() {
        let rows = vec![
            vec![2, 4, 5],
            vec![0, 3, 6],
            vec![1, 2, 5],
            vec![0, 3],
            vec![1, 6],
            vec![3, 4, 6],
        ];
        let mut sol = exact_cover(7, &rows, 1000).unwrap().unwrap();
        sol.sort_unstable();
        assert_eq!(sol, vec![0, 3, 4]);
    }

    #[test]
    fn no_solution() {
        let rows = vec![vec![0, 1], vec![1, 2]];
        assert_eq!(exact_cover(3, &rows, 1000).unwrap(), None);
    }
}
