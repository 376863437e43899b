//! Matrices of polynomials, determinants, minors and resultants.

use std::fmt;

use super::poly::{MultiPoly, Vars};
use super::ArithError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: Vars,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, vars: &Vars) -> Self {
        PolyMatrix { rows, cols, vars: vars.clone(), entries: vec![MultiPoly::zero(vars); rows * cols] }
    }

    /// Build from rows; entries are moved onto a common variable list.
    pub fn from_rows(rows: Vec<Vec<MultiPoly>>, vars: &Vars) -> Result<Self, ArithError> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        let mut m = PolyMatrix::zeros(r, c, vars);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(ArithError::Shape(format!("row {i} has {} entries, expected {c}", row.len())));
            }
            for (j, e) in row.into_iter().enumerate() {
                m.set(i, j, e.with_vars(vars)?);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: MultiPoly) {
        let v = v.with_vars(&self.vars).expect("entry over foreign variables");
        self.entries[i * self.cols + j] = v;
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(rows.len(), cols.len(), &self.vars);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.entries[a * cols.len() + b] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<MultiPoly, ArithError> {
        if self.rows != self.cols {
            return Err(ArithError::Shape(format!("{}x{} matrix has no determinant", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(MultiPoly::one(&self.vars));
        }
        let mut a: Vec<Vec<MultiPoly>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = false;
        let mut prev = MultiPoly::one(&self.vars);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                // pick the sparsest nonzero pivot below
                let Some(p) = (k + 1..n)
                    .filter(|&i| !a[i][k].is_zero())
                    .min_by_key(|&i| a[i][k].nterms())
                else {
                    return Ok(MultiPoly::zero(&self.vars));
                };
                a.swap(k, p);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = MultiPoly::zero(&self.vars);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign { -d } else { d })
    }

    /// All k×k minors in lexicographic (rows, cols) order, zeros dropped.
    pub fn minors(&self, k: usize) -> Vec<MultiPoly> {
        let mut out = Vec::new();
        if k == 0 || k > self.rows || k > self.cols {
            return out;
        }
        for rs in combinations(self.rows, k) {
            for cs in combinations(self.cols, k) {
                let d = self.submatrix(&rs, &cs).det().unwrap();
                if !d.is_zero() {
                    out.push(d);
                }
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> PolyMatrix {
        let entries: Vec<MultiPoly> = self.entries.iter().map(f).collect();
        let vars = entries.first().map(|e| e.vars().clone()).unwrap_or_else(|| self.vars.clone());
        let entries = entries.into_iter().map(|e| e.with_vars(&vars).unwrap()).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, vars, entries }
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Resultant of `f` and `g` eliminating `var`, via the Sylvester determinant.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, var: &str) -> Result<MultiPoly, ArithError> {
    let (f, g) = f.align(g);
    let k = f
        .var_index(var)
        .ok_or_else(|| ArithError::UnknownVariable(var.to_string()))?;
    let m = f.degree_in(k).unwrap_or(0) as usize;
    let n = g.degree_in(k).unwrap_or(0) as usize;
    if f.is_zero() || g.is_zero() || m == 0 || n == 0 {
        return Err(ArithError::Degenerate(format!("resultant needs positive degree in {var}")));
    }
    let fc: Vec<MultiPoly> = (0..=m).rev().map(|e| f.coeff_in(k, e as u32)).collect();
    let gc: Vec<MultiPoly> = (0..=n).rev().map(|e| g.coeff_in(k, e as u32)).collect();
    let size = m + n;
    let mut s = PolyMatrix::zeros(size, size, f.vars());
    for r in 0..n {
        for (j, c) in fc.iter().enumerate() {
            s.set(r, r + j, c.clone());
        }
    }
    for r in 0..m {
        for (j, c) in gc.iter().enumerate() {
            s.set(n + r, r + j, c.clone());
        }
    }
    s.det()
}
