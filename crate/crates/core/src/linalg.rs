//! Dense integer matrices, Smith normal form with transforms, and homology
//! of chain complexes over ℤ or ℤ/p.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "matrix entry count");
        Matrix {
            rows,
            cols,
            data: entries.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: i64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn pow(&self, n: u64) -> Matrix {
        (0..n).fold(Matrix::identity(self.rows), |acc, _| acc.mul(self))
    }

    /// Reduces row `r` modulo `orders[r]` (0 leaves the row alone).
    pub fn reduce_rows(&self, orders: &[u64]) -> Matrix {
        let mut out = self.clone();
        for (r, &n) in orders.iter().enumerate() {
            if n > 0 {
                for c in 0..self.cols {
                    let v = out.get(r, c).rem_euclid(n as i64);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Block diagonal sum.
    pub fn direct_sum(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c));
            }
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        self.transpose().select_rows(cols).transpose()
    }
}

/// A finitely generated abelian group `⊕ ℤ/n_i`, with `n_i = 0` meaning ℤ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AbGroup {
    pub factors: Vec<u64>,
}

impl AbGroup {
    pub fn zero() -> Self {
        AbGroup { factors: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        AbGroup {
            factors: vec![0; rank],
        }
    }

    pub fn cyclic(n: u64) -> Self {
        AbGroup { factors: vec![n] }
    }

    pub fn num_generators(&self) -> usize {
        self.factors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|&&n| n == 0).count()
    }

    pub fn torsion(&self) -> Vec<u64> {
        let mut t: Vec<u64> = self.factors.iter().copied().filter(|&n| n > 0).collect();
        t.sort_unstable();
        t
    }

    pub fn direct_sum(parts: &[AbGroup]) -> AbGroup {
        AbGroup {
            factors: parts.iter().flat_map(|p| p.factors.iter().copied()).collect(),
        }
    }

    /// Isomorphism invariant: free rank plus sorted torsion orders.
    pub fn invariants(&self) -> (usize, Vec<u64>) {
        (self.rank(), self.torsion())
    }

    pub fn reduce(&self, v: &mut [i64]) {
        for (x, &n) in v.iter_mut().zip(&self.factors) {
            if n > 0 {
                *x = x.rem_euclid(n as i64);
            }
        }
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        let r = self.rank();
        if r == 1 {
            parts.push("Z".to_string());
        } else if r > 1 {
            parts.push(format!("Z^{r}"));
        }
        let t = self.torsion();
        let mut i = 0;
        while i < t.len() {
            let j = t[i..].iter().take_while(|&&x| x == t[i]).count();
            if j == 1 {
                parts.push(format!("Z/{}", t[i]));
            } else {
                parts.push(format!("(Z/{})^{j}", t[i]));
            }
            i += j;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Smith normal form `U·A·V = D` together with `U⁻¹` and `V⁻¹`.
///
/// Over ℤ/p (`modulus = Some(p)`, p prime) every nonzero pivot is scaled to 1.
#[derive(Debug, Clone)]
pub struct Snf {
    pub diag: Vec<i64>,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    pub modulus: Option<i64>,
}

struct SnfWork {
    a: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    u_inv: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
    v_inv: Vec<Vec<i128>>,
    modulus: Option<i128>,
}

fn ident(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i128).collect())
        .collect()
}

impl SnfWork {
    fn norm(&self, x: i128) -> i128 {
        match self.modulus {
            Some(p) => x.rem_euclid(p),
            None => x,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.u_inv {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// row_i += c·row_j
    fn add_row(&mut self, i: usize, j: usize, c: i128) {
        if c == 0 {
            return;
        }
        for k in 0..self.a[0].len() {
            let x = self.a[i][k] + c * self.a[j][k];
            self.a[i][k] = self.norm(x);
        }
        for k in 0..self.u[0].len() {
            let x = self.u[i][k] + c * self.u[j][k];
            self.u[i][k] = self.norm(x);
        }
        for row in &mut self.u_inv {
            let x = row[j] - c * row[i];
            row[j] = match self.modulus {
                Some(p) => x.rem_euclid(p),
                None => x,
            };
        }
    }

    /// col_j += c·col_i
    fn add_col(&mut self, j: usize, i: usize, c: i128) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        let norm = |x: i128| match m {
            Some(p) => x.rem_euclid(p),
            None => x,
        };
        for row in &mut self.a {
            row[j] = norm(row[j] + c * row[i]);
        }
        for row in &mut self.v {
            row[j] = norm(row[j] + c * row[i]);
        }
        for k in 0..self.v_inv[0].len() {
            let x = self.v_inv[i][k] - c * self.v_inv[j][k];
            self.v_inv[i][k] = norm(x);
        }
    }

    /// Multiplies row i by a unit `c` whose inverse is `c_inv`.
    fn scale_row(&mut self, i: usize, c: i128, c_inv: i128) {
        let m = self.modulus;
        let norm = |x: i128| match m {
            Some(p) => x.rem_euclid(p),
            None => x,
        };
        for x in &mut self.a[i] {
            *x = norm(*x * c);
        }
        for x in &mut self.u[i] {
            *x = norm(*x * c);
        }
        for row in &mut self.u_inv {
            row[i] = norm(row[i] * c_inv);
        }
    }
}

fn mod_inverse(a: i128, p: i128) -> i128 {
    let (mut t, mut new_t, mut r, mut new_r) = (0i128, 1i128, p, a.rem_euclid(p));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p)
}

fn to_matrix(rows: &[Vec<i128>], nrows: usize, ncols: usize) -> Result<Matrix> {
    let mut m = Matrix::zeros(nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            let v = i64::try_from(x)
                .map_err(|_| Error::Guard("integer overflow in Smith normal form".into()))?;
            m.set(r, c, v);
        }
    }
    Ok(m)
}

impl Snf {
    pub fn compute(a: &Matrix, modulus: Option<i64>) -> Result<Snf> {
        let (m, n) = (a.rows(), a.cols());
        let modulus = modulus.map(|p| p as i128);
        let mut w = SnfWork {
            a: (0..m)
                .map(|r| {
                    a.row(r)
                        .iter()
                        .map(|&x| match modulus {
                            Some(p) => (x as i128).rem_euclid(p),
                            None => x as i128,
                        })
                        .collect()
                })
                .collect(),
            u: ident(m),
            u_inv: ident(m),
            v: ident(n),
            v_inv: ident(n),
            modulus,
        };
        if m == 0 || n == 0 {
            return Ok(Snf {
                diag: vec![],
                u: Matrix::identity(m),
                u_inv: Matrix::identity(m),
                v: Matrix::identity(n),
                v_inv: Matrix::identity(n),
                modulus: modulus.map(|p| p as i64),
            });
        }
        let mut diag = Vec::new();
        for t in 0..m.min(n) {
            // smallest nonzero entry of the remaining block
            let mut best: Option<(usize, usize)> = None;
            for r in t..m {
                for c in t..n {
                    let x = w.a[r][c];
                    if x != 0 && best.is_none_or(|(br, bc)| x.abs() < w.a[br][bc].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else { break };
            w.swap_rows(t, br);
            w.swap_cols(t, bc);
            loop {
                if let Some(p) = w.modulus {
                    let piv = w.a[t][t];
                    if piv != 1 {
                        w.scale_row(t, mod_inverse(piv, p), piv);
                    }
                }
                let mut dirty = false;
                for r in t + 1..m {
                    if w.a[r][t] != 0 {
                        let q = quotient(w.a[r][t], w.a[t][t], w.modulus);
                        w.add_row(r, t, -q);
                        if w.a[r][t] != 0 {
                            dirty = true;
                        }
                    }
                }
                for c in t + 1..n {
                    if w.a[t][c] != 0 {
                        let q = quotient(w.a[t][c], w.a[t][t], w.modulus);
                        w.add_col(c, t, -q);
                        if w.a[t][c] != 0 {
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    let mut best = (t, t);
                    for r in t..m {
                        if w.a[r][t] != 0 && w.a[r][t].abs() < w.a[best.0][best.1].abs() {
                            best = (r, t);
                        }
                    }
                    for c in t..n {
                        if w.a[t][c] != 0 && w.a[t][c].abs() < w.a[best.0][best.1].abs() {
                            best = (t, c);
                        }
                    }
                    w.swap_rows(t, best.0);
                    w.swap_cols(t, best.1);
                    continue;
                }
                if w.modulus.is_none() {
                    let piv = w.a[t][t];
                    let bad = (t + 1..m).find(|&r| (t + 1..n).any(|c| w.a[r][c] % piv != 0));
                    if let Some(r) = bad {
                        w.add_row(t, r, 1);
                        continue;
                    }
                    if piv < 0 {
                        w.scale_row(t, -1, -1);
                    }
                }
                break;
            }
            diag.push(w.a[t][t] as i64);
        }
        Ok(Snf {
            diag,
            u: to_matrix(&w.u, m, m)?,
            u_inv: to_matrix(&w.u_inv, m, m)?,
            v: to_matrix(&w.v, n, n)?,
            v_inv: to_matrix(&w.v_inv, n, n)?,
            modulus: modulus.map(|p| p as i64),
        })
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

fn quotient(a: i128, b: i128, modulus: Option<i128>) -> i128 {
    match modulus {
        // pivots are 1 over a field
        Some(p) => a.rem_euclid(p),
        None => a.div_euclid(b),
    }
}

pub fn rank(a: &Matrix, modulus: Option<i64>) -> Result<usize> {
    Ok(Snf::compute(a, modulus)?.rank())
}

/// Homology of `C_{k+1} --d_in--> C_k --d_out--> C_{k-1}` at `C_k`,
/// with explicit generators and a projection from cycles to coordinates.
#[derive(Debug, Clone)]
pub struct Homology {
    pub group: AbGroup,
    /// Cycle representatives in `C_k`, one per factor of `group`.
    pub generators: Vec<Vec<i64>>,
    /// Maps a cycle (as a vector in `C_k`) to coordinates in `group`
    /// (reduce with [`AbGroup::reduce`]).
    pub projection: Matrix,
}

impl Homology {
    pub fn coordinates(&self, cycle: &[i64]) -> Vec<i64> {
        let mut c = self.projection.apply(cycle);
        self.group.reduce(&mut c);
        c
    }
}

/// `dim` is the rank of `C_k`; `d_out` is `dim(C_{k-1}) × dim` and `d_in`
/// is `dim × dim(C_{k+1})`.
pub fn homology(dim: usize, d_out: &Matrix, d_in: &Matrix, modulus: Option<i64>) -> Result<Homology> {
    assert_eq!(d_out.cols(), dim, "outgoing differential shape");
    assert_eq!(d_in.rows(), dim, "incoming differential shape");
    let s = Snf::compute(d_out, modulus)?;
    let r = s.rank();
    let cycle_idx: Vec<usize> = (r..dim).collect();
    // cycles Z = columns r.. of V; coordinates of x in Z are rows r.. of V⁻¹ x
    let z_basis = s.v.select_cols(&cycle_idx);
    let z_coords = s.v_inv.select_rows(&cycle_idx);
    let b = z_coords.mul(d_in);
    let t = Snf::compute(&b, modulus)?;
    let zdim = cycle_idx.len();
    let new_basis = z_basis.mul(&t.u_inv);
    let new_coords = t.u.mul(&z_coords);
    let mut factors = Vec::new();
    let mut keep = Vec::new();
    for i in 0..zdim {
        let d = t.diag.get(i).copied().unwrap_or(0);
        let order = match modulus {
            Some(p) => {
                if d != 0 {
                    continue;
                }
                p as u64
            }
            None => {
                if d == 1 {
                    continue;
                }
                d as u64
            }
        };
        factors.push(order);
        keep.push(i);
    }
    let generators = keep.iter().map(|&i| new_basis.column(i)).collect();
    Ok(Homology {
        group: AbGroup { factors },
        generators,
        projection: new_coords.select_rows(&keep),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &Matrix, modulus: Option<i64>) {
        let s = Snf::compute(a, modulus).unwrap();
        let d = s.u.mul(a).mul(&s.v);
        let red = |m: &Matrix| match modulus {
            Some(p) => m.reduce_rows(&vec![p as u64; m.rows()]),
            None => m.clone(),
        };
        let d = red(&d);
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                let expect = if r == c && r < s.diag.len() { s.diag[r] } else { 0 };
                assert_eq!(d.get(r, c), expect, "{a:?}");
            }
        }
        for w in s.diag.windows(2) {
            if modulus.is_none() {
                assert_eq!(w[1] % w[0], 0);
            }
        }
        assert_eq!(red(&s.u.mul(&s.u_inv)), Matrix::identity(a.rows()));
        assert_eq!(red(&s.v.mul(&s.v_inv)), Matrix::identity(a.cols()));
    }

    #[test]
    fn smith_form_small() {
        let a = Matrix::from_rows(3, 3, &[2, 4, 4, -6, 6, 12, 10, -4, -16]);
        check_snf(&a, None);
        assert_eq!(Snf::compute(&a, None).unwrap().diag, vec![2, 6, 12]);
        let b = Matrix::from_rows(2, 3, &[1, 1, 0, 1, 1, 0]);
        check_snf(&b, Some(2));
        assert_eq!(rank(&b, Some(2)).unwrap(), 1);
        check_snf(&Matrix::from_rows(2, 2, &[2, 0, 0, 2]), Some(2));
        assert_eq!(rank(&Matrix::from_rows(2, 2, &[2, 0, 0, 2]), Some(2)).unwrap(), 0);
        check_snf(&Matrix::from_rows(2, 2, &[4, 6, 6, 9]), None);
    }

    #[test]
    fn homology_of_rp2_cells() {
        // cellular complex of RP^2: Z <-0- Z <-2- Z
        let d1 = Matrix::from_rows(1, 1, &[0]);
        let d2 = Matrix::from_rows(1, 1, &[2]);
        let h1 = homology(1, &d1, &d2, None).unwrap();
        assert_eq!(h1.group, AbGroup::cyclic(2));
        assert_eq!(h1.coordinates(&[3]), vec![1]);
        let h1_mod2 = homology(1, &d1, &d2, Some(2)).unwrap();
        assert_eq!(h1_mod2.group, AbGroup::cyclic(2));
        let h2 = homology(1, &d2, &Matrix::zeros(1, 0), None).unwrap();
        assert!(h2.group.is_zero());
    }

    #[test]
    fn group_display() {
        assert_eq!(AbGroup::zero().to_string(), "0");
        assert_eq!(AbGroup { factors: vec![0, 2, 0, 2, 4] }.to_string(), "Z^2 + (Z/2)^2 + Z/4");
    }
}
