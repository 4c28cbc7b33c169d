//! Dense linear algebra over ℚ(√2)(i), plus a small f64 shadow.
//!
//! Everything structural (rank, kernel, solve, inverse, determinant,
//! congruence signature) is exact; the float side exists only for the
//! numeric fixed-point solver and residual reporting.

use crate::scalar::Scalar;

/// Row-major exact matrix.
#[derive(Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        Mat {
            rows: nr,
            cols: nc,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| f(self.at(r, c)))
    }

    pub fn conj(&self) -> Mat {
        self.map(|s| s.conj())
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        self.map(|x| x * s)
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + other.at(r, c))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - other.at(r, c))
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mat mul");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(r, c) + &(a * b);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for c in 0..self.cols {
                    let a = self.at(r, c);
                    if !a.is_zero() && !v[c].is_zero() {
                        acc += &(a * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.at(r, c) == self.at(c, r)))
    }

    /// Reduced row echelon form together with the pivot column list.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..m.cols {
            if lead >= m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, pr);
            let inv = m.at(lead, col).inv().expect("pivot nonzero");
            for c in col..m.cols {
                let v = m.at(lead, c) * &inv;
                m.set(lead, c, v);
            }
            for r in 0..m.rows {
                if r != lead && !m.at(r, col).is_zero() {
                    let f = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = m.at(r, c) - &(&f * m.at(lead, c));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {x : Mx = 0}.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        for &fc in &free {
            let mut v = vec![Scalar::zero(); self.cols];
            v[fc] = Scalar::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -r.at(prow, fc).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of Mx = b, if consistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = red.at(prow, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(n, n, |r, c| red.at(r, n + c).clone()))
    }

    /// Determinant by fraction-producing Gaussian elimination.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return Scalar::zero();
            };
            if pr != col {
                m.swap_rows(col, pr);
                det = -det;
            }
            let pivot = m.at(col, col).clone();
            det = &det * &pivot;
            let inv = pivot.inv().unwrap();
            for r in col + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let f = m.at(r, col) * &inv;
                for c in col..n {
                    let v = m.at(r, c) - &(&f * m.at(col, c));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Signature (p, q, z) of a real symmetric matrix by exact congruence
    /// diagonalization: p positive, q negative, z null directions.
    pub fn signature(&self) -> (usize, usize, usize) {
        assert!(self.is_symmetric(), "signature needs a symmetric matrix");
        assert!(
            self.data.iter().all(Scalar::is_real),
            "signature needs real entries"
        );
        let n = self.rows;
        let mut m = self.clone();
        let (mut p, mut q, mut z) = (0usize, 0usize, 0usize);
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            // Find a nonzero diagonal entry among active indices.
            let diag = active.iter().copied().find(|&i| !m.at(i, i).is_zero());
            let pivot = match diag {
                Some(i) => i,
                None => {
                    // All active diagonal entries vanish. Find an off-diagonal
                    // nonzero m[i][j] and push e_i ← e_i + e_j to create one;
                    // if none exists the active block is zero.
                    let mut found = None;
                    'outer: for &i in &active {
                        for &j in &active {
                            if i < j && !m.at(i, j).is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    match found {
                        None => {
                            z += active.len();
                            break;
                        }
                        Some((i, j)) => {
                            // Congruence by E: row/col i += row/col j.
                            for c in 0..n {
                                let v = m.at(i, c) + m.at(j, c);
                                m.set(i, c, v);
                            }
                            for r in 0..n {
                                let v = m.at(r, i) + m.at(r, j);
                                m.set(r, i, v);
                            }
                            i
                        }
                    }
                }
            };
            let d = m.at(pivot, pivot).clone();
            match d.sign_real() {
                1 => p += 1,
                -1 => q += 1,
                _ => unreachable!("pivot chosen nonzero"),
            }
            // Clear pivot row/column on the remaining active indices.
            let dinv = d.inv().unwrap();
            let others: Vec<usize> = active.iter().copied().filter(|&i| i != pivot).collect();
            for &r in &others {
                if m.at(r, pivot).is_zero() {
                    continue;
                }
                let f = m.at(r, pivot) * &dinv;
                for &c in &others {
                    let v = m.at(r, c) - &(&f * m.at(pivot, c)) ;
                    m.set(r, c, v);
                }
                m.set(r, pivot, Scalar::zero());
                m.set(pivot, r, Scalar::zero());
            }
            active.retain(|&i| i != pivot);
        }
        (p, q, z)
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// A subspace of ℂⁿ over the scalar field, stored as a reduced row basis.
#[derive(Clone, Debug)]
pub struct LinearSpace {
    pub ambient: usize,
    basis: Mat, // rref rows, zero rows dropped
    pivots: Vec<usize>,
}

impl LinearSpace {
    pub fn from_vectors(ambient: usize, vecs: &[Vec<Scalar>]) -> Self {
        assert!(vecs.iter().all(|v| v.len() == ambient));
        let m = Mat::from_rows(vecs.to_vec());
        let (r, pivots) = m.rref();
        let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        LinearSpace {
            ambient,
            basis: Mat::from_rows(rows),
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // Reduce v against the rref basis.
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for c in 0..self.ambient {
                    w[c] = &w[c] - &(&f * self.basis.at(i, c));
                }
            }
        }
        w.iter().all(Scalar::is_zero)
    }

    pub fn conj(&self) -> LinearSpace {
        let rows: Vec<Vec<Scalar>> = self
            .basis_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|s| s.conj()).collect())
            .collect();
        LinearSpace::from_vectors(self.ambient, &rows)
    }

    pub fn intersection_dim(&self, other: &LinearSpace) -> usize {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        let joint = Mat::from_rows(rows).rank();
        self.dim() + other.dim() - joint
    }

    pub fn same_space(&self, other: &LinearSpace) -> bool {
        self.dim() == other.dim() && other.basis_rows().iter().all(|r| self.contains(r))
    }
}

// ---------------------------------------------------------------------------
// f64 shadow
// ---------------------------------------------------------------------------

/// Row-major f64 matrix for the numeric solvers.
#[derive(Clone, Debug)]
pub struct MatF {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatF {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatF {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatF::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = MatF::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn scale(&self, s: f64) -> MatF {
        MatF {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul(&self, other: &MatF) -> MatF {
        assert_eq!(self.cols, other.rows);
        let mut out = MatF::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.set(r, c, out.at(r, c) + a * other.at(k, c));
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &MatF) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Determinant via LU with partial pivoting.
    pub fn det(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1.0;
        for col in 0..n {
            let (pr, mx) = (col..n)
                .map(|r| (r, m.at(r, col).abs()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if mx == 0.0 {
                return 0.0;
            }
            if pr != col {
                for c in 0..n {
                    let t = m.at(col, c);
                    m.set(col, c, m.at(pr, c));
                    m.set(pr, c, t);
                }
                det = -det;
            }
            let p = m.at(col, col);
            det *= p;
            for r in col + 1..n {
                let f = m.at(r, col) / p;
                for c in col..n {
                    m.set(r, c, m.at(r, c) - f * m.at(col, c));
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<MatF> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = MatF::identity(n);
        for col in 0..n {
            let (pr, mx) = (col..n)
                .map(|r| (r, a.at(r, col).abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if mx < 1e-300 {
                return None;
            }
            for c in 0..n {
                let t = a.at(col, c);
                a.set(col, c, a.at(pr, c));
                a.set(pr, c, t);
                let t = inv.at(col, c);
                inv.set(col, c, inv.at(pr, c));
                inv.set(pr, c, t);
            }
            let p = a.at(col, col);
            for c in 0..n {
                a.set(col, c, a.at(col, c) / p);
                inv.set(col, c, inv.at(col, c) / p);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.at(r, col);
                if f == 0.0 {
                    continue;
                }
                for c in 0..n {
                    a.set(r, c, a.at(r, c) - f * a.at(col, c));
                    inv.set(r, c, inv.at(r, c) - f * inv.at(col, c));
                }
            }
        }
        Some(inv)
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
    pub fn sym_eigenvalues(&self) -> Vec<f64> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        for _sweep in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += a.at(p, q) * a.at(p, q);
                }
            }
            if off < 1e-26 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a.at(p, q);
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.at(k, p);
                        let akq = a.at(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.at(p, k);
                        let aqk = a.at(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..n).map(|i| a.at(i, i)).collect();
        eig.sort_by(|x, y| x.total_cmp(y));
        eig
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn s(p: i64, q: i64) -> Scalar {
        Scalar::from_rat(rat(p, q))
    }

    #[test]
    fn solve_and_kernel_agree() {
        let m = Mat::from_rows(vec![
            vec![s(1, 1), s(2, 1), s(3, 1)],
            vec![s(2, 1), s(4, 1), s(6, 1)],
        ]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.kernel().len(), 2);
        for k in m.kernel() {
            assert!(m.apply(&k).iter().all(Scalar::is_zero));
        }
        let b = vec![s(6, 1), s(12, 1)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        assert!(m.solve(&[s(1, 1), s(0, 1)]).is_none());
    }

    #[test]
    fn signature_of_indefinite_form() {
        // diag(2, -3, 0) after a congruence shuffle
        let m = Mat::from_rows(vec![
            vec![s(0, 1), s(1, 1), s(0, 1)],
            vec![s(1, 1), s(0, 1), s(0, 1)],
            vec![s(0, 1), s(0, 1), s(0, 1)],
        ]);
        assert_eq!(m.signature(), (1, 1, 1));
    }

    #[test]
    fn float_det_and_inverse() {
        let m = MatF::from_fn(3, 3, |r, c| if r == c { 2.0 } else { 0.5 });
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).max_abs_diff(&MatF::identity(3)) < 1e-12);
        let eig = MatF::from_fn(2, 2, |r, c| if r == c { 0.0 } else { 1.0 }).sym_eigenvalues();
        assert!((eig[0] + 1.0).abs() < 1e-12 && (eig[1] - 1.0).abs() < 1e-12);
    }
}
