use num_complex::Complex64 as C64;

const MAX_SWEEPS: usize = 80;

/// Dense rectangular complex matrix, row-major. Only used as input to the SVD.
#[derive(Clone, Debug)]
pub struct RectMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl RectMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn from_row_vectors(rows: &[Vec<C64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] = z;
    }
}

/// Thin singular value decomposition from one-sided (Hestenes) Jacobi.
#[derive(Clone, Debug)]
pub struct Svd {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Right singular vectors; entry `k` pairs with `singular_values[k]`.
    pub right_vectors: Vec<Vec<C64>>,
}

impl Svd {
    /// Number of singular values at or below `rel · σ_max`, counting the
    /// columns beyond the row count as exact zeros.
    pub fn nullity(&self, rel: f64) -> usize {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return self.singular_values.len();
        }
        self.singular_values.iter().filter(|&&s| s <= rel * smax).count()
    }

    pub fn rank(&self, rel: f64) -> usize {
        self.singular_values.len() - self.nullity(rel)
    }

    /// Right singular vectors spanning the numerical null space.
    pub fn null_space(&self, rel: f64) -> Vec<Vec<C64>> {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values
            .iter()
            .zip(&self.right_vectors)
            .filter(|(&s, _)| smax == 0.0 || s <= rel * smax)
            .map(|(_, v)| v.clone())
            .collect()
    }
}

pub fn svd(a: &RectMatrix) -> Svd {
    let (m, n) = (a.rows, a.cols);
    // Column-major working copy.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| a.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let theta = 0.5 * (2.0 * g).atan2(beta - alpha);
                let (s, c) = theta.sin_cos();
                let j_pp = C64::new(c, 0.0);
                let j_pq = C64::new(s, 0.0);
                let j_qp = phase.conj() * (-s);
                let j_qq = phase.conj() * c;
                rotate_pair(&mut cols, p, q, j_pp, j_pq, j_qp, j_qq);
                rotate_pair(&mut v, p, q, j_pp, j_pq, j_qp, j_qq);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .zip(v)
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (singular_values, right_vectors) = pairs.into_iter().unzip();
    Svd { singular_values, right_vectors }
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, pp: C64, pq: C64, qp: C64, qq: C64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = a * pp + b * qp;
        *y = a * pq + b * qq;
    }
}

/// Singular values of a rectangular matrix, descending.
pub fn singular_values(a: &RectMatrix) -> Vec<f64> {
    svd(a).singular_values
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_singular_values() {
        let mut a = RectMatrix::zeros(3, 2);
        a.set(0, 0, C64::new(0.0, -3.0));
        a.set(2, 1, C64::new(2.0, 0.0));
        let s = singular_values(&a);
        assert!((s[0] - 3.0).abs() < 1e-15 && (s[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_matrix_has_null_vector() {
        // Second column is i·(first column).
        let rows = vec![
            vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(2.0, 1.0), C64::new(-1.0, 2.0)],
        ];
        let d = svd(&RectMatrix::from_row_vectors(&rows));
        assert_eq!(d.nullity(1e-10), 1);
        let null = &d.null_space(1e-10)[0];
        for r in &rows {
            let dot: C64 = r.iter().zip(null).map(|(a, b)| a * b).sum();
            assert!(dot.norm() < 1e-14);
        }
    }
}
