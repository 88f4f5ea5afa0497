use nalgebra::DMatrix;

/// Christoffel symbols `Γ^i_{jk}` stored densely, index order `(i, j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim * dim] }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { dim, data }
    }

    /// Levi-Civita symbols from the inverse metric and the coordinate
    /// derivatives `dg[k] = ∂_k g`:
    /// `Γ^i_{jk} = ½ g^{il} (∂_j g_{lk} + ∂_k g_{lj} - ∂_l g_{jk})`.
    pub fn from_metric_derivatives(ginv: &DMatrix<f64>, dg: &[DMatrix<f64>]) -> Self {
        let n = ginv.nrows();
        // first-kind symbols Γ_{ljk}
        let first = |l: usize, j: usize, k: usize| 0.5 * (dg[j][(l, k)] + dg[k][(l, j)] - dg[l][(j, k)]);
        let mut lowered = vec![0.0; n * n * n];
        for l in 0..n {
            for j in 0..n {
                for k in j..n {
                    let v = first(l, j, k);
                    lowered[(l * n + j) * n + k] = v;
                    lowered[(l * n + k) * n + j] = v;
                }
            }
        }
        Self::from_fn(n, |i, j, k| (0..n).map(|l| ginv[(i, l)] * lowered[(l * n + j) * n + k]).sum())
    }

    /// Metric derivatives implied by metric compatibility:
    /// `∂_k g_{ij} = g_{il} Γ^l_{kj} + g_{jl} Γ^l_{ki}`.
    pub fn metric_derivatives(&self, g: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
        let n = self.dim;
        (0..n)
            .map(|k| {
                DMatrix::from_fn(n, n, |i, j| {
                    (0..n).map(|l| g[(i, l)] * self.get(l, k, j) + g[(j, l)] * self.get(l, k, i)).sum()
                })
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dim + j) * self.dim + k]
    }

    /// `Γ(u, v)^i = Γ^i_{jk} u^j v^k`.
    pub fn contract(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                let mut acc = 0.0;
                for j in 0..n {
                    if u[j] == 0.0 {
                        continue;
                    }
                    for k in 0..n {
                        acc += self.get(i, j, k) * u[j] * v[k];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Riemann tensor `R^i_{jkl}`, with `R(∂_k, ∂_l)∂_j = R^i_{jkl} ∂_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Riemann {
    dim: usize,
    data: Vec<f64>,
}

impl Riemann {
    /// `R^i_{jkl} = ∂_k Γ^i_{lj} - ∂_l Γ^i_{kj} + Γ^i_{km} Γ^m_{lj} - Γ^i_{lm} Γ^m_{kj}`,
    /// evaluated for `k < l` and reflected so that `R^i_{jkl} = -R^i_{jlk}`
    /// holds exactly.
    pub fn from_christoffel(gamma: &Christoffel, dgamma: &[Christoffel]) -> Self {
        let n = gamma.dim();
        let mut data = vec![0.0; n * n * n * n];
        let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in (k + 1)..n {
                        let mut v = dgamma[k].get(i, l, j) - dgamma[l].get(i, k, j);
                        for m in 0..n {
                            v += gamma.get(i, k, m) * gamma.get(m, l, j) - gamma.get(i, l, m) * gamma.get(m, k, j);
                        }
                        data[idx(i, j, k, l)] = v;
                        data[idx(i, j, l, k)] = -v;
                    }
                }
            }
        }
        Self { dim: n, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.dim;
        self.data[((i * n + j) * n + k) * n + l]
    }

    /// Vector `R(u, v)w`. Summed over `k < l` against `u^k v^l - u^l v^k`, so
    /// `R(u, u)w = 0` holds exactly.
    pub fn apply(&self, u: &[f64], v: &[f64], w: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut wedge = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for k in 0..n {
            for l in (k + 1)..n {
                wedge.push((k, l, u[k] * v[l] - u[l] * v[k]));
            }
        }
        (0..n)
            .map(|i| {
                let mut acc = 0.0;
                for j in 0..n {
                    if w[j] == 0.0 {
                        continue;
                    }
                    for &(k, l, c) in &wedge {
                        acc += self.get(i, j, k, l) * w[j] * c;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest entry of the cyclic sum `R^i_{jkl} + R^i_{klj} + R^i_{ljk}`.
    pub fn first_bianchi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s = self.get(i, j, k, l) + self.get(i, k, l, j) + self.get(i, l, j, k);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}
