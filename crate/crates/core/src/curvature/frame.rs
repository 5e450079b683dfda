//! Brute-force invariant tensor calculus on a reductive frame.
//!
//! The frame `{f_a}` is `g_b`-orthonormal; indices `0..np` span `p` and the
//! rest span `k`. A diagonal metric is given by positive weights `w_a` on
//! the `p` indices, `g(f_a, f_b) = w_a δ_ab`. All tensors are reported in
//! `g_b`-frame components unless stated otherwise.

use crate::error::{BrfError, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::{to_dmatrix, Mat};
use nalgebra::DMatrix;

#[derive(Clone, Debug)]
pub struct ReductiveFrame {
    pub n: usize,
    pub np: usize,
    /// `C[a][b][c] = g_b([f_a, f_b], f_c)`, index `(a·n + b)·n + c`.
    c: Vec<f64>,
    /// Killing form of the ambient algebra on the frame.
    pub killing: Mat<f64>,
}

/// Totally antisymmetric 3-tensor on the `p` indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeForm {
    pub np: usize,
    pub data: Vec<f64>,
}

impl ThreeForm {
    pub fn zeros(np: usize) -> Self {
        ThreeForm { np, data: vec![0.0; np * np * np] }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.np + b) * self.np + c]
    }

    /// Sets all six permutations of `(a, b, c)` consistently.
    pub fn set_antisym(&mut self, a: usize, b: usize, c: usize, v: f64) {
        let n = self.np;
        for (p, s) in [([a, b, c], 1.0), ([b, c, a], 1.0), ([c, a, b], 1.0), ([b, a, c], -1.0), ([a, c, b], -1.0), ([c, b, a], -1.0)] {
            self.data[(p[0] * n + p[1]) * n + p[2]] = s * v;
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        ThreeForm { np: self.np, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest deviation from total antisymmetry.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.np;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.get(a, b, c);
                    worst = worst.max((v + self.get(b, a, c)).abs()).max((v + self.get(a, c, b)).abs());
                }
            }
        }
        worst
    }
}

/// Antisymmetric 4-tensor stored on increasing quadruples.
#[derive(Clone, Debug)]
pub struct FourForm {
    pub np: usize,
    /// `((a, b, c, d), value)` with `a < b < c < d`.
    pub entries: Vec<([usize; 4], f64)>,
}

impl FourForm {
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, (_, v)| m.max(v.abs()))
    }
}

impl ReductiveFrame {
    /// `vectors` are the frame in algebra coordinates, `gb` the background
    /// inner product in the same coordinates.
    pub fn new(alg: &LieAlgebra<f64>, vectors: &[Vec<f64>], np: usize, gb: &Mat<f64>) -> Result<Self> {
        let n = alg.dim;
        if vectors.len() != n || np > n {
            return Err(BrfError::InternalInconsistency("frame does not match algebra dimension".into()));
        }
        let f = to_dmatrix(&Mat::from_cols(vectors));
        let g = to_dmatrix(gb);
        let gf = &g * &f;
        let gram = f.transpose() * &gf;
        let defect = (&gram - DMatrix::<f64>::identity(n, n)).amax();
        if defect > 1e-9 {
            return Err(BrfError::InternalInconsistency(format!("frame is not orthonormal (defect {defect:e})")));
        }
        let gft = gf.transpose();
        let mut c = vec![0.0; n * n * n];
        for (a, v) in vectors.iter().enumerate() {
            let ad = to_dmatrix(&alg.ad_matrix(v));
            let ca = &gft * ad * &f; // (c, b) -> g_b(f_c, [f_a, f_b])
            for b in 0..n {
                for cc in 0..n {
                    c[(a * n + b) * n + cc] = ca[(cc, b)];
                }
            }
        }
        let killing = crate::linalg::from_dmatrix(&(f.transpose() * to_dmatrix(&alg.killing) * &f));
        Ok(ReductiveFrame { n, np, c, killing })
    }

    #[inline]
    pub fn c(&self, a: usize, b: usize, c: usize) -> f64 {
        self.c[(a * self.n + b) * self.n + c]
    }

    /// Largest deviation of `C` from total antisymmetry; zero for a
    /// bi-invariant `g_b`.
    pub fn structure_antisymmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.c(a, b, c);
                    worst = worst.max((v + self.c(b, a, c)).abs()).max((v + self.c(a, c, b)).abs());
                }
            }
        }
        worst
    }

    /// Bilinear `M(g)` on `p`, polarized from
    /// `M(X,X) = -½Σ g([X,X_i]_p, X_j)² + ¼Σ g([X_i,X_j]_p, X)²`.
    pub fn m_tensor(&self, w: &[f64]) -> Mat<f64> {
        let np = self.np;
        let mut m = Mat::zeros(np, np);
        for a in 0..np {
            for b in a..np {
                let mut s1 = 0.0;
                let mut s2 = 0.0;
                for i in 0..np {
                    for j in 0..np {
                        s1 += self.c(a, i, j) * self.c(b, i, j) * w[j] / w[i];
                        s2 += self.c(i, j, a) * self.c(i, j, b) / (w[i] * w[j]);
                    }
                }
                let v = -0.5 * s1 + 0.25 * s2 * w[a] * w[b];
                m.set(a, b, v);
                m.set(b, a, v);
            }
        }
        m
    }

    /// The quadratic form `M(X, X)` evaluated directly on a vector of `p`.
    pub fn m_quadratic(&self, x: &[f64], w: &[f64]) -> f64 {
        let np = self.np;
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for i in 0..np {
            for j in 0..np {
                let mut br = 0.0; // g_b([X, f_i], f_j)
                let mut out = 0.0; // g_b([f_i, f_j], X)
                for a in 0..np {
                    if x[a] != 0.0 {
                        br += x[a] * self.c(a, i, j);
                        out += x[a] * self.c(i, j, a) * w[a];
                    }
                }
                s1 += (br * w[j]).powi(2) / (w[i] * w[j]);
                s2 += out * out / (w[i] * w[j]);
            }
        }
        -0.5 * s1 + 0.25 * s2
    }

    /// `ricci(g) = M(g) - ½B` on `p`.
    pub fn ricci(&self, w: &[f64]) -> Mat<f64> {
        let np = self.np;
        let m = self.m_tensor(w);
        Mat::from_fn(np, np, |a, b| m.get(a, b) - 0.5 * self.killing.get(a, b))
    }

    /// `H²_g(a, b) = Σ H(a,i,j) H(b,i,j) / (w_i w_j)`.
    pub fn h_squared(&self, h: &ThreeForm, w: &[f64]) -> Mat<f64> {
        let np = self.np;
        let mut out = Mat::zeros(np, np);
        for a in 0..np {
            for b in a..np {
                let mut s = 0.0;
                for i in 0..np {
                    for j in 0..np {
                        let ha = h.get(a, i, j);
                        if ha != 0.0 {
                            s += ha * h.get(b, i, j) / (w[i] * w[j]);
                        }
                    }
                }
                out.set(a, b, s);
                out.set(b, a, s);
            }
        }
        out
    }

    /// `H([f_a, f_b]_p, f_c, f_d)`.
    fn h_bracket(&self, h: &ThreeForm, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let mut s = 0.0;
        for m in 0..self.np {
            let cm = self.c(a, b, m);
            if cm != 0.0 {
                s += cm * h.get(m, c, d);
            }
        }
        s
    }

    /// `dH(X₀..X₃) = Σ_{i<j} (-1)^{i+j} H([X_i,X_j]_p, X_k, X_l)` for an
    /// invariant 3-form.
    pub fn exterior_derivative(&self, h: &ThreeForm) -> FourForm {
        let np = self.np;
        let mut entries = Vec::new();
        for a in 0..np {
            for b in a + 1..np {
                for c in b + 1..np {
                    for d in c + 1..np {
                        let x = [a, b, c, d];
                        let mut s = 0.0;
                        for i in 0..4 {
                            for j in i + 1..4 {
                                let rest: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
                                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                                s += sign * self.h_bracket(h, x[i], x[j], x[rest[0]], x[rest[1]]);
                            }
                        }
                        entries.push((x, s));
                    }
                }
            }
        }
        FourForm { np, entries }
    }

    /// Levi-Civita Nomizu coefficients `Λ(f_a) f_b = Σ_c Λ_abc f_c`.
    fn nomizu(&self, w: &[f64]) -> Vec<f64> {
        let np = self.np;
        let mut l = vec![0.0; np * np * np];
        for a in 0..np {
            for b in 0..np {
                for c in 0..np {
                    l[(a * np + b) * np + c] =
                        0.5 * self.c(a, b, c) + (self.c(c, a, b) * w[b] + self.c(c, b, a) * w[a]) / (2.0 * w[c]);
                }
            }
        }
        l
    }

    /// `δH(Y, Z) = -Σ_i (∇_{E_i} H)(E_i, Y, Z)` over a g-orthonormal basis.
    pub fn codifferential(&self, h: &ThreeForm, w: &[f64]) -> Mat<f64> {
        let np = self.np;
        let l = self.nomizu(w);
        let lam = |a: usize, b: usize, c: usize| l[(a * np + b) * np + c];
        let mut out = Mat::zeros(np, np);
        for b in 0..np {
            for c in b + 1..np {
                let mut s = 0.0;
                for i in 0..np {
                    let mut t = 0.0;
                    for m in 0..np {
                        t += lam(i, i, m) * h.get(m, b, c) + lam(i, b, m) * h.get(i, m, c) + lam(i, c, m) * h.get(i, b, m);
                    }
                    s += t / w[i];
                }
                out.set(b, c, s);
                out.set(c, b, -s);
            }
        }
        out
    }

    /// Cartan 3-form `g_b([·,·],·)` when the whole algebra is `p`.
    pub fn cartan_form(&self) -> ThreeForm {
        let np = self.np;
        let mut h = ThreeForm::zeros(np);
        for a in 0..np {
            for b in 0..np {
                for c in 0..np {
                    h.data[(a * np + b) * np + c] = self.c(a, b, c);
                }
            }
        }
        h
    }
}

/// Converts `g_b`-frame components to `g`-orthonormal ones.
pub fn to_g_orthonormal(m: &Mat<f64>, w: &[f64]) -> Mat<f64> {
    Mat::from_fn(m.rows, m.cols, |a, b| m.get(a, b) / (w[a] * w[b]).sqrt())
}
