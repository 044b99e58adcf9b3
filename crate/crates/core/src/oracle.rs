//! Brute-force evaluation of the correlation measures on arbitrary 4x4
//! density matrices.
//!
//! Everything here is independent of the closed forms in `correlations`: the
//! eigensolvers are in-repo Jacobi iterations, the LQU path goes through the
//! matrix square root, the LQFI path through the full eigensystem, and the
//! discord path minimizes over projective measurement directions on qubit A.

use num_complex::Complex64;

use crate::{Result, SpinCorrError};

pub type Matrix4 = [[Complex64; 4]; 4];

const HERM_TOL: f64 = 1e-12;
const EIG_FLOOR: f64 = -1e-10;
/// LQFI terms with p_m + p_n below this are dropped.
const LQFI_DENOM_FLOOR: f64 = 1e-14;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn zeros4() -> Matrix4 {
    [[Complex64::new(0.0, 0.0); 4]; 4]
}

pub fn mat_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = zeros4();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn adjoint(a: &Matrix4) -> Matrix4 {
    let mut out = zeros4();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

/// U rho U^dagger.
pub fn conjugate(rho: &DensityMatrix4, u: &Matrix4) -> Result<DensityMatrix4> {
    DensityMatrix4::new(mat_mul(u, &mat_mul(rho.entries(), &adjoint(u))))
}

/// Kronecker product of two 2x2 matrices.
pub fn kron2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Matrix4 {
    let mut out = zeros4();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn pauli(axis: usize) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    match axis {
        0 => [[z, c(1.0)], [c(1.0), z]],
        1 => [[z, Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), z]],
        2 => [[c(1.0), z], [z, c(-1.0)]],
        _ => panic!("pauli axis out of range"),
    }
}

fn identity2() -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    [[c(1.0), z], [z, c(1.0)]]
}

/// sigma_mu acting on qubit A: sigma_mu (x) I.
pub fn pauli_on_a(axis: usize) -> Matrix4 {
    kron2(&pauli(axis), &identity2())
}

/// A validated 4x4 density matrix: Hermitian, unit trace, PSD up to rounding.
#[derive(Debug, Clone, Copy)]
pub struct DensityMatrix4 {
    m: Matrix4,
}

impl DensityMatrix4 {
    pub fn new(m: Matrix4) -> Result<Self> {
        let mut trace = 0.0;
        for i in 0..4 {
            if m[i][i].im.abs() > HERM_TOL {
                return Err(SpinCorrError::Validation("diagonal entries must be real".into()));
            }
            trace += m[i][i].re;
            for j in (i + 1)..4 {
                if (m[i][j] - m[j][i].conj()).norm() > HERM_TOL {
                    return Err(SpinCorrError::Validation(format!(
                        "matrix is not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        if (trace - 1.0).abs() > HERM_TOL {
            return Err(SpinCorrError::Validation(format!("trace is {trace}, expected 1")));
        }
        Ok(DensityMatrix4 { m })
    }

    pub fn entries(&self) -> &Matrix4 {
        &self.m
    }

    /// Reduced state of qubit A.
    pub fn reduced_a(&self) -> [[Complex64; 2]; 2] {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for b in 0..2 {
                    out[i][j] += self.m[2 * i + b][2 * j + b];
                }
            }
        }
        out
    }

    /// Reduced state of qubit B.
    pub fn reduced_b(&self) -> [[Complex64; 2]; 2] {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for a in 0..2 {
                    out[i][j] += self.m[2 * a + i][2 * a + j];
                }
            }
        }
        out
    }
}

/// Sorted eigendecomposition of a density matrix (values descending).
#[derive(Debug, Clone)]
pub struct EigenSystem4 {
    pub values: [f64; 4],
    /// vectors[k] is the orthonormal eigenvector for values[k].
    pub vectors: [[Complex64; 4]; 4],
}

/// Cyclic Jacobi diagonalization of the complex Hermitian matrix.
pub fn eig4(rho: &DensityMatrix4) -> Result<EigenSystem4> {
    let mut a = *rho.entries();
    let mut v = zeros4();
    for i in 0..4 {
        v[i][i] = c(1.0);
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..4 {
            for q in (p + 1)..4 {
                off += a[p][q].norm_sqr();
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                let apq = a[p][q];
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let tau = (a[q][q].re - a[p][p].re) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                let mut u = zeros4();
                for i in 0..4 {
                    u[i][i] = c(1.0);
                }
                u[p][p] = c(cth);
                u[p][q] = c(sth) * phase;
                u[q][p] = c(-sth) * phase.conj();
                u[q][q] = c(cth);
                a = mat_mul(&adjoint(&u), &mat_mul(&a, &u));
                v = mat_mul(&v, &u);
            }
        }
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[j][j].re.partial_cmp(&a[i][i].re).unwrap());
    let mut values = [0.0; 4];
    let mut vectors = zeros4();
    for (k, &i) in order.iter().enumerate() {
        // Rayleigh quotient against the original matrix: round-off accumulated
        // by the rotations otherwise pollutes near-zero eigenvalues, which is
        // amplified once square roots are taken
        let m = rho.entries();
        let mut q = Complex64::new(0.0, 0.0);
        for r in 0..4 {
            for col in 0..4 {
                q += v[r][i].conj() * m[r][col] * v[col][i];
            }
        }
        let lam = q.re;
        if lam < EIG_FLOOR {
            return Err(SpinCorrError::Validation(format!(
                "negative eigenvalue {lam} below clamp threshold"
            )));
        }
        values[k] = lam.clamp(0.0, 1.0);
        for row in 0..4 {
            vectors[k][row] = v[row][i];
        }
    }
    Ok(EigenSystem4 { values, vectors })
}

/// Matrix square root via the eigensystem; squaring it reproduces rho.
pub fn sqrt_density(rho: &DensityMatrix4) -> Result<Matrix4> {
    let eig = eig4(rho)?;
    let mut out = zeros4();
    for k in 0..4 {
        let s = eig.values[k].sqrt();
        if s == 0.0 {
            continue;
        }
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] += c(s) * eig.vectors[k][i] * eig.vectors[k][j].conj();
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of a real symmetric 3x3 matrix via Jacobi rotations.
pub fn sym3_eigenvalues(mut a: [[f64; 3]; 3]) -> [f64; 3] {
    for _sweep in 0..100 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off < 1e-30 {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..3 {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                let mut b = a;
                for k in 0..3 {
                    b[k][p] = cth * a[k][p] - sth * a[k][q];
                    b[k][q] = sth * a[k][p] + cth * a[k][q];
                }
                a = b;
                let bb = a;
                for k in 0..3 {
                    a[p][k] = cth * bb[p][k] - sth * bb[q][k];
                    a[q][k] = sth * bb[p][k] + cth * bb[q][k];
                }
            }
        }
    }
    let mut vals = [a[0][0], a[1][1], a[2][2]];
    vals.sort_by(|x, y| y.partial_cmp(x).unwrap());
    vals
}

/// The 3x3 W matrix of skew-information overlaps,
/// W_uv = Re Tr{sqrt(rho) sigma_u(x)I sqrt(rho) sigma_v(x)I}.
pub fn skew_w_matrix(rho: &DensityMatrix4) -> Result<[[f64; 3]; 3]> {
    let root = sqrt_density(rho)?;
    let paulis: Vec<Matrix4> = (0..3).map(pauli_on_a).collect();
    let mut w = [[0.0; 3]; 3];
    for mu in 0..3 {
        let left = mat_mul(&root, &paulis[mu]);
        for nu in mu..3 {
            let right = mat_mul(&root, &paulis[nu]);
            let prod = mat_mul(&left, &right);
            let tr: Complex64 = (0..4).map(|i| prod[i][i]).sum();
            w[mu][nu] = tr.re;
            w[nu][mu] = tr.re;
        }
    }
    Ok(w)
}

/// Brute-force LQU: 1 minus the largest eigenvalue of W.
pub fn lqu_bruteforce(rho: &DensityMatrix4) -> Result<f64> {
    let w = skew_w_matrix(rho)?;
    Ok((1.0 - sym3_eigenvalues(w)[0]).clamp(0.0, 1.0))
}

/// The 3x3 M matrix of the local quantum Fisher information.
pub fn fisher_m_matrix(rho: &DensityMatrix4) -> Result<[[f64; 3]; 3]> {
    let eig = eig4(rho)?;
    let paulis: Vec<Matrix4> = (0..3).map(pauli_on_a).collect();
    // elements <m| sigma_mu (x) I |n>
    let mut elem = [[[Complex64::new(0.0, 0.0); 4]; 4]; 3];
    for mu in 0..3 {
        for m in 0..4 {
            for n in 0..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..4 {
                    for j in 0..4 {
                        acc += eig.vectors[m][i].conj() * paulis[mu][i][j] * eig.vectors[n][j];
                    }
                }
                elem[mu][m][n] = acc;
            }
        }
    }
    let mut mm = [[0.0; 3]; 3];
    for mu in 0..3 {
        for nu in mu..3 {
            let mut acc = 0.0;
            for m in 0..4 {
                for n in 0..4 {
                    if m == n {
                        continue;
                    }
                    let d = eig.values[m] + eig.values[n];
                    if d <= LQFI_DENOM_FLOOR {
                        continue;
                    }
                    let weight = 2.0 * eig.values[m] * eig.values[n] / d;
                    acc += weight * (elem[mu][m][n] * elem[nu][n][m]).re;
                }
            }
            mm[mu][nu] = acc;
            mm[nu][mu] = acc;
        }
    }
    Ok(mm)
}

/// Brute-force LQFI: 1 minus the largest eigenvalue of M.
pub fn lqfi_bruteforce(rho: &DensityMatrix4) -> Result<f64> {
    let m = fisher_m_matrix(rho)?;
    Ok((1.0 - sym3_eigenvalues(m)[0]).clamp(0.0, 1.0))
}

/// Quantum Fisher information for a fixed local operator direction,
/// H_A = (n . sigma) (x) I with |n| = 1.
pub fn fisher_information(rho: &DensityMatrix4, n: [f64; 3]) -> Result<f64> {
    let eig = eig4(rho)?;
    let mut h2 = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (axis, &w) in n.iter().enumerate() {
        let p = pauli(axis);
        for i in 0..2 {
            for j in 0..2 {
                h2[i][j] += c(w) * p[i][j];
            }
        }
    }
    let h = kron2(&h2, &identity2());
    let mut f = 0.0;
    for m in 0..4 {
        for nn in 0..4 {
            let d = eig.values[m] + eig.values[nn];
            if d <= LQFI_DENOM_FLOOR {
                continue;
            }
            let mut amp = Complex64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    amp += eig.vectors[m][i].conj() * h[i][j] * eig.vectors[nn][j];
                }
            }
            let diff = eig.values[m] - eig.values[nn];
            f += 0.5 * diff * diff / d * amp.norm_sqr();
        }
    }
    Ok(f)
}

/// Measurement axis on the Bloch sphere of qubit A.
#[derive(Debug, Clone, Copy)]
pub struct MeasurementDirection {
    pub theta: f64,
    pub phi: f64,
}

fn entropy2_bits(m: &[[Complex64; 2]; 2]) -> f64 {
    let tr = m[0][0].re + m[1][1].re;
    let half_diff = (m[0][0].re - m[1][1].re) / 2.0;
    let disc = (half_diff * half_diff + m[0][1].norm_sqr()).sqrt();
    let l1 = (tr / 2.0 + disc).max(0.0);
    let l2 = (tr / 2.0 - disc).max(0.0);
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(l1) + term(l2)
}

fn entropy4_bits(rho: &DensityMatrix4) -> Result<f64> {
    let eig = eig4(rho)?;
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(eig.values.iter().map(|&p| term(p)).sum())
}

/// Average conditional entropy of qubit B after measuring qubit A along
/// (theta, phi). Outcomes with probability below 1e-14 contribute nothing.
fn conditional_entropy(rho: &Matrix4, theta: f64, phi: f64) -> f64 {
    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        // projector (I + sign n.sigma)/2 on qubit A
        let p = [
            [c((1.0 + sign * n[2]) / 2.0), Complex64::new(sign * n[0], -sign * n[1]) / 2.0],
            [Complex64::new(sign * n[0], sign * n[1]) / 2.0, c((1.0 - sign * n[2]) / 2.0)],
        ];
        // unnormalized conditional state of B: Tr_A[(P (x) I) rho]
        let mut cond = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for a in 0..2 {
                    for ap in 0..2 {
                        cond[i][j] += p[a][ap] * rho[2 * ap + i][2 * a + j];
                    }
                }
            }
        }
        let q = cond[0][0].re + cond[1][1].re;
        if q < 1e-14 {
            continue;
        }
        let normalized = [
            [cond[0][0] / q, cond[0][1] / q],
            [cond[1][0] / q, cond[1][1] / q],
        ];
        total += q * entropy2_bits(&normalized);
    }
    total
}

/// Brute-force entropic discord: grid search over measurement directions on
/// qubit A followed by deterministic coordinate-descent refinement.
pub fn discord_bruteforce(rho: &DensityMatrix4, grid: (usize, usize), refine_iters: usize) -> f64 {
    let (n_theta, n_phi) = (grid.0.max(2), grid.1.max(1));
    let s_a = entropy2_bits(&rho.reduced_a());
    let s_rho = entropy4_bits(rho).expect("valid density matrix");
    let m = rho.entries();

    let mut best = (f64::INFINITY, 0.0, 0.0);
    let theta_step = std::f64::consts::PI / (n_theta - 1) as f64;
    let phi_step = 2.0 * std::f64::consts::PI / n_phi as f64;
    for it in 0..n_theta {
        let theta = it as f64 * theta_step;
        for ip in 0..n_phi {
            let phi = ip as f64 * phi_step;
            let val = conditional_entropy(m, theta, phi);
            if val < best.0 - 1e-15 {
                best = (val, theta, phi);
            }
        }
    }

    let (mut val, mut theta, mut phi) = best;
    let mut step = theta_step.max(phi_step);
    for _ in 0..refine_iters {
        let mut improved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let nt = (theta + dt).clamp(0.0, std::f64::consts::PI);
            let np = (phi + dp).rem_euclid(2.0 * std::f64::consts::PI);
            let v = conditional_entropy(m, nt, np);
            if v < val - 1e-16 {
                val = v;
                theta = nt;
                phi = np;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    (s_a - s_rho + val).max(0.0)
}

/// The fixed orthogonal transforms used throughout: the Bell-diagonalizing
/// rotation R, the qubit-B flip O = I (x) sigma_x, and the two-qubit Hadamard
/// H (x) H.
pub struct FixedTransforms {
    pub r: Matrix4,
    pub o: Matrix4,
    pub h2: Matrix4,
}

pub fn fixed_transforms() -> FixedTransforms {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut r = zeros4();
    for (i, row) in [
        [s, 0.0, 0.0, s],
        [0.0, s, s, 0.0],
        [0.0, s, -s, 0.0],
        [s, 0.0, 0.0, -s],
    ]
    .iter()
    .enumerate()
    {
        for (j, &x) in row.iter().enumerate() {
            r[i][j] = c(x);
        }
    }
    let o = kron2(&identity2(), &pauli(0));
    let h = [[c(s), c(s)], [c(s), c(-s)]];
    let h2 = kron2(&h, &h);
    FixedTransforms { r, o, h2 }
}

/// Haar-ish random single-qubit unitary acting on qubit A or B.
pub fn random_local_unitary<R: rand::Rng>(rng: &mut R, on_first: bool) -> Matrix4 {
    use std::f64::consts::PI;
    let alpha = rng.gen_range(0.0..2.0 * PI);
    let psi = rng.gen_range(0.0..2.0 * PI);
    let chi = rng.gen_range(0.0..2.0 * PI);
    let xi: f64 = rng.gen_range(0.0..1.0);
    let th = xi.sqrt().asin();
    let u = [
        [
            Complex64::from_polar(th.cos(), alpha + psi),
            Complex64::from_polar(th.sin(), alpha + chi),
        ],
        [
            Complex64::from_polar(-th.sin(), alpha - chi),
            Complex64::from_polar(th.cos(), alpha - psi),
        ],
    ];
    if on_first {
        kron2(&u, &identity2())
    } else {
        kron2(&identity2(), &u)
    }
}
