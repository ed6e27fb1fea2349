//! Energy-eigenbasis transition operators, frequency-resolved jump sets and
//! the commutant test for uniqueness of the relaxation fixed point.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonians::AncillaSpec;
use crate::linalg::{eig_hermitian, svd, ComplexMatrix, EigenDecomposition, RectMatrix};
use crate::spectra::ancilla_populations;

/// Eigenvalues closer than this (rad/ns) form one energy level.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Relative singular-value threshold for rank and null-space decisions.
pub const RANK_TOL: f64 = 1e-8;
/// Blocks with Frobenius norm below this fraction of the operator norm are dropped.
const BLOCK_TOL: f64 = 1e-12;

/// `|ψ_k⟩⟨ψ_l|` releasing `omega = E_l − E_k`.
#[derive(Clone, Debug)]
pub struct TransitionOperator {
    pub k: usize,
    pub l: usize,
    pub omega: f64,
    pub operator: ComplexMatrix,
    /// `|omega|` within the degeneracy tolerance.
    pub degenerate: bool,
}

pub fn transition_operators(h: &ComplexMatrix) -> Result<Vec<TransitionOperator>> {
    let eig = eig_hermitian(h)?;
    let n = eig.dim();
    let vecs: Vec<Vec<C64>> = (0..n).map(|k| eig.eigenvector(k)).collect();
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            let omega = eig.eigenvalues[l] - eig.eigenvalues[k];
            out.push(TransitionOperator {
                k,
                l,
                omega,
                operator: ComplexMatrix::outer(&vecs[k], &vecs[l]),
                degenerate: omega.abs() <= DEGENERACY_TOL,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionEntry {
    pub k: usize,
    pub l: usize,
    pub omega: f64,
    pub coefficient: C64,
}

/// Expansion `o = Σ c_kl |ψ_k⟩⟨ψ_l|` of an operator in an energy eigenbasis.
#[derive(Clone, Debug)]
pub struct TransitionTable {
    pub decomposition: EigenDecomposition,
    /// All `N²` pairs, row-major in `(k, l)`.
    pub entries: Vec<TransitionEntry>,
}

impl TransitionTable {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.decomposition.dim();
        let c = ComplexMatrix::from_fn(n, |k, l| self.entries[k * n + l].coefficient);
        self.decomposition.from_eigenbasis(&c)
    }

    /// Entries with `|c_kl|` above `tol`.
    pub fn nonzero(&self, tol: f64) -> impl Iterator<Item = &TransitionEntry> {
        self.entries.iter().filter(move |e| e.coefficient.norm() > tol)
    }
}

pub fn decompose(o: &ComplexMatrix, decomposition: &EigenDecomposition) -> Result<TransitionTable> {
    let n = decomposition.dim();
    if o.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "decomposing a {}-dimensional operator in a {n}-dimensional eigenbasis",
            o.dim()
        )));
    }
    let c = decomposition.to_eigenbasis(o);
    let e = &decomposition.eigenvalues;
    let entries = (0..n)
        .flat_map(|k| (0..n).map(move |l| (k, l)))
        .map(|(k, l)| TransitionEntry { k, l, omega: e[l] - e[k], coefficient: c[(k, l)] })
        .collect();
    Ok(TransitionTable { decomposition: decomposition.clone(), entries })
}

fn unvec(n: usize, v: Vec<C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |i, j| v[i * n + j])
}

/// Linear map taking the vectorized eigenbasis representation `c_kl` of an
/// operator to its computational-basis matrix `x_ij`:
/// `M[(i,j),(k,l)] = U_ik · conj(U_jl)`.
#[derive(Clone, Debug)]
pub struct MMatrix {
    pub matrix: ComplexMatrix,
    n: usize,
}

pub fn m_matrix(decomposition: &EigenDecomposition) -> MMatrix {
    let n = decomposition.dim();
    let u = &decomposition.eigenvectors;
    let matrix = ComplexMatrix::from_fn(n * n, |row, col| {
        let (i, j) = (row / n, row % n);
        let (k, l) = (col / n, col % n);
        u[(i, k)] * u[(j, l)].conj()
    });
    MMatrix { matrix, n }
}

impl MMatrix {
    /// Eigenbasis coefficients → computational matrix.
    pub fn forward(&self, coefficients: &ComplexMatrix) -> ComplexMatrix {
        unvec(self.n, self.matrix.apply(coefficients.as_slice()))
    }

    /// Computational matrix → eigenbasis coefficients, using `M⁻¹ = M†`.
    pub fn inverse(&self, x: &ComplexMatrix) -> ComplexMatrix {
        unvec(self.n, self.matrix.adjoint().apply(x.as_slice()))
    }

    pub fn min_singular_value(&self) -> f64 {
        let rows: Vec<Vec<C64>> = (0..self.matrix.dim()).map(|i| self.matrix.row(i).to_vec()).collect();
        svd(&RectMatrix::from_row_vectors(&rows)).singular_values.last().copied().unwrap_or(0.0)
    }
}

/// Frequency component `A(ω) = Σ_{E_b − E_a = ω} P_a O P_b` of one coupling operator.
#[derive(Clone, Debug)]
pub struct FrequencyGroup {
    /// Index of the coupling operator the group came from.
    pub source: usize,
    pub omega: f64,
    pub operator: ComplexMatrix,
    /// Contributing `(a, b)` level pairs.
    pub level_pairs: Vec<(usize, usize)>,
}

/// Energy levels of a decomposition: `(energy, member eigen-indices)`.
pub fn energy_levels(decomposition: &EigenDecomposition) -> Vec<(f64, Vec<usize>)> {
    decomposition
        .levels(DEGENERACY_TOL)
        .into_iter()
        .map(|ix| {
            let e = ix.iter().map(|&i| decomposition.eigenvalues[i]).sum::<f64>() / ix.len() as f64;
            (e, ix)
        })
        .collect()
}

fn level_projector(decomposition: &EigenDecomposition, members: &[usize]) -> ComplexMatrix {
    let n = decomposition.dim();
    let mut p = ComplexMatrix::zeros(n);
    for &k in members {
        let v = decomposition.eigenvector(k);
        p += &ComplexMatrix::outer(&v, &v);
    }
    p
}

/// Splits each coupling operator into frequency components, merging level pairs
/// whose frequencies agree within `secular_tol`. Zero-frequency components are
/// kept only when `include_zero` is set.
pub fn jump_set(
    h_sys: &ComplexMatrix,
    coupling_ops: &[ComplexMatrix],
    include_zero: bool,
    secular_tol: f64,
) -> Result<Vec<FrequencyGroup>> {
    let eig = eig_hermitian(h_sys)?;
    let levels = energy_levels(&eig);
    let projectors: Vec<ComplexMatrix> = levels.iter().map(|(_, m)| level_projector(&eig, m)).collect();
    let mut out = Vec::new();
    for (source, o) in coupling_ops.iter().enumerate() {
        if o.dim() != h_sys.dim() {
            return Err(Error::DimensionMismatch("coupling operator and Hamiltonian dimensions differ".into()));
        }
        let scale = o.frobenius_norm().max(f64::MIN_POSITIVE);
        let mut groups: Vec<FrequencyGroup> = Vec::new();
        for (a, pa) in projectors.iter().enumerate() {
            let left = pa.matmul(o);
            for (b, pb) in projectors.iter().enumerate() {
                let omega = levels[b].0 - levels[a].0;
                if !include_zero && omega.abs() <= secular_tol {
                    continue;
                }
                let block = left.matmul(pb);
                if block.frobenius_norm() <= BLOCK_TOL * scale {
                    continue;
                }
                match groups.iter_mut().find(|g| (g.omega - omega).abs() <= secular_tol) {
                    Some(g) => {
                        g.operator += &block;
                        g.level_pairs.push((a, b));
                    }
                    None => groups.push(FrequencyGroup { source, omega, operator: block, level_pairs: vec![(a, b)] }),
                }
            }
        }
        groups.sort_by(|x, y| y.omega.total_cmp(&x.omega));
        out.extend(groups);
    }
    Ok(out)
}

/// A degenerate level inside which a coupling operator has a nonzero block:
/// the zero-frequency transitions an energy-carrying ancilla cannot drive.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroFrequencyBlock {
    pub source: usize,
    pub energy: f64,
    pub multiplicity: usize,
    /// Frobenius norm of the off-diagonal part of `P O P` within the level.
    pub weight: f64,
}

pub fn zero_frequency_obstructions(h_sys: &ComplexMatrix, coupling_ops: &[ComplexMatrix]) -> Result<Vec<ZeroFrequencyBlock>> {
    let eig = eig_hermitian(h_sys)?;
    let mut out = Vec::new();
    for (source, o) in coupling_ops.iter().enumerate() {
        let c = eig.to_eigenbasis(o);
        for (energy, members) in energy_levels(&eig) {
            if members.len() < 2 {
                continue;
            }
            let mut acc = 0.0;
            for &i in &members {
                for &j in &members {
                    if i != j {
                        acc += c[(i, j)].norm_sqr();
                    }
                }
            }
            out.push(ZeroFrequencyBlock { source, energy, multiplicity: members.len(), weight: acc.sqrt() });
        }
    }
    Ok(out)
}

/// Individual transitions `|ψ_k⟩⟨ψ_l|`, `k ≠ l`, between degenerate eigenstates
/// that appear with nonzero weight in any of the coupling operators.
///
/// Unlike the zero-frequency group of [`jump_set`], which lumps a whole level
/// block into one operator, these connect each pair of degenerate states
/// separately.
pub fn zero_frequency_transitions(h_sys: &ComplexMatrix, coupling_ops: &[ComplexMatrix]) -> Result<Vec<TransitionOperator>> {
    let eig = eig_hermitian(h_sys)?;
    let n = eig.dim();
    let mut present = vec![false; n * n];
    for o in coupling_ops {
        let table = decompose(o, &eig)?;
        let scale = o.frobenius_norm().max(f64::MIN_POSITIVE);
        for e in table.nonzero(BLOCK_TOL * scale) {
            if e.k != e.l && e.omega.abs() <= DEGENERACY_TOL {
                present[e.k * n + e.l] = true;
            }
        }
    }
    Ok(transition_operators(h_sys)?.into_iter().filter(|t| present[t.k * n + t.l]).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniquenessReport {
    pub commutant_dim: usize,
    pub adjoint_closed: bool,
    pub unique: bool,
}

fn span_rank(ops: &[&ComplexMatrix]) -> usize {
    let rows: Vec<Vec<C64>> = ops.iter().map(|o| o.as_slice().to_vec()).collect();
    svd(&RectMatrix::from_row_vectors(&rows)).rank(RANK_TOL)
}

/// Rows of the map `vec(X) ↦ vec(XA − AX)`, `vec` row-major.
fn commutator_rows(a: &ComplexMatrix, out: &mut RectMatrix, offset: usize) {
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            let r = offset + i * n + j;
            for k in 0..n {
                let x_ik = i * n + k;
                out.set(r, x_ik, out.get(r, x_ik) + a[(k, j)]);
                let x_kj = k * n + j;
                out.set(r, x_kj, out.get(r, x_kj) - a[(i, k)]);
            }
        }
    }
}

fn validate_jumps(jumps: &[ComplexMatrix]) -> Result<usize> {
    let n = jumps.first().ok_or_else(|| Error::InvalidSpec("empty jump set".into()))?.dim();
    if jumps.iter().any(|j| j.dim() != n) {
        return Err(Error::DimensionMismatch("jump operators of different dimensions".into()));
    }
    Ok(n)
}

fn commutant_svd(jumps: &[ComplexMatrix]) -> Result<crate::linalg::Svd> {
    let n = validate_jumps(jumps)?;
    let gens: Vec<ComplexMatrix> = jumps.iter().flat_map(|j| [j.clone(), j.adjoint()]).collect();
    let block = n * n;
    let mut stacked = RectMatrix::zeros(gens.len() * block, block);
    for (g, a) in gens.iter().enumerate() {
        commutator_rows(a, &mut stacked, g * block);
    }
    Ok(svd(&stacked))
}

/// Decides whether the jump set admits a unique fixed point: the generated
/// set must be adjoint-closed with a commutant spanned by the identity.
pub fn uniqueness_check(jumps: &[ComplexMatrix]) -> Result<UniquenessReport> {
    validate_jumps(jumps)?;
    let commutant_dim = commutant_svd(jumps)?.nullity(RANK_TOL);
    let adjoints: Vec<ComplexMatrix> = jumps.iter().map(ComplexMatrix::adjoint).collect();
    let base: Vec<&ComplexMatrix> = jumps.iter().collect();
    let closed: Vec<&ComplexMatrix> = jumps.iter().chain(&adjoints).collect();
    let adjoint_closed = span_rank(&base) == span_rank(&closed);
    Ok(UniquenessReport { commutant_dim, adjoint_closed, unique: adjoint_closed && commutant_dim == 1 })
}

/// Basis of the operators commuting with every jump and its adjoint.
/// Expectation values of these are conserved by the generated dynamics.
pub fn commutant_basis(jumps: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let n = validate_jumps(jumps)?;
    Ok(commutant_svd(jumps)?
        .null_space(RANK_TOL)
        .into_iter()
        .map(|v| unvec(n, v))
        .collect())
}

/// Positivity of the per-frequency bath correlation matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationCheck {
    pub omega: f64,
    /// Coupling channels with a component at `omega`.
    pub channels: Vec<usize>,
    pub min_eigenvalue: f64,
    pub positive_semidefinite: bool,
}

/// Builds, for every distinct frequency, the matrix `C_αβ(ω)` over coupling
/// channels: the ancilla's long-time rate weight when `α` and `β` share an
/// ancilla and zero otherwise. `channel_bath[α]` indexes `baths`.
pub fn bath_correlation_check(
    groups: &[FrequencyGroup],
    channel_bath: &[usize],
    baths: &[AncillaSpec],
    secular_tol: f64,
) -> Result<Vec<CorrelationCheck>> {
    let mut freqs: Vec<f64> = Vec::new();
    for g in groups {
        if g.source >= channel_bath.len() || channel_bath[g.source] >= baths.len() {
            return Err(Error::InvalidSpec(format!("coupling channel {} has no bath", g.source)));
        }
        if !freqs.iter().any(|f| (f - g.omega).abs() <= secular_tol) {
            freqs.push(g.omega);
        }
    }
    freqs.sort_by(|a, b| b.total_cmp(a));
    let mut out = Vec::with_capacity(freqs.len());
    for omega in freqs {
        let mut channels: Vec<usize> =
            groups.iter().filter(|g| (g.omega - omega).abs() <= secular_tol).map(|g| g.source).collect();
        channels.sort_unstable();
        channels.dedup();
        let weight = |alpha: usize| {
            let (ee, gg) = ancilla_populations(&baths[channel_bath[alpha]]);
            if omega > secular_tol {
                gg
            } else if omega < -secular_tol {
                ee
            } else {
                ee + gg
            }
        };
        let c = ComplexMatrix::from_fn(channels.len(), |i, j| {
            let (a, b) = (channels[i], channels[j]);
            if channel_bath[a] == channel_bath[b] {
                C64::new(weight(a), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let min_eigenvalue = eig_hermitian(&c)?.eigenvalues[0];
        out.push(CorrelationCheck {
            omega,
            channels,
            min_eigenvalue,
            positive_semidefinite: min_eigenvalue >= -1e-12,
        });
    }
    Ok(out)
}
