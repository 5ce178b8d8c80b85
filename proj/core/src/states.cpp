#include "qmsdf/states.hpp"

#include <algorithm>
#include <cmath>

#include "qmsdf/errors.hpp"

namespace qmsdf {

namespace {

const Complex kI{0.0, 1.0};

double min_eigenvalue(const Matrix& herm, const Tolerances& tol)
{
    return hermitian_eig(hermitian_part(herm), tol).values(0);
}

Matrix normalized_density(const Matrix& x)
{
    const Matrix h = hermitian_part(x);
    return h / h.trace().real();
}

// Inverse square root of a positive definite matrix.
Matrix inverse_sqrt(const Matrix& rho, const Tolerances& tol)
{
    const HermitianEig eig = hermitian_eig(rho, tol);
    const RealVector scale = eig.values.cwiseSqrt().cwiseInverse();
    return eig.vectors * scale.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

void check_projection(const Matrix& p, Index d, const Tolerances& tol)
{
    if (p.rows() != d || p.cols() != d) {
        throw DomainError("reduce: projection size does not match the generator");
    }
    const double defect = (p * p - p).norm() + hermiticity_defect(p);
    if (defect > tol.residual * std::max(1.0, p.norm())) {
        throw DomainError("reduce: p is not an orthogonal projection");
    }
}

BlockTau block_tau_unchecked(const AtomicDecomposition& decomp, std::size_t block_index, const Matrix& rho_bar,
                             const Tolerances& tol)
{
    const Block& block = decomp.blocks.at(block_index);
    const MatrixList kernel = invariant_state_kernel(block_generator(block, tol), tol);
    BlockTau out;
    out.kernel_dim = static_cast<Index>(kernel.size());
    if (out.kernel_dim != 1) {
        throw StructuralError("states",
                              "block " + std::to_string(block_index) + " semigroup on m has " +
                                  std::to_string(out.kernel_dim) + " independent invariant states, expected 1",
                              static_cast<double>(out.kernel_dim));
    }
    // The kernel vector is a state up to a complex phase.
    const Matrix& k = kernel.front();
    out.tau = normalized_density(k / k.trace());
    const double lowest = min_eigenvalue(out.tau, tol);
    if (lowest <= tol.cluster_gap) {
        throw StructuralError("states", "invariant state of block " + std::to_string(block_index) + " is not faithful",
                              lowest);
    }

    const Matrix local = block.unitary * rho_bar * block.unitary.adjoint();
    const double weight = local.trace().real();
    if (weight > tol.residual) {
        const Matrix reduced = partial_trace(local, TraceOut::left, block.dims()) / weight;
        out.cross_check_residual = (reduced - out.tau).norm();
        if (out.cross_check_residual > tol.residual) {
            throw StructuralError("states",
                                  "Tr_k of the invariant state differs from tau in block " + std::to_string(block_index),
                                  out.cross_check_residual);
        }
    }
    return out;
}

} // namespace

MatrixList invariant_state_kernel(const GkslGenerator& gen, const Tolerances& tol)
{
    return unstack_vecs(nullspace(predual_lindbladian(gen).mat, tol, generator_scale(gen)), gen.dim());
}

RecurrentProjection recurrent_projection(const GkslGenerator& gen, const Tolerances& tol)
{
    const Index d = gen.dim();
    const Matrix id = identity(d);
    const SpectralProjection limit = spectral_projection_at_zero(predual_lindbladian(gen).mat, tol);

    RecurrentProjection out;
    const Matrix mixed = id / static_cast<double>(d);
    out.rho_bar = normalized_density(unvec(limit.projector * vec(mixed), d));
    const double lowest = min_eigenvalue(out.rho_bar, tol);
    if (lowest < -tol.residual) {
        throw NumericalError("recurrent_projection: Cesàro limit has a negative eigenvalue", lowest);
    }
    out.p_R = support_projection(out.rho_bar, tol.cluster_gap);
    const Matrix q = id - out.p_R;
    for (const auto& k : invariant_state_kernel(gen, tol)) {
        const double leak = (q * k * q).norm() + (q * k * out.p_R).norm() + (out.p_R * k * q).norm();
        out.maximality_residual = std::max(out.maximality_residual, leak);
    }
    if (out.maximality_residual > tol.residual) {
        throw NumericalError("recurrent_projection: an invariant state is supported outside p_R",
                             out.maximality_residual);
    }
    out.faithful_exists = (out.p_R - id).norm() <= tol.residual;
    return out;
}

Matrix reduction_isometry(const Matrix& p)
{
    return projection_range(p);
}

GkslGenerator reduce(const GkslGenerator& gen, const Matrix& p, const Tolerances& tol)
{
    const Index d = gen.dim();
    check_projection(p, d, tol);
    const Matrix w = reduction_isometry(p);
    if (w.cols() == 0) {
        throw DomainError("reduce: p is zero");
    }
    const Matrix q = identity(d) - p;
    Matrix g = -kI * gen.hamiltonian();
    double leak = 0.0;
    for (const auto& l : gen.noise()) {
        g -= 0.5 * l.adjoint() * l;
        leak = std::max(leak, (q * l * p).norm() / std::max(1.0, l.norm()));
    }
    leak = std::max(leak, (q * g * p).norm() / std::max(1.0, g.norm()));
    if (leak > tol.residual) {
        throw DomainError("reduce: p is not subharmonic (residual " + std::to_string(leak) + ")");
    }

    MatrixList noise;
    noise.reserve(gen.noise().size());
    for (const auto& l : gen.noise()) noise.push_back(w.adjoint() * l * w);
    return GkslGenerator(hermitian_part(w.adjoint() * gen.hamiltonian() * w), std::move(noise), tol);
}

BlockTau block_tau(const GkslGenerator& gen, const AtomicDecomposition& decomp, std::size_t block_index,
                   const Tolerances& tol)
{
    const RecurrentProjection rec = recurrent_projection(gen, tol);
    if (!rec.faithful_exists) {
        throw PreconditionError("block_tau: no faithful invariant state; reduce by p_R first");
    }
    return block_tau_unchecked(decomp, block_index, rec.rho_bar, tol);
}

BlockTau block_tau(const AtomicDecomposition& decomp, std::size_t block_index, const Matrix& rho_bar,
                   const Tolerances& tol)
{
    return block_tau_unchecked(decomp, block_index, rho_bar, tol);
}

InvariantStateStructure analyze_invariant_state(const GkslGenerator& gen, const AtomicDecomposition& decomp,
                                                const Matrix& eta, const Tolerances& tol)
{
    const Index d = gen.dim();
    if (eta.rows() != d || eta.cols() != d) {
        throw DomainError("analyze_invariant_state: eta has the wrong size");
    }
    if (!decomp.has_operators || decomp.dim() != d) {
        throw PreconditionError("analyze_invariant_state: decomposition lacks block operators");
    }
    const Superoperator predual = predual_lindbladian(gen);
    const double drift = (predual.mat * vec(eta)).norm() / std::max(1.0, predual.mat.norm());
    if (drift > tol.residual || hermiticity_defect(eta) > tol.residual ||
        std::abs(eta.trace() - 1.0) > tol.residual) {
        throw DomainError("analyze_invariant_state: eta is not an invariant density");
    }
    const RecurrentProjection rec = recurrent_projection(gen, tol);
    if (!rec.faithful_exists) {
        throw PreconditionError("analyze_invariant_state: no faithful invariant state; reduce by p_R first");
    }

    InvariantStateStructure out;
    out.p_R = rec.p_R;
    out.faithful_exists = true;

    const Matrix local = decomp.to_blocks(eta);
    Matrix rebuilt = Matrix::Zero(d, d);
    double off_diagonal = 0.0;
    double commutator = 0.0;
    double tau_cross = 0.0;
    double total_weight = 0.0;
    for (std::size_t i = 0; i < decomp.blocks.size(); ++i) {
        const Block& block = decomp.blocks[i];
        for (std::size_t j = 0; j < decomp.blocks.size(); ++j) {
            if (i == j) continue;
            const Block& other = decomp.blocks[j];
            off_diagonal = std::max(
                off_diagonal, local.block(block.offset, other.offset, block.rank(), other.rank()).norm());
        }

        BlockState state;
        const Matrix diag = local.block(block.offset, block.offset, block.rank(), block.rank());
        state.weight = diag.trace().real();
        total_weight += state.weight;
        if (state.weight > tol.residual) {
            state.sigma = hermitian_part(partial_trace(diag, TraceOut::right, block.dims()) / state.weight);
        } else {
            state.sigma = identity(block.dim_k) / static_cast<double>(block.dim_k);
        }
        const BlockTau tau = block_tau_unchecked(decomp, i, rec.rho_bar, tol);
        state.tau = tau.tau;
        tau_cross = std::max(tau_cross, tau.cross_check_residual);
        state.commutator_residual =
            (state.sigma * block.K - block.K * state.sigma).norm() / std::max(1.0, block.K.norm());
        commutator = std::max(commutator, state.commutator_residual);
        if (state.commutator_residual > tol.residual) {
            throw StructuralError("states", "sigma does not commute with K in block " + std::to_string(i),
                                  state.commutator_residual);
        }
        rebuilt.block(block.offset, block.offset, block.rank(), block.rank()) =
            state.weight * kron(state.sigma, state.tau);
        out.blocks.push_back(std::move(state));
    }
    if (off_diagonal > tol.residual) {
        throw StructuralError("states", "p_i eta p_j does not vanish between distinct blocks", off_diagonal);
    }
    out.reconstruction_residual = trace_norm(local - rebuilt);
    if (out.reconstruction_residual > tol.residual) {
        throw StructuralError("states", "eta differs from the sum of weighted sigma (x) tau",
                              out.reconstruction_residual);
    }
    out.residuals["states.invariance"] = drift;
    out.residuals["states.off_diagonal_blocks"] = off_diagonal;
    out.residuals["states.sigma_k_commutator"] = commutator;
    out.residuals["states.tau_partial_trace"] = tau_cross;
    out.residuals["states.weight_sum"] = std::abs(total_weight - 1.0);
    out.residuals["states.reconstruction"] = out.reconstruction_residual;
    out.residuals["states.p_R_maximality"] = rec.maximality_residual;
    return out;
}

Matrix sample_invariant_state(const GkslGenerator& gen, Rng& rng, const Tolerances& tol)
{
    const Index d = gen.dim();
    const RecurrentProjection rec = recurrent_projection(gen, tol);
    const MatrixList kernel = invariant_state_kernel(gen, tol);

    Matrix h = Matrix::Zero(d, d);
    for (const auto& k : kernel) h += rng.symmetric() * k;
    h = hermitian_part(h);
    const double scale = operator_norm(h);
    if (scale > 0.0) h /= scale;

    // Positivity is decided on range(p_R), where every invariant state lives.
    const Matrix w = projection_range(rec.p_R);
    const Matrix hw = w.adjoint() * h * w;
    const Matrix rw = w.adjoint() * rec.rho_bar * w;
    const Matrix root = inverse_sqrt(rw, tol);
    const Matrix shifted = root * (hw - tol.cluster_gap * identity(w.cols())) * root;
    const double lambda = std::max(0.0, -min_eigenvalue(shifted, tol));
    return normalized_density(h + lambda * rec.rho_bar);
}

bool is_irreducible(const GkslGenerator& gen, const Tolerances& tol)
{
    const MatrixList kernel = invariant_state_kernel(gen, tol);
    if (kernel.size() != 1) return false;
    const Matrix& k = kernel.front();
    const Matrix state = normalized_density(k / k.trace());
    return min_eigenvalue(state, tol) > tol.cluster_gap;
}

} // namespace qmsdf
