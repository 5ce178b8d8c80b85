#include "qmsdf/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmsdf/dfspaces.hpp"
#include "qmsdf/errors.hpp"
#include "qmsdf/states.hpp"

namespace qmsdf {

namespace {

constexpr int kCompatibilitySamples = 20;
constexpr int kModuleSamples = 5;
constexpr double kDynamicsTime = 0.7;

Matrix apply_expectation(const AtomicDecomposition& decomp, const MatrixList& taus, const Matrix& x)
{
    const Index d = decomp.dim();
    const Matrix local = decomp.to_blocks(x);
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < decomp.blocks.size(); ++i) {
        const Block& b = decomp.blocks[i];
        const Matrix weighted =
            kron(identity(b.dim_k), taus[i]) * local.block(b.offset, b.offset, b.rank(), b.rank());
        out.block(b.offset, b.offset, b.rank(), b.rank()) =
            kron(partial_trace(weighted, TraceOut::right, b.dims()), identity(b.dim_m));
    }
    return decomp.from_blocks(out);
}

Matrix random_element(const StarAlgebra& algebra, Rng& rng)
{
    Matrix x = Matrix::Zero(algebra.dim(), algebra.dim());
    for (const auto& b : algebra.basis()) x += rng.complex_normal() * b;
    return x;
}

double lambda_distance(const std::vector<Complex>& a, const std::vector<Complex>& b)
{
    double worst = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) worst = std::max(worst, std::abs(a[l] - b[l]));
    return worst;
}

void require(double residual, const char* what, const Tolerances& tol)
{
    if (residual > tol.residual) {
        throw StructuralError("decoherence", what, residual);
    }
}

} // namespace

const char* to_string(DfKind kind)
{
    return kind == DfKind::subspace ? "subspace" : "subsystem";
}

Superoperator conditional_expectation(const AtomicDecomposition& decomp, const MatrixList& taus)
{
    if (taus.size() != decomp.blocks.size()) {
        throw DomainError("conditional_expectation: one tau per block is required");
    }
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const Index m = decomp.blocks[i].dim_m;
        if (taus[i].rows() != m || taus[i].cols() != m) {
            throw DomainError("conditional_expectation: tau " + std::to_string(i) + " has the wrong size");
        }
    }
    const Index d = decomp.dim();
    Superoperator out{d, Matrix(d * d, d * d)};
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) {
            Matrix e = Matrix::Zero(d, d);
            e(i, j) = 1.0;
            out.mat.col(i + j * d) = vec(apply_expectation(decomp, taus, e));
        }
    }
    return out;
}

EidCertificate eid_certificate(const GkslGenerator& gen, const StarAlgebra& nt, const AtomicDecomposition& decomp,
                               Rng& rng, const Tolerances& tol)
{
    const Index d = gen.dim();
    const Matrix id = identity(d);
    EidCertificate out;

    const RecurrentProjection rec = recurrent_projection(gen, tol);
    out.faithful_exists = rec.faithful_exists;
    if (!rec.faithful_exists) {
        out.reason = "no faithful invariant state; reduce by p_R and retry";
        return out;
    }

    MatrixList taus;
    for (std::size_t i = 0; i < decomp.blocks.size(); ++i) {
        taus.push_back(block_tau(decomp, i, rec.rho_bar, tol).tau);
    }
    out.E = conditional_expectation(decomp, taus);
    const Matrix& e = out.E.mat;
    const double escale = std::max(1.0, e.norm());

    const double idempotency = (e * e - e).norm() / escale;
    const double unital = (out.E.apply(id) - id).norm();
    const Matrix& q = nt.columns();
    const double fixes_nt = (e * q - q).norm();
    const double into_nt = (e - q * (q.adjoint() * e)).norm() / escale;
    require(idempotency, "E is not idempotent", tol);
    require(unital, "E(1) differs from 1", tol);
    require(std::max(fixes_nt, into_nt), "range of E differs from N(T)", tol);

    double compatibility = 0.0;
    double positivity = 0.0;
    for (int s = 0; s < kCompatibilitySamples; ++s) {
        Matrix x = rng.ginibre(d, d);
        x /= x.norm();
        const Complex before = (rec.rho_bar * x).trace();
        const Complex after = (rec.rho_bar * out.E.apply(x)).trace();
        compatibility = std::max(compatibility, std::abs(before - after));
        const Matrix image = hermitian_part(out.E.apply(x.adjoint() * x));
        positivity = std::max(positivity, -hermitian_eig(image, tol).values(0));
    }
    double module = 0.0;
    for (int s = 0; s < kModuleSamples; ++s) {
        Matrix a = random_element(nt, rng);
        Matrix b = random_element(nt, rng);
        a /= a.norm();
        b /= b.norm();
        Matrix x = rng.ginibre(d, d);
        x /= x.norm();
        module = std::max(module, (out.E.apply(a * x * b) - a * out.E.apply(x) * b).norm());
    }
    require(compatibility, "rho_bar o E differs from rho_bar", tol);
    require(module, "E is not an N(T)-bimodule map", tol);
    require(positivity, "E is not positive on samples", tol);

    const Matrix m2 = nullspace(e, tol);
    out.m2_dim = m2.cols();
    out.m2_basis = unstack_vecs(m2, d);
    out.residuals["eid.E_idempotent"] = idempotency;
    out.residuals["eid.E_unital"] = unital;
    out.residuals["eid.E_range"] = std::max(fixes_nt, into_nt);
    out.residuals["eid.E_state_compatibility"] = compatibility;
    out.residuals["eid.E_module"] = module;
    out.residuals["eid.E_positivity"] = std::max(0.0, positivity);
    out.residuals["eid.direct_sum_dimension"] = static_cast<double>(std::abs(nt.size() + out.m2_dim - d * d));

    if (out.m2_dim == 0) {
        out.spectral_abscissa_m2 = -std::numeric_limits<double>::infinity();
        out.reason = "M_2 trivial";
        return out;
    }
    const Matrix generator = lindbladian(gen).mat;
    const Matrix image = generator * m2;
    const double invariance = (e * image).norm() / std::max(1.0, generator.norm());
    out.residuals["eid.M2_invariance"] = invariance;
    require(invariance, "L does not map M_2 into itself", tol);

    out.spectral_abscissa_m2 = spectral_abscissa(m2.adjoint() * image);
    out.eid_holds = out.spectral_abscissa_m2 <= -tol.decay_margin;
    if (!out.eid_holds) out.reason = "spectral abscissa on M_2 is not below -decay_margin";
    return out;
}

EidCertificate eid_certificate(const GkslGenerator& gen, Rng& rng, const Tolerances& tol)
{
    const StarAlgebra nt = decoherence_free_subalgebra(gen, tol);
    const AtomicDecomposition decomp = decompose(gen, nt, rng, tol);
    return eid_certificate(gen, nt, decomp, rng, tol);
}

DfSubsystemReport df_subsystems(const GkslGenerator& gen, const AtomicDecomposition& decomp, Rng& rng,
                                const Tolerances& tol)
{
    if (!decomp.has_operators) {
        throw PreconditionError("df_subsystems: decomposition lacks block operators");
    }
    DfSubsystemReport out;
    std::vector<std::size_t> subspaces;
    for (std::size_t i = 0; i < decomp.blocks.size(); ++i) {
        const Block& b = decomp.blocks[i];
        DfEntry entry{i, b.dim_k, b.dim_m, DfKind::subsystem, {}};
        if (b.dim_m == 1) {
            entry.kind = DfKind::subspace;
            for (const auto& m : b.Ms) {
                entry.lambda.push_back(m(0, 0));
                if (std::abs(m(0, 0).imag()) > tol.residual) out.nonreal_scalars = true;
            }
            subspaces.push_back(i);
        }
        out.entries.push_back(std::move(entry));
    }

    // Greedy grouping that keeps every pair within tolerance.
    for (const std::size_t i : subspaces) {
        const auto& li = out.entries[i].lambda;
        bool placed = false;
        for (auto& group : out.merged_subspaces) {
            const bool close = std::all_of(group.begin(), group.end(), [&](std::size_t j) {
                return lambda_distance(li, out.entries[j].lambda) <= tol.residual;
            });
            if (close) {
                group.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) out.merged_subspaces.push_back({i});
    }

    if (!out.merged_subspaces.empty()) {
        const Index d = gen.dim();
        const Matrix step = matexp(predual_lindbladian(gen).mat, kDynamicsTime);
        double worst = 0.0;
        for (const auto& group : out.merged_subspaces) {
            Vector u = Vector::Zero(d);
            Matrix k = Matrix::Zero(d, d);
            for (const std::size_t j : group) {
                const Block& b = decomp.blocks[j];
                u += b.unitary.adjoint() * rng.unit_vector(b.dim_k);
                k += b.unitary.adjoint() * b.K * b.unitary;
            }
            u.normalize();
            const Matrix rho = u * u.adjoint();
            const Matrix evolved = unvec(step * vec(rho), d);
            const Matrix w = matexp(-Complex{0.0, 1.0} * k, kDynamicsTime);
            const double res = (evolved - w * rho * w.adjoint()).norm();
            out.merged_dynamics_residual.push_back(res);
            worst = std::max(worst, res);
        }
        out.residuals["df.subspace_unitary_dynamics"] = worst;
    }
    return out;
}

} // namespace qmsdf
