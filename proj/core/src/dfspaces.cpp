#include "qmsdf/dfspaces.hpp"

#include <algorithm>

#include "qmsdf/errors.hpp"
#include "qmsdf/states.hpp"

namespace qmsdf {

StarAlgebra decoherence_free_subalgebra(const GkslGenerator& gen, const Tolerances& tol)
{
    const MatrixList commutators = iterated_commutators(gen, tol);
    return commutant(commutators, gen.dim(), tol);
}

FixedPointSpace fixed_point_space(const GkslGenerator& gen, const StarAlgebra& nt, const Tolerances& tol)
{
    const Index d = gen.dim();
    FixedPointSpace out;
    out.basis = unstack_vecs(nullspace(lindbladian(gen).mat, tol, generator_scale(gen)), d);

    const StarAlgebra span(d, out.basis);
    out.closure_residual = star_algebra_residuals(span).product;
    out.is_algebra = out.closure_residual <= tol.residual;

    for (const auto& b : out.basis) {
        out.containment_residual = std::max(out.containment_residual, contains(nt, b, tol).residual);
    }
    out.contained_in_nt = out.containment_residual <= tol.residual;

    if (out.is_algebra != out.contained_in_nt) {
        throw StructuralError("dfspaces", "F(T) is an algebra iff F(T) is contained in N(T), but the tests disagree",
                              std::max(out.closure_residual, out.containment_residual));
    }
    return out;
}

FixedPointSpace fixed_point_space(const GkslGenerator& gen, const Tolerances& tol)
{
    return fixed_point_space(gen, decoherence_free_subalgebra(gen, tol), tol);
}

Superoperator ergodic_projection(const GkslGenerator& gen, const Tolerances& tol)
{
    const Superoperator generator = lindbladian(gen);
    return {gen.dim(), spectral_projection_at_zero(generator.mat, tol).projector};
}

ConvergenceReport check_ft_equals_nt_convergence(const GkslGenerator& gen, double t_max, int samples, Rng& rng,
                                                 const Tolerances& tol)
{
    if (t_max <= 0.0 || samples < 1) {
        throw DomainError("check_ft_equals_nt_convergence: need t_max > 0 and at least one sample");
    }
    const StarAlgebra nt = decoherence_free_subalgebra(gen, tol);
    const FixedPointSpace ft = fixed_point_space(gen, nt, tol);
    const double gap = subspace_distance(stack_vecs(ft.basis), nt.columns());
    if (gap > tol.residual) {
        throw PreconditionError("check_ft_equals_nt_convergence: F(T) differs from N(T)");
    }
    if (!recurrent_projection(gen, tol).faithful_exists) {
        throw PreconditionError("check_ft_equals_nt_convergence: no faithful invariant state");
    }

    const Index d = gen.dim();
    const Superoperator generator = lindbladian(gen);
    const Matrix projector = ergodic_projection(gen, tol).mat;

    Matrix xs(d * d, samples);
    for (int s = 0; s < samples; ++s) {
        Matrix x = rng.ginibre(d, d);
        xs.col(s) = vec(x / x.norm());
    }
    const Matrix limits = projector * xs;

    constexpr int steps = 100;
    const double dt = t_max / steps;
    const Matrix step = matexp(generator.mat, dt);

    ConvergenceReport out;
    Matrix current = xs;
    for (int i = 0; i <= steps; ++i) {
        if (i > 0) current = step * current;
        out.times.push_back(dt * i);
        out.distance.push_back((current - limits).colwise().norm().maxCoeff());
    }
    const int burn_in = steps / 10;
    out.monotone_after_burn_in = true;
    for (int i = burn_in + 1; i <= steps; ++i) {
        if (out.distance[static_cast<std::size_t>(i)] > out.distance[static_cast<std::size_t>(i - 1)] + tol.residual) {
            out.monotone_after_burn_in = false;
        }
    }
    out.terminal_distance = out.distance.back();
    out.converged = out.terminal_distance <= tol.residual;
    return out;
}

} // namespace qmsdf
