#include "qmsdf/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "qmsdf/errors.hpp"

namespace qmsdf {

namespace {

MatrixList full_matrix_algebra(Index d)
{
    MatrixList basis;
    basis.reserve(static_cast<std::size_t>(d * d));
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) {
            Matrix e = Matrix::Zero(d, d);
            e(i, j) = 1.0;
            basis.push_back(std::move(e));
        }
    }
    return basis;
}

void check_sizes(std::span<const Matrix> list, Index d, const char* where)
{
    if (d < 1) {
        throw DomainError(std::string(where) + ": ambient dimension must be positive");
    }
    for (const auto& m : list) {
        if (m.rows() != d || m.cols() != d) {
            throw DomainError(std::string(where) + ": generator is not d x d");
        }
    }
}

// Orthogonalizes `v` against `basis` (two passes) and returns the remainder.
Matrix remainder(const Matrix& v, const MatrixList& basis)
{
    Matrix r = v;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) {
            r -= hs_inner(q, r) * q;
        }
    }
    return r;
}

} // namespace

StarAlgebra::StarAlgebra(Index dim, MatrixList basis)
    : dim_(dim), basis_(std::move(basis))
{
    columns_ = basis_.empty() ? Matrix(dim * dim, 0) : stack_vecs(basis_);
}

StarAlgebra StarAlgebra::from_span(Index dim, std::span<const Matrix> span, const Tolerances& tol)
{
    check_sizes(span, dim, "StarAlgebra");
    return StarAlgebra(dim, hs_orthonormalize(span, tol));
}

Matrix StarAlgebra::project(const Matrix& x) const
{
    if (basis_.empty()) return Matrix::Zero(dim_, dim_);
    const Vector coeffs = columns_.adjoint() * vec(x);
    return unvec(columns_ * coeffs, dim_);
}

Membership contains(const StarAlgebra& algebra, const Matrix& x, const Tolerances& tol)
{
    if (x.rows() != algebra.dim() || x.cols() != algebra.dim()) {
        throw DomainError("contains: operator size does not match the algebra");
    }
    const double residual = (x - algebra.project(x)).norm();
    const double scale = std::max(1.0, x.norm());
    return {residual <= tol.residual * scale, residual / scale};
}

double projector_distance(const StarAlgebra& a, const StarAlgebra& b)
{
    if (a.dim() != b.dim()) {
        throw DomainError("projector_distance: algebras live in different dimensions");
    }
    return subspace_distance(a.columns(), b.columns());
}

AlgebraResiduals star_algebra_residuals(const StarAlgebra& algebra)
{
    AlgebraResiduals out;
    const Index d = algebra.dim();
    const Matrix id = identity(d);
    out.identity = (id - algebra.project(id)).norm() / std::sqrt(static_cast<double>(d));
    const Matrix& q = algebra.columns();
    const Index r = algebra.size();
    if (r == 0) return out;
    Matrix adjoints(d * d, r);
    for (Index i = 0; i < r; ++i) {
        adjoints.col(i) = vec(algebra.basis()[static_cast<std::size_t>(i)].adjoint());
    }
    const Matrix adj_rem = adjoints - q * (q.adjoint() * adjoints);
    out.adjoint = adj_rem.colwise().norm().maxCoeff();

    Matrix products(d * d, r);
    for (Index i = 0; i < r; ++i) {
        const Matrix& bi = algebra.basis()[static_cast<std::size_t>(i)];
        for (Index j = 0; j < r; ++j) {
            products.col(j) = vec(bi * algebra.basis()[static_cast<std::size_t>(j)]);
        }
        const Matrix rem = products - q * (q.adjoint() * products);
        out.product = std::max(out.product, rem.colwise().norm().maxCoeff());
    }
    return out;
}

StarAlgebra commutant(std::span<const Matrix> generators, Index dim, const Tolerances& tol)
{
    check_sizes(generators, dim, "commutant");
    MatrixList both;
    both.reserve(2 * generators.size());
    for (const auto& g : generators) {
        both.push_back(g);
        both.push_back(g.adjoint());
    }
    const MatrixList span = hs_orthonormalize(both, tol);
    if (span.empty()) {
        return StarAlgebra(dim, full_matrix_algebra(dim));
    }
    const Matrix id = identity(dim);
    StackedNullspace stack(dim * dim);
    for (const auto& s : span) {
        stack.add_rows(sandwich_superop(s, id) - sandwich_superop(id, s));
    }
    // Rows come from unit-norm generators.
    return StarAlgebra(dim, unstack_vecs(stack.basis(tol, 1.0), dim));
}

StarAlgebra generated_algebra(std::span<const Matrix> generators, Index dim, const Tolerances& tol)
{
    check_sizes(generators, dim, "generated_algebra");
    MatrixList seeds{identity(dim)};
    for (const auto& g : generators) {
        seeds.push_back(g);
        seeds.push_back(g.adjoint());
    }
    MatrixList basis = hs_orthonormalize(seeds, tol);

    std::size_t fresh_begin = 0;
    const Index max_rounds = dim * dim;
    for (Index round = 0; round <= max_rounds; ++round) {
        const std::size_t n = basis.size();
        MatrixList candidates;
        for (std::size_t i = fresh_begin; i < n; ++i) {
            candidates.push_back(basis[i].adjoint());
            for (std::size_t j = 0; j < n; ++j) {
                candidates.push_back(basis[i] * basis[j]);
                candidates.push_back(basis[j] * basis[i]);
            }
        }
        double largest = 0.0;
        for (const auto& c : candidates) largest = std::max(largest, c.norm());
        const double cutoff = tol.rank_rel * std::max(largest, 1.0);
        for (const auto& c : candidates) {
            Matrix r = remainder(c, basis);
            const double norm = r.norm();
            if (norm > cutoff) basis.push_back(r / norm);
        }
        if (basis.size() == n) {
            return StarAlgebra(dim, std::move(basis));
        }
        fresh_begin = n;
    }
    throw NumericalError("generated_algebra: closure did not stabilize within d^2 rounds");
}

StarAlgebra center(const StarAlgebra& algebra, const Tolerances& tol)
{
    const Index d = algebra.dim();
    const Index r = algebra.size();
    if (r == 0) {
        return algebra;
    }
    // x = Σ c_k b_k is central iff [x, b_j] = 0 for every basis element b_j.
    StackedNullspace stack(r);
    Matrix block(d * d, r);
    for (Index j = 0; j < r; ++j) {
        const Matrix& bj = algebra.basis()[static_cast<std::size_t>(j)];
        for (Index k = 0; k < r; ++k) {
            const Matrix& bk = algebra.basis()[static_cast<std::size_t>(k)];
            block.col(k) = vec(bk * bj - bj * bk);
        }
        stack.add_rows(block);
    }
    const Matrix coeffs = stack.basis(tol, 1.0);
    return StarAlgebra(d, unstack_vecs(algebra.columns() * coeffs, d));
}

MatrixList iterated_commutators(const GkslGenerator& gen, const Tolerances& tol)
{
    MatrixList seeds;
    for (const auto& l : gen.noise()) {
        seeds.push_back(l);
        seeds.push_back(l.adjoint());
    }
    MatrixList basis = hs_orthonormalize(seeds, tol);
    if (basis.empty()) return basis;

    // ‖δ_H‖ equals the spread of the spectrum of H; a commutator whose new
    // component is below rank_rel times that spread adds nothing.
    const Matrix& h = gen.hamiltonian();
    const RealVector spectrum = hermitian_eig(h, tol).values;
    const double spread = spectrum(spectrum.size() - 1) - spectrum(0);
    if (spread <= tol.rank_rel * std::max(1.0, h.norm())) return basis;
    const double cutoff = tol.rank_rel * spread;

    std::vector<std::size_t> frontier(basis.size());
    for (std::size_t i = 0; i < frontier.size(); ++i) frontier[i] = i;
    const Index dim2 = gen.dim() * gen.dim();
    while (!frontier.empty() && static_cast<Index>(basis.size()) < dim2) {
        std::vector<std::size_t> next;
        for (const std::size_t i : frontier) {
            const Matrix commutator = h * basis[i] - basis[i] * h;
            Matrix r = remainder(commutator, basis);
            const double norm = r.norm();
            if (norm > cutoff) {
                basis.push_back(r / norm);
                next.push_back(basis.size() - 1);
            }
        }
        frontier = std::move(next);
    }
    return basis;
}

} // namespace qmsdf
