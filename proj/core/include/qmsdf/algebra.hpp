// algebra.hpp: numeric matrix *-algebras
//
// Every algebra is stored as a Hilbert–Schmidt orthonormal basis. Equality of
// algebras is decided by comparing the orthogonal projections onto their
// spans, which is independent of the chosen basis.

#pragma once

#include <algorithm>
#include <span>

#include "qmsdf/gksl.hpp"
#include "qmsdf/linalg.hpp"

namespace qmsdf {

class StarAlgebra {
public:
    // `basis` must already be HS-orthonormal.
    StarAlgebra(Index dim, MatrixList basis);

    // Orthonormalizes an arbitrary spanning list.
    static StarAlgebra from_span(Index dim, std::span<const Matrix> span, const Tolerances& tol);

    Index dim() const { return dim_; }
    Index size() const { return static_cast<Index>(basis_.size()); }
    const MatrixList& basis() const { return basis_; }

    // d² × size matrix whose columns are vec(b_i).
    const Matrix& columns() const { return columns_; }

    Matrix project(const Matrix& x) const;

private:
    Index dim_;
    MatrixList basis_;
    Matrix columns_;
};

struct Membership {
    bool member = false;
    double residual = 0.0;
};

// ‖x − Proj(x)‖_F ≤ residual · max(1, ‖x‖_F).
Membership contains(const StarAlgebra& algebra, const Matrix& x, const Tolerances& tol);

// ‖P_A − P_B‖_F on the d² × d² span projectors.
double projector_distance(const StarAlgebra& a, const StarAlgebra& b);

// Largest residual of each *-algebra axiom on the basis.
struct AlgebraResiduals {
    double identity = 0.0;
    double adjoint = 0.0;
    double product = 0.0;
    double max() const { return std::max({identity, adjoint, product}); }
};
AlgebraResiduals star_algebra_residuals(const StarAlgebra& algebra);

// {x : [x, s] = 0 for all s ∈ S ∪ S*}.
StarAlgebra commutant(std::span<const Matrix> generators, Index dim, const Tolerances& tol);

// Smallest unital *-algebra containing the generators.
StarAlgebra generated_algebra(std::span<const Matrix> generators, Index dim, const Tolerances& tol);

// A ∩ A'.
StarAlgebra center(const StarAlgebra& algebra, const Tolerances& tol);

// Orthonormal spanning set of span{δ_H^n(L_ℓ), δ_H^n(L_ℓ*) : n ≥ 0}, where
// δ_H(x) = [H, x].
MatrixList iterated_commutators(const GkslGenerator& gen, const Tolerances& tol);

} // namespace qmsdf
