#include "qmsdf/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qmsdf/errors.hpp"

namespace qmsdf {

namespace {

Matrix matrix_unit(Index d, Index i, Index j)
{
    Matrix e = Matrix::Zero(d, d);
    e(i, j) = 1.0;
    return e;
}

Matrix power(const Matrix& a, Index p)
{
    Matrix out = identity(a.rows());
    for (Index i = 0; i < p; ++i) out = out * a;
    return out;
}

// Column v_j = (ω^{j i})_i / √d.
Matrix fourier_vectors(Index d)
{
    Matrix v(d, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((i * j) % d) / static_cast<double>(d);
            v(i, j) = std::polar(scale, angle);
        }
    }
    return v;
}

} // namespace

void validate(const GenericSpec& spec)
{
    const Index n = spec.n_states();
    if (n < 1 || spec.gamma.cols() != n || spec.kappa.size() != n) {
        throw DomainError("generic: gamma must be n x n and kappa must have n entries");
    }
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (i != j && !(spec.gamma(i, j) >= 0.0)) {
                throw DomainError("generic: negative rate gamma(" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
}

RealMatrix classical_generator(const GenericSpec& spec)
{
    validate(spec);
    RealMatrix g = spec.gamma;
    for (Index i = 0; i < g.rows(); ++i) {
        g(i, i) = 0.0;
        g(i, i) = -g.row(i).sum();
    }
    return g;
}

GkslGenerator build_generic(const GenericSpec& spec, const Tolerances& tol)
{
    validate(spec);
    const Index n = spec.n_states();
    Matrix h = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) h(i, i) = spec.kappa(i);
    MatrixList noise;
    for (Index m = 0; m < n; ++m) {
        for (Index j = 0; j < n; ++j) {
            if (m != j && spec.gamma(m, j) > 0.0) {
                noise.push_back(std::sqrt(spec.gamma(m, j)) * matrix_unit(n, j, m));
            }
        }
    }
    GkslGenerator gen(std::move(h), std::move(noise), tol);

    const RealMatrix gamma = classical_generator(spec);
    const Superoperator l = lindbladian(gen);
    double worst = 0.0;
    for (Index j = 0; j < n; ++j) {
        const Matrix image = l.apply(matrix_unit(n, j, j));
        for (Index i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(image(i, i) - gamma(i, j)));
        }
    }
    if (worst > tol.residual * std::max(1.0, gamma.norm())) {
        throw NumericalError("build_generic: diagonal restriction differs from the classical generator", worst);
    }
    return gen;
}

ChainClasses communication_classes(const GenericSpec& spec)
{
    validate(spec);
    const Index n = spec.n_states();
    // Q_ij = γ_ij + 2^{-j} 1{γ_ji > 0} makes communication symmetric: i and j
    // talk iff γ_ij > 0 or γ_ji > 0.
    std::vector<Index> label(static_cast<std::size_t>(n), -1);
    ChainClasses out;
    for (Index s = 0; s < n; ++s) {
        bool connected = false;
        for (Index j = 0; j < n; ++j) {
            if (j != s && (spec.gamma(s, j) > 0.0 || spec.gamma(j, s) > 0.0)) connected = true;
        }
        if (!connected) {
            out.isolated.push_back(s);
            continue;
        }
        if (label[static_cast<std::size_t>(s)] >= 0) continue;
        const auto id = static_cast<Index>(out.classes.size());
        std::vector<Index> members;
        std::vector<Index> stack{s};
        label[static_cast<std::size_t>(s)] = id;
        while (!stack.empty()) {
            const Index a = stack.back();
            stack.pop_back();
            members.push_back(a);
            for (Index b = 0; b < n; ++b) {
                if (b == a || label[static_cast<std::size_t>(b)] >= 0) continue;
                if (spec.gamma(a, b) > 0.0 || spec.gamma(b, a) > 0.0) {
                    label[static_cast<std::size_t>(b)] = id;
                    stack.push_back(b);
                }
            }
        }
        std::sort(members.begin(), members.end());
        out.classes.push_back(std::move(members));
    }
    return out;
}

StarAlgebra expected_generic_nt(const GenericSpec& spec, const Tolerances& tol)
{
    const Index n = spec.n_states();
    const ChainClasses chain = communication_classes(spec);
    MatrixList generators;
    for (const auto& cls : chain.classes) {
        Matrix p = Matrix::Zero(n, n);
        for (const Index i : cls) p(i, i) = 1.0;
        generators.push_back(std::move(p));
    }
    for (const Index i : chain.isolated) {
        for (const Index j : chain.isolated) generators.push_back(matrix_unit(n, i, j));
    }
    return generated_algebra(generators, n, tol);
}

Index CirculantSpec::k() const
{
    return std::gcd(n, d);
}

Index CirculantSpec::m() const
{
    return d / k();
}

void validate(const CirculantSpec& spec)
{
    if (spec.d < 2) {
        throw DomainError("circulant: d must be at least 2");
    }
    if (spec.n < 1 || spec.n > spec.d - 1) {
        throw DomainError("circulant: n must lie in 1..d-1");
    }
    if (spec.z1 * spec.z2 == Complex{0.0, 0.0}) {
        throw DomainError("circulant: z1 * z2 must be non-zero");
    }
    if (spec.mode == CirculantHamiltonian::factor) {
        const Index k = spec.k();
        const Index m = spec.m();
        if (spec.K.rows() != k || spec.K.cols() != k || spec.M0.rows() != m || spec.M0.cols() != m) {
            throw DomainError("circulant: K must be k x k and M0 must be m x m with k = gcd(n, d), m = d / k");
        }
    }
}

Matrix circulant_shift(Index d)
{
    Matrix j = Matrix::Zero(d, d);
    for (Index c = 0; c < d; ++c) j((c + d - 1) % d, c) = 1.0;
    return j;
}

Matrix circulant_fourier(Index d, Index m)
{
    if (m < 1 || d % m != 0) {
        throw DomainError("circulant_fourier: m must divide d");
    }
    // F v_j = e_j with j = m r + h, so F = V*.
    return fourier_vectors(d).adjoint();
}

Matrix circulant_tridiagonal_m0(Index m)
{
    if (m < 1) {
        throw DomainError("circulant_tridiagonal_m0: m must be positive");
    }
    Matrix out = Matrix::Zero(m, m);
    for (Index h = 0; h < m; ++h) {
        out((h + 1) % m, h) += 1.0;
        out((h + m - 1) % m, h) += 1.0;
    }
    return out;
}

GkslGenerator build_circulant(const CirculantSpec& spec, const Tolerances& tol)
{
    validate(spec);
    const Index d = spec.d;
    const Matrix j = circulant_shift(d);
    const Matrix v = fourier_vectors(d);

    double eigen_residual = 0.0;
    for (Index c = 0; c < d; ++c) {
        const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(d));
        eigen_residual = std::max(eigen_residual, (j * v.col(c) - omega * v.col(c)).norm());
    }
    if (eigen_residual > tol.residual) {
        throw NumericalError("build_circulant: Fourier vectors are not eigenvectors of J", eigen_residual);
    }

    Matrix h = Matrix::Zero(d, d);
    if (spec.mode == CirculantHamiltonian::factor) {
        const Index k = spec.k();
        const Index m = spec.m();
        const Matrix f = circulant_fourier(d, m);
        h = f.adjoint() * (kron(spec.K, identity(m)) + kron(identity(k), spec.M0)) * f;
    }
    const Matrix jn = power(j, spec.n);
    MatrixList noise{spec.z1 * jn, spec.z2 * jn.adjoint()};
    return GkslGenerator(hermitian_part(h), std::move(noise), tol);
}

MatrixList expected_circulant_projections(Index d, Index n)
{
    const Index k = std::gcd(n, d);
    const Index m = d / k;
    const Matrix v = fourier_vectors(d);
    MatrixList out;
    for (Index h = 0; h < m; ++h) {
        Matrix p = Matrix::Zero(d, d);
        for (Index r = 0; r < k; ++r) {
            const Vector col = v.col(m * r + h);
            p += col * col.adjoint();
        }
        out.push_back(std::move(p));
    }
    return out;
}

StarAlgebra expected_circulant_nt(Index d, Index n, const Tolerances& tol)
{
    const Index k = std::gcd(n, d);
    const Matrix jk = power(circulant_shift(d), k);
    const MatrixList gens{jk, jk.adjoint()};
    return commutant(gens, d, tol);
}

} // namespace qmsdf
