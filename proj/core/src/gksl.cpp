#include "qmsdf/gksl.hpp"

#include <algorithm>
#include <cmath>

#include "qmsdf/errors.hpp"

namespace qmsdf {

namespace {

const Complex kI{0.0, 1.0};

} // namespace

GkslGenerator::GkslGenerator(Matrix hamiltonian, MatrixList noise, const Tolerances& tol)
    : hamiltonian_(std::move(hamiltonian))
{
    const Index d = hamiltonian_.rows();
    if (d < 1 || hamiltonian_.cols() != d) {
        throw DomainError("gksl: H must be a non-empty square matrix");
    }
    if (hermiticity_defect(hamiltonian_) > tol.herm * std::max(hamiltonian_.norm(), 1e-300)) {
        throw DomainError("gksl: H is not Hermitian within tolerance");
    }
    for (std::size_t l = 0; l < noise.size(); ++l) {
        if (noise[l].rows() != d || noise[l].cols() != d) {
            throw DomainError("gksl: noise operator " + std::to_string(l) + " is not " + std::to_string(d) +
                              "x" + std::to_string(d));
        }
        if (noise[l].norm() <= tol.rank_rel) {
            warnings_.push_back("dropped noise operator " + std::to_string(l) + " (Frobenius norm below rank_rel)");
            continue;
        }
        noise_.push_back(std::move(noise[l]));
    }
}

double generator_scale(const GkslGenerator& gen)
{
    double noise = 0.0;
    for (const auto& l : gen.noise()) noise += l.squaredNorm();
    return std::max(gen.hamiltonian().norm(), noise);
}

Superoperator hamiltonian_part(const GkslGenerator& gen)
{
    const Index d = gen.dim();
    const Matrix& h = gen.hamiltonian();
    const Matrix id = identity(d);
    return {d, kI * (sandwich_superop(h, id) - sandwich_superop(id, h))};
}

Superoperator dissipative_part(const GkslGenerator& gen)
{
    const Index d = gen.dim();
    const Matrix id = identity(d);
    Matrix mat = Matrix::Zero(d * d, d * d);
    for (const auto& l : gen.noise()) {
        const Matrix ll = l.adjoint() * l;
        mat += sandwich_superop(l.adjoint(), l);
        mat -= 0.5 * (sandwich_superop(ll, id) + sandwich_superop(id, ll));
    }
    return {d, std::move(mat)};
}

Superoperator lindbladian(const GkslGenerator& gen)
{
    Superoperator out = hamiltonian_part(gen);
    out.mat += dissipative_part(gen).mat;
    return out;
}

Superoperator predual_lindbladian(const GkslGenerator& gen)
{
    const Index d = gen.dim();
    const Matrix& h = gen.hamiltonian();
    const Matrix id = identity(d);
    Matrix mat = -kI * (sandwich_superop(h, id) - sandwich_superop(id, h));
    for (const auto& l : gen.noise()) {
        const Matrix ll = l.adjoint() * l;
        mat += sandwich_superop(l, l.adjoint());
        mat -= 0.5 * (sandwich_superop(ll, id) + sandwich_superop(id, ll));
    }
    return {d, std::move(mat)};
}

Superoperator conjugation(const Matrix& u)
{
    return {u.rows(), sandwich_superop(u, u.adjoint())};
}

Matrix evolve(const Superoperator& generator, const Matrix& x, double t)
{
    if (t < 0.0) {
        throw DomainError("evolve: t must be non-negative");
    }
    if (x.rows() != generator.dim || x.cols() != generator.dim) {
        throw DomainError("evolve: operator size does not match the generator");
    }
    return unvec(matexp(generator.mat, t) * vec(x), generator.dim);
}

Matrix evolve(const GkslGenerator& gen, const Matrix& x, double t, Picture picture)
{
    if (t < 0.0) {
        throw DomainError("evolve: t must be non-negative");
    }
    const Superoperator generator =
        picture == Picture::heisenberg ? lindbladian(gen) : predual_lindbladian(gen);
    return evolve(generator, x, t);
}

GkslGenerator gauge_transform(const GkslGenerator& gen, const Matrix& u, const Vector& z, double c,
                              const Tolerances& tol)
{
    const auto count = static_cast<Index>(gen.noise().size());
    if (u.rows() != count || u.cols() != count || z.size() != count) {
        throw DomainError("gauge_transform: u must be |Ls|x|Ls| and z must have |Ls| entries");
    }
    if (count > 0 && (u.adjoint() * u - identity(count)).norm() > tol.residual) {
        throw DomainError("gauge_transform: u is not unitary");
    }
    const Index d = gen.dim();
    const Matrix id = identity(d);
    MatrixList mixed(static_cast<std::size_t>(count), Matrix::Zero(d, d));
    for (Index l = 0; l < count; ++l) {
        for (Index m = 0; m < count; ++m) {
            mixed[static_cast<std::size_t>(l)] += u(l, m) * gen.noise()[static_cast<std::size_t>(m)];
        }
    }
    Matrix x = Matrix::Zero(d, d);
    for (Index m = 0; m < count; ++m) {
        x += std::conj(z(m)) * mixed[static_cast<std::size_t>(m)];
    }
    MatrixList shifted;
    shifted.reserve(mixed.size());
    for (Index l = 0; l < count; ++l) {
        shifted.push_back(mixed[static_cast<std::size_t>(l)] + z(l) * id);
    }
    Matrix h = gen.hamiltonian() + c * id + (x - x.adjoint()) / (2.0 * kI);
    return GkslGenerator(hermitian_part(h), std::move(shifted), tol);
}

} // namespace qmsdf
