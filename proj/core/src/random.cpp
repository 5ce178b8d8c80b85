#include "qmsdf/random.hpp"

#include <cmath>
#include <numbers>

namespace qmsdf {

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Complex Rng::complex_normal()
{
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Matrix Rng::ginibre(Index rows, Index cols)
{
    Matrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            out(i, j) = complex_normal();
    return out;
}

Matrix Rng::hermitian(Index d)
{
    return hermitian_part(ginibre(d, d));
}

Matrix Rng::unitary(Index d)
{
    const Matrix g = ginibre(d, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * identity(d);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < d; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

Matrix Rng::density(Index d)
{
    const Matrix g = ginibre(d, d);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

Vector Rng::unit_vector(Index d)
{
    Vector v = ginibre(d, 1).col(0);
    return v / v.norm();
}

} // namespace qmsdf
