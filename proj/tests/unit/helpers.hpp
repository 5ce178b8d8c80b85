// Shared fixtures for the unit tests.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qmsdf/gksl.hpp"
#include "qmsdf/io.hpp"
#include "qmsdf/models.hpp"

namespace qmsdf::test {

// |e_i><e_j| in dimension d.
inline Matrix unit(Index i, Index j, Index d)
{
    Matrix m = Matrix::Zero(d, d);
    m(i, j) = 1.0;
    return m;
}

inline std::filesystem::path fixture(const std::string& name)
{
    return std::filesystem::path(QMSDF_FIXTURE_DIR) / name;
}

inline GkslGenerator load_fixture(const std::string& name)
{
    return load_problem(fixture(name)).generator();
}

#ifdef QMSDF_ORACLE_FILE
inline const nlohmann::json& frozen_oracle()
{
    static const nlohmann::json data = [] {
        std::ifstream in(QMSDF_ORACLE_FILE);
        return nlohmann::json::parse(in);
    }();
    return data;
}
#endif

// d = 3, H = e22, L = e02: F(T) is an operator system but not an algebra.
inline GkslGenerator ft_not_algebra()
{
    return GkslGenerator(unit(2, 2, 3), {unit(0, 2, 3)});
}

// 2-level amplitude damping, L = |e0><e1|.
inline GkslGenerator amplitude_damping()
{
    return GkslGenerator(Matrix::Zero(2, 2), {unit(0, 1, 2)});
}

// Irreducible two-state generic QMS with rates γ01, γ10 and energies κ.
inline GenericSpec two_level_spec(double g01 = 1.0, double g10 = 2.0, double k0 = 0.3, double k1 = -0.4)
{
    GenericSpec spec;
    spec.gamma = RealMatrix::Zero(2, 2);
    spec.gamma(0, 1) = g01;
    spec.gamma(1, 0) = g10;
    spec.kappa = RealVector(2);
    spec.kappa << k0, k1;
    return spec;
}

inline CirculantSpec circulant_spec(Index d, Index n)
{
    CirculantSpec spec;
    spec.d = d;
    spec.n = n;
    return spec;
}

inline double frob(const Matrix& a) { return a.norm(); }

} // namespace qmsdf::test
