// io.hpp: JSON wire format for problems and matrices
//
// A complex number is [re, im]; a matrix is a row-major array of rows. The
// same encoding is used for problem files and reports.
//
//   {
//     "dim": 2,
//     "H": [[[0,0],[0,0]], [[0,0],[0,0]]],
//     "L": [ [[[0,0],[1,0]], [[0,0],[0,0]]] ],
//     "options": { "tolerances": {"rank_rel": 1e-9}, "seed": 24301, "t_samples": [0.5, 1.0] }
//   }

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmsdf/gksl.hpp"

namespace qmsdf {

// Malformed input file: bad JSON, missing fields, wrong shapes.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProblemOptions {
    Tolerances tol;
    std::optional<std::uint64_t> seed;
    std::vector<double> t_samples;
};

struct ProblemFile {
    Index dim = 0;
    Matrix H;
    MatrixList L;
    ProblemOptions options;

    GkslGenerator generator() const { return GkslGenerator(H, L, options.tol); }
};

nlohmann::json complex_to_json(Complex z);
nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json real_vector_to_json(const RealVector& v);
nlohmann::json tolerances_to_json(const Tolerances& tol);

// Throws ParseError on malformed input. Expected size is checked when given.
Complex complex_from_json(const nlohmann::json& j);
Matrix matrix_from_json(const nlohmann::json& j, std::optional<Index> expected_dim = std::nullopt);

ProblemFile parse_problem(const nlohmann::json& j);
ProblemFile load_problem(const std::filesystem::path& path);

nlohmann::json problem_to_json(const ProblemFile& problem);
void save_problem(const std::filesystem::path& path, const ProblemFile& problem);

ProblemFile problem_from_generator(const GkslGenerator& gen);

} // namespace qmsdf
