#include "qmsdf/io.hpp"

#include <fstream>

#include "qmsdf/errors.hpp"

namespace qmsdf {

using nlohmann::json;

json complex_to_json(Complex z)
{
    return json::array({z.real(), z.imag()});
}

json matrix_to_json(const Matrix& m)
{
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json real_vector_to_json(const RealVector& v)
{
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json tolerances_to_json(const Tolerances& tol)
{
    return {{"rank_rel", tol.rank_rel},
            {"cluster_gap", tol.cluster_gap},
            {"herm", tol.herm},
            {"residual", tol.residual},
            {"decay_margin", tol.decay_margin}};
}

Complex complex_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError("complex number must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrix_from_json(const json& j, std::optional<Index> expected_dim)
{
    if (!j.is_array() || j.empty()) {
        throw ParseError("matrix must be a non-empty array of rows");
    }
    const auto rows = static_cast<Index>(j.size());
    if (!j[0].is_array() || j[0].empty()) {
        throw ParseError("matrix rows must be non-empty arrays");
    }
    const auto cols = static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw ParseError("matrix rows have different lengths");
        }
        for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    if (expected_dim && (rows != *expected_dim || cols != *expected_dim)) {
        throw ParseError("matrix is " + std::to_string(rows) + "x" + std::to_string(cols) + ", expected " +
                         std::to_string(*expected_dim) + "x" + std::to_string(*expected_dim));
    }
    return m;
}

ProblemFile parse_problem(const json& j)
{
    if (!j.is_object()) {
        throw ParseError("problem file must be a JSON object");
    }
    ProblemFile out;
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
        throw ParseError("\"dim\" must be a positive integer");
    }
    out.dim = static_cast<Index>(j["dim"].get<long long>());
    if (!j.contains("H")) {
        throw ParseError("missing \"H\"");
    }
    out.H = matrix_from_json(j["H"], out.dim);
    if (j.contains("L")) {
        if (!j["L"].is_array()) throw ParseError("\"L\" must be an array of matrices");
        for (const auto& m : j["L"]) out.L.push_back(matrix_from_json(m, out.dim));
    }
    if (j.contains("options")) {
        const json& opts = j["options"];
        if (!opts.is_object()) throw ParseError("\"options\" must be an object");
        if (opts.contains("tolerances")) {
            const json& t = opts["tolerances"];
            if (!t.is_object()) throw ParseError("\"tolerances\" must be an object");
            const auto read = [&](const char* key, double& field) {
                if (!t.contains(key)) return;
                if (!t[key].is_number()) throw ParseError(std::string("tolerance ") + key + " must be a number");
                field = t[key].get<double>();
            };
            read("rank_rel", out.options.tol.rank_rel);
            read("cluster_gap", out.options.tol.cluster_gap);
            read("herm", out.options.tol.herm);
            read("residual", out.options.tol.residual);
            read("decay_margin", out.options.tol.decay_margin);
        }
        if (opts.contains("seed")) {
            if (!opts["seed"].is_number_unsigned()) throw ParseError("\"seed\" must be an unsigned integer");
            out.options.seed = opts["seed"].get<std::uint64_t>();
        }
        if (opts.contains("t_samples")) {
            if (!opts["t_samples"].is_array()) throw ParseError("\"t_samples\" must be an array");
            for (const auto& t : opts["t_samples"]) {
                if (!t.is_number()) throw ParseError("\"t_samples\" entries must be numbers");
                out.options.t_samples.push_back(t.get<double>());
            }
        }
    }
    try {
        out.options.tol.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return out;
}

ProblemFile load_problem(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return parse_problem(j);
}

json problem_to_json(const ProblemFile& problem)
{
    json out;
    out["dim"] = problem.dim;
    out["H"] = matrix_to_json(problem.H);
    out["L"] = json::array();
    for (const auto& l : problem.L) out["L"].push_back(matrix_to_json(l));
    json opts = json::object();
    opts["tolerances"] = tolerances_to_json(problem.options.tol);
    if (problem.options.seed) opts["seed"] = *problem.options.seed;
    if (!problem.options.t_samples.empty()) opts["t_samples"] = problem.options.t_samples;
    out["options"] = std::move(opts);
    return out;
}

namespace {

// One matrix row per line keeps problem files diffable.
void write_matrix(std::ostream& out, const Matrix& m, const std::string& indent)
{
    out << "[\n";
    for (Index i = 0; i < m.rows(); ++i) {
        out << indent << "  [";
        for (Index j = 0; j < m.cols(); ++j) {
            out << (j > 0 ? ", " : "") << complex_to_json(m(i, j)).dump();
        }
        out << "]" << (i + 1 < m.rows() ? "," : "") << "\n";
    }
    out << indent << "]";
}

} // namespace

void save_problem(const std::filesystem::path& path, const ProblemFile& problem)
{
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path.string());
    }
    out << "{\n  \"dim\": " << problem.dim << ",\n  \"H\": ";
    write_matrix(out, problem.H, "  ");
    out << ",\n  \"L\": [";
    for (std::size_t l = 0; l < problem.L.size(); ++l) {
        out << (l > 0 ? ", " : "\n    ");
        write_matrix(out, problem.L[l], "    ");
    }
    out << (problem.L.empty() ? "]" : "\n  ]");
    json opts = problem_to_json(problem)["options"];
    out << ",\n  \"options\": " << opts.dump() << "\n}\n";
}

ProblemFile problem_from_generator(const GkslGenerator& gen)
{
    ProblemFile out;
    out.dim = gen.dim();
    out.H = gen.hamiltonian();
    out.L = gen.noise();
    return out;
}

} // namespace qmsdf
