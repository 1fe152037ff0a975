#include "triwork/state_io.hpp"

#include "triwork/errors.hpp"

#include <fstream>

namespace triwork {

namespace {

Complex entry(const nlohmann::json& e, const std::string& where) {
    if (!e.is_object() || !e.contains("re") || !e.contains("im") || !e["re"].is_number() || !e["im"].is_number()) {
        throw ArgumentError("state file: " + where + " must be {\"re\": number, \"im\": number}");
    }
    return {e["re"].get<double>(), e["im"].get<double>()};
}

} // namespace

DensityMatrix state_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n_qubits") || !j["n_qubits"].is_number_integer()) {
        throw ArgumentError("state file: missing integer field n_qubits");
    }
    const int n = j["n_qubits"].get<int>();
    if (n < 1 || n > kMaxQubits) {
        throw InvalidArity("state file: n_qubits = " + std::to_string(n) + " outside [1, " +
                           std::to_string(kMaxQubits) + "]");
    }
    const int dim = 1 << n;
    if (j.contains("amplitudes")) {
        const auto& a = j["amplitudes"];
        if (!a.is_array() || static_cast<int>(a.size()) != dim) {
            throw ShapeError("state file: amplitudes must have " + std::to_string(dim) + " entries");
        }
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v(i) = entry(a[static_cast<std::size_t>(i)], "amplitudes[" + std::to_string(i) + "]");
        return dm_from_pure(PureState(n, v));
    }
    if (!j.contains("matrix")) throw ArgumentError("state file: needs a matrix or amplitudes field");
    const auto& rows = j["matrix"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
        throw ShapeError("state file: matrix must have " + std::to_string(dim) + " rows");
    }
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            throw ShapeError("state file: row " + std::to_string(r) + " must have " + std::to_string(dim) + " entries");
        }
        for (int c = 0; c < dim; ++c) {
            m(r, c) = entry(row[static_cast<std::size_t>(c)],
                            "matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
    }
    return DensityMatrix(n, m);
}

DensityMatrix load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open state file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ArgumentError("state file '" + path + "' is not valid JSON: " + e.what());
    }
    return state_from_json(j);
}

nlohmann::json state_to_json(const DensityMatrix& rho) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < rho.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < rho.dim(); ++c) row.push_back({{"re", rho(r, c).real()}, {"im", rho(r, c).imag()}});
        rows.push_back(row);
    }
    return {{"n_qubits", rho.n_qubits()}, {"matrix", rows}};
}

void save_state_file(const DensityMatrix& rho, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write state file '" + path + "'");
    out << state_to_json(rho).dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

DensityMatrix resolve_state(const std::string& name_or_path) {
    if (name_or_path == "ghz") return dm_from_pure(ghz_state());
    if (name_or_path == "w") return dm_from_pure(w_state());
    if (name_or_path == "product") return dm_from_pure(basis_state(3, 0));
    if (name_or_path == "mixed") return DensityMatrix::maximally_mixed(3);
    if (name_or_path == "singlet") return dm_from_pure(bell_singlet());
    if (name_or_path == "zero2") return dm_from_pure(basis_state(2, 0));
    return load_state_file(name_or_path);
}

} // namespace triwork
