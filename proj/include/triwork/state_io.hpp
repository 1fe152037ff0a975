#pragma once

// State files: {"n_qubits": n, "matrix": [[{"re": x, "im": y}, ...], ...]}
// or, for pure states, {"n_qubits": n, "amplitudes": [{"re": x, "im": y}, ...]}.

#include "triwork/quantum.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace triwork {

// Parses and validates; the DensityMatrix invariants are checked on load so a
// bad file fails with the violated invariant named.
DensityMatrix state_from_json(const nlohmann::json& j);
DensityMatrix load_state_file(const std::string& path);

nlohmann::json state_to_json(const DensityMatrix& rho);
void save_state_file(const DensityMatrix& rho, const std::string& path);

// Named states (ghz, w, product, mixed, singlet, zero2) or a state file path.
DensityMatrix resolve_state(const std::string& name_or_path);

} // namespace triwork
