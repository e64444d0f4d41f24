#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>

#include "sparsebp/bounds.hpp"
#include "sparsebp/certificates.hpp"
#include "sparsebp/dictionary.hpp"
#include "sparsebp/experiments.hpp"
#include "sparsebp/solver.hpp"
#include "sparsebp/sparse_model.hpp"

namespace sparsebp {

// Matrix file format: one JSON header line {n, m, normalized, description}
// followed by n CSV rows of m decimal values (row-major). The loader
// validates dimensions, finiteness and the normalized flag.
void save_matrix(const Dictionary& A, std::ostream& out);
void save_matrix(const Dictionary& A, const std::string& path);
Dictionary load_matrix(std::istream& in);
Dictionary load_matrix(const std::string& path);

// Signal JSON: {m, support[], signs[], magnitudes[]}
nlohmann::json to_json(const SparseSignal& x);
SparseSignal sparse_signal_from_json(const nlohmann::json& j);
SparseSignal load_signal(const std::string& path);
void save_signal(const SparseSignal& x, const std::string& path);

// Certificate JSON; d and s vectors only when include_vectors is set.
nlohmann::json to_json(const Certificate& cert, bool include_vectors = false);

nlohmann::json to_json(const BoundParams& params);
nlohmann::json to_json(const BoundReport& report, const BoundParams& params);

nlohmann::json to_json(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Solution& sol);
nlohmann::json to_json(const KKTReport& kkt);

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

nlohmann::json to_json(const Summary& summary, const ExperimentConfig& cfg);

nlohmann::json to_json(const LwTailResult& r);

// Plain text vector: whitespace/newline separated decimal values.
Eigen::VectorXd load_vector(const std::string& path);

// Shortest round-trip decimal formatting (std::to_chars).
std::string format_double(double v);

}  // namespace sparsebp
