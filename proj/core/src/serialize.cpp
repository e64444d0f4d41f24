#include "sparsebp/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sparsebp/errors.hpp"

namespace sparsebp {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void save_matrix(const Dictionary& A, std::ostream& out) {
  json header = {{"n", A.rows()},
                 {"m", A.cols()},
                 {"normalized", A.is_normalized()},
                 {"description", A.description()}};
  out << header.dump() << "\n";
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) {
      if (j) out << ',';
      out << format_double(A.entries()(i, j));
    }
    out << "\n";
  }
}

void save_matrix(const Dictionary& A, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  save_matrix(A, out);
  if (!out) throw IoError("failed writing " + path);
}

Dictionary load_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("matrix file: missing header");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw IoError(std::string("matrix file: bad JSON header: ") + e.what());
  }
  const int n = header.at("n").get<int>();
  const int m = header.at("m").get<int>();
  const bool claims_normalized = header.value("normalized", false);
  const std::string description = header.value("description", "");
  if (n < 1 || m < n) throw IoError("matrix file: need m >= n >= 1");
  Eigen::MatrixXd entries(n, m);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw IoError("matrix file: expected " + std::to_string(n) +
                    " rows, got " + std::to_string(i));
    }
    std::stringstream row(line);
    std::string cell;
    for (int j = 0; j < m; ++j) {
      if (!std::getline(row, cell, ',')) {
        throw IoError("matrix file: row " + std::to_string(i) + " has fewer than " +
                      std::to_string(m) + " columns");
      }
      try {
        entries(i, j) = std::stod(cell);
      } catch (const std::exception&) {
        throw IoError("matrix file: bad value at row " + std::to_string(i) +
                      " col " + std::to_string(j));
      }
      if (!std::isfinite(entries(i, j))) {
        throw IoError("matrix file: non-finite value at row " +
                      std::to_string(i) + " col " + std::to_string(j));
      }
    }
    if (std::getline(row, cell, ',')) {
      throw IoError("matrix file: row " + std::to_string(i) +
                    " has more than " + std::to_string(m) + " columns");
    }
  }
  Dictionary A(std::move(entries), description);
  if (claims_normalized && !A.is_normalized()) {
    throw IoError("matrix file: header claims normalized columns but they are not");
  }
  return A;
}

Dictionary load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return load_matrix(in);
}

json to_json(const SparseSignal& x) {
  json j;
  j["m"] = x.m;
  j["support"] = x.support;
  j["signs"] = std::vector<double>(x.signs.data(), x.signs.data() + x.signs.size());
  j["magnitudes"] = std::vector<double>(x.magnitudes.data(),
                                        x.magnitudes.data() + x.magnitudes.size());
  return j;
}

SparseSignal sparse_signal_from_json(const json& j) {
  SparseSignal x;
  try {
    x.m = j.at("m").get<int>();
    x.support = j.at("support").get<std::vector<int>>();
    const auto signs = j.at("signs").get<std::vector<double>>();
    const auto mags = j.at("magnitudes").get<std::vector<double>>();
    if (signs.size() != x.support.size() || mags.size() != x.support.size()) {
      throw IoError("signal: support/signs/magnitudes lengths differ");
    }
    x.signs = Eigen::Map<const Eigen::VectorXd>(signs.data(), signs.size());
    x.magnitudes = Eigen::Map<const Eigen::VectorXd>(mags.data(), mags.size());
  } catch (const json::exception& e) {
    throw IoError(std::string("signal JSON: ") + e.what());
  }
  for (double s : x.signs) {
    if (s != 1.0 && s != -1.0) throw IoError("signal: signs must be +-1");
  }
  int prev = -1;
  for (int idx : x.support) {
    if (idx <= prev || idx >= x.m) {
      throw IoError("signal: support must be strictly increasing in [0, m)");
    }
    prev = idx;
  }
  return x;
}

SparseSignal load_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(std::string("signal JSON: ") + e.what());
  }
  return sparse_signal_from_json(j);
}

void save_signal(const SparseSignal& x, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << to_json(x).dump(2) << "\n";
}

json to_json(const Certificate& cert, bool include_vectors) {
  json j;
  j["invertible"] = cert.invertible;
  if (cert.invertible) {
    j["ic"] = cert.ic;
    j["gram_inv_spectral"] = cert.gram_inv_spectral;
    j["d_norm"] = cert.d_norm;
    if (include_vectors) {
      j["d"] = std::vector<double>(cert.d.data(), cert.d.data() + cert.d.size());
      j["s"] = std::vector<double>(cert.s.data(), cert.s.data() + cert.s.size());
    }
  }
  return j;
}

json to_json(const BoundParams& p) {
  return json{{"m", p.m},           {"n", p.n},
              {"p", p.p},           {"epsilon", p.epsilon},
              {"A0", p.A0},         {"c0", p.c0},
              {"t", p.t},           {"kappa", p.kappa},
              {"q", p.q},           {"C1", p.C1},
              {"epsilon1", p.epsilon1}, {"lambda", p.lambda}};
}

json to_json(const BoundReport& r, const BoundParams& p) {
  json j;
  j["params"] = to_json(p);
  j["theorem1_C"] = r.theorem1_C;
  j["theorem1_l2_bound"] = r.theorem1_l2_bound;
  j["l1_bound"] = r.l1_bound;
  j["prop1_rhs"] = r.prop1_rhs;
  j["probability_floor"] = r.probability_floor;
  j["sparsity_threshold"] = r.sparsity_threshold;
  j["prop2_floor"] = r.prop2_floor;
  j["tropp_gram_rhs"] = r.tropp_gram_rhs;
  j["tropp_cross_rhs"] = r.tropp_cross_rhs;
  j["lw_tail"] = r.lw_tail;
  j["cortropp_ok"] = r.cortropp_ok;
  j["corollary1_epsilon"] = r.corollary1_epsilon;
  j["small_m_warning"] = r.small_m_warning;
  return j;
}

json to_json(const SolverConfig& c) {
  return json{{"max_iters", c.max_iters},
              {"primal_tol", c.primal_tol},
              {"feasibility_tol", c.feasibility_tol},
              {"rho_init", c.rho_init},
              {"balance_ratio", c.balance_ratio},
              {"balance_scale", c.balance_scale},
              {"balance_every", c.balance_every},
              {"polish_every", c.polish_every},
              {"support_threshold_scale", c.support_threshold_scale},
              {"kkt_tol", c.kkt_tol},
              {"lambda_bisection_tol", c.lambda_bisection_tol},
              {"oracle_max_sweeps", c.oracle_max_sweeps}};
}

SolverConfig solver_config_from_json(const json& j) {
  SolverConfig c;
  try {
    c.max_iters = j.value("max_iters", c.max_iters);
    c.primal_tol = j.value("primal_tol", c.primal_tol);
    c.feasibility_tol = j.value("feasibility_tol", c.feasibility_tol);
    c.rho_init = j.value("rho_init", c.rho_init);
    c.balance_ratio = j.value("balance_ratio", c.balance_ratio);
    c.balance_scale = j.value("balance_scale", c.balance_scale);
    c.balance_every = j.value("balance_every", c.balance_every);
    c.polish_every = j.value("polish_every", c.polish_every);
    c.support_threshold_scale =
        j.value("support_threshold_scale", c.support_threshold_scale);
    c.kkt_tol = j.value("kkt_tol", c.kkt_tol);
    c.lambda_bisection_tol =
        j.value("lambda_bisection_tol", c.lambda_bisection_tol);
    c.oracle_max_sweeps = j.value("oracle_max_sweeps", c.oracle_max_sweeps);
  } catch (const json::exception& e) {
    throw IoError(std::string("solver config JSON: ") + e.what());
  }
  if (c.max_iters < 1 || c.primal_tol <= 0.0 || c.feasibility_tol <= 0.0 ||
      c.lambda_bisection_tol <= 0.0) {
    throw IoError("solver config: tolerances must be positive");
  }
  return c;
}

json to_json(const Solution& s) {
  json j;
  j["x_star"] = std::vector<double>(s.x_star.data(),
                                    s.x_star.data() + s.x_star.size());
  j["residual_norm"] = s.residual_norm;
  j["l1_norm"] = s.l1_norm;
  j["support_star"] = s.support_star;
  j["support_threshold"] = s.support_threshold;
  j["lambda"] = s.lambda;
  j["iterations"] = s.iterations;
  j["status"] = to_string(s.status);
  j["polished"] = s.polished;
  return j;
}

json to_json(const KKTReport& k) {
  json j;
  j["max_offsupport_dual"] = k.max_offsupport_dual;
  j["onsupport_sign_error"] = k.onsupport_sign_error;
  j["gram_singular"] = k.gram_singular;
  if (k.implicit_eq_residual) {
    j["implicit_eq_residual"] = *k.implicit_eq_residual;
  } else {
    j["implicit_eq_residual"] = nullptr;
  }
  return j;
}

json to_json(const ExperimentConfig& cfg) {
  json matrix;
  if (!cfg.matrix_file.empty()) {
    matrix["file"] = cfg.matrix_file;
  } else {
    matrix["builtin"] = to_string(cfg.builtin);
    matrix["n"] = cfg.n;
    matrix["m"] = cfg.m;
    matrix["seed"] = cfg.matrix_seed;
  }
  json j;
  j["matrix"] = matrix;
  j["p"] = cfg.p;
  j["trials"] = cfg.trials;
  j["root_seed"] = cfg.root_seed;
  j["epsilon"] = cfg.epsilon;
  j["noise_rule"] = to_string(cfg.noise_rule);
  j["magnitude_rule"] = to_string(cfg.magnitude_rule);
  if (cfg.compressible) {
    j["compressible"] = {{"C1", cfg.compressible->C1},
                         {"epsilon1", cfg.compressible->epsilon1}};
  }
  j["A0"] = cfg.A0;
  j["c0"] = cfg.c0;
  j["t"] = cfg.t;
  j["solver"] = to_json(cfg.solver);
  if (!cfg.out_dir.empty()) j["out_dir"] = cfg.out_dir;
  j["threads"] = cfg.threads;
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("matrix")) {
      const json& matrix = j.at("matrix");
      if (matrix.contains("file")) {
        cfg.matrix_file = matrix.at("file").get<std::string>();
      } else {
        cfg.builtin =
            matrix_kind_from_string(matrix.value("builtin", "identity_dct"));
        cfg.n = matrix.value("n", cfg.n);
        cfg.m = matrix.value("m", cfg.m);
        cfg.matrix_seed = matrix.value("seed", cfg.matrix_seed);
      }
    }
    cfg.p = j.value("p", cfg.p);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.root_seed = j.value("root_seed", cfg.root_seed);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.noise_rule =
        noise_rule_from_string(j.value("noise_rule", to_string(cfg.noise_rule)));
    cfg.magnitude_rule = magnitude_rule_from_string(
        j.value("magnitude_rule", to_string(cfg.magnitude_rule)));
    if (j.contains("compressible") && !j.at("compressible").is_null()) {
      CompressibleParams comp;
      comp.C1 = j.at("compressible").value("C1", 0.0);
      comp.epsilon1 = j.at("compressible").value("epsilon1", 0.0);
      cfg.compressible = comp;
    }
    cfg.A0 = j.value("A0", cfg.A0);
    cfg.c0 = j.value("c0", cfg.c0);
    cfg.t = j.value("t", cfg.t);
    if (j.contains("solver")) {
      cfg.solver = solver_config_from_json(j.at("solver"));
    }
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const json::exception& e) {
    throw IoError(std::string("experiment config JSON: ") + e.what());
  }
  if (cfg.trials < 1) throw IoError("experiment config: trials must be >= 1");
  if (cfg.p < 1) throw IoError("experiment config: p must be >= 1");
  if (cfg.epsilon < 0.0) throw IoError("experiment config: epsilon must be >= 0");
  if (cfg.compressible &&
      (cfg.compressible->C1 < 0.0 || cfg.compressible->epsilon1 < 0.0)) {
    throw IoError("experiment config: compressible parameters must be >= 0");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(std::string("experiment config JSON: ") + e.what());
  }
  return experiment_config_from_json(j);
}

json to_json(const Summary& s, const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = s.schema_version;
  j["trials"] = s.trials;
  j["empirical_success_rate"] = s.empirical_success_rate;
  j["empirical_ic_quarter_rate"] = s.empirical_ic_quarter_rate;
  j["empirical_gram_rate"] = s.empirical_gram_rate;
  j["joint_rate"] = s.joint_rate;
  j["l1_success_rate"] = s.l1_success_rate;
  j["probability_floor"] = s.probability_floor;
  j["prop2_floor"] = s.prop2_floor;
  j["effective_epsilon"] = s.effective_epsilon;
  j["theorem1_C"] = s.theorem1_C;
  j["config"] = to_json(cfg);
  return j;
}

json to_json(const LwTailResult& r) {
  return json{{"empirical", r.empirical},
              {"bound", r.bound},
              {"kappa", r.kappa},
              {"J", r.J_size},
              {"t", r.t},
              {"mode", r.resampled_support ? "resampled_support" : "fixed_support"}};
}

Eigen::VectorXd load_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<double> values;
  double v;
  while (in >> v) {
    if (!std::isfinite(v)) throw IoError("vector file: non-finite value");
    values.push_back(v);
  }
  if (!in.eof()) throw IoError("vector file: trailing non-numeric content");
  if (values.empty()) throw IoError("vector file: empty");
  return Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
}

}  // namespace sparsebp
