#include "spapred/pipeline.hpp"

#include "spapred/errors.hpp"
#include "spapred/fci.hpp"
#include "spapred/hamiltonian.hpp"
#include "spapred/optimize.hpp"
#include "spapred/orbital_opt.hpp"
#include "spapred/rng.hpp"
#include "spapred/spa.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace spapred {

namespace {

using nlohmann::json;

MinimizeResult run_vqe(const PauliPolynomial& H, const Eigen::VectorXd& start,
                       const LabelConfig& config) {
  const Objective f = [&H](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    SpaAnsatz a{{x.data(), x.data() + x.size()}};
    if (grad) {
      const auto g = gradient(H, a);
      *grad = Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
    }
    return expectation(H, a);
  };
  MinimizeOptions opts;
  opts.max_iterations = config.max_vqe_iterations;
  opts.gradient_tolerance = config.vqe_tolerance;
  return config.gradient_descent ? minimize_gradient_descent(f, start, opts)
                                 : minimize_bfgs(f, start, opts);
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j.at(r).size()) != cols) throw DataError("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

json LabelConfig::to_json() const {
  return {{"orbital_optimization", orbital_optimization},
          {"orbital_cycles", orbital_cycles},
          {"max_vqe_iterations", max_vqe_iterations},
          {"vqe_tolerance", vqe_tolerance},
          {"gradient_descent", gradient_descent},
          {"compute_fci", compute_fci},
          {"allow_greedy_matching", allow_greedy_matching}};
}

LabelConfig LabelConfig::from_json(const json& j) {
  LabelConfig c;
  c.orbital_optimization = j.value("orbital_optimization", c.orbital_optimization);
  c.orbital_cycles = j.value("orbital_cycles", c.orbital_cycles);
  c.max_vqe_iterations = j.value("max_vqe_iterations", c.max_vqe_iterations);
  c.vqe_tolerance = j.value("vqe_tolerance", c.vqe_tolerance);
  c.gradient_descent = j.value("gradient_descent", c.gradient_descent);
  c.compute_fci = j.value("compute_fci", c.compute_fci);
  c.allow_greedy_matching = j.value("allow_greedy_matching", c.allow_greedy_matching);
  return c;
}

double DatasetRecord::reference_energy() const {
  return expectation(hamiltonian, SpaAnsatz{std::vector<double>(theta.size(), 0.0)});
}

DatasetRecord label_instance(const Geometry& geom, const LabelConfig& config) {
  if (geom.size() < 2 || geom.size() % 2 != 0)
    throw std::invalid_argument("label_instance requires an even atom count");

  DatasetRecord rec;
  rec.geometry = geom;
  rec.key = geom.seed;
  rec.matching = best_matching(geom, config.allow_greedy_matching);
  const int n = geom.size();
  const int n_pairs = n / 2;

  const MolecularTensors base = molecular_tensors(geom, rec.matching);
  Eigen::MatrixXd kappa = pair_guess_generator(n);
  if (config.orbital_optimization) {
    OrbitalOptOptions oo;
    oo.cycles = config.orbital_cycles;
    kappa = optimize_orbitals(base, kappa, std::vector<double>(n_pairs, 0.0), oo).kappa;
  }
  rec.kappa = kappa;
  rec.hamiltonian = to_qubit(rotate_orbitals(base, Eigen::MatrixXd(kappa.exp())));

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(n_pairs));
  starts.push_back(Eigen::VectorXd::Constant(n_pairs, std::numbers::pi / 2.0));
  for (std::uint64_t r = 0; r < 2; ++r) {
    Rng rng = Rng::stream(config.restart_seed, r);
    Eigen::VectorXd s(n_pairs);
    // (-pi, pi]: reflect a [0, 1) draw.
    for (int p = 0; p < n_pairs; ++p) s[p] = std::numbers::pi * (1.0 - 2.0 * rng.uniform());
    starts.push_back(s);
  }

  bool have_best = false;
  MinimizeResult best;
  for (const auto& s : starts) {
    auto res = run_vqe(rec.hamiltonian, s, config);
    if (!have_best || res.value < best.value) {
      best = std::move(res);
      have_best = true;
    }
  }
  rec.converged = best.converged;
  SpaAnsatz ansatz{{best.x.data(), best.x.data() + best.x.size()}};
  ansatz = ansatz.normalized();
  rec.theta = ansatz.theta;
  rec.e_spa = expectation(rec.hamiltonian, ansatz);
  if (!std::isfinite(rec.e_spa)) throw NumericalError("non-finite SPA energy");

  if (config.compute_fci && rec.hamiltonian.n_qubits() <= kMaxFciQubits)
    rec.e_fci = exact_ground_energy(rec.hamiltonian, n);
  return rec;
}

json to_json(const DatasetRecord& r) {
  json coords = json::array();
  for (const auto& c : r.geometry.coords) coords.push_back({c.x(), c.y(), c.z()});
  json matching = json::array();
  for (const auto& [a, b] : r.matching.pairs) matching.push_back({a, b});
  json terms = json::array();
  for (const auto& t : r.hamiltonian.terms())
    terms.push_back({t.string.to_word(r.hamiltonian.n_qubits()), t.coefficient});

  json j;
  j["version"] = r.version;
  j["kind"] = to_string(r.geometry.kind);
  j["seed"] = r.key;
  j["n_atoms"] = r.n_atoms();
  j["step_angstrom"] = r.geometry.kind == GeometryKind::kRandom ? json(nullptr) : json(r.geometry.step);
  j["coords_angstrom"] = std::move(coords);
  j["matching"] = std::move(matching);
  j["kappa"] = matrix_to_json(r.kappa);
  j["pauli_terms"] = std::move(terms);
  j["e_spa_hartree"] = r.e_spa;
  j["theta"] = r.theta;
  j["e_fci_hartree"] = r.e_fci ? json(*r.e_fci) : json(nullptr);
  j["converged"] = r.converged;
  j["pipeline_version"] = r.pipeline_version;
  j["timestamp"] = r.timestamp;
  return j;
}

DatasetRecord record_from_json(const json& j) {
  try {
    DatasetRecord r;
    r.version = j.at("version").get<int>();
    if (r.version != kRecordVersion)
      throw DataError("record schema version " + std::to_string(r.version) + ", expected " +
                      std::to_string(kRecordVersion));
    r.geometry.kind = parse_geometry_kind(j.at("kind").get<std::string>());
    r.key = j.at("seed").get<std::uint64_t>();
    if (r.geometry.kind == GeometryKind::kRandom) {
      r.geometry.seed = r.key;
    } else {
      r.geometry.step = j.at("step_angstrom").get<double>();
    }
    for (const auto& c : j.at("coords_angstrom"))
      r.geometry.coords.emplace_back(c.at(0).get<double>(), c.at(1).get<double>(),
                                     c.at(2).get<double>());
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : j.at("matching")) pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    r.matching = PairMatching::from_pairs(r.geometry, std::move(pairs));
    r.kappa = matrix_from_json(j.at("kappa"));
    const int n_qubits = 2 * r.geometry.size();
    std::vector<PauliTerm> terms;
    for (const auto& t : j.at("pauli_terms")) {
      const auto word = t.at(0).get<std::string>();
      if (static_cast<int>(word.size()) != n_qubits) throw DataError("Pauli word length mismatch");
      terms.push_back({PauliString::from_word(word), t.at(1).get<double>()});
    }
    r.hamiltonian = PauliPolynomial::from_terms(n_qubits, std::move(terms));
    r.e_spa = j.at("e_spa_hartree").get<double>();
    r.theta = j.at("theta").get<std::vector<double>>();
    if (!j.at("e_fci_hartree").is_null()) r.e_fci = j.at("e_fci_hartree").get<double>();
    r.converged = j.at("converged").get<bool>();
    r.pipeline_version = j.value("pipeline_version", std::string());
    r.timestamp = j.value("timestamp", std::string());
    if (static_cast<int>(r.theta.size()) != r.matching.n_pairs())
      throw DataError("theta length does not match the pair count");
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid record: ") + e.what());
  }
}

std::string to_jsonl_line(const DatasetRecord& record) { return to_json(record).dump(); }

std::uint64_t payload_hash(const DatasetRecord& record) {
  json j = to_json(record);
  j.erase("timestamp");
  return fnv1a(j.dump());
}

RecordCheck verify_record(const DatasetRecord& r, double tolerance) {
  RecordCheck check;
  check.recomputed_e_spa = expectation(r.hamiltonian, SpaAnsatz{r.theta});
  if (std::abs(check.recomputed_e_spa - r.e_spa) > tolerance)
    check.violations.push_back("stored E_SPA not reproduced from theta");
  if (r.e_fci && *r.e_fci > r.e_spa + tolerance)
    check.violations.push_back("E_FCI above E_SPA");
  for (double t : r.theta)
    if (!(t > -std::numbers::pi && t <= std::numbers::pi))
      check.violations.push_back("angle outside (-pi, pi]");
  if (r.e_spa > r.reference_energy() + tolerance)
    check.violations.push_back("E_SPA above the theta = 0 reference");
  check.ok = check.violations.empty();
  return check;
}

}  // namespace spapred
