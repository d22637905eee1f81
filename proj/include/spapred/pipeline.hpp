#pragma once

#include "spapred/geometry.hpp"
#include "spapred/matching.hpp"
#include "spapred/pauli.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spapred {

inline constexpr int kRecordVersion = 1;
inline constexpr const char* kPipelineVersion = "0.1.0";

struct LabelConfig {
  bool orbital_optimization = true;
  int orbital_cycles = 2;
  int max_vqe_iterations = 500;
  double vqe_tolerance = 1e-7;
  bool gradient_descent = false;  // plain steepest descent instead of BFGS
  bool compute_fci = true;        // only for 2n <= 16 qubits
  bool allow_greedy_matching = false;
  std::uint64_t restart_seed = 0;  // seeds the two random VQE starts

  nlohmann::json to_json() const;
  static LabelConfig from_json(const nlohmann::json& j);
};

/// One labeled instance: geometry, pairing, the orbital-optimized qubit
/// Hamiltonian and its optimized SPA angles.
struct DatasetRecord {
  int version = kRecordVersion;
  Geometry geometry;
  std::uint64_t key = 0;  // seed for random geometries, sweep index k otherwise
  PairMatching matching;
  Eigen::MatrixXd kappa;  // rotation generator in the pair-ordered Lowdin basis
  PauliPolynomial hamiltonian;
  double e_spa = 0.0;
  std::vector<double> theta;  // normalized to (-pi, pi]
  std::optional<double> e_fci;
  bool converged = false;
  std::string pipeline_version = kPipelineVersion;
  std::string timestamp;

  int n_atoms() const { return geometry.size(); }
  /// Energy of the theta = 0 reference state on the stored Hamiltonian.
  double reference_energy() const;
};

/// Geometry -> matching -> integrals -> orbital optimization -> Jordan-Wigner
/// -> multi-start VQE (zeros, all pi/2, two seeded uniform draws).
DatasetRecord label_instance(const Geometry& geom, const LabelConfig& config = {});

nlohmann::json to_json(const DatasetRecord& record);
DatasetRecord record_from_json(const nlohmann::json& j);

/// One JSONL line, doubles in shortest round-trip form.
std::string to_jsonl_line(const DatasetRecord& record);

/// FNV-1a hash of the serialized record with the timestamp removed.
std::uint64_t payload_hash(const DatasetRecord& record);

struct RecordCheck {
  bool ok = true;
  double recomputed_e_spa = 0.0;
  std::vector<std::string> violations;
};

/// Re-checks the stored invariants: E_SPA reproducible from theta and the
/// Hamiltonian, E_FCI <= E_SPA, angles in (-pi, pi].
RecordCheck verify_record(const DatasetRecord& record, double tolerance = 1e-8);

}  // namespace spapred
