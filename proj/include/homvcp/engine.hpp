#pragma once

// Inner refinement of hom P_X toward hom P. P_X = conv F[X] + C is kept in
// RoI-shifted coordinates, where all distances are measured.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "homvcp/kernels.hpp"
#include "homvcp/problem.hpp"
#include "homvcp/scalarize.hpp"

namespace homvcp {

struct EngineConfig {
  double delta = 0.5;
  RoiSpec roi{Vec::Zero(2), 1.0};
  /// Extra seed weights mixed from consecutive dual generators.
  int seed_direction_count = 4;
  /// Sphere samples per candidate batch.
  int candidate_batch = 1500;
  /// Perturbations around each cone generator per batch.
  int perturbations_per_generator = 6;
  /// Local-search rounds around the worst candidates.
  int refine_top = 6;
  int refine_steps = 16;
  double safety = 0.1;
  /// Distance of direction surrogates; 0 means 10/delta.
  double far_point_radius = 0.0;
  int max_iterations = 400;
  int max_vertices = 2000;
  /// Fresh batches that must all measure below threshold before success.
  int confirmation_batches = 1;
  std::uint64_t seed = 1;
  Execution execution = Execution::Parallel;
  ScalarizeConfig scalarize;
  /// Called after every measurement with (iteration, gap estimate).
  std::function<void(int, double)> progress;

  /// Throws DomainError on out-of-range fields.
  void validate(int m) const;
  double threshold() const { return delta * (1.0 - safety); }
  double far_radius() const { return far_point_radius > 0.0 ? far_point_radius : 10.0 / delta; }
};

enum class EngineStatus { Success, BudgetExhausted, Stalled };
const char* to_string(EngineStatus status);

struct CandidateRecord {
  Vec ray;
  /// d(ray, hom P_X) before and after the witness attempt.
  double distance = 0.0;
  double after = 0.0;
  bool accepted = false;
};

struct ApproxSolution {
  std::vector<Vec> X;
  /// F(x) - roi.center for x in X.
  std::vector<Vec> image_vertices;
  /// Unit generators of C.
  std::vector<Vec> cone_generators;
  double delta_target = 0.0;
  double gap_estimate = 1.0;
  RoiSpec roi;
  int iterations = 0;
  EngineStatus status = EngineStatus::BudgetExhausted;
  /// Every candidate a witness was sought for.
  std::vector<CandidateRecord> candidate_log;
  /// Max measured distance over the candidate pool after each iteration's
  /// witnesses were added.
  std::vector<double> gap_history;
  std::vector<std::string> notes;
  std::uint64_t seed = 1;
  int probes = 0;

  int m() const { return static_cast<int>(roi.center.size()); }
  /// hom P_X in shifted coordinates.
  GenCone hom_cone() const;
  /// Image vertices in original coordinates.
  std::vector<Vec> original_vertices() const;
};

ApproxSolution approximate(const VcpProblem& problem, const EngineConfig& config);

/// Re-measures the solution on `extra_candidates` fresh sphere samples and
/// returns max(previous estimate, new measurements).
double gap_probe(ApproxSolution& solution, const VcpProblem& problem, int extra_candidates,
                 const ScalarizeConfig& config = {}, Execution exec = Execution::Parallel);

}  // namespace homvcp
