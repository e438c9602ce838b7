#pragma once

// Batch kernels shared by the engine and the oracle. Each comes as a plain
// serial loop (the reference) and an OpenMP version; both must return
// identical results.

#include <vector>

#include "homvcp/geometry.hpp"
#include "homvcp/scalarize.hpp"

namespace homvcp {

struct WorstRay {
  double distance = -1.0;
  /// Position in the input list, -1 for empty input.
  Index index = -1;
};

/// Larger distance wins; ties go to the lexicographically smaller ray, then
/// to the smaller index. A total order, so any reduction tree agrees.
bool worse_than(double da, const Vec& ra, Index ia, double db, const Vec& rb, Index ib);

std::vector<double> ray_distances_serial(const std::vector<Vec>& rays, const GenCone& cone);
std::vector<double> ray_distances_parallel(const std::vector<Vec>& rays, const GenCone& cone);

WorstRay worst_ray_serial(const std::vector<Vec>& rays, const GenCone& cone);
WorstRay worst_ray_parallel(const std::vector<Vec>& rays, const GenCone& cone);

/// Projections of unit vectors onto hom P. Throws the first solver error.
std::vector<HomProjection> project_batch_serial(const VcpProblem& problem, const std::vector<Vec>& vs,
                                                const ScalarizeConfig& config = {});
std::vector<HomProjection> project_batch_parallel(const VcpProblem& problem, const std::vector<Vec>& vs,
                                                  const ScalarizeConfig& config = {});

inline std::vector<double> ray_distances(const std::vector<Vec>& rays, const GenCone& cone, Execution exec) {
  return exec == Execution::Serial ? ray_distances_serial(rays, cone) : ray_distances_parallel(rays, cone);
}
inline WorstRay worst_ray(const std::vector<Vec>& rays, const GenCone& cone, Execution exec) {
  return exec == Execution::Serial ? worst_ray_serial(rays, cone) : worst_ray_parallel(rays, cone);
}
inline std::vector<HomProjection> project_batch(const VcpProblem& problem, const std::vector<Vec>& vs,
                                                const ScalarizeConfig& config, Execution exec) {
  return exec == Execution::Serial ? project_batch_serial(problem, vs, config)
                                   : project_batch_parallel(problem, vs, config);
}

}  // namespace homvcp
