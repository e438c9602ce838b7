#include "homvcp/kernels.hpp"

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace homvcp {

bool worse_than(double da, const Vec& ra, Index ia, double db, const Vec& rb, Index ib) {
  if (da != db) return da > db;
  for (Index k = 0; k < ra.size() && k < rb.size(); ++k)
    if (ra[k] != rb[k]) return ra[k] < rb[k];
  return ia < ib;
}

std::vector<double> ray_distances_serial(const std::vector<Vec>& rays, const GenCone& cone) {
  std::vector<double> out(rays.size());
  for (std::size_t i = 0; i < rays.size(); ++i) out[i] = dist_unit_to_truncated(rays[i], cone);
  return out;
}

std::vector<double> ray_distances_parallel(const std::vector<Vec>& rays, const GenCone& cone) {
  std::vector<double> out(rays.size());
  const auto n = static_cast<std::ptrdiff_t>(rays.size());
  std::exception_ptr failure;
  std::mutex guard;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = dist_unit_to_truncated(rays[i], cone);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

WorstRay worst_ray_serial(const std::vector<Vec>& rays, const GenCone& cone) {
  WorstRay best;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const double d = dist_unit_to_truncated(rays[i], cone);
    const auto idx = static_cast<Index>(i);
    if (best.index < 0 || worse_than(d, rays[i], idx, best.distance, rays[best.index], best.index))
      best = {d, idx};
  }
  return best;
}

WorstRay worst_ray_parallel(const std::vector<Vec>& rays, const GenCone& cone) {
  const auto n = static_cast<std::ptrdiff_t>(rays.size());
  WorstRay best;
  std::exception_ptr failure;
  std::mutex guard;
#pragma omp parallel
  {
    WorstRay local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        const double d = dist_unit_to_truncated(rays[i], cone);
        if (local.index < 0 || worse_than(d, rays[i], i, local.distance, rays[local.index], local.index))
          local = {d, i};
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp critical(homvcp_worst_ray)
    {
      if (local.index >= 0 &&
          (best.index < 0 ||
           worse_than(local.distance, rays[local.index], local.index, best.distance, rays[best.index], best.index)))
        best = local;
    }
  }
  if (failure) std::rethrow_exception(failure);
  return best;
}

std::vector<HomProjection> project_batch_serial(const VcpProblem& problem, const std::vector<Vec>& vs,
                                                const ScalarizeConfig& config) {
  std::vector<HomProjection> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(project_onto_hom_upper_image(problem, v, config));
  return out;
}

std::vector<HomProjection> project_batch_parallel(const VcpProblem& problem, const std::vector<Vec>& vs,
                                                  const ScalarizeConfig& config) {
  std::vector<HomProjection> out(vs.size());
  const auto n = static_cast<std::ptrdiff_t>(vs.size());
  std::exception_ptr failure;
  std::mutex guard;
  // projections vary a lot in cost, hence the dynamic schedule
#pragma omp parallel for schedule(dynamic, 2)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = project_onto_hom_upper_image(problem, vs[i], config);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace homvcp
