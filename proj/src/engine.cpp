#include "homvcp/engine.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "homvcp/errors.hpp"

namespace homvcp {

const char* to_string(EngineStatus status) {
  switch (status) {
    case EngineStatus::Success: return "Success";
    case EngineStatus::BudgetExhausted: return "BudgetExhausted";
    case EngineStatus::Stalled: return "Stalled";
  }
  return "Unknown";
}

void EngineConfig::validate(int m) const {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::DomainError, "delta must lie in (0, 1)");
  roi.validate();
  if (roi.center.size() != m) throw Error(ErrorKind::DimensionMismatch, "RoI center must live in R^m");
  if (!(safety >= 0.0 && safety < 1.0)) throw Error(ErrorKind::DomainError, "safety must lie in [0, 1)");
  if (candidate_batch < 1 || max_iterations < 0 || seed_direction_count < 0 || refine_steps < 0 ||
      refine_top < 0 || perturbations_per_generator < 0 || confirmation_batches < 0 || max_vertices < 1)
    throw Error(ErrorKind::DomainError, "engine budgets must be nonnegative");
  if (far_point_radius < 0.0) throw Error(ErrorKind::DomainError, "far_point_radius must be nonnegative");
}

GenCone ApproxSolution::hom_cone() const {
  return GenCone::from_points_and_directions(image_vertices, cone_generators);
}

std::vector<Vec> ApproxSolution::original_vertices() const {
  std::vector<Vec> out;
  out.reserve(image_vertices.size());
  for (const auto& v : image_vertices) out.push_back(v + roi.center);
  return out;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + k + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Candidate probes v on the sphere together with the rays of their
// projections onto hom P.
struct Pool {
  std::vector<Vec> probes;
  std::vector<Vec> rays;
  std::vector<HomProjection> proj;
};

bool ray_of(const HomProjection& h, Vec& ray) {
  const Vec z = h.lifted();
  const double nz = z.norm();
  if (nz < 1e-9) return false;
  ray = z / nz;
  return true;
}

void absorb(Pool& pool, std::vector<Vec> probes, std::vector<HomProjection> proj) {
  for (std::size_t i = 0; i < probes.size(); ++i) {
    Vec ray;
    if (!ray_of(proj[i], ray)) continue;
    pool.probes.push_back(std::move(probes[i]));
    pool.rays.push_back(std::move(ray));
    pool.proj.push_back(std::move(proj[i]));
  }
}

std::vector<Vec> perturb(const std::vector<Vec>& centers, int per_center, std::uint64_t seed) {
  std::vector<Vec> out;
  if (per_center == 0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double scales[] = {0.01, 0.03, 0.08, 0.2};
  for (const auto& c : centers) {
    for (int k = 0; k < per_center; ++k) {
      Vec noise(c.size());
      for (Index j = 0; j < c.size(); ++j) noise[j] = normal(rng);
      out.push_back((c + scales[k % 4] * noise).normalized());
    }
  }
  return out;
}

class Refiner {
 public:
  Refiner(const VcpProblem& shifted, const EngineConfig& cfg, ApproxSolution& sol)
      : problem_(shifted), cfg_(cfg), sol_(sol), cone_(shifted.cone()) {}

  bool add_point(const Vec& x) {
    if (!x.allFinite() || !problem_.feasible(x, 1e-9)) return false;
    const Vec y = problem_.objective(x);
    if (!y.allFinite()) return false;
    for (const auto& v : sol_.image_vertices)
      if ((v - y).norm() <= 1e-12 * std::max(1.0, y.norm())) return false;
    sol_.X.push_back(x);
    sol_.image_vertices.push_back(y);
    return true;
  }

  void drop_last() {
    sol_.X.pop_back();
    sol_.image_vertices.pop_back();
  }

  void seed() {
    std::vector<Vec> weights = cone_.dual_generators();
    const std::size_t base = weights.size();
    Vec mean = Vec::Zero(problem_.m());
    for (const auto& w : weights) mean += w.normalized();
    for (int j = 1; j <= cfg_.seed_direction_count && base > 1; ++j) {
      const double t = static_cast<double>(j) / (cfg_.seed_direction_count + 1);
      const std::size_t k = static_cast<std::size_t>(j - 1) % base;
      weights.push_back(((1.0 - t) * weights[k] + t * weights[(k + 1) % base]).normalized());
    }
    if (mean.norm() > 1e-9) weights.push_back(mean.normalized());
    for (const auto& w : weights) {
      SolveReport rep;
      try {
        rep = weighted_sum_min(problem_, w, cfg_.scalarize);
      } catch (const Error& e) {
        sol_.notes.push_back(std::string("seed weight skipped: ") + e.what());
        continue;
      }
      if (rep.status == SolveStatus::Unbounded) {
        sol_.notes.push_back("seed weight skipped: unbounded scalarization");
        continue;
      }
      if (rep.x.size() != 0) add_point(rep.x);
    }
    if (sol_.X.empty()) {
      Vec up = Vec::Zero(problem_.m() + 1);
      up[problem_.m()] = 1.0;
      const HomProjection h = project_onto_hom_upper_image(problem_, up, cfg_.scalarize);
      if (!h.perspective_x || !add_point(*h.perspective_x))
        throw Error(ErrorKind::SolverFailure, "no feasible seed point found");
      sol_.notes.push_back("seeded from the projection of the level-one axis");
    }
  }

  void add_batch(std::uint64_t batch) {
    std::vector<Vec> probes = sphere_sample(problem_.m() + 1, cfg_.candidate_batch, mix_seed(cfg_.seed, batch));
    std::vector<Vec> centers;
    const GenCone g = sol_.hom_cone();
    for (const auto& r : g.generators()) centers.push_back(r.dir());
    const auto extra = perturb(centers, cfg_.perturbations_per_generator, mix_seed(cfg_.seed, batch + 7777));
    probes.insert(probes.end(), extra.begin(), extra.end());
    auto proj = project_batch(problem_, probes, cfg_.scalarize, cfg_.execution);
    absorb(pool_, std::move(probes), std::move(proj));
  }

  // Local search on the probe of each of the worst candidates.
  void refine(const std::vector<double>& dist, const GenCone& g, std::uint64_t round) {
    std::vector<Index> order(dist.size());
    std::iota(order.begin(), order.end(), 0);
    const auto top = std::min<std::size_t>(cfg_.refine_top, order.size());
    std::partial_sort(order.begin(), order.begin() + top, order.end(), [&](Index a, Index b) {
      return worse_than(dist[a], pool_.rays[a], a, dist[b], pool_.rays[b], b);
    });
    std::vector<std::vector<Vec>> found_probes(top);
    std::vector<std::vector<HomProjection>> found_proj(top);
    parallel_for(
        top,
        [&](std::size_t r) {
          const Index i = order[r];
          std::mt19937_64 rng(mix_seed(cfg_.seed, round * 1000 + r));
          std::normal_distribution<double> normal;
          Vec v = pool_.probes[i];
          double best = dist[i];
          double sigma = 0.05;
          for (int s = 0; s < cfg_.refine_steps; ++s) {
            Vec trial = v;
            for (Index j = 0; j < trial.size(); ++j) trial[j] += sigma * normal(rng);
            trial.normalize();
            HomProjection h = project_onto_hom_upper_image(problem_, trial, cfg_.scalarize);
            Vec ray;
            if (!ray_of(h, ray)) {
              sigma *= 0.6;
              continue;
            }
            const double d = dist_unit_to_truncated(ray, g);
            if (d > best) {
              best = d;
              v = trial;
              found_probes[r].push_back(trial);
              found_proj[r].push_back(std::move(h));
            } else {
              sigma *= 0.6;
            }
          }
        },
        cfg_.execution);
    for (std::size_t r = 0; r < top; ++r) absorb(pool_, std::move(found_probes[r]), std::move(found_proj[r]));
  }

  // Candidate feasible points whose images should cover the ray of pool
  // entry i.
  std::vector<Vec> witnesses(Index i) {
    const HomProjection& h = pool_.proj[i];
    const int m = problem_.m();
    std::vector<Vec> out;
    const Vec c = cone_.interior_direction();
    const bool solid = cone_.solid();
    if (h.witness_x) {
      if (solid) {
        try {
          const PsResult ps = pascoletti_serafini(problem_, h.q / h.mu, c, cfg_.scalarize);
          out.push_back(ps.report.x);
        } catch (const Error&) {
        }
      }
      out.push_back(*h.witness_x);
    } else {
      const Vec ray = pool_.rays[i];
      const Vec q = ray.head(m);
      if (q.norm() > 1e-12 && solid) {
        const Vec& base = sol_.image_vertices.front();
        const Vec far = base + cfg_.far_radius() * (1.0 + base.norm()) * q.normalized();
        try {
          const PsResult ps = pascoletti_serafini(problem_, far, c, cfg_.scalarize);
          if (ps.report.status != SolveStatus::Unbounded) out.push_back(ps.report.x);
        } catch (const Error&) {
        }
      }
    }
    if (h.perspective_x) out.push_back(*h.perspective_x);
    return out;
  }

  ApproxSolution run() {
    seed();
    std::uint64_t batch = 0;
    add_batch(batch++);
    const double thr = cfg_.threshold();
    int confirmations = 0;
    for (int iter = 0;; ++iter) {
      GenCone g = sol_.hom_cone();
      refine(ray_distances(pool_.rays, g, cfg_.execution), g, static_cast<std::uint64_t>(iter));
      std::vector<double> dist = ray_distances(pool_.rays, g, cfg_.execution);
      const Index worst = argmax(dist);
      sol_.gap_estimate = dist[worst];
      sol_.iterations = iter;
      if (cfg_.progress) cfg_.progress(iter, sol_.gap_estimate);

      if (dist[worst] <= thr) {
        if (confirmations >= cfg_.confirmation_batches) {
          sol_.status = EngineStatus::Success;
          break;
        }
        ++confirmations;
        add_batch(batch++);
        continue;
      }
      confirmations = 0;
      if (iter >= cfg_.max_iterations || static_cast<int>(sol_.X.size()) >= cfg_.max_vertices) {
        sol_.status = EngineStatus::BudgetExhausted;
        break;
      }

      // Greedy: worst candidates first, skipping rays close to one already
      // served in this iteration.
      std::vector<Index> order(dist.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return worse_than(dist[a], pool_.rays[a], a, dist[b], pool_.rays[b], b);
      });
      std::vector<Vec> served;
      int accepted = 0;
      int tried = 0;
      for (Index i : order) {
        if (dist[i] <= thr || accepted >= 4 || tried >= 12) break;
        bool near = false;
        for (const auto& s : served) near = near || (s - pool_.rays[i]).norm() < 0.5 * cfg_.delta;
        if (near) continue;
        ++tried;
        const double before = dist_unit_to_truncated(pool_.rays[i], sol_.hom_cone());
        CandidateRecord rec{pool_.rays[i], before, before, false};
        for (const Vec& x : witnesses(i)) {
          if (!add_point(x)) continue;
          const double after = dist_unit_to_truncated(pool_.rays[i], sol_.hom_cone());
          if (after < before - 1e-12) {
            rec.after = after;
            rec.accepted = true;
            break;
          }
          drop_last();
        }
        sol_.candidate_log.push_back(rec);
        if (rec.accepted) {
          ++accepted;
          served.push_back(pool_.rays[i]);
        }
      }
      const GenCone updated = sol_.hom_cone();
      const auto after = ray_distances(pool_.rays, updated, cfg_.execution);
      sol_.gap_history.push_back(*std::max_element(after.begin(), after.end()));
      if (accepted == 0) {
        sol_.status = EngineStatus::Stalled;
        sol_.gap_estimate = sol_.gap_history.back();
        sol_.notes.push_back("no witness reduced the distance at the worst candidates");
        break;
      }
    }
    return sol_;
  }

 private:
  Index argmax(const std::vector<double>& dist) const {
    Index best = 0;
    for (Index i = 1; i < static_cast<Index>(dist.size()); ++i)
      if (worse_than(dist[i], pool_.rays[i], i, dist[best], pool_.rays[best], best)) best = i;
    return best;
  }

  const VcpProblem& problem_;
  const EngineConfig& cfg_;
  ApproxSolution& sol_;
  const OrderingCone& cone_;
  Pool pool_;
};

}  // namespace

ApproxSolution approximate(const VcpProblem& problem, const EngineConfig& config) {
  config.validate(problem.m());
  const VcpProblem shifted = problem.shifted(config.roi.center);
  ApproxSolution sol;
  sol.delta_target = config.delta;
  sol.roi = config.roi;
  sol.cone_generators = problem.cone().generators();
  sol.seed = config.seed;
  Refiner refiner(shifted, config, sol);
  return refiner.run();
}

double gap_probe(ApproxSolution& solution, const VcpProblem& problem, int extra_candidates,
                 const ScalarizeConfig& config, Execution exec) {
  if (extra_candidates <= 0) return solution.gap_estimate;
  const VcpProblem shifted = problem.shifted(solution.roi.center);
  const std::vector<Vec> probes =
      sphere_sample(problem.m() + 1, extra_candidates, mix_seed(solution.seed, 1000003ULL + solution.probes));
  ++solution.probes;
  const auto proj = project_batch(shifted, probes, config, exec);
  std::vector<Vec> rays;
  for (const auto& h : proj) {
    Vec ray;
    if (ray_of(h, ray)) rays.push_back(std::move(ray));
  }
  const WorstRay w = worst_ray(rays, solution.hom_cone(), exec);
  if (w.index >= 0) solution.gap_estimate = std::max(solution.gap_estimate, w.distance);
  return solution.gap_estimate;
}

}  // namespace homvcp
