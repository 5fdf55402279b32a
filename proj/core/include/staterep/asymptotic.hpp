// Continuum model of a large grid: replicas sit in a unit square, flows are
// uniform point pairs routed through the replica nearest to their closer
// endpoint. Monte Carlo estimates of the expected routed distance feed the
// total-traffic formula, the optimal-replica-count scan and the power-law
// fit of that count against N and the sync/data rate ratio.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

namespace staterep {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline constexpr std::uint64_t kLloydSeed = 0x51F0A9D4C3B21E07ULL;

// Perfect squares get the exact grid centers ((i+1/2)/sqrt(c), (j+1/2)/sqrt(c));
// other counts fall back to Lloyd centroids of 1e5 seeded uniform samples
// with k-means++ initialization.
std::vector<Point2> replica_positions(int c, std::uint64_t lloyd_seed = kLloydSeed);

struct UnitSquareModel {
  int replica_count = 0;
  std::vector<Point2> positions;
  double d_data = 0.0;         // E[routed src->replica->dst distance]
  double d_sync = 0.0;         // mean pairwise replica distance (0 when c == 1)
  double d_data_stderr = 0.0;  // Monte Carlo standard error of d_data
  long long samples = 0;
  std::uint64_t rng_seed = 0;
};

// d_sync is exact (the replica set is deterministic); d_data is a Monte
// Carlo mean over `samples` uniform point pairs, batched with per-batch
// seeds derived from rng_seed.
UnitSquareModel mc_distances(int c, long long samples, std::uint64_t rng_seed);

// sqrt(N) * beta * (lambda_f * N * d_data + lambda_s * d_sync * c*(c-1)).
double total_traffic(int n, int c, double lambda_f, double lambda_s, double beta, double d_data,
                     double d_sync);

// Memoizes (c, samples, seed) -> (d_data, d_sync, stderr); optionally
// persisted as JSON so sweeps across processes share the expensive entries.
class DistanceCache {
 public:
  DistanceCache() = default;
  explicit DistanceCache(std::filesystem::path file);  // loads the file if present

  const UnitSquareModel& get(int c, long long samples, std::uint64_t rng_seed);
  void put(UnitSquareModel model);  // e.g. entries computed in parallel
  void save() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::tuple<int, long long, std::uint64_t>, UnitSquareModel> entries_;
  std::optional<std::filesystem::path> file_;
};

// Minimizer of total_traffic over c in 1..c_max (exhaustive scan; ties take
// the smallest c). The argmin does not depend on beta, which is fixed to 1.
int optimal_replicas_search(int n, double lambda_f, double lambda_s, int c_max, long long samples,
                            std::uint64_t rng_seed, DistanceCache& cache);

// Default scan ceiling used by the sweeps.
int default_c_max(int n);

struct FitPoint {
  int n = 0;
  double ratio = 0.0;  // lambda_s / lambda_f
  int c_opt = 0;
};

struct AsymptoticFit {
  double x = 0.0;  // log10 c = x + y log10 N + z log10 ratio
  double y = 0.0;
  double z = 0.0;
  double residual_norm = 0.0;
};

// Ordinary least squares on log10 c_opt = x + y log10 N + z log10 ratio.
// Throws on fewer than three points, degenerate designs, or c_opt < 1.
AsymptoticFit fit_property2(const std::vector<FitPoint>& points);

// ceil(0.47 * N^0.40 * (lambda_f/lambda_s)^0.40). Throws when lambda_s is
// zero (the formula is undefined there).
int approx_optimal_replicas(int n, double lambda_f, double lambda_s);

}  // namespace staterep
