#include "staterep/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "staterep/rng.hpp"

namespace staterep {

namespace {

double sq(double v) { return v * v; }

double dist(const Point2& a, const Point2& b) { return std::sqrt(sq(a.x - b.x) + sq(a.y - b.y)); }

// Exact nearest replica index via a uniform bucket grid with expanding-ring
// search; positions are static per model so the grid is built once.
class NearestIndex {
 public:
  explicit NearestIndex(const std::vector<Point2>& positions) : positions_(positions) {
    side_ = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(positions.size())))));
    buckets_.assign(static_cast<std::size_t>(side_) * side_, {});
    for (int i = 0; i < static_cast<int>(positions.size()); ++i) {
      buckets_[bucket_of(positions[i])].push_back(i);
    }
  }

  int nearest(const Point2& q) const {
    const int cx = clamp_cell(q.x);
    const int cy = clamp_cell(q.y);
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    const double cell = 1.0 / side_;
    for (int ring = 0; ring < 2 * side_; ++ring) {
      // Any point in a cell at Chebyshev ring r is at least (r-1)*cell away.
      if (best >= 0 && best_dist <= (ring - 1) * cell) break;
      bool visited_any = false;
      for (int dx = -ring; dx <= ring; ++dx) {
        for (int dy = -ring; dy <= ring; ++dy) {
          if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
          const int bx = cx + dx;
          const int by = cy + dy;
          if (bx < 0 || bx >= side_ || by < 0 || by >= side_) continue;
          visited_any = true;
          for (int idx : buckets_[static_cast<std::size_t>(by) * side_ + bx]) {
            const double d = dist(positions_[idx], q);
            if (d < best_dist || (d == best_dist && idx < best)) {
              best_dist = d;
              best = idx;
            }
          }
        }
      }
      if (!visited_any && best >= 0) break;
    }
    return best;
  }

 private:
  int clamp_cell(double v) const {
    return std::min(side_ - 1, std::max(0, static_cast<int>(v * side_)));
  }
  std::size_t bucket_of(const Point2& p) const {
    return static_cast<std::size_t>(clamp_cell(p.y)) * side_ + clamp_cell(p.x);
  }

  const std::vector<Point2>& positions_;
  int side_ = 1;
  std::vector<std::vector<int>> buckets_;
};

std::vector<Point2> grid_positions(int per_side) {
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(per_side) * per_side);
  for (int row = 0; row < per_side; ++row) {
    for (int col = 0; col < per_side; ++col) {
      out.push_back({(col + 0.5) / per_side, (row + 0.5) / per_side});
    }
  }
  return out;
}

// Lloyd's algorithm over fixed uniform samples, k-means++ seeded.
std::vector<Point2> lloyd_positions(int c, std::uint64_t seed) {
  constexpr int kSamples = 100000;
  constexpr int kMaxRounds = 60;
  constexpr double kMoveTolerance = 1e-7;

  SplitMix64 rng(seed);
  std::vector<Point2> samples(kSamples);
  for (Point2& p : samples) p = {rng.next_double(), rng.next_double()};

  std::vector<Point2> centers;
  centers.reserve(c);
  centers.push_back(samples[rng.next_index(kSamples)]);
  std::vector<double> d2(kSamples);
  for (int i = 0; i < kSamples; ++i) d2[i] = sq(dist(samples[i], centers[0]));
  while (static_cast<int>(centers.size()) < c) {
    double total = 0.0;
    for (double v : d2) total += v;
    double pick = rng.next_double() * total;
    int chosen = kSamples - 1;
    for (int i = 0; i < kSamples; ++i) {
      pick -= d2[i];
      if (pick <= 0) {
        chosen = i;
        break;
      }
    }
    centers.push_back(samples[chosen]);
    for (int i = 0; i < kSamples; ++i) d2[i] = std::min(d2[i], sq(dist(samples[i], centers.back())));
  }

  std::vector<double> sum_x(c), sum_y(c);
  std::vector<int> count(c);
  for (int round = 0; round < kMaxRounds; ++round) {
    NearestIndex index(centers);
    std::fill(sum_x.begin(), sum_x.end(), 0.0);
    std::fill(sum_y.begin(), sum_y.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    for (const Point2& p : samples) {
      const int owner = index.nearest(p);
      sum_x[owner] += p.x;
      sum_y[owner] += p.y;
      ++count[owner];
    }
    double moved = 0.0;
    for (int i = 0; i < c; ++i) {
      Point2 next = centers[i];
      if (count[i] > 0) {
        next = {sum_x[i] / count[i], sum_y[i] / count[i]};
      } else {
        // Re-seed an empty cluster at the sample farthest from its center.
        double far_d = -1.0;
        for (const Point2& p : samples) {
          const double d = dist(p, centers[index.nearest(p)]);
          if (d > far_d) {
            far_d = d;
            next = p;
          }
        }
      }
      moved = std::max(moved, dist(next, centers[i]));
      centers[i] = next;
    }
    if (moved < kMoveTolerance) break;
  }
  return centers;
}

}  // namespace

std::vector<Point2> replica_positions(int c, std::uint64_t lloyd_seed) {
  if (c < 1) throw std::invalid_argument("replica count must be >= 1");
  const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(c))));
  if (root * root == c) return grid_positions(root);
  return lloyd_positions(c, lloyd_seed);
}

UnitSquareModel mc_distances(int c, long long samples, std::uint64_t rng_seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  UnitSquareModel model;
  model.replica_count = c;
  model.samples = samples;
  model.rng_seed = rng_seed;
  model.positions = replica_positions(c);

  // Mean pairwise replica distance, computed exactly.
  if (c > 1) {
    double total = 0.0;
    for (int i = 0; i < c; ++i) {
      for (int j = i + 1; j < c; ++j) total += dist(model.positions[i], model.positions[j]);
    }
    model.d_sync = total / (static_cast<double>(c) * (c - 1) / 2.0);
  }

  const NearestIndex index(model.positions);
  constexpr long long kBatch = 1 << 16;
  double sum = 0.0;
  double sum_sq = 0.0;
  long long done = 0;
  for (long long batch = 0; done < samples; ++batch) {
    SplitMix64 rng(derive_seed(rng_seed, static_cast<std::uint64_t>(batch)));
    const long long count = std::min(kBatch, samples - done);
    for (long long i = 0; i < count; ++i) {
      const Point2 src{rng.next_double(), rng.next_double()};
      const Point2 dst{rng.next_double(), rng.next_double()};
      const int near_src = index.nearest(src);
      const int near_dst = index.nearest(dst);
      const double d_src = dist(src, model.positions[near_src]);
      const double d_dst = dist(dst, model.positions[near_dst]);
      // Route through the replica closest to the closer endpoint.
      double routed;
      if (d_src <= d_dst) {
        routed = d_src + dist(model.positions[near_src], dst);
      } else {
        routed = d_dst + dist(model.positions[near_dst], src);
      }
      sum += routed;
      sum_sq += routed * routed;
    }
    done += count;
  }
  model.d_data = sum / static_cast<double>(samples);
  if (samples > 1) {
    const double var =
        std::max(0.0, (sum_sq - sum * sum / static_cast<double>(samples)) / (samples - 1.0));
    model.d_data_stderr = std::sqrt(var / static_cast<double>(samples));
  }
  return model;
}

double total_traffic(int n, int c, double lambda_f, double lambda_s, double beta, double d_data,
                     double d_sync) {
  if (n < 1 || c < 1) throw std::invalid_argument("n and c must be >= 1");
  if (!(beta > 0.0) || beta > std::sqrt(2.0)) throw std::invalid_argument("beta must be in (0, sqrt(2)]");
  if (lambda_f < 0.0 || lambda_s < 0.0) throw std::invalid_argument("rates must be >= 0");
  const double nd = static_cast<double>(n);
  const double cd = static_cast<double>(c);
  return std::sqrt(nd) * beta * (lambda_f * nd * d_data + lambda_s * d_sync * cd * (cd - 1.0));
}

DistanceCache::DistanceCache(std::filesystem::path file) : file_(std::move(file)) {
  std::ifstream in(*file_);
  if (!in) return;
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::parse_error&) {
    return;  // unreadable cache is simply ignored
  }
  for (const auto& entry : root) {
    UnitSquareModel model;
    model.replica_count = entry.at("c").get<int>();
    model.samples = entry.at("samples").get<long long>();
    model.rng_seed = entry.at("seed").get<std::uint64_t>();
    model.d_data = entry.at("d_data").get<double>();
    model.d_sync = entry.at("d_sync").get<double>();
    model.d_data_stderr = entry.value("d_data_stderr", 0.0);
    entries_[{model.replica_count, model.samples, model.rng_seed}] = std::move(model);
  }
}

const UnitSquareModel& DistanceCache::get(int c, long long samples, std::uint64_t rng_seed) {
  const auto key = std::tuple{c, samples, rng_seed};
  const auto it = entries_.find(key);
  if (it != entries_.end()) return it->second;
  return entries_.emplace(key, mc_distances(c, samples, rng_seed)).first->second;
}

void DistanceCache::put(UnitSquareModel model) {
  const auto key = std::tuple{model.replica_count, model.samples, model.rng_seed};
  entries_.insert_or_assign(key, std::move(model));
}

void DistanceCache::save() const {
  if (!file_) return;
  nlohmann::json root = nlohmann::json::array();
  for (const auto& [key, model] : entries_) {
    root.push_back({{"c", model.replica_count},
                    {"samples", model.samples},
                    {"seed", model.rng_seed},
                    {"d_data", model.d_data},
                    {"d_sync", model.d_sync},
                    {"d_data_stderr", model.d_data_stderr}});
  }
  std::ofstream out(*file_);
  if (!out) throw std::runtime_error("cannot write distance cache '" + file_->string() + "'");
  out << root.dump(1) << "\n";
}

int optimal_replicas_search(int n, double lambda_f, double lambda_s, int c_max, long long samples,
                            std::uint64_t rng_seed, DistanceCache& cache) {
  if (c_max < 1) throw std::invalid_argument("c_max must be >= 1");
  int best_c = 1;
  double best_traffic = std::numeric_limits<double>::infinity();
  for (int c = 1; c <= c_max; ++c) {
    const UnitSquareModel& model = cache.get(c, samples, rng_seed);
    const double traffic = total_traffic(n, c, lambda_f, lambda_s, 1.0, model.d_data, model.d_sync);
    if (traffic < best_traffic) {
      best_traffic = traffic;
      best_c = c;
    }
  }
  return best_c;
}

int default_c_max(int n) {
  return std::max(1, static_cast<int>(std::lround(2.0 * std::sqrt(static_cast<double>(n)))));
}

AsymptoticFit fit_property2(const std::vector<FitPoint>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit needs at least three points");
  for (const FitPoint& p : points) {
    if (p.c_opt < 1) throw std::invalid_argument("fit requires c_opt >= 1");
    if (p.n < 1 || !(p.ratio > 0.0)) throw std::invalid_argument("fit requires n >= 1 and ratio > 0");
  }

  // Normal equations for [1, log10 N, log10 ratio].
  double ata[3][3] = {};
  double atb[3] = {};
  for (const FitPoint& p : points) {
    const double row[3] = {1.0, std::log10(static_cast<double>(p.n)), std::log10(p.ratio)};
    const double target = std::log10(static_cast<double>(p.c_opt));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) ata[i][j] += row[i] * row[j];
      atb[i] += row[i] * target;
    }
  }

  // Gaussian elimination with partial pivoting.
  double a[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a[i][j] = ata[i][j];
    a[i][3] = atb[i];
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) throw std::invalid_argument("degenerate design matrix");
    std::swap(a[col], a[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double factor = a[r][col] / a[col][col];
      for (int j = col; j < 4; ++j) a[r][j] -= factor * a[col][j];
    }
  }

  AsymptoticFit fit;
  fit.x = a[0][3] / a[0][0];
  fit.y = a[1][3] / a[1][1];
  fit.z = a[2][3] / a[2][2];

  double residual_sq = 0.0;
  for (const FitPoint& p : points) {
    const double predicted =
        fit.x + fit.y * std::log10(static_cast<double>(p.n)) + fit.z * std::log10(p.ratio);
    residual_sq += sq(predicted - std::log10(static_cast<double>(p.c_opt)));
  }
  fit.residual_norm = std::sqrt(residual_sq);
  return fit;
}

int approx_optimal_replicas(int n, double lambda_f, double lambda_s) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(lambda_f > 0.0)) throw std::invalid_argument("lambda_f must be > 0");
  if (lambda_s == 0.0) throw std::invalid_argument("formula undefined at zero sync rate");
  if (lambda_s < 0.0) throw std::invalid_argument("lambda_s must be >= 0");
  const double value =
      0.47 * std::pow(static_cast<double>(n), 0.40) * std::pow(lambda_f / lambda_s, 0.40);
  return static_cast<int>(std::ceil(value));
}

}  // namespace staterep
