// Minimal hand-rendered SVG line charts; CSV stays the primary output and
// these exist so sweeps can be eyeballed without external tooling.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace staterep {

class LineChart {
 public:
  LineChart(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

  void set_log_x(bool log) { log_x_ = log; }
  void set_log_y(bool log) { log_y_ = log; }

  void add_series(std::string name, std::vector<std::pair<double, double>> points);

  std::string render(int width = 720, int height = 460) const;
  void save(const std::filesystem::path& path, int width = 720, int height = 460) const;

 private:
  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
  };

  std::string title_, x_label_, y_label_;
  bool log_x_ = false, log_y_ = false;
  std::vector<Series> series_;
};

}  // namespace staterep
