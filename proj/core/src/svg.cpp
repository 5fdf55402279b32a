#include "staterep/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace staterep {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Tick step of the form {1, 2, 5} * 10^k covering roughly `target` ticks.
double nice_step(double span, int target) {
  if (span <= 0) return 1.0;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void LineChart::add_series(std::string name, std::vector<std::pair<double, double>> points) {
  std::sort(points.begin(), points.end());
  series_.push_back({std::move(name), std::move(points)});
}

std::string LineChart::render(int width, int height) const {
  const double left = 70, right = 20, top = 36, bottom = 52;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  auto tx = [&](double v) { return log_x_ ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y_ ? std::log10(v) : v; };

  double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
  bool first = true;
  for (const Series& s : series_) {
    for (const auto& [x, y] : s.points) {
      if ((log_x_ && x <= 0) || (log_y_ && y <= 0)) {
        throw std::invalid_argument("log axis requires positive data");
      }
      if (first) {
        min_x = max_x = tx(x);
        min_y = max_y = ty(y);
        first = false;
      } else {
        min_x = std::min(min_x, tx(x));
        max_x = std::max(max_x, tx(x));
        min_y = std::min(min_y, ty(y));
        max_y = std::max(max_y, ty(y));
      }
    }
  }
  if (max_x - min_x < 1e-12) {
    min_x -= 0.5;
    max_x += 0.5;
  }
  if (max_y - min_y < 1e-12) {
    min_y -= 0.5;
    max_y += 0.5;
  }
  const double pad_y = 0.05 * (max_y - min_y);
  min_y -= pad_y;
  max_y += pad_y;

  auto px = [&](double v) { return left + (tx(v) - min_x) / (max_x - min_x) * plot_w; };
  auto py = [&](double v) { return top + plot_h - (ty(v) - min_y) / (max_y - min_y) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title_) << "</text>\n";

  // Axes box.
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // Ticks and grid lines in transformed coordinates.
  auto draw_ticks = [&](bool vertical) {
    const double lo = vertical ? min_y : min_x;
    const double hi = vertical ? max_y : max_x;
    const bool log_axis = vertical ? log_y_ : log_x_;
    const double step = log_axis ? std::max(1.0, std::floor((hi - lo) / 5.0)) : nice_step(hi - lo, 5);
    double tick = std::ceil(lo / step) * step;
    for (; tick <= hi + 1e-9; tick += step) {
      const double value = log_axis ? std::pow(10.0, tick) : tick;
      const double pos = vertical ? top + plot_h - (tick - lo) / (hi - lo) * plot_h
                                  : left + (tick - lo) / (hi - lo) * plot_w;
      if (vertical) {
        svg << "<line x1=\"" << left << "\" y1=\"" << pos << "\" x2=\"" << left + plot_w
            << "\" y2=\"" << pos << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << pos + 4
            << "\" text-anchor=\"end\">" << fmt(value) << "</text>\n";
      } else {
        svg << "<line x1=\"" << pos << "\" y1=\"" << top << "\" x2=\"" << pos << "\" y2=\""
            << top + plot_h << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << pos << "\" y=\"" << top + plot_h + 16
            << "\" text-anchor=\"middle\">" << fmt(value) << "</text>\n";
      }
    }
  };
  draw_ticks(false);
  draw_ticks(true);

  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">" << escape(x_label_) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + plot_h / 2 << ")\">" << escape(y_label_) << "</text>\n";

  for (std::size_t i = 0; i < series_.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    std::ostringstream pts;
    for (const auto& [x, y] : series_[i].points) pts << px(x) << "," << py(y) << " ";
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
        << pts.str() << "\"/>\n";
    for (const auto& [x, y] : series_[i].points) {
      svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    }
    const double ly = top + 14 + 16.0 * static_cast<double>(i);
    svg << "<line x1=\"" << left + plot_w - 130 << "\" y1=\"" << ly << "\" x2=\""
        << left + plot_w - 110 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + plot_w - 104 << "\" y=\"" << ly + 4 << "\">"
        << escape(series_[i].name) << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

void LineChart::save(const std::filesystem::path& path, int width, int height) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write chart '" + path.string() + "'");
  out << render(width, height);
}

}  // namespace staterep
