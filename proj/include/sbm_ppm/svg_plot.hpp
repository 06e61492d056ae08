#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace sbm_ppm {

struct GridPoint {
  double alpha = 0.0;
  double beta = 0.0;
  double rate = 0.0;
};

// Heat map of success rates over (beta, alpha): dark = low rate. The red
// polyline is sqrt(alpha) = sqrt(beta) + sqrt(K).
inline void plot_grid_svg(std::ostream& os, const std::vector<GridPoint>& pts, int k) {
  std::vector<double> as, bs;
  for (const auto& p : pts) {
    as.push_back(p.alpha);
    bs.push_back(p.beta);
  }
  std::sort(as.begin(), as.end());
  as.erase(std::unique(as.begin(), as.end()), as.end());
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  const double cell = 12.0, margin = 40.0;
  const double w = margin * 2 + cell * static_cast<double>(bs.size());
  const double h = margin * 2 + cell * static_cast<double>(as.size());
  auto col = [&](double b) { return std::lower_bound(bs.begin(), bs.end(), b) - bs.begin(); };
  auto row = [&](double a) { return std::lower_bound(as.begin(), as.end(), a) - as.begin(); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  for (const auto& p : pts) {
    const int g = static_cast<int>(std::lround(255.0 * std::clamp(p.rate, 0.0, 1.0)));
    os << "<rect x=\"" << margin + cell * static_cast<double>(col(p.beta)) << "\" y=\""
       << h - margin - cell * static_cast<double>(row(p.alpha) + 1) << "\" width=\"" << cell << "\" height=\""
       << cell << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
  }
  if (!as.empty() && !bs.empty() && bs.size() > 1 && as.size() > 1) {
    const double bstep = bs[1] - bs[0], astep = as[1] - as[0];
    os << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"2\" points=\"";
    for (std::size_t t = 0; t <= 100; ++t) {
      const double b = bs.front() + (bs.back() - bs.front()) * static_cast<double>(t) / 100.0;
      const double a = std::pow(std::sqrt(b) + std::sqrt(static_cast<double>(k)), 2.0);
      if (a > as.back() + astep) break;
      os << margin + cell * ((b - bs.front()) / bstep + 0.5) << ','
         << h - margin - cell * ((a - as.front()) / astep + 0.5) << ' ';
    }
    os << "\"/>\n";
  }
  os << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">beta</text>\n";
  os << "<text x=\"12\" y=\"" << h / 2 << "\" text-anchor=\"middle\">alpha</text>\n";
  os << "</svg>\n";
}

struct TracePoint {
  int run_id = 0;
  int iteration = 0;
  double distance = 0.0;
};

// One polyline per run: distance to truth against iteration.
inline void plot_convergence_svg(std::ostream& os, const std::vector<TracePoint>& pts) {
  const double width = 640, height = 400, margin = 50;
  int max_it = 1;
  double max_d = 1.0;
  std::map<int, std::vector<TracePoint>> runs;
  for (const auto& p : pts) {
    max_it = std::max(max_it, p.iteration);
    max_d = std::max(max_d, p.distance);
    runs[p.run_id].push_back(p);
  }
  auto x = [&](int it) { return margin + (width - 2 * margin) * it / max_it; };
  auto y = [&](double d) { return height - margin - (height - 2 * margin) * d / max_d; };
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
     << height - margin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
     << "\" stroke=\"black\"/>\n";
  std::size_t c = 0;
  for (auto& [id, trace] : runs) {
    std::sort(trace.begin(), trace.end(), [](auto& a, auto& b) { return a.iteration < b.iteration; });
    os << "<polyline fill=\"none\" stroke=\"" << palette[c++ % 10] << "\" points=\"";
    for (const auto& p : trace) os << x(p.iteration) << ',' << y(p.distance) << ' ';
    os << "\"/>\n";
  }
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">iteration</text>\n";
  os << "<text x=\"14\" y=\"" << height / 2 << "\" text-anchor=\"middle\">distance</text>\n";
  os << "</svg>\n";
}

}  // namespace sbm_ppm
