#pragma once

// Dependency-light space-time diagrams: straight polyline segments per
// particle per step, optional shading of the regions where the voter
// profile equals 1. Space runs horizontally, time runs upward.

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "abmlab/domain.hpp"
#include "abmlab/particles.hpp"
#include "abmlab/voter.hpp"

namespace abmlab {

struct SpaceTimeDiagram {
  double width = 800.0;
  double height = 560.0;
  std::size_t max_segments = 100000;

  // One sampled frame of the evolution.
  struct Frame {
    double time = 0.0;
    std::vector<double> positions;
    int left_color = 0;  // used when shading
  };

  Domain domain = Domain::line();
  double horizon = 1.0;
  double space_lo = 0.0;
  double space_hi = 1.0;
  bool shade = false;
  std::vector<Frame> frames;

  void add_frame(double time, const std::vector<double>& positions, int left_color = 0) {
    frames.push_back(Frame{time, positions, left_color});
  }

  void render(std::ostream& os) const {
    double sx = space_hi > space_lo ? width / (space_hi - space_lo) : 1.0;
    double sy = horizon > 0.0 ? height / horizon : 1.0;
    auto X = [&](double x) { return (x - space_lo) * sx; };
    auto Y = [&](double t) { return height - t * sy; };

    // decimation keeps the total segment count under the cap
    std::size_t stride = 1;
    std::size_t total = 0;
    for (const auto& f : frames) total += f.positions.size();
    if (total > max_segments) stride = (total + max_segments - 1) / max_segments;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (shade) {
      for (std::size_t k = 0; k + stride < frames.size(); k += stride) {
        const Frame& f = frames[k];
        const Frame& g = frames[std::min(k + stride, frames.size() - 1)];
        double y0 = Y(f.time);
        double y1 = Y(g.time);
        // shade slabs of the earlier frame's profile
        std::vector<double> edges{space_lo};
        for (double p : f.positions) {
          if (p > space_lo && p < space_hi) edges.push_back(p);
        }
        edges.push_back(space_hi);
        int color = f.left_color;
        if (domain.is_torus()) {
          // left edge of the window is arc 0; frame color is anchored there
          color = f.left_color;
        } else {
          // count interfaces left of the window
          long cnt = 0;
          for (double p : f.positions) {
            if (p <= space_lo) ++cnt;
          }
          if (cnt % 2 != 0) color = 1 - color;
        }
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
          if (color == 1) {
            os << "<rect x=\"" << X(edges[i]) << "\" y=\"" << std::min(y0, y1) << "\" width=\""
               << (X(edges[i + 1]) - X(edges[i])) << "\" height=\"" << std::abs(y0 - y1)
               << "\" fill=\"#cfe0f5\" stroke=\"none\"/>\n";
          }
          color = 1 - color;
        }
      }
    }

    // trajectories: connect nearest positions frame-to-frame
    for (std::size_t k = 0; k + stride < frames.size(); k += stride) {
      const Frame& f = frames[k];
      const Frame& g = frames[std::min(k + stride, frames.size() - 1)];
      for (double p : f.positions) {
        // nearest successor position
        if (g.positions.empty()) break;
        auto it = std::lower_bound(g.positions.begin(), g.positions.end(), p);
        double best = (it != g.positions.end()) ? *it : g.positions.back();
        if (it != g.positions.begin()) {
          double alt = *(it - 1);
          if (domain.distance(alt, p) < domain.distance(best, p)) best = alt;
        }
        if (domain.is_torus() && domain.distance(best, p) < std::fabs(best - p)) {
          continue;  // wrap segment: skip rather than draw across the window
        }
        if (domain.distance(best, p) > 4.0 * std::sqrt(std::max(1e-12, (g.time - f.time)))) {
          continue;  // no plausible continuation (annihilated)
        }
        os << "<line x1=\"" << X(p) << "\" y1=\"" << Y(f.time) << "\" x2=\"" << X(best)
           << "\" y2=\"" << Y(g.time) << "\" stroke=\"black\" stroke-width=\"0.6\"/>\n";
      }
    }
    os << "</svg>\n";
  }
};

}  // namespace abmlab
