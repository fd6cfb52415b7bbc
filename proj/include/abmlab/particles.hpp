#pragma once

// Forward simulation of coalescing and annihilating Brownian particles on
// the line or a torus. Particles move by independent Gaussian increments;
// within each step only adjacent gaps are tested for collision (paths on the
// line cannot cross undetected once every adjacent gap is resolved), each
// gap hitting with the exact bridge probability of its rate-2 gap process.
// When two gaps around one particle signal in the same step, the smaller
// simulated indicator resolves first and the sweep re-enters the remainder.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "abmlab/brownian.hpp"
#include "abmlab/discrete_config.hpp"
#include "abmlab/domain.hpp"
#include "abmlab/errors.hpp"
#include "abmlab/rng.hpp"

namespace abmlab {

struct StepScheme {
  double dt = 0.0;  // <= 0 selects horizon/2048
  bool bridge_correction = true;

  static StepScheme for_horizon(double t) { return StepScheme{t / 2048.0, true}; }
  double resolve_dt(double horizon) const { return dt > 0.0 ? dt : horizon / 2048.0; }
};

// Contiguous range [lo, hi] of initial particle indices; wraps on a torus.
struct Block {
  long lo = 0;
  long hi = 0;
};

inline long block_width(const Block& b, long n0) {
  return b.hi >= b.lo ? b.hi - b.lo + 1 : n0 - b.lo + b.hi + 1;
}

struct CoalescingState {
  Domain domain;
  double time = 0.0;
  std::vector<double> positions;
  std::vector<Block> blocks;
  long initial_count = 0;
};

struct AnnihilatingState {
  Domain domain;
  double time = 0.0;
  std::vector<double> positions;
};

inline long count_in(const AnnihilatingState& s, double a, double b) {
  if (s.domain.is_torus() && a > b) {
    return count_in(std::span<const double>(s.positions), a, s.domain.circumference) +
           count_in(std::span<const double>(s.positions), 0.0, b);
  }
  return count_in(std::span<const double>(s.positions), a, b);
}

inline bool parity_in_even(const AnnihilatingState& s, double a, double b) {
  return count_in(s, a, b) % 2 == 0;
}

class InteractingSystem {
 public:
  enum class Mode { Annihilate, Coalesce };

  struct AnnihilationEvent {
    double time = 0.0;
    double arc_lo = 0.0;  // vanished arc, start-of-step positions
    double arc_hi = 0.0;
    bool wraps = false;
  };

  InteractingSystem(Mode mode, const DiscreteConfig& x0)
      : mode_(mode), domain_(x0.domain), pos_(x0.positions) {
    n0_ = static_cast<long>(pos_.size());
    if (mode_ == Mode::Coalesce) {
      blocks_.resize(pos_.size());
      for (long i = 0; i < n0_; ++i) blocks_[static_cast<std::size_t>(i)] = Block{i, i};
    }
  }

  Mode mode() const { return mode_; }
  double time() const { return time_; }
  long alive_count() const { return static_cast<long>(pos_.size()); }
  long initial_count() const { return n0_; }
  const std::vector<double>& positions() const { return pos_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<AnnihilationEvent>& events() const { return events_; }
  void clear_events() { events_.clear(); }

  // Parity of interface crossings of arc position 0 since construction
  // (torus only; includes vanished arcs that covered the anchor).
  bool anchor_flip_parity() const { return anchor_flips_ % 2 != 0; }

  void advance(double duration, const StepScheme& scheme, RngStream& rng) {
    if (duration <= 0.0) return;
    double dt = scheme.resolve_dt(duration);
    long nsteps = std::max<long>(1, static_cast<long>(std::ceil(duration / dt - 1e-9)));
    double h = duration / static_cast<double>(nsteps);
    for (long s = 0; s < nsteps; ++s) step(h, scheme.bridge_correction, rng);
  }

  CoalescingState coalescing_state() const {
    return CoalescingState{domain_, time_, pos_, blocks_, n0_};
  }

  AnnihilatingState annihilating_state() const {
    return AnnihilatingState{domain_, time_, pos_};
  }

 private:
  static constexpr int kNone = -1;
  static constexpr double kNoHit = std::numeric_limits<double>::infinity();

  bool wrap_pair(int i, int j) const { return j <= i; }

  double gap_start(int i, int j) const {
    double g = pos_[static_cast<std::size_t>(j)] - pos_[static_cast<std::size_t>(i)];
    if (domain_.is_torus() && wrap_pair(i, j)) g += domain_.circumference;
    return g;
  }

  double gap_end(int i, int j) const {
    double g = prop_[static_cast<std::size_t>(j)] - prop_[static_cast<std::size_t>(i)];
    if (domain_.is_torus() && wrap_pair(i, j)) g += domain_.circumference;
    return g;
  }

  void compute_gap(int i, double h, bool corrected, RngStream& rng) {
    int j = next_[static_cast<std::size_t>(i)];
    if (j == kNone || j == i) {
      r_[static_cast<std::size_t>(i)] = kNoHit;
      return;
    }
    double a = gap_start(i, j);
    double b = gap_end(i, j);
    if (corrected) {
      double p = (b <= 0.0) ? 1.0 : std::exp(-a * b / h);
      r_[static_cast<std::size_t>(i)] = rng.uniform() / p;
    } else {
      r_[static_cast<std::size_t>(i)] = (b <= 0.0) ? rng.uniform() : kNoHit;
    }
  }

  // Removes the colliding pair (annihilate) or merges the right particle
  // into the left one (coalesce: both indices follow the lower-indexed
  // motion), then refreshes the gap created by the removal.
  void resolve(int i, int j, double h, bool corrected, RngStream& rng) {
    if (mode_ == Mode::Annihilate) {
      AnnihilationEvent ev;
      ev.time = time_ + 0.5 * h;
      ev.arc_lo = pos_[static_cast<std::size_t>(i)];
      ev.arc_hi = pos_[static_cast<std::size_t>(j)];
      ev.wraps = domain_.is_torus() && wrap_pair(i, j);
      if (ev.wraps) ++anchor_flips_;
      events_.push_back(ev);
      int p = prev_[static_cast<std::size_t>(i)];
      int q = next_[static_cast<std::size_t>(j)];
      alive_[static_cast<std::size_t>(i)] = false;
      alive_[static_cast<std::size_t>(j)] = false;
      if (p == j || q == i) {
        // the last two particles on a torus
        return;
      }
      if (p != kNone) next_[static_cast<std::size_t>(p)] = q;
      if (q != kNone) prev_[static_cast<std::size_t>(q)] = p;
      if (p != kNone && q != kNone && p != q) {
        compute_gap(p, h, corrected, rng);
      } else if (p != kNone) {
        r_[static_cast<std::size_t>(p)] = kNoHit;
      }
      if (p == q && p != kNone) r_[static_cast<std::size_t>(p)] = kNoHit;  // one survivor
    } else {
      blocks_[static_cast<std::size_t>(i)].hi = blocks_[static_cast<std::size_t>(j)].hi;
      int q = next_[static_cast<std::size_t>(j)];
      alive_[static_cast<std::size_t>(j)] = false;
      if (q == i && next_[static_cast<std::size_t>(i)] == j) {
        // two particles on a torus merged into one
        next_[static_cast<std::size_t>(i)] = i;
        prev_[static_cast<std::size_t>(i)] = i;
        r_[static_cast<std::size_t>(i)] = kNoHit;
        return;
      }
      next_[static_cast<std::size_t>(i)] = q;
      if (q != kNone) prev_[static_cast<std::size_t>(q)] = i;
      if (q != kNone && q != i) {
        compute_gap(i, h, corrected, rng);
      } else {
        r_[static_cast<std::size_t>(i)] = kNoHit;
      }
    }
  }

  void step(double h, bool corrected, RngStream& rng) {
    std::size_t n = pos_.size();
    time_ += h;
    if (n == 0) return;
    double sh = std::sqrt(h);
    prop_.resize(n);
    for (std::size_t i = 0; i < n; ++i) prop_[i] = pos_[i] + sh * rng.gaussian();
    if (n == 1) {
      alive_.assign(1, true);
      commit();
      return;
    }

    bool torus = domain_.is_torus();
    next_.assign(n, kNone);
    prev_.assign(n, kNone);
    alive_.assign(n, true);
    r_.assign(n, kNoHit);
    for (std::size_t i = 0; i < n; ++i) {
      next_[i] = (i + 1 < n) ? static_cast<int>(i + 1) : (torus ? 0 : kNone);
      prev_[i] = (i > 0) ? static_cast<int>(i - 1) : (torus ? static_cast<int>(n - 1) : kNone);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (next_[i] != kNone) compute_gap(static_cast<int>(i), h, corrected, rng);
    }

    if (!torus) {
      int head = 0;
      int i = head;
      while (i != kNone) {
        int j = next_[static_cast<std::size_t>(i)];
        if (j == kNone) break;
        if (r_[static_cast<std::size_t>(i)] < 1.0) {
          int k = next_[static_cast<std::size_t>(j)];
          if (k != kNone && r_[static_cast<std::size_t>(j)] < 1.0 &&
              r_[static_cast<std::size_t>(j)] < r_[static_cast<std::size_t>(i)]) {
            resolve(j, k, h, corrected, rng);  // i's right gap refreshed inside
          } else if (mode_ == Mode::Annihilate) {
            int p = prev_[static_cast<std::size_t>(i)];
            int q = next_[static_cast<std::size_t>(j)];
            resolve(i, j, h, corrected, rng);
            i = (p != kNone) ? p : q;
          } else {
            resolve(i, j, h, corrected, rng);
          }
        } else {
          i = j;
        }
      }
    } else {
      // full re-sweeps; fine at the scale torus runs are used
      bool again = true;
      while (again) {
        again = false;
        for (std::size_t i = 0; i < n && !again; ++i) {
          if (!alive_[i]) continue;
          int j = next_[i];
          if (j == kNone || j == static_cast<int>(i)) continue;
          if (r_[i] < 1.0) {
            int k = next_[static_cast<std::size_t>(j)];
            if (k != kNone && k != static_cast<int>(i) &&
                r_[static_cast<std::size_t>(j)] < 1.0 && r_[static_cast<std::size_t>(j)] < r_[i]) {
              resolve(j, k, h, corrected, rng);
            } else {
              resolve(static_cast<int>(i), j, h, corrected, rng);
            }
            again = true;
          }
        }
      }
    }
    commit();
  }

  void commit() {
    std::size_t n = pos_.size();
    bool torus = domain_.is_torus();
    newpos_.clear();
    newblocks_.clear();
    if (alive_.size() != n) alive_.assign(n, true);  // n == 1 fast path
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive_[i]) continue;
      double x = prop_[i];
      if (torus) {
        double winding = std::floor(x / domain_.circumference);
        anchor_flips_ += std::llabs(static_cast<long long>(winding));
        x -= winding * domain_.circumference;
      }
      newpos_.push_back(x);
      if (mode_ == Mode::Coalesce) newblocks_.push_back(blocks_[i]);
    }
    if (torus && !newpos_.empty()) {
      // surviving cyclic order is a rotation of the index order
      std::size_t m = newpos_.size();
      std::size_t rot = 0;
      for (std::size_t i = 1; i < m; ++i) {
        if (newpos_[i] < newpos_[rot]) rot = i;
      }
      std::rotate(newpos_.begin(), newpos_.begin() + static_cast<long>(rot), newpos_.end());
      if (mode_ == Mode::Coalesce) {
        std::rotate(newblocks_.begin(), newblocks_.begin() + static_cast<long>(rot), newblocks_.end());
      }
    }
    pos_.swap(newpos_);
    if (mode_ == Mode::Coalesce) blocks_.swap(newblocks_);
  }

  Mode mode_;
  Domain domain_;
  std::vector<double> pos_;
  std::vector<Block> blocks_;
  double time_ = 0.0;
  long n0_ = 0;
  long long anchor_flips_ = 0;
  std::vector<AnnihilationEvent> events_;

  // per-step scratch
  std::vector<double> prop_;
  std::vector<double> r_;
  std::vector<int> next_;
  std::vector<int> prev_;
  std::vector<char> alive_;
  std::vector<double> newpos_;
  std::vector<Block> newblocks_;
};

namespace detail {

inline std::vector<double> normalize_snapshots(double horizon, std::span<const double> snaps) {
  std::vector<double> out(snaps.begin(), snaps.end());
  if (out.empty()) out.push_back(horizon);
  for (double s : out) {
    if (!(s > 0.0) || s > horizon * (1.0 + 1e-12)) {
      throw ValidationError("snapshot times must lie in (0, horizon]");
    }
  }
  if (!std::is_sorted(out.begin(), out.end())) {
    throw ValidationError("snapshot times must be sorted");
  }
  return out;
}

}  // namespace detail

inline std::vector<CoalescingState> cbm_run(const DiscreteConfig& x0, double horizon,
                                            const StepScheme& scheme, RngStream& rng,
                                            std::span<const double> snapshot_times = {}) {
  if (!(horizon > 0.0)) throw ValidationError("cbm_run: horizon must be positive");
  auto snaps = detail::normalize_snapshots(horizon, snapshot_times);
  InteractingSystem sys(InteractingSystem::Mode::Coalesce, x0);
  std::vector<CoalescingState> out;
  double now = 0.0;
  for (double s : snaps) {
    sys.advance(s - now, scheme, rng);
    now = s;
    out.push_back(sys.coalescing_state());
  }
  return out;
}

inline std::vector<AnnihilatingState> abm_run(const DiscreteConfig& x0, double horizon,
                                              const StepScheme& scheme, RngStream& rng,
                                              std::span<const double> snapshot_times = {}) {
  if (!(horizon > 0.0)) throw ValidationError("abm_run: horizon must be positive");
  auto snaps = detail::normalize_snapshots(horizon, snapshot_times);
  InteractingSystem sys(InteractingSystem::Mode::Annihilate, x0);
  std::vector<AnnihilatingState> out;
  double now = 0.0;
  for (double s : snaps) {
    sys.advance(s - now, scheme, rng);
    now = s;
    out.push_back(sys.annihilating_state());
  }
  return out;
}

// Keeps exactly the positions whose block of coalesced initial indices has
// odd width.
inline AnnihilatingState parity_restrict(const CoalescingState& s) {
  AnnihilatingState out;
  out.domain = s.domain;
  out.time = s.time;
  for (std::size_t i = 0; i < s.positions.size(); ++i) {
    if (block_width(s.blocks[i], s.initial_count) % 2 != 0) {
      out.positions.push_back(s.positions[i]);
    }
  }
  return out;
}

inline std::vector<AnnihilatingState> abm_via_parity(const DiscreteConfig& x0, double horizon,
                                                     const StepScheme& scheme, RngStream& rng,
                                                     std::span<const double> snapshot_times = {}) {
  auto states = cbm_run(x0, horizon, scheme, rng, snapshot_times);
  std::vector<AnnihilatingState> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(parity_restrict(s));
  return out;
}

// Alternating-subset thinning. The subset containing sup(x) and every second
// point below it is one half; the output is either half with probability 1/2.
inline DiscreteConfig thin(const DiscreteConfig& x, RngStream& rng) {
  bool keep_sup_half = rng.uniform() < 0.5;
  std::vector<double> out;
  std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool in_sup_half = ((n - 1 - i) % 2 == 0);
    if (in_sup_half == keep_sup_half) out.push_back(x.positions[i]);
  }
  return DiscreteConfig(x.domain, std::move(out));
}

}  // namespace abmlab
