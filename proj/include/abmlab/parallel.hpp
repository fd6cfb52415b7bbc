#pragma once

// Deterministic replica fan-out. Each replica owns a stream derived from
// (root_seed, experiment, replica index); per-replica results land in
// preassigned slots and are reduced in replica order, so estimates are
// byte-identical for any thread count.

#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "abmlab/rng.hpp"
#include "abmlab/stats.hpp"

namespace abmlab {

struct ReplicaPlan {
  std::uint64_t root_seed = 0x5EED;
  std::string experiment;
  long replicas = 10000;
  int threads = 0;  // 0 = hardware concurrency

  ReplicaPlan with_experiment(std::string name) const {
    ReplicaPlan p = *this;
    p.experiment = std::move(name);
    return p;
  }
};

namespace detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace detail

// Runs fn(stream, replica) -> double over all replicas.
template <typename Fn>
std::vector<double> replica_values(const ReplicaPlan& plan, Fn&& fn) {
  std::vector<double> values(static_cast<std::size_t>(plan.replicas));
  int threads = detail::resolve_threads(plan.threads);
  auto worker = [&](long lo, long hi) {
    for (long r = lo; r < hi; ++r) {
      RngStream stream(plan.root_seed, RngStream::stream_id_for(plan.experiment, static_cast<std::uint64_t>(r)));
      values[static_cast<std::size_t>(r)] = fn(stream, r);
    }
  };
  if (threads <= 1 || plan.replicas < 2 * threads) {
    worker(0, plan.replicas);
  } else {
    std::vector<std::thread> pool;
    long chunk = (plan.replicas + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      long lo = t * chunk;
      long hi = std::min<long>(plan.replicas, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return values;
}

// Runs fn(stream, replica, out_row) filling `width` doubles per replica.
template <typename Fn>
std::vector<double> replica_rows(const ReplicaPlan& plan, std::size_t width, Fn&& fn) {
  std::vector<double> rows(static_cast<std::size_t>(plan.replicas) * width);
  int threads = detail::resolve_threads(plan.threads);
  auto worker = [&](long lo, long hi) {
    for (long r = lo; r < hi; ++r) {
      RngStream stream(plan.root_seed, RngStream::stream_id_for(plan.experiment, static_cast<std::uint64_t>(r)));
      fn(stream, r, &rows[static_cast<std::size_t>(r) * width]);
    }
  };
  if (threads <= 1 || plan.replicas < 2 * threads) {
    worker(0, plan.replicas);
  } else {
    std::vector<std::thread> pool;
    long chunk = (plan.replicas + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      long lo = t * chunk;
      long hi = std::min<long>(plan.replicas, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace abmlab
