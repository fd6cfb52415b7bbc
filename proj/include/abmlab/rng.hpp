#pragma once

// Counter-based random streams. A stream is a pure function of
// (root_seed, stream_id, counter): replicas get independent streams by
// deriving fresh stream ids, never by sharing state. This is what makes
// replica fan-out reproducible regardless of host or thread count.

#include <cmath>
#include <cstdint>
#include <string_view>

namespace abmlab {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Philox-2x64, 10 rounds. Counter-based: block index in, two words out.
struct Philox2x64 {
  static constexpr std::uint64_t kMul = 0xD2B74407B1CE6E93ULL;
  static constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;

  static void block(std::uint64_t key, std::uint64_t ctr_hi, std::uint64_t ctr_lo,
                    std::uint64_t& out0, std::uint64_t& out1) {
    std::uint64_t x0 = ctr_hi;
    std::uint64_t x1 = ctr_lo;
    std::uint64_t k = key;
    for (int round = 0; round < 10; ++round) {
      unsigned __int128 prod = static_cast<unsigned __int128>(kMul) * x0;
      std::uint64_t lo = static_cast<std::uint64_t>(prod);
      std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
      x0 = hi ^ k ^ x1;
      x1 = lo;
      k += kWeyl;
    }
    out0 = x0;
    out1 = x1;
  }
};

}  // namespace detail

class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t root_seed, std::uint64_t stream_id)
      : root_seed_(root_seed),
        stream_id_(stream_id),
        key_(detail::splitmix64(root_seed) ^ detail::splitmix64(~stream_id)) {}

  std::uint64_t root_seed() const { return root_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  // Derived stream with a fresh id; the only sanctioned fan-out.
  RngStream substream(std::uint64_t child) const {
    return RngStream(root_seed_, detail::splitmix64(stream_id_ ^ detail::splitmix64(child + 0x51D)));
  }

  // Stable id for (experiment, replica) pairs.
  static std::uint64_t stream_id_for(std::string_view experiment, std::uint64_t replica) {
    return detail::splitmix64(detail::fnv1a64(experiment) ^ detail::splitmix64(replica));
  }

  std::uint64_t next_u64() {
    if (have_word_) {
      have_word_ = false;
      return pending_word_;
    }
    std::uint64_t w0, w1;
    detail::Philox2x64::block(key_, stream_id_, counter_++, w0, w1);
    pending_word_ = w1;
    have_word_ = true;
    return w0;
  }

  // Uniform on the open interval (0,1); midpoints of the 2^53 grid.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; pairs are buffered.
  double gaussian() {
    if (have_gauss_) {
      have_gauss_ = false;
      return pending_gauss_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    pending_gauss_ = r * std::sin(a);
    have_gauss_ = true;
    return r * std::cos(a);
  }

  // Poisson count by inversion, chunked so large means stay exact.
  long poisson(double mean) {
    long total = 0;
    double remaining = mean;
    while (remaining > 16.0) {
      total += poisson_knuth(16.0);
      remaining -= 16.0;
    }
    if (remaining > 0.0) total += poisson_knuth(remaining);
    return total;
  }

 private:
  long poisson_knuth(double lambda) {
    double limit = std::exp(-lambda);
    long k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t root_seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::uint64_t pending_word_ = 0;
  bool have_word_ = false;
  double pending_gauss_ = 0.0;
  bool have_gauss_ = false;
};

}  // namespace abmlab
