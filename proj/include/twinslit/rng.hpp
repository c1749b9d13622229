#pragma once

#include <cmath>
#include <cstdint>

namespace twinslit {

/// splitmix64 step; also used as the seed mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based per-trajectory substream: the state is a pure function of
/// (master seed, stream index), so results are independent of worker count
/// and iteration order.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t master_seed, std::uint64_t stream_index) {
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix64(s);
    s = master_seed ^ (0x9e3779b97f4a7c15ULL + stream_index * 0xda942042e4dd58b5ULL);
    std::uint64_t b = splitmix64(s);
    state_ = a ^ (b + 0x632be59bd9b4e019ULL);
    if (state_ == 0) state_ = 0x106689d45497fdb5ULL;
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (self-contained for cross-platform
  /// byte-reproducibility).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = uniform();
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    double theta = 2.0 * M_PI * v;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace twinslit
