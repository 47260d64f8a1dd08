#pragma once
// Shared value types and deterministic randomness helpers.
//
// Every random quantity in the library is derived from explicit 64-bit seeds
// via counter-style hashing, so identical inputs give identical outputs on
// any platform and any thread count.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace hybridnet {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dist2(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double dist(const Vec2& a, const Vec2& b) { return std::sqrt(dist2(a, b)); }

// splitmix64 finalizer; full avalanche on 64 bits.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Order-sensitive combination: mix_seq(a, b) != mix_seq(b, a).
inline std::uint64_t mix_seq(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

inline std::uint64_t derive_seed(std::uint64_t base) { return mix64(base); }

template <class... Rest>
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t head, Rest... rest) {
  return derive_seed(mix_seq(base, head), rest...);
}

// Uniform double in [0,1) from the top 53 bits; bit-exact everywhere.
inline double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Substream labels keep independent random quantities on disjoint seeds.
enum class Stream : std::uint64_t {
  antennas = 1,
  nodes = 2,
  pairing = 3,
  phase = 4,
  synthetic = 5,
  power_iter = 6,
};

inline std::uint64_t stream_seed(std::uint64_t seed, Stream s) {
  return mix_seq(seed, static_cast<std::uint64_t>(s));
}

// mt19937_64 is fully specified by the standard; sampling avoids
// std::uniform_real_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  double uniform() { return unit_double(bits()); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n) via 128-bit multiply; n must be positive.
  std::size_t index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: n must be positive");
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(bits()) * static_cast<unsigned __int128>(n)) >> 64);
  }

 private:
  std::mt19937_64 eng_;
};

// Worker cap: HYBRIDNET_THREADS wins over hardware concurrency.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("HYBRIDNET_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 4096) return static_cast<unsigned>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

// Static striping: item i is always processed, and results must be written to
// per-index slots, so output is independent of the worker count.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = thread_budget();
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const unsigned t_n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(t_n);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (unsigned t = 0; t < t_n; ++t) {
    pool.emplace_back([&, t]() {
      const std::size_t lo = count * t / t_n;
      const std::size_t hi = count * (t + 1) / t_n;
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace hybridnet
