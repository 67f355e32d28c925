#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "reccalc/rng.hpp"

// Trial-level parallel Monte Carlo with a fixed chunk layout.  Workers pull
// chunks from an atomic counter, but every trial draws from its own
// counter-based stream and chunk partials are combined in chunk-index
// order, so results are bit-identical for any worker count.

namespace reccalc::parallel {

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

namespace detail {

inline constexpr std::uint64_t kChunk = 8192;

template <class Body>
void run_chunked(std::uint64_t n, unsigned workers, Body&& body) {
  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
  if (workers <= 1 || n_chunks <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      body(c, c * kChunk, std::min(n, (c + 1) * kChunk));
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        body(c, c * kChunk, std::min(n, (c + 1) * kChunk));
      } catch (...) {
        {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, n_chunks));
  pool.reserve(count);
  for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline MCEstimate finish(double sum, double sumsq, std::uint64_t n,
                         std::uint64_t seed) {
  MCEstimate est;
  est.n = n;
  est.seed = seed;
  est.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double var =
        std::max(0.0, (sumsq - static_cast<double>(n) * est.mean * est.mean) /
                          static_cast<double>(n - 1));
    est.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return est;
}

}  // namespace detail

// fn(stream, trial) -> array<double, K>; component-wise mean estimates over
// the same trials.
template <std::size_t K, class Fn>
std::array<MCEstimate, K> mc_mean_multi(std::uint64_t n, std::uint64_t seed,
                                        unsigned workers, Fn&& fn) {
  const std::uint64_t n_chunks = (n + detail::kChunk - 1) / detail::kChunk;
  std::vector<std::array<double, K>> sums(n_chunks);
  std::vector<std::array<double, K>> sumsqs(n_chunks);
  detail::run_chunked(n, workers,
                      [&](std::uint64_t c, std::uint64_t lo, std::uint64_t hi) {
                        std::array<double, K> s{}, s2{};
                        for (std::uint64_t i = lo; i < hi; ++i) {
                          rng::Stream stream(seed, i);
                          const std::array<double, K> v = fn(stream, i);
                          for (std::size_t k = 0; k < K; ++k) {
                            s[k] += v[k];
                            s2[k] += v[k] * v[k];
                          }
                        }
                        sums[c] = s;
                        sumsqs[c] = s2;
                      });
  std::array<MCEstimate, K> out;
  for (std::size_t k = 0; k < K; ++k) {
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      sum += sums[c][k];
      sumsq += sumsqs[c][k];
    }
    out[k] = detail::finish(sum, sumsq, n, seed);
  }
  return out;
}

template <class Fn>
MCEstimate mc_mean(std::uint64_t n, std::uint64_t seed, unsigned workers,
                   Fn&& fn) {
  auto wrapped = [&fn](rng::Stream& stream, std::uint64_t i) {
    return std::array<double, 1>{fn(stream, i)};
  };
  return mc_mean_multi<1>(n, seed, workers, wrapped)[0];
}

// All n per-trial values, indexed by trial.
template <class Fn>
std::vector<double> mc_collect(std::uint64_t n, std::uint64_t seed,
                               unsigned workers, Fn&& fn) {
  std::vector<double> out(n);
  detail::run_chunked(n, workers,
                      [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
                        for (std::uint64_t i = lo; i < hi; ++i) {
                          rng::Stream stream(seed, i);
                          out[i] = fn(stream, i);
                        }
                      });
  return out;
}

// fn -> bin index in [0, nbins) or -1 to skip; exact integer counts.
template <class Fn>
std::vector<std::uint64_t> mc_bincount(std::uint64_t n, std::uint64_t seed,
                                       unsigned workers, int nbins, Fn&& fn) {
  const std::uint64_t n_chunks = (n + detail::kChunk - 1) / detail::kChunk;
  std::vector<std::vector<std::uint64_t>> partial(n_chunks);
  detail::run_chunked(n, workers,
                      [&](std::uint64_t c, std::uint64_t lo, std::uint64_t hi) {
                        std::vector<std::uint64_t> local(nbins, 0);
                        for (std::uint64_t i = lo; i < hi; ++i) {
                          rng::Stream stream(seed, i);
                          const int b = fn(stream, i);
                          if (b >= 0 && b < nbins) ++local[b];
                        }
                        partial[c] = std::move(local);
                      });
  std::vector<std::uint64_t> out(nbins, 0);
  for (const auto& local : partial) {
    for (int b = 0; b < nbins; ++b) out[b] += local[b];
  }
  return out;
}

}  // namespace reccalc::parallel
