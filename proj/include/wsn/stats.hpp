#pragma once

// Sample statistics and the replication runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace wsn {

/// Mean with a two-sided Student-t confidence interval.
struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double half_width = 0.0;  // of the 95% interval unless asked otherwise

  double low() const { return mean - half_width; }
  double high() const { return mean + half_width; }
  /// Intervals touch or overlap.
  bool overlaps(const Summary& o) const { return low() <= o.high() && o.low() <= high(); }
};

/// Welford accumulator.
class Accumulator {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

  Summary summary(double confidence = 0.95) const {
    Summary s;
    s.n = n_;
    s.mean = mean_;
    s.stddev = std::sqrt(variance());
    if (n_ > 1) {
      boost::math::students_t dist(static_cast<double>(n_ - 1));
      const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
      s.half_width = t * s.stddev / std::sqrt(static_cast<double>(n_));
    }
    return s;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline Summary summarize(const std::vector<double>& xs, double confidence = 0.95) {
  Accumulator a;
  for (double x : xs) a.add(x);
  return a.summary(confidence);
}

/// Seed of replication `index` in a batch: a splitmix64 step, so neighboring
/// indices give unrelated streams.
inline std::uint64_t replication_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Runs `job(i)` for i in [0, count) on up to `threads` workers. Results are
/// stored by index, so the output does not depend on scheduling.
template <class T>
std::vector<T> run_batch(std::size_t count, unsigned threads, const std::function<T(std::size_t)>& job) {
  std::vector<T> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = job(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += threads) out[i] = job(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace wsn
