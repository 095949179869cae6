#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace hcd {

/// x*ln(x) with the 0*ln(0) = 0 convention used in all entropy terms.
double xlogx(double x);

/// ln C(n, k), the log parametric complexity of the k-category multinomial
/// family at sample size n, in nats. C(n, 1) = 1 and C(0, k) = 1 exactly;
/// C(n, 2) is the exact binomial sum; larger k via the linear recurrence
/// C(n, k+1) = C(n, k) + (n / (k-1)) C(n, k-1). Cost O(n + k).
double log_multinomial_complexity(std::int64_t n, int k);

/// Dense table of ln C(n, k) for n in [0, max_n], k in [1, max_k].
/// Construction is single-writer; the table is immutable afterwards and
/// safe for concurrent reads.
class LogComplexityTable {
  public:
    LogComplexityTable(std::int64_t max_n, int max_k);

    double entry(std::int64_t n, int k) const;
    std::int64_t max_n() const { return max_n_; }
    int max_k() const { return max_k_; }

  private:
    std::int64_t max_n_;
    int max_k_;
    std::vector<double> entries_;  // (max_n+1) x max_k, row-major
};

LogComplexityTable build_table(std::int64_t max_n, int max_k);

/// Lazy memo of ln C(n, k) keyed by the sample sizes actually seen.
/// Each detector run owns one instance (no locking); pooled window counts
/// repeat heavily across sliding windows, so most lookups hit the cache.
class ComplexityCache {
  public:
    double operator()(std::int64_t n, int k);

  private:
    std::unordered_map<std::int64_t, std::vector<double>> columns_;
    std::vector<double> log_fact_;  // lgamma(i+1)
    std::vector<double> xlx_;       // i*ln(i)

    void grow_tables(std::int64_t n);
    double binomial_base(std::int64_t n);
};

}  // namespace hcd
