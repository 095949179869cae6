#include "hcd/nml.hpp"

#include <cmath>
#include <stdexcept>

namespace hcd {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

namespace {

void check_args(std::int64_t n, int k) {
    if (n < 0) throw std::invalid_argument("sample size must be non-negative");
    if (k < 1) throw std::invalid_argument("category count must be >= 1");
}

// Exact ln C(n, 2) = ln sum_{j=0}^{n} binom(n, j) (j/n)^j ((n-j)/n)^(n-j).
// Every term is a binomial point probability, so the sum is accumulated in
// the linear domain (it never exceeds ~sqrt(pi*n/2) + 2).
double binomial_complexity(std::int64_t n, const double* lf, const double* xl) {
    if (n == 0) return 0.0;
    double sum = 0.0;
    for (std::int64_t j = 0; j <= n; ++j) {
        const double g = lf[n] - lf[j] - lf[n - j] + xl[j] + xl[n - j] - xl[n];
        sum += std::exp(g);
    }
    return std::log(sum);
}

// Extends a column col[i] = ln C(n, i+1) up to max_k entries.
void extend_column(std::int64_t n, std::vector<double>& col, int max_k) {
    const double ln_n = n > 0 ? std::log(static_cast<double>(n)) : 0.0;
    while (static_cast<int>(col.size()) < max_k) {
        const int k = static_cast<int>(col.size());  // col[k] will hold ln C(n, k+1)
        // C(n, k+1) = C(n, k) + (n / (k-1)) C(n, k-1), valid for k >= 2
        const double a = col[k - 1];
        const double b = ln_n - std::log(static_cast<double>(k - 1)) + col[k - 2];
        const double hi = a > b ? a : b;
        col.push_back(n == 0 ? 0.0 : hi + std::log1p(std::exp(-(a > b ? a - b : b - a))));
    }
}

}  // namespace

double log_multinomial_complexity(std::int64_t n, int k) {
    check_args(n, k);
    if (k == 1 || n == 0) return 0.0;
    std::vector<double> lf(n + 1), xl(n + 1);
    lf[0] = 0.0;
    xl[0] = 0.0;
    for (std::int64_t i = 1; i <= n; ++i) {
        lf[i] = std::lgamma(static_cast<double>(i) + 1.0);
        xl[i] = xlogx(static_cast<double>(i));
    }
    std::vector<double> col{0.0, binomial_complexity(n, lf.data(), xl.data())};
    extend_column(n, col, k);
    return col[k - 1];
}

LogComplexityTable::LogComplexityTable(std::int64_t max_n, int max_k)
    : max_n_(max_n), max_k_(max_k) {
    if (max_n < 1) throw std::invalid_argument("max_n must be >= 1");
    if (max_k < 1) throw std::invalid_argument("max_k must be >= 1");
    std::vector<double> lf(max_n + 1), xl(max_n + 1);
    lf[0] = 0.0;
    xl[0] = 0.0;
    for (std::int64_t i = 1; i <= max_n; ++i) {
        lf[i] = std::lgamma(static_cast<double>(i) + 1.0);
        xl[i] = xlogx(static_cast<double>(i));
    }
    entries_.resize((max_n + 1) * max_k);
    std::vector<double> col;
    for (std::int64_t n = 0; n <= max_n; ++n) {
        col.assign({0.0});
        if (max_k >= 2) col.push_back(binomial_complexity(n, lf.data(), xl.data()));
        extend_column(n, col, max_k);
        for (int i = 0; i < max_k; ++i) entries_[n * max_k + i] = col[i];
    }
}

double LogComplexityTable::entry(std::int64_t n, int k) const {
    check_args(n, k);
    if (n > max_n_ || k > max_k_) throw std::invalid_argument("table entry out of range");
    return entries_[n * max_k_ + (k - 1)];
}

LogComplexityTable build_table(std::int64_t max_n, int max_k) {
    return LogComplexityTable(max_n, max_k);
}

void ComplexityCache::grow_tables(std::int64_t n) {
    if (static_cast<std::int64_t>(log_fact_.size()) > n) return;
    const std::size_t old = log_fact_.size();
    log_fact_.resize(n + 1);
    xlx_.resize(n + 1);
    for (std::size_t i = old; i <= static_cast<std::size_t>(n); ++i) {
        log_fact_[i] = std::lgamma(static_cast<double>(i) + 1.0);
        xlx_[i] = xlogx(static_cast<double>(i));
    }
}

double ComplexityCache::binomial_base(std::int64_t n) {
    grow_tables(n);
    return binomial_complexity(n, log_fact_.data(), xlx_.data());
}

double ComplexityCache::operator()(std::int64_t n, int k) {
    check_args(n, k);
    if (k == 1 || n == 0) return 0.0;
    auto& col = columns_[n];
    if (col.empty()) col.assign({0.0, binomial_base(n)});
    if (static_cast<int>(col.size()) < k) extend_column(n, col, k);
    return col[k - 1];
}

}  // namespace hcd
