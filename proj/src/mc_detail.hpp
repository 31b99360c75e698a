#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "mpa/errors.hpp"

namespace mpa::detail {

// Shared accumulator for the pairwise Monte-Carlo estimators. Pair counts
// are tracked per clip group (the state row for mode-in-state, the mode
// column for state-in-mode).
struct McAccum {
  Eigen::MatrixXcd sum;
  Eigen::MatrixXd sum_re2, sum_im2;
  std::vector<std::int64_t> pairs;
  std::vector<std::int64_t> clipped;

  explicit McAccum(int n)
      : sum(Eigen::MatrixXcd::Zero(n, n)),
        sum_re2(Eigen::MatrixXd::Zero(n, n)),
        sum_im2(Eigen::MatrixXd::Zero(n, n)),
        pairs(n, 0),
        clipped(n, 0) {}

  void merge(const McAccum& o) {
    sum += o.sum;
    sum_re2 += o.sum_re2;
    sum_im2 += o.sum_im2;
    for (std::size_t g = 0; g < pairs.size(); ++g) {
      pairs[g] += o.pairs[g];
      clipped[g] += o.clipped[g];
    }
  }

  void deposit(int k, int i, const std::complex<double>& v) {
    sum(k, i) += v;
    sum_re2(k, i) += v.real() * v.real();
    sum_im2(k, i) += v.imag() * v.imag();
  }
};

// Runs fn(accum, first_pair, last_pair) over fixed-size pair blocks,
// optionally on several threads, then merges the per-block accumulators in
// block order. Results are therefore bit-identical for any worker count.
template <typename Fn>
McAccum run_blocks(int n, std::int64_t total_pairs, int workers, Fn fn) {
  constexpr std::int64_t kPairsPerBlock = 16384;
  const std::int64_t blocks = std::max<std::int64_t>(
      1, (total_pairs + kPairsPerBlock - 1) / kPairsPerBlock);
  std::vector<McAccum> partial(static_cast<std::size_t>(blocks), McAccum(n));

  auto work_block = [&](std::int64_t b) {
    const std::int64_t first = b * kPairsPerBlock;
    const std::int64_t last = std::min(total_pairs, first + kPairsPerBlock);
    if (first < last) fn(partial[static_cast<std::size_t>(b)], first, last);
  };

  if (workers <= 1 || blocks <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b) work_block(b);
  } else {
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    const int nthreads = static_cast<int>(std::min<std::int64_t>(workers, blocks));
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (std::int64_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1))
          work_block(b);
      });
    for (auto& th : pool) th.join();
  }

  McAccum total(n);
  for (const auto& p : partial) total.merge(p);
  return total;
}

// Sample mean and standard error of the pair means. group_of(k, i) names
// the clip group whose pair count applies to entry (k, i).
template <typename GroupOf>
void mc_finalize(const McAccum& acc, int n, GroupOf group_of, Eigen::MatrixXcd& values,
                 Eigen::MatrixXd& se_re, Eigen::MatrixXd& se_im) {
  values = Eigen::MatrixXcd::Zero(n, n);
  se_re = Eigen::MatrixXd::Zero(n, n);
  se_im = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      const std::int64_t p = acc.pairs[group_of(k, i)];
      if (p == 0) continue;
      const std::complex<double> mean = acc.sum(k, i) / static_cast<double>(p);
      values(k, i) = mean;
      if (p >= 2) {
        const double dp = static_cast<double>(p);
        const double var_re =
            std::max(0.0, (acc.sum_re2(k, i) - dp * mean.real() * mean.real()) / (dp - 1.0));
        const double var_im =
            std::max(0.0, (acc.sum_im2(k, i) - dp * mean.imag() * mean.imag()) / (dp - 1.0));
        se_re(k, i) = std::sqrt(var_re / dp);
        se_im(k, i) = std::sqrt(var_im / dp);
      }
    }
}

inline void mc_check_degenerate(const McAccum& acc, const char* what) {
  for (std::size_t g = 0; g < acc.pairs.size(); ++g) {
    const std::int64_t total = acc.pairs[g] + acc.clipped[g];
    if (total > 0 && acc.clipped[g] * 2 > total)
      throw DegenerateSamples(std::string(what) + " " + std::to_string(g + 1) +
                              ": more than half of the samples fell below the clip threshold");
  }
}

}  // namespace mpa::detail
