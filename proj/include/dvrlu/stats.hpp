#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dvrlu/lu_stable.hpp"
#include "dvrlu/random.hpp"
#include "dvrlu/ring.hpp"

namespace dvrlu {

// E(q,d) = sum_{v>=1} 1 - (1 - q^-v)^d, summed until the tail is below eps.
double expected_E_series(std::uint32_t q, std::size_t d, double eps = 1e-15);
// Same quantity from sum_k (-1)^(k-1) C(d,k) / (q^k - 1), in high precision.
double expected_E_alternating(std::uint32_t q, std::size_t d);
// Series value, after checking that both evaluations agree to 1e-10.
double expected_E(std::uint32_t q, std::size_t d);

// Bound (q/(q-1)) q^-dist(log_q d, N) on |E(q,d) - floor(log_q d)|.
double integral_part_bound(std::uint32_t q, std::size_t d);

// P[v(det) <= v] for a Haar d x d matrix; v < 0 gives 0.
double abdel_ghaffar_cdf(std::uint32_t q, std::size_t d, std::int64_t v);
double abdel_ghaffar_mean(std::uint32_t q, std::size_t d);
// P[V_{d,s} <= v] for a block of size d_s.
double vds_cdf(std::uint32_t q, std::size_t ds, std::int64_t v);
// Upper bound on P[|V_L - log_q d - 1/2| > l + 1/2].
double vl_tail_bound(std::uint32_t q, std::size_t d, double ell);
// Lower bound 1 - d q^-x on P[V_L < x].
double vl_cdf_lower_bound(std::uint32_t q, std::size_t d, double x);
// q * prod_{i>=1} (1 - q^-i).
double pi_q(std::uint32_t q);

// 99% two-sided normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

struct Summary {
  std::size_t trials = 0;
  double mean = 0, stddev = 0;
  double ci = 0;                        // half-width of the 99% interval on the mean
  std::vector<std::uint64_t> histogram;  // histogram[v - offset]
  std::int64_t offset = 0;               // smallest observed value
  std::uint64_t retries = 0;             // precision doublings over all trials

  std::uint64_t count(std::int64_t v) const;
  double freq(std::int64_t v) const { return trials ? double(count(v)) / double(trials) : 0; }
  double cdf(std::int64_t v) const;  // empirical P[X <= v]
  std::int64_t max_value() const { return offset + std::int64_t(histogram.size()) - 1; }
};

Summary summarize(const std::vector<std::int64_t>& values, std::uint64_t retries = 0);

struct McOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::int64_t start_prec = 64;
  int max_doublings = 8;  // exceeded budget raises PrecisionError
  unsigned jobs = 1;
};

// Observes one matrix; throws PrecisionError when precision is insufficient.
using Sampler = std::function<std::vector<std::int64_t>(const PrecMatrix&)>;

struct TrialValues {
  std::vector<std::vector<std::int64_t>> values;  // indexed by trial
  std::uint64_t retries = 0;
};

// Runs trials on Haar d x d matrices. On a precision failure the same matrix
// is refined with fresh digits to twice the precision and observed again.
TrialValues run_trials(const Ring& ring, std::size_t d, const McOptions& opts,
                       const Sampler& sample);
// Column k of the per-trial values.
std::vector<std::int64_t> column(const TrialValues& tv, std::size_t k);

// V_L from Algorithm 2; the interval form counts as insufficient precision.
std::int64_t sample_vl(const PrecMatrix& m);
std::int64_t sample_detval(const PrecMatrix& m);

Summary monte_carlo_vl(const Ring& ring, std::size_t d, const McOptions& opts);
Summary monte_carlo_detval(const Ring& ring, std::size_t d, const McOptions& opts);
// One summary per block of the type.
std::vector<Summary> monte_carlo_vds(const Ring& ring, const BlockType& type,
                                     const McOptions& opts);

enum class TailCentering { statement, proof };  // log_q d + 1/2 or log_q d - 1/2
double tail_frequency(const Summary& s, std::uint32_t q, std::size_t d, double ell,
                      TailCentering centering = TailCentering::statement);

}  // namespace dvrlu
