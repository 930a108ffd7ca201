#include "dvrlu/stats.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "dvrlu/error.hpp"

namespace dvrlu {

namespace {

void check_q(std::uint32_t q) {
  if (q < 2) throw InvalidArgument("q must be at least 2");
}

// 1 - (1 - x)^d without cancellation for small x.
double one_minus_pow(double x, std::size_t d) {
  return -std::expm1(double(d) * std::log1p(-x));
}

}  // namespace

double expected_E_series(std::uint32_t q, std::size_t d, double eps) {
  check_q(q);
  if (d == 0) return 0;
  const double qd = q;
  double sum = 0, qv = 1;
  for (int v = 1;; ++v) {
    qv /= qd;
    sum += one_minus_pow(qv, d);
    // remaining terms are bounded by sum_{u>v} d q^-u
    if (double(d) * qv / (qd - 1) < eps || v > 4000) break;
  }
  return sum;
}

double expected_E_alternating(std::uint32_t q, std::size_t d) {
  check_q(q);
  // terms reach about C(d,k)/q^k <= 2^d, so keep d extra bits of headroom
  const mp_bitcnt_t bits = 2 * d + 128;
  mpf_class sum(0, bits), term(0, bits);
  mpz_class binom = 1, qk = 1;
  for (std::size_t k = 1; k <= d; ++k) {
    binom = binom * mpz_class(static_cast<unsigned long>(d - k + 1)) /
            mpz_class(static_cast<unsigned long>(k));
    qk *= q;
    term = mpf_class(binom, bits);
    term /= mpf_class(qk - 1, bits);
    if (k % 2 == 1)
      sum += term;
    else
      sum -= term;
  }
  return sum.get_d();
}

double expected_E(std::uint32_t q, std::size_t d) {
  const double s = expected_E_series(q, d);
  const double a = expected_E_alternating(q, d);
  if (std::abs(s - a) > 1e-10)
    throw std::logic_error("E(q,d) evaluations disagree for q=" + std::to_string(q) +
                           ", d=" + std::to_string(d));
  return s;
}

double integral_part_bound(std::uint32_t q, std::size_t d) {
  check_q(q);
  if (d == 0) throw InvalidArgument("d must be positive");
  std::int64_t fl = 0;
  for (std::uint64_t x = q; x <= d; x *= q) ++fl;
  const double L = std::log(double(d)) / std::log(double(q));
  const double dist = std::max(0.0, std::min(L - double(fl), double(fl + 1) - L));
  return double(q) / double(q - 1) * std::pow(double(q), -dist);
}

double abdel_ghaffar_cdf(std::uint32_t q, std::size_t d, std::int64_t v) {
  check_q(q);
  if (v < 0) return 0;
  double p = 1;
  for (std::size_t i = 1; i <= d; ++i) p *= -std::expm1(-double(v + std::int64_t(i)) * std::log(double(q)));
  return p;
}

double abdel_ghaffar_mean(std::uint32_t q, std::size_t d) {
  check_q(q);
  double s = 0;
  for (std::size_t i = 1; i <= d; ++i) s += 1.0 / std::expm1(double(i) * std::log(double(q)));
  return s;
}

double vds_cdf(std::uint32_t q, std::size_t ds, std::int64_t v) {
  if (ds == 0) throw InvalidArgument("block size must be positive");
  return abdel_ghaffar_cdf(q, ds, v);
}

double vl_tail_bound(std::uint32_t q, std::size_t, double ell) {
  check_q(q);
  if (!(ell > 0)) throw InvalidArgument("ell must be positive");
  const double lq = std::log(double(q));
  return double(q) / double(q - 1) * std::exp(-ell * lq) * (2 + ell * lq);
}

double vl_cdf_lower_bound(std::uint32_t q, std::size_t d, double x) {
  check_q(q);
  return 1 - double(d) * std::pow(double(q), -x);
}

double pi_q(std::uint32_t q) {
  check_q(q);
  const double lq = std::log(double(q));
  double log_prod = 0;
  // tail factor prod_{i>I}(1 - q^-i) differs from 1 by less than 2 q^-I
  for (int i = 1; i < 2000; ++i) {
    const double x = std::exp(-double(i) * lq);
    log_prod += std::log1p(-x);
    if (2 * x < 1e-17) break;
  }
  const double pi = double(q) * std::exp(log_prod);
  const double lo = double(q) - 1 - 1 / double(q - 1), hi = double(q) - 1;
  if (!(lo < pi && pi < hi)) throw std::logic_error("Pi(q) outside its known range");
  return pi;
}

std::uint64_t Summary::count(std::int64_t v) const {
  if (v < offset || v > max_value()) return 0;
  return histogram[std::size_t(v - offset)];
}

double Summary::cdf(std::int64_t v) const {
  if (!trials) return 0;
  std::uint64_t c = 0;
  for (std::int64_t u = offset; u <= std::min(v, max_value()); ++u) c += count(u);
  return double(c) / double(trials);
}

Summary summarize(const std::vector<std::int64_t>& values, std::uint64_t retries) {
  Summary s;
  s.trials = values.size();
  s.retries = retries;
  if (values.empty()) return s;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.offset = *lo;
  s.histogram.assign(std::size_t(*hi - *lo + 1), 0);
  double sum = 0;
  for (auto v : values) {
    ++s.histogram[std::size_t(v - s.offset)];
    sum += double(v);
  }
  s.mean = sum / double(values.size());
  double ss = 0;
  for (auto v : values) ss += (double(v) - s.mean) * (double(v) - s.mean);
  s.stddev = values.size() > 1 ? std::sqrt(ss / double(values.size() - 1)) : 0;
  s.ci = kZ99 * s.stddev / std::sqrt(double(values.size()));
  return s;
}

TrialValues run_trials(const Ring& ring, std::size_t d, const McOptions& opts,
                       const Sampler& sample) {
  if (d == 0) throw InvalidArgument("d must be positive");
  if (opts.start_prec < 1) throw InvalidArgument("starting precision must be positive");
  TrialValues out;
  out.values.resize(opts.trials);
  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, unsigned(std::max<std::size_t>(opts.trials, 1))));
  std::vector<std::uint64_t> retries(jobs, 0);
  std::vector<std::exception_ptr> errors(jobs);
  auto worker = [&](unsigned w) {
    try {
      for (std::size_t t = w; t < opts.trials; t += jobs) {
        Rng rng = trial_rng(opts.seed, t);
        std::int64_t N = opts.start_prec;
        PrecMatrix m = random_matrix(rng, ring, d, N);
        for (int doublings = 0;; ++doublings) {
          try {
            out.values[t] = sample(m);
            break;
          } catch (const PrecisionError&) {
            if (doublings >= opts.max_doublings || 2 * N > Ring::max_digits()) throw;
            m = refine_matrix(rng, m, N, N);
            N *= 2;
            ++retries[w];
          }
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto r : retries) out.retries += r;
  return out;
}

std::vector<std::int64_t> column(const TrialValues& tv, std::size_t k) {
  std::vector<std::int64_t> c;
  c.reserve(tv.values.size());
  for (const auto& v : tv.values) c.push_back(v.at(k));
  return c;
}

std::int64_t sample_vl(const PrecMatrix& m) {
  const VlValue v = vl_of(stable_l(m));
  if (!v.exact()) throw PrecisionError("V_L not determined at this precision");
  return v.lo;
}

std::int64_t sample_detval(const PrecMatrix& m) {
  const Valuation v = vij_statistics(m).det_val;
  if (!v.exact) throw PrecisionError("determinant valuation not determined at this precision");
  return v.value;
}

Summary monte_carlo_vl(const Ring& ring, std::size_t d, const McOptions& opts) {
  TrialValues tv = run_trials(ring, d, opts, [](const PrecMatrix& m) {
    return std::vector<std::int64_t>{sample_vl(m)};
  });
  return summarize(column(tv, 0), tv.retries);
}

Summary monte_carlo_detval(const Ring& ring, std::size_t d, const McOptions& opts) {
  TrialValues tv = run_trials(ring, d, opts, [](const PrecMatrix& m) {
    return std::vector<std::int64_t>{sample_detval(m)};
  });
  return summarize(column(tv, 0), tv.retries);
}

std::vector<Summary> monte_carlo_vds(const Ring& ring, const BlockType& type,
                                     const McOptions& opts) {
  TrialValues tv = run_trials(ring, type.dim(), opts, [&](const PrecMatrix& m) {
    std::vector<std::int64_t> out;
    for (const Valuation& v : block_valuations(vij_statistics(m), type)) {
      if (!v.exact) throw PrecisionError("block valuation not determined at this precision");
      out.push_back(v.value);
    }
    return out;
  });
  std::vector<Summary> res;
  for (std::size_t s = 0; s < type.count(); ++s) res.push_back(summarize(column(tv, s), tv.retries));
  return res;
}

double tail_frequency(const Summary& s, std::uint32_t q, std::size_t d, double ell,
                      TailCentering centering) {
  if (!s.trials) return 0;
  double L = std::log(double(d)) / std::log(double(q));
  if (std::abs(L - std::round(L)) < 1e-12) L = std::round(L);
  std::uint64_t c = 0;
  for (std::int64_t v = s.offset; v <= s.max_value(); ++v) {
    if (centering == TailCentering::statement) {
      if (std::abs(double(v) - L - 0.5) > ell + 0.5) c += s.count(v);
    } else {
      // the proof bounds P[V_L >= v0 + l + 1/2] + P[V_L <= v0 - l - 1/2]
      if (std::abs(double(v) - L + 0.5) >= ell + 0.5) c += s.count(v);
    }
  }
  return double(c) / double(s.trials);
}

}  // namespace dvrlu
