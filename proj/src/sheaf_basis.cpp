#include "dvrlu/sheaf_basis.hpp"

#include <algorithm>
#include <limits>

#include "dvrlu/error.hpp"
#include "dvrlu/simul_plu.hpp"
#include "elimination.hpp"

namespace dvrlu {

namespace {

// Points are data of the problem: they are lifted well beyond the working
// precision and treated as exact.
std::int64_t point_prec(std::int64_t N) {
  return std::min<std::int64_t>(Ring::max_digits() / 2, 4 * N + 64);
}

const Ring& ring_of(const std::vector<LocalDatum>& data) {
  if (data.empty()) throw InvalidArgument("no local data");
  return data.front().a.ring();
}

// Precision of a series in the weighted sense: coefficient k known modulo
// pi^(N - k w) counts as known at N.
std::int64_t weighted_prec(const Series& s, std::int64_t w) {
  std::int64_t N = std::numeric_limits<std::int64_t>::max();
  for (std::size_t k = 0; k < s.order(); ++k)
    N = std::min(N, s.c[k].abs_prec() + std::int64_t(k) * w);
  return N;
}

bool weighted_negligible(const Series& s, std::int64_t N, std::int64_t w) {
  for (std::size_t k = 0; k < s.order(); ++k)
    if (!s.c[k].is_big_oh() || s.c[k].abs_prec() < N - std::int64_t(k) * w) return false;
  return true;
}

Series weighted_truncated(Series s, std::int64_t N, std::int64_t w) {
  for (std::size_t k = 0; k < s.order(); ++k) s.c[k] = s.c[k].truncated(N - std::int64_t(k) * w);
  return s;
}

std::int64_t data_prec(const std::vector<LocalDatum>& data, std::int64_t w) {
  std::int64_t N = std::numeric_limits<std::int64_t>::max();
  for (const auto& dt : data)
    for (const auto& s : dt.M.data) N = std::min(N, weighted_prec(s, w));
  return N;
}

void check_distinct(const std::vector<PrecElem>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const PrecElem diff = pts[i] - pts[j];
      if (!diff.is_big_oh()) continue;
      if (pts[i] == pts[j])
        throw CoincidentPoints("points " + std::to_string(i + 1) + " and " +
                               std::to_string(j + 1) + " coincide");
      throw AmbiguousValuation("points " + std::to_string(i + 1) + " and " +
                               std::to_string(j + 1) + " are indistinguishable at this precision");
    }
}

void validate(const std::vector<LocalDatum>& data) {
  const std::size_t d = data.front().M.rows;
  for (const auto& dt : data) {
    if (dt.M.rows != d || dt.M.cols != d) throw InvalidArgument("local matrices must share size");
    if (dt.exponents.size() != d) throw InvalidArgument("exponent list has the wrong length");
    block_type_from_exponents(dt.exponents);
    for (const auto& s : dt.M.data)
      if (std::int64_t(s.order()) < dt.exponents.back() + 1)
        throw InvalidArgument("local matrix truncated below e_d + 1");
    if (!determinant(constant_matrix(dt.M)).is_unit_form())
      throw InvalidArgument("constant term of a local matrix is not detectably invertible");
  }
  std::vector<PrecElem> pts;
  for (const auto& dt : data) pts.push_back(dt.a);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if ((pts[i] - pts[j]).is_big_oh())
        throw CoincidentPoints("points " + std::to_string(i + 1) + " and " +
                               std::to_string(j + 1) + " are not distinct");
}

Series series_one(const Ring& r, std::size_t order, std::int64_t N) {
  Series s = Series::zero(r, order, N);
  if (order) s.c[0] = PrecElem::one(r, N);
  return s;
}

std::int64_t min_coeff_valuation(const SeriesMatrix& w, std::size_t col) {
  std::int64_t m = 0;
  for (std::size_t r = 0; r < w.rows; ++r)
    for (const auto& x : w(r, col).c)
      if (x.is_unit_form()) m = std::min(m, x.valuation().value);
  return m;
}

void series_eliminate(SeriesMatrix& w, std::size_t i, std::size_t j, std::int64_t N,
                      std::int64_t w_param) {
  if (detail::must_swap(w(i, j).constant_term(), w(i, i).constant_term(), i, j))
    w.swap_columns(i, j);
  const Series& tgt = w(i, j);
  bool all_zero = true;
  for (const auto& x : tgt.c) all_zero = all_zero && x.is_big_oh();
  if (all_zero) return;
  // s is our choice, so it is made exact far enough that s * x never costs
  // precision below N on account of s
  const Series s = (tgt * inverse(w(i, i))).lifted(N - min_coeff_valuation(w, i));
  for (std::size_t r = 0; r < w.rows; ++r) {
    const Series& x = w(r, i);
    if (weighted_negligible(x, N, w_param)) continue;
    w(r, j) = w(r, j) - s * x;
  }
}

}  // namespace

BlockType block_type_from_exponents(const std::vector<std::int64_t>& e) {
  if (e.empty()) throw InvalidArgument("empty exponent list");
  std::vector<std::size_t> parts{1};
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (e[i] < e[i - 1]) throw NotSorted("exponents must be nondecreasing");
    if (e[i] == e[i - 1])
      ++parts.back();
    else
      parts.push_back(1);
  }
  if (e.front() < 0) throw InvalidArgument("exponents must be nonnegative");
  return BlockType(parts);
}

std::vector<Poly> build_D(const std::vector<LocalDatum>& data) {
  const Ring& ring = ring_of(data);
  std::vector<PrecElem> pts;
  for (const auto& dt : data) pts.push_back(dt.a);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if ((pts[i] - pts[j]).is_big_oh())
        throw CoincidentPoints("points " + std::to_string(i + 1) + " and " +
                               std::to_string(j + 1) + " are not distinct");
  const std::size_t d = data.front().exponents.size();
  std::int64_t N = 1;
  for (const auto& dt : data) N = std::max(N, dt.a.abs_prec());
  const std::int64_t hp = point_prec(std::min<std::int64_t>(N, Ring::max_digits() / 8));
  std::vector<Poly> D;
  for (std::size_t j = 0; j < d; ++j) {
    Poly f = Poly::constant(PrecElem::one(ring, hp));
    for (const auto& dt : data) {
      if (dt.exponents.size() != d) throw InvalidArgument("exponent lists differ in length");
      f = f * power(Poly::linear(dt.a.lifted(hp), hp), std::size_t(dt.exponents[j]), hp);
    }
    D.push_back(std::move(f));
  }
  return D;
}

std::int64_t denominator_parameter(const std::vector<LocalDatum>& data) {
  std::int64_t w = 0;
  for (const auto& dt : data)
    for (const auto& s : dt.M.data)
      for (std::size_t k = 1; k < s.order(); ++k)
        if (s.c[k].is_unit_form() && s.c[k].valuation().value < 0) {
          const std::int64_t need = (-s.c[k].valuation().value + std::int64_t(k) - 1) / std::int64_t(k);
          w = std::max(w, need);
        }
  return w;
}

SeriesMatrix series_block_l_unitlower(const SeriesMatrix& A, const BlockType& type,
                                      std::int64_t w_param) {
  const std::size_t d = A.rows;
  if (A.cols != d || d == 0) throw InvalidArgument("expected a non-empty square matrix");
  if (type.dim() != d) throw InvalidArgument("block type does not match matrix size");
  const Ring& ring = *A(0, 0).ring;
  const std::size_t T = A(0, 0).order();
  std::int64_t N = std::numeric_limits<std::int64_t>::max();
  for (const auto& s : A.data) {
    if (s.order() != T) throw InvalidArgument("series entries must share their order");
    N = std::min(N, weighted_prec(s, w_param));
  }
  SeriesMatrix w = A;
  for (auto& s : w.data) s = weighted_truncated(s, N, w_param);
  SeriesMatrix L(d, d, Series::zero(ring, T, N));
  for (std::size_t i = 0; i < d; ++i) L(i, i) = series_one(ring, T, N);

  std::size_t j0 = 0;
  for (std::size_t s = 0; s < type.count(); ++s) {
    const std::size_t j1 = j0 + type.parts()[s];
    for (std::size_t j = j0; j < j1; ++j)
      for (std::size_t i = 0; i < j; ++i) series_eliminate(w, i, j, N, w_param);
    std::int64_t v = 0;
    for (std::size_t k = 0; k < j1 && k + 1 < d; ++k) {
      const PrecElem& e = w(k, k).constant_term();
      if (e.is_big_oh())
        throw DegenerateInput("pivot " + std::to_string(k + 1) +
                              " is indistinguishable from zero at this precision");
      v += e.valuation().value;
    }
    auto cap = [&](std::size_t k) { return N - 2 * v - std::int64_t(k) * (v + w_param); };
    std::int64_t extra = 2 * v + 2 + std::int64_t(T) * (v + w_param);
    for (int attempt = 0;; ++attempt) {
      const std::int64_t Np = N + extra;
      bool ok = true;
      std::vector<std::vector<Series>> y(j1 - j0, std::vector<Series>(d));
      for (std::size_t c = j0; c < j1 && ok; ++c) {
        if (c + 1 == d) break;
        const Series pinv = inverse(w(c, c).lifted(Np));
        for (std::size_t r = c + 1; r < d && ok; ++r) {
          Series q = w(r, c).lifted(Np) * pinv;
          for (std::size_t k = 0; k < T; ++k) {
            if (q.c[k].abs_prec() < cap(k)) {
              ok = false;
              break;
            }
            q.c[k] = q.c[k].truncated(cap(k));
          }
          y[c - j0][r] = std::move(q);
        }
      }
      if (ok) {
        for (std::size_t c = j0; c < j1 && c + 1 < d; ++c)
          for (std::size_t r = c + 1; r < d; ++r) L(r, c) = std::move(y[c - j0][r]);
        break;
      }
      if (attempt >= 8) throw DegenerateInput("series normalization did not reach its precision");
      extra = 2 * extra + 4;
    }
    j0 = j1;
  }
  return L;
}

PolyMatrix crt_unit_lower(const std::vector<SeriesMatrix>& L_list,
                          const std::vector<PrecElem>& points) {
  if (L_list.empty() || L_list.size() != points.size())
    throw InvalidArgument("need one local matrix per point");
  check_distinct(points);
  const Ring& ring = points.front().ring();
  const std::size_t d = L_list.front().rows;
  std::int64_t N = 1;
  for (const auto& Lm : L_list) {
    if (Lm.rows != d || Lm.cols != d) throw InvalidArgument("local matrices must share size");
    for (const auto& s : Lm.data) N = std::max(N, std::min<std::int64_t>(s.min_abs_prec(), Ring::max_digits() / 8));
  }
  const std::int64_t hp = point_prec(N);
  const std::size_t n = points.size();
  std::vector<PrecElem> pts;
  std::vector<std::size_t> orders;
  for (std::size_t m = 0; m < n; ++m) {
    pts.push_back(points[m].lifted(hp));
    orders.push_back(L_list[m](0, 0).order());
  }
  // Q_m vanishes to the right order at every other point; Qinv_m inverts
  // its expansion at a_m
  std::vector<Poly> Q;
  std::vector<Series> Qinv;
  for (std::size_t m = 0; m < n; ++m) {
    Poly q = Poly::constant(PrecElem::one(ring, hp));
    for (std::size_t o = 0; o < n; ++o)
      if (o != m) q = q * power(Poly::linear(pts[o], hp), orders[o], hp);
    Qinv.push_back(inverse(taylor_shift(q, pts[m], orders[m])));
    Q.push_back(std::move(q));
  }
  PolyMatrix L(d, d, Poly(ring, {}));
  for (std::size_t i = 0; i < d; ++i) {
    std::int64_t diag_prec = std::numeric_limits<std::int64_t>::max();
    for (const auto& Lm : L_list) diag_prec = std::min(diag_prec, Lm(i, i).min_abs_prec());
    L(i, i) = Poly::constant(PrecElem::one(ring, std::min(diag_prec, hp)));
    for (std::size_t j = 0; j < i; ++j) {
      Poly acc(ring, {});
      for (std::size_t m = 0; m < n; ++m)
        acc = acc + Q[m] * inverse_taylor_shift(L_list[m](i, j) * Qinv[m], pts[m]);
      L(i, j) = std::move(acc);
    }
  }
  return L;
}

SeriesMatrix taylor_shift(const PolyMatrix& m, const PrecElem& a, std::size_t order) {
  SeriesMatrix out(m.rows, m.cols, Series());
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    if (m.data[i].c.empty())
      out.data[i] = Series::zero(a.ring(), order, a.abs_prec());
    else
      out.data[i] = taylor_shift(m.data[i], a, order);
  }
  return out;
}

PrecMatrix constant_matrix(const SeriesMatrix& m) {
  const Ring& ring = *m(0, 0).ring;
  PrecMatrix out(ring, m.rows, m.cols, 0);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j).constant_term();
  return out;
}

SeriesMatrix constant_part(const SeriesMatrix& m) {
  SeriesMatrix out = m;
  for (auto& s : out.data)
    for (std::size_t k = 1; k < s.order(); ++k)
      s.c[k] = PrecElem::zero(*s.ring, s.c[0].abs_prec());
  return out;
}

SeriesMatrix operator*(const PrecMatrix& a, const SeriesMatrix& b) {
  if (a.cols() != b.rows) throw InvalidArgument("matrix product shape mismatch");
  SeriesMatrix out(a.rows(), b.cols, Series());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      Series acc = a(i, 0) * b(0, j);
      for (std::size_t k = 1; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      out(i, j) = std::move(acc);
    }
  return out;
}

SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.cols != b.rows) throw InvalidArgument("matrix product shape mismatch");
  SeriesMatrix out(a.rows, b.cols, Series());
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      Series acc = a(i, 0) * b(0, j);
      for (std::size_t k = 1; k < a.cols; ++k) acc = acc + a(i, k) * b(k, j);
      out(i, j) = std::move(acc);
    }
  return out;
}

PolyMatrix operator*(const PrecMatrix& a, const PolyMatrix& b) {
  if (a.cols() != b.rows) throw InvalidArgument("matrix product shape mismatch");
  PolyMatrix out(a.rows(), b.cols, Poly(a.ring(), {}));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      Poly acc(a.ring(), {});
      for (std::size_t k = 0; k < a.cols(); ++k)
        if (!b(k, j).c.empty()) acc = acc + a(i, k) * b(k, j);
      out(i, j) = std::move(acc);
    }
  return out;
}

std::optional<GlobalBasis> solve_sheaf_with(const std::vector<LocalDatum>& data,
                                            const PrecMatrix& omega, const SheafOptions& opts) {
  validate(data);
  const std::size_t d = data.front().M.rows;
  GlobalBasis out;
  for (const auto& dt : data) out.block_types.push_back(block_type_from_exponents(dt.exponents));
  out.D = build_D(data);
  out.w = denominator_parameter(data);
  out.prec = std::min(data_prec(data, out.w), omega.min_abs_prec());

  // the draw is accepted under the same conditions as a simultaneous block
  // LU of the constant terms
  SimulInstance inst;
  inst.eps = opts.eps;
  inst.variant = BoundVariant::pi;
  for (std::size_t m = 0; m < data.size(); ++m)
    inst.family.push_back({constant_matrix(data[m].M).truncated(out.prec), out.block_types[m]});
  SimulOutcome cert = simultaneous_block_lu_with(inst, omega.truncated(out.prec));
  if (!cert.ok()) return std::nullopt;
  out.v = cert.result->v;
  out.omega = cert.result->omega;
  out.omega_inv = cert.result->omega_inv;

  std::vector<SeriesMatrix> Ls;
  std::vector<PrecElem> pts;
  for (std::size_t m = 0; m < data.size(); ++m) {
    const std::size_t T = std::size_t(data[m].exponents.back() + 1);
    SeriesMatrix Mm = data[m].M;
    for (auto& s : Mm.data) s = weighted_truncated(s.with_order(T), out.prec, out.w);
    try {
      Ls.push_back(series_block_l_unitlower(out.omega * Mm, out.block_types[m], out.w));
    } catch (const PrecisionError&) {
      return std::nullopt;
    }
    pts.push_back(data[m].a);
  }
  (void)d;
  out.L = crt_unit_lower(Ls, pts);
  out.M = out.omega_inv * out.L;
  return out;
}

GlobalBasis solve_sheaf(const std::vector<LocalDatum>& data, Rng& rng, const SheafOptions& opts) {
  validate(data);
  if (opts.max_tries < 1) throw InvalidArgument("max_tries must be positive");
  const Ring& ring = ring_of(data);
  const std::size_t d = data.front().M.rows;
  const std::int64_t N = data_prec(data, denominator_parameter(data));
  for (int t = 1; t <= opts.max_tries; ++t) {
    auto res = solve_sheaf_with(data, random_matrix(rng, ring, d, N), opts);
    if (res) {
      res->tries = t;
      return std::move(*res);
    }
  }
  throw ExhaustedRetries("no suitable preconditioner after " + std::to_string(opts.max_tries) +
                         " tries");
}

namespace {

bool all_big_oh(const Series& s, std::int64_t& margin) {
  for (const auto& x : s.c) {
    if (!x.is_big_oh()) return false;
    margin = std::min(margin, x.abs_prec());
  }
  return true;
}

// Distinct evaluation points: k written in base p, read as an element of R.
PrecElem sample_point(const Ring& ring, std::size_t k, std::int64_t prec) {
  std::vector<std::uint32_t> digits;
  for (std::size_t x = k; x; x /= ring.p()) digits.push_back(std::uint32_t(x % ring.p()));
  if (digits.empty()) return PrecElem::zero(ring, prec);
  return PrecElem::from_digits(ring, 0, digits, prec);
}

}  // namespace

VerificationReport verify_local_equivalence(const GlobalBasis& basis, const LocalDatum& datum) {
  VerificationReport rep;
  const BlockType type = block_type_from_exponents(datum.exponents);
  const std::size_t d = basis.M.rows;
  const Ring& ring = datum.a.ring();
  const std::size_t T = std::size_t(datum.exponents.back() + 1);
  const std::int64_t hp = point_prec(basis.prec);
  const PrecElem a = datum.a.lifted(hp);

  // (1) the transition matrix from the expansion of omega M to omega M_m
  try {
    const SeriesMatrix Lhat = taylor_shift(basis.omega * basis.M, a, T);
    SeriesMatrix B = datum.M;
    for (auto& s : B.data) s = s.with_order(T);
    B = basis.omega * B;
    bool lower = true;
    std::int64_t ignored = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) lower = lower && all_big_oh(Lhat(i, j), ignored);
    if (!lower) throw DegenerateDecomposition("expansion of omega M is not lower triangular");
    // forward substitution: Lhat X = B
    SeriesMatrix X(d, d, Series());
    for (std::size_t i = 0; i < d; ++i) {
      const Series inv = inverse(Lhat(i, i));
      for (std::size_t j = 0; j < d; ++j) {
        Series acc = B(i, j);
        for (std::size_t k = 0; k < i; ++k) acc = acc - Lhat(i, k) * X(k, j);
        X(i, j) = acc * inv;
      }
    }
    bool ok = true;
    std::int64_t margin = std::numeric_limits<std::int64_t>::max();
    for (std::size_t s = 0; s < type.count(); ++s)
      for (std::size_t i = type.boundary(s + 1); i < d; ++i)
        for (std::size_t j = type.boundary(s); j < type.boundary(s + 1); ++j)
          if (!all_big_oh(X(i, j), margin)) {
            ok = false;
            rep.detail += "transition entry (" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ") does not vanish; ";
          }
    for (std::size_t s = 0; s < type.count() && ok; ++s) {
      const std::size_t b0 = type.boundary(s), n = type.parts()[s];
      PrecMatrix blk(ring, n, n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) blk(i, j) = X(b0 + i, b0 + j).constant_term();
      if (determinant(blk).is_big_oh()) {
        ok = false;
        rep.detail += "diagonal block " + std::to_string(s + 1) + " is not invertible; ";
      }
    }
    rep.congruence = ok;
    rep.congruence_margin = margin == std::numeric_limits<std::int64_t>::max() ? hp : margin;
  } catch (const PrecisionError& e) {
    rep.detail += std::string("congruence check: ") + e.what() + "; ";
  }

  // (2) det M is a nonzero constant: equal values at more points than its degree
  try {
    std::size_t deg = 0;
    for (std::size_t j = 0; j < d; ++j) {
      std::size_t cmax = 0;
      for (std::size_t i = 0; i < d; ++i)
        cmax = std::max(cmax, basis.M(i, j).c.empty() ? 0 : basis.M(i, j).size() - 1);
      deg += cmax;
    }
    bool ok = true;
    for (std::size_t k = 0; k <= deg && ok; ++k) {
      const PrecElem x = sample_point(ring, k, hp);
      PrecMatrix ev(ring, d, d, hp);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          if (!basis.M(i, j).c.empty()) ev(i, j) = evaluate(basis.M(i, j), x);
      const PrecElem det = determinant(ev);
      if (k == 0) {
        rep.det_value = det;
        if (det.is_big_oh()) {
          ok = false;
          rep.detail += "det M vanishes at this precision; ";
        }
      } else if (!(det - rep.det_value).is_big_oh()) {
        ok = false;
        rep.detail += "det M is not constant; ";
      }
    }
    rep.det_constant = ok;
  } catch (const PrecisionError& e) {
    rep.detail += std::string("determinant check: ") + e.what() + "; ";
  }

  // (3) D_j divides D_{j+1}
  rep.divisibility = true;
  for (std::size_t j = 0; j + 1 < basis.D.size(); ++j) {
    const Poly rem = divmod_monic(basis.D[j + 1], basis.D[j]).second;
    for (const auto& x : rem.c)
      if (!x.is_big_oh()) {
        rep.divisibility = false;
        rep.detail += "D_" + std::to_string(j + 1) + " does not divide D_" + std::to_string(j + 2) + "; ";
        break;
      }
  }

  // (4) the order of D_j at a is e_j
  rep.exponents = basis.D.size() == d;
  for (std::size_t j = 0; j < basis.D.size() && rep.exponents; ++j) {
    const std::size_t e = std::size_t(datum.exponents[j]);
    const Series s = taylor_shift(basis.D[j], a, e + 1);
    for (std::size_t k = 0; k < e; ++k)
      if (!s.c[k].is_big_oh()) rep.exponents = false;
    if (s.c[e].is_big_oh()) rep.exponents = false;
    if (!rep.exponents) rep.detail += "order of D_" + std::to_string(j + 1) + " at the point differs; ";
  }
  return rep;
}

}  // namespace dvrlu
