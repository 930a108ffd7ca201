#include "dvrlu/lu_fast.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>

#include "dvrlu/error.hpp"
#include "elimination.hpp"

namespace dvrlu {

MulAlgo parse_mul_algo(const std::string& s) {
  if (s == "classical") return MulAlgo::classical;
  if (s == "strassen") return MulAlgo::strassen;
  throw InvalidArgument("unknown multiplication algorithm '" + s + "'");
}

namespace {

PrecMatrix classical(const PrecMatrix& a, const PrecMatrix& b) {
  PrecMatrix c(a.ring(), a.rows(), b.cols(), std::numeric_limits<std::int32_t>::max());
  if (a.cols() == 0) return c;
  return a * b;
}

PrecMatrix strassen(const PrecMatrix& a, const PrecMatrix& b, std::size_t cutoff,
                    std::int64_t pad_prec) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (std::min({m, k, n}) <= std::max<std::size_t>(cutoff, 1)) return classical(a, b);
  const std::size_t m2 = (m + 1) / 2, k2 = (k + 1) / 2, n2 = (n + 1) / 2;
  const Ring& ring = a.ring();
  // pad to even sizes with zeros known far beyond any real entry
  PrecMatrix A(ring, 2 * m2, 2 * k2, pad_prec), B(ring, 2 * k2, 2 * n2, pad_prec);
  A.set_block(0, 0, a);
  B.set_block(0, 0, b);
  auto q = [](const PrecMatrix& x, std::size_t r, std::size_t c, std::size_t h, std::size_t w) {
    return x.block(r * h, c * w, h, w);
  };
  const PrecMatrix a11 = q(A, 0, 0, m2, k2), a12 = q(A, 0, 1, m2, k2), a21 = q(A, 1, 0, m2, k2),
                   a22 = q(A, 1, 1, m2, k2);
  const PrecMatrix b11 = q(B, 0, 0, k2, n2), b12 = q(B, 0, 1, k2, n2), b21 = q(B, 1, 0, k2, n2),
                   b22 = q(B, 1, 1, k2, n2);
  auto rec = [&](const PrecMatrix& x, const PrecMatrix& y) {
    return strassen(x, y, cutoff, pad_prec);
  };
  const PrecMatrix p1 = rec(a11 + a22, b11 + b22);
  const PrecMatrix p2 = rec(a21 + a22, b11);
  const PrecMatrix p3 = rec(a11, b12 - b22);
  const PrecMatrix p4 = rec(a22, b21 - b11);
  const PrecMatrix p5 = rec(a11 + a12, b22);
  const PrecMatrix p6 = rec(a21 - a11, b11 + b12);
  const PrecMatrix p7 = rec(a12 - a22, b21 + b22);
  PrecMatrix C(ring, 2 * m2, 2 * n2, pad_prec);
  C.set_block(0, 0, p1 + p4 - p5 + p7);
  C.set_block(0, n2, p3 + p5);
  C.set_block(m2, 0, p2 + p4);
  C.set_block(m2, n2, p1 - p2 + p3 + p6);
  return C.block(0, 0, m, n);
}

std::int64_t pad_precision(const PrecMatrix& a, const PrecMatrix& b) {
  std::int64_t hi = 0, lo = 0;
  for (const PrecMatrix* m : {&a, &b})
    for (std::size_t i = 0; i < m->rows(); ++i)
      for (std::size_t j = 0; j < m->cols(); ++j) {
        hi = std::max(hi, (*m)(i, j).abs_prec());
        lo = std::min(lo, (*m)(i, j).valuation().value);
      }
  return 2 * hi - 2 * lo + 1;
}

bool rect_is_base(std::size_t k, std::size_t m, std::size_t threshold) {
  return std::min(k, m) <= std::max<std::size_t>(threshold, 1);
}

struct Ctx {
  std::int64_t N;
  const FastOptions& opts;
  const Ring* ring_;
  const Ring& ring() const { return *ring_; }
  PrecMatrix mul(const PrecMatrix& a, const PrecMatrix& b) const {
    return matmul(a, b, opts.mul, opts.strassen_cutoff).truncated(N);
  }
  void record(std::size_t i, std::size_t j) const {
    if (opts.trace) opts.trace->emplace_back(i, j);
  }
};

// Columns of an index set given as two ranges of a (k + m)-column layout.
std::vector<std::size_t> col_set(std::size_t x0, std::size_t x1, std::size_t y0, std::size_t y1,
                                 std::size_t k) {
  std::vector<std::size_t> s;
  for (std::size_t c = x0; c < x1; ++c) s.push_back(c);
  for (std::size_t c = y0; c < y1; ++c) s.push_back(k + c);
  return s;
}

PrecMatrix gather_cols(const PrecMatrix& m, const std::vector<std::size_t>& cols) {
  PrecMatrix out(m.ring(), m.rows(), cols.size(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t c = 0; c < cols.size(); ++c) out(i, c) = m(i, cols[c]);
  return out;
}

void scatter_cols(PrecMatrix& m, const std::vector<std::size_t>& cols, const PrecMatrix& src) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t c = 0; c < cols.size(); ++c) m(i, cols[c]) = src(i, c);
}

// A column transform kept either as one matrix or as a product of
// transforms acting on column subsets. Applying the factors one after the
// other costs what one product with the composed matrix would, so
// composing only pays off when fast multiplication can use the dense blocks.
struct Xform {
  std::size_t n = 0;
  std::optional<PrecMatrix> dense;
  std::vector<std::pair<std::vector<std::size_t>, Xform>> factors;
};

// rows * T
PrecMatrix apply(const Ctx& ctx, const Xform& x, PrecMatrix rows) {
  if (rows.rows() == 0) return rows;
  if (x.dense) return ctx.mul(rows, *x.dense);
  for (const auto& [cols, f] : x.factors) scatter_cols(rows, cols, apply(ctx, f, gather_cols(rows, cols)));
  return rows;
}

PrecMatrix densify(const Ctx& ctx, const Xform& x) {
  if (x.dense) return *x.dense;
  return apply(ctx, x, PrecMatrix::identity(ctx.ring(), x.n, ctx.N));
}

// Accumulated column transform of clear_rec. Columns never touched are still
// unit vectors and every other column is zero outside a known row set, so
// composing with a step only multiplies the rows and columns that can be
// nonzero. The skipped terms are exact zeros or unit-vector copies.
struct Transform {
  PrecMatrix t;
  std::vector<char> ident;
  std::vector<std::vector<char>> support;  // support[c][r]: row r of column c may be nonzero

  Transform(const Ring& ring, std::size_t n, std::int64_t N)
      : t(PrecMatrix::identity(ring, n, N)), ident(n, 1), support(n, std::vector<char>(n, 0)) {
    for (std::size_t c = 0; c < n; ++c) support[c][c] = 1;
  }

  // t(:, cols) <- t(:, cols) * s
  void compose(const Ctx& ctx, const std::vector<std::size_t>& cols, const PrecMatrix& s) {
    const std::size_t n = t.rows();
    const Ring& ring = t.ring();
    std::vector<std::size_t> gen, unit;  // positions within cols
    for (std::size_t j = 0; j < cols.size(); ++j) (ident[cols[j]] ? unit : gen).push_back(j);
    std::vector<char> in_u(n, 0);
    for (std::size_t j : gen)
      for (std::size_t r = 0; r < n; ++r) in_u[r] = in_u[r] || support[cols[j]][r];
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < n; ++r)
      if (in_u[r]) rows.push_back(r);
    PrecMatrix prod;
    if (!gen.empty()) {
      PrecMatrix a(ring, rows.size(), gen.size(), 0), b(ring, gen.size(), cols.size(), 0);
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t g = 0; g < gen.size(); ++g) a(i, g) = t(rows[i], cols[gen[g]]);
      for (std::size_t g = 0; g < gen.size(); ++g)
        for (std::size_t j = 0; j < cols.size(); ++j) b(g, j) = s(gen[g], j);
      prod = ctx.mul(a, b);
    }
    std::vector<char> new_support = in_u;
    for (std::size_t j : unit) new_support[cols[j]] = 1;
    for (std::size_t c : cols)
      for (std::size_t r = 0; r < n; ++r)
        if (support[c][r]) t(r, c) = PrecElem::zero(ring, ctx.N);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) t(rows[i], cols[j]) = prod(i, j);
    for (std::size_t u : unit) {
      const std::size_t r = cols[u];
      for (std::size_t j = 0; j < cols.size(); ++j)
        t(r, cols[j]) = in_u[r] ? (t(r, cols[j]) + s(u, j)).truncated(ctx.N) : s(u, j).truncated(ctx.N);
    }
    for (std::size_t c : cols) {
      support[c] = new_support;
      ident[c] = 0;
    }
  }
};

struct ClearOut {
  PrecMatrix x;
  Xform t;
};

ClearOut clear_rec(const Ctx& ctx, const PrecMatrix& X, const PrecMatrix& Y, std::size_t row_off,
                   std::size_t col_off) {
  const std::size_t k = X.rows(), m = Y.cols();
  const Ring& ring = X.ring();
  const std::int64_t N = ctx.N;
  if (rect_is_base(k, m, ctx.opts.threshold)) {
    PrecMatrix z(ring, k, k + m, N);
    z.set_block(0, 0, X);
    z.set_block(0, k, Y);
    PrecMatrix t = PrecMatrix::identity(ring, k + m, N);
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t i = 0; i < k; ++i) {
        ctx.record(row_off + i, col_off + c);
        detail::eliminate(z, &t, i, i, k + c, N);
      }
    Xform x;
    x.n = k + m;
    x.dense = std::move(t);
    return {z.block(0, 0, k, k), std::move(x)};
  }
  const std::size_t k1 = k / 2, m1 = m / 2;
  // Z holds the working (X | Y)
  PrecMatrix Z(ring, k, k + m, N);
  Z.set_block(0, 0, X);
  Z.set_block(0, k, Y);
  const bool compose = ctx.opts.mul == MulAlgo::strassen && k + m > ctx.opts.strassen_cutoff;
  std::optional<Transform> T;
  if (compose) T.emplace(ring, k + m, N);
  Xform out;
  out.n = k + m;

  struct Step {
    std::size_t r0, r1, x0, x1, y0, y1;
  };
  const Step steps[4] = {{0, k1, 0, k1, 0, m1},
                         {0, k1, 0, k1, m1, m},
                         {k1, k, k1, k, 0, m1},
                         {k1, k, k1, k, m1, m}};
  for (const Step& st : steps) {
    const std::size_t kr = st.r1 - st.r0;
    PrecMatrix xs = Z.block(st.r0, st.x0, kr, st.x1 - st.x0);
    PrecMatrix ys = Z.block(st.r0, k + st.y0, kr, st.y1 - st.y0);
    ClearOut sub = clear_rec(ctx, xs, ys, row_off + st.r0, col_off + st.y0);
    const auto cols = col_set(st.x0, st.x1, st.y0, st.y1, k);
    Z.set_block(st.r0, st.x0, sub.x);
    for (std::size_t i = st.r0; i < st.r1; ++i)
      for (std::size_t c = st.y0; c < st.y1; ++c) Z(i, k + c) = PrecElem::zero(ring, N);
    // rows below the pivot rows see the same column operations; rows above
    // are zero on these columns
    if (st.r1 < k) {
      PrecMatrix below = Z.block(st.r1, 0, k - st.r1, k + m);
      const PrecMatrix upd = apply(ctx, sub.t, gather_cols(below, cols));
      for (std::size_t i = 0; i < below.rows(); ++i)
        for (std::size_t c = 0; c < cols.size(); ++c) Z(st.r1 + i, cols[c]) = upd(i, c);
    }
    if (compose)
      T->compose(ctx, cols, densify(ctx, sub.t));
    else
      out.factors.emplace_back(cols, std::move(sub.t));
  }
  if (compose) out.dense = std::move(T->t);
  return {Z.block(0, 0, k, k), std::move(out)};
}

void record_colex(const Ctx& ctx, std::size_t d, std::size_t off) {
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < j; ++i) ctx.record(off + i, off + j);
}

LvOutput lv_rec(const Ctx& ctx, const PrecMatrix& A, std::size_t off) {
  const std::size_t d = A.rows();
  const std::int64_t N = ctx.N;
  if (d <= std::max<std::size_t>(ctx.opts.threshold, 1)) {
    record_colex(ctx, d, off);
    return lv_decomposition(A);
  }
  const Ring& ring = A.ring();
  const std::size_t d1 = d / 2, d2 = d - d1;
  LvOutput top = lv_rec(ctx, A.block(0, 0, d1, d1), off);
  const PrecMatrix A2 = A.block(0, d1, d1, d2), A3 = A.block(d1, 0, d2, d1),
                   A4 = A.block(d1, d1, d2, d2);

  LvOutput out;
  out.prec = N;
  out.Lp = PrecMatrix(ring, d, d, N);
  out.Vp = PrecMatrix(ring, d, d, N);
  out.Hp = PrecMatrix(ring, d, d, N);
  out.Wp = PrecMatrix(ring, d, d, N);
  out.Lp.set_block(0, 0, top.Lp);
  out.Lp.set_block(d1, 0, ctx.mul(A3, top.Vp));
  out.Vp.set_block(0, 0, top.Vp);

  ClearOut cl = clear_rec(ctx, top.Hp, A2, off, off + d1);
  PrecMatrix bottom(ring, d2, d, N);
  bottom.set_block(0, 0, ctx.mul(A3, top.Wp));
  bottom.set_block(0, d1, A4);
  bottom = apply(ctx, cl.t, bottom);
  // W after clearing = diag(W1, I) * T
  PrecMatrix wmid(ring, d, d, N);
  if (cl.t.dense) {
    wmid.set_block(0, 0, ctx.mul(top.Wp, cl.t.dense->block(0, 0, d1, d)));
    wmid.set_block(d1, 0, cl.t.dense->block(d1, 0, d2, d));
  } else {
    wmid.set_block(0, 0, top.Wp);
    for (std::size_t i = d1; i < d; ++i) wmid(i, i) = PrecElem::one(ring, N);
    wmid = apply(ctx, cl.t, std::move(wmid));
  }

  LvOutput bot = lv_rec(ctx, bottom.block(0, d1, d2, d2), off + d1);
  out.Hp.set_block(0, 0, cl.x);
  out.Hp.set_block(d1, 0, bottom.block(0, 0, d2, d1));
  out.Hp.set_block(d1, d1, bot.Hp);
  const PrecMatrix wright = wmid.block(0, d1, d, d2);
  out.Wp.set_block(0, 0, wmid.block(0, 0, d, d1));
  out.Wp.set_block(0, d1, ctx.mul(wright, bot.Wp));
  out.Vp.set_block(0, d1, ctx.mul(wright, bot.Vp));
  out.Lp.set_block(d1, d1, bot.Lp);
  for (std::size_t j = 0; j < d; ++j) {
    out.col_val.push_back(out.Hp(j, j).valuation());
    if (out.Lp(j, j).is_big_oh()) out.degenerate = true;
  }
  return out;
}

void plan_rect(RectPlan& p, std::size_t threshold) {
  const std::size_t k = p.r1 - p.r0, m = p.c1 - p.c0;
  if (rect_is_base(k, m, threshold)) return;
  const std::size_t rm = p.r0 + k / 2, cm = p.c0 + m / 2;
  p.parts = {RectPlan{p.r0, rm, p.c0, cm, {}}, RectPlan{p.r0, rm, cm, p.c1, {}},
             RectPlan{rm, p.r1, p.c0, cm, {}}, RectPlan{rm, p.r1, cm, p.c1, {}}};
  for (auto& q : p.parts) plan_rect(q, threshold);
}

void plan_range(NiceOrderPlan& p, std::size_t threshold) {
  const std::size_t d = p.hi - p.lo;
  if (d <= std::max<std::size_t>(threshold, 1)) return;
  p.mid = p.lo + d / 2;
  p.children.resize(2);
  p.children[0].lo = p.lo;
  p.children[0].hi = p.mid;
  p.children[1].lo = p.mid;
  p.children[1].hi = p.hi;
  for (auto& c : p.children) plan_range(c, threshold);
  p.rect = RectPlan{p.lo, p.mid, p.mid, p.hi, {}};
  plan_rect(p.rect, threshold);
}

}  // namespace

PrecMatrix matmul(const PrecMatrix& a, const PrecMatrix& b, MulAlgo algo, std::size_t cutoff) {
  if (a.cols() != b.rows()) throw InvalidArgument("matrix product shape mismatch");
  if (algo == MulAlgo::classical) return classical(a, b);
  return strassen(a, b, cutoff, pad_precision(a, b));
}

ClearResult clear_block(const PrecMatrix& X, const PrecMatrix& Y, const FastOptions& opts) {
  if (!X.square() || X.rows() != Y.rows()) throw InvalidArgument("clear_block shape mismatch");
  std::int64_t N = std::min(X.min_abs_prec(), Y.min_abs_prec());
  Ctx ctx{N, opts, &X.ring()};
  ClearOut out = clear_rec(ctx, X.truncated(N), Y.truncated(N), 0, X.cols());
  return {std::move(out.x), densify(ctx, out.t)};
}

LvOutput recursive_lv(const PrecMatrix& M, const FastOptions& opts) {
  std::int64_t N = 0;
  PrecMatrix w = detail::prepare_input(M, N);
  Ctx ctx{N, opts, &M.ring()};
  return lv_rec(ctx, w, 0);
}

NiceOrderPlan build_nice_order(std::size_t d, std::size_t threshold) {
  NiceOrderPlan p;
  p.lo = 0;
  p.hi = d;
  plan_range(p, threshold);
  return p;
}

PairTrace flatten(const RectPlan& plan) {
  PairTrace out;
  if (plan.parts.empty()) {
    for (std::size_t c = plan.c0; c < plan.c1; ++c)
      for (std::size_t r = plan.r0; r < plan.r1; ++r) out.emplace_back(r, c);
    return out;
  }
  for (const auto& q : plan.parts) {
    PairTrace sub = flatten(q);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

PairTrace flatten(const NiceOrderPlan& plan) {
  PairTrace out;
  if (plan.children.empty()) {
    for (std::size_t j = plan.lo; j < plan.hi; ++j)
      for (std::size_t i = plan.lo; i < j; ++i) out.emplace_back(i, j);
    return out;
  }
  for (const PairTrace& part :
       {flatten(plan.children[0]), flatten(plan.rect), flatten(plan.children[1])})
    out.insert(out.end(), part.begin(), part.end());
  return out;
}

bool is_nice(const PairTrace& order, std::size_t d) {
  if (order.size() != d * (d - (d ? 1 : 0)) / 2) return false;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pos;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto [i, j] = order[k];
    if (!(i < j && j < d)) return false;
    if (!pos.emplace(order[k], k).second) return false;
  }
  for (const auto& [a, pa] : pos)
    for (const auto& [b, pb] : pos) {
      // (i,j) before (i',j) when i <= i'
      if (a.second == b.second && a.first <= b.first && pa > pb) return false;
      // (i,j) before (i',j') when j <= i'
      if (a.second <= b.first && pa > pb) return false;
    }
  return true;
}

}  // namespace dvrlu
