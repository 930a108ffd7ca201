#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dvrlu/lu_stable.hpp"

namespace dvrlu {

enum class MulAlgo { classical, strassen };

MulAlgo parse_mul_algo(const std::string& s);

using PairTrace = std::vector<std::pair<std::size_t, std::size_t>>;

struct FastOptions {
  std::size_t threshold = 32;  // base-case size for both recursions
  MulAlgo mul = MulAlgo::classical;
  std::size_t strassen_cutoff = 16;
  PairTrace* trace = nullptr;  // receives the processed (i, j) pairs, 0-based
};

PrecMatrix matmul(const PrecMatrix& a, const PrecMatrix& b, MulAlgo algo = MulAlgo::classical,
                  std::size_t cutoff = 16);

struct ClearResult {
  PrecMatrix x;  // X after clearing
  PrecMatrix t;  // (X | Y) * t == (x | 0) mod pi^N
};

// X is k x k lower triangular mod pi^N, Y is k x m.
ClearResult clear_block(const PrecMatrix& X, const PrecMatrix& Y, const FastOptions& opts = {});

LvOutput recursive_lv(const PrecMatrix& M, const FastOptions& opts = {});

// Rectangle {r0..r1-1} x {c0..c1-1} of pairs (pivot row, target column).
struct RectPlan {
  std::size_t r0 = 0, r1 = 0, c0 = 0, c1 = 0;
  std::vector<RectPlan> parts;  // empty: column-major base case
};

struct NiceOrderPlan {
  std::size_t lo = 0, hi = 0, mid = 0;  // index range [lo, hi), split at mid
  std::vector<NiceOrderPlan> children;  // empty: colexicographic base case
  RectPlan rect;
};

// The order in which recursive_lv visits pairs for a d x d input.
NiceOrderPlan build_nice_order(std::size_t d, std::size_t threshold);
PairTrace flatten(const NiceOrderPlan& plan);
PairTrace flatten(const RectPlan& plan);
// Exhaustive check of both niceness conditions on pairs of {0..d-1}.
bool is_nice(const PairTrace& order, std::size_t d);

}  // namespace dvrlu
