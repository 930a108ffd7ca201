#pragma once

// Valuation-pivoted column elimination shared by the factorization routines.

#include <cstdint>
#include <utility>
#include <vector>

#include "dvrlu/matrix.hpp"

namespace dvrlu::detail {

// Checks that M is square with integral entries and returns it truncated to
// its smallest absolute precision N.
PrecMatrix prepare_input(const PrecMatrix& M, std::int64_t& N);

// Decides whether the entry must replace the pivot (strictly smaller
// valuation). Throws AmbiguousValuation when the answer is not forced.
bool must_swap(const PrecElem& entry, const PrecElem& pivot, std::size_t row, std::size_t col);

using Trace = std::vector<std::pair<std::size_t, std::size_t>>;

// Clears w(row, target) against the pivot w(row, pivot): swap columns if the
// target has smaller valuation, then subtract s * pivot column with s lifted
// to precision N. `t` (if given) receives the same column operations.
void eliminate(PrecMatrix& w, PrecMatrix* t, std::size_t row, std::size_t pivot,
               std::size_t target, std::int64_t N);

}  // namespace dvrlu::detail
