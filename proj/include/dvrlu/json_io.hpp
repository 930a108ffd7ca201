#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dvrlu/elem.hpp"
#include "dvrlu/lu_stable.hpp"
#include "dvrlu/matrix.hpp"
#include "dvrlu/poly.hpp"
#include "dvrlu/sheaf_basis.hpp"
#include "dvrlu/simul_plu.hpp"

namespace dvrlu {

using Json = nlohmann::ordered_json;

// Parse errors carry the byte offset; structural errors carry a JSON path.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

// Elements: {"v": int, "digits": "decimal", "rel": int} or {"bigoh": int}.
// "digits" is the unit written as a base-p integer, so for the series
// backend its base-p digits are the coefficients. A bare integer or
// decimal string denotes an integer known at the default precision.
Json to_json(const PrecElem& x);
PrecElem elem_from_json(const Json& j, const Ring& ring, std::int64_t prec,
                        const std::string& where = "");

// Matrices: {"d": rows, "rows": [[elem, ...], ...]}.
Json to_json(const PrecMatrix& m);
PrecMatrix matrix_from_json(const Json& j, const Ring& ring, std::int64_t prec,
                            const std::string& where = "");

// Config: {"backend": "padic"|"series", "p": int, "prec": int}. Missing
// keys fall back to the given defaults when present.
Json to_json(const DvrConfig& c);
DvrConfig config_from_json(const Json& j, const std::optional<DvrConfig>& fallback = {});

Json to_json(const LvOutput& out);
Json to_json(const BlockType& t);
BlockType block_type_from_json(const Json& j, const std::string& where = "");

// Polynomials and truncated series are coefficient arrays, lowest degree first.
Json to_json(const Poly& f);
Poly poly_from_json(const Json& j, const Ring& ring, std::int64_t prec, const std::string& where = "");
Json to_json(const Series& s);
Series series_from_json(const Json& j, const Ring& ring, std::int64_t prec,
                        const std::string& where = "");
Json to_json(const PolyMatrix& m);
Json to_json(const SeriesMatrix& m);
SeriesMatrix series_matrix_from_json(const Json& j, const Ring& ring, std::int64_t prec,
                                     const std::string& where = "");

// {"backend"?, "p", "prec", "points": [{"a", "exponents", "matrix"}]}
struct SheafInstance {
  DvrConfig config;
  std::vector<LocalDatum> data;
};
SheafInstance sheaf_instance_from_json(const Json& j, const std::optional<DvrConfig>& fallback = {});
Json to_json(const SheafInstance& inst);
Json to_json(const VerificationReport& r);
Json to_json(const GlobalBasis& b, const std::vector<VerificationReport>& reports);

// {"backend"?, "p", "prec", "eps"?, "variant"?, "v"?, "family": [{"matrix", "type"}]}
struct SimulInstanceFile {
  DvrConfig config;
  SimulInstance instance;
};
SimulInstanceFile simul_instance_from_json(const Json& j, const std::optional<DvrConfig>& fallback = {});
Json to_json(const SimulOutcome& o);

}  // namespace dvrlu
