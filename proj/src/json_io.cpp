#include "dvrlu/json_io.hpp"

#include <fstream>
#include <sstream>

#include "dvrlu/error.hpp"

namespace dvrlu {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ParseError((where.empty() ? std::string("<root>") : where) + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing key \"") + key + "\"");
  return *it;
}

std::int64_t as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<std::int64_t>();
}

mpz_class as_mpz(const std::string& s, const std::string& where) {
  mpz_class z;
  if (s.empty() || z.set_str(s, 10) != 0) bad(where, "expected a decimal integer string");
  return z;
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& where, const char* key) { return where + "." + key; }

template <class T, class F>
Json grid_to_json(const Grid<T>& m, F&& enc) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(enc(m(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"d", m.rows}, {"rows", std::move(rows)}};
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.byte counts characters read, so the offending one sits at offset byte - 1
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte ? e.byte - 1 : 0) + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

Json to_json(const PrecElem& x) {
  if (x.is_big_oh()) return Json{{"bigoh", x.abs_prec()}};
  return Json{{"v", x.valuation().value}, {"digits", x.unit_packed().get_str(10)}, {"rel", x.rel_prec()}};
}

PrecElem elem_from_json(const Json& j, const Ring& ring, std::int64_t prec, const std::string& where) {
  if (j.is_number_integer()) return PrecElem::from_integer(ring, mpz_class(std::to_string(j.get<std::int64_t>())), prec);
  if (j.is_string()) return PrecElem::from_integer(ring, as_mpz(j.get<std::string>(), where), prec);
  if (!j.is_object()) bad(where, "expected an element");
  if (j.contains("bigoh")) return PrecElem::zero(ring, as_int(j["bigoh"], dot(where, "bigoh")));
  const std::int64_t v = as_int(field(j, "v", where), dot(where, "v"));
  const std::int64_t rel = as_int(field(j, "rel", where), dot(where, "rel"));
  const Json& dj = field(j, "digits", where);
  mpz_class u;
  if (dj.is_string())
    u = as_mpz(dj.get<std::string>(), dot(where, "digits"));
  else if (dj.is_number_unsigned() || dj.is_number_integer())
    u = mpz_class(std::to_string(dj.get<std::int64_t>()));
  else
    bad(dot(where, "digits"), "expected a decimal string");
  if (rel < 1) bad(dot(where, "rel"), "relative precision must be positive");
  if (u <= 0 || u % ring.p() == 0) bad(dot(where, "digits"), "unit part must not be divisible by p");
  try {
    return PrecElem::from_unit(ring, v, u, rel);
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

Json to_json(const PrecMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"d", m.rows()}, {"rows", std::move(rows)}};
}

PrecMatrix matrix_from_json(const Json& j, const Ring& ring, std::int64_t prec, const std::string& where) {
  const Json& rows = as_array(field(j, "rows", where), dot(where, "rows"));
  const std::size_t r = rows.size();
  if (j.contains("d") && std::size_t(as_int(j["d"], dot(where, "d"))) != r)
    bad(dot(where, "d"), "does not match the number of rows");
  if (r == 0) bad(dot(where, "rows"), "empty matrix");
  const std::size_t c = as_array(rows[0], at(dot(where, "rows"), 0)).size();
  PrecMatrix m(ring, r, c, prec);
  for (std::size_t i = 0; i < r; ++i) {
    const std::string wi = at(dot(where, "rows"), i);
    if (as_array(rows[i], wi).size() != c) bad(wi, "ragged rows");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = elem_from_json(rows[i][k], ring, prec, at(wi, k));
  }
  return m;
}

Json to_json(const DvrConfig& c) {
  return Json{{"backend", backend_name(c.backend())}, {"p", c.p()}, {"prec", c.default_prec()}};
}

DvrConfig config_from_json(const Json& j, const std::optional<DvrConfig>& fallback) {
  if (!j.is_object()) bad("", "expected an object");
  Backend b = fallback ? fallback->backend() : Backend::padic;
  std::int64_t p = fallback ? fallback->p() : 0, prec = fallback ? fallback->default_prec() : 0;
  try {
    if (j.contains("backend")) {
      if (!j["backend"].is_string()) bad("backend", "expected a string");
      b = parse_backend(j["backend"].get<std::string>());
    }
    if (j.contains("p")) p = as_int(j["p"], "p");
    if (j.contains("prec")) prec = as_int(j["prec"], "prec");
    if (p == 0) bad("p", "missing");
    if (prec == 0) bad("prec", "missing");
    if (p < 2 || p > 65521 || !is_prime(std::uint64_t(p))) bad("p", "must be a prime below 65536");
    return DvrConfig(b, std::uint32_t(p), prec);
  } catch (const InvalidArgument& e) {
    bad("", e.what());
  }
}

Json to_json(const LvOutput& out) {
  Json cv = Json::array();
  for (const auto& v : out.col_val) cv.push_back(v.exact ? Json(v.value) : Json{{"at_least", v.value}});
  return Json{{"L'", to_json(out.Lp)}, {"V'", to_json(out.Vp)}, {"H'", to_json(out.Hp)},
              {"W'", to_json(out.Wp)}, {"col_val", std::move(cv)}, {"degenerate", out.degenerate}};
}

Json to_json(const BlockType& t) { return Json(t.parts()); }

BlockType block_type_from_json(const Json& j, const std::string& where) {
  std::vector<std::size_t> parts;
  for (std::size_t i = 0; i < as_array(j, where).size(); ++i) {
    const std::int64_t x = as_int(j[i], at(where, i));
    if (x < 1) bad(at(where, i), "block sizes must be positive");
    parts.push_back(std::size_t(x));
  }
  if (parts.empty()) bad(where, "empty block type");
  return BlockType(parts);
}

Json to_json(const Poly& f) {
  Json a = Json::array();
  for (const auto& x : f.c) a.push_back(to_json(x));
  return a;
}

Poly poly_from_json(const Json& j, const Ring& ring, std::int64_t prec, const std::string& where) {
  Poly f(ring, {});
  for (std::size_t i = 0; i < as_array(j, where).size(); ++i)
    f.c.push_back(elem_from_json(j[i], ring, prec, at(where, i)));
  return f;
}

Json to_json(const Series& s) {
  Json a = Json::array();
  for (const auto& x : s.c) a.push_back(to_json(x));
  return a;
}

Series series_from_json(const Json& j, const Ring& ring, std::int64_t prec, const std::string& where) {
  Series s(ring, {});
  for (std::size_t i = 0; i < as_array(j, where).size(); ++i)
    s.c.push_back(elem_from_json(j[i], ring, prec, at(where, i)));
  if (s.c.empty()) bad(where, "series needs at least one coefficient");
  return s;
}

Json to_json(const PolyMatrix& m) {
  return grid_to_json(m, [](const Poly& f) { return to_json(f); });
}

Json to_json(const SeriesMatrix& m) {
  return grid_to_json(m, [](const Series& s) { return to_json(s); });
}

SeriesMatrix series_matrix_from_json(const Json& j, const Ring& ring, std::int64_t prec,
                                     const std::string& where) {
  const Json& rows = as_array(field(j, "rows", where), dot(where, "rows"));
  const std::size_t r = rows.size();
  if (r == 0) bad(dot(where, "rows"), "empty matrix");
  if (j.contains("d") && std::size_t(as_int(j["d"], dot(where, "d"))) != r)
    bad(dot(where, "d"), "does not match the number of rows");
  SeriesMatrix m(r, r, Series());
  for (std::size_t i = 0; i < r; ++i) {
    const std::string wi = at(dot(where, "rows"), i);
    if (as_array(rows[i], wi).size() != r) bad(wi, "local matrices must be square");
    for (std::size_t k = 0; k < r; ++k) m(i, k) = series_from_json(rows[i][k], ring, prec, at(wi, k));
  }
  return m;
}

SheafInstance sheaf_instance_from_json(const Json& j, const std::optional<DvrConfig>& fallback) {
  SheafInstance inst{config_from_json(j, fallback), {}};
  const Ring& ring = inst.config.ring();
  const std::int64_t prec = inst.config.default_prec();
  const Json& pts = as_array(field(j, "points", ""), "points");
  if (pts.empty()) bad("points", "need at least one point");
  for (std::size_t m = 0; m < pts.size(); ++m) {
    const std::string w = at("points", m);
    LocalDatum dt;
    dt.a = elem_from_json(field(pts[m], "a", w), ring, prec, dot(w, "a"));
    for (std::size_t k = 0; k < as_array(field(pts[m], "exponents", w), dot(w, "exponents")).size(); ++k)
      dt.exponents.push_back(as_int(pts[m]["exponents"][k], at(dot(w, "exponents"), k)));
    dt.M = series_matrix_from_json(field(pts[m], "matrix", w), ring, prec, dot(w, "matrix"));
    inst.data.push_back(std::move(dt));
  }
  return inst;
}

Json to_json(const SheafInstance& inst) {
  Json j = to_json(inst.config);
  Json pts = Json::array();
  for (const auto& dt : inst.data)
    pts.push_back(Json{{"a", to_json(dt.a)}, {"exponents", dt.exponents}, {"matrix", to_json(dt.M)}});
  j["points"] = std::move(pts);
  return j;
}

Json to_json(const VerificationReport& r) {
  return Json{{"all", r.all()},
              {"congruence", r.congruence},
              {"congruence_margin", r.congruence_margin},
              {"det_constant", r.det_constant},
              {"det_value", r.det_value.valid() ? to_json(r.det_value) : Json()},
              {"divisibility", r.divisibility},
              {"exponents", r.exponents},
              {"detail", r.detail}};
}

Json to_json(const GlobalBasis& b, const std::vector<VerificationReport>& reports) {
  Json D = Json::array();
  for (const auto& f : b.D) D.push_back(to_json(f));
  Json types = Json::array();
  for (const auto& t : b.block_types) types.push_back(to_json(t));
  Json ver = Json::array();
  for (const auto& r : reports) ver.push_back(to_json(r));
  return Json{{"M", to_json(b.M)},      {"D", std::move(D)},   {"omega", to_json(b.omega)},
              {"block_types", types},   {"v", b.v},            {"w", b.w},
              {"prec", b.prec},         {"tries", b.tries},    {"verification", std::move(ver)}};
}

SimulInstanceFile simul_instance_from_json(const Json& j, const std::optional<DvrConfig>& fallback) {
  SimulInstanceFile f{config_from_json(j, fallback), {}};
  const Ring& ring = f.config.ring();
  const std::int64_t prec = f.config.default_prec();
  if (j.contains("eps")) {
    if (!j["eps"].is_number()) bad("eps", "expected a number");
    f.instance.eps = j["eps"].get<double>();
  }
  if (j.contains("variant")) {
    const std::string v = j["variant"].is_string() ? j["variant"].get<std::string>() : "";
    if (v == "base")
      f.instance.variant = BoundVariant::base;
    else if (v == "pi")
      f.instance.variant = BoundVariant::pi;
    else
      bad("variant", "expected \"base\" or \"pi\"");
  }
  if (j.contains("v")) f.instance.v_override = as_int(j["v"], "v");
  const Json& fam = as_array(field(j, "family", ""), "family");
  if (fam.empty()) bad("family", "need at least one matrix");
  for (std::size_t m = 0; m < fam.size(); ++m) {
    const std::string w = at("family", m);
    PrecMatrix M = matrix_from_json(field(fam[m], "matrix", w), ring, prec, dot(w, "matrix"));
    if (!M.square()) bad(dot(w, "matrix"), "expected a square matrix");
    BlockType t = fam[m].contains("type") ? block_type_from_json(fam[m]["type"], dot(w, "type"))
                                          : BlockType::scalar(M.rows());
    if (t.dim() != M.rows()) bad(dot(w, "type"), "block sizes do not add up to the matrix size");
    f.instance.family.push_back({std::move(M), std::move(t)});
  }
  return f;
}

Json to_json(const SimulOutcome& o) {
  if (!o.ok())
    return Json{{"ok", false},
                {"reason", reason_name(o.failure->reason)},
                {"matrix", o.failure->matrix},
                {"block", o.failure->block},
                {"message", o.failure->message}};
  const SimulResult& r = *o.result;
  Json L = Json::array(), certs = Json::array();
  for (const auto& m : r.L) L.push_back(to_json(m));
  for (const auto& c : r.certificates)
    certs.push_back(Json{{"min_valuation", c.min_valuation.value}, {"min_precision", c.min_precision}});
  return Json{{"ok", true},
              {"v", r.v},
              {"prec", r.prec},
              {"tries", r.tries},
              {"omega", to_json(r.omega)},
              {"omega_inv", to_json(r.omega_inv)},
              {"L", std::move(L)},
              {"certificates", std::move(certs)},
              {"inverse_certificate",
               Json{{"min_valuation", r.inverse_certificate.min_valuation.value},
                    {"min_precision", r.inverse_certificate.min_precision}}}};
}

}  // namespace dvrlu
