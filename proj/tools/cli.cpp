#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "dvrlu/error.hpp"
#include "dvrlu/json_io.hpp"
#include "dvrlu/lu_fast.hpp"
#include "dvrlu/lu_stable.hpp"
#include "dvrlu/random.hpp"
#include "dvrlu/sheaf_basis.hpp"
#include "dvrlu/simul_plu.hpp"
#include "dvrlu/stats.hpp"

namespace dvrlu::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

struct Common {
  std::string backend = "padic";
  std::uint32_t p = 2;
  std::int64_t prec = 64;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string output;
  unsigned jobs = 1;
};

void add_config(CLI::App* app, Common& c) {
  app->add_option("--backend", c.backend, "padic or series")->check(CLI::IsMember({"padic", "series"}));
  app->add_option("--p", c.p, "residue characteristic (prime)");
  app->add_option("--prec", c.prec, "working precision in digits")->check(CLI::PositiveNumber);
}

void add_run(CLI::App* app, Common& c, bool formats) {
  app->add_option("--seed", c.seed, "random seed (default: $DVRLU_SEED, else 1)");
  app->add_option("--output,-o", c.output, "write results to this file");
  if (formats) app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

std::uint64_t seed_of(const Common& c) {
  if (c.seed) return *c.seed;
  if (const char* s = std::getenv("DVRLU_SEED")) {
    std::uint64_t v = 0;
    const std::string str(s);
    auto [ptr, ec] = std::from_chars(str.data(), str.data() + str.size(), v);
    if (ec != std::errc() || ptr != str.data() + str.size())
      throw InvalidArgument("DVRLU_SEED must be a non-negative integer");
    return v;
  }
  return 1;
}

DvrConfig config_of(const Common& c) {
  if (!is_prime(c.p) || c.p > 65521) throw InvalidArgument("--p must be a prime below 65536");
  return DvrConfig(parse_backend(c.backend), c.p, c.prec);
}

McOptions mc_of(const Common& c, std::size_t trials) {
  McOptions o;
  o.trials = trials;
  o.seed = seed_of(c);
  o.start_prec = c.prec;
  o.jobs = std::max(1u, c.jobs);
  return o;
}

BlockType parse_type(const std::string& s, std::size_t d) {
  if (s.empty()) return BlockType::scalar(d);
  std::vector<std::size_t> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || v == 0)
      throw InvalidArgument("--type expects comma-separated positive block sizes");
    parts.push_back(v);
  }
  BlockType t(parts);
  if (d && t.dim() != d) throw InvalidArgument("--type does not add up to --d");
  return t;
}

// A CSV table with a fixed header; every cell is preformatted.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string s;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
      s += "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return s;
  }
};

std::string num(double x) { return format_double(x); }
std::string num(std::int64_t x) { return std::to_string(x); }
std::string num(std::uint64_t x) { return std::to_string(x); }

Json summary_json(const Summary& s) {
  Json hist = Json::object();
  for (std::int64_t v = s.offset; v <= s.max_value(); ++v) hist[std::to_string(v)] = s.count(v);
  return Json{{"trials", s.trials}, {"mean", s.mean},       {"stddev", s.stddev},
              {"ci99", s.ci},       {"retries", s.retries}, {"histogram", std::move(hist)}};
}

class Emitter {
 public:
  Emitter(const Common& c, std::ostream& out) : c_(c), out_(out) {}
  void emit(const std::string& text) {
    if (c_.output.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(c_.output, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + c_.output + "'");
    f << text;
  }
  void emit(const Json& j) { emit(j.dump(2) + "\n"); }

 private:
  const Common& c_;
  std::ostream& out_;
};

// ---- stats ----

int stats_vl(const Common& c, std::size_t d, std::size_t trials, std::ostream& out) {
  const DvrConfig cfg = config_of(c);
  const std::uint32_t q = cfg.p();
  const Summary s = monte_carlo_vl(cfg.ring(), d, mc_of(c, trials));
  const double E = expected_E(q, d), lo = E - 1.0 / double(q - 1);
  Emitter em(c, out);
  if (c.format == "csv") {
    Table t{{"v", "count", "freq", "cdf", "theory_bound", "sandwich_lo", "sandwich_hi", "mean", "ci99"}, {}};
    for (std::int64_t v = std::min<std::int64_t>(0, s.offset); v <= s.max_value(); ++v)
      t.rows.push_back({num(v), num(std::uint64_t(s.count(v))), num(s.freq(v)), num(s.cdf(v)),
                        num(vl_cdf_lower_bound(q, d, double(v + 1))), num(lo), num(E), num(s.mean),
                        num(s.ci)});
    em.emit(t.csv());
  } else {
    Json cdf = Json::array();
    for (std::int64_t v = std::min<std::int64_t>(0, s.offset); v <= s.max_value(); ++v)
      cdf.push_back(Json{{"v", v}, {"cdf", s.cdf(v)}, {"theory_bound", vl_cdf_lower_bound(q, d, double(v + 1))}});
    em.emit(Json{{"quantity", "V_L"}, {"config", to_json(cfg)}, {"d", d}, {"seed", seed_of(c)},
                 {"summary", summary_json(s)}, {"expected", E}, {"sandwich_lo", lo}, {"sandwich_hi", E},
                 {"in_sandwich", s.mean > lo - s.ci && s.mean <= E + s.ci}, {"cdf", std::move(cdf)}});
  }
  return kOk;
}

int stats_eqd(const Common& c, std::size_t d, std::ostream& out) {
  const std::uint32_t q = c.p;
  if (!is_prime(q)) throw InvalidArgument("--p must be prime");
  const double a = expected_E_series(q, d), b = expected_E_alternating(q, d);
  const double lg = std::log(double(d)) / std::log(double(q));
  Emitter em(c, out);
  if (c.format == "csv") {
    Table t{{"q", "d", "series", "alternating", "abs_diff", "log_q_d", "integral_part_bound"}, {}};
    t.rows.push_back({num(std::int64_t(q)), num(std::int64_t(d)), num(a), num(b), num(std::fabs(a - b)),
                      num(lg), num(integral_part_bound(q, d))});
    em.emit(t.csv());
  } else {
    em.emit(Json{{"q", q}, {"d", d}, {"series", a}, {"alternating", b}, {"abs_diff", std::fabs(a - b)},
                 {"log_q_d", lg}, {"integral_part_bound", integral_part_bound(q, d)}});
  }
  return kOk;
}

int stats_detval(const Common& c, std::size_t d, std::size_t trials, std::ostream& out) {
  const DvrConfig cfg = config_of(c);
  const std::uint32_t q = cfg.p();
  const Summary s = monte_carlo_detval(cfg.ring(), d, mc_of(c, trials));
  const double mean = abdel_ghaffar_mean(q, d);
  Emitter em(c, out);
  if (c.format == "csv") {
    Table t{{"v", "count", "freq", "cdf", "theory_cdf", "theory_mean", "mean", "ci99"}, {}};
    for (std::int64_t v = 0; v <= s.max_value(); ++v)
      t.rows.push_back({num(v), num(std::uint64_t(s.count(v))), num(s.freq(v)), num(s.cdf(v)),
                        num(abdel_ghaffar_cdf(q, d, v)), num(mean), num(s.mean), num(s.ci)});
    em.emit(t.csv());
  } else {
    Json cdf = Json::array();
    double worst = 0;
    for (std::int64_t v = 0; v <= s.max_value(); ++v) {
      worst = std::max(worst, std::fabs(s.cdf(v) - abdel_ghaffar_cdf(q, d, v)));
      cdf.push_back(Json{{"v", v}, {"cdf", s.cdf(v)}, {"theory_cdf", abdel_ghaffar_cdf(q, d, v)}});
    }
    em.emit(Json{{"quantity", "v(det)"}, {"config", to_json(cfg)}, {"d", d}, {"seed", seed_of(c)},
                 {"summary", summary_json(s)}, {"theory_mean", mean},
                 {"mean_within_ci", std::fabs(s.mean - mean) <= s.ci}, {"max_cdf_gap", worst},
                 {"cdf", std::move(cdf)}});
  }
  return kOk;
}

int stats_vds(const Common& c, const std::string& type_s, std::size_t trials, std::ostream& out) {
  const DvrConfig cfg = config_of(c);
  const std::uint32_t q = cfg.p();
  const BlockType type = parse_type(type_s, 0);
  const auto sums = monte_carlo_vds(cfg.ring(), type, mc_of(c, trials));
  Emitter em(c, out);
  if (c.format == "csv") {
    Table t{{"block", "size", "v", "count", "freq", "cdf", "theory_cdf"}, {}};
    for (std::size_t b = 0; b < sums.size(); ++b)
      for (std::int64_t v = 0; v <= sums[b].max_value(); ++v)
        t.rows.push_back({num(std::int64_t(b + 1)), num(std::int64_t(type.parts()[b])), num(v),
                          num(std::uint64_t(sums[b].count(v))), num(sums[b].freq(v)), num(sums[b].cdf(v)),
                          num(vds_cdf(q, type.parts()[b], v))});
    em.emit(t.csv());
  } else {
    Json blocks = Json::array();
    for (std::size_t b = 0; b < sums.size(); ++b) {
      Json cdf = Json::array();
      for (std::int64_t v = 0; v <= sums[b].max_value(); ++v)
        cdf.push_back(Json{{"v", v}, {"cdf", sums[b].cdf(v)}, {"theory_cdf", vds_cdf(q, type.parts()[b], v)}});
      blocks.push_back(Json{{"block", b + 1}, {"size", type.parts()[b]}, {"summary", summary_json(sums[b])},
                            {"cdf", std::move(cdf)}});
    }
    em.emit(Json{{"quantity", "V_ds"}, {"config", to_json(cfg)}, {"type", to_json(type)},
                 {"seed", seed_of(c)}, {"blocks", std::move(blocks)}});
  }
  return kOk;
}

int stats_tail(const Common& c, std::size_t d, std::size_t trials, int ell_max, std::ostream& out) {
  const DvrConfig cfg = config_of(c);
  const std::uint32_t q = cfg.p();
  const Summary s = monte_carlo_vl(cfg.ring(), d, mc_of(c, trials));
  const double ci = kZ99 * 0.5 / std::sqrt(double(std::max<std::size_t>(trials, 1)));
  Emitter em(c, out);
  Table t{{"ell", "freq_statement", "freq_proof", "bound", "ci99"}, {}};
  Json rows = Json::array();
  for (int ell = 1; ell <= ell_max; ++ell) {
    const double fs = tail_frequency(s, q, d, ell, TailCentering::statement);
    const double fp = tail_frequency(s, q, d, ell, TailCentering::proof);
    const double b = vl_tail_bound(q, d, ell);
    t.rows.push_back({num(std::int64_t(ell)), num(fs), num(fp), num(b), num(ci)});
    rows.push_back(Json{{"ell", ell}, {"freq_statement", fs}, {"freq_proof", fp}, {"bound", b}, {"ci99", ci}});
  }
  if (c.format == "csv")
    em.emit(t.csv());
  else
    em.emit(Json{{"quantity", "V_L tail"}, {"config", to_json(cfg)}, {"d", d}, {"seed", seed_of(c)},
                 {"trials", trials}, {"rows", std::move(rows)}});
  return kOk;
}

// ---- lu ----

struct LuFlags {
  std::string algo = "stable";
  std::string input;
  std::string type;
  std::string mul = "classical";
  std::size_t threshold = 32;
  std::size_t strassen_cutoff = 16;
  std::size_t d = 25;
  std::size_t trials = 200;
};

FastOptions fast_of(const LuFlags& f) {
  FastOptions o;
  o.threshold = std::max<std::size_t>(1, f.threshold);
  o.mul = parse_mul_algo(f.mul);
  o.strassen_cutoff = std::max<std::size_t>(1, f.strassen_cutoff);
  return o;
}

// L from the chosen algorithm; lv-style algorithms also fill lv.
PrecMatrix factor(const PrecMatrix& M, const LuFlags& f, std::optional<LvOutput>* lv) {
  if (f.algo == "naive") return naive_gauss_l(M);
  if (f.algo == "stable") return stable_l(M);
  if (f.algo == "block") return block_l(M, parse_type(f.type, M.rows()));
  LvOutput out = f.algo == "lv" ? lv_decomposition(M) : recursive_lv(M, fast_of(f));
  PrecMatrix L = lv_to_l(out);
  if (lv) *lv = std::move(out);
  return L;
}

int lu_run(const Common& c, const LuFlags& f, std::ostream& out) {
  const Json j = read_json_file(f.input);
  const bool wrapped = j.is_object() && j.contains("matrix");
  const DvrConfig cfg = wrapped ? config_from_json(j, config_of(c)) : config_of(c);
  const PrecMatrix M = matrix_from_json(wrapped ? j["matrix"] : j, cfg.ring(), cfg.default_prec(),
                                        wrapped ? "matrix" : "");
  if (!M.square()) throw InvalidArgument("expected a square matrix");
  std::optional<LvOutput> lv;
  const PrecMatrix L = factor(M, f, &lv);
  const std::int64_t N = M.min_abs_prec();
  Json res{{"algo", f.algo}, {"config", to_json(cfg)}, {"d", M.rows()}, {"input_prec", N}, {"L", to_json(L)}};
  if (lv) res["lv"] = to_json(*lv);
  const VlValue vl = vl_of(L);
  res["V_L"] = vl.exact() ? Json(vl.lo) : Json{{"lo", vl.lo}, {"hi", vl.hi}};
  res["precision_loss"] = precision_loss(L, N);
  Emitter(c, out).emit(res);
  return kOk;
}

int lu_bench(const Common& c, const LuFlags& f, std::ostream& out) {
  const DvrConfig cfg = config_of(c);
  const McOptions mo = mc_of(c, f.trials);
  const TrialValues tv = run_trials(cfg.ring(), f.d, mo, [&](const PrecMatrix& m) {
    return std::vector<std::int64_t>{precision_loss(factor(m, f, nullptr), m.min_abs_prec())};
  });
  const Summary s = summarize(column(tv, 0), tv.retries);
  Emitter em(c, out);
  if (c.format == "csv") {
    Table t{{"algo", "p", "d", "trials", "mean_loss", "stddev", "ci99", "retries"}, {}};
    t.rows.push_back({f.algo, num(std::int64_t(cfg.p())), num(std::int64_t(f.d)), num(std::int64_t(f.trials)),
                      num(s.mean), num(s.stddev), num(s.ci), num(std::uint64_t(s.retries))});
    em.emit(t.csv());
  } else {
    em.emit(Json{{"algo", f.algo}, {"config", to_json(cfg)}, {"d", f.d}, {"seed", mo.seed},
                 {"mean_loss", s.mean}, {"summary", summary_json(s)}});
  }
  return kOk;
}

// ---- simul ----

struct SimulFlags {
  std::string instance;
  double eps = 0.5;
  std::string variant = "base";
  int max_tries = 64;
  std::size_t d = 4, n = 2, trials = 10000;
  std::string type;
};

BoundVariant variant_of(const std::string& s) {
  if (s == "base") return BoundVariant::base;
  if (s == "pi") return BoundVariant::pi;
  throw InvalidArgument("--variant must be base or pi");
}

int simul_run(const Common& c, const SimulFlags& f, std::ostream& out, bool eps_set, bool variant_set) {
  SimulInstanceFile file = simul_instance_from_json(read_json_file(f.instance), config_of(c));
  if (eps_set) file.instance.eps = f.eps;
  if (variant_set) file.instance.variant = variant_of(f.variant);
  Rng rng = trial_rng(seed_of(c), 0);
  SimulOutcome o;
  o.result = retry_until_success(file.instance, rng, file.config.default_prec(), f.max_tries);
  Json j = to_json(o);
  j["config"] = to_json(file.config);
  j["eps"] = file.instance.eps;
  Emitter(c, out).emit(j);
  return kOk;
}

int simul_bench(const Common& c, const SimulFlags& f, std::ostream& out) {
  const DvrConfig cfg = config_of(c);
  const BlockType type = parse_type(f.type, f.d);
  const std::uint64_t seed = seed_of(c);
  SimulInstance inst;
  inst.eps = f.eps;
  inst.variant = variant_of(f.variant);
  std::size_t ok = 0;
  std::map<std::string, std::size_t> reasons;
  std::int64_t worst_margin = std::numeric_limits<std::int64_t>::max();
  for (std::size_t t = 0; t < f.trials; ++t) {
    Rng rng = trial_rng(seed, t);
    inst.family.clear();
    for (std::size_t m = 0; m < f.n; ++m)
      inst.family.push_back({random_matrix(rng, cfg.ring(), f.d, cfg.default_prec()), type});
    const SimulOutcome o = simultaneous_block_lu(inst, rng, cfg.default_prec());
    if (o.ok()) {
      ++ok;
      for (const auto& cert : o.result->certificates)
        worst_margin = std::min(worst_margin, cert.min_precision - (cfg.default_prec() - 2 * inst.v()));
    } else {
      ++reasons[reason_name(o.failure->reason)];
    }
  }
  const double rate = f.trials ? double(ok) / double(f.trials) : 0;
  const double ci = kZ99 * std::sqrt(rate * (1 - rate) / double(std::max<std::size_t>(f.trials, 1)));
  Emitter em(c, out);
  if (c.format == "csv") {
    Table t{{"p", "d", "n", "eps", "v", "trials", "success_rate", "ci99", "target"}, {}};
    t.rows.push_back({num(std::int64_t(cfg.p())), num(std::int64_t(f.d)), num(std::int64_t(f.n)), num(f.eps),
                      num(inst.family.empty() ? std::int64_t(0) : inst.v()), num(std::int64_t(f.trials)),
                      num(rate), num(ci), num(1 - f.eps)});
    em.emit(t.csv());
  } else {
    Json rj = Json::object();
    for (const auto& [k, v] : reasons) rj[k] = v;
    em.emit(Json{{"config", to_json(cfg)}, {"d", f.d}, {"n", f.n}, {"type", to_json(type)}, {"eps", f.eps},
                 {"variant", f.variant}, {"v", inst.family.empty() ? 0 : inst.v()}, {"seed", seed},
                 {"trials", f.trials}, {"success_rate", rate}, {"ci99", ci}, {"target", 1 - f.eps},
                 {"failures", std::move(rj)},
                 {"worst_precision_margin", ok ? Json(worst_margin) : Json()}});
  }
  return kOk;
}

// ---- sheaf ----

int sheaf_solve(const Common& c, const std::string& input, double eps, int max_tries, std::ostream& out) {
  const SheafInstance inst = sheaf_instance_from_json(read_json_file(input), config_of(c));
  Rng rng = trial_rng(seed_of(c), 0);
  SheafOptions opts;
  opts.eps = eps;
  opts.max_tries = max_tries;
  const GlobalBasis b = solve_sheaf(inst.data, rng, opts);
  std::vector<VerificationReport> reps;
  bool all = true;
  for (const auto& dt : inst.data) {
    reps.push_back(verify_local_equivalence(b, dt));
    all = all && reps.back().all();
  }
  Json j = to_json(b, reps);
  j["all_pass"] = all;
  Emitter(c, out).emit(j);
  return all ? kOk : kPrecision;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Precision-tracked linear algebra over discrete valuation rings"};
  app.name("dvrlu");
  app.require_subcommand(1);
  Common c;
  app.add_option("--jobs", c.jobs, "worker threads for Monte-Carlo trials")->check(CLI::PositiveNumber);

  // stats
  auto* stats = app.add_subcommand("stats", "valuation statistics of random matrices");
  stats->require_subcommand(1);
  std::size_t d = 16, trials = 100000;
  int ell_max = 6;
  std::string type_s;
  auto* s_vl = stats->add_subcommand("vl", "law of V_L against its bounds");
  auto* s_eqd = stats->add_subcommand("eqd", "E(q,d) by both formulas");
  auto* s_det = stats->add_subcommand("detval", "valuation of the determinant");
  auto* s_vds = stats->add_subcommand("vds", "block valuations V_{d,s}");
  auto* s_tail = stats->add_subcommand("tail", "tail frequencies of V_L");
  for (auto* s : {s_vl, s_det, s_tail}) {
    add_config(s, c);
    add_run(s, c, true);
    s->add_option("--d", d, "matrix size")->check(CLI::PositiveNumber);
    s->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber);
    s->add_option("--jobs", c.jobs)->check(CLI::PositiveNumber);
  }
  s_tail->add_option("--ell-max", ell_max, "largest ell")->check(CLI::PositiveNumber);
  add_config(s_vds, c);
  add_run(s_vds, c, true);
  s_vds->add_option("--type", type_s, "block sizes, e.g. 2,2,1")->required();
  s_vds->add_option("--trials", trials)->check(CLI::PositiveNumber);
  s_vds->add_option("--jobs", c.jobs)->check(CLI::PositiveNumber);
  s_eqd->add_option("--p", c.p, "q (prime)");
  s_eqd->add_option("--d", d)->check(CLI::PositiveNumber);
  add_run(s_eqd, c, true);

  // lu
  auto* lu = app.add_subcommand("lu", "LU factorizations");
  lu->require_subcommand(1);
  LuFlags lf;
  auto* lu_r = lu->add_subcommand("run", "factor one matrix");
  auto* lu_b = lu->add_subcommand("bench", "mean precision loss on random matrices");
  for (auto* s : {lu_r, lu_b}) {
    add_config(s, c);
    add_run(s, c, s == lu_b);
    s->add_option("--algo", lf.algo)->check(CLI::IsMember({"naive", "stable", "lv", "recursive", "block"}));
    s->add_option("--type", lf.type, "block sizes for --algo block");
    s->add_option("--mul", lf.mul)->check(CLI::IsMember({"classical", "strassen"}));
    s->add_option("--threshold", lf.threshold)->check(CLI::PositiveNumber);
    s->add_option("--strassen-cutoff", lf.strassen_cutoff)->check(CLI::PositiveNumber);
  }
  lu_r->add_option("--input", lf.input, "matrix JSON")->required();
  lu_b->add_option("--d", lf.d)->check(CLI::PositiveNumber);
  lu_b->add_option("--trials", lf.trials)->check(CLI::PositiveNumber);
  lu_b->add_option("--jobs", c.jobs)->check(CLI::PositiveNumber);

  // simul
  auto* simul = app.add_subcommand("simul", "simultaneous block LU with a random preconditioner");
  simul->require_subcommand(1);
  SimulFlags sf;
  auto* si_r = simul->add_subcommand("run", "solve one instance");
  auto* si_b = simul->add_subcommand("bench", "single-draw success rate on random families");
  CLI::Option* eps_opt = nullptr;
  CLI::Option* var_opt = nullptr;
  for (auto* s : {si_r, si_b}) {
    add_config(s, c);
    add_run(s, c, s == si_b);
    auto* e = s->add_option("--eps", sf.eps)->check(CLI::Range(1e-9, 1 - 1e-9));
    auto* v = s->add_option("--variant", sf.variant)->check(CLI::IsMember({"base", "pi"}));
    if (s == si_r) eps_opt = e, var_opt = v;
  }
  si_r->add_option("--instance,--input", sf.instance, "instance JSON")->required();
  si_r->add_option("--max-tries", sf.max_tries)->check(CLI::PositiveNumber);
  si_b->add_option("--d", sf.d)->check(CLI::PositiveNumber);
  si_b->add_option("--n", sf.n)->check(CLI::PositiveNumber);
  si_b->add_option("--trials", sf.trials)->check(CLI::PositiveNumber);
  si_b->add_option("--type", sf.type);

  // sheaf
  auto* sheaf = app.add_subcommand("sheaf", "global bases from local data on the affine line");
  sheaf->require_subcommand(1);
  auto* sh_s = sheaf->add_subcommand("solve", "solve one instance and verify it");
  std::string sh_input;
  double sh_eps = 0.5;
  int sh_tries = 64;
  add_config(sh_s, c);
  add_run(sh_s, c, false);
  sh_s->add_option("--input", sh_input, "instance JSON")->required();
  sh_s->add_option("--eps", sh_eps)->check(CLI::Range(1e-9, 1 - 1e-9));
  sh_s->add_option("--max-tries", sh_tries)->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*s_vl) return stats_vl(c, d, trials, out);
    if (*s_eqd) return stats_eqd(c, d, out);
    if (*s_det) return stats_detval(c, d, trials, out);
    if (*s_vds) return stats_vds(c, type_s, trials, out);
    if (*s_tail) return stats_tail(c, d, trials, ell_max, out);
    if (*lu_r) return lu_run(c, lf, out);
    if (*lu_b) return lu_bench(c, lf, out);
    if (*si_r) return simul_run(c, sf, out, eps_opt->count() > 0, var_opt->count() > 0);
    if (*si_b) return simul_bench(c, sf, out);
    if (*sh_s) return sheaf_solve(c, sh_input, sh_eps, sh_tries, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotSorted& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CoincidentPoints& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PrecisionError& e) {
    err << "precision failure: " << e.what() << "\n";
    return kPrecision;
  } catch (const ExhaustedRetries& e) {
    err << "retries exhausted: " << e.what() << "\n";
    return kExhausted;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  err << "error: no command given\n";
  return kUsage;
}

}  // namespace dvrlu::cli
