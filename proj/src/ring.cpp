#include "dvrlu/ring.hpp"

#include <map>
#include <utility>

#include "dvrlu/error.hpp"

namespace dvrlu {

std::string backend_name(Backend b) { return b == Backend::padic ? "padic" : "series"; }

Backend parse_backend(const std::string& s) {
  if (s == "padic") return Backend::padic;
  if (s == "series" || s == "power_series") return Backend::power_series;
  throw InvalidArgument("unknown backend '" + s + "'");
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

const Ring& Ring::get(Backend backend, std::uint32_t p) {
  static std::mutex mu;
  static std::map<std::pair<int, std::uint32_t>, std::unique_ptr<Ring>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(static_cast<int>(backend), p);
  auto it = registry.find(key);
  if (it != registry.end()) return *it->second;
  if (!is_prime(p)) throw InvalidArgument("p = " + std::to_string(p) + " is not prime");
  std::unique_ptr<Ring> r(new Ring(backend, p));
  const Ring& ref = *r;
  registry.emplace(key, std::move(r));
  return ref;
}

Ring::Ring(Backend backend, std::uint32_t p) : backend_(backend), p_(p) {
  unsigned k = 0;
  unsigned __int128 m = 1;
  while (m * p <= (static_cast<unsigned __int128>(1) << 63)) {
    m *= p;
    ++k;
  }
  digits_per_word_ = k;
  word_modulus_ = static_cast<std::uint64_t>(m);
  for (auto& c : chunks_) c.store(nullptr, std::memory_order_relaxed);
}

Ring::~Ring() {
  for (auto& c : chunks_) delete[] c.load();
}

void Ring::build_chunk(std::size_t c) const {
  std::lock_guard<std::mutex> lock(grow_);
  if (chunks_[c].load(std::memory_order_acquire)) return;
  auto* block = new mpz_class[kChunk];
  std::int64_t base = static_cast<std::int64_t>(c) * kChunk;
  mpz_ui_pow_ui(block[0].get_mpz_t(), p_, static_cast<unsigned long>(base));
  for (std::int64_t i = 1; i < kChunk; ++i) block[i] = block[i - 1] * p_;
  chunks_[c].store(block, std::memory_order_release);
}

const mpz_class& Ring::pow(std::int64_t k) const {
  if (k < 0 || k > max_digits())
    throw InvalidArgument("precision " + std::to_string(k) + " outside supported range");
  std::size_t c = static_cast<std::size_t>(k / kChunk);
  mpz_class* block = chunks_[c].load(std::memory_order_acquire);
  if (!block) {
    build_chunk(c);
    block = chunks_[c].load(std::memory_order_acquire);
  }
  return block[k % kChunk];
}

std::uint32_t Ring::inv_mod_p(std::uint32_t a) const {
  std::int64_t t = 0, nt = 1, r = p_, nr = a % p_;
  while (nr != 0) {
    std::int64_t q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw DivisionByUnknownZero();
  if (t < 0) t += p_;
  return static_cast<std::uint32_t>(t);
}

DvrConfig::DvrConfig(Backend backend, std::uint32_t p, std::int64_t default_prec)
    : ring_(&Ring::get(backend, p)), prec_(default_prec) {
  if (default_prec < 1) throw InvalidArgument("default precision must be >= 1");
}

}  // namespace dvrlu
