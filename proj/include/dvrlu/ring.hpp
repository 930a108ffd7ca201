#pragma once

#include <gmpxx.h>

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

namespace dvrlu {

enum class Backend : std::uint8_t { padic, power_series };

std::string backend_name(Backend b);
Backend parse_backend(const std::string& s);

bool is_prime(std::uint64_t n);

// Arithmetic context shared by all elements over one (backend, p).
// Instances are interned and never destroyed, so raw pointers stay valid.
class Ring {
 public:
  static const Ring& get(Backend backend, std::uint32_t p);

  Backend backend() const { return backend_; }
  std::uint32_t p() const { return p_; }
  bool is_padic() const { return backend_ == Backend::padic; }

  // p^k for 0 <= k <= max_digits(); lock-free after first use.
  const mpz_class& pow(std::int64_t k) const;
  static constexpr std::int64_t max_digits() { return kChunk * kChunks - 1; }

  // Largest k with p^k <= 2^63, used by digit samplers.
  unsigned digits_per_word() const { return digits_per_word_; }
  std::uint64_t word_modulus() const { return word_modulus_; }

  std::uint32_t inv_mod_p(std::uint32_t a) const;

  Ring(const Ring&) = delete;
  Ring& operator=(const Ring&) = delete;
  ~Ring();

 private:
  Ring(Backend backend, std::uint32_t p);
  void build_chunk(std::size_t c) const;

  static constexpr std::int64_t kChunk = 256;
  static constexpr std::size_t kChunks = 64;

  Backend backend_;
  std::uint32_t p_;
  unsigned digits_per_word_;
  std::uint64_t word_modulus_;
  mutable std::array<std::atomic<mpz_class*>, kChunks> chunks_{};
  mutable std::mutex grow_;
};

class DvrConfig {
 public:
  DvrConfig(Backend backend, std::uint32_t p, std::int64_t default_prec);

  Backend backend() const { return ring_->backend(); }
  std::uint32_t p() const { return ring_->p(); }
  std::int64_t default_prec() const { return prec_; }
  const Ring& ring() const { return *ring_; }

  bool operator==(const DvrConfig& o) const { return ring_ == o.ring_ && prec_ == o.prec_; }

 private:
  const Ring* ring_;
  std::int64_t prec_;
};

}  // namespace dvrlu
