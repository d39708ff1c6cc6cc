#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ktg/types.hpp"

namespace ktg {

// Coefficient ring descriptor: Laurent polynomials over Z in the named
// variables. An empty variable list is plain Z.
struct Ring {
  std::vector<std::string> vars;
  bool operator==(const Ring& o) const { return vars == o.vars; }
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(std::vector<std::string> vars);

struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RingMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact multivariate Laurent polynomial with int64 coefficients.
// Exponent vectors are keyed in descending lexicographic order so that
// to_string emits highest powers first.
class Laurent {
 public:
  using Exps = std::vector<int32_t>;

  Laurent() : ring_(make_ring({})) {}
  explicit Laurent(RingPtr ring) : ring_(std::move(ring)) {}
  static Laurent constant(int64_t c, RingPtr ring);
  static Laurent monomial(int64_t c, Exps e, RingPtr ring);
  static Laurent variable(const std::string& name, RingPtr ring, int32_t exp = 1);

  const RingPtr& ring() const { return ring_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  size_t term_count() const { return terms_.size(); }

  Laurent operator+(const Laurent& o) const;
  Laurent operator-(const Laurent& o) const;
  Laurent operator*(const Laurent& o) const;
  Laurent operator-() const;
  bool operator==(const Laurent& o) const;
  bool operator!=(const Laurent& o) const { return !(*this == o); }

  // Exact division: returns false if o does not divide *this in the ring.
  bool try_divide(const Laurent& o, Laurent& quot) const;

  std::string to_string() const;
  static Laurent parse(const std::string& text, RingPtr ring);

 private:
  struct LexGreater {
    bool operator()(const Exps& a, const Exps& b) const { return a > b; }
  };
  void set(const Exps& e, int64_t c);
  void check_ring(const Laurent& o) const;

  RingPtr ring_;
  std::map<Exps, int64_t, LexGreater> terms_;  // no zero coefficients stored
};

}  // namespace ktg
