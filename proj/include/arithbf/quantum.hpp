#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "arithbf/bfcore.hpp"

namespace arithbf {

// Element of the ring of integers of the N-th cyclotomic field, written in
// the power basis 1, x, ..., x^{phi(N)-1} modulo the N-th cyclotomic
// polynomial. Equality of values is equality of coefficient vectors.
struct CycInt {
  Int n;                // root order N
  std::vector<Int> c;   // phi(N) coefficients, low degree first

  static CycInt zero(const Int& n);
  static CycInt one(const Int& n);
  // the class of an arbitrary integer polynomial (low degree first)
  static CycInt reduce(const Int& n, std::vector<Int> poly);

  CycInt add(const CycInt& o) const;
  CycInt sub(const CycInt& o) const;
  CycInt mul(const CycInt& o) const;
  CycInt neg() const;
  // complex conjugation: maps the class of x to the class of x^{N-1}
  CycInt conj() const;

  bool is_zero() const;
  bool operator==(const CycInt& o) const = default;

  // true when every non-constant coefficient vanishes
  bool is_rational_integer() const;
  Int rational_value() const;  // throws std::logic_error unless rational

  std::string str() const;
};

// monic N-th cyclotomic polynomial, coefficients low degree first
std::vector<Int> cyclotomic_polynomial(const Int& n);

// exp(2 pi i t) as the class of x^{tN}; the denominator of t must divide N
CycInt amplitude(const QmodZ& t, const Int& n);

// A section of the amplitude line over the boundary value space of a cut:
// one cyclotomic value per boundary profile (the same keys as a SectionXi).
struct AmplitudeSection {
  std::vector<int> s;
  SectionXi xi;  // trivialization the values are written in (may be empty)
  std::map<std::vector<Int>, CycInt> table;
};

// sum of a(key) * conj(b(key)); the sections must share domain and cut
CycInt inner_product(const AmplitudeSection& a, const AmplitudeSection& b);

// sum of amplitudes of the closed invariant over all admissible fields
CycInt partition_closed(const FixtureContext& ctx, uint64_t seed = 0);

// fiberwise sums of amplitudes of the trivialized cut invariant; an empty
// cut yields a single-entry section holding the closed sum
AmplitudeSection partition_relative(const FixtureContext& ctx, const std::vector<int>& s,
                                    const SectionXi& xi, uint64_t seed = 0);

// fiberwise sums of amplitudes of the trivialized comparison points over all
// unramified data mapping into each boundary profile; reversed orientation
// conjugates every amplitude
AmplitudeSection boundary_partition(const FixtureContext& ctx, const std::vector<int>& places,
                                    const SectionXi& xi, Orientation o = Orientation::standard,
                                    uint64_t seed = 0);

// contraction over the boundary values of the places the second section
// covers: out(alpha) = sum_gamma zt(alpha interleaved gamma) * c(gamma);
// the second section is expected to carry conjugated values already
AmplitudeSection glue(const FixtureContext& ctx, const AmplitudeSection& zt,
                      const AmplitudeSection& c);

struct TensorReport {
  bool pass = true;
  std::vector<std::string> witnesses;
};

// Verifies the per-place tensor factorization over a cut: trivialized values
// of combined points factor into per-place trivialized values, and inner
// products of random product sections factor into per-place inner products.
TensorReport tensor_factor_check(const FixtureContext& ctx, const std::vector<int>& s,
                                 uint64_t seed = 1, int count = 20);

}  // namespace arithbf
