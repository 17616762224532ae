#pragma once

#include <random>

#include "arithbf/groupcoh.hpp"

namespace arithbf {

// Deterministic draws used by the seeded re-choice suites. All randomness in
// the library flows through a caller-seeded engine and these helpers.

inline uint64_t rnd_mod(std::mt19937_64& eng, const Int& n) {
  return n <= 1 ? 0 : eng() % n.get_ui();
}

inline std::vector<Int> random_group_elem(std::mt19937_64& eng, const FinAbGroup& g) {
  std::vector<Int> v(g.dim());
  for (int i = 0; i < g.dim(); ++i) v[i] = Int(long(rnd_mod(eng, g.mod[i])));
  return v;
}

inline Cochain constant_cochain(const GModule& m, std::vector<Int> v) {
  Cochain c = Cochain::zero(m, 0);
  c.vals[0] = m.grp.reduce(std::move(v));
  return c;
}

inline Cochain random_cochain(std::mt19937_64& eng, const GModule& m, int degree) {
  CochainSpace sp(m, degree);
  return sp.from_vec(random_group_elem(eng, FinAbGroup{sp.carrier}));
}

inline Cochain random_cocycle(std::mt19937_64& eng, const GModule& m, int degree) {
  CochainSpace sp(m, degree);
  GroupHom d{FinAbGroup{sp.carrier}, FinAbGroup{CochainSpace(m, degree + 1).carrier},
             differential_matrix(m, degree)};
  Subgroup z = kernel(d);
  return sp.from_vec(z.embed(random_group_elem(eng, z.group)));
}

inline Cochain random_coboundary(std::mt19937_64& eng, const GModule& m, int degree) {
  return differential(random_cochain(eng, m, degree - 1));
}

}  // namespace arithbf
