#pragma once
// Finite polyhomogeneous expansions and exact solution of the two transport ODEs
//   rho d_rho u = f                       (one face)
//   (rho1 d_rho1 - rho2 d_rho2) u = f     (two faces, u = 0 at rho1 = 1)

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "scri/compactification.hpp"
#include "scri/index_sets.hpp"

namespace scri {

using Exact = boost::multiprecision::cpp_rational;

inline Exact to_exact(const Rat& p) { return Exact(p.numerator()) / Exact(p.denominator()); }

struct UnsupportedTerm : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class T>
struct PhgTerm {
  Rat p;
  int k = 0;
  T c{};
};

// sum_j c_j rho^p_j log^k_j rho + O(rho^remainder_order)
template <class T>
struct PolyhomExpansion {
  std::vector<PhgTerm<T>> terms;
  Rat remainder_order = kNoTruncation;

  void add(const Rat& p, int k, const T& c) { terms.push_back({p, k, c}); }

  // sort by (p, k), merge equal pairs, drop exact zeros
  void normalize() {
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
      return a.p < b.p || (a.p == b.p && a.k < b.k);
    });
    std::vector<PhgTerm<T>> out;
    for (auto& t : terms) {
      if (!out.empty() && out.back().p == t.p && out.back().k == t.k) out.back().c += t.c;
      else out.push_back(t);
    }
    std::erase_if(out, [](const auto& t) { return t.c == T(0); });
    terms = std::move(out);
  }

  // smallest index set containing every term
  IndexSet index_set() const {
    IndexSet e({}, remainder_order);
    for (auto& t : terms) e.gens.emplace_back(t.p, t.k);
    e.normalize();
    return e;
  }

  double operator()(double rho) const {
    double lr = std::log(rho), s = 0.0;
    for (auto& t : terms) {
      double c = static_cast<double>(t.c);
      s += c * std::pow(rho, boost::rational_cast<double>(t.p)) * std::pow(lr, t.k);
    }
    return s;
  }

  bool operator==(const PolyhomExpansion&) const = default;
};

template <class T>
inline bool operator==(const PhgTerm<T>& a, const PhgTerm<T>& b) {
  return a.p == b.p && a.k == b.k && a.c == b.c;
}

// rho d_rho applied term by term
inline PolyhomExpansion<Exact> rho_d_rho(const PolyhomExpansion<Exact>& u) {
  PolyhomExpansion<Exact> f;
  f.remainder_order = u.remainder_order;
  for (auto& t : u.terms) {
    if (t.p != Rat(0)) f.add(t.p, t.k, to_exact(t.p) * t.c);
    if (t.k > 0) f.add(t.p, t.k - 1, Exact(t.k) * t.c);
  }
  f.normalize();
  return f;
}

// terms rho1^p log^k rho1 * rho2^q log^l rho2
struct PhgTerm2 {
  Rat p;
  int k = 0;
  Rat q;
  int l = 0;
  Exact c;
  bool operator==(const PhgTerm2&) const = default;
};

struct PolyhomExpansion2 {
  std::vector<PhgTerm2> terms;
  Rat remainder1 = kNoTruncation, remainder2 = kNoTruncation;

  void add(const Rat& p, int k, const Rat& q, int l, const Exact& c) { terms.push_back({p, k, q, l, c}); }

  void normalize() {
    auto key = [](const PhgTerm2& t) { return std::make_tuple(t.p, t.k, t.q, t.l); };
    std::sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    std::vector<PhgTerm2> out;
    for (auto& t : terms) {
      if (!out.empty() && key(out.back()) == key(t)) out.back().c += t.c;
      else out.push_back(t);
    }
    std::erase_if(out, [](const auto& t) { return t.c == 0; });
    terms = std::move(out);
  }

  IndexSet index_set_face1() const {
    IndexSet e({}, remainder1);
    for (auto& t : terms) e.gens.emplace_back(t.p, t.k);
    e.normalize();
    return e;
  }
  IndexSet index_set_face2() const {
    IndexSet e({}, remainder2);
    for (auto& t : terms) e.gens.emplace_back(t.q, t.l);
    e.normalize();
    return e;
  }

  double operator()(double r1, double r2) const {
    double x = std::log(r1), y = std::log(r2), s = 0.0;
    for (auto& t : terms)
      s += static_cast<double>(t.c) * std::pow(r1, boost::rational_cast<double>(t.p)) * std::pow(x, t.k) *
           std::pow(r2, boost::rational_cast<double>(t.q)) * std::pow(y, t.l);
    return s;
  }
  bool operator==(const PolyhomExpansion2&) const = default;
};

// (rho1 d_rho1 - rho2 d_rho2) term by term
inline PolyhomExpansion2 two_face_operator(const PolyhomExpansion2& u) {
  PolyhomExpansion2 f;
  f.remainder1 = u.remainder1;
  f.remainder2 = u.remainder2;
  for (auto& t : u.terms) {
    if (t.p != t.q) f.add(t.p, t.k, t.q, t.l, to_exact(t.p - t.q) * t.c);
    if (t.k > 0) f.add(t.p, t.k - 1, t.q, t.l, Exact(t.k) * t.c);
    if (t.l > 0) f.add(t.p, t.k, t.q, t.l - 1, Exact(-t.l) * t.c);
  }
  f.normalize();
  return f;
}

// ---------------------------------------------------------------------------

enum class TransportKind { rho_D_rho, two_face };

template <class R>
struct TransportResult {
  R u;
  IndexSet index_set;             // for two_face: the rho1 face
  IndexSet index_set_face2{};
};

namespace detail {

inline Exact binom(int n, int k) {
  Exact r = 1;
  for (int i = 1; i <= k; ++i) r = r * Exact(n - k + i) / Exact(i);
  return r;
}

inline void check_power(const Rat& p) {
  if (p.denominator() > kDenominatorLimit) throw UnsupportedTerm("transport_phg: power outside the rational lattice");
}

// bivariate polynomial in (x, y) = (log rho1, log rho2), coefficient map keyed by (i, j)
using Poly2 = std::vector<std::tuple<int, int, Exact>>;

inline Poly2 apply_D(const Poly2& P) {  // d_x - d_y
  Poly2 out;
  for (auto& [i, j, c] : P) {
    if (i > 0) out.emplace_back(i - 1, j, Exact(i) * c);
    if (j > 0) out.emplace_back(i, j - 1, Exact(-j) * c);
  }
  return out;
}

}  // namespace detail

// Lemma-style index bookkeeping, kept separate from index_sets so the two can be compared.
inline IndexSet predicted_rho_index(const IndexSet& e) {
  if (e.contains(Rat(0), 0)) return extended_union(e, zero_set(e.N));
  return set_union(e, zero_set(e.N));
}

inline TransportResult<PolyhomExpansion<Exact>> transport_phg(const PolyhomExpansion<Exact>& f) {
  PolyhomExpansion<Exact> u;
  u.remainder_order = f.remainder_order;
  for (auto& t : f.terms) {
    detail::check_power(t.p);
    if (t.p == Rat(0)) {
      u.add(t.p, t.k + 1, t.c / Exact(t.k + 1));
      continue;
    }
    // a_k = 1/p, a_j = -(j+1) a_{j+1} / p
    Exact ip = 1 / to_exact(t.p), a = ip;
    for (int j = t.k; j >= 0; --j) {
      u.add(t.p, j, t.c * a);
      a = -Exact(j) * a * ip;
    }
  }
  u.normalize();
  return {u, predicted_rho_index(f.index_set())};
}

// Solution vanishing at rho1 = 1: u = P(x, y) - P(0, x + y)
inline TransportResult<PolyhomExpansion2> transport_phg(const PolyhomExpansion2& f) {
  PolyhomExpansion2 u;
  u.remainder1 = f.remainder1;
  u.remainder2 = f.remainder2;
  for (auto& t : f.terms) {
    detail::check_power(t.p);
    detail::check_power(t.q);
    detail::Poly2 Q;
    if (t.p != t.q) {
      Exact id = 1 / to_exact(t.p - t.q), sgn = id;
      detail::Poly2 term{{t.k, t.l, Exact(1)}};
      while (!term.empty()) {
        for (auto& [i, j, c] : term) Q.emplace_back(i, j, sgn * c);
        term = detail::apply_D(term);
        sgn = -sgn * id;
      }
    } else {
      // in (x, z = x + y): x^k (z - x)^l, primitive in x at fixed z
      for (int i = 0; i <= t.l; ++i) {
        Exact c = detail::binom(t.l, i) * (i % 2 ? -1 : 1) / Exact(t.k + i + 1);
        // x^{k+i+1} (x + y)^{l-i}
        for (int a = 0; a <= t.l - i; ++a) Q.emplace_back(t.k + i + 1 + a, t.l - i - a, c * detail::binom(t.l - i, a));
      }
    }
    for (auto& [i, j, c] : Q) {
      u.add(t.p, i, t.q, j, t.c * c);
      if (i > 0) continue;  // P(0, x + y) keeps only x-free monomials
      // - rho1^q rho2^q (x + y)^j
      for (int a = 0; a <= j; ++a) u.add(t.q, a, t.q, j - a, -t.c * c * detail::binom(j, a));
    }
  }
  u.normalize();
  IndexSet e1 = f.index_set_face1(), e2 = f.index_set_face2();
  return {u, extended_union(e1, e2), e2};
}

// ---------------------------------------------------------------------------
// rho t near I+, from the fixed point in compactification.hpp

struct TInverseExpansion {
  PolyhomExpansion<double> expansion;
  IndexSet index_set;
  TInverseSample sample;
};

inline TInverseExpansion t_inverse_expansion(double v, double m, int order, const std::vector<double>& rho) {
  if (order != 2) throw std::invalid_argument("t_inverse_expansion: only order 2 is available");
  TInverseExpansion out;
  out.sample = t_inverse_fixed_point(v, m, rho);
  double c = -2.0 * m * cutoff_chi(1.0 + v);
  out.expansion.add(Rat(0), 0, 1.0 + v);
  out.expansion.add(Rat(1), 1, c);
  // the -rho log(1 - 2 m rho) piece starts at rho^2 and is kept with the remainder
  out.expansion.remainder_order = Rat(2);
  out.expansion.normalize();
  std::vector<std::pair<Rat, int>> g;
  for (int j = 0; j < order; ++j) g.emplace_back(Rat(j), j);
  out.index_set = IndexSet(g, Rat(order));
  return out;
}

}  // namespace scri
