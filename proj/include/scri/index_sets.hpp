#pragma once
// Truncated index sets as step functions p -> k(p) with exact rational powers.
// A generator (p,k) means log order <= k is allowed at every power >= p.

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace scri {

using Rat = boost::rational<long long>;

inline std::string rat_str(const Rat& p) {
  std::ostringstream os;
  if (p.denominator() == 1) os << p.numerator();
  else os << p.numerator() << '/' << p.denominator();
  return os.str();
}

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(std::stoll(s));
  return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

inline constexpr long long kDenominatorLimit = 64;
inline const Rat kNoTruncation = Rat(1 << 20);

struct IndexSet {
  std::vector<std::pair<Rat, int>> gens;
  Rat N = kNoTruncation;

  IndexSet() = default;
  IndexSet(std::vector<std::pair<Rat, int>> g, Rat n) : gens(std::move(g)), N(n) { normalize(); }

  bool empty() const { return gens.empty(); }
  Rat pmin() const { return gens.front().first; }

  // log bound at p, or nullopt when p is below the set or at/above the truncation
  std::optional<int> k_at(const Rat& p) const {
    if (p >= N) return std::nullopt;
    std::optional<int> k;
    for (auto& [q, kk] : gens) {
      if (q <= p) k = kk;
      else break;
    }
    return k;
  }
  bool contains(const Rat& p, int k) const {
    auto kk = k_at(p);
    return kk && k <= *kk;
  }

  void normalize() {
    std::sort(gens.begin(), gens.end());
    std::vector<std::pair<Rat, int>> out;
    for (auto& g : gens) {
      if (g.first >= N || g.second < 0) continue;
      if (!out.empty() && out.back().first == g.first) {
        out.back().second = std::max(out.back().second, g.second);
        continue;
      }
      out.push_back(g);
    }
    // running max, then drop generators that do not raise the bound
    std::vector<std::pair<Rat, int>> mono;
    for (auto& g : out) {
      if (!mono.empty() && g.second <= mono.back().second) continue;
      mono.push_back(g);
    }
    gens = std::move(mono);
  }

  bool denominators_ok(long long lim = kDenominatorLimit) const {
    for (auto& g : gens)
      if (g.first.denominator() > lim) return false;
    return true;
  }

  // equality of the represented step functions on p < min(N, other.N)
  bool same_below(const IndexSet& o, const Rat& lim) const {
    std::vector<Rat> pts;
    for (auto& g : gens) pts.push_back(g.first);
    for (auto& g : o.gens) pts.push_back(g.first);
    for (auto& p : pts) {
      if (p >= lim) continue;
      auto a = k_at(p), b = o.k_at(p);
      if (a != b) return false;
    }
    return true;
  }
  friend bool operator==(const IndexSet& a, const IndexSet& b) { return a.gens == b.gens && a.N == b.N; }

  std::string serialize() const {
    std::string s;
    for (auto& g : gens) s += rat_str(g.first) + " " + std::to_string(g.second) + "\n";
    return s;
  }
  static IndexSet deserialize(const std::string& text, Rat n) {
    std::istringstream is(text);
    std::string p;
    int k;
    IndexSet e;
    e.N = n;
    while (is >> p >> k) e.gens.emplace_back(parse_rat(p), k);
    e.normalize();
    return e;
  }
};

inline bool subset_of(const IndexSet& a, const IndexSet& b) {
  Rat lim = std::min(a.N, b.N);
  for (auto& g : a.gens) {
    if (g.first >= lim) continue;
    auto kb = b.k_at(g.first);
    if (!kb || *kb < g.second) return false;
  }
  return true;
}

// the set 0 (all nonnegative powers, no logs) and -ni
inline IndexSet power_set(Rat p, int k = 0, Rat N = kNoTruncation) { return IndexSet({{p, k}}, N); }
inline IndexSet zero_set(Rat N = kNoTruncation) { return power_set(Rat(0), 0, N); }
inline IndexSet empty_set(Rat N = kNoTruncation) { return IndexSet({}, N); }

namespace detail {
inline std::vector<Rat> breakpoints(const IndexSet& a, const IndexSet& b) {
  std::vector<Rat> pts;
  for (auto& g : a.gens) pts.push_back(g.first);
  for (auto& g : b.gens) pts.push_back(g.first);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}
}  // namespace detail

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet r;
  r.N = std::min(a.N, b.N);
  for (auto& p : detail::breakpoints(a, b)) {
    auto ka = a.k_at(p), kb = b.k_at(p);
    int k = -1;
    if (ka) k = std::max(k, *ka);
    if (kb) k = std::max(k, *kb);
    if (k >= 0) r.gens.emplace_back(p, k);
  }
  r.normalize();
  return r;
}

inline IndexSet extended_union(const IndexSet& a, const IndexSet& b) {
  IndexSet r;
  r.N = std::min(a.N, b.N);
  for (auto& p : detail::breakpoints(a, b)) {
    auto ka = a.k_at(p), kb = b.k_at(p);
    int k = -1;
    if (ka) k = std::max(k, *ka);
    if (kb) k = std::max(k, *kb);
    if (ka && kb) k = std::max(k, *ka + *kb + 1);
    if (k >= 0) r.gens.emplace_back(p, k);
  }
  r.normalize();
  return r;
}

inline IndexSet shift(const IndexSet& a, const Rat& n) {
  IndexSet r;
  r.N = a.N >= kNoTruncation ? kNoTruncation : a.N + n;
  for (auto& g : a.gens) r.gens.emplace_back(g.first + n, g.second);
  r.normalize();
  return r;
}

inline IndexSet sum(const IndexSet& a, const IndexSet& b) {
  if (a.empty() || b.empty()) return empty_set(std::min(a.N, b.N));
  IndexSet r;
  Rat na = a.N >= kNoTruncation ? kNoTruncation : a.N + b.pmin();
  Rat nb = b.N >= kNoTruncation ? kNoTruncation : b.N + a.pmin();
  r.N = std::min(na, nb);
  for (auto& ga : a.gens)
    for (auto& gb : b.gens) r.gens.emplace_back(ga.first + gb.first, ga.second + gb.second);
  r.normalize();
  return r;
}

inline IndexSet scale_sum(const IndexSet& a, int j) {
  if (j < 1) throw std::invalid_argument("scale_sum needs j >= 1");
  IndexSet r = a;
  for (int i = 1; i < j; ++i) r = sum(r, a);
  return r;
}

// j(E - i) + i
inline IndexSet nonlinear_term(const IndexSet& e, int j) { return shift(scale_sum(shift(e, Rat(1)), j), Rat(-1)); }

// union over j >= 1 of j(E - i) + i, j swept up to ceil(N / pmin(E - i))
inline IndexSet nonlinear_closure(const IndexSet& e, const Rat& N) {
  if (e.empty()) return e;
  Rat pm = e.pmin() + 1;
  if (pm <= Rat(0)) throw std::domain_error("nonlinear closure needs pmin(E) > -1");
  Rat q = N / pm;
  long long jmax = q.numerator() / q.denominator() + 1;
  IndexSet r = e;
  for (long long j = 2; j <= jmax; ++j) r = set_union(r, nonlinear_term(e, static_cast<int>(j)));
  return r;
}

inline IndexSet elog(Rat N) {
  IndexSet r;
  r.N = N;
  for (long long j = 0; Rat(j) < N; ++j) r.gens.emplace_back(Rat(j), static_cast<int>(j));
  r.normalize();
  return r;
}

inline IndexSet elog_prime(Rat N) {
  IndexSet r;
  r.N = N;
  for (long long j = 1; Rat(j) < N; ++j) r.gens.emplace_back(Rat(j), static_cast<int>(j));
  r.normalize();
  return r;
}

// E \ {(0,1)}: lower the bound at power 0 from 1 to 0
inline IndexSet remove_01(const IndexSet& e) {
  IndexSet r = e;
  for (auto& g : r.gens)
    if (g.first == Rat(0) && g.second == 1) g.second = 0;
  r.normalize();
  return r;
}

// ---------------------------------------------------------------------------

struct RecursionResult {
  IndexSet E0, EIprime, EIbar, EI, Eplus;
  int iterations_used = 0;
  int plus_iterations = 0;
};

struct NonStabilization : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline IndexSet truncate(IndexSet e, const Rat& N) {
  e.N = std::min(e.N, N);
  e.normalize();
  return e;
}

inline IndexSet close_E0(const IndexSet& e00, const Rat& N, bool with_elog) {
  IndexSet e = truncate(e00, N);
  if (e.empty()) return e;
  IndexSet lp = elog_prime(N);
  for (int it = 0; it < 1000; ++it) {
    IndexSet next = e;
    if (with_elog) next = set_union(next, sum(e, lp));
    next = set_union(next, nonlinear_closure(e, N));
    next = truncate(next, N);
    if (next.same_below(e, N)) return e;
    e = next;
  }
  throw NonStabilization("E0 closure did not stabilise");
}

inline RecursionResult solve_index_recursion(const IndexSet& e00, int Nint, bool include_elog_prime) {
  const Rat N(Nint);
  if (!e00.empty() && e00.pmin() <= Rat(0)) throw std::domain_error("E0^0 must have positive minimal power");
  RecursionResult res;
  res.E0 = close_E0(e00, N, include_elog_prime);
  Rat c = Rat(1);
  if (!res.E0.empty()) c = std::min(Rat(1), res.E0.pmin());
  Rat bound = 3 * N / c;
  long long cap = bound.numerator() / bound.denominator() + 1;

  const IndexSet zero = zero_set(N), mi = power_set(Rat(1), 0, N);
  IndexSet EI = empty_set(N), EIp = empty_set(N), EIb = empty_set(N);
  int k = 0;
  for (;;) {
    IndexSet twoE_i = shift(sum(EI, EI), Rat(1));
    IndexSet nEp = truncate(extended_union(res.E0, twoE_i), N);
    IndexSet nEb = truncate(set_union(zero, extended_union(res.E0, set_union(sum(EIb, EIp), twoE_i))), N);
    IndexSet inner = set_union(sum(EI, EIp), sum(EIb, EIb));
    IndexSet nE = extended_union(extended_union(zero, res.E0), inner);
    nE = truncate(set_union(nE, nonlinear_closure(EI, N)), N);
    ++k;
    bool stable = nEp.same_below(EIp, N) && nEb.same_below(EIb, N) && nE.same_below(EI, N) &&
                  nEp.gens.size() == EIp.gens.size() && nEb.gens.size() == EIb.gens.size() &&
                  nE.gens.size() == EI.gens.size();
    EI = nE;
    EIp = nEp;
    EIb = nEb;
    if (stable) break;
    if (k > cap) throw NonStabilization("index recursion exceeded 3N/c iterations");
  }
  res.EI = EI;
  res.EIprime = EIp;
  res.EIbar = EIb;
  res.iterations_used = k;

  IndexSet base = extended_union(mi, zero);
  IndexSet tail = extended_union(mi, remove_01(EI));
  IndexSet Ep = empty_set(N);
  int j = 0;
  for (;;) {
    IndexSet next = truncate(set_union(base, extended_union(shift(Ep, Rat(1)), tail)), N);
    ++j;
    bool stable = next.same_below(Ep, N) && next.gens.size() == Ep.gens.size();
    Ep = next;
    if (stable) break;
    if (j > cap + Nint + 2) throw NonStabilization("E+ recursion did not stabilise");
  }
  res.Eplus = Ep;
  res.plus_iterations = j;
  return res;
}

// index set of u solving rho d_rho u = f with f in E
inline IndexSet transport_index_rho(const IndexSet& e) {
  IndexSet zero = zero_set(e.N);
  if (!e.contains(Rat(0), 0)) return set_union(e, zero);
  return extended_union(e, zero);
}

// index set at the rho1 face for (rho1 d1 - rho2 d2) u = f
inline IndexSet transport_index_two_face(const IndexSet& e1, const IndexSet& e2) { return extended_union(e1, e2); }

}  // namespace scri
