#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eigloc/engine.hpp"
#include "eigloc/expr.hpp"
#include "eigloc/rational.hpp"

namespace eigloc {

// Sign counts of a diagonal matrix; by Sylvester's law these are the
// eigenvalue counts of anything congruent to it.
struct Inertia {
  long n_plus = 0, n_zero = 0, n_minus = 0;
  long total() const { return n_plus + n_zero + n_minus; }
  bool operator==(const Inertia&) const = default;
};

inline Inertia inertia(const DiagList& d) {
  Inertia in;
  for (const auto& e : d) {
    const int s = e.value.sign();
    if (s > 0)
      ++in.n_plus;
    else if (s < 0)
      ++in.n_minus;
    else
      ++in.n_zero;
  }
  return in;
}

// Real interval with independently open/closed ends; rational endpoints,
// nullopt meaning the end is infinite.
struct Interval {
  std::optional<Rational> lo, hi;
  bool lo_closed = false, hi_closed = false;

  bool bounded() const { return lo.has_value() && hi.has_value(); }

  void check() const {
    if (lo && hi && *lo > *hi) throw std::invalid_argument("malformed interval: lower end above upper end");
  }

  std::string str() const {
    std::string s(lo_closed ? "[" : "(");
    s += lo ? lo->str() : "-inf";
    s += ",";
    s += hi ? hi->str() : "inf";
    s += hi_closed ? "]" : ")";
    return s;
  }
};

// Accepts "[a,b]", "(a,b)", "(a,b]", "[a,b)" with rational endpoints or
// -inf / inf (an infinite end must be open).
inline Interval parse_interval(std::string_view text) {
  auto malformed = [&] { return std::invalid_argument("malformed interval: '" + std::string(text) + "'"); };
  if (text.size() < 3) throw malformed();
  Interval iv;
  const char first = text.front(), last = text.back();
  if (first == '[')
    iv.lo_closed = true;
  else if (first != '(')
    throw malformed();
  if (last == ']')
    iv.hi_closed = true;
  else if (last != ')')
    throw malformed();
  const std::string_view body = text.substr(1, text.size() - 2);
  const std::size_t comma = body.find(',');
  if (comma == std::string_view::npos) throw malformed();
  auto endpoint = [&](std::string_view s, bool closed) -> std::optional<Rational> {
    if (s == "inf" || s == "+inf" || s == "-inf") {
      if (closed) throw std::invalid_argument("malformed interval: infinite end must be open");
      return std::nullopt;
    }
    return Rational::parse(s);
  };
  iv.lo = endpoint(body.substr(0, comma), iv.lo_closed);
  iv.hi = endpoint(body.substr(comma + 1), iv.hi_closed);
  iv.check();
  return iv;
}

// Number of eigenvalues of the spec'd matrix of e's graph inside I.
// Bounded ends need one diagonalization each; (-inf, inf) is just n.
inline long count_eigenvalues(const SlickExpr& e, const Interval& I, const MatrixSpec& spec,
                              const DiagOptions& opt = {}) {
  I.check();
  const long n = e.n_vertices();
  auto run = [&](const Rational& c) { return inertia(diagonalize(e, c, spec, opt)); };
  if (!I.lo && !I.hi) return n;
  if (!I.lo) {
    const Inertia b = run(*I.hi);
    return I.hi_closed ? b.n_minus + b.n_zero : b.n_minus;
  }
  if (!I.hi) {
    const Inertia a = run(*I.lo);
    return I.lo_closed ? a.n_plus + a.n_zero : a.n_plus;
  }
  if (*I.lo == *I.hi) {
    if (!(I.lo_closed && I.hi_closed)) return 0;
    return run(*I.lo).n_zero;
  }
  const Inertia a = run(*I.lo);
  const Inertia b = run(*I.hi);
  if (!I.lo_closed && !I.hi_closed) return b.n_minus - a.n_minus - a.n_zero;
  if (!I.lo_closed && I.hi_closed) return a.n_plus - b.n_plus;
  if (I.lo_closed && !I.hi_closed) return b.n_minus - a.n_minus;
  return b.n_minus + b.n_zero - a.n_minus;
}

// m_G(lambda): the number of zero diagonal values at shift lambda.
inline long multiplicity(const SlickExpr& e, const Rational& lambda, const MatrixSpec& spec) {
  return inertia(diagonalize(e, lambda, spec)).n_zero;
}

// Empirical check of the join bounds: for the root join Q_l (+) Q_r, counts
// eigenvalues of G and of both child graphs in an open bounded interval,
// and samples the multiplicity inequality
//   m_G(lambda) <= m_l(lambda) + m_r(lambda) + 4k
// at evenly spaced rational points. When both children have no eigenvalue
// in I, G can have at most 8k there.
struct JoinBoundsReport {
  int k = 0;
  Interval interval;
  long count_g = 0, count_left = 0, count_right = 0;
  bool children_silent = false; // both child counts are zero
  bool count_bound_holds = true;   // children_silent implies count_g <= 8k

  struct Sample {
    Rational lambda;
    long mult_g, mult_left, mult_right;
    bool holds; // mult_g <= mult_left + mult_right + 4k
  };
  std::vector<Sample> samples;
  bool all_samples_hold = true;

  std::string str() const {
    std::ostringstream os;
    os << "join bounds in I=" << interval.str() << " (k=" << k << ")\n";
    os << "  side    count\n";
    os << "  G       " << count_g << "\n";
    os << "  left    " << count_left << "\n";
    os << "  right   " << count_right << "\n";
    for (const auto& s : samples)
      os << "  lambda=" << s.lambda << " m_G=" << s.mult_g << " m_l=" << s.mult_left << " m_r=" << s.mult_right
         << " bound=" << (s.mult_left + s.mult_right + 4 * k) << (s.holds ? " ok" : " VIOLATED") << "\n";
    os << "count_g=" << count_g << "\n";
    os << "count_left=" << count_left << "\n";
    os << "count_right=" << count_right << "\n";
    os << "children_silent=" << (children_silent ? "true" : "false") << "\n";
    os << "count_bound_8k=" << 8 * k << "\n";
    os << "count_bound_holds=" << (count_bound_holds ? "true" : "false") << "\n";
    os << "mult_bound_holds=" << (all_samples_hold ? "true" : "false") << "\n";
    return os.str();
  }
};

inline JoinBoundsReport check_join_bounds(const SlickExpr& e, const Interval& I, int n_samples = 3) {
  if (e.nodes[e.root].is_atom()) throw std::invalid_argument("check_join_bounds: root is an atom, not a join");
  if (!I.bounded() || I.lo_closed || I.hi_closed)
    throw std::invalid_argument("check_join_bounds: interval must be open and bounded");
  I.check();

  const MatrixSpec spec = MatrixSpec::adjacency();
  const SlickExpr left = e.subtree(e.nodes[e.root].left);
  const SlickExpr right = e.subtree(e.nodes[e.root].right);

  JoinBoundsReport rep;
  rep.k = e.width;
  rep.interval = I;
  rep.count_g = count_eigenvalues(e, I, spec);
  rep.count_left = count_eigenvalues(left, I, spec);
  rep.count_right = count_eigenvalues(right, I, spec);
  rep.children_silent = rep.count_left == 0 && rep.count_right == 0;
  rep.count_bound_holds = !rep.children_silent || rep.count_g <= 8L * rep.k;

  const Rational width = *I.hi - *I.lo;
  for (int s = 1; s <= n_samples; ++s) {
    const Rational lambda = *I.lo + width * Rational(s, n_samples + 1);
    JoinBoundsReport::Sample sample{lambda, multiplicity(e, lambda, spec), multiplicity(left, lambda, spec),
                                    multiplicity(right, lambda, spec), true};
    sample.holds = sample.mult_g <= sample.mult_left + sample.mult_right + 4L * rep.k;
    rep.all_samples_hold = rep.all_samples_hold && sample.holds;
    rep.samples.push_back(std::move(sample));
  }
  return rep;
}

}  // namespace eigloc
