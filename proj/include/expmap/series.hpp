#pragma once

/**
 * @file series.hpp
 * @brief Lists, their number functions, and the formal non-commutative series
 * of E_p(v) in the symbols r_0, r_1, ...
 *
 * A list nu = [n_1, ..., n_k] stands for the composition r_{n_1} ... r_{n_k}.
 * Its degree is 2k + sum(n_j), its factorial is prod(n_j!), and its
 * denominator obeys c_{[]} = 1, c_nu = |nu| (|nu| + 1) c_{tail(nu)}.
 * The coefficient of r_nu in the series is 1 / (nu! c_nu).
 *
 * All arithmetic in this header is exact.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace expmap {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A finite sequence of nonnegative integers; the empty list is the identity.
class List {
 public:
  List() = default;
  List(std::initializer_list<unsigned> entries) : entries_(entries) {}
  explicit List(std::vector<unsigned> entries) : entries_(std::move(entries)) {}

  const std::vector<unsigned>& entries() const noexcept { return entries_; }
  std::size_t length() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  unsigned front() const { return entries_.front(); }

  /// The list with its first entry removed.
  List tail() const {
    if (entries_.empty()) return {};
    return List(std::vector<unsigned>(entries_.begin() + 1, entries_.end()));
  }

  /// [m, entries...]
  List prepend(unsigned m) const {
    std::vector<unsigned> out;
    out.reserve(entries_.size() + 1);
    out.push_back(m);
    out.insert(out.end(), entries_.begin(), entries_.end());
    return List(std::move(out));
  }

  unsigned max_entry() const {
    return entries_.empty() ? 0u : *std::max_element(entries_.begin(), entries_.end());
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) os << ',';
      os << entries_[i];
    }
    os << ']';
    return os.str();
  }

  friend bool operator==(const List&, const List&) = default;

 private:
  std::vector<unsigned> entries_;
};

inline std::ostream& operator<<(std::ostream& os, const List& l) { return os << l.to_string(); }

inline unsigned degree(const List& nu) {
  unsigned d = 0;
  for (unsigned n : nu.entries()) d += n + 2;
  return d;
}

inline BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

/// nu! = prod n_j!
inline BigInt factorial(const List& nu) {
  BigInt f = 1;
  for (unsigned n : nu.entries()) f *= factorial(n);
  return f;
}

/// c_nu, evaluated from the shortest suffix outwards.
inline BigInt denominator(const List& nu) {
  BigInt c = 1;
  unsigned suffix_degree = 0;
  const auto& e = nu.entries();
  for (auto it = e.rbegin(); it != e.rend(); ++it) {
    suffix_degree += *it + 2;
    c *= BigInt(suffix_degree) * BigInt(suffix_degree + 1);
  }
  return c;
}

inline Rational coefficient(const List& nu) {
  return Rational(BigInt(1), factorial(nu) * denominator(nu));
}

/**
 * Enumeration order used for every table: degree, then length, then entries
 * in descending lexicographic order. Within one degree this reproduces the
 * customary listing [4], [2,0], [1,1], [0,2], [0,0,0].
 */
struct EnumerationOrder {
  bool operator()(const List& a, const List& b) const {
    const unsigned da = degree(a), db = degree(b);
    if (da != db) return da < db;
    if (a.length() != b.length()) return a.length() < b.length();
    return std::lexicographical_compare(a.entries().begin(), a.entries().end(),
                                        b.entries().begin(), b.entries().end(),
                                        std::greater<unsigned>{});
  }
};

namespace detail {

inline void append_compositions(unsigned remaining, unsigned slots, std::vector<unsigned>& prefix,
                                std::vector<List>& out) {
  if (slots == 0) {
    if (remaining == 0) out.emplace_back(prefix);
    return;
  }
  // Descending first entry gives descending lexicographic order.
  for (unsigned first = remaining + 1; first-- > 0;) {
    prefix.push_back(first);
    append_compositions(remaining - first, slots - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

/// Every list of degree exactly n, once each, in EnumerationOrder.
inline std::vector<List> lists_of_degree(unsigned n) {
  std::vector<List> out;
  std::vector<unsigned> prefix;
  for (unsigned k = 0; 2 * k <= n; ++k) {
    prefix.clear();
    detail::append_compositions(n - 2 * k, k, prefix, out);
  }
  return out;
}

/// Truncated formal series sum_nu a_nu r_nu over lists of degree <= max_degree.
class FormalSeries {
 public:
  using Terms = std::map<List, Rational, EnumerationOrder>;

  explicit FormalSeries(unsigned max_degree) : max_degree_(max_degree) {}

  unsigned max_degree() const noexcept { return max_degree_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Adds c to the coefficient of nu; terms beyond max_degree are dropped.
  void add(const List& nu, const Rational& c) {
    if (degree(nu) > max_degree_ || c == 0) return;
    auto [it, inserted] = terms_.try_emplace(nu, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational at(const List& nu) const {
    auto it = terms_.find(nu);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  friend bool operator==(const FormalSeries& a, const FormalSeries& b) {
    return a.max_degree_ == b.max_degree_ && a.terms_ == b.terms_;
  }

 private:
  unsigned max_degree_;
  Terms terms_;
};

/// sum over deg(nu) <= N of r_nu / (nu! c_nu).
inline FormalSeries closed_form_series(unsigned max_degree) {
  FormalSeries s(max_degree);
  for (unsigned n = 0; n <= max_degree; ++n)
    for (const List& nu : lists_of_degree(n)) s.add(nu, coefficient(nu));
  return s;
}

/**
 * Homogeneous components built from E_0 = 1, E_1 = 0 and
 *   E_n = 1/(n(n+1)) sum_{m=0}^{n-2} (1/m!) r_m E_{n-m-2},
 * where multiplying by r_m on the left prepends m to every list.
 */
inline FormalSeries recurrence_series(unsigned max_degree) {
  std::vector<FormalSeries::Terms> components(max_degree + 1);
  components[0].emplace(List{}, Rational(1));
  for (unsigned n = 2; n <= max_degree; ++n) {
    auto& En = components[n];
    const Rational scale(BigInt(1), BigInt(n) * BigInt(n + 1));
    for (unsigned m = 0; m + 2 <= n; ++m) {
      const Rational weight = scale / Rational(factorial(m));
      for (const auto& [mu, c] : components[n - m - 2]) {
        const Rational term = weight * c;
        auto [it, inserted] = En.try_emplace(mu.prepend(m), term);
        if (!inserted) it->second += term;
      }
    }
  }
  FormalSeries s(max_degree);
  for (const auto& component : components)
    for (const auto& [nu, c] : component) s.add(nu, c);
  return s;
}

struct SeriesRow {
  List list;
  unsigned degree;
  Rational coefficient;
};

inline std::vector<SeriesRow> series_table(const FormalSeries& s) {
  std::vector<SeriesRow> rows;
  rows.reserve(s.size());
  for (const auto& [nu, c] : s.terms()) rows.push_back({nu, degree(nu), c});
  return rows;
}

inline std::string to_string(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// CSV with header list,degree,numerator,denominator.
inline std::string series_table_csv(const std::vector<SeriesRow>& rows) {
  std::ostringstream os;
  os << "list,degree,numerator,denominator\n";
  for (const auto& r : rows) {
    os << '"' << r.list.to_string() << "\"," << r.degree << ','
       << boost::multiprecision::numerator(r.coefficient).str() << ','
       << boost::multiprecision::denominator(r.coefficient).str() << '\n';
  }
  return os.str();
}

namespace detail {

// Integers that overflow int64 fall back to decimal strings.
inline nlohmann::json big_to_json(const BigInt& x) {
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
    return x.convert_to<long long>();
  return x.str();
}

}  // namespace detail

inline nlohmann::json series_table_json(const std::vector<SeriesRow>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"list", r.list.entries()},
                   {"degree", r.degree},
                   {"numerator", detail::big_to_json(boost::multiprecision::numerator(r.coefficient))},
                   {"denominator", detail::big_to_json(boost::multiprecision::denominator(r.coefficient))}});
  }
  return out;
}

}  // namespace expmap
