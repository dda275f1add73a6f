#pragma once

#include <boost/rational.hpp>

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bt {

using Q = boost::rational<long long>;
using Point = std::vector<Q>;

inline long long floor_q(const Q& q) {
  long long n = q.numerator(), d = q.denominator();
  long long f = n / d;
  if (n % d != 0 && n < 0) --f;
  return f;
}

inline long long ceil_q(const Q& q) { return -floor_q(-q); }

inline bool is_integral(const Q& q) { return q.denominator() == 1; }

inline Q frac(const Q& q) { return q - Q(floor_q(q)); }

inline std::string to_string(const Q& q) {
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

// Accepts "a", "a/b" and "-a/b".
inline Q parse_q(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Q(std::stoll(s));
    long long d = std::stoll(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Q(std::stoll(s.substr(0, slash)), d);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
}

// The arithmetic progression offset + step*Z.
struct Progression {
  Q offset{0};
  Q step{1};

  Q index_of(const Q& v) const { return (v - offset) / step; }
  bool contains(const Q& v) const { return is_integral(index_of(v)); }
  Q at(long long k) const { return offset + step * Q(k); }
  Q least_at_least(const Q& v) const { return at(ceil_q(index_of(v))); }
  Q least_above(const Q& v) const { return at(floor_q(index_of(v)) + 1); }
  Q greatest_at_most(const Q& v) const { return at(floor_q(index_of(v))); }
  Progression refined(int m) const { return {offset, step / Q(m)}; }
};

inline Point operator+(const Point& a, const Point& b) {
  Point r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Point operator-(const Point& a, const Point& b) {
  Point r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Point operator*(const Q& s, const Point& a) {
  Point r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

inline Point barycenter(const std::vector<Point>& pts) {
  if (pts.empty()) throw std::invalid_argument("barycenter of no points");
  Point r(pts[0].size(), Q(0));
  for (const auto& p : pts) r = r + p;
  return Q(1, static_cast<long long>(pts.size())) * r;
}

inline std::string to_string(const Point& p) {
  std::string s = "[";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += "\"" + to_string(p[i]) + "\"";
  }
  return s + "]";
}

}  // namespace bt
