#ifndef MODOP_RATIONAL_HPP_
#define MODOP_RATIONAL_HPP_

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "modop/error.hpp"

namespace modop {

// Exact rationals; every linear-algebra computation in the library uses them.
using Rational = mpq_class;

// Parses "p", "-p" or "p/q" (q != 0) into a canonicalized rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw SchemaError("", "empty rational literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool seen_slash = false;
  bool digits_before = false;
  bool digits_after = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/') {
      if (seen_slash) throw SchemaError("", "malformed rational '" + s + "'");
      seen_slash = true;
    } else if (c >= '0' && c <= '9') {
      (seen_slash ? digits_after : digits_before) = true;
    } else {
      throw SchemaError("", "malformed rational '" + s + "'");
    }
  }
  if (!digits_before || (seen_slash && !digits_after)) {
    throw SchemaError("", "malformed rational '" + s + "'");
  }
  if (s[0] == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0) {
    throw SchemaError("", "malformed rational '" + s + "'");
  }
  if (r.get_den() == 0) throw SchemaError("", "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace modop

#endif  // MODOP_RATIONAL_HPP_
