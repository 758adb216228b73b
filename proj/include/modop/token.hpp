#ifndef MODOP_TOKEN_HPP_
#define MODOP_TOKEN_HPP_

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace modop {

// Flag and vertex identifiers. They are opaque; the only structure used is
// the total order below.
using Token = std::string;

namespace detail {

inline bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

}  // namespace detail

// Natural order: maximal digit runs compare numerically and sort before
// non-digit runs; remaining ties fall back to plain byte order. So "2" < "10",
// "h9" < "h10" and "0.x" < "1.x" < "10.x".
inline std::strong_ordering natural_compare(std::string_view a,
                                            std::string_view b) noexcept {
  using detail::is_digit;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    bool da = is_digit(a[i]);
    bool db = is_digit(b[j]);
    if (da != db) {
      return da ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    std::size_t ei = i;
    std::size_t ej = j;
    while (ei < a.size() && is_digit(a[ei]) == da) ++ei;
    while (ej < b.size() && is_digit(b[ej]) == db) ++ej;
    std::string_view ra = a.substr(i, ei - i);
    std::string_view rb = b.substr(j, ej - j);
    if (da) {
      std::size_t za = ra.find_first_not_of('0');
      std::size_t zb = rb.find_first_not_of('0');
      ra = za == std::string_view::npos ? std::string_view() : ra.substr(za);
      rb = zb == std::string_view::npos ? std::string_view() : rb.substr(zb);
      if (ra.size() != rb.size()) return ra.size() <=> rb.size();
    }
    if (auto c = ra.compare(rb); c != 0) {
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    i = ei;
    j = ej;
  }
  if (i < a.size() || j < b.size()) {
    return i < a.size() ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  int c = a.compare(b);
  if (c == 0) return std::strong_ordering::equal;
  return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

struct TokenLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const noexcept {
    return natural_compare(a, b) < 0;
  }
};

}  // namespace modop

#endif  // MODOP_TOKEN_HPP_
