// UTF-8 <-> Unicode scalar value helpers shared by all modules.
//
// All clause lengths and edit operations in this toolkit are defined over
// Unicode scalar values, never bytes; CJK text would be distorted otherwise.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace clausealign {

namespace detail {
[[noreturn]] inline void utf8_fail(std::size_t pos, const char* what) {
  throw std::runtime_error("invalid UTF-8 at byte " + std::to_string(pos) +
                           ": " + what);
}
}  // namespace detail

// Decodes the scalar value starting at pos, advancing pos past it.
// Rejects overlong forms, surrogates, values above U+10FFFF and truncation.
inline char32_t decode_scalar(std::string_view s, std::size_t& pos) {
  const unsigned char b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1Fu;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0Fu;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07u;
  } else {
    detail::utf8_fail(pos, "unexpected byte");
  }
  if (pos + static_cast<std::size_t>(len) > s.size())
    detail::utf8_fail(pos, "truncated sequence");
  for (int i = 1; i < len; ++i) {
    const unsigned char bi = static_cast<unsigned char>(s[pos + i]);
    if ((bi & 0xC0) != 0x80) detail::utf8_fail(pos, "missing continuation byte");
    cp = (cp << 6) | (bi & 0x3Fu);
  }
  constexpr char32_t min_for_len[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < min_for_len[len]) detail::utf8_fail(pos, "overlong encoding");
  if (cp >= 0xD800 && cp <= 0xDFFF) detail::utf8_fail(pos, "surrogate code point");
  if (cp > 0x10FFFF) detail::utf8_fail(pos, "code point out of range");
  pos += static_cast<std::size_t>(len);
  return cp;
}

inline std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) out.push_back(decode_scalar(s, pos));
  return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size() * 3);
  for (char32_t cp : s) append_utf8(out, cp);
  return out;
}

inline std::string encode_utf8(char32_t cp) {
  std::string out;
  append_utf8(out, cp);
  return out;
}

// Number of Unicode scalar values in a UTF-8 string.
inline std::size_t scalar_count(std::string_view s) {
  std::size_t pos = 0, n = 0;
  while (pos < s.size()) {
    decode_scalar(s, pos);
    ++n;
  }
  return n;
}

inline bool is_valid_utf8(std::string_view s) {
  try {
    scalar_count(s);
    return true;
  } catch (const std::runtime_error&) {
    return false;
  }
}

// ASCII whitespace plus U+3000 (ideographic space).
inline bool is_space_cp(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\r' || cp == U'\n' ||
         cp == U'\f' || cp == U'\v' || cp == 0x3000;
}

namespace detail {
inline void strip_bom(std::string& line) {
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);
}
}  // namespace detail

// Trims leading/trailing whitespace (ASCII + U+3000) from UTF-8 text.
inline std::string trim_utf8(std::string_view s) {
  std::u32string cps = decode_utf8(s);
  std::size_t b = 0, e = cps.size();
  while (b < e && is_space_cp(cps[b])) ++b;
  while (e > b && is_space_cp(cps[e - 1])) --e;
  return encode_utf8(std::u32string_view(cps).substr(b, e - b));
}

}  // namespace clausealign
