#pragma once

// Thin UTF-8 helpers over ICU. Strings are UTF-8 std::string throughout the
// library; code points are char32_t.

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "bitext/error.hpp"

namespace bitext::unicode {

/// Byte offset of the first ill-formed sequence, or nullopt when the input is
/// valid UTF-8. Surrogates and overlong forms count as ill-formed.
inline std::optional<std::size_t> find_invalid_utf8(std::string_view text) {
  const auto* data = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(data, i, length, c);
    if (c < 0) return static_cast<std::size_t>(start);
  }
  return std::nullopt;
}

inline bool is_valid_utf8(std::string_view text) { return !find_invalid_utf8(text); }

/// Decodes UTF-8; ill-formed sequences become U+FFFD.
inline std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* data = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(data, i, length, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

inline void append(std::string& out, char32_t c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
  if (error) {
    out += "\xEF\xBF\xBD";
    return;
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

inline std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) append(out, c);
  return out;
}

/// Number of Unicode scalar values (not bytes).
inline std::size_t length(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char b : text) n += (b & 0xC0) != 0x80;
  return n;
}

inline bool is_white_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

inline bool is_letter(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_L_MASK) != 0;
}

inline bool is_punctuation(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_P_MASK) != 0;
}

inline bool is_latin_script(char32_t c) {
  UErrorCode status = U_ZERO_ERROR;
  return uscript_getScript(static_cast<UChar32>(c), &status) == USCRIPT_LATIN && U_SUCCESS(status);
}

inline bool is_ascii(std::string_view text) {
  for (unsigned char b : text)
    if (b >= 0x80) return false;
  return true;
}

inline std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

inline icu::UnicodeString from_utf8(std::string_view text) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

/// Canonical composition (NFC).
inline std::string nfc(std::string_view text) {
  if (is_ascii(text)) return std::string(text);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kIoError, "ICU NFC normalizer unavailable");
  icu::UnicodeString normalized = normalizer->normalize(from_utf8(text), status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kInvalidEncoding, "NFC normalization failed");
  return to_utf8(normalized);
}

/// Full (not simple) default case folding.
inline std::string case_fold(std::string_view text) {
  icu::UnicodeString s = from_utf8(text);
  s.foldCase(U_FOLD_CASE_DEFAULT);
  return to_utf8(s);
}

/// Strips leading and trailing White_Space code points.
inline std::string_view trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  const auto* data = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  {
    int32_t i = 0;
    while (i < length) {
      const int32_t start = i;
      UChar32 c;
      U8_NEXT(data, i, length, c);
      if (c < 0 || !is_white_space(static_cast<char32_t>(c))) {
        begin = static_cast<std::size_t>(start);
        break;
      }
      begin = static_cast<std::size_t>(i);
    }
  }
  {
    int32_t i = length;
    while (i > static_cast<int32_t>(begin)) {
      const int32_t stop = i;
      UChar32 c;
      U8_PREV(data, 0, i, c);
      if (c < 0 || !is_white_space(static_cast<char32_t>(c))) {
        end = static_cast<std::size_t>(stop);
        break;
      }
      end = static_cast<std::size_t>(i);
    }
  }
  if (end < begin) end = begin;
  return text.substr(begin, end - begin);
}

/// Trims and replaces every internal run of White_Space with one U+0020.
inline std::string collapse_white_space(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t c : decode(text)) {
    if (is_white_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    append(out, c);
  }
  return out;
}

}  // namespace bitext::unicode
