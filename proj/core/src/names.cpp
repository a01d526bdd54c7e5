#include "kinnet/names.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace kinnet {

std::string normalize_name(std::string_view raw) {
  // pass 1: drop periods, collapse whitespace, uppercase ASCII
  std::string flat;
  flat.reserve(raw.size());
  bool pending_space = false;
  for (char raw_c : raw) {
    const unsigned char c = static_cast<unsigned char>(raw_c);
    if (std::isspace(c)) {
      pending_space = !flat.empty();
      continue;
    }
    if (c == '.') continue;
    if (pending_space) flat.push_back(' ');
    pending_space = false;
    flat.push_back(c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A')
                                        : static_cast<char>(c));
  }
  // pass 2: fold UTF-8 Ñ (0xC3 0x91) and ñ (0xC3 0xB1) to plain N; running
  // this after punctuation removal keeps the whole chain idempotent even
  // when stripping made the two bytes adjacent
  std::string out;
  out.reserve(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(flat[i]);
    if (c == 0xC3 && i + 1 < flat.size()) {
      const unsigned char next = static_cast<unsigned char>(flat[i + 1]);
      if (next == 0x91 || next == 0xB1) {
        out.push_back('N');
        ++i;
        continue;
      }
    }
    out.push_back(flat[i]);
  }
  return out;
}

double jaro_winkler(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  if (a == b) return 1.0;

  const int la = static_cast<int>(a.size());
  const int lb = static_cast<int>(b.size());
  const int window = std::max(0, std::max(la, lb) / 2 - 1);

  std::vector<bool> matched_a(la, false), matched_b(lb, false);
  int matches = 0;
  for (int i = 0; i < la; ++i) {
    const int lo = std::max(0, i - window);
    const int hi = std::min(lb - 1, i + window);
    for (int j = lo; j <= hi; ++j) {
      if (!matched_b[j] && a[i] == b[j]) {
        matched_a[i] = matched_b[j] = true;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;

  int transpositions = 0;
  int k = 0;
  for (int i = 0; i < la; ++i) {
    if (!matched_a[i]) continue;
    while (!matched_b[k]) ++k;
    if (a[i] != b[k]) ++transpositions;
    ++k;
  }
  const double m = matches;
  const double jaro =
      (m / la + m / lb + (m - transpositions / 2.0) / m) / 3.0;

  int prefix = 0;
  for (int i = 0; i < std::min({la, lb, 4}); ++i) {
    if (a[i] != b[i]) break;
    ++prefix;
  }
  return jaro + prefix * 0.1 * (1.0 - jaro);
}

double name_pair_similarity(std::string_view last_a, std::string_view first_a,
                            std::string_view last_b, std::string_view first_b) {
  std::string a;
  a.reserve(last_a.size() + first_a.size() + 1);
  a.append(last_a);
  a.push_back(' ');
  a.append(first_a);
  std::string b;
  b.reserve(last_b.size() + first_b.size() + 1);
  b.append(last_b);
  b.push_back(' ');
  b.append(first_b);
  return jaro_winkler(a, b);
}

} // namespace kinnet
