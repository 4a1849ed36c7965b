#include "permcohom/perm/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace pcoh::perm {

namespace {

[[noreturn]] void bad_text(std::string_view text, const std::string& why) {
  throw std::invalid_argument("cycle notation '" + std::string(text) + "': " + why);
}

// Points of one cycle body (the text between parentheses), 0-based.
// "1,2,3" and "1 2 3" are read point by point; a bare digit run such as
// "12" is the compact single-digit form "(12)" = (1,2).
std::vector<std::uint32_t> cycle_points(std::string_view body, std::string_view whole) {
  std::vector<std::uint32_t> pts;
  const bool has_separator = body.find_first_of(", \t\n") != std::string_view::npos;
  std::size_t i = 0;
  while (i < body.size()) {
    const char c = body[i];
    if (c == ',' || std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) == 0) bad_text(whole, "unexpected character");
    std::size_t j = i;
    while (j < body.size() && std::isdigit(static_cast<unsigned char>(body[j])) != 0) ++j;
    const auto run = body.substr(i, j - i);
    if (!has_separator && run.size() > 1) {
      for (const char d : run) {
        if (d == '0') bad_text(whole, "points are numbered from 1");
        pts.push_back(static_cast<std::uint32_t>(d - '1'));
      }
    } else {
      const unsigned long v = std::stoul(std::string(run));
      if (v == 0) bad_text(whole, "points are numbered from 1");
      pts.push_back(static_cast<std::uint32_t>(v - 1));
    }
    i = j;
  }
  std::vector<std::uint32_t> sorted = pts;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) bad_text(whole, "repeated point in a cycle");
  return pts;
}

}  // namespace

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (const auto x : images_) {
    if (x >= images_.size() || seen[x]) throw std::invalid_argument("Permutation: images are not a bijection");
    seen[x] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<std::uint32_t> im(degree);
  std::iota(im.begin(), im.end(), 0U);
  Permutation p;
  p.images_ = std::move(im);
  return p;
}

Permutation Permutation::parse(std::string_view text, std::size_t degree) {
  std::vector<std::vector<std::uint32_t>> cycles;
  std::size_t max_point = 0;
  std::size_t i = 0;
  bool any = false;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
      continue;
    }
    if (c != '(') bad_text(text, "expected '('");
    const auto close = text.find(')', i);
    if (close == std::string_view::npos) bad_text(text, "unbalanced parenthesis");
    auto pts = cycle_points(text.substr(i + 1, close - i - 1), text);
    for (const auto p : pts) max_point = std::max<std::size_t>(max_point, p + 1);
    cycles.push_back(std::move(pts));
    any = true;
    i = close + 1;
  }
  if (!any) bad_text(text, "empty");
  Permutation result = identity(std::max(degree, max_point));
  for (const auto& cyc : cycles) {
    if (cyc.size() < 2) continue;
    Permutation c = identity(result.degree());
    for (std::size_t k = 0; k < cyc.size(); ++k) c.images_[cyc[k]] = cyc[(k + 1) % cyc.size()];
    // Left-to-right application: the later cycle acts after the earlier one.
    result = c * result;
  }
  return result;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.images_.resize(images_.size());
  for (std::uint32_t i = 0; i < images_.size(); ++i) p.images_[images_[i]] = i;
  return p;
}

bool Permutation::is_identity() const noexcept {
  for (std::uint32_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

std::size_t Permutation::order() const {
  std::size_t o = 1;
  std::vector<bool> seen(images_.size(), false);
  for (std::uint32_t i = 0; i < images_.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (auto j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      ++len;
    }
    o = std::lcm(o, len);
  }
  return o;
}

Permutation Permutation::extended(std::size_t degree) const {
  if (degree < images_.size()) throw std::invalid_argument("Permutation::extended: degree would shrink");
  Permutation p = identity(degree);
  std::copy(images_.begin(), images_.end(), p.images_.begin());
  return p;
}

std::string Permutation::cycles() const {
  std::string out;
  std::vector<bool> seen(images_.size(), false);
  for (std::uint32_t i = 0; i < images_.size(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    out += '(';
    for (auto j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      if (j != i) out += ',';
      out += std::to_string(j + 1);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

Permutation operator*(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) throw std::invalid_argument("Permutation product: degree mismatch");
  Permutation r;
  r.images_.resize(q.images_.size());
  for (std::size_t i = 0; i < q.images_.size(); ++i) r.images_[i] = p.images_[q.images_[i]];
  return r;
}

bool operator<(const Permutation& a, const Permutation& b) noexcept {
  if (a.images_.size() != b.images_.size()) return a.images_.size() < b.images_.size();
  return a.images_ < b.images_;
}

std::ostream& operator<<(std::ostream& os, const Permutation& p) { return os << p.cycles(); }

std::vector<Permutation> parse_generators(std::string_view text, std::size_t degree) {
  // Strip one pair of enclosing brackets.
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b])) != 0) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1])) != 0) --e;
  if (b < e && text[b] == '[') {
    if (text[e - 1] != ']') bad_text(text, "unbalanced bracket");
    ++b;
    --e;
  }
  const auto body = text.substr(b, e - b);
  // Split on commas at parenthesis depth zero.
  std::vector<std::string_view> pieces;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '(') {
      if (depth != 0) bad_text(text, "nested parenthesis");
      ++depth;
    } else if (body[i] == ')') {
      if (depth != 1) bad_text(text, "unbalanced parenthesis");
      --depth;
    } else if (body[i] == ',' && depth == 0) {
      pieces.push_back(body.substr(start, i - start));
      start = i + 1;
    }
  }
  if (depth != 0) bad_text(text, "unbalanced parenthesis");
  pieces.push_back(body.substr(start));

  std::vector<Permutation> gens;
  std::size_t deg = degree;
  for (const auto piece : pieces) {
    if (piece.find_first_not_of(" \t\n") == std::string_view::npos) {
      if (pieces.size() == 1) break;  // empty list
      bad_text(text, "empty generator");
    }
    gens.push_back(Permutation::parse(piece));
    deg = std::max(deg, gens.back().degree());
  }
  for (auto& g : gens) g = g.extended(deg);
  return gens;
}

std::string format_generators(const std::vector<Permutation>& gens) {
  std::string out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i != 0) out += ',';
    out += gens[i].cycles();
  }
  return out;
}

}  // namespace pcoh::perm
