#include "ietlab/permutation.hpp"

#include <sstream>

#include "ietlab/errors.hpp"

namespace ietlab {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int d = static_cast<int>(images_.size());
  if (d < 1) throw NotAPermutation("permutation must have at least one symbol");
  std::vector<bool> seen(d + 1, false);
  for (int v : images_) {
    if (v < 1 || v > d || seen[v])
      throw NotAPermutation("images are not a bijection of {1..d}");
    seen[v] = true;
  }
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (int i = 1; i <= size(); ++i) inv[images_[i - 1] - 1] = i;
  return Permutation(std::move(inv));
}

bool Permutation::irreducible() const {
  const int d = size();
  int max_seen = 0;
  for (int k = 1; k < d; ++k) {
    max_seen = std::max(max_seen, images_[k - 1]);
    if (max_seen == k) return false;
  }
  return true;
}

// Derived from the first-return construction: the interval I_alpha whose
// image lies rightmost is split, the sliver inherits the image slot of I_d.
Permutation Permutation::rauzy_a() const {
  const int d = size();
  const int alpha = inverse()(d);
  if ((*this)(d) == d)
    throw ReduciblePermutation("pi(d) = d: induction undefined");
  std::vector<int> out(d);
  for (int t = 1; t <= d; ++t) {
    int src = (t < alpha) ? t : (t == alpha) ? alpha : (t == alpha + 1) ? d : t - 1;
    out[t - 1] = images_[src - 1];
  }
  return Permutation(std::move(out));
}

// The image of I_d splits; its right part receives the (removed-from-the-end)
// image of I_alpha, shifting every rank above pi(d) up by one.
Permutation Permutation::rauzy_b() const {
  const int d = size();
  const int alpha = inverse()(d);
  if ((*this)(d) == d)
    throw ReduciblePermutation("pi(d) = d: induction undefined");
  const int pd = images_[d - 1];
  std::vector<int> out(d);
  for (int i = 1; i <= d; ++i) {
    if (i == alpha)
      out[i - 1] = pd + 1;
    else if (i == d)
      out[i - 1] = pd;
    else
      out[i - 1] = images_[i - 1] + (images_[i - 1] > pd ? 1 : 0);
  }
  return Permutation(std::move(out));
}

Permutation Permutation::identity(int d) {
  std::vector<int> v(d);
  for (int i = 0; i < d; ++i) v[i] = i + 1;
  return Permutation(std::move(v));
}

Permutation Permutation::parse(const std::string& text) {
  std::istringstream ss(text);
  std::vector<int> v;
  int x;
  while (ss >> x) v.push_back(x);
  if (!ss.eof()) throw ParseError("bad permutation literal '" + text + "'");
  return Permutation(std::move(v));
}

std::string Permutation::format() const {
  std::string out;
  for (int i = 0; i < size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(images_[i]);
  }
  return out;
}

}  // namespace ietlab
