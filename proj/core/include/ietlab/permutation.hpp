#pragma once

#include <string>
#include <vector>

namespace ietlab {

// Permutation of {1..d} in one-line notation: images()[i-1] = pi(i).
// claims: irreducible-permutations
class Permutation {
 public:
  // Validates that `images` is a bijection of {1..d}; throws NotAPermutation.
  explicit Permutation(std::vector<int> images);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i - 1]; }
  const std::vector<int>& images() const { return images_; }

  Permutation inverse() const;

  // pi({1..k}) != {1..k} for every k < d.
  bool irreducible() const;

  // Combinatorial halves of the two induction operations; length data does
  // not enter. rauzy_a applies when l_d < l_{pi^-1(d)}, rauzy_b when
  // l_d > l_{pi^-1(d)}. Both require pi(d) != d.
  Permutation rauzy_a() const;
  Permutation rauzy_b() const;

  static Permutation identity(int d);
  // Parses space-separated images, e.g. "3 2 1".
  static Permutation parse(const std::string& text);
  std::string format() const;

  bool operator==(const Permutation& o) const { return images_ == o.images_; }
  bool operator<(const Permutation& o) const { return images_ < o.images_; }

 private:
  std::vector<int> images_;
};

}  // namespace ietlab
