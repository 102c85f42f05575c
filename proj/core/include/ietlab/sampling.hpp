#pragma once

#include <vector>

#include "ietlab/rational.hpp"
#include "ietlab/rng.hpp"

namespace ietlab {

// Uniform point of the open simplex {l_i > 0, sum = 1} on the lattice with
// denominator 2^bits: spacings of d-1 sorted draws, redrawn on collisions.
// Normalizing d independent uniforms would NOT be uniform on the simplex;
// spacings are, exactly, over lattice compositions.
std::vector<Rational> sample_simplex(Rng& rng, int d, int bits);

// Uniform rational in [0,1) with denominator 2^bits.
Rational sample_point(Rng& rng, int bits);

}  // namespace ietlab
