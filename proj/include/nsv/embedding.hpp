#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "nsv/grid.hpp"

namespace nsv {

/// Constants of the functional inequalities used by the estimates.
///   C1: |b(u,v,w)| <= C1 |u|_V |v|_V |w|_V
///   C2: |b(u,v,w)| <= C2 |Au|^1/2 |u|_V^1/2 |v|_V |w|
///   C3: |b(u,v,w)| <= C3 |u|^1/2 |u|_V^1/2 |v|_V^1/2 |Av|^1/2 |w|
///   C4: |B(u)|_V' <= C4 |u|_V^2
///   C5: |B(u)| <= C5 |Au|^1/2 |u|_V^3/2
///   C6: |w|_V'^2 <= C6 |w|^2 (squared embedding constant)
///   C7, C7p: C7 |w|_V^2 <= |w|^2 + alpha^2 |w|_V^2 <= C7p |w|_V^2
struct EmbeddingConstants {
  double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0, C5 = 0.0, C6 = 0.0, C7 = 0.0, C7p = 0.0;
};

/// Defaults for a grid and Voigt parameter. C1 and C3 are sampled maxima on
/// the 2 pi box with a 1.5 safety factor, scaled by box size; C2 is a bound
/// computed on the grid; C4 = C1, C5 = C2; C6, C7, C7p are exact.
EmbeddingConstants default_embedding_constants(const Grid& grid, double alpha);

struct EmbeddingValidation {
  /// Largest observed ratio lhs / (rhs without constant), per inequality, in
  /// the order C1..C5, C6, C7 (lower bound: smallest ratio), C7p.
  std::array<double, 8> observed{};
  std::array<bool, 8> holds{};
  bool all_hold = false;
  std::string describe() const;
};

/// Randomised check of every inequality on `samples` random field triples.
EmbeddingValidation validate_embedding(const EmbeddingConstants& c, const Grid& grid,
                                       double alpha, int samples, std::uint64_t seed);

}  // namespace nsv
