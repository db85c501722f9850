#pragma once

#include "compnet/topology.hpp"

namespace compnet {

/// Nodes and weights such that sum_i w_i f(t_i) approximates E[f(Z)] for
/// Z ~ Normal(0, 1); exact for polynomials of degree < 2n.
struct GaussHermite {
  Vector nodes;
  Vector weights;
};

/// Golub-Welsch on the probabilists' Hermite recurrence.
GaussHermite gauss_hermite(int n);

}  // namespace compnet
