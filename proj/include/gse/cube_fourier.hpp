#pragma once

#include <bit>
#include <span>
#include <stdexcept>
#include <vector>

#include "lattice.hpp"

namespace gse {

/// chi_S evaluated at the corner with bitmask b: corner bit i set means
/// x_i = +1, clear means x_i = -1 (the cube base maps to (-1,...,-1)).
inline int chi(unsigned S, unsigned b) {
  // product over i in S of x_i = (-1)^{#(i in S with b_i = 0)}
  return (std::popcount(S & ~b) % 2 == 0) ? 1 : -1;
}

/// Boolean Fourier coefficients of one cube: coeffs(S) = 2^{-d} sum_b F(b) chi_S(b).
/// Subset S is a bitmask with axis i <-> bit i, shared repo-wide.
struct CubeCoeffs {
  std::vector<int> y;          // cube base point
  std::vector<double> coeffs;  // indexed by subset bitmask, size 2^d
};

inline CubeCoeffs cube_coefficients(const LatticeFunction& f,
                                    std::span<const int> y) {
  const int d = f.box.dim;
  const unsigned nc = 1u << d;
  CubeCoeffs out;
  out.y.assign(y.begin(), y.end());
  out.coeffs.assign(nc, 0.0);
  std::vector<double> val(nc);
  for (unsigned b = 0; b < nc; ++b) val[b] = f.corner(y, b);
  const double inv = 1.0 / nc;
  for (unsigned S = 0; S < nc; ++S) {
    double acc = 0.0;
    for (unsigned b = 0; b < nc; ++b) acc += val[b] * chi(S, b);
    out.coeffs[S] = acc * inv;
  }
  return out;
}

/// Corner values from coefficients: F(b) = sum_S coeffs(S) chi_S(b).
inline std::vector<double> reconstruct_corners(const CubeCoeffs& c) {
  const unsigned nc = static_cast<unsigned>(c.coeffs.size());
  std::vector<double> val(nc, 0.0);
  for (unsigned b = 0; b < nc; ++b)
    for (unsigned S = 0; S < nc; ++S) val[b] += c.coeffs[S] * chi(S, b);
  return val;
}

/// Level aggregates m_k = sum_{|S|=k} sum_y coeffs_y(S)^2 over all cubes of
/// the box (periodic: every base with wrap; dirichlet: fully-interior cubes).
struct MkAggregates {
  std::vector<double> m;  // m_0 .. m_d
};

inline MkAggregates aggregate_mk(const LatticeFunction& f) {
  const int d = f.box.dim;
  MkAggregates out;
  out.m.assign(d + 1, 0.0);
  std::vector<int> y(d);
  const std::int64_t nc = f.box.cube_count();
  for (std::int64_t c = 0; c < nc; ++c) {
    f.box.cube_base(c, y);
    CubeCoeffs cc = cube_coefficients(f, y);
    for (unsigned S = 0; S < cc.coeffs.size(); ++S)
      out.m[std::popcount(S)] += cc.coeffs[S] * cc.coeffs[S];
  }
  return out;
}

}  // namespace gse
