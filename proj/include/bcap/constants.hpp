#pragma once

namespace bcap {

// Quadrature convention used throughout:
//   x = (a^dag + a)/sqrt(2), p = i(a^dag - a)/sqrt(2), [x,p] = i,
//   xxpp ordering (x_1..x_n, p_1..p_n), Omega = [[0, I],[-I, 0]],
//   vacuum covariance = identity, coherent amplitude alpha maps to the
//   displacement vector sqrt(2) [-Im a_1..-Im a_n, Re a_1..Re a_n].

// Squeezing parameter standing in for the infinite-squeezing homodyne limit.
// e^{-2 r_cap} ~ 4e-18 keeps every mutual-information formula within 1e-15
// of the ideal quadrature measurement while all matrices stay invertible.
inline constexpr double kHomodyneSqueeze = 20.0;

// Symmetric matrices are accepted as positive semidefinite down to this
// eigenvalue floor; worse violations are rejected.
inline constexpr double kPsdTolerance = 1e-9;

// Max entrywise deviation of S^T Omega S from Omega for a symplectic matrix.
inline constexpr double kSymplecticTolerance = 1e-9;

// Relative symmetry tolerance for covariance matrices.
inline constexpr double kSymmetryTolerance = 1e-12;

}  // namespace bcap
