// Derivatives of isotropic tensor functions F(A) = sum_a f(x_a) M_a built
// from an eigenframe, with divided differences switching to their limits
// at (near-)repeated eigenvalues.

#pragma once

#include <array>

#include "viscokit/tensor.hpp"

namespace viscokit {

// per-eigenvalue samples of the generating scalar function
struct SpectralFn {
  std::array<double, 3> f{};    // f(x_a)
  std::array<double, 3> df{};   // f'(x_a)
  std::array<double, 3> ddf{};  // f''(x_a)
};

// F(A) itself
SymTensor2 spectral_apply(const Spectral3& s, const std::array<double, 3>& f);

// dF/dA.  `x` are the eigenvalues the function is sampled at (they may
// differ from s.eigenvalues, e.g. the map from strain eigenvalues to
// squared stretches); the frame and cluster pattern come from `s`.
Tensor4 spectral_first_derivative(const Spectral3& s, const std::array<double, 3>& x,
                                  const SpectralFn& fn);

// d2F/dA dA, fully pair-symmetric for functions generated by a potential.
Tensor6 spectral_second_derivative(const Spectral3& s, const std::array<double, 3>& x,
                                   const SpectralFn& fn);

}  // namespace viscokit
