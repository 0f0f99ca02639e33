#pragma once

#include <stdexcept>

namespace convoy {

// Asymmetry q in [0,1) and conditioned speed coordinate x in (0,1).
// c = x(1-x) is always derived from x, never set independently.
template <class S>
struct Params {
  S q;
  S x;
  S c;
};

template <class S>
Params<S> make_params(const S& q, const S& x) {
  if (!(q >= S(0) && q < S(1)))
    throw std::domain_error("params: q must lie in [0,1)");
  if (!(x > S(0) && x < S(1)))
    throw std::domain_error("params: x must lie in (0,1)");
  return Params<S>{q, x, x * (S(1) - x)};
}

using ModelParams = Params<double>;

}  // namespace convoy
