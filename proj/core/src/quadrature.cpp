#include "ssalt/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ssalt::quad {

const GaussKronrod21& gk21() {
  static const GaussKronrod21 rule = [] {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using Gauss = boost::math::quadrature::gauss<double, 10>;
    GaussKronrod21 r;
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    for (std::size_t i = 0; i < r.abscissa.size(); ++i) {
      r.abscissa[i] = x[i];
      r.kronrod_weight[i] = wk[i];
      // The 10-point Gauss nodes sit at the odd Kronrod indices.
      r.gauss_weight[i] = (i % 2 == 1) ? wg[i / 2] : 0.0;
    }
    return r;
  }();
  return rule;
}

}  // namespace ssalt::quad
