#include "qauth/stats.h"

#include <stdexcept>

#include <boost/math/distributions/beta.hpp>

namespace qauth {

Interval clopper_pearson(uint64_t successes, uint64_t trials, double confidence) {
  if (trials == 0) {
    return {0.0, 1.0};
  }
  if (successes > trials) {
    throw std::invalid_argument("clopper_pearson: more successes than trials");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("clopper_pearson: confidence must lie in (0, 1)");
  }
  double alpha = 1.0 - confidence;
  auto k = static_cast<double>(successes);
  auto n = static_cast<double>(trials);
  Interval ci;
  if (successes == 0) {
    ci.low = 0.0;
  } else {
    ci.low = boost::math::quantile(boost::math::beta_distribution<double>(k, n - k + 1.0), alpha / 2.0);
  }
  if (successes == trials) {
    ci.high = 1.0;
  } else {
    ci.high = boost::math::quantile(boost::math::beta_distribution<double>(k + 1.0, n - k), 1.0 - alpha / 2.0);
  }
  return ci;
}

}  // namespace qauth
