#include "htsgd/core/problem.hpp"

#include <utility>

namespace htsgd {

Oracle deterministic_oracle(Gradient gradient) {
  return [gradient = std::move(gradient)](const Vector& x, RandomStream&, const OracleQuery&) {
    return gradient(x);
  };
}

Oracle counting_oracle(Oracle inner, long* counter) {
  return [inner = std::move(inner), counter](const Vector& x, RandomStream& rng,
                                             const OracleQuery& q) {
    ++*counter;
    return inner(x, rng, q);
  };
}

}  // namespace htsgd
