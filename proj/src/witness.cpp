#include <cmath>

#include "orlicz/measure.hpp"
#include "orlicz/norms.hpp"

namespace orlicz {

Rv strictly_positive_witness(const SpacePtr& space, const OrliczFunction& phi) {
  std::vector<double> values(space->size(), 0.0);
  int n = 0;
  for (const auto& block : space->blocks()) {
    ++n;
    const Rv chi = Rv::indicator(space, block);
    const double norm = luxemburg_norm(chi, phi).value;
    const double delta = std::ldexp(1.0, -n) / (1.0 + norm);
    for (size_t i : block) values[i] = delta;
  }
  return Rv(space, std::move(values));
}

}  // namespace orlicz
