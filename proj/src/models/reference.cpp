#include <cmath>

#include "thermofid/errors.hpp"
#include "thermofid/models.hpp"
#include "thermofid/numerics.hpp"

namespace thermofid::models {

double TwoLevelModel::log_z(double beta, double lambda) const {
  return numerics::log_2cosh(beta * lambda);
}

SchottkyModel::SchottkyModel(double degeneracy) : degeneracy_(degeneracy) {
  if (!(degeneracy_ > 0.0)) throw DomainError("schottky: degeneracy must be > 0");
}

double SchottkyModel::log_z(double beta, double lambda) const {
  const double x = -beta * lambda;
  const double lg = std::log(degeneracy_);
  // ln(1 + g e^x), stable on both sides.
  if (x + lg > 0.0) return x + lg + std::log1p(std::exp(-(x + lg)));
  return std::log1p(std::exp(x + lg));
}

}  // namespace thermofid::models
