#include "maxproj/constants.hpp"

#include <cmath>

namespace maxproj {

int gerzon_bound(Field field, int n) {
  if (n < 1) fail(Errc::InvalidDimension, "gerzon_bound needs n >= 1");
  return field == Field::Real ? n * (n + 1) / 2 : n * n;
}

double welch_angle(Field field, int n) {
  if (n < 2) fail(Errc::InvalidDimension, "welch_angle needs n >= 2");
  return field == Field::Real ? 1.0 / std::sqrt(n + 2.0) : 1.0 / std::sqrt(n + 1.0);
}

double delta_bound(Field field, int n) {
  if (n < 1) fail(Errc::InvalidDimension, "delta_bound needs n >= 1");
  if (field == Field::Real)
    return 2.0 / (n + 1.0) * (1.0 + (n - 1.0) / 2.0 * std::sqrt(n + 2.0));
  return 1.0 / n * (1.0 + (n - 1.0) * std::sqrt(n + 1.0));
}

double rescale_constant(Field field, int n) {
  if (n < 2) fail(Errc::InvalidDimension, "rescale_constant needs n >= 2");
  return n / (static_cast<double>(gerzon_bound(field, n)) * delta_bound(field, n));
}

double sign_reconstruction_identity(Field field, int n) {
  const double d = gerzon_bound(field, n);
  const double phi = welch_angle(field, n);
  const double delta = delta_bound(field, n);
  return (d - n + n * phi) / (d * delta * phi);
}

double bound_closing_expression(Field field, int n) {
  const double d = gerzon_bound(field, n);
  const double phi = welch_angle(field, n);
  return 1.0 / (2.0 * phi) + n / (2.0 * phi) * (phi * phi - (1.0 - phi) * (1.0 - phi) / d);
}

}  // namespace maxproj
