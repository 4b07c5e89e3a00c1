#include "cvqb/csv.hpp"

#include <cmath>
#include <cstdio>

namespace cvqb {

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

}  // namespace cvqb
