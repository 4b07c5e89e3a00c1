#pragma once

#include <optional>
#include <string>

namespace cvqb {

/// 12 significant digits, '.' separator, negative zero printed as 0, NaN as "".
[[nodiscard]] std::string format_number(double v);
[[nodiscard]] std::string format_number(const std::optional<double>& v);

}  // namespace cvqb
