#pragma once

#include <string>

namespace triwork {

// 9 significant digits, '.' decimal separator, independent of the C locale.
std::string format_number(double v);

} // namespace triwork
