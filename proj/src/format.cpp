#include "triwork/format.hpp"

#include <charconv>

namespace triwork {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

} // namespace triwork
