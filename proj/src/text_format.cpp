#include "inceprop/text_format.hpp"

#include <cstdio>

namespace inceprop {

std::string fmt17(double value) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace inceprop
