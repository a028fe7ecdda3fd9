#pragma once

#include <string>

namespace inceprop {

/// Round-trippable decimal text (17 significant digits); all CSV output
/// goes through this so identical runs produce identical bytes.
std::string fmt17(double value);

}  // namespace inceprop
