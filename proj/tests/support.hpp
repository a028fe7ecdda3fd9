#pragma once

#include <doctest.h>

#include <cmath>
#include <functional>
#include <optional>

#include "inceprop/errors.hpp"

namespace testing {

inline std::optional<inceprop::ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const inceprop::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing

#define CHECK_ERROR_CODE(expr, expected)                               \
  CHECK(::testing::code_of([&] { (void)(expr); }) ==                   \
        std::optional<inceprop::ErrorCode>(inceprop::ErrorCode::expected))
