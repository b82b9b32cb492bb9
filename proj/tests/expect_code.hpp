#pragma once

#include <gtest/gtest.h>

#include <functional>

#include "subwit/errors.hpp"

namespace subwit::testkit {

// Error code thrown by f; records a failure when nothing is thrown.
inline ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no subwit::Error thrown";
  return ErrorCode::ParseError;
}

}  // namespace subwit::testkit
