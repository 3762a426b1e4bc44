// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include "dyto/error.hpp"

namespace dyto {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Storage: return "storage";
    case ErrorKind::Format: return "format";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Input: return "input";
    case ErrorKind::Config: return "config";
    case ErrorKind::Schedule: return "schedule";
    case ErrorKind::Computation: return "computation";
    case ErrorKind::Spec: return "spec";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace dyto
