// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dyto {

enum class ErrorKind {
  Storage,      // I/O failure on a path
  Format,       // malformed DYT1 or JSON input
  Validation,   // data violates a type invariant (non-finite, zero norm, ...)
  Input,        // operation precondition on shapes or counts
  Config,       // bad configuration value
  Schedule,     // infeasible merge schedule
  Computation,  // numeric failure during evaluation
  Spec,         // invalid synthetic video spec
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace dyto
