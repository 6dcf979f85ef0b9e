// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ncq {

enum class ErrorKind {
    invalid_argument,
    parse,
    solver,
    enumeration_cap,
    infeasible_input,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string &what) { throw Error(ErrorKind::invalid_argument, what); }

inline void require(bool cond, const std::string &what) {
    if (!cond) fail(what);
}

}  // namespace ncq
