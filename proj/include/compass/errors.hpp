/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace compass {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number (0 if unknown).
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Arguments outside an operation's domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Non-finite values, non-hermitian residues and similar numerical faults.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// A one- or two-parameter screening optimization failed to converge.
class ScreeningError : public Error {
public:
  using Error::Error;
};

/// Inconsistent inputs while assembling an ansatz.
class ConstructionError : public Error {
public:
  using Error::Error;
};

} // namespace compass
