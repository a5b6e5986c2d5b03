// Copyright 2026 The vqc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file error.hpp
 * Exception hierarchy shared by every vqc component.
 */
#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace vqc {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A requested size exceeds what the simulator is willing to allocate.
class ResourceLimitError : public Error {
    using Error::Error;
};
/// Qubit or element index out of range.
class IndexError : public Error {
    using Error::Error;
};
/// Invalid argument value (missing angle, non-positive step, ...).
class ArgumentError : public Error {
    using Error::Error;
};
/// Malformed text input (Pauli strings, observables, circuit files).
class ParseError : public Error {
    using Error::Error;
};
/// A parameter reference that cannot be resolved against a binding.
class BindingError : public Error {
    using Error::Error;
};
class UnsupportedGateError : public Error {
    using Error::Error;
};
/// Tensor shapes of a request do not agree.
class ShapeError : public Error {
    using Error::Error;
};
/// Operation invoked in a state that does not allow it.
class StateError : public Error {
    using Error::Error;
};
class IoError : public Error {
    using Error::Error;
};

namespace detail {

template <class... Args> std::string concat(const Args &...args) {
    std::ostringstream oss;
    (oss << ... << args);
    return oss.str();
}

template <class E, class... Args>
[[noreturn]] void raise(const Args &...args) {
    throw E(concat(args...));
}

} // namespace detail
} // namespace vqc
