// Copyright 2026 The dcqd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dcqd {

/// Operands disagree on qubit count or matrix dimension.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A register is larger than the dense engine supports.
struct SizeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed Pauli text. `position` is 1-based.
struct ParseError : std::invalid_argument {
    ParseError(const std::string &msg, std::size_t pos)
        : std::invalid_argument(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

/// An argument broke an operation's precondition (non-unitary U, incomplete Kraus set, ...).
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Stabilizer construction produced non-commuting or dependent generators.
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A measurement branch with zero Born probability was selected.
struct ImpossibleOutcome : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested feature lies outside what this library implements (k > 0 codes).
struct Unsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A density matrix failed its positivity check.
struct InvalidState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reconstruction was asked for without all required preprocessing settings.
struct IncompleteData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dcqd
