// Copyright 2026 The qcut Authors
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

#ifndef QCUT_ERRORS_HPP
#define QCUT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcut {

// Invalid arguments are reported with std::invalid_argument; everything below
// names a failure mode that callers may want to catch separately.

struct CutSetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a state vector would exceed the configured qubit limit.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IncompleteDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateReconstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDistributionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InsufficientBudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qcut

#endif  // QCUT_ERRORS_HPP
