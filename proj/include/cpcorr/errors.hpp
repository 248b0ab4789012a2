/*
 * Copyright 2026 The cpcorr authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CPCORR_ERRORS_HPP
#define CPCORR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cpcorr {

/// Numerical failure at runtime (confluence divergence, weight degeneracy,
/// coincident points).  Distinct from std::invalid_argument, which flags a
/// misuse of the interface.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct CoincidentPointsError : NumericalError {
    explicit CoincidentPointsError(const std::string& what) : NumericalError(what) {}
};

}  // namespace cpcorr

#endif
