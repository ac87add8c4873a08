/*
 * Copyright 2026 The emocal Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EMOCAL_NUMERIC_H_
#define EMOCAL_NUMERIC_H_

#include <optional>
#include <string>
#include <string_view>

namespace emocal {

// Half-up rounding to two decimals. A 1e-9 nudge absorbs binary
// representation error so that e.g. 0.785 rounds to 0.79.
double Round2(double value);

// Fixed two-decimal rendering ("0.90").
std::string FormatFixed2(double value);

// Parses a plain decimal: optional sign, digits, optional fraction. No
// exponent, no inf/nan, no surrounding text.
std::optional<double> ParseDecimal(std::string_view text);

// Parses any finite floating-point literal accepted by strtod (used for
// lexicon values).
std::optional<double> ParseReal(std::string_view text);

}  // namespace emocal

#endif  // EMOCAL_NUMERIC_H_
