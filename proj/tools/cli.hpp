/*
 * Copyright 2026 The gaugeblend Authors.
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

#ifndef GAUGEBLEND_TOOLS_CLI_HPP_
#define GAUGEBLEND_TOOLS_CLI_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace gaugeblend::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericError = 3 };

// Runs one subcommand: synth, features, experiment, importance or report.
int dispatch(int argc, const char* const* argv);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace gaugeblend::cli

#endif  // GAUGEBLEND_TOOLS_CLI_HPP_
