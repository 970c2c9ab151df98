// rislab: rate analysis and phase optimization for RIS-aided massive MIMO
// Copyright (C) 2026 The rislab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISLAB_ERROR_HPP
#define RISLAB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace rislab
{

enum class ErrorKind
{
    invalid_dimension,
    domain_error,
    degenerate_channel,
    degenerate_scenario,
    invalid_covariance,
    invalid_pair,
    config_error,
    io_error,
};

constexpr std::string_view to_string(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::invalid_dimension:
        return "invalid_dimension";
    case ErrorKind::domain_error:
        return "domain_error";
    case ErrorKind::degenerate_channel:
        return "degenerate_channel";
    case ErrorKind::degenerate_scenario:
        return "degenerate_scenario";
    case ErrorKind::invalid_covariance:
        return "invalid_covariance";
    case ErrorKind::invalid_pair:
        return "invalid_pair";
    case ErrorKind::config_error:
        return "config_error";
    case ErrorKind::io_error:
        return "io_error";
    }
    return "unknown";
}

/// Library-wide exception. The kind is what the CLI reports as the error class.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace rislab

#endif // RISLAB_ERROR_HPP
