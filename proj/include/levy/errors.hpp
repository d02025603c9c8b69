#pragma once

#include <stdexcept>
#include <string>

namespace levy {

/** Invalid user-supplied configuration: bad parameter values, unknown names,
 *  malformed config files. CLI maps this to exit code 2. */
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/** Numerical-domain violation detected at evaluation time: contour outside the
 *  analyticity strip, integrand without enough decay, probability estimates
 *  outside [0,1] beyond tolerance. CLI maps this to exit code 3. */
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace levy
