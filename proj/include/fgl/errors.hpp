#pragma once

#include <stdexcept>
#include <string>

namespace fgl {

// Raised when a result cannot be certified at the working p-adic precision
// (valuation bound markers straddling a decision threshold, exhausted digits).
class precision_error : public std::runtime_error {
public:
    precision_error(const std::string& what, long long degree = -1, int prec = -1)
        : std::runtime_error(what), degree(degree), prec(prec) {}
    long long degree;  // offending series degree, -1 when not applicable
    int prec;          // certified digits available at the failure, -1 when n/a
};

}  // namespace fgl
