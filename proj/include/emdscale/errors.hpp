#pragma once

#include <stdexcept>
#include <string>

namespace emdscale {

// Base class for all library errors. The CLI maps subclasses onto exit codes:
// input/format problems, numeric/degenerate problems, ensemble failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input too short / empty for the requested statistic.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

// Regression abscissae carry no variance.
class SingularFitError : public Error {
public:
    using Error::Error;
};

// Signal lacks the extrema needed to build envelopes.
class NotSiftableError : public Error {
public:
    using Error::Error;
};

// Component has no zero crossings, so no period.
class UndefinedPeriodError : public Error {
public:
    using Error::Error;
};

// Fewer usable components than a scaling fit requires.
class InsufficientComponentsError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

// Guard against divisions that cannot happen on sane data.
class NumericError : public Error {
public:
    using Error::Error;
};

// Unparseable input file; message carries the row number.
class FormatError : public Error {
public:
    using Error::Error;
};

// Parseable file whose content violates a constraint (e.g. non-positive
// price under log transformation).
class DataError : public Error {
public:
    using Error::Error;
};

// Too many Monte-Carlo replicates failed.
class EnsembleError : public Error {
public:
    using Error::Error;
};

} // namespace emdscale
