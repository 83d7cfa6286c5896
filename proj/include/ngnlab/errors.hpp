#pragma once

#include <stdexcept>
#include <string>

namespace ngnlab {

// Error taxonomy shared by all modules. Everything derives from Error so
// callers (notably the CLI) can map failures to exit codes in one place.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("io: " + msg) {}
};

class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error("format: " + msg) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error("dimension: " + msg) {}
};

class PaletteError : public Error {
public:
    explicit PaletteError(const std::string& msg) : Error("palette: " + msg) {}
};

class EmptyDataError : public Error {
public:
    explicit EmptyDataError(const std::string& msg) : Error("empty data: " + msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("config: " + msg) {}
};

class ManifestError : public Error {
public:
    explicit ManifestError(const std::string& msg) : Error("manifest: " + msg) {}
};

class DegenerateHistogramError : public Error {
public:
    explicit DegenerateHistogramError(const std::string& msg)
        : Error("degenerate histogram: " + msg) {}
};

class DegenerateLabelsError : public Error {
public:
    explicit DegenerateLabelsError(const std::string& msg)
        : Error("degenerate labels: " + msg) {}
};

class SplitError : public Error {
public:
    explicit SplitError(const std::string& msg) : Error("split: " + msg) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error("numeric: " + msg) {}
};

class EmptyComparisonError : public Error {
public:
    explicit EmptyComparisonError(const std::string& msg)
        : Error("empty comparison: " + msg) {}
};

// Wraps a failure with the pipeline stage that raised it.
class StageError : public Error {
public:
    StageError(const std::string& stage, const std::string& msg)
        : Error("stage " + stage + ": " + msg), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace ngnlab
