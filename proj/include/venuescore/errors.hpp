#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace venuescore {

// Bad configuration: missing files, invalid keys, inconsistent options.
// Mapped to exit code 1 by the CLI.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input data: malformed records, unresolvable references.
// Mapped to exit code 2 by the CLI.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed XML; carries the byte offset of the offending construct.
class ParseError : public DataError {
public:
    ParseError(const std::string &what, std::size_t byte_offset)
        : DataError(what + " (byte offset " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}

    std::size_t byte_offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Training produced a non-finite weight. Mapped to exit code 3 by the CLI.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string &what, int epoch, double learning_rate)
        : std::runtime_error(what + " (epoch " + std::to_string(epoch) +
                             ", learning rate " + std::to_string(learning_rate) + ")"),
          epoch_(epoch), lr_(learning_rate) {}

    int epoch() const { return epoch_; }
    double learning_rate() const { return lr_; }

private:
    int epoch_;
    double lr_;
};

} // namespace venuescore
