#pragma once

#include <stdexcept>
#include <string>

namespace picrec {

// Malformed text input (picture or deck file). line is 1-based; 0 means the
// problem is not tied to a single line.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

// Structurally valid request that exceeds what this build will compute
// (e.g. exhaustive classification past the supported picture size).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Deck sizes the growth algorithm cannot drive (k < n < 3k). Callers that
// need an answer in this range should use the exhaustive oracle instead.
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace picrec
