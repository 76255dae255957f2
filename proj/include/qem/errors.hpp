#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qem {

// Math-domain violation: non-finite operands, division by a zero value,
// an elementary function outside its domain, or a non-positive medium.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Lex or parse failure. `offset` is the byte position in the source text.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Invalid scenario, option, or harness configuration.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qem
