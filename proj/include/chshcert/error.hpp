#pragma once

#include <stdexcept>
#include <string>

namespace chshcert {

// Library-wide exception. The kind distinguishes contract violations so
// callers (and the CLI exit-code mapping) can react without string matching.
class Error : public std::runtime_error {
public:
    enum class Kind {
        Shape,        // matrix/tensor dimension mismatch
        Size,         // exceeds the supported dimension envelope
        Window,       // pair window outside the truncation
        Ordering,     // pair indices not strictly increasing
        Symmetry,     // Hermiticity violated beyond tolerance
        Norm,         // vector/state norm outside tolerance
        Probability,  // mixture weights invalid
        Degenerate,   // all-zero state
        Index,        // basis index out of range
        Arity,        // wrong number of subsystems
        AbsentBlock,  // operation on a zero-weight block
        Input,        // malformed external input
    };

    Error(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

} // namespace chshcert
