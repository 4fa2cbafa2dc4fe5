#pragma once

#include <stdexcept>
#include <string>

namespace matchfree {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MATCHFREE_ERROR(Name)                 \
    class Name : public Error {               \
    public:                                   \
        using Error::Error;                   \
    }

MATCHFREE_ERROR(InvalidParams);
MATCHFREE_ERROR(EmptySetPresent);
MATCHFREE_ERROR(UnsupportedResidue);
MATCHFREE_ERROR(InvalidAnchor);
MATCHFREE_ERROR(NotUpSet);
MATCHFREE_ERROR(MatchingTooLarge);
MATCHFREE_ERROR(StagePreconditionFailed);

#undef MATCHFREE_ERROR

/// Malformed family / permutation file. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace matchfree
