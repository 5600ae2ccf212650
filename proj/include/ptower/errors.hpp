#pragma once

#include <stdexcept>
#include <string>

namespace ptower {

// Error taxonomy shared by the library and the CLI exit codes:
//   user_input_error -> 1, capacity_error -> 2, theory_violation -> 3.
enum class ErrorClass { UserInput = 1, Capacity = 2, TheoryViolation = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string location, std::string message, std::string hint)
        : std::runtime_error(format(cls, location, message, hint)),
          cls_(cls),
          location_(std::move(location)),
          message_(std::move(message)),
          hint_(std::move(hint)) {}

    ErrorClass error_class() const { return cls_; }
    const std::string& location() const { return location_; }
    const std::string& message() const { return message_; }
    const std::string& hint() const { return hint_; }

    static const char* class_name(ErrorClass cls) {
        switch (cls) {
            case ErrorClass::UserInput: return "user-input";
            case ErrorClass::Capacity: return "capacity";
            case ErrorClass::TheoryViolation: return "theory-violation";
        }
        return "unknown";
    }

private:
    static std::string format(ErrorClass cls, const std::string& location,
                              const std::string& message, const std::string& hint) {
        std::string s = "[";
        s += class_name(cls);
        s += "] ";
        if (!location.empty()) {
            s += location;
            s += ": ";
        }
        s += message;
        if (!hint.empty()) {
            s += " (hint: ";
            s += hint;
            s += ")";
        }
        return s;
    }

    ErrorClass cls_;
    std::string location_;
    std::string message_;
    std::string hint_;
};

struct UserInputError : Error {
    UserInputError(std::string location, std::string message, std::string hint)
        : Error(ErrorClass::UserInput, std::move(location), std::move(message), std::move(hint)) {}
};

struct CapacityError : Error {
    CapacityError(std::string location, std::string message, std::string hint)
        : Error(ErrorClass::Capacity, std::move(location), std::move(message), std::move(hint)) {}
};

// Raised when a computation contradicts a theorem the construction relies on.
// Seeing one of these means a bug in this library, not bad input.
struct TheoryViolation : Error {
    TheoryViolation(std::string location, std::string message)
        : Error(ErrorClass::TheoryViolation, std::move(location), std::move(message),
                "this indicates an internal bug; please report the input file") {}
};

}  // namespace ptower
