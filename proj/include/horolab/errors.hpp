#pragma once

#include <stdexcept>
#include <string>

namespace horolab {

// Error taxonomy used across the library. Each condition named by a module
// contract gets its own type so callers can catch precisely.

struct NotInCone : std::runtime_error {
    explicit NotInCone(const std::string& what) : std::runtime_error(what) {}
};

struct SingularInput : std::runtime_error {
    explicit SingularInput(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionTooLarge : std::runtime_error {
    explicit DimensionTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct Overflow : std::runtime_error {
    explicit Overflow(const std::string& what) : std::runtime_error(what) {}
};

struct EnumerationOverflow : std::runtime_error {
    explicit EnumerationOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct ReferenceMeanMissing : std::runtime_error {
    explicit ReferenceMeanMissing(const std::string& what) : std::runtime_error(what) {}
};

struct BlockTooLarge : std::runtime_error {
    explicit BlockTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedRank : std::runtime_error {
    explicit UnsupportedRank(const std::string& what) : std::runtime_error(what) {}
};

struct BoundTooSmall : std::runtime_error {
    explicit BoundTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedVariety : std::runtime_error {
    explicit UnsupportedVariety(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidConfig : std::runtime_error {
    explicit InvalidConfig(const std::string& what) : std::runtime_error(what) {}
};

struct EmptySeries : std::runtime_error {
    explicit EmptySeries(const std::string& what) : std::runtime_error(what) {}
};

} // namespace horolab
