#pragma once

#include <stdexcept>
#include <string>

namespace zfscale {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define ZFSCALE_ERROR(Name)                                                   \
    struct Name : Error {                                                     \
        explicit Name(const std::string& what) : Error(#Name, what) {}        \
    }

ZFSCALE_ERROR(NonConvergence);
ZFSCALE_ERROR(DimensionTooLarge);
ZFSCALE_ERROR(NonAnalyticInput);
ZFSCALE_ERROR(ZeroOutOfStrip);
ZFSCALE_ERROR(NonClosedUnderReflection);
ZFSCALE_ERROR(PoleHit);
ZFSCALE_ERROR(MasslessInfraredDivergent);
ZFSCALE_ERROR(WordTooLong);
ZFSCALE_ERROR(InvalidWord);
ZFSCALE_ERROR(ParticleCapExceeded);
ZFSCALE_ERROR(SupportsOverlap);
ZFSCALE_ERROR(SelectionRuleViolation);
ZFSCALE_ERROR(FitIllConditioned);
ZFSCALE_ERROR(InvalidArgument);
ZFSCALE_ERROR(ConfigParseError);

#undef ZFSCALE_ERROR

}  // namespace zfscale
