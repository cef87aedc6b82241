#pragma once

#include <stdexcept>
#include <string>

namespace pvscan {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define PVSCAN_DEFINE_ERROR(Name)                                  \
    struct Name : Error {                                          \
        explicit Name(const std::string& what) : Error(what) {}    \
    }

// imagery
PVSCAN_DEFINE_ERROR(UnsupportedFormat);
PVSCAN_DEFINE_ERROR(MalformedHeader);
PVSCAN_DEFINE_ERROR(TruncatedData);

// edgedetect
PVSCAN_DEFINE_ERROR(NonPositiveSigma);
PVSCAN_DEFINE_ERROR(BadThresholds);

// houghgrid
PVSCAN_DEFINE_ERROR(NoPanels);

// rectify
PVSCAN_DEFINE_ERROR(DegenerateQuad);

// hotspot
PVSCAN_DEFINE_ERROR(GridTooFine);
PVSCAN_DEFINE_ERROR(NoValidCells);

// evalharness
PVSCAN_DEFINE_ERROR(BadTolerances);
PVSCAN_DEFINE_ERROR(InconsistentCounts);
PVSCAN_DEFINE_ERROR(UnmatchedImage);

// synthgen
PVSCAN_DEFINE_ERROR(InvalidSpec);

// configuration / file plumbing
PVSCAN_DEFINE_ERROR(ConfigError);
PVSCAN_DEFINE_ERROR(ParseError);
PVSCAN_DEFINE_ERROR(IoError);

// generic precondition violations that have no named error in the contracts
PVSCAN_DEFINE_ERROR(InvalidArgument);

#undef PVSCAN_DEFINE_ERROR

}  // namespace pvscan
