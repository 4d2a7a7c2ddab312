#include "pensive/common.hpp"

namespace pensive {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::CornerUndefined: return "CornerUndefined";
        case ErrorKind::InvalidAngle: return "InvalidAngle";
        case ErrorKind::CornerHit: return "CornerHit";
        case ErrorKind::InvalidParameter: return "InvalidParameter";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::NotTransitive: return "NotTransitive";
        case ErrorKind::Ambiguous: return "Ambiguous";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::InvalidPoint: return "InvalidPoint";
        case ErrorKind::HypothesisFailed: return "HypothesisFailed";
        case ErrorKind::BoundarySingularity: return "BoundarySingularity";
        case ErrorKind::DiagonalSingularity: return "DiagonalSingularity";
        case ErrorKind::EventStop: return "EventStop";
        case ErrorKind::ReportIncomplete: return "ReportIncomplete";
        case ErrorKind::NotExterior: return "NotExterior";
        case ErrorKind::AmbiguousEvent: return "AmbiguousEvent";
        case ErrorKind::EmptyPlot: return "EmptyPlot";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace pensive
