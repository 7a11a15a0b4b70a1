#include "mlebound/errors.hpp"

namespace mlebound {

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::NotPD: return "NotPD";
        case ErrorKind::NonPDFisher: return "NonPDFisher";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DegenerateData: return "DegenerateData";
        case ErrorKind::DegenerateDesign: return "DegenerateDesign";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::NonInterior: return "NonInterior";
        case ErrorKind::ConditioningStarved: return "ConditioningStarved";
        case ErrorKind::MissingClosedForm: return "MissingClosedForm";
        case ErrorKind::MissingSupportRadius: return "MissingSupportRadius";
        case ErrorKind::NonAdmissible: return "NonAdmissible";
        case ErrorKind::GateFailed: return "GateFailed";
        case ErrorKind::TooManyRejections: return "TooManyRejections";
        case ErrorKind::NonPositiveValue: return "NonPositiveValue";
        case ErrorKind::EmptyConditioningEvent: return "EmptyConditioningEvent";
        case ErrorKind::Config: return "ConfigError";
        case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

}  // namespace mlebound
