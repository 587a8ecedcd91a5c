#include "cropsense/error.hpp"

namespace cropsense {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::MalformedProfile: return "MalformedProfile";
    case Errc::QuotaConflict: return "QuotaConflict";
    case Errc::InsufficientDevices: return "InsufficientDevices";
    case Errc::NoVotes: return "NoVotes";
    case Errc::InvalidVote: return "InvalidVote";
    case Errc::UnknownAgent: return "UnknownAgent";
    case Errc::AgentNotActive: return "AgentNotActive";
    case Errc::MissingGeotag: return "MissingGeotag";
    case Errc::InvalidCoordinates: return "InvalidCoordinates";
    case Errc::InvalidLabel: return "InvalidLabel";
    case Errc::DuplicateImage: return "DuplicateImage";
    case Errc::UnknownReport: return "UnknownReport";
    case Errc::StoreLocked: return "StoreLocked";
    case Errc::AddressInUse: return "AddressInUse";
    case Errc::InvalidOrdinal: return "InvalidOrdinal";
    case Errc::HistoryGap: return "HistoryGap";
    case Errc::InvalidPeriod: return "InvalidPeriod";
    case Errc::InvalidAmount: return "InvalidAmount";
    case Errc::AccountNotFound: return "AccountNotFound";
    case Errc::ProviderUnavailable: return "ProviderUnavailable";
    case Errc::InsufficientFloat: return "InsufficientFloat";
    case Errc::InvalidCellSize: return "InvalidCellSize";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::UnresolvableAgent: return "UnresolvableAgent";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

bool is_validation_error(Errc code) noexcept {
    switch (code) {
    case Errc::MalformedProfile:
    case Errc::QuotaConflict:
    case Errc::NoVotes:
    case Errc::InvalidVote:
    case Errc::InvalidOrdinal:
    case Errc::HistoryGap:
    case Errc::InvalidPeriod:
    case Errc::InvalidCellSize:
    case Errc::ConfigInvalid:
    case Errc::ParseError:
        return true;
    default:
        return false;
    }
}

}  // namespace cropsense
