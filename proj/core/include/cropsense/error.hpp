#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cropsense {

enum class Errc {
    // registry
    MalformedProfile,
    QuotaConflict,
    InsufficientDevices,
    NoVotes,
    InvalidVote,
    UnknownAgent,
    // ingestion
    AgentNotActive,
    MissingGeotag,
    InvalidCoordinates,
    InvalidLabel,
    DuplicateImage,
    UnknownReport,
    StoreLocked,
    AddressInUse,
    // incentives
    InvalidOrdinal,
    HistoryGap,
    InvalidPeriod,
    InvalidAmount,
    AccountNotFound,
    ProviderUnavailable,
    InsufficientFloat,
    // analytics
    InvalidCellSize,
    OutOfBounds,
    UnresolvableAgent,
    // simulator / config / io
    ConfigInvalid,
    ParseError,
    IoError,
};

std::string_view to_string(Errc code) noexcept;

/// True for errors caused by bad caller input (files, flags, records) rather
/// than by runtime conditions. The CLI maps these to exit status 2.
bool is_validation_error(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace cropsense
