#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace cropsense {

/// Expert or farmer diagnosis. Enum order is the confusion-matrix row/column
/// order used in exports.
enum class Diagnosis { CBB, CBSD, CGM, CMD, None };

inline constexpr std::array<Diagnosis, 5> kDiagnoses{Diagnosis::CBB, Diagnosis::CBSD, Diagnosis::CGM, Diagnosis::CMD,
                                                     Diagnosis::None};

std::string_view to_string(Diagnosis d) noexcept;
/// Case-insensitive; also accepts "healthy" and "none" for None.
std::optional<Diagnosis> parse_diagnosis(std::string_view text);

}  // namespace cropsense
